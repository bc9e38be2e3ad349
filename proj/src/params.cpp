#include "eitnoise/params.hpp"

#include <cmath>
#include <string>

#include "eitnoise/error.hpp"

namespace eit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateSteadyState: return "DegenerateSteadyState";
    case ErrorKind::DivisionDegenerate: return "DivisionDegenerate";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::DegenerateConditioning: return "DegenerateConditioning";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidParams, what);
}

}  // namespace

void validate(const AtomicParams& p) {
  const double values[] = {p.g,        p.N,          p.omega_c.real(), p.omega_c.imag(),
                           p.gamma_b,  p.gamma_c,    p.gamma_ba,       p.gamma_ac,
                           p.gamma_bc_prime,         p.gamma_bc_popexch,
                           p.gamma_total, p.length,  p.c_light};
  for (double v : values) require(std::isfinite(v), "parameters must be finite");
  require(p.g >= 0.0, "g must be >= 0");
  require(p.N >= 0.0, "N must be >= 0");
  require(p.gamma_b >= 0.0, "gamma_b must be >= 0");
  require(p.gamma_c >= 0.0, "gamma_c must be >= 0");
  require(p.gamma_ba >= 0.0, "gamma_ba must be >= 0");
  require(p.gamma_ac >= 0.0, "gamma_ac must be >= 0");
  require(p.gamma_bc_prime >= 0.0, "gamma_bc_prime must be >= 0");
  require(p.gamma_bc_popexch >= 0.0, "gamma_bc_popexch must be >= 0");
  require(p.gamma_total >= 0.0, "gamma_total must be >= 0");
  require(p.length >= 0.0, "length must be >= 0");
  require(p.c_light > 0.0, "c_light must be > 0");
}

AtomicParams with_default_rates(AtomicParams p) {
  p.gamma_ba = 0.5 * (p.gamma_b + p.gamma_c) + 0.5 * p.gamma_bc_prime;
  p.gamma_ac = p.gamma_ba;
  p.gamma_total = p.gamma_b + p.gamma_c;
  return p;
}

}  // namespace eit
