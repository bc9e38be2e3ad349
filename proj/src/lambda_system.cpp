#include "eitnoise/lambda_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "eitnoise/error.hpp"

namespace eit {

namespace {

constexpr cplx I{0.0, 1.0};

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

Vec8 pack(const BlochDerivative& d) {
  const auto a = to_real(d);
  return Eigen::Map<const Vec8>(a.data());
}

Vec8 pack(const BlochState& s) {
  const auto a = s.to_real();
  return Eigen::Map<const Vec8>(a.data());
}

BlochState unpack(const Vec8& v) {
  std::array<double, 8> a{};
  Eigen::Map<Vec8>(a.data()) = v;
  return BlochState::from_real(a);
}

// Largest rate in the problem; residuals are measured relative to it.
double rate_scale(const AtomicParams& p, cplx probe) {
  const double scale =
      std::max({p.gamma_a(), p.gamma_ba, p.gamma_ac, p.gamma_bc_prime,
                std::abs(p.omega_c), p.g * std::abs(probe)});
  return scale > 0.0 ? scale : 1.0;
}

}  // namespace

std::array<double, 8> to_real(const BlochDerivative& d) {
  return {d.d_bb,        d.d_cc,        d.d_ba.real(), d.d_ba.imag(),
          d.d_bc.real(), d.d_bc.imag(), d.d_ac.real(), d.d_ac.imag()};
}

Eigen::Matrix<double, 8, 8> bloch_jacobian(const AtomicParams& params,
                                           cplx probe) {
  // Unit difference quotients of an affine map are exact.
  const Vec8 base = pack(BlochState::dark());
  const Vec8 f0 = pack(bloch_rhs(BlochState::dark(), params, probe));
  Mat8 jac;
  for (int k = 0; k < 8; ++k) {
    Vec8 xk = base;
    xk[k] += 1.0;
    jac.col(k) = pack(bloch_rhs(unpack(xk), params, probe)) - f0;
  }
  return jac;
}

std::array<double, 8> BlochState::to_real() const {
  return {sigma_bb,        sigma_cc,        sigma_ba.real(), sigma_ba.imag(),
          sigma_bc.real(), sigma_bc.imag(), sigma_ac.real(), sigma_ac.imag()};
}

BlochState BlochState::from_real(const std::array<double, 8>& v) {
  return {v[0], v[1], {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}};
}

double BlochDerivative::max_norm() const {
  return std::max({std::abs(d_bb), std::abs(d_cc), std::abs(d_ba),
                   std::abs(d_bc), std::abs(d_ac)});
}

bool is_physical(const BlochState& s, double tol) {
  const double aa = s.sigma_aa();
  if (s.sigma_bb < -tol || s.sigma_cc < -tol || aa < -tol) return false;
  if (s.sigma_bb > 1 + tol || s.sigma_cc > 1 + tol) return false;
  // 2x2 principal minors of the density matrix.
  const double bb = std::max(s.sigma_bb, 0.0);
  const double cc = std::max(s.sigma_cc, 0.0);
  const double a = std::max(aa, 0.0);
  return std::norm(s.sigma_ba) <= bb * a + tol &&
         std::norm(s.sigma_bc) <= bb * cc + tol &&
         std::norm(s.sigma_ac) <= a * cc + tol;
}

BlochDerivative bloch_rhs(const BlochState& s, const AtomicParams& p,
                          cplx probe) {
  return bloch_rhs_with_excited(s, s.sigma_aa(), p, probe);
}

BlochDerivative bloch_rhs_with_excited(const BlochState& s, double aa,
                                       const AtomicParams& p, cplx probe) {
  const double g = p.g;
  const cplx E = probe;
  const cplx Ec = std::conj(probe);
  const cplx Om = p.omega_c;
  const cplx Omc = std::conj(p.omega_c);
  const cplx ab = std::conj(s.sigma_ba);
  const cplx ca = std::conj(s.sigma_ac);

  BlochDerivative d;
  d.d_bb = (p.gamma_b * aa - I * g * E * ab + I * g * Ec * s.sigma_ba).real();
  d.d_cc = (p.gamma_c * aa - I * Om * s.sigma_ac + I * Omc * ca).real();
  d.d_ba = -p.gamma_ba * s.sigma_ba + I * g * E * (s.sigma_bb - aa) +
           I * Om * s.sigma_bc;
  d.d_bc = -p.gamma_bc_prime * s.sigma_bc - I * g * E * s.sigma_ac +
           I * Omc * s.sigma_ba;
  d.d_ac = -p.gamma_ac * s.sigma_ac - I * g * Ec * s.sigma_bc +
           I * Omc * (aa - s.sigma_cc);
  return d;
}

double excited_population_rate(const BlochState& s, const AtomicParams& p,
                               cplx probe) {
  const cplx ab = std::conj(s.sigma_ba);
  const cplx ca = std::conj(s.sigma_ac);
  const cplx r = -p.gamma_a() * s.sigma_aa() + I * p.g * probe * ab -
                 I * p.g * std::conj(probe) * s.sigma_ba +
                 I * p.omega_c * s.sigma_ac - I * std::conj(p.omega_c) * ca;
  return r.real();
}

BlochState steady_state(const AtomicParams& params, cplx probe,
                        const SteadyStateOptions& opts) {
  validate(params);
  const double scale = rate_scale(params, probe);
  auto residual = [&](const Vec8& x) {
    return pack(bloch_rhs(unpack(x), params, probe));
  };

  Vec8 x = pack(BlochState::dark());
  Vec8 f = residual(x);

  const Mat8 jac = bloch_jacobian(params, probe);
  Eigen::FullPivLU<Mat8> lu(jac);
  lu.setThreshold(1e-12);
  if (lu.rank() < 8) {
    throw Error(ErrorKind::DegenerateSteadyState,
                "steady state is not unique (rank " + std::to_string(lu.rank()) +
                    " of 8): probe and control both vanish or |a> does not decay");
  }

  double fnorm = f.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (fnorm <= opts.tolerance * scale) return unpack(x);
    const Vec8 step = lu.solve(-f);
    double damping = 1.0;
    Vec8 trial = x + step;
    Vec8 ftrial = residual(trial);
    while (ftrial.lpNorm<Eigen::Infinity>() > fnorm && damping > 1e-6) {
      damping *= 0.5;
      trial = x + damping * step;
      ftrial = residual(trial);
    }
    const double new_norm = ftrial.lpNorm<Eigen::Infinity>();
    if (new_norm >= fnorm) break;  // stalled at working precision
    x = trial;
    f = ftrial;
    fnorm = new_norm;
  }
  if (fnorm <= opts.tolerance * scale) return unpack(x);
  throw Error(ErrorKind::NoConvergence,
              "steady-state Newton iteration did not converge (residual " +
                  std::to_string(fnorm / scale) + ")");
}

double population_exchange_steady_bb(const AtomicParams& p, cplx probe) {
  const double denom = p.gamma_ba * p.gamma_bc_popexch + p.omega_c_sq();
  if (denom == 0.0) {
    throw Error(ErrorKind::DivisionDegenerate,
                "gamma_ba*gamma_bc + |omega_c|^2 vanishes");
  }
  return -2.0 * p.g * p.g * std::norm(probe) / denom;
}

const char* to_string(NoiseModel m) {
  return m == NoiseModel::OffDiagonal ? "offdiag" : "popexch";
}

const char* to_string(Verdict v) {
  return v == Verdict::ConsistentSecondOrder ? "ConsistentSecondOrder"
                                             : "Inconsistent";
}

ConsistencyReport weak_probe_consistency(const AtomicParams& params,
                                         cplx probe, NoiseModel model) {
  validate(params);
  const double omega = std::abs(params.omega_c);
  if (omega == 0.0) {
    throw Error(ErrorKind::InvalidParams,
                "consistency check requires a nonzero control field");
  }
  const double coupling = params.g * std::abs(probe);
  if (coupling >= omega) {
    throw Error(ErrorKind::InvalidParams,
                "probe is not weak: |g E| >= |omega_c|");
  }

  ConsistencyReport report;
  report.epsilon = coupling / omega;
  if (probe == cplx{}) return report;

  if (model == NoiseModel::OffDiagonal) {
    const BlochState s = steady_state(params, probe);
    report.population_deficit = 1.0 - s.sigma_bb;
    report.verdict = report.population_deficit <=
                             kConsistencyFactor * report.epsilon * report.epsilon
                         ? Verdict::ConsistentSecondOrder
                         : Verdict::Inconsistent;
  } else {
    report.population_deficit =
        1.0 - population_exchange_steady_bb(params, probe);
    report.verdict = Verdict::Inconsistent;
  }
  return report;
}

}  // namespace eit
