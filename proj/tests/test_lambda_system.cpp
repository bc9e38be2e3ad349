#include <catch_amalgamated.hpp>

#include <cmath>

#include "eitnoise/error.hpp"
#include "eitnoise/lambda_system.hpp"
#include "oracles.hpp"

using namespace eit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// g = 1, Oc = 1, gb = gc = 0.5, gba = gac = 0.5, gbc' = 0.01.
AtomicParams weak_probe_params() {
  AtomicParams p;
  p.g = 1.0;
  p.omega_c = {1.0, 0.0};
  p.gamma_b = p.gamma_c = 0.5;
  p.gamma_ba = p.gamma_ac = 0.5;
  p.gamma_bc_prime = 0.01;
  return p;
}

double max_abs_diff(const BlochDerivative& x, const BlochDerivative& y) {
  return std::max({std::abs(x.d_bb - y.d_bb), std::abs(x.d_cc - y.d_cc),
                   std::abs(x.d_ba - y.d_ba), std::abs(x.d_bc - y.d_bc),
                   std::abs(x.d_ac - y.d_ac)});
}

}  // namespace

TEST_CASE("dark state is stationary without probe", "[lambda_system]") {
  const auto d = bloch_rhs(BlochState::dark(), weak_probe_params(), 0.0);
  CHECK(d.max_norm() == 0.0);
}

TEST_CASE("excited state derivatives read off the equations", "[lambda_system]") {
  AtomicParams p = weak_probe_params();
  p.omega_c = {0.7, 0.3};
  p.gamma_b = 0.4;
  p.gamma_c = 0.25;
  const auto d = bloch_rhs(BlochState::excited(), p, 0.0);
  CHECK(d.d_bb == 0.4);
  CHECK(d.d_cc == 0.25);
  CHECK(d.d_ba == cplx{});
  CHECK(d.d_bc == cplx{});
  CHECK(d.d_ac == cplx(0.0, 1.0) * std::conj(p.omega_c));
}

TEST_CASE("right-hand side matches commutator reference", "[lambda_system][property]") {
  testing::Draw draw(11);
  for (int k = 0; k < 500; ++k) {
    const AtomicParams p = testing::random_params(draw);
    const BlochState s = testing::random_state(draw);
    const cplx e = draw.phase(draw.uniform(0.0, 1.0));
    const auto got = bloch_rhs(s, p, e);
    const auto want = testing::reference_rhs(s, p, e);
    REQUIRE(max_abs_diff(got, want) < 1e-13);
  }
}

TEST_CASE("trace is conserved", "[lambda_system][property]") {
  testing::Draw draw(12);
  for (int k = 0; k < 1000; ++k) {
    const AtomicParams p = testing::random_params(draw);
    const BlochState s = testing::random_state(draw);
    const cplx e = draw.phase(draw.uniform(0.0, 1.0));
    const auto d = bloch_rhs(s, p, e);
    const double d_aa = excited_population_rate(s, p, e);
    REQUIRE(std::abs(d.d_bb + d.d_cc + d_aa) < 1e-14);
  }
}

TEST_CASE("conjugate coherences evolve as conjugates", "[lambda_system][property]") {
  // d<sigma_ab>, d<sigma_cb>, d<sigma_ca> from the commutator route must be
  // the conjugates of the library's d<sigma_ba>, d<sigma_bc>, d<sigma_ac>.
  testing::Draw draw(13);
  const int a = 0, b = 1, c = 2;
  for (int k = 0; k < 300; ++k) {
    const AtomicParams p = testing::random_params(draw);
    const BlochState s = testing::random_state(draw);
    const cplx e = draw.phase(draw.uniform(0.0, 1.0));
    const auto d = bloch_rhs(s, p, e);
    const cplx d_ab = testing::coherent_rate(s, p, e, a, b) -
                      p.gamma_ba * std::conj(s.sigma_ba);
    const cplx d_cb = testing::coherent_rate(s, p, e, c, b) -
                      p.gamma_bc_prime * std::conj(s.sigma_bc);
    const cplx d_ca = testing::coherent_rate(s, p, e, c, a) -
                      p.gamma_ac * std::conj(s.sigma_ac);
    REQUIRE(std::abs(d_ab - std::conj(d.d_ba)) < 1e-13);
    REQUIRE(std::abs(d_cb - std::conj(d.d_bc)) < 1e-13);
    REQUIRE(std::abs(d_ca - std::conj(d.d_ac)) < 1e-13);
  }
}

TEST_CASE("steady state without probe is the dark state", "[lambda_system]") {
  AtomicParams p = weak_probe_params();
  p.omega_c = {0.3, -1.1};
  const BlochState s = steady_state(p, 0.0);
  CHECK_THAT(s.sigma_bb, WithinAbs(1.0, 1e-15));
  CHECK_THAT(s.sigma_cc, WithinAbs(0.0, 1e-15));
  CHECK(std::abs(s.sigma_ba) < 1e-15);
  CHECK(std::abs(s.sigma_bc) < 1e-15);
  CHECK(std::abs(s.sigma_ac) < 1e-15);
}

TEST_CASE("steady state is degenerate with no fields", "[lambda_system]") {
  AtomicParams p = weak_probe_params();
  p.omega_c = 0.0;
  try {
    steady_state(p, 0.0);
    FAIL("expected DegenerateSteadyState");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateSteadyState);
  }
}

TEST_CASE("steady state is a fixed point", "[lambda_system]") {
  const AtomicParams p = weak_probe_params();
  const BlochState s = steady_state(p, 0.01);
  CHECK(bloch_rhs(s, p, 0.01).max_norm() < 1e-10);
  CHECK(is_physical(s));
  // eps = 0.01: deficit of order eps^2.
  const double deficit = 1.0 - s.sigma_bb;
  CHECK(deficit > 1e-5);
  CHECK(deficit < 1e-3);
}

TEST_CASE("steady state fixed point over random media", "[lambda_system][property]") {
  testing::Draw draw(14);
  for (int k = 0; k < 200; ++k) {
    const AtomicParams p = testing::random_params(draw);
    const cplx e = draw.phase(draw.uniform(0.0, 0.5) * std::abs(p.omega_c) / p.g);
    const BlochState s = steady_state(p, e);
    REQUIRE(bloch_rhs(s, p, e).max_norm() < 1e-10);
    REQUIRE(is_physical(s, 1e-9));
  }
}

TEST_CASE("population deficit scales as eps squared", "[lambda_system]") {
  const AtomicParams p = weak_probe_params();
  double ratio[3];
  const double eps[3] = {1e-2, 1e-3, 1e-4};
  for (int i = 0; i < 3; ++i) {
    const BlochState s = steady_state(p, eps[i]);  // g = |Oc| = 1
    ratio[i] = (1.0 - s.sigma_bb) / (eps[i] * eps[i]);
    CHECK(std::isfinite(ratio[i]));
    CHECK(ratio[i] > 0.0);
    CHECK(ratio[i] <= kConsistencyFactor);
  }
  CHECK_THAT(ratio[2], WithinRel(ratio[1], 0.05));
}

TEST_CASE("population-exchange sigma_bb formula", "[lambda_system]") {
  AtomicParams p;
  p.g = 1.0;
  p.gamma_ba = 1.0;
  p.gamma_bc_popexch = 0.1;
  p.omega_c = 1.0;
  CHECK(population_exchange_steady_bb(p, 0.0) == 0.0);
  CHECK_THAT(population_exchange_steady_bb(p, 0.1),
             WithinRel(-0.018181818181818181, 1e-14));
  CHECK(population_exchange_steady_bb(p, {0.0, 1e-6}) < 0.0);

  p.omega_c = 0.0;
  p.gamma_bc_popexch = 0.0;
  CHECK_THROWS_AS(population_exchange_steady_bb(p, 0.1), Error);
}

TEST_CASE("weak-probe consistency verdicts", "[lambda_system]") {
  const AtomicParams p = weak_probe_params();
  for (auto model : {NoiseModel::OffDiagonal, NoiseModel::PopulationExchange}) {
    const auto r = weak_probe_consistency(p, 0.0, model);
    CHECK(r.verdict == Verdict::ConsistentSecondOrder);
    CHECK(r.population_deficit == 0.0);
  }

  const auto off = weak_probe_consistency(p, 0.01, NoiseModel::OffDiagonal);
  CHECK_THAT(off.epsilon, WithinRel(0.01, 1e-15));
  CHECK(off.verdict == Verdict::ConsistentSecondOrder);
  CHECK(off.population_deficit <= kConsistencyFactor * 1e-4);

  AtomicParams pe = p;
  pe.gamma_bc_popexch = 0.1;
  for (double e : {1e-6, 1e-3, 0.3}) {
    const auto r = weak_probe_consistency(pe, e, NoiseModel::PopulationExchange);
    CHECK(r.verdict == Verdict::Inconsistent);
    CHECK(r.population_deficit > 1.0);
  }
}

TEST_CASE("consistency rejects strong probe and dark control", "[lambda_system]") {
  AtomicParams p = weak_probe_params();
  CHECK_THROWS_AS(weak_probe_consistency(p, 1.5, NoiseModel::OffDiagonal), Error);
  p.omega_c = 0.0;
  CHECK_THROWS_AS(weak_probe_consistency(p, 0.01, NoiseModel::OffDiagonal), Error);
}

TEST_CASE("invalid parameters are rejected", "[lambda_system]") {
  AtomicParams p = weak_probe_params();
  p.gamma_b = -1.0;
  CHECK_THROWS_AS(validate(p), Error);
  p = weak_probe_params();
  p.c_light = 0.0;
  CHECK_THROWS_AS(steady_state(p, 0.01), Error);
}
