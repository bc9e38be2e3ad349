#pragma once

#include <array>

#include <Eigen/Core>

#include "eitnoise/params.hpp"

namespace eit {

/// Mean values of the five independent elements of the atomic operator set.
/// sigma_aa is eliminated by the trace, the remaining coherences follow by
/// Hermitian conjugation.
struct BlochState {
  double sigma_bb = 1.0;
  double sigma_cc = 0.0;
  cplx sigma_ba{};
  cplx sigma_bc{};
  cplx sigma_ac{};

  double sigma_aa() const { return 1.0 - sigma_bb - sigma_cc; }

  /// Packs into (bb, cc, Re ba, Im ba, Re bc, Im bc, Re ac, Im ac).
  std::array<double, 8> to_real() const;
  static BlochState from_real(const std::array<double, 8>& v);

  static BlochState dark() { return {}; }
  static BlochState excited() { return {0.0, 0.0, {}, {}, {}}; }
};

/// Time derivative of a BlochState. sigma_aa is not independent, so the
/// derivative has the same shape as the state.
struct BlochDerivative {
  double d_bb = 0.0;
  double d_cc = 0.0;
  cplx d_ba{};
  cplx d_bc{};
  cplx d_ac{};

  double max_norm() const;
};

/// Positivity of the mean density matrix within `tol`.
bool is_physical(const BlochState& s, double tol = 1e-10);

/// Mean-field Heisenberg-Bloch equations with off-diagonal ground-state
/// dephasing. `probe` is the c-number probe envelope E.
BlochDerivative bloch_rhs(const BlochState& state, const AtomicParams& params,
                          cplx probe);

/// Right-hand side with sigma_aa supplied explicitly instead of through the
/// trace. Every term is linear in (sigma_aa, state), so passing a deviation
/// and its implied sigma_aa deviation gives the homogeneous part exactly.
BlochDerivative bloch_rhs_with_excited(const BlochState& state, double sigma_aa,
                                       const AtomicParams& params, cplx probe);

/// Real 8x8 Jacobian of bloch_rhs in the packing of BlochState::to_real.
/// The right-hand side is affine, so this does not depend on the state.
Eigen::Matrix<double, 8, 8> bloch_jacobian(const AtomicParams& params,
                                           cplx probe);

/// Packs a derivative the same way as BlochState::to_real.
std::array<double, 8> to_real(const BlochDerivative& d);

/// d sigma_aa / dt from the equation removed by the trace constraint, with the
/// excited state decaying at gamma_b + gamma_c.
double excited_population_rate(const BlochState& state,
                               const AtomicParams& params, cplx probe);

struct SteadyStateOptions {
  double tolerance = 1e-12;
  int max_iterations = 200;
};

/// Fixed point of bloch_rhs by damped Newton iteration from the dark state.
///
/// Throws Error{DegenerateSteadyState} when the fixed-point manifold is not a
/// single point (E = 0 and omega_c = 0, or no decay out of |a>), and
/// Error{NoConvergence} when the iteration budget is exhausted.
BlochState steady_state(const AtomicParams& params, cplx probe,
                        const SteadyStateOptions& opts = {});

/// sigma_bb predicted by the population-exchange dephasing model in the weak
/// probe limit: -2 g^2 |E|^2 / (gamma_ba gamma_bc + |omega_c|^2).
/// Throws Error{DivisionDegenerate} when the denominator is zero.
double population_exchange_steady_bb(const AtomicParams& params, cplx probe);

enum class NoiseModel { OffDiagonal, PopulationExchange };

const char* to_string(NoiseModel m);

enum class Verdict { ConsistentSecondOrder, Inconsistent };

const char* to_string(Verdict v);

struct ConsistencyReport {
  double epsilon = 0.0;
  double population_deficit = 0.0;
  Verdict verdict = Verdict::ConsistentSecondOrder;
};

/// Guard constant: the off-diagonal model is accepted as second-order
/// consistent when 1 - sigma_bb <= kConsistencyFactor * epsilon^2.
inline constexpr double kConsistencyFactor = 10.0;

/// Checks that the steady state keeps almost all population in |b>.
/// Requires |omega_c| > 0 and |g E| < |omega_c|.
ConsistencyReport weak_probe_consistency(const AtomicParams& params,
                                         cplx probe, NoiseModel model);

}  // namespace eit
