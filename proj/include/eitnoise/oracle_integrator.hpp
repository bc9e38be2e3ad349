#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "eitnoise/lambda_system.hpp"
#include "eitnoise/params.hpp"

namespace eit {

/// Time samples of the mean-field evolution.
struct Trajectory {
  std::vector<double> times;
  std::vector<BlochState> states;
  AtomicParams params_snapshot;
  cplx probe{};

  const BlochState& final_state() const { return states.back(); }
};

struct IntegrateOptions {
  std::size_t max_steps = 20'000'000;
  // Keep every n-th accepted step (the final state is always kept).
  std::size_t record_stride = 1;
};

/// Integration is refused above this ratio of fastest to slowest relaxation.
inline constexpr double kMaxStiffRatio = 1e6;

struct RelaxationRates {
  double slowest = 0.0;  // smallest |Re| among Jacobian eigenvalues
  double fastest = 0.0;  // largest modulus among Jacobian eigenvalues
  double stiff_ratio() const {
    return slowest > 0.0 ? fastest / slowest
                         : std::numeric_limits<double>::infinity();
  }
};

/// Eigenvalue spectrum of the (affine) Bloch right-hand side at fixed probe.
RelaxationRates relaxation_rates(const AtomicParams& params, cplx probe);

/// Adaptive Dormand-Prince integration of bloch_rhs from `initial` over
/// [0, t_final] with local error <= tol (mixed absolute/relative).
///
/// Throws Error{StepUnderflow} when the step size collapses, the step budget
/// runs out, or the stiff ratio exceeds kMaxStiffRatio; the message carries
/// the stiff ratio.
Trajectory integrate(const AtomicParams& params, cplx probe,
                     const BlochState& initial, double t_final, double tol,
                     const IntegrateOptions& opts = {});

struct SusceptibilityOptions {
  double modulation_depth = 1e-4;
  double settle_lifetimes = 30.0;
  int window_periods = 20;
  double tol = 1e-10;
};

/// Numerical sideband response of sigma_ba per unit probe field.
///
/// Drives E(t) = E0 (1 + m exp(-i w t)) from the steady state at E0, waits
/// settle_lifetimes slowest relaxation times, then demodulates sigma_ba at w
/// over window_periods periods. For w = 0 the step response after settling
/// is returned.
cplx step_response_susceptibility(const AtomicParams& params,
                                  double probe_amplitude,
                                  double modulation_freq,
                                  const SusceptibilityOptions& opts = {});

/// Converts a sigma_ba response into the co-moving propagation exponent,
/// Lambda = -i g N chi / c.
cplx exponent_from_response(const AtomicParams& params, cplx response);

}  // namespace eit
