#pragma once

#include <span>
#include <vector>

#include "eitnoise/params.hpp"

namespace eit {

/// Weak-probe propagation exponent sampled on a frequency grid. The field
/// amplitude after a length L is multiplied by exp(-lambda * L).
struct TransferFunction {
  std::vector<double> omega_grid;
  std::vector<cplx> lambda_values;
  AtomicParams params_snapshot;
};

/// Propagation exponent in the frame co-moving with the vacuum light speed:
///
///   Lambda(w) = (g^2 N / c) (gbc' - i w) / [(gba - i w)(gbc' - i w) + |Oc|^2]
///
/// Uses params.gamma_bc_prime as the ground-state coherence decay.
/// Throws Error{DegenerateDenominator} if the denominator vanishes.
cplx propagation_exponent(const AtomicParams& params, double omega);

/// Same exponent with an explicit ground-state coherence decay rate. The
/// population-exchange model plugs its gamma_bc in here.
cplx propagation_exponent(const AtomicParams& params, double omega,
                          double ground_decay);

/// Independent route: solves the 2x2 linearized system for the probe
/// coherence and the ground-state coherence at sideband w, then applies the
/// field equation. Agrees with propagation_exponent to rounding.
cplx propagation_exponent_linear_solve(const AtomicParams& params,
                                       double omega);

/// Closed-form d(Im Lambda)/dw.
double dispersion_slope(const AtomicParams& params, double omega);

TransferFunction transfer_function(const AtomicParams& params,
                                   std::span<const double> omega_grid);

/// exp(-2 Re Lambda(w) L).
double power_transmission(const AtomicParams& params, double omega,
                          double length);

/// Group delay relative to vacuum propagation, -L d(Im Lambda)/dw at w = 0,
/// by a Richardson-extrapolated central difference. Requires |omega_c| > 0.
double group_delay(const AtomicParams& params);

/// Half-width of the transparency window: the smallest w > 0 with
/// 2 Re Lambda(w) L = 1. Returns 0 if the line center is already that
/// opaque; throws Error{NoRoot} if the medium never gets that opaque.
double transparency_width(const AtomicParams& params, double length);

}  // namespace eit
