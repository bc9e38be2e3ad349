#pragma once

#include <complex>

namespace eit {

using cplx = std::complex<double>;

/// Rates and couplings of a three-level Lambda medium.
///
/// |b> and |c> are the ground states, |a> the excited state. The probe
/// couples b<->a with strength g, the control couples c<->a with Rabi
/// frequency omega_c. All rates are angular (rad/s) or, in the dimensionless
/// presets, in units of gamma_ba.
struct AtomicParams {
  double g = 1.0;
  double N = 1.0;
  cplx omega_c{1.0, 0.0};
  double gamma_b = 0.5;
  double gamma_c = 0.5;
  double gamma_ba = 0.5;
  double gamma_ac = 0.5;
  // Off-diagonal ground-state dephasing (elastic, population preserving).
  double gamma_bc_prime = 0.0;
  // Population-exchange ground-state rate; only the flawed model reads it.
  double gamma_bc_popexch = 0.0;
  // Rate gamma in the population-exchange added-noise factor.
  double gamma_total = 1.0;
  double length = 1.0;
  double c_light = 1.0;

  /// g^2 N / c, the coupling prefactor of the propagation exponent.
  double coupling() const { return g * g * N / c_light; }
  double omega_c_sq() const { return std::norm(omega_c); }
  /// Total spontaneous decay out of |a>.
  double gamma_a() const { return gamma_b + gamma_c; }

  bool operator==(const AtomicParams&) const = default;
};

/// Throws Error{InvalidParams} if any rate is negative, g < 0, length < 0 or
/// c_light <= 0 (or any value is non-finite).
void validate(const AtomicParams& p);

/// Params with gamma_ba = gamma_ac = (gamma_b + gamma_c)/2 + gamma_bc'/2 and
/// gamma_total = gamma_b + gamma_c.
AtomicParams with_default_rates(AtomicParams p);

}  // namespace eit
