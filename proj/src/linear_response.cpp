#include "eitnoise/linear_response.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "eitnoise/error.hpp"

namespace eit {

namespace {

constexpr cplx I{0.0, 1.0};

double frequency_scale(const AtomicParams& p) {
  const double s = std::max(p.gamma_ba, std::abs(p.omega_c));
  return s > 0.0 ? s : 1.0;
}

}  // namespace

cplx propagation_exponent(const AtomicParams& p, double omega,
                          double ground_decay) {
  const cplx ground = ground_decay - I * omega;
  const cplx denom = (p.gamma_ba - I * omega) * ground + p.omega_c_sq();
  if (denom == cplx{}) {
    throw Error(ErrorKind::DegenerateDenominator,
                "propagation exponent denominator vanishes");
  }
  return p.coupling() * ground / denom;
}

cplx propagation_exponent(const AtomicParams& p, double omega) {
  return propagation_exponent(p, omega, p.gamma_bc_prime);
}

cplx propagation_exponent_linear_solve(const AtomicParams& p, double omega) {
  // First-order equations with sigma_bb = 1, everything else zero at
  // zeroth order, all amplitudes ~ exp(-i w t) and unit probe:
  //   -i w s_ba = -gba s_ba + i g + i Oc s_bc
  //   -i w s_bc = -gbc' s_bc + i Oc* s_ba
  Eigen::Matrix2cd a;
  a << p.gamma_ba - I * omega, -I * p.omega_c,
      -I * std::conj(p.omega_c), p.gamma_bc_prime - I * omega;
  Eigen::Vector2cd rhs(I * p.g, 0.0);
  const Eigen::FullPivLU<Eigen::Matrix2cd> lu(a);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::DegenerateDenominator,
                "linearized coherence system is singular");
  }
  const Eigen::Vector2cd s = lu.solve(rhs);
  // c dE/dz = i w E + i g N s_ba  =>  Lambda = -i g N s_ba / c  (co-moving).
  return -I * p.g * p.N * s(0) / p.c_light;
}

double dispersion_slope(const AtomicParams& p, double omega) {
  // Lambda = k u / v with u = gbc' - i w, v = (gba - i w) u + |Oc|^2.
  // dLambda/dw = k (u' v - u v') / v^2, u' = -i, v' = -i u - i (gba - i w).
  const cplx u = p.gamma_bc_prime - I * omega;
  const cplx v = (p.gamma_ba - I * omega) * u + p.omega_c_sq();
  const cplx du = -I;
  const cplx dv = -I * u - I * (p.gamma_ba - I * omega);
  return (p.coupling() * (du * v - u * dv) / (v * v)).imag();
}

TransferFunction transfer_function(const AtomicParams& params,
                                   std::span<const double> omega_grid) {
  if (omega_grid.size() < 2) {
    throw Error(ErrorKind::GridMismatch, "frequency grid needs >= 2 points");
  }
  for (std::size_t i = 1; i < omega_grid.size(); ++i) {
    if (!(omega_grid[i] > omega_grid[i - 1])) {
      throw Error(ErrorKind::GridMismatch,
                  "frequency grid must be strictly increasing");
    }
  }
  TransferFunction tf;
  tf.params_snapshot = params;
  tf.omega_grid.assign(omega_grid.begin(), omega_grid.end());
  tf.lambda_values.reserve(omega_grid.size());
  for (double w : omega_grid) {
    tf.lambda_values.push_back(propagation_exponent(params, w));
  }
  return tf;
}

double power_transmission(const AtomicParams& params, double omega,
                          double length) {
  if (length == 0.0) return 1.0;
  return std::exp(-2.0 * propagation_exponent(params, omega).real() * length);
}

double group_delay(const AtomicParams& params) {
  if (std::abs(params.omega_c) == 0.0) {
    throw Error(ErrorKind::InvalidParams,
                "group delay requires a nonzero control field");
  }
  const double h = 1e-6 * frequency_scale(params);
  auto central = [&](double step) {
    return (propagation_exponent(params, step).imag() -
            propagation_exponent(params, -step).imag()) /
           (2.0 * step);
  };
  const double slope = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  return -params.length * slope;
}

double transparency_width(const AtomicParams& params, double length) {
  auto excess = [&](double w) {
    return 2.0 * propagation_exponent(params, w).real() * length - 1.0;
  };
  if (excess(0.0) >= 0.0) return 0.0;

  const double scale = frequency_scale(params);
  double lo = 0.0;
  double hi = 1e-9 * scale;
  // Geometric scan so the first crossing is bracketed, not a later one.
  while (excess(hi) < 0.0) {
    lo = hi;
    hi *= 1.05;
    if (hi > 1e6 * scale) {
      throw Error(ErrorKind::NoRoot,
                  "medium stays transparent across the search bracket");
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace eit
