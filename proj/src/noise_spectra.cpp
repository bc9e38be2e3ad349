#include "eitnoise/noise_spectra.hpp"

#include <algorithm>
#include <cmath>

#include "eitnoise/error.hpp"
#include "eitnoise/linear_response.hpp"

namespace eit {

void SpectrumSeries::validate() const {
  if (omega_grid.size() != values.size()) {
    throw Error(ErrorKind::GridMismatch, "grid and values differ in length");
  }
  for (std::size_t i = 1; i < omega_grid.size(); ++i) {
    if (!(omega_grid[i] > omega_grid[i - 1])) {
      throw Error(ErrorKind::GridMismatch,
                  "frequency grid must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!(v >= 0.0)) {
      throw Error(ErrorKind::GridMismatch, "spectrum values must be >= 0");
    }
  }
}

SpectrumSeries SpectrumSeries::flat(std::span<const double> omega_grid,
                                    double value, Quadrature q) {
  SpectrumSeries s;
  s.omega_grid.assign(omega_grid.begin(), omega_grid.end());
  s.values.assign(omega_grid.size(), value);
  s.quadrature = q;
  return s;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(lo < hi)) {
    throw Error(ErrorKind::GridMismatch,
                "grid needs lo < hi and at least two points");
  }
  std::vector<double> grid(points);
  const double n = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * (static_cast<double>(i) / n);
  }
  grid.back() = hi;
  return grid;
}

double added_noise_factor_population_exchange(const AtomicParams& p,
                                              double omega) {
  const double gbc = p.gamma_bc_popexch;
  const double w2 = omega * omega + gbc * gbc;
  const double denom = p.gamma_total * w2 + gbc * p.omega_c_sq();
  if (denom == 0.0) {
    // gbc = 0 with gamma = 0: the correction term is 0/0. Treat the model as
    // degenerate only when it actually carries a population-exchange rate.
    if (gbc == 0.0) return 1.0;
    throw Error(ErrorKind::DegenerateDenominator,
                "added-noise factor denominator vanishes");
  }
  return 1.0 - gbc * w2 / denom;
}

double model_transmission(NoiseModel model, const AtomicParams& params,
                          double omega, double length) {
  if (length == 0.0) return 1.0;
  const double ground = model == NoiseModel::OffDiagonal
                            ? params.gamma_bc_prime
                            : params.gamma_bc_popexch;
  const cplx lambda = propagation_exponent(params, omega, ground);
  return std::exp(-2.0 * lambda.real() * length);
}

SpectrumSeries output_spectrum(NoiseModel model, const SpectrumSeries& s_in,
                               const AtomicParams& params, double length) {
  s_in.validate();
  if (length < 0.0) {
    throw Error(ErrorKind::InvalidParams, "length must be >= 0");
  }
  SpectrumSeries out = s_in;
  for (std::size_t i = 0; i < s_in.values.size(); ++i) {
    const double w = s_in.omega_grid[i];
    const double t = model_transmission(model, params, w, length);
    const double added =
        model == NoiseModel::OffDiagonal
            ? 1.0
            : added_noise_factor_population_exchange(params, w);
    out.values[i] = s_in.values[i] * t + (1.0 - t) * added;
  }
  return out;
}

CommutationReport commutation_check(NoiseModel model,
                                    const AtomicParams& params, double length,
                                    std::span<const double> omega_grid) {
  constexpr double kTol = 1e-12;
  const SpectrumSeries vac_x =
      SpectrumSeries::flat(omega_grid, 1.0, Quadrature::amplitude());
  const SpectrumSeries vac_p =
      SpectrumSeries::flat(omega_grid, 1.0, Quadrature::phase());
  const SpectrumSeries out_x = output_spectrum(model, vac_x, params, length);
  const SpectrumSeries out_p = output_spectrum(model, vac_p, params, length);

  CommutationReport report;
  double min_s = 1.0;
  double min_product = 1.0;
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    min_s = std::min({min_s, out_x.values[i], out_p.values[i]});
    min_product = std::min(min_product, out_x.values[i] * out_p.values[i]);
  }
  report.max_violation = std::max(0.0, 1.0 - min_s);
  report.passes = min_s >= 1.0 - kTol && min_product >= 1.0 - kTol;
  return report;
}

std::pair<SpectrumSeries, SpectrumSeries> squeezed_input(
    double r, std::span<const double> omega_grid,
    const SqueezingOptions& opts) {
  if (r < 0.0) throw Error(ErrorKind::InvalidParams, "r must be >= 0");
  SpectrumSeries sq = SpectrumSeries::flat(omega_grid, std::exp(-2.0 * r),
                                           Quadrature::amplitude());
  SpectrumSeries anti = SpectrumSeries::flat(omega_grid, std::exp(2.0 * r),
                                             Quadrature::phase());
  if (opts.source == SqueezingSource::Lorentzian) {
    if (!(opts.source_bandwidth > 0.0)) {
      throw Error(ErrorKind::InvalidParams, "source bandwidth must be > 0");
    }
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
      const double x = omega_grid[i] / opts.source_bandwidth;
      const double shape = 1.0 / (1.0 + x * x);
      sq.values[i] = 1.0 - (1.0 - std::exp(-2.0 * r)) * shape;
      anti.values[i] = 1.0 + (std::exp(2.0 * r) - 1.0) * shape;
    }
  }
  return {std::move(sq), std::move(anti)};
}

SqueezingDelayReport squeezing_delay_report(double r,
                                            const AtomicParams& params,
                                            double length,
                                            std::span<const double> omega_grid,
                                            const SqueezingOptions& opts) {
  auto [sq, anti] = squeezed_input(r, omega_grid, opts);
  SqueezingDelayReport report;
  report.s_out_squeezed =
      output_spectrum(NoiseModel::OffDiagonal, sq, params, length);
  report.s_out_antisqueezed =
      output_spectrum(NoiseModel::OffDiagonal, anti, params, length);
  report.s_in_squeezed = std::move(sq);
  report.s_in_antisqueezed = std::move(anti);

  AtomicParams with_length = params;
  with_length.length = length;
  report.delay_s =
      std::abs(params.omega_c) > 0.0 ? group_delay(with_length) : 0.0;

  // Line-center values do not depend on whether 0 is a grid point.
  const double s_in0 = std::exp(-2.0 * r);
  if (r == 0.0) {
    report.preservation_ratio = 1.0;
  } else {
    const double t0 = model_transmission(NoiseModel::OffDiagonal, params, 0.0,
                                         length);
    const double s_out0 = s_in0 * t0 + (1.0 - t0);
    report.preservation_ratio =
        std::clamp((1.0 - s_out0) / (1.0 - s_in0), 0.0, 1.0);
  }
  return report;
}

double squeezing_db(double variance) { return -10.0 * std::log10(variance); }

}  // namespace eit
