#pragma once

#include <span>
#include <vector>

#include "eitnoise/lambda_system.hpp"
#include "eitnoise/params.hpp"

namespace eit {

struct Quadrature {
  enum class Kind { Amplitude, Phase, Angle };
  Kind kind = Kind::Amplitude;
  double theta = 0.0;  // only meaningful for Angle

  static Quadrature amplitude() { return {Kind::Amplitude, 0.0}; }
  static Quadrature phase() { return {Kind::Phase, 0.0}; }
  static Quadrature angle(double theta) { return {Kind::Angle, theta}; }
};

/// Quadrature variance spectrum in shot-noise units (vacuum = 1).
struct SpectrumSeries {
  std::vector<double> omega_grid;
  std::vector<double> values;
  Quadrature quadrature;

  /// Checks the grid is strictly increasing, lengths match and values are
  /// nonnegative; throws Error{GridMismatch} otherwise.
  void validate() const;

  static SpectrumSeries flat(std::span<const double> omega_grid, double value,
                             Quadrature q = Quadrature::amplitude());
};

/// Evenly spaced grid of `points` samples on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

/// Bracketed factor of the population-exchange output spectrum,
///   1 - gbc (w^2 + gbc^2) / (gamma (w^2 + gbc^2) + gbc |Oc|^2),
/// with gamma = params.gamma_total and gbc = params.gamma_bc_popexch.
double added_noise_factor_population_exchange(const AtomicParams& params,
                                              double omega);

/// Power transmission exp(-2 Re Lambda L) seen by the given model; the
/// population-exchange model builds Lambda with gamma_bc in the slot of the
/// ground-state coherence decay.
double model_transmission(NoiseModel model, const AtomicParams& params,
                          double omega, double length);

/// Output spectrum after a medium of the given length.
///   OffDiagonal:        S_out = S_in T + (1 - T)
///   PopulationExchange: S_out = S_in T + (1 - T) * added_noise_factor
SpectrumSeries output_spectrum(NoiseModel model, const SpectrumSeries& s_in,
                               const AtomicParams& params, double length);

struct CommutationReport {
  double max_violation = 0.0;
  bool passes = true;
};

/// Feeds vacuum into both conjugate quadratures and checks that neither output
/// drops below shot noise and their product stays >= 1 (to 1e-12).
CommutationReport commutation_check(NoiseModel model,
                                    const AtomicParams& params, double length,
                                    std::span<const double> omega_grid);

/// Input squeezing source model.
enum class SqueezingSource { Flat, Lorentzian };

struct SqueezingOptions {
  SqueezingSource source = SqueezingSource::Flat;
  // Half-width of the single-pole source, used only by Lorentzian.
  double source_bandwidth = 1.0;
};

/// Squeezed / antisqueezed input spectra. Flat: e^{-2r} and e^{+2r}.
/// Lorentzian: the squeezing depth rolls off as 1/(1 + (w/bw)^2).
std::pair<SpectrumSeries, SpectrumSeries> squeezed_input(
    double r, std::span<const double> omega_grid,
    const SqueezingOptions& opts = {});

struct SqueezingDelayReport {
  SpectrumSeries s_in_squeezed;
  SpectrumSeries s_in_antisqueezed;
  SpectrumSeries s_out_squeezed;
  SpectrumSeries s_out_antisqueezed;
  double delay_s = 0.0;
  double preservation_ratio = 1.0;
};

/// Pushes a squeezed pair through the off-diagonal model. The preservation
/// ratio is (1 - S_out(0)) / (1 - S_in(0)), taken as 1 when r = 0.
SqueezingDelayReport squeezing_delay_report(double r,
                                            const AtomicParams& params,
                                            double length,
                                            std::span<const double> omega_grid,
                                            const SqueezingOptions& opts = {});

/// Squeezing in dB, -10 log10(S).
double squeezing_db(double variance);

}  // namespace eit
