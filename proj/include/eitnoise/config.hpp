#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "eitnoise/entanglement_cv.hpp"
#include "eitnoise/lambda_system.hpp"
#include "eitnoise/noise_spectra.hpp"
#include "eitnoise/params.hpp"

namespace eit {

enum class OutputFormat { CSV, JSONLines };

/// Everything one CLI invocation needs. Serialized as flat `key = value`
/// lines; see dump_config for the key set.
struct RunConfig {
  AtomicParams params;
  cplx probe{0.0, 0.0};
  double omega_min = -1.0;
  double omega_max = 1.0;
  int omega_points = 101;
  double squeezing_r = 0.0;
  SqueezingSource source = SqueezingSource::Flat;
  double source_bandwidth = 1.0;
  DelayCompensation compensation = DelayCompensation::GroupDelay;
  NoiseModel model = NoiseModel::OffDiagonal;
  std::string output_path = "-";
  OutputFormat format = OutputFormat::CSV;

  std::vector<double> grid() const;

  bool operator==(const RunConfig&) const = default;
};

/// Keys that must appear in a config file that is not layered on a preset,
/// in the order they are checked.
const std::vector<std::string>& required_config_keys();

/// Parses `key = value` text. Blank lines and `#` comments are ignored.
/// When `base` is given, keys absent from the text keep the base values and
/// nothing is required; otherwise every required key must appear. Rate
/// defaults (gamma_ba, gamma_ac, gamma_total) are derived when omitted.
/// Throws Error{Config} naming the offending key or line.
RunConfig parse_config(std::string_view text, const RunConfig* base = nullptr);

/// Checks grid and parameter invariants; throws Error{Config} or
/// Error{InvalidParams}.
void validate(const RunConfig& cfg);

/// Full key set, 17 significant digits, one pair per line.
std::string dump_config(const RunConfig& cfg);

/// Shipped parameter sets, addressed by name.
const std::vector<std::string>& preset_names();
RunConfig preset(std::string_view name);

std::string format_number(double v);

const char* to_string(OutputFormat f);
const char* to_string(DelayCompensation c);
const char* to_string(SqueezingSource s);

NoiseModel parse_model(std::string_view s);
OutputFormat parse_format(std::string_view s);

}  // namespace eit
