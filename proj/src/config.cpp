#include "eitnoise/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "eitnoise/error.hpp"

namespace eit {

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::Config, what);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    config_error("key '" + std::string(key) + "': not a number: '" +
                 std::string(v) + "'");
  }
  return out;
}

int parse_int(std::string_view key, std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    config_error("key '" + std::string(key) + "': not an integer: '" +
                 std::string(v) + "'");
  }
  return out;
}

struct Field {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

// Key table in dump order.
const std::vector<std::pair<std::string, Field>>& fields() {
  using Setter = std::function<void(RunConfig&, std::string_view)>;
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    auto param = [&t](const std::string& key, double AtomicParams::*member) {
      t.push_back({key,
                   {[key, member](RunConfig& c, std::string_view v) {
                      c.params.*member = parse_double(key, v);
                    },
                    [member](const RunConfig& c) {
                      return format_number(c.params.*member);
                    }}});
    };
    auto real = [&t](const std::string& key, double RunConfig::*member) {
      t.push_back({key,
                   {[key, member](RunConfig& c, std::string_view v) {
                      c.*member = parse_double(key, v);
                    },
                    [member](const RunConfig& c) {
                      return format_number(c.*member);
                    }}});
    };
    auto custom = [&t](const std::string& key, Setter set,
                       std::function<std::string(const RunConfig&)> get) {
      t.push_back({key, {std::move(set), std::move(get)}});
    };

    param("g", &AtomicParams::g);
    param("N", &AtomicParams::N);
    custom(
        "omega_c_re",
        [](RunConfig& c, std::string_view v) {
          c.params.omega_c.real(parse_double("omega_c_re", v));
        },
        [](const RunConfig& c) { return format_number(c.params.omega_c.real()); });
    custom(
        "omega_c_im",
        [](RunConfig& c, std::string_view v) {
          c.params.omega_c.imag(parse_double("omega_c_im", v));
        },
        [](const RunConfig& c) { return format_number(c.params.omega_c.imag()); });
    param("gamma_b", &AtomicParams::gamma_b);
    param("gamma_c", &AtomicParams::gamma_c);
    param("gamma_ba", &AtomicParams::gamma_ba);
    param("gamma_ac", &AtomicParams::gamma_ac);
    param("gamma_bc_prime", &AtomicParams::gamma_bc_prime);
    param("gamma_bc_popexch", &AtomicParams::gamma_bc_popexch);
    param("gamma_total", &AtomicParams::gamma_total);
    param("length", &AtomicParams::length);
    param("c_light", &AtomicParams::c_light);
    custom(
        "probe_re",
        [](RunConfig& c, std::string_view v) {
          c.probe.real(parse_double("probe_re", v));
        },
        [](const RunConfig& c) { return format_number(c.probe.real()); });
    custom(
        "probe_im",
        [](RunConfig& c, std::string_view v) {
          c.probe.imag(parse_double("probe_im", v));
        },
        [](const RunConfig& c) { return format_number(c.probe.imag()); });
    real("omega_min", &RunConfig::omega_min);
    real("omega_max", &RunConfig::omega_max);
    custom(
        "omega_points",
        [](RunConfig& c, std::string_view v) {
          c.omega_points = parse_int("omega_points", v);
        },
        [](const RunConfig& c) { return std::to_string(c.omega_points); });
    real("squeezing_r", &RunConfig::squeezing_r);
    custom(
        "squeezing_source",
        [](RunConfig& c, std::string_view v) {
          if (v == "flat") {
            c.source = SqueezingSource::Flat;
          } else if (v == "lorentzian") {
            c.source = SqueezingSource::Lorentzian;
          } else {
            config_error("key 'squeezing_source': expected flat|lorentzian");
          }
        },
        [](const RunConfig& c) { return std::string(to_string(c.source)); });
    real("source_bandwidth", &RunConfig::source_bandwidth);
    custom(
        "compensation",
        [](RunConfig& c, std::string_view v) {
          if (v == "none") {
            c.compensation = DelayCompensation::None;
          } else if (v == "group_delay") {
            c.compensation = DelayCompensation::GroupDelay;
          } else if (v == "exact") {
            c.compensation = DelayCompensation::Exact;
          } else {
            config_error("key 'compensation': expected none|group_delay|exact");
          }
        },
        [](const RunConfig& c) { return std::string(to_string(c.compensation)); });
    custom(
        "model",
        [](RunConfig& c, std::string_view v) { c.model = parse_model(v); },
        [](const RunConfig& c) { return std::string(to_string(c.model)); });
    custom(
        "output_path",
        [](RunConfig& c, std::string_view v) { c.output_path = std::string(v); },
        [](const RunConfig& c) { return c.output_path; });
    custom(
        "format",
        [](RunConfig& c, std::string_view v) { c.format = parse_format(v); },
        [](const RunConfig& c) { return std::string(to_string(c.format)); });
    return t;
  }();
  return table;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* to_string(OutputFormat f) {
  return f == OutputFormat::CSV ? "csv" : "jsonl";
}

const char* to_string(DelayCompensation c) {
  switch (c) {
    case DelayCompensation::None: return "none";
    case DelayCompensation::GroupDelay: return "group_delay";
    case DelayCompensation::Exact: return "exact";
  }
  return "group_delay";
}

const char* to_string(SqueezingSource s) {
  return s == SqueezingSource::Flat ? "flat" : "lorentzian";
}

NoiseModel parse_model(std::string_view s) {
  if (s == "offdiag") return NoiseModel::OffDiagonal;
  if (s == "popexch") return NoiseModel::PopulationExchange;
  config_error("model must be offdiag|popexch, got '" + std::string(s) + "'");
}

OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::CSV;
  if (s == "jsonl") return OutputFormat::JSONLines;
  config_error("format must be csv|jsonl, got '" + std::string(s) + "'");
}

std::vector<double> RunConfig::grid() const {
  return linear_grid(omega_min, omega_max,
                     static_cast<std::size_t>(std::max(omega_points, 0)));
}

const std::vector<std::string>& required_config_keys() {
  static const std::vector<std::string> keys = {
      "g",       "N",         "omega_c_re", "gamma_b",   "gamma_c",
      "gamma_bc_prime",       "length",     "c_light",   "omega_min",
      "omega_max", "omega_points"};
  return keys;
}

RunConfig parse_config(std::string_view text, const RunConfig* base) {
  RunConfig cfg = base ? *base : RunConfig{};
  std::set<std::string> seen;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      config_error("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const auto& f) { return f.first == key; });
    if (it == table.end()) {
      config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      config_error("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    it->second.set(cfg, value);
  }

  if (!base) {
    for (const auto& key : required_config_keys()) {
      if (!seen.count(key)) config_error("missing required key '" + key + "'");
    }
    const AtomicParams defaults = with_default_rates(cfg.params);
    if (!seen.count("gamma_ba")) cfg.params.gamma_ba = defaults.gamma_ba;
    if (!seen.count("gamma_ac")) cfg.params.gamma_ac = defaults.gamma_ac;
    if (!seen.count("gamma_total")) cfg.params.gamma_total = defaults.gamma_total;
  }
  return cfg;
}

void validate(const RunConfig& cfg) {
  validate(cfg.params);
  if (cfg.omega_points < 2) config_error("omega_points must be >= 2");
  if (!(cfg.omega_min < cfg.omega_max)) {
    config_error("omega_min must be < omega_max");
  }
  if (!std::isfinite(cfg.probe.real()) || !std::isfinite(cfg.probe.imag())) {
    config_error("probe must be finite");
  }
  if (cfg.squeezing_r < 0.0) config_error("squeezing_r must be >= 0");
  if (!(cfg.source_bandwidth > 0.0)) config_error("source_bandwidth must be > 0");
  if (cfg.output_path.empty()) config_error("output_path must not be empty");
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream out;
  for (const auto& [key, field] : fields()) {
    out << key << " = " << field.get(cfg) << '\n';
  }
  return out.str();
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "weak-probe", "weak-probe-popexch", "eit",
      "popexch-violation", "squeezing", "entanglement"};
  return names;
}

RunConfig preset(std::string_view name) {
  // Dimensionless units: rates in units of gamma_ba (or of the listed
  // scale), g = N = c = 1 so g^2 N / c = 1.
  RunConfig c;
  c.params.g = 1.0;
  c.params.N = 1.0;
  c.params.c_light = 1.0;
  c.params.omega_c = {1.0, 0.0};
  c.params.gamma_b = 1.0;
  c.params.gamma_c = 1.0;
  c.params.gamma_ba = 1.0;
  c.params.gamma_ac = 1.0;
  c.params.gamma_total = 1.0;
  c.params.gamma_bc_prime = 0.01;
  c.params.gamma_bc_popexch = 0.1;
  c.params.length = 100.0;
  c.probe = {0.01, 0.0};
  c.omega_min = -3.0;
  c.omega_max = 3.0;
  c.omega_points = 301;

  if (name == "weak-probe" || name == "weak-probe-popexch") {
    c.params.gamma_b = 0.5;
    c.params.gamma_c = 0.5;
    c.params.gamma_ba = 0.5;
    c.params.gamma_ac = 0.5;
    c.params.length = 1.0;
    c.omega_min = -5.0;
    c.omega_max = 5.0;
    c.omega_points = 201;
    if (name == "weak-probe-popexch") c.model = NoiseModel::PopulationExchange;
  } else if (name == "eit") {
    // defaults above
  } else if (name == "popexch-violation") {
    c.model = NoiseModel::PopulationExchange;
  } else if (name == "squeezing") {
    c.params.gamma_bc_prime = 1e-3;
    c.params.length = 10.0;
    c.squeezing_r = 0.5 * std::log(2.0);  // S_in = 1/2
    c.omega_min = -0.5;
    c.omega_max = 0.5;
    c.omega_points = 201;
  } else if (name == "entanglement") {
    c.params.gamma_bc_prime = 0.0;
    c.params.length = 10.0;
    c.squeezing_r = 0.5;
    c.omega_min = -2.0;
    c.omega_max = 2.0;
    c.omega_points = 401;
  } else {
    config_error("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

}  // namespace eit
