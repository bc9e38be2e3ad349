#include "eitnoise/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <variant>

#include "eitnoise/error.hpp"
#include "eitnoise/linear_response.hpp"
#include "eitnoise/oracle_integrator.hpp"

namespace eit::cli {

namespace {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

std::string json_string(const std::string& s) {
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') q += '\\';
    q += ch;
  }
  return q + '"';
}

std::string cell_text(const Cell& c) {
  return std::holds_alternative<double>(c) ? format_number(std::get<double>(c))
                                           : std::get<std::string>(c);
}

void write_table(std::ostream& os, const Table& t, OutputFormat fmt) {
  if (fmt == OutputFormat::CSV) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      os << (i ? "," : "") << csv_field(t.columns[i]);
    }
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << (i ? "," : "") << csv_field(cell_text(row[i]));
      }
      os << '\n';
    }
  } else {
    for (const auto& row : t.rows) {
      os << '{';
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << (i ? "," : "") << json_string(t.columns[i]) << ':';
        if (std::holds_alternative<double>(row[i])) {
          os << format_number(std::get<double>(row[i]));
        } else {
          os << json_string(std::get<std::string>(row[i]));
        }
      }
      os << "}\n";
    }
  }
}

// Output sink: the configured file, or `out` for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out) {
    if (path == "-") {
      stream_ = &out;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) {
        throw Error(ErrorKind::Config, "cannot open output '" + path + "'");
      }
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  bool is_stdout() const { return !file_; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw Error(ErrorKind::Config, "failed writing output");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double reported_delay(const RunConfig& cfg, double delay, const Options& opts) {
  return opts.include_vacuum_transit
             ? delay + cfg.params.length / cfg.params.c_light
             : delay;
}

int run_susceptibility(const RunConfig& cfg, Sink& sink) {
  const double ground = cfg.model == NoiseModel::OffDiagonal
                            ? cfg.params.gamma_bc_prime
                            : cfg.params.gamma_bc_popexch;
  Table t{{"omega", "re_lambda", "im_lambda", "transmission"}, {}};
  for (double w : cfg.grid()) {
    const cplx lambda = propagation_exponent(cfg.params, w, ground);
    t.rows.push_back({w, lambda.real(), lambda.imag(),
                      model_transmission(cfg.model, cfg.params, w,
                                         cfg.params.length)});
  }
  write_table(sink.stream(), t, cfg.format);
  return kOk;
}

int run_spectrum(const RunConfig& cfg, Sink& sink) {
  const auto grid = cfg.grid();
  const auto [amp_in, phase_in] = squeezed_input(
      cfg.squeezing_r, grid, {cfg.source, cfg.source_bandwidth});
  const auto amp_out =
      output_spectrum(cfg.model, amp_in, cfg.params, cfg.params.length);
  const auto phase_out =
      output_spectrum(cfg.model, phase_in, cfg.params, cfg.params.length);
  const std::string tag = to_string(cfg.model);
  Table t{{"omega", "s_in_amplitude", "s_out_amplitude_" + tag, "s_in_phase",
           "s_out_phase_" + tag},
          {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.rows.push_back({grid[i], amp_in.values[i], amp_out.values[i],
                      phase_in.values[i], phase_out.values[i]});
  }
  write_table(sink.stream(), t, cfg.format);
  return kOk;
}

int run_squeezing(const RunConfig& cfg, const Options& opts, Sink& sink,
                  std::ostream& summary) {
  const auto grid = cfg.grid();
  const auto rep = squeezing_delay_report(cfg.squeezing_r, cfg.params,
                                          cfg.params.length, grid,
                                          {cfg.source, cfg.source_bandwidth});
  Table t{{"omega", "s_in_squeezed", "s_out_squeezed", "s_in_antisqueezed",
           "s_out_antisqueezed"},
          {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.rows.push_back({grid[i], rep.s_in_squeezed.values[i],
                      rep.s_out_squeezed.values[i],
                      rep.s_in_antisqueezed.values[i],
                      rep.s_out_antisqueezed.values[i]});
  }
  write_table(sink.stream(), t, cfg.format);
  summary << "delay_s = " << format_number(reported_delay(cfg, rep.delay_s, opts))
          << "\npreservation_ratio = " << format_number(rep.preservation_ratio)
          << '\n';
  return kOk;
}

int run_entanglement(const RunConfig& cfg, const Options& opts, Sink& sink,
                     std::ostream& summary) {
  const auto grid = cfg.grid();
  EntanglementOptions eopts;
  eopts.compensation = cfg.compensation;
  const auto rep = entanglement_delay_report(cfg.squeezing_r, cfg.params,
                                             cfg.params.length, grid, eopts);
  Table t{{"omega", "duan", "reid"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.rows.push_back({grid[i], rep.duan[i], rep.reid[i]});
  }
  write_table(sink.stream(), t, cfg.format);
  summary << "delay_s = " << format_number(reported_delay(cfg, rep.delay_s, opts))
          << "\nentangled_bandwidth = " << format_number(rep.entangled_bandwidth)
          << '\n';
  return kOk;
}

int run_consistency(const RunConfig& cfg, Sink& sink, std::ostream& summary) {
  Table t{{"model", "epsilon", "population_deficit", "verdict"}, {}};
  Verdict selected = Verdict::ConsistentSecondOrder;
  for (NoiseModel m : {NoiseModel::OffDiagonal, NoiseModel::PopulationExchange}) {
    const ConsistencyReport r = weak_probe_consistency(cfg.params, cfg.probe, m);
    t.rows.push_back({std::string(to_string(m)), r.epsilon,
                      r.population_deficit, std::string(to_string(r.verdict))});
    summary << to_string(m) << ": epsilon = " << format_number(r.epsilon)
            << ", 1 - sigma_bb = " << format_number(r.population_deficit)
            << ", verdict = " << to_string(r.verdict) << '\n';
    if (m == cfg.model) selected = r.verdict;
  }
  write_table(sink.stream(), t, cfg.format);
  return selected == Verdict::Inconsistent ? kInconsistent : kOk;
}

int run_verify(const RunConfig& cfg, Sink& sink, std::ostream& summary) {
  constexpr double kOracleTol = 1e-3;
  constexpr double kLinearTol = 1e-10;
  constexpr std::size_t kMaxPoints = 5;
  const auto grid = cfg.grid();
  std::vector<double> picks;
  for (std::size_t k = 0; k < kMaxPoints; ++k) {
    const std::size_t i = k * (grid.size() - 1) / (kMaxPoints - 1);
    if (picks.empty() || picks.back() != grid[i]) picks.push_back(grid[i]);
  }

  const double probe = std::abs(cfg.params.omega_c) > 0.0 && cfg.params.g > 0.0
                           ? 1e-3 * std::abs(cfg.params.omega_c) / cfg.params.g
                           : 1e-3;
  Table t{{"omega", "re_lambda", "im_lambda", "re_lambda_linear",
           "im_lambda_linear", "re_lambda_oracle", "im_lambda_oracle",
           "rel_dev_oracle"},
          {}};
  double max_linear = 0.0;
  double max_oracle = 0.0;
  for (double w : picks) {
    const cplx closed = propagation_exponent(cfg.params, w);
    const cplx linear = propagation_exponent_linear_solve(cfg.params, w);
    const cplx oracle = exponent_from_response(
        cfg.params, step_response_susceptibility(cfg.params, probe, w));
    const double scale = std::max(std::abs(closed), 1e-300);
    const double dev_oracle = std::abs(oracle - closed) / scale;
    max_linear = std::max(max_linear, std::abs(linear - closed) / scale);
    max_oracle = std::max(max_oracle, dev_oracle);
    t.rows.push_back({w, closed.real(), closed.imag(), linear.real(),
                      linear.imag(), oracle.real(), oracle.imag(), dev_oracle});
  }
  write_table(sink.stream(), t, cfg.format);
  const bool ok = max_oracle <= kOracleTol && max_linear <= kLinearTol;
  summary << "max_rel_dev_linear_solve = " << format_number(max_linear)
          << "\nmax_rel_dev_time_domain = " << format_number(max_oracle)
          << "\nverify: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

RunConfig resolve_config(const Options& opts) {
  std::optional<RunConfig> base;
  if (opts.preset) base = preset(*opts.preset);
  RunConfig cfg;
  if (opts.config_path) {
    cfg = parse_config(read_file(*opts.config_path), base ? &*base : nullptr);
  } else if (base) {
    cfg = *base;
  } else {
    throw Error(ErrorKind::Config, "no configuration: pass --config or --preset");
  }
  if (opts.output) cfg.output_path = *opts.output;
  if (opts.format) cfg.format = parse_format(*opts.format);
  if (opts.model) cfg.model = parse_model(*opts.model);
  validate(cfg);
  return cfg;
}

int execute(const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = resolve_config(opts);
    if (opts.dump_config) {
      // The output flag names the destination of the dump itself.
      Sink sink(opts.output.value_or("-"), out);
      sink.stream() << dump_config(cfg);
      sink.close();
      return kOk;
    }
    const auto& cmd = opts.subcommand;
    if (std::find(std::begin(kSubcommands), std::end(kSubcommands), cmd) ==
        std::end(kSubcommands)) {
      throw Error(ErrorKind::Config, "unknown subcommand '" + cmd + "'");
    }
    Sink sink(cfg.output_path, out);
    std::ostream& summary = sink.is_stdout() ? err : out;
    int code = kOk;
    if (cmd == "susceptibility") {
      code = run_susceptibility(cfg, sink);
    } else if (cmd == "spectrum") {
      code = run_spectrum(cfg, sink);
    } else if (cmd == "squeezing") {
      code = run_squeezing(cfg, opts, sink, summary);
    } else if (cmd == "entanglement") {
      code = run_entanglement(cfg, opts, sink, summary);
    } else if (cmd == "consistency") {
      code = run_consistency(cfg, sink, summary);
    } else {
      code = run_verify(cfg, sink, summary);
    }
    sink.close();
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::Config:
      case ErrorKind::InvalidParams:
      case ErrorKind::GridMismatch:
        return kConfigError;
      default:
        return kSolverFailure;
    }
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Quadrature noise of a weak probe through a Lambda-type EIT medium"};
  Options opts;
  std::string subcommands;
  for (const char* s : kSubcommands) {
    subcommands += subcommands.empty() ? s : std::string("|") + s;
  }
  app.add_option("subcommand", opts.subcommand, subcommands);
  app.add_option("--config", opts.config_path, "key = value parameter file");
  app.add_option("--output", opts.output, "output file, '-' for stdout");
  app.add_option("--format", opts.format, "csv|jsonl");
  app.add_option("--model", opts.model, "offdiag|popexch");
  std::string preset_help = "named parameter set:";
  for (const auto& n : preset_names()) preset_help += " " + n;
  app.add_option("--preset", opts.preset, preset_help);
  app.add_flag("--dump-config", opts.dump_config,
               "print the resolved configuration and exit");
  app.add_flag("--include-vacuum-transit", opts.include_vacuum_transit,
               "add L/c to reported delays");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  if (opts.subcommand.empty() && !opts.dump_config) {
    std::cerr << "error: missing subcommand (" << subcommands << ")\n";
    return kConfigError;
  }
  return execute(opts, std::cout, std::cerr);
}

}  // namespace eit::cli
