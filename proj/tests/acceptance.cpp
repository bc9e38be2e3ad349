// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eitnoise/cli.hpp"
#include "eitnoise/config.hpp"
#include "eitnoise/entanglement_cv.hpp"
#include "eitnoise/lambda_system.hpp"
#include "eitnoise/linear_response.hpp"
#include "eitnoise/noise_spectra.hpp"
#include "eitnoise/oracle_integrator.hpp"
#include "oracles.hpp"

using namespace eit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string detail = o.detail;
  if (budget_s > 0 && dt > budget_s) {
    o.pass = false;
    detail += "; over time budget";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s: %s (%.3f s", o.pass ? "PASS" : "FAIL", id, title, detail.c_str(), dt);
  if (budget_s > 0) std::printf(", budget %g s", budget_s);
  std::printf(")\n");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void merge(Outcome& o, bool ok, const std::string& part) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += std::string(ok ? "" : "FAILED ") + part;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

AtomicParams ideal(double gamma_prime) {
  AtomicParams p = preset("eit").params;
  p.gamma_bc_prime = gamma_prime;
  return p;
}

}  // namespace

int main() {
  criterion(1, "vacuum preservation", 5.0, [] {
    testing::Draw draw(1001);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const AtomicParams p = testing::random_params(draw);
      const double scale = std::max(p.gamma_ba, std::abs(p.omega_c));
      const auto grid = linear_grid(-10 * scale, 10 * scale, 201);
      const auto vac = SpectrumSeries::flat(grid, 1.0);
      for (double length : {0.0, 1.0, 100.0}) {
        const auto out = output_spectrum(NoiseModel::OffDiagonal, vac, p, length);
        for (double v : out.values) worst = std::max(worst, std::abs(v - 1.0));
      }
    }
    return Outcome{worst < 1e-12, fmt("max |S_out - 1| = %.3g over 300 runs, tol 1e-12", worst)};
  });

  criterion(2, "population-exchange commutation violation", 1.0, [] {
    const RunConfig cfg = preset("popexch-violation");
    const std::vector<double> grid{0.0};
    const auto out = output_spectrum(NoiseModel::PopulationExchange,
                                     SpectrumSeries::flat(grid, 1.0), cfg.params,
                                     cfg.params.length);
    const double s0 = out.values[0];
    return Outcome{std::abs(s0 - 0.99091) <= 1e-4 && s0 < 1.0,
                   fmt("S_out(0) = %.12f, want 0.99091 +- 1e-4 and < 1", s0)};
  });

  criterion(3, "population-exchange ground-state population", 0.0, [] {
    testing::Draw draw(1003);
    double worst = 0.0;
    bool all_inconsistent = true;
    for (int k = 0; k < 20; ++k) {
      AtomicParams p = testing::random_params(draw);
      p.gamma_bc_popexch = draw.log_uniform(1e-3, 1.0);
      const cplx e = draw.phase(draw.log_uniform(1e-5, 1e-2));
      const double got = population_exchange_steady_bb(p, e);
      const double want = -2.0 * p.g * p.g * std::norm(e) /
                          (p.gamma_ba * p.gamma_bc_popexch + std::norm(p.omega_c));
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
      all_inconsistent = all_inconsistent &&
          weak_probe_consistency(p, e, NoiseModel::PopulationExchange).verdict ==
              Verdict::Inconsistent;
    }
    Outcome o;
    merge(o, worst <= 1e-14, fmt("max rel dev %.3g (tol 1e-14)", worst));
    merge(o, all_inconsistent, "verdict Inconsistent at all 20 points");
    return o;
  });

  criterion(4, "second-order weak-probe validity", 0.0, [] {
    const AtomicParams p = preset("weak-probe").params;
    const double d3 = 1.0 - steady_state(p, 1e-3).sigma_bb;
    const double d4 = 1.0 - steady_state(p, 1e-4).sigma_bb;
    const double ratio = (d3 / 1e-6) / (d4 / 1e-8);
    Outcome o;
    merge(o, std::abs(ratio - 1.0) <= 0.05, fmt("deficit/eps^2 ratio %.6f (within 5%%)", ratio));
    const RelaxationRates rates = relaxation_rates(p, 1e-3);
    IntegrateOptions opts;
    opts.record_stride = 1000;
    const auto traj = integrate(p, 1e-3, BlochState::dark(), 40.0 / rates.slowest, 1e-12, opts);
    const double dt = 1.0 - traj.final_state().sigma_bb;
    const double rel = std::abs(dt - d3) / d3;
    merge(o, rel <= 1e-6, fmt("time-domain deficit rel dev %.3g (tol 1e-6)", rel));
    return o;
  });

  criterion(5, "perfect transparency", 0.0, [] {
    const AtomicParams p = ideal(0.0);
    const double re0 = propagation_exponent(p, 0.0).real();
    double worst_t = 0.0;
    for (double length : {0.0, 1.0, 10.0, 100.0, 1e4, 1e8}) {
      worst_t = std::max(worst_t, std::abs(power_transmission(p, 0.0, length) - 1.0));
    }
    Outcome o;
    merge(o, std::abs(re0) <= 1e-14, fmt("|Re Lambda(0)| = %.3g (tol 1e-14)", std::abs(re0)));
    merge(o, worst_t == 0.0, fmt("max |T(0) - 1| = %.3g for L up to 1e8", worst_t));
    return o;
  });

  criterion(6, "time-domain susceptibility oracle", 60.0, [] {
    testing::Draw draw(1006);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      AtomicParams p = testing::random_params(draw);
      p.gamma_bc_prime = draw.log_uniform(1e-2, 0.3);
      const double w = draw.uniform(-2.0, 2.0) * std::max(p.gamma_ba, std::abs(p.omega_c));
      const double e0 = 1e-3 * std::abs(p.omega_c) / p.g;
      const cplx lam = exponent_from_response(p, step_response_susceptibility(p, e0, w));
      const cplx want = propagation_exponent(p, w);
      worst = std::max(worst, std::abs(lam - want) / std::abs(want));
    }
    return Outcome{worst <= 1e-3, fmt("max rel dev %.3g at 10 points (tol 1e-3)", worst)};
  });

  criterion(7, "slow-light delay", 0.0, [] {
    AtomicParams p = ideal(0.0);
    const double want = p.coupling() * p.length / p.omega_c_sq();
    const double tau = group_delay(p);
    AtomicParams p2 = p;
    p2.omega_c *= 2.0;
    const double factor = tau / group_delay(p2);
    Outcome o;
    merge(o, std::abs(tau / want - 1.0) <= 0.02,
          fmt("delay %.10g", tau) + fmt(" vs %.10g (2%%)", want));
    merge(o, std::abs(factor / 4.0 - 1.0) <= 0.02, fmt("doubling control: factor %.6f (4 +- 2%%)", factor));
    return o;
  });

  criterion(8, "squeezing preservation", 0.0, [] {
    const RunConfig cfg = preset("squeezing");
    const std::vector<double> grid{0.0};
    const double ratio =
        squeezing_delay_report(cfg.squeezing_r, cfg.params, cfg.params.length, grid)
            .preservation_ratio;
    Outcome o;
    merge(o, std::abs(ratio - 0.9802) <= 1e-3, fmt("ratio %.10f (0.9802 +- 1e-3)", ratio));
    bool monotone = true;
    double prev = 0.0, last = 0.0;
    for (int k = 9; k >= 0; --k) {
      AtomicParams p = cfg.params;
      p.gamma_bc_prime = cfg.params.gamma_bc_prime * k / 9.0;
      last = squeezing_delay_report(cfg.squeezing_r, p, p.length, grid).preservation_ratio;
      monotone = monotone && last > prev;
      prev = last;
    }
    merge(o, monotone && std::abs(last - 1.0) <= 1e-12,
          fmt("10-point sweep increasing to %.15f", last));
    return o;
  });

  criterion(9, "entanglement delay and preservation", 0.0, [] {
    const RunConfig cfg = preset("entanglement");
    const std::vector<double> grid{0.0};
    Outcome o;
    const auto rep = entanglement_delay_report(cfg.squeezing_r, cfg.params, cfg.params.length, grid);
    merge(o, std::abs(rep.duan[0] - 1.4715) <= 1e-3, fmt("duan(0) %.6f (1.4715 +- 1e-3)", rep.duan[0]));

    // T = 0.98 on arm B with a phase, compensated on arm A.
    const double phi = 0.7;
    auto cm = apply_lossy_channel(epr_pair_from_squeezers(0.5), Arm::B, 0.98, phi);
    cm = apply_phase(cm, Arm::A, -phi);
    const double duan = duan_criterion(cm);
    // Matrix-algebra oracle: V' = M V M^T + N, M = I (+) sqrt(T) I, N = 0 (+) (1-T) I.
    const double c = std::cosh(1.0), s = std::sinh(1.0);
    Eigen::Matrix4d v;
    v << c, 0, s, 0, 0, c, 0, -s, s, 0, c, 0, 0, -s, 0, c;
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.bottomRightCorner<2, 2>() *= std::sqrt(0.98);
    Eigen::Matrix4d n = Eigen::Matrix4d::Zero();
    n.bottomRightCorner<2, 2>() = 0.02 * Eigen::Matrix2d::Identity();
    const double oracle = testing::combo_variance(m * v * m.transpose() + n, Eigen::Vector4d(1, 0, -1, 0)) +
                          testing::combo_variance(m * v * m.transpose() + n, Eigen::Vector4d(0, 1, 0, 1));
    merge(o, std::abs(duan - oracle) <= 1e-12, fmt("T=0.98 duan %.6f matches oracle", duan) + fmt(" %.6f", oracle));
    merge(o, std::abs(duan - 0.7685) <= 1e-3, fmt("T=0.98 duan %.6f vs stated 0.7685 +- 1e-3", duan));

    double absorbed = 0.0;
    for (double t : {1e-2, 1e-4, 1e-8, 0.0}) {
      absorbed = duan_criterion(apply_lossy_channel(epr_pair_from_squeezers(0.5), Arm::B, t, 0.0));
    }
    merge(o, std::abs(absorbed - 4.0) <= 1e-3,
          fmt("T->0 duan %.6f vs stated limit 4", absorbed) +
              fmt(" (2+2cosh(2r) = %.6f)", 2.0 + 2.0 * std::cosh(1.0)));
    return o;
  });

  criterion(10, "cli determinism and exit codes", 0.0, [] {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "eitnoise_acceptance";
    fs::create_directories(dir);
    Outcome o;
    std::ostringstream sink;
    bool identical = true;
    const std::pair<const char*, const char*> runs[] = {
        {"susceptibility", "eit"}, {"spectrum", "popexch-violation"},
        {"squeezing", "squeezing"}, {"entanglement", "entanglement"},
        {"consistency", "weak-probe"}};
    for (const auto& [sub, name] : runs) {
      std::string first;
      for (int rep = 0; rep < 2; ++rep) {
        cli::Options opts;
        opts.subcommand = sub;
        opts.preset = name;
        opts.output = (dir / (std::string(sub) + std::to_string(rep) + ".csv")).string();
        cli::execute(opts, sink, sink);
        const std::string bytes = slurp(*opts.output);
        if (rep == 0) first = bytes;
        identical = identical && !bytes.empty() && bytes == first;
      }
    }
    merge(o, identical, "5 preset runs byte-identical on repeat");
    cli::Options cons;
    cons.subcommand = "consistency";
    cons.preset = "weak-probe-popexch";
    const int popexch = cli::execute(cons, sink, sink);
    cons.preset = "weak-probe";
    const int offdiag = cli::execute(cons, sink, sink);
    merge(o, popexch == 4 && offdiag == 0,
          "consistency exit " + std::to_string(popexch) + " (popexch), " +
              std::to_string(offdiag) + " (offdiag)");
    fs::remove_all(dir);
    return o;
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
