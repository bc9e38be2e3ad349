#include "eitnoise/oracle_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "eitnoise/detail/dormand_prince.hpp"
#include "eitnoise/error.hpp"

namespace eit {

namespace {

using Stepper8 = detail::DormandPrince<8>;
using Stepper10 = detail::DormandPrince<10>;

Stepper8::Vec to_vec(const BlochState& s) {
  const auto a = s.to_real();
  return Eigen::Map<const Stepper8::Vec>(a.data());
}

BlochState from_vec(const Eigen::Ref<const Eigen::VectorXd>& v) {
  std::array<double, 8> a{};
  for (int i = 0; i < 8; ++i) a[i] = v[i];
  return BlochState::from_real(a);
}

[[noreturn]] void throw_underflow(const char* what, double t,
                                  const RelaxationRates& rates) {
  std::ostringstream msg;
  msg << what << " at t = " << t << " (stiff ratio " << rates.stiff_ratio()
      << ")";
  throw Error(ErrorKind::StepUnderflow, msg.str());
}

void check_stiffness(const RelaxationRates& rates) {
  if (rates.stiff_ratio() > kMaxStiffRatio) {
    std::ostringstream msg;
    msg << "rate disparity too large for explicit integration (stiff ratio "
        << rates.stiff_ratio() << " > " << kMaxStiffRatio << ")";
    throw Error(ErrorKind::StepUnderflow, msg.str());
  }
}

}  // namespace

RelaxationRates relaxation_rates(const AtomicParams& params, cplx probe) {
  const Eigen::EigenSolver<Eigen::Matrix<double, 8, 8>> es(
      bloch_jacobian(params, probe), false);
  RelaxationRates rates;
  rates.slowest = std::numeric_limits<double>::infinity();
  for (const auto& ev : es.eigenvalues()) {
    rates.slowest = std::min(rates.slowest, std::abs(ev.real()));
    rates.fastest = std::max(rates.fastest, std::abs(ev));
  }
  return rates;
}

Trajectory integrate(const AtomicParams& params, cplx probe,
                     const BlochState& initial, double t_final, double tol,
                     const IntegrateOptions& opts) {
  validate(params);
  if (!(t_final > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "t_final must be > 0");
  }
  if (!(tol > 0.0 && tol <= 1e-3)) {
    throw Error(ErrorKind::InvalidParams, "tol must lie in (0, 1e-3]");
  }
  const RelaxationRates rates = relaxation_rates(params, probe);
  // A vanishing slow rate is a conserved quantity, not stiffness.
  if (rates.slowest > 0.0) check_stiffness(rates);

  Trajectory traj;
  traj.params_snapshot = params;
  traj.probe = probe;
  traj.times.push_back(0.0);
  traj.states.push_back(initial);

  auto rhs = [&](double, const Stepper8::Vec& y) {
    const auto d = to_real(bloch_rhs(from_vec(y), params, probe));
    return Stepper8::Vec(Eigen::Map<const Stepper8::Vec>(d.data()));
  };
  const double h0 =
      rates.fastest > 0.0 ? std::min(t_final, 0.01 / rates.fastest) : t_final;
  const std::size_t stride = std::max<std::size_t>(1, opts.record_stride);
  std::size_t count = 0;

  Stepper8 stepper({tol, tol}, opts.max_steps);
  Stepper8::Vec y = to_vec(initial);
  const auto res = stepper.integrate(rhs, y, 0.0, t_final, h0,
                                     [&](double t, const Stepper8::Vec& v) {
                                       if (++count % stride == 0 || t == t_final) {
                                         traj.times.push_back(t);
                                         traj.states.push_back(from_vec(v));
                                       }
                                     });
  if (res.status == Stepper8::Status::StepUnderflow) {
    throw_underflow("step size underflow", res.t, rates);
  }
  if (res.status == Stepper8::Status::BudgetExhausted) {
    throw_underflow("step budget exhausted", res.t, rates);
  }
  return traj;
}

cplx step_response_susceptibility(const AtomicParams& params,
                                  double probe_amplitude,
                                  double modulation_freq,
                                  const SusceptibilityOptions& opts) {
  validate(params);
  if (!(probe_amplitude > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "probe amplitude must be > 0");
  }
  const double m = opts.modulation_depth;
  const double w = modulation_freq;
  const cplx e0{probe_amplitude, 0.0};
  const BlochState dc = steady_state(params, e0);
  const double dc_aa = dc.sigma_aa();

  const RelaxationRates rates = relaxation_rates(params, e0);
  if (!(rates.slowest > 0.0)) {
    throw Error(ErrorKind::DegenerateSteadyState,
                "no relaxation toward the steady state");
  }
  check_stiffness(rates);
  const double settle = opts.settle_lifetimes / rates.slowest;
  const double window =
      w == 0.0 ? 0.0 : opts.window_periods * 2.0 * std::numbers::pi / std::abs(w);

  // Deviation from the E0 steady state. The right-hand side is affine in the
  // state, so the deviation obeys
  //   dy/dt = [rhs(dc, E(t)) - rhs(dc, E0)] + rhs_homogeneous(y, E(t))
  // exactly, without forming 1 - (small) differences.
  const BlochDerivative still = bloch_rhs_with_excited(dc, dc_aa, params, e0);
  bool demodulate = false;
  auto rhs = [&](double t, const Stepper10::Vec& y) {
    const cplx carrier = std::exp(cplx{0.0, -w * t});
    const cplx field = e0 * (1.0 + m * carrier);
    const BlochDerivative drive =
        bloch_rhs_with_excited(dc, dc_aa, params, field);
    const BlochState dev = from_vec(y.head<8>());
    const BlochDerivative homog = bloch_rhs_with_excited(
        dev, -dev.sigma_bb - dev.sigma_cc, params, field);
    Stepper10::Vec out;
    out[0] = drive.d_bb - still.d_bb + homog.d_bb;
    out[1] = drive.d_cc - still.d_cc + homog.d_cc;
    const cplx d_ba = drive.d_ba - still.d_ba + homog.d_ba;
    const cplx d_bc = drive.d_bc - still.d_bc + homog.d_bc;
    const cplx d_ac = drive.d_ac - still.d_ac + homog.d_ac;
    out[2] = d_ba.real();
    out[3] = d_ba.imag();
    out[4] = d_bc.real();
    out[5] = d_bc.imag();
    out[6] = d_ac.real();
    out[7] = d_ac.imag();
    if (demodulate) {
      const cplx mixed = dev.sigma_ba * std::conj(carrier);
      out[8] = mixed.real();
      out[9] = mixed.imag();
    } else {
      out[8] = out[9] = 0.0;
    }
    return out;
  };

  // Absolute floor scaled to the expected size of the sideband deviation.
  const double response_scale =
      m * params.g * probe_amplitude / std::max(rates.fastest, 1e-300);
  Stepper10 stepper({opts.tol, opts.tol * response_scale}, 50'000'000);
  Stepper10::Vec y = Stepper10::Vec::Zero();
  const double h0 = 0.01 / rates.fastest;
  auto ignore = [](double, const Stepper10::Vec&) {};

  auto run = [&](double t0, double t1) {
    const auto res = stepper.integrate(rhs, y, t0, t1, h0, ignore);
    if (res.status != Stepper10::Status::Done) {
      throw_underflow("susceptibility integration failed", res.t, rates);
    }
  };
  run(0.0, settle);
  if (w == 0.0) {
    return cplx{y[2], y[3]} / (probe_amplitude * m);
  }
  demodulate = true;
  run(settle, settle + window);
  return cplx{y[8], y[9]} / (probe_amplitude * m * window);
}

cplx exponent_from_response(const AtomicParams& params, cplx response) {
  return cplx{0.0, -1.0} * params.g * params.N * response / params.c_light;
}

}  // namespace eit
