#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <Eigen/Core>

namespace eit::detail {

/// Embedded Dormand-Prince 5(4) stepper, local extrapolation, max-norm error
/// control. Coefficients from Dormand & Prince (1980).
template <int Dim>
class DormandPrince {
 public:
  using Vec = Eigen::Matrix<double, Dim, 1>;

  struct Tolerance {
    double rel = 1e-8;
    double abs = 1e-8;
  };

  enum class Status { Done, StepUnderflow, BudgetExhausted };

  struct Result {
    Status status = Status::Done;
    double t = 0.0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double last_step = 0.0;
  };

  DormandPrince(Tolerance tol, std::size_t max_steps)
      : tol_(tol), max_steps_(max_steps) {}

  /// Integrates y from t0 to t1 in place. `observe(t, y)` is called after
  /// every accepted step.
  template <class Rhs, class Observer>
  Result integrate(Rhs&& f, Vec& y, double t0, double t1, double h0,
                   Observer&& observe) const {
    Result res;
    double t = t0;
    double h = std::min(h0, t1 - t0);
    Vec k1 = f(t, y);
    while (t < t1) {
      if (res.accepted + res.rejected >= max_steps_) {
        res.status = Status::BudgetExhausted;
        break;
      }
      if (h < 1e-14 * std::max(std::abs(t), std::abs(t1 - t0))) {
        res.status = Status::StepUnderflow;
        break;
      }
      const bool last = t + h >= t1;
      if (last) h = t1 - t;

      const Vec k2 = f(t + c2 * h, y + h * (a21 * k1));
      const Vec k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      const Vec k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const Vec k5 = f(t + c5 * h,
                       y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Vec k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 +
                                       a64 * k4 + a65 * k5));
      const Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const Vec k7 = f(t + h, y5);
      const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                           e7 * k7);

      double norm = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double sc =
            tol_.abs + tol_.rel * std::max(std::abs(y[i]), std::abs(y5[i]));
        norm = std::max(norm, std::abs(err[i]) / sc);
      }

      if (norm <= 1.0) {
        t = last ? t1 : t + h;
        y = y5;
        k1 = k7;  // first-same-as-last
        ++res.accepted;
        res.last_step = h;
        observe(t, y);
        const double grow =
            norm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(norm, -0.2));
        h *= grow;
      } else {
        ++res.rejected;
        h *= std::max(0.2, 0.9 * std::pow(norm, -0.2));
      }
    }
    res.t = t;
    return res;
  }

 private:
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b(5th) - b(4th)
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  Tolerance tol_;
  std::size_t max_steps_;
};

}  // namespace eit::detail
