#include "eitnoise/entanglement_cv.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "eitnoise/error.hpp"
#include "eitnoise/linear_response.hpp"

namespace eit {

namespace {

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  return omega;
}

int offset(Arm arm) { return arm == Arm::A ? 0 : 2; }

// Congruence by `s` on one arm: block -> s block s^T, cross -> s cross.
CovarianceMatrix transform_arm(const CovarianceMatrix& cm, Arm arm,
                               const Eigen::Matrix2d& s) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<2, 2>(offset(arm), offset(arm)) = s;
  CovarianceMatrix out = cm;
  out.entries = m * cm.entries * m.transpose();
  return out;
}

}  // namespace

std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& v) {
  // With A = V^1/2 Omega V^1/2 (antisymmetric), -A^2 is symmetric with
  // eigenvalues nu_k^2, each doubled. Stays accurate when nu_1 = nu_2.
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (v + v.transpose()));
  const Eigen::Vector4d lambda = es.eigenvalues().cwiseMax(0.0);
  const Eigen::Matrix4d root =
      es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  const Eigen::Matrix4d a = root * symplectic_form() * root;
  const Eigen::Matrix4d sq = a.transpose() * a;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> nu(0.5 * (sq + sq.transpose()),
                                                          Eigen::EigenvaluesOnly);
  const Eigen::Vector4d n2 = nu.eigenvalues().cwiseMax(0.0);
  // Ascending pairs (n2[0], n2[1]) and (n2[2], n2[3]).
  return {std::sqrt(0.5 * (n2[0] + n2[1])), std::sqrt(0.5 * (n2[2] + n2[3]))};
}

std::array<double, 2> partial_transpose_symplectic_eigenvalues(
    const Eigen::Matrix4d& v) {
  const Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
  const Eigen::Matrix4d pt = flip.asDiagonal() * v * flip.asDiagonal();
  return symplectic_eigenvalues(pt);
}

bool is_bona_fide(const Eigen::Matrix4d& v, double tol) {
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  if (Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(v, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff() <= 0.0) {
    return false;
  }
  return symplectic_eigenvalues(v)[0] >= 1.0 - tol;
}

CovarianceMatrix epr_pair_from_squeezers(double r) {
  if (r < 0.0) throw Error(ErrorKind::InvalidParams, "r must be >= 0");
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  CovarianceMatrix cm;
  cm.entries << ch, 0, sh, 0,
                0, ch, 0, -sh,
                sh, 0, ch, 0,
                0, -sh, 0, ch;
  return cm;
}

Eigen::Matrix2d rotation(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

CovarianceMatrix apply_lossy_channel(const CovarianceMatrix& cm, Arm arm,
                                     double transmission, double phase) {
  if (!(transmission >= 0.0 && transmission <= 1.0)) {
    throw Error(ErrorKind::InvalidParams, "transmission must lie in [0, 1]");
  }
  if (transmission == 1.0 && phase == 0.0) return cm;
  CovarianceMatrix out =
      transform_arm(cm, arm, std::sqrt(transmission) * rotation(phase));
  const int o = offset(arm);
  out.entries.block<2, 2>(o, o) +=
      (1.0 - transmission) * Eigen::Matrix2d::Identity();
  return out;
}

CovarianceMatrix apply_phase(const CovarianceMatrix& cm, Arm arm, double phi) {
  if (phi == 0.0) return cm;
  return transform_arm(cm, arm, rotation(phi));
}

CovarianceMatrix apply_eit_channel(const CovarianceMatrix& cm,
                                   const AtomicParams& params, double length,
                                   Arm arm) {
  if (length == 0.0) return cm;
  const cplx lambda = propagation_exponent(params, cm.sideband);
  const double t = std::exp(-2.0 * lambda.real() * length);
  const double phi = -lambda.imag() * length;
  return apply_lossy_channel(cm, arm, t, phi);
}

double duan_criterion(const CovarianceMatrix& cm) {
  const Eigen::Matrix4d& v = cm.entries;
  const double var_x = v(0, 0) + v(2, 2) - 2.0 * v(0, 2);
  const double var_p = v(1, 1) + v(3, 3) + 2.0 * v(1, 3);
  return var_x + var_p;
}

double reid_epr_criterion(const CovarianceMatrix& cm) {
  const Eigen::Matrix4d& v = cm.entries;
  if (v(2, 2) == 0.0 || v(3, 3) == 0.0) {
    throw Error(ErrorKind::DegenerateConditioning,
                "conditioning quadrature has zero variance");
  }
  const double cond_x = v(0, 0) - v(0, 2) * v(0, 2) / v(2, 2);
  const double cond_p = v(1, 1) - v(1, 3) * v(1, 3) / v(3, 3);
  return cond_x * cond_p;
}

EntanglementDelayReport entanglement_delay_report(
    double r, const AtomicParams& params, double length,
    std::span<const double> omega_grid, const EntanglementOptions& opts) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidParams, "r must be > 0");
  if (omega_grid.empty()) {
    throw Error(ErrorKind::GridMismatch, "empty frequency grid");
  }
  EntanglementDelayReport report;
  AtomicParams with_length = params;
  with_length.length = length;
  report.delay_s =
      std::abs(params.omega_c) > 0.0 ? group_delay(with_length) : 0.0;
  const double tau = std::isfinite(opts.tau) ? opts.tau : report.delay_s;

  const CovarianceMatrix source = epr_pair_from_squeezers(r);
  report.omega_grid.assign(omega_grid.begin(), omega_grid.end());
  for (double w : omega_grid) {
    CovarianceMatrix cm = source;
    cm.sideband = w;
    cm = apply_eit_channel(cm, params, length, Arm::B);
    // The pair's correlations are phase conjugate, so arm A is rotated by
    // the opposite of the phase it must match on arm B.
    switch (opts.compensation) {
      case DelayCompensation::None:
        break;
      case DelayCompensation::GroupDelay:
        cm = apply_phase(cm, Arm::A, -w * tau);
        break;
      case DelayCompensation::Exact:
        if (length != 0.0) {
          cm = apply_phase(cm, Arm::A,
                           propagation_exponent(params, w).imag() * length);
        }
        break;
    }
    report.duan.push_back(duan_criterion(cm));
    report.reid.push_back(reid_epr_criterion(cm));
  }

  const auto nearest = std::min_element(
      omega_grid.begin(), omega_grid.end(),
      [](double a, double b) { return std::abs(a) < std::abs(b); });
  std::size_t lo = static_cast<std::size_t>(nearest - omega_grid.begin());
  std::size_t hi = lo;
  if (report.duan[lo] < 4.0) {
    while (lo > 0 && report.duan[lo - 1] < 4.0) --lo;
    while (hi + 1 < omega_grid.size() && report.duan[hi + 1] < 4.0) ++hi;
    report.entangled_low = omega_grid[lo];
    report.entangled_high = omega_grid[hi];
    report.entangled_bandwidth = omega_grid[hi] - omega_grid[lo];
  }
  return report;
}

}  // namespace eit
