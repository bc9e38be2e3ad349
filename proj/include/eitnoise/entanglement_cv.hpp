#pragma once

#include <array>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "eitnoise/params.hpp"

namespace eit {

/// Two-mode Gaussian covariance matrix over (X_A, P_A, X_B, P_B), vacuum =
/// identity, at one sideband frequency.
struct CovarianceMatrix {
  Eigen::Matrix4d entries = Eigen::Matrix4d::Identity();
  double sideband = 0.0;

  Eigen::Matrix2d block_a() const { return entries.topLeftCorner<2, 2>(); }
  Eigen::Matrix2d block_b() const { return entries.bottomRightCorner<2, 2>(); }
  Eigen::Matrix2d block_ab() const { return entries.topRightCorner<2, 2>(); }
};

enum class Arm { A, B };

/// Symplectic eigenvalues of a positive-definite covariance matrix, ascending.
std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& v);

/// Same for the partial transpose (P_B -> -P_B).
std::array<double, 2> partial_transpose_symplectic_eigenvalues(
    const Eigen::Matrix4d& v);

/// Symmetric and all symplectic eigenvalues >= 1 - tol.
bool is_bona_fide(const Eigen::Matrix4d& v, double tol = 1e-10);

/// Two-mode squeezed vacuum: cosh(2r) on the diagonal blocks, sinh(2r) Z on
/// the off-diagonal blocks with Z = diag(1, -1).
CovarianceMatrix epr_pair_from_squeezers(double r);

/// Rotation of one mode's (X, P) by phi.
Eigen::Matrix2d rotation(double phi);

/// Lossy, dispersive single-mode channel on one arm: X -> sqrt(T) R(phi) X
/// with (1 - T) vacuum noise added to that arm.
CovarianceMatrix apply_lossy_channel(const CovarianceMatrix& cm, Arm arm,
                                     double transmission, double phase);

/// Rotates one arm by phi without loss.
CovarianceMatrix apply_phase(const CovarianceMatrix& cm, Arm arm, double phi);

/// The medium as a channel at the matrix's sideband: T = exp(-2 Re Lambda L),
/// phi = -Im Lambda L.
CovarianceMatrix apply_eit_channel(const CovarianceMatrix& cm,
                                   const AtomicParams& params, double length,
                                   Arm arm);

/// V(X_A - X_B) + V(P_A + P_B). Separable states give >= 4.
double duan_criterion(const CovarianceMatrix& cm);

/// V(X_A|X_B) V(P_A|P_B). Values < 1 demonstrate the EPR paradox.
/// Throws Error{DegenerateConditioning} when a conditioning variance is 0.
double reid_epr_criterion(const CovarianceMatrix& cm);

enum class DelayCompensation {
  None,        // arm A untouched
  GroupDelay,  // arm A gets the delay phase w * tau, tau = group delay
  Exact,       // arm A gets the exact per-sideband phase of arm B
};

struct EntanglementOptions {
  DelayCompensation compensation = DelayCompensation::GroupDelay;
  // Overrides tau for GroupDelay when set to a finite value.
  double tau = std::numeric_limits<double>::quiet_NaN();
};

struct EntanglementDelayReport {
  std::vector<double> omega_grid;
  std::vector<double> duan;
  std::vector<double> reid;
  double delay_s = 0.0;
  // Contiguous interval around the grid point nearest w = 0 with duan < 4.
  double entangled_low = 0.0;
  double entangled_high = 0.0;
  double entangled_bandwidth = 0.0;
};

/// Sweeps an EPR pair of squeezing r through the medium on arm B.
EntanglementDelayReport entanglement_delay_report(
    double r, const AtomicParams& params, double length,
    std::span<const double> omega_grid, const EntanglementOptions& opts = {});

}  // namespace eit
