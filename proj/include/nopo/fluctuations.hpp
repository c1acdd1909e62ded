#pragma once

// Linearized quantum fluctuations around the stable steady state, in the
// symmetric model (gamma1 = gamma2, delta1 = delta2).
//
// Convention: fluctuations obey d(dz)/dt = -F dz + R with <R R^T> = D dt, so
// the stationary covariance is C = F^{-1} D / 2 whenever D F^T = F D, and the
// two-time correlation <dz(t + tau) dz(t)^T> is F^{-1} exp(-F |tau|) D / 2.

#include <utility>

#include "nopo/linalg.hpp"
#include "nopo/model.hpp"

namespace nopo {

/// Half-width of the band around threshold, relative to eps_th, inside which
/// linearized results are flagged as unreliable.
inline constexpr double kNearThresholdBand = 0.05;

bool near_threshold(const Model& m, double eps) noexcept;

struct BelowThresholdMatrices {
  Mat2c A;  // [[g + i delta, i chi], [i chi, g + i delta]]
  Mat2c B;  // eps * [[0, 1], [1, 0]]
  Mat4c F;  // [[A, -B], [-B*, A*]] acting on (da1, da2, db1, db2)
  Mat4c D;  // [[B, 0], [0, B*]]
  double S2 = 0.0;  // g^2 + chi^2 + delta^2 - eps^2
};

/// Throws RegimeError unless 0 <= eps < eps_th.
BelowThresholdMatrices below_matrices(const Model& m, double eps);

struct EqualTimeCorrelations {
  Mat2c aa;  // <da da^T>
  Mat2c ab;  // <da db^T>
};

/// Closed-form stationary correlations below threshold.
EqualTimeCorrelations equal_time_corr_below(const Model& m, double eps);

/// Generic route: the full 4x4 covariance F^{-1} D / 2.
Mat4c stationary_covariance_below(const Model& m, double eps);

/// <dz(t + tau) dz(t)^T>, symmetric in tau.
Mat4c temporal_corr_below(const Model& m, double eps, double tau);

/// Mean photon number per mode below threshold.
double mean_photon_below(const Model& m, double eps);

struct AboveThresholdMatrices {
  double n0 = 0.0;
  double phase_sum = 0.0;  // phi10 + phi20 of the stable solution
  // (dn+, dphi+) block
  Mat2 F_plus;
  Mat2 D_plus;
  Mat2 C_plus;          // symmetric, consistent with F_plus and D_plus
  Mat2 C_plus_printed;  // C_plus with the (0,1) entry halved
  // (dn-, dphi-) block; D_minus = 2 F_minus C_minus
  Mat2 F_minus;
  Mat2 D_minus;
  Mat2 C_minus;
  bool near_threshold = false;
};

/// Throws RegimeError unless eps > eps_th; DomainError when delta == 0 or chi == 0.
AboveThresholdMatrices above_matrices(const Model& m, double eps);

/// Two-time correlations of (dn+, dphi+) and (dn-, dphi-).
std::pair<Mat2, Mat2> temporal_corr_above(const Model& m, double eps, double tau);

/// Covariance of (dn1, dn2, dphi1, dphi2) assembled from the decoupled blocks.
Eigen::Matrix4d mode_covariance_above(const AboveThresholdMatrices& am);

}  // namespace nopo
