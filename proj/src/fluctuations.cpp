#include "nopo/fluctuations.hpp"

#include <cmath>
#include <sstream>

#include "nopo/error.hpp"
#include "nopo/semiclassical.hpp"

namespace nopo {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

double sign(double x) noexcept { return (x > 0.0) - (x < 0.0); }

void require_below(const Model& m, double eps, const char* what) {
  m.require_symmetric(what);
  if (!(eps >= 0.0)) throw DomainError(std::string(what) + ": eps must be >= 0");
  if (!(eps < m.eps_th())) {
    std::ostringstream os;
    os << what << ": eps = " << eps << " is not below threshold eps_th = " << m.eps_th()
       << "; use the above-threshold path";
    throw RegimeError(os.str());
  }
}

}  // namespace

bool near_threshold(const Model& m, double eps) noexcept {
  return std::abs(eps - m.eps_th()) < kNearThresholdBand * m.eps_th();
}

BelowThresholdMatrices below_matrices(const Model& m, double eps) {
  require_below(m, eps, "below_matrices");
  const double g = m.gamma();
  const double d = m.delta();
  const double chi = m.chi();

  BelowThresholdMatrices bm;
  bm.A << g + I * d, I * chi, I * chi, g + I * d;
  bm.B << 0.0, eps, eps, 0.0;
  bm.F << bm.A, -bm.B, -bm.B.conjugate(), bm.A.conjugate();
  bm.D.setZero();
  bm.D.topLeftCorner<2, 2>() = bm.B;
  bm.D.bottomRightCorner<2, 2>() = bm.B.conjugate();
  bm.S2 = g * g + chi * chi + d * d - eps * eps;

  const double mismatch = (bm.D * bm.F.transpose() - bm.F * bm.D).cwiseAbs().maxCoeff();
  if (mismatch > 1e-12 * (1.0 + bm.F.cwiseAbs().maxCoeff() * eps)) {
    throw ContractError("diffusion and drift matrices fail D F^T = F D");
  }
  return bm;
}

EqualTimeCorrelations equal_time_corr_below(const Model& m, double eps) {
  require_below(m, eps, "equal_time_corr_below");
  const double g = m.gamma();
  const double d = m.delta();
  const double chi = m.chi();
  const double s2 = g * g + chi * chi + d * d - eps * eps;
  const double den = s2 * s2 - 4.0 * d * d * chi * chi;

  Mat2c re;
  re << -2.0 * chi * d, s2, s2, -2.0 * chi * d;
  Mat2c im;
  im << chi * (s2 - 2.0 * d * d), d * (s2 - 2.0 * chi * chi), d * (s2 - 2.0 * chi * chi),
      chi * (s2 - 2.0 * d * d);

  EqualTimeCorrelations c;
  c.aa = (eps / (2.0 * den)) * (g * re - I * im);
  Mat2c ab;
  ab << s2, -2.0 * chi * d, -2.0 * chi * d, s2;
  c.ab = (eps * eps / (2.0 * den)) * ab;
  return c;
}

Mat4c stationary_covariance_below(const Model& m, double eps) {
  const BelowThresholdMatrices bm = below_matrices(m, eps);
  return 0.5 * bm.F.partialPivLu().solve(bm.D);
}

Mat4c temporal_corr_below(const Model& m, double eps, double tau) {
  const BelowThresholdMatrices bm = below_matrices(m, eps);
  const Mat4c decay = expm(Mat4c(-std::abs(tau) * bm.F));
  return 0.5 * bm.F.partialPivLu().solve(decay * bm.D);
}

double mean_photon_below(const Model& m, double eps) {
  require_below(m, eps, "mean_photon_below");
  const double g = m.gamma();
  const double d = m.delta();
  const double chi = m.chi();
  const double s2 = g * g + chi * chi + d * d - eps * eps;
  return eps * eps * s2 / (2.0 * (s2 * s2 - 4.0 * d * d * chi * chi));
}

AboveThresholdMatrices above_matrices(const Model& m, double eps) {
  m.require_symmetric("above_matrices");
  if (!(eps > m.eps_th())) {
    std::ostringstream os;
    os << "above_matrices: eps = " << eps << " is not above threshold eps_th = " << m.eps_th();
    throw RegimeError(os.str());
  }
  const double g = m.gamma();
  const double d = m.delta();
  const double ad = std::abs(d);
  const double chi = m.chi();
  const double lam = m.lambda();
  if (d == 0.0) throw DomainError("above-threshold fluctuations are singular at delta = 0");
  if (!(chi > 0.0)) throw DomainError("above-threshold fluctuations are singular at chi = 0");

  const SteadyStateBranch ss = steady_state(m, eps, Branch::Plus);
  AboveThresholdMatrices am;
  am.n0 = ss.n10;
  am.phase_sum = ss.phase_sum;
  am.near_threshold = near_threshold(m, eps);
  if (!(am.n0 > 0.0)) throw RegimeError("above_matrices: steady-state photon number is zero");

  const double n0 = am.n0;
  const double sin_sum = std::sin(ss.phase_sum);
  const double sd = sign(d);
  const double off = chi - ad;

  am.F_plus << 2.0 * lam * n0, 4.0 * n0 * eps * sin_sum, 0.0, 2.0 * (g + lam * n0);
  am.D_plus << 4.0 * n0 * g, -2.0 * eps * sin_sum, -2.0 * eps * sin_sum, -g / n0;

  const double cp = 1.0 / (4.0 * lam * n0 * (g + lam * n0));
  am.C_plus << 4.0 * n0 * (g * (g + lam * n0) + off * off), -2.0 * lam * n0 * off * sd,
      -2.0 * lam * n0 * off * sd, -lam * g;
  am.C_plus *= cp;
  am.C_plus_printed = am.C_plus;
  am.C_plus_printed(0, 1) *= 0.5;

  const double cm = 1.0 / (4.0 * ad * chi);
  am.C_minus << 4.0 * n0 * chi * off, 2.0 * chi * g * sd, 2.0 * chi * g * sd,
      (g * g - ad * off) / n0;
  am.C_minus *= cm;

  am.F_minus << 2.0 * g, -4.0 * n0 * chi * sd, d / n0, 0.0;
  am.D_minus = 2.0 * am.F_minus * am.C_minus;
  return am;
}

std::pair<Mat2, Mat2> temporal_corr_above(const Model& m, double eps, double tau) {
  const AboveThresholdMatrices am = above_matrices(m, eps);
  const double t = std::abs(tau);
  const Mat2 plus = 0.5 * am.F_plus.inverse() * expm(Mat2(-t * am.F_plus)) * am.D_plus;
  const Mat2 minus = 0.5 * am.F_minus.inverse() * expm(Mat2(-t * am.F_minus)) * am.D_minus;
  return {plus, minus};
}

Eigen::Matrix4d mode_covariance_above(const AboveThresholdMatrices& am) {
  // (n+, phi+, n-, phi-) -> (n1, n2, phi1, phi2)
  Eigen::Matrix4d block = Eigen::Matrix4d::Zero();
  block.topLeftCorner<2, 2>() = am.C_plus;
  block.bottomRightCorner<2, 2>() = am.C_minus;
  Eigen::Matrix4d t;
  t << 0.5, 0.0, -0.5, 0.0,
       0.5, 0.0, 0.5, 0.0,
       0.0, 0.5, 0.0, -0.5,
       0.0, 0.5, 0.0, 0.5;
  return t * block * t.transpose();
}

}  // namespace nopo
