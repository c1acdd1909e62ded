#include "nopo/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nopo/error.hpp"

namespace nopo {

SystemParams SystemParams::symmetric(double gamma, double delta, double chi,
                                     double lambda, double eps, double gamma3) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  if (!(gamma3 > 0.0)) throw DomainError("gamma3 must be positive");
  SystemParams p;
  p.gamma1 = p.gamma2 = gamma;
  p.delta1 = p.delta2 = delta;
  p.gamma3 = gamma3;
  p.chi = chi;
  p.k = std::sqrt(lambda * gamma3);
  p.E = eps * gamma3 / p.k;
  return p;
}

void validate(const SystemParams& p) {
  const double fields[] = {p.gamma1, p.gamma2, p.gamma3, p.delta1, p.delta2, p.chi,
                           p.k,      p.E,      p.phi_L,  p.phi_k,  p.phi_chi};
  for (double f : fields) {
    if (!std::isfinite(f)) throw DomainError("parameters must be finite");
  }
  if (!(p.gamma1 > 0.0) || !(p.gamma2 > 0.0) || !(p.gamma3 > 0.0)) {
    std::ostringstream os;
    os << "damping rates must be positive (gamma1=" << p.gamma1 << ", gamma2=" << p.gamma2
       << ", gamma3=" << p.gamma3 << ")";
    throw DomainError(os.str());
  }
  if (p.chi < 0.0) throw DomainError("chi must be non-negative");
  if (p.k < 0.0) throw DomainError("k must be non-negative");
  if (p.E < 0.0) throw DomainError("E must be non-negative");
}

bool locking_feasible(const SystemParams& p) noexcept {
  const double lhs = 4.0 * p.chi * p.chi * p.delta1 * p.delta2;
  const double d = p.gamma1 * p.delta2 - p.gamma2 * p.delta1;
  return lhs > d * d;
}

DerivedScales derive_scales(const SystemParams& p) {
  validate(p);
  DerivedScales s;
  s.eps = p.k * p.E / p.gamma3;
  s.lambda = p.k * p.k / p.gamma3;

  if (p.is_symmetric()) {
    const double g = p.gamma1;
    const double off = p.chi - std::abs(p.delta1);
    s.gamma_tilde = g;
    s.eps_th = std::sqrt(off * off + g * g);
    s.threshold_known = true;
  } else {
    const double dd = p.delta1 * p.delta2;
    if (dd > 0.0) {
      const double r = std::sqrt(p.delta2 / p.delta1);
      s.gamma_tilde = 0.5 * p.gamma1 * r + 0.5 * p.gamma2 / r;
    }
    if (locking_feasible(p)) {
      // lower critical point: the branch born where the zero solution destabilizes
      const double d = p.gamma1 * p.delta2 - p.gamma2 * p.delta1;
      const double root = std::sqrt(4.0 * p.chi * p.chi * dd - d * d);
      s.eps_th = std::sqrt(p.gamma1 * p.gamma2 + dd + p.chi * p.chi - root);
      s.threshold_known = true;
    }
  }

  if (s.threshold_known) {
    s.E_th = p.k > 0.0 ? p.gamma3 * s.eps_th / p.k : std::numeric_limits<double>::infinity();
    s.P_th = s.E_th * s.E_th / (2.0 * p.gamma3);
  }
  s.adiabatic_ok = p.gamma3 >= 10.0 * std::max(p.gamma1, p.gamma2);
  return s;
}

Model::Model(const SystemParams& p) : params_(p), scales_(derive_scales(p)) {}

void Model::require_symmetric(const char* what) const {
  if (!params_.is_symmetric()) {
    throw DomainError(std::string(what) +
                      " requires symmetric modes (gamma1 == gamma2, delta1 == delta2)");
  }
}

double reduce_angle(double a) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

QuadratureAngles QuadratureAngles::from_thetas(double theta1, double theta2,
                                               const SystemParams& p) {
  QuadratureAngles q;
  q.theta1 = theta1;
  q.theta2 = theta2;
  q.sum = reduce_angle(theta1 + theta2 + p.phi_L + p.phi_k);
  q.diff = reduce_angle(theta2 - theta1 - p.phi_chi);
  return q;
}

QuadratureAngles QuadratureAngles::from_sum_diff(double sum, double diff,
                                                 const SystemParams& p) {
  const double s = sum - p.phi_L - p.phi_k;
  const double d = diff + p.phi_chi;
  QuadratureAngles q;
  q.theta1 = 0.5 * (s - d);
  q.theta2 = 0.5 * (s + d);
  q.sum = reduce_angle(sum);
  q.diff = reduce_angle(diff);
  return q;
}

}  // namespace nopo
