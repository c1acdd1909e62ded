#include "nopo/entanglement.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nopo/error.hpp"
#include "nopo/fluctuations.hpp"
#include "nopo/semiclassical.hpp"

namespace nopo {

namespace {

double sign(double x) noexcept { return (x > 0.0) - (x < 0.0); }

void finish(VarianceReport& r, double delta_theta) {
  const double c = std::cos(delta_theta);
  r.V_plus = r.V + r.R * c;
  r.V_minus = r.V - r.R * c;
  r.product = r.V_plus * r.V_minus;
  r.inseparable = r.V < 1.0;
  r.strong_epr = r.product < 0.25;
}

// sin(x)/x and sinh(x)/x, accurate through x = 0.
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}
double sinhc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

// Square root of 1 + (eps^2 - eps_th^2)/gamma^2.
double threshold_radical(const Model& m, double eps) {
  const double g = m.gamma();
  const double th = m.eps_th();
  return std::sqrt(1.0 + (eps - th) * (eps + th) / (g * g));
}

}  // namespace

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Moments: return "moments";
    case Regime::Unitary: return "unitary";
    case Regime::Below: return "below";
    case Regime::Above: return "above";
  }
  return "?";
}

VarianceReport variances_from_moments(const MomentSet& m, const QuadratureAngles& angles) {
  VarianceReport r;
  r.angles = angles;
  const std::complex<double> rot = std::polar(1.0, angles.sum);
  r.V = 1.0 + 2.0 * m.n - 2.0 * std::real(m.m_aa * rot);
  r.R = 2.0 * std::real(m.m_a1sq * rot) - 2.0 * std::real(m.m_cross);
  r.degenerate = m.m_aa == std::complex<double>{};
  finish(r, angles.diff);
  return r;
}

AngleChoice optimal_angle_sum(const MomentSet& m, double diff, const SystemParams& p) {
  AngleChoice a;
  a.degenerate = m.m_aa == std::complex<double>{};
  const double sum = a.degenerate ? 0.0 : -m.phi_arg();
  a.angles = QuadratureAngles::from_sum_diff(sum, diff, p);
  return a;
}

MomentSet moments_below(const Model& m, double eps) {
  const Mat4c c = stationary_covariance_below(m, eps);
  MomentSet s;
  s.n = c(2, 0).real();
  s.m_aa = c(0, 1);
  s.m_a1sq = c(0, 0);
  s.m_cross = c(2, 1);
  return s;
}

VarianceReport variance_below(const Model& m, double eps, double delta_theta) {
  const EqualTimeCorrelations corr = equal_time_corr_below(m, eps);  // checks the regime
  const double g = m.gamma();
  const double d = m.delta();
  const double chi = m.chi();
  const double s2 = g * g + chi * chi + d * d - eps * eps;
  const double den = s2 * s2 - 4.0 * d * d * chi * chi;
  const double rad = std::sqrt(g * g * s2 * s2 + d * d * std::pow(s2 - 2.0 * chi * chi, 2));

  VarianceReport r;
  r.regime = Regime::Below;
  r.V = 1.0 + eps * (eps * s2 - rad) / den;
  const double e4 = eps * eps * eps * eps;
  const double poles = (g * g + (d - chi) * (d - chi)) * (g * g + (d + chi) * (d + chi));
  r.R = eps * chi * d / den * ((e4 - poles) / rad + 2.0 * eps);

  MomentSet ms;
  ms.m_aa = corr.aa(0, 1);
  const AngleChoice a = optimal_angle_sum(ms, delta_theta, m.params());
  r.angles = a.angles;
  r.degenerate = a.degenerate;
  r.linearization_unreliable = near_threshold(m, eps);
  finish(r, delta_theta);
  return r;
}

VarianceReport variance_above(const Model& m, double eps, double delta_theta) {
  m.require_symmetric("variance_above");
  if (!(eps >= m.eps_th())) {
    std::ostringstream os;
    os << "variance_above: eps = " << eps << " is below threshold eps_th = " << m.eps_th();
    throw RegimeError(os.str());
  }
  const double d = m.delta();
  if (d == 0.0) throw DomainError("above-threshold variances are singular at delta = 0");
  const double ad = std::abs(d);
  const double chi = m.chi();
  const double rad = threshold_radical(m, eps);

  VarianceReport r;
  r.regime = Regime::Above;
  r.V = 0.75 - 0.25 / rad + chi / (4.0 * ad);
  r.R = sign(d) / 4.0 * ((ad - chi) / ad - 1.0 / rad);

  // <a1 a2> ~ n0 exp(i (phi10 + phi20)) for the stable branch.
  double phase_sum = 0.0;
  r.degenerate = true;
  if (chi > 0.0 && m.lambda() > 0.0) {
    phase_sum = steady_state(m, eps, Branch::Plus).phase_sum;
    r.degenerate = false;
  }
  r.angles = QuadratureAngles::from_sum_diff(-phase_sum, delta_theta, m.params());
  r.linearization_unreliable = near_threshold(m, eps);
  finish(r, delta_theta);
  return r;
}

VarianceReport variance_auto(const Model& m, double eps, double delta_theta) {
  if (eps < m.eps_th()) return variance_below(m, eps, delta_theta);
  return variance_above(m, eps, delta_theta);
}

double unitary_variance(double chi, double eps, double t, double sigma_theta) {
  if (!(t >= 0.0)) throw DomainError("unitary_variance: t must be >= 0");
  if (!(eps >= 0.0) || !(chi >= 0.0)) throw DomainError("unitary_variance: eps, chi must be >= 0");
  // (1 - cos 2mu t)/mu^2 = 2 t^2 sinc^2(mu t), sin(2 mu t)/mu = 2 t sinc(2 mu t),
  // and the hyperbolic counterparts for eps > chi.
  double grow = 0.0;
  double osc = 0.0;
  if (eps <= chi) {
    const double mu = std::sqrt((chi - eps) * (chi + eps));
    grow = 2.0 * t * t * std::pow(sinc(mu * t), 2);
    osc = 2.0 * t * sinc(2.0 * mu * t);
  } else {
    const double eta = std::sqrt((eps - chi) * (eps + chi));
    grow = 2.0 * t * t * std::pow(sinhc(eta * t), 2);
    osc = 2.0 * t * sinhc(2.0 * eta * t);
  }
  return 1.0 + eps * eps * grow - eps * osc * std::cos(sigma_theta);
}

VarianceReport unitary_report(double chi, double eps, double t, double sigma_theta) {
  VarianceReport r;
  r.regime = Regime::Unitary;
  r.V = unitary_variance(chi, eps, t, sigma_theta);
  r.angles.sum = reduce_angle(sigma_theta);
  r.angles.diff = 0.5 * std::numbers::pi;
  finish(r, r.angles.diff);
  return r;
}

UnitaryMinimum unitary_minimum(double chi, double eps) {
  if (!(eps > 0.0) || !(chi > 0.0)) throw DomainError("unitary_minimum: eps and chi must be > 0");
  UnitaryMinimum u;
  // dV/dt = 0 gives cot(2 mu t) = eps/mu, resp. coth(2 eta t) = eps/eta.
  if (eps < chi) {
    const double mu = std::sqrt((chi - eps) * (chi + eps));
    u.t_min = mu < 1e-8 * eps ? 0.5 / eps : std::atan(mu / eps) / (2.0 * mu);
    u.period = std::numbers::pi / mu;
  } else {
    const double eta = std::sqrt((eps - chi) * (eps + chi));
    u.t_min = eta < 1e-8 * eps ? 0.5 / eps : std::atanh(eta / eps) / (2.0 * eta);
    u.period = std::numeric_limits<double>::infinity();
  }
  u.V_min = unitary_variance(chi, eps, u.t_min, 0.0);
  return u;
}

}  // namespace nopo
