#pragma once

// Two-mode quadrature variances and entanglement verdicts. Variances are
// normalized so the vacuum level is 1; a state is inseparable when V < 1 and
// satisfies the strong EPR test when V_plus * V_minus < 1/4.

#include <complex>
#include <string>

#include "nopo/model.hpp"

namespace nopo {

/// Second-order normally ordered moments of the symmetric model.
struct MomentSet {
  double n = 0.0;                    // <a1+ a1> = <a2+ a2>
  std::complex<double> m_aa{};       // <a1 a2>
  std::complex<double> m_a1sq{};     // <a1^2> = <a2^2>
  std::complex<double> m_cross{};    // <a1+ a2>

  [[nodiscard]] double phi_arg() const { return std::arg(m_aa); }
};

enum class Regime { Moments, Unitary, Below, Above };

const char* to_string(Regime r) noexcept;

struct VarianceReport {
  double V = 1.0;
  double R = 0.0;
  double V_plus = 1.0;
  double V_minus = 1.0;
  double product = 1.0;
  bool inseparable = false;  // V < 1
  bool strong_epr = false;   // V_plus V_minus < 1/4
  QuadratureAngles angles;
  bool linearization_unreliable = false;  // inside the near-threshold band
  bool degenerate = false;                // <a1 a2> = 0, angle sum arbitrary
  Regime regime = Regime::Moments;
};

/// V, R and V_plus/V_minus at the given quadrature angles.
VarianceReport variances_from_moments(const MomentSet& m, const QuadratureAngles& angles);

struct AngleChoice {
  QuadratureAngles angles;
  bool degenerate = false;
};

/// Angle sum minimizing V, -arg<a1 a2>. A zero <a1 a2> yields sum 0 and the
/// degenerate flag. `diff` is passed through unchanged.
AngleChoice optimal_angle_sum(const MomentSet& m, double diff = 0.0,
                              const SystemParams& p = SystemParams{});

/// Linearized stationary moments below threshold.
MomentSet moments_below(const Model& m, double eps);

/// Closed-form minimized variances below threshold; RegimeError at or above eps_th.
VarianceReport variance_below(const Model& m, double eps, double delta_theta);

/// Closed-form minimized variances for eps >= eps_th; RegimeError below,
/// DomainError at delta = 0.
VarianceReport variance_above(const Model& m, double eps, double delta_theta);

/// Dispatches on eps relative to eps_th. Exactly at threshold the
/// above-threshold limit is used, which agrees with the below-threshold limit.
VarianceReport variance_auto(const Model& m, double eps, double delta_theta);

/// Lossless evolution from vacuum at zero detuning for time t.
double unitary_variance(double chi, double eps, double t, double sigma_theta);

/// Report wrapper for unitary_variance; R is not defined by the closed form
/// and is reported as 0.
VarianceReport unitary_report(double chi, double eps, double t, double sigma_theta);

struct UnitaryMinimum {
  double t_min = 0.0;
  double V_min = 1.0;
  double period = 0.0;  // pi/mu for eps < chi, infinity otherwise
};

/// First minimum in t of unitary_variance with cos(sigma_theta) = 1.
UnitaryMinimum unitary_minimum(double chi, double eps);

}  // namespace nopo
