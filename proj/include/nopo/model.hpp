#pragma once

// Physical parameter set of the self-phase-locked NOPO and the scales derived
// from it. All rates are in the same (arbitrary) unit; the CLI uses units of
// the subharmonic damping rate.

#include <limits>

namespace nopo {

struct SystemParams {
  double gamma1 = 1.0;  // subharmonic damping rates
  double gamma2 = 1.0;
  double gamma3 = 100.0;  // pump-mode damping rate
  double delta1 = 0.0;    // subharmonic detunings
  double delta2 = 0.0;
  double chi = 0.0;  // polarization-mixing strength
  double k = 1.0;    // parametric coupling
  double E = 0.0;    // external pump amplitude
  double phi_L = 0.0;
  double phi_k = 0.0;
  double phi_chi = 0.0;

  /// Equal damping and detuning in both subharmonics.
  [[nodiscard]] bool is_symmetric() const noexcept {
    return gamma1 == gamma2 && delta1 == delta2;
  }

  /// Build a symmetric parameter set directly from the scaled pump `eps` and
  /// effective nonlinearity `lambda` (k and E are chosen to reproduce them).
  static SystemParams symmetric(double gamma, double delta, double chi,
                                double lambda, double eps, double gamma3 = 100.0);
};

/// Throws DomainError when damping rates are non-positive, couplings negative,
/// or any field is not finite.
void validate(const SystemParams& p);

struct DerivedScales {
  double eps = 0.0;          // kE/gamma3
  double lambda = 0.0;       // k^2/gamma3
  double gamma_tilde = std::numeric_limits<double>::quiet_NaN();
  double eps_th = std::numeric_limits<double>::quiet_NaN();
  double E_th = std::numeric_limits<double>::quiet_NaN();
  // Threshold pump power E_th^2/(2 gamma3) in units of hbar*omega^3.
  // The omega^3 prefactor is kept literally; see `p_th_literal`.
  double P_th = std::numeric_limits<double>::quiet_NaN();
  bool p_th_literal = true;
  bool threshold_known = false;
  bool adiabatic_ok = false;  // gamma3 >= 10 max(gamma1, gamma2)
};

DerivedScales derive_scales(const SystemParams& p);

/// True iff 4 chi^2 delta1 delta2 > (gamma1 delta2 - gamma2 delta1)^2, the
/// condition for locked above-threshold solutions to exist in both modes.
bool locking_feasible(const SystemParams& p) noexcept;

/// Parameters bundled with their derived scales. Immutable once built.
class Model {
 public:
  explicit Model(const SystemParams& p);

  [[nodiscard]] const SystemParams& params() const noexcept { return params_; }
  [[nodiscard]] const DerivedScales& scales() const noexcept { return scales_; }

  // Symmetric-case shorthands (gamma1, delta1).
  [[nodiscard]] double gamma() const noexcept { return params_.gamma1; }
  [[nodiscard]] double delta() const noexcept { return params_.delta1; }
  [[nodiscard]] double chi() const noexcept { return params_.chi; }
  [[nodiscard]] double lambda() const noexcept { return scales_.lambda; }
  [[nodiscard]] double eps_th() const noexcept { return scales_.eps_th; }

  /// Throws DomainError unless gamma1 == gamma2 and delta1 == delta2.
  void require_symmetric(const char* what) const;

 private:
  SystemParams params_;
  DerivedScales scales_;
};

/// Reduce an angle to (-pi, pi].
double reduce_angle(double a) noexcept;

struct QuadratureAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double sum = 0.0;   // theta1 + theta2 + phi_L + phi_k, in (-pi, pi]
  double diff = 0.0;  // theta2 - theta1 - phi_chi, in (-pi, pi]

  static QuadratureAngles from_thetas(double theta1, double theta2, const SystemParams& p);
  /// Inverse of from_thetas: local-oscillator phases that realize `sum`, `diff`.
  static QuadratureAngles from_sum_diff(double sum, double diff, const SystemParams& p);
};

}  // namespace nopo
