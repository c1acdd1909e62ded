#pragma once

// Deterministic part of the positive-P equations of motion after adiabatic
// elimination of the pump mode, shared by the steady-state solver and the
// stochastic integrator.

#include <array>
#include <complex>

#include "nopo/model.hpp"

namespace nopo {

using cplx = std::complex<double>;

/// Point in the doubled positive-P phase space. beta_i is an independent
/// variable, not the conjugate of alpha_i.
struct PhaseSpaceState {
  cplx alpha1{};
  cplx alpha2{};
  cplx beta1{};
  cplx beta2{};

  [[nodiscard]] std::array<cplx, 4> as_array() const { return {alpha1, alpha2, beta1, beta2}; }
  static PhaseSpaceState from_array(const std::array<cplx, 4>& z) {
    return {z[0], z[1], z[2], z[3]};
  }
  /// Classical state with beta_i = conj(alpha_i).
  static PhaseSpaceState classical(cplx a1, cplx a2) {
    return {a1, a2, std::conj(a1), std::conj(a2)};
  }
};

using Drift = std::array<cplx, 4>;
using Jacobian = std::array<std::array<cplx, 4>, 4>;

/// d(alpha1, alpha2, beta1, beta2)/dt without noise at scaled pump `eps`.
Drift drift_field(const PhaseSpaceState& z, const Model& m, double eps) noexcept;

/// Exact derivative of drift_field with respect to (alpha1, alpha2, beta1, beta2).
Jacobian drift_jacobian(const PhaseSpaceState& z, const Model& m, double eps) noexcept;

/// Largest component magnitude of the drift.
double drift_residual(const PhaseSpaceState& z, const Model& m, double eps) noexcept;

/// Noise strengths: <R1 R2> = c_alpha dt, <R1+ R2+> = c_beta dt.
struct NoiseCoefficients {
  cplx c_alpha;
  cplx c_beta;
};
NoiseCoefficients noise_coefficients(const PhaseSpaceState& z, const Model& m,
                                     double eps) noexcept;

/// Adiabatically eliminated pump amplitude alpha3 = (E - k alpha1 alpha2)/gamma3.
cplx adiabatic_pump(const PhaseSpaceState& z, const SystemParams& p) noexcept;

}  // namespace nopo
