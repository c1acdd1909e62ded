#include "nopo/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace nopo {

namespace {
constexpr cplx I{0.0, 1.0};
}

Drift drift_field(const PhaseSpaceState& z, const Model& m, double eps) noexcept {
  const auto& p = m.params();
  const double lam = m.lambda();
  const cplx ca = eps - lam * z.alpha1 * z.alpha2;
  const cplx cb = eps - lam * z.beta1 * z.beta2;
  return {
      -(p.gamma1 + I * p.delta1) * z.alpha1 + ca * z.beta2 - I * p.chi * z.alpha2,
      -(p.gamma2 + I * p.delta2) * z.alpha2 + ca * z.beta1 - I * p.chi * z.alpha1,
      -(p.gamma1 - I * p.delta1) * z.beta1 + cb * z.alpha2 + I * p.chi * z.beta2,
      -(p.gamma2 - I * p.delta2) * z.beta2 + cb * z.alpha1 + I * p.chi * z.beta1,
  };
}

Jacobian drift_jacobian(const PhaseSpaceState& z, const Model& m, double eps) noexcept {
  const auto& p = m.params();
  const double lam = m.lambda();
  const cplx ca = eps - lam * z.alpha1 * z.alpha2;
  const cplx cb = eps - lam * z.beta1 * z.beta2;
  const cplx ichi = I * p.chi;
  Jacobian j{};
  j[0] = {-(p.gamma1 + I * p.delta1) - lam * z.alpha2 * z.beta2,
          -lam * z.alpha1 * z.beta2 - ichi, 0.0, ca};
  j[1] = {-lam * z.alpha2 * z.beta1 - ichi,
          -(p.gamma2 + I * p.delta2) - lam * z.alpha1 * z.beta1, ca, 0.0};
  j[2] = {0.0, cb, -(p.gamma1 - I * p.delta1) - lam * z.beta2 * z.alpha2,
          -lam * z.beta1 * z.alpha2 + ichi};
  j[3] = {cb, 0.0, -lam * z.beta2 * z.alpha1 + ichi,
          -(p.gamma2 - I * p.delta2) - lam * z.beta1 * z.alpha1};
  return j;
}

double drift_residual(const PhaseSpaceState& z, const Model& m, double eps) noexcept {
  double r = 0.0;
  for (const cplx& d : drift_field(z, m, eps)) r = std::max(r, std::abs(d));
  return r;
}

NoiseCoefficients noise_coefficients(const PhaseSpaceState& z, const Model& m,
                                     double eps) noexcept {
  const double lam = m.lambda();
  return {eps - lam * z.alpha1 * z.alpha2, eps - lam * z.beta1 * z.beta2};
}

cplx adiabatic_pump(const PhaseSpaceState& z, const SystemParams& p) noexcept {
  return (p.E - p.k * z.alpha1 * z.alpha2) / p.gamma3;
}

}  // namespace nopo
