#pragma once

// Noise-free steady states of the adiabatically eliminated model: photon
// numbers, locked phases, and linear stability of each solution branch.

#include <array>

#include "nopo/dynamics.hpp"
#include "nopo/model.hpp"

namespace nopo {

/// Branch labels follow the two critical pump values: Plus is born at the
/// lower critical point eps_cr_plus, Minus at the upper one.
enum class Branch { Plus, Minus };

const char* to_string(Branch b) noexcept;

struct CriticalPoints {
  double eps_cr_plus = 0.0;
  double eps_cr_minus = 0.0;
};

/// Throws DomainError naming the violated inequality when locking is infeasible.
CriticalPoints critical_points(const Model& m);

/// Re(eigenvalue) must exceed this multiple of min(gamma1, gamma2) to count as decaying.
inline constexpr double kStabilityTolerance = 1e-9;

struct StabilityReport {
  std::array<cplx, 4> eigenvalues{};  // of the relaxation matrix -d(drift)/dz
  bool stable = false;
};

/// Eigenvalues of the linearized relaxation matrix at `z`. Throws
/// ContractError if `z` is not a steady state of the deterministic drift.
StabilityReport stability_eigenvalues(const Model& m, double eps, const PhaseSpaceState& z);

struct SteadyStateBranch {
  Branch branch = Branch::Plus;
  double eps = 0.0;
  double n10 = 0.0;
  double n20 = 0.0;
  double phi10 = 0.0;  // canonical (k = 0) representative
  double phi20 = 0.0;
  double phase_sum = 0.0;   // phi20 + phi10, reduced to (-pi, pi]
  double phase_diff = 0.0;  // phi20 - phi10, reduced to (-pi, pi]
  bool below_critical = false;  // eps under this branch's critical point: zero solution
  bool locked = true;           // false when the locking condition fails (chi = 0 etc.)
  bool stable = false;
  bool stability_extrapolated = false;  // asymmetric modes: numerical verdict only
  std::array<cplx, 4> eigenvalues{};

  [[nodiscard]] PhaseSpaceState state() const;
  /// The same solution with both phases shifted by pi.
  [[nodiscard]] SteadyStateBranch twin() const;
};

/// The branch that is stable above threshold. Linear stability analysis of
/// the drift selects Plus for either sign of the detuning.
Branch default_branch(const Model& m) noexcept;

SteadyStateBranch steady_state(const Model& m, double eps, Branch branch);

struct OutputRates {
  double n3_in = 0.0;
  double n1_out = 0.0;
  double n2_out = 0.0;
};

OutputRates output_rates(const Model& m, double n10, double n20) noexcept;

}  // namespace nopo
