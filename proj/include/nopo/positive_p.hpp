#pragma once

// Monte Carlo integration of the positive-P stochastic equations (Ito,
// Euler-Maruyama) and ensemble estimates of normally ordered moments.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nopo/dynamics.hpp"
#include "nopo/model.hpp"

namespace nopo {

struct SimConfig {
  double dt = 1e-3;
  double t_max = 30.0;
  std::size_t n_traj = 1000;
  double burn_in = 10.0;  // samples are taken for t > burn_in
  std::uint64_t seed = 1;
  double divergence_bound = 1e6;
  std::string scheme = "euler-maruyama";
  double sample_interval = 0.01;
  unsigned workers = 0;  // 0: hardware concurrency
  bool noise = true;
  double max_discard_fraction = 0.01;
  PhaseSpaceState initial{};
};

/// Throws DomainError for an invalid configuration.
void validate(const SimConfig& c);

struct TrajectoryState {
  PhaseSpaceState z;
  double t = 0.0;
  bool diverged = false;
};

using Rng = std::mt19937_64;

/// Independent, reproducible stream for trajectory `index`.
Rng trajectory_rng(std::uint64_t seed, std::uint64_t index);

/// Noise increments (dA1, dA2, dB1, dB2) for one step of length dt.
std::array<cplx, 4> noise_increment(const PhaseSpaceState& z, const Model& m, double eps,
                                    double dt, Rng& rng);

struct TrajectorySummary {
  TrajectoryState final_state;
  std::size_t n_samples = 0;
};

/// Integrates one trajectory from config.initial, calling `on_sample` at each
/// sample time after the burn-in. Stops early on divergence.
TrajectorySummary integrate_trajectory(
    const Model& m, double eps, const SimConfig& config, std::uint64_t index,
    const std::function<void(const TrajectoryState&)>& on_sample = {});

/// Product of powers of (alpha1, alpha2, beta1, beta2), e.g. "b1a1" or "a1^2".
struct MomentSpec {
  std::string label;
  std::array<int, 4> powers{};

  [[nodiscard]] int order() const { return powers[0] + powers[1] + powers[2] + powers[3]; }
  [[nodiscard]] cplx evaluate(const PhaseSpaceState& z) const;
};

/// Throws DomainError on a malformed word.
MomentSpec parse_moment(const std::string& word);

struct EnsembleEstimate {
  std::string label;
  cplx mean{};
  double se_real = 0.0;
  double se_imag = 0.0;
  double std_error = 0.0;  // sqrt(se_real^2 + se_imag^2)
  std::size_t n_effective = 0;
  double discard_fraction = 0.0;
};

/// Steady-state moments: each trajectory contributes its time average over
/// t > burn_in; errors come from the scatter between trajectories. Throws
/// EstimationError when every trajectory diverges or the discard fraction
/// exceeds config.max_discard_fraction.
std::vector<EnsembleEstimate> ensemble_moments(const Model& m, double eps,
                                               const SimConfig& config,
                                               const std::vector<MomentSpec>& specs);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;

  [[nodiscard]] std::uint64_t total() const;
  [[nodiscard]] double bin_center(std::size_t i) const;
  void add(double x);
  /// Fraction of the mass whose distance to `center`, modulo `period`, is at most `half_width`.
  [[nodiscard]] double mass_within(double center, double half_width, double period) const;
};

struct PhaseHistograms {
  Histogram diff;   // (phi2 - phi1) mod pi, on (-pi/2, pi/2]
  Histogram sum;    // (phi1 + phi2) mod pi, on (-pi/2, pi/2]
  Histogram abs1;   // arg(alpha1), on (-pi, pi]
  std::size_t n_samples = 0;
  std::size_t n_diverged = 0;
  std::string note;
};

PhaseHistograms phase_histogram(const Model& m, double eps, const SimConfig& config,
                                std::size_t bins = 90);

}  // namespace nopo
