#include "nopo/semiclassical.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nopo/error.hpp"

namespace nopo {

namespace {

void throw_infeasible(const SystemParams& p) {
  std::ostringstream os;
  os << "phase locking infeasible: 4*chi^2*delta1*delta2 > (gamma1*delta2 - gamma2*delta1)^2"
     << " violated (lhs=" << 4.0 * p.chi * p.chi * p.delta1 * p.delta2
     << ", rhs=" << std::pow(p.gamma1 * p.delta2 - p.gamma2 * p.delta1, 2) << ")";
  throw DomainError(os.str());
}

// Symmetric critical points exist for any chi, delta; the general formula
// needs the locking condition.
CriticalPoints branch_points(const Model& m) {
  const auto& p = m.params();
  if (p.is_symmetric()) {
    const double g2 = p.gamma1 * p.gamma1;
    const double ad = std::abs(p.delta1);
    return {std::sqrt(g2 + (ad - p.chi) * (ad - p.chi)),
            std::sqrt(g2 + (ad + p.chi) * (ad + p.chi))};
  }
  return critical_points(m);
}

}  // namespace

const char* to_string(Branch b) noexcept { return b == Branch::Plus ? "+" : "-"; }

CriticalPoints critical_points(const Model& m) {
  const auto& p = m.params();
  if (!locking_feasible(p)) throw_infeasible(p);
  const double dd = p.delta1 * p.delta2;
  const double d = p.gamma1 * p.delta2 - p.gamma2 * p.delta1;
  const double root = std::sqrt(4.0 * p.chi * p.chi * dd - d * d);
  const double base = p.gamma1 * p.gamma2 + dd + p.chi * p.chi;
  return {std::sqrt(base - root), std::sqrt(base + root)};
}

StabilityReport stability_eigenvalues(const Model& m, double eps, const PhaseSpaceState& z) {
  const auto& p = m.params();
  double scale = 1.0;
  for (const cplx& c : z.as_array()) scale = std::max(scale, std::abs(c));
  const double rate = p.gamma1 + p.gamma2 + std::abs(p.delta1) + std::abs(p.delta2) + p.chi +
                      eps + m.lambda() * scale * scale;
  const double residual = drift_residual(z, m, eps);
  if (!(residual <= 1e-8 * rate * scale)) {
    std::ostringstream os;
    os << "state is not a steady state of the drift (residual " << residual << ")";
    throw ContractError(os.str());
  }

  const Jacobian j = drift_jacobian(z, m, eps);
  Eigen::Matrix4cd relax;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) relax(r, c) = -j[r][c];

  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(relax, false);
  StabilityReport rep;
  for (int i = 0; i < 4; ++i) rep.eigenvalues[i] = solver.eigenvalues()(i);
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  const double tol = kStabilityTolerance * std::min(p.gamma1, p.gamma2);
  rep.stable = std::all_of(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                           [tol](cplx e) { return e.real() > tol; });
  return rep;
}

PhaseSpaceState SteadyStateBranch::state() const {
  const cplx a1 = std::polar(std::sqrt(n10), phi10);
  const cplx a2 = std::polar(std::sqrt(n20), phi20);
  return PhaseSpaceState::classical(a1, a2);
}

SteadyStateBranch SteadyStateBranch::twin() const {
  SteadyStateBranch t = *this;
  t.phi10 += std::numbers::pi;
  t.phi20 += std::numbers::pi;
  return t;
}

Branch default_branch(const Model&) noexcept { return Branch::Plus; }

SteadyStateBranch steady_state(const Model& m, double eps, Branch branch) {
  const auto& p = m.params();
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw DomainError("pump eps must be finite and >= 0");
  const bool sym = p.is_symmetric();
  const CriticalPoints cp = branch_points(m);
  const double eps_cr = branch == Branch::Plus ? cp.eps_cr_plus : cp.eps_cr_minus;

  SteadyStateBranch out;
  out.branch = branch;
  out.eps = eps;
  out.locked = locking_feasible(p);
  out.stability_extrapolated = !sym;

  auto finish = [&](SteadyStateBranch& s) {
    const StabilityReport rep = stability_eigenvalues(m, eps, s.state());
    s.eigenvalues = rep.eigenvalues;
    s.stable = rep.stable;
    return s;
  };

  if (eps < eps_cr) {
    out.below_critical = true;
    return finish(out);
  }
  if (!(m.lambda() > 0.0)) throw DomainError("a nonzero steady state requires lambda > 0");

  const double ratio = sym ? 1.0 : std::sqrt(p.delta2 / p.delta1);
  const double gt = sym ? p.gamma1 : m.scales().gamma_tilde;
  const double root = std::sqrt(std::max(0.0, eps * eps - eps_cr * eps_cr + gt * gt));
  const double amp = std::max(0.0, root - gt) / m.lambda();
  out.n10 = ratio * amp;
  out.n20 = amp / ratio;

  if (eps == 0.0) return finish(out);

  // sin(phi20 - phi10) and cos(phi20 + phi10) fix the phases up to a sign
  // ambiguity each; the drift residual picks the combination that is a
  // genuine steady state of this branch.
  const double sin_diff =
      sym || p.chi == 0.0 ? 0.0
                          : std::clamp((p.gamma1 * ratio - p.gamma2 / ratio) / (2.0 * p.chi), -1.0, 1.0);
  const double cos_sum = std::clamp(root / eps, -1.0, 1.0);
  const double d0 = std::asin(sin_diff);
  const double s0 = std::acos(cos_sum);
  const double diffs[2] = {d0, std::numbers::pi - d0};
  const double sums[2] = {-s0, s0};

  double best = std::numeric_limits<double>::infinity();
  for (double d : diffs) {
    for (double s : sums) {
      SteadyStateBranch trial = out;
      trial.phase_sum = reduce_angle(s);
      trial.phase_diff = reduce_angle(d);
      trial.phi10 = 0.5 * (trial.phase_sum - trial.phase_diff);
      trial.phi20 = 0.5 * (trial.phase_sum + trial.phase_diff);
      const double r = drift_residual(trial.state(), m, eps);
      if (r < best) {
        best = r;
        out.phase_sum = trial.phase_sum;
        out.phase_diff = trial.phase_diff;
        out.phi10 = trial.phi10;
        out.phi20 = trial.phi20;
      }
    }
  }
  return finish(out);
}

OutputRates output_rates(const Model& m, double n10, double n20) noexcept {
  const auto& p = m.params();
  return {p.E * p.E / (2.0 * p.gamma3), 2.0 * p.gamma1 * n10, 2.0 * p.gamma2 * n20};
}

}  // namespace nopo
