// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "nopo/entanglement.hpp"
#include "nopo/fluctuations.hpp"
#include "nopo/positive_p.hpp"
#include "nopo/semiclassical.hpp"
#include "oracles.hpp"

using namespace nopo;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Model sym(double delta, double chi, double lambda = 1.0) {
  return Model(SystemParams::symmetric(1.0, delta, chi, lambda, 0.0));
}

Outcome unitary_minima() {
  const double ratio[] = {0.1, 0.4, 0.7, 1.1, 2.0, 3.0};
  const double expected[] = {0.74, 0.63, 0.57, 0.48, 0.38, 0.31};
  bool ok = true;
  std::string d;
  for (int i = 0; i < 6; ++i) {
    const double t = unitary_minimum(1.0, ratio[i]).t_min;
    const bool hit = std::abs(t - expected[i]) <= 0.01;
    ok = ok && hit;
    d += fmt("%s%g:%.4f%s", i ? " " : "", ratio[i], t, hit ? "" : "(want " ) +
         (hit ? "" : fmt("%.2f)", expected[i]));
  }
  return {ok, "chi t_min by eps/chi " + d};
}

Outcome unitary_closure() {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double r = 0.05 * std::pow(10.0 / 0.05, i / 49.0);
    const UnitaryMinimum u = unitary_minimum(1.0, r);
    const double hi = r < 1.0 ? u.period : 4.0 * u.t_min + 1.0;
    const auto [t, v] =
        oracle::grid_min([&](double x) { return unitary_variance(1.0, r, x, 0.0); }, 0.0, hi);
    worst = std::max(worst, std::abs(v - 1.0 / (1.0 + r)));
  }
  return {worst <= 1e-7, fmt("max |grid min - chi/(eps+chi)| = %.2e over 50 ratios", worst)};
}

Outcome ordinary_limit() {
  double worst = 0.0;
  for (double d : {3.0, 1.0, -2.0, 10.0}) {
    const Model m = sym(d, 1e-8);
    for (int i = 1; i <= 200; ++i) {
      const double eps = 0.95 * m.eps_th() * i / 200.0;
      const double V = variance_below(m, eps, 0.0).V;
      worst = std::max(worst, std::abs(V - (1.0 - eps / (eps + std::sqrt(1.0 + d * d)))));
    }
  }
  return {worst <= 1e-6, fmt("chi=1e-8, max deviation %.2e", worst)};
}

Outcome threshold_cancellation() {
  const Model m = sym(3.0, 0.5);
  const double eth = m.eps_th();
  double worst = 0.0;
  bool finite = true;
  double corr = 0.0;
  for (double h : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9}) {
    const VarianceReport lo = variance_below(m, eth * (1.0 - h), 0.0);
    const VarianceReport hi = variance_above(m, eth * (1.0 + h), 0.0);
    for (double x : {lo.V, lo.V_plus, lo.V_minus, hi.V, hi.V_plus, hi.V_minus})
      finite = finite && std::isfinite(x);
    worst = std::max({worst, std::abs(lo.V - hi.V), std::abs(lo.V_plus - hi.V_plus),
                      std::abs(lo.V_minus - hi.V_minus)});
    corr = std::max(corr, std::abs(equal_time_corr_below(m, eth * (1.0 - h)).aa(0, 1)));
  }
  return {finite && worst <= 1e-3,
          fmt("max jump %.2e across eps_th; |<da1 da2>| reaches %.1e", worst, corr)};
}

Outcome asymptote() {
  bool ok = true;
  std::string d;
  for (auto [chi, delta] : {std::pair{0.1, 10.0}, {0.5, 1.0}}) {
    const Model m = sym(delta, chi);
    const double V = variance_above(m, 100.0 * m.eps_th(), 0.0).V;
    const double want = 0.75 + chi / (4.0 * std::abs(delta));
    ok = ok && std::abs(V - want) <= 1e-3;
    d += fmt(" chi=%g delta=%g: V=%.6f vs %.6f;", chi, delta, V, want);
  }
  return {ok, "V(100 eps_th)" + d};
}

Outcome epr_product() {
  auto deviation = [](double chi, double delta, double eps_factor) {
    const Model m = sym(delta, chi);
    const double p = variance_above(m, m.eps_th() * eps_factor, 0.0).product;
    return std::abs(p - (std::abs(delta) + chi) / (4.0 * std::abs(delta)));
  };
  double worst = 0.0;
  double worst_at = 0.0;
  double lowest = 1.0;
  for (double chi = 0.05; chi <= 3.0; chi += 0.05) {
    for (double delta = 0.1; delta <= 12.0; delta += 0.1) {
      for (double sgn : {1.0, -1.0}) {
        const Model m = sym(sgn * delta, chi);
        lowest = std::min(lowest, variance_above(m, m.eps_th() * (1.0 + 1e-6), 0.0).product);
        worst = std::max(worst, deviation(chi, sgn * delta, 1.0 + 1e-6));
        worst_at = std::max(worst_at, deviation(chi, sgn * delta, 1.0));
      }
    }
  }
  const double fig_a = deviation(0.1, 10.0, 1.0 + 1e-6);
  const double fig_b = deviation(0.5, 1.0, 1.0 + 1e-6);
  return {worst <= 1e-6 && lowest > 0.25,
          fmt("at eps_th(1+1e-6): max |product - (|delta|+chi)/(4|delta|)| = %.2e "
              "(chi=0.1,delta=10: %.2e; chi=0.5,delta=1: %.2e; exactly at eps_th: %.2e), "
              "min product %.6f",
              worst, fig_a, fig_b, worst_at, lowest)};
}

Outcome matrix_identities() {
  double ident = 0.0;
  double routes = 0.0;
  int points = 0;
  for (double delta : {3.0, -3.0, 1.0, 10.0}) {
    for (double chi : {0.1, 0.5, 2.0, 4.0, 12.0}) {
      const Model m = sym(delta, chi);
      for (int i = 0; i < 5; ++i) {
        const double eps = m.eps_th() * (0.05 + 0.9 * i / 4.0);
        ++points;
        const BelowThresholdMatrices bm = below_matrices(m, eps);
        ident = std::max(ident, (bm.D * bm.F.transpose() - bm.F * bm.D).cwiseAbs().maxCoeff());
        // F as the linear drift of the fluctuations, D from the noise at the origin
        const PhaseSpaceState zero{};
        const Jacobian jac = drift_jacobian(zero, m, eps);
        Eigen::Matrix4cd F;
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) F(r, c) = jac[r][c];
        const NoiseCoefficients nc = noise_coefficients(zero, m, eps);
        Eigen::Matrix4cd D = Eigen::Matrix4cd::Zero();
        D(0, 1) = D(1, 0) = nc.c_alpha;
        D(2, 3) = D(3, 2) = nc.c_beta;
        ident = std::max(ident, (D * F.transpose() - F * D).cwiseAbs().maxCoeff());
        const Eigen::Matrix4cd C = -0.5 * F.inverse() * D;
        const EqualTimeCorrelations cf = equal_time_corr_below(m, eps);
        routes = std::max(routes, (C.block<2, 2>(0, 0) - cf.aa).cwiseAbs().maxCoeff());
        routes = std::max(routes, (C.block<2, 2>(0, 2) - cf.ab).cwiseAbs().maxCoeff());
      }
    }
  }
  return {ident <= 1e-12 && routes <= 1e-12,
          fmt("%d points: max |DF^T - FD| = %.2e, max |closed form + F^-1 D/2| = %.2e", points,
              ident, routes)};
}

Outcome mc_vs_linear(double lambda, std::size_t n_traj) {
  const Model m = sym(3.0, 0.5, lambda);
  const double eps = 0.5 * m.eps_th();
  SimConfig c;
  c.n_traj = n_traj;
  c.seed = 2024;
  const std::vector<MomentSpec> specs = {parse_moment("b1a1"), parse_moment("a1"),
                                         parse_moment("a2"), parse_moment("b1a1a2")};
  const std::vector<EnsembleEstimate> est = ensemble_moments(m, eps, c, specs);
  const double lin = mean_photon_below(m, eps);
  const EnsembleEstimate& n = est[0];
  const bool n_ok = std::abs(n.mean.real() - lin) <= 3.0 * n.se_real &&
                    std::abs(n.mean.imag()) <= 3.0 * n.se_imag;
  bool odd_ok = true;
  for (std::size_t i = 1; i < est.size(); ++i)
    odd_ok = odd_ok && std::abs(est[i].mean.real()) <= 3.0 * est[i].se_real &&
             std::abs(est[i].mean.imag()) <= 3.0 * est[i].se_imag;
  return {n_ok && odd_ok,
          fmt("lambda=%g, %zu trajectories: <b1a1> = %.5f +- %.5f vs linearized %.6f (%.1f SE); "
              "odd moments %s; discarded %.2f%%",
              lambda, n.n_effective, n.mean.real(), n.se_real, lin,
              (n.mean.real() - lin) / n.se_real, odd_ok ? "consistent with 0" : "NOT zero",
              100.0 * n.discard_fraction)};
}

Outcome phase_locking() {
  const Model m = sym(3.0, 0.5, 0.01);
  SimConfig c;
  c.n_traj = 200;
  c.seed = 9;
  const PhaseHistograms h = phase_histogram(m, 1.5 * m.eps_th(), c);
  const double mass = h.diff.mass_within(0.0, 0.3, std::numbers::pi);
  return {mass >= 0.9, fmt("lambda=0.01, eps=1.5 eps_th, delta=3: %.2f%% of %zu samples within "
                           "0.3 rad of 0 mod pi",
                           100.0 * mass, h.n_samples)};
}

Outcome determinism() {
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = nopo_cli::run_cli(args, out, err);
    return code == 0 ? out.str() : "exit " + std::to_string(code) + ": " + err.str();
  };
  const std::vector<std::vector<std::string>> configs = {
      {"mc", "--delta", "3", "--chi", "0.5", "--eps-ratio", "0.5", "--n-traj", "64", "--t-max",
       "12", "--burn-in", "2", "--seed", "17", "--max-discard", "0.5"},
      {"mc", "--histogram", "--delta", "3", "--chi", "0.5", "--lambda", "0.01", "--eps-ratio",
       "1.5", "--n-traj", "32", "--t-max", "12", "--seed", "17"}};
  bool ok = true;
  std::size_t bytes = 0;
  for (const auto& base : configs) {
    std::string first;
    for (const char* w : {"1", "2", "3", "7", "0"}) {
      auto args = base;
      args.push_back("--workers");
      args.push_back(w);
      const std::string s = run(args);
      if (first.empty()) {
        first = s;
        ok = ok && s.rfind("exit", 0) != 0;
        bytes += s.size();
      } else {
        ok = ok && s == first;
      }
    }
  }
  return {ok, fmt("moments and histogram CSV compared for workers 1,2,3,7,all (%zu bytes)", bytes)};
}

}  // namespace

int main() {
  struct Item {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
    bool counts;
  };
  const std::vector<Item> items = {
      {"1", "unitary minima", unitary_minima, true},
      {"2", "minimum variance closure", unitary_closure, true},
      {"3", "ordinary NOPO limit", ordinary_limit, true},
      {"4", "threshold cancellation", threshold_cancellation, true},
      {"5", "above-threshold asymptote", asymptote, true},
      {"6", "EPR product near threshold", epr_product, true},
      {"7", "matrix identities", matrix_identities, true},
      {"8", "Monte Carlo vs linearized moments", [] { return mc_vs_linear(1.0, 10000); }, true},
      {"8b", "same at weak nonlinearity (informational)",
       [] { return mc_vs_linear(0.01, 2000); }, false},
      {"9", "phase locking in Monte Carlo", phase_locking, true},
      {"10", "determinism across worker counts", determinism, true},
  };
  int failed = 0;
  for (const Item& it : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass && it.counts) ++failed;
    std::printf("criterion %-3s %s  %s: %s [%.1fs]\n", it.id,
                o.pass ? "PASS" : (it.counts ? "FAIL" : "info-fail"), it.name, o.detail.c_str(),
                sec);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria failed\n", failed, 10);
  return failed == 0 ? 0 : 1;
}
