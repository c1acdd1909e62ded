#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "nopo/nopo.h"

using doctest::Approx;

namespace {

nopo_model* make(double delta, double chi, double lambda = 1.0) {
  nopo_params p;
  REQUIRE(nopo_params_symmetric(1.0, delta, chi, lambda, 0.0, 100.0, &p) == NOPO_OK);
  nopo_model* m = nullptr;
  REQUIRE(nopo_model_create(&p, &m) == NOPO_OK);
  REQUIRE(m != nullptr);
  return m;
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::strlen(nopo_version()) > 0);
  CHECK(std::string(nopo_status_string(NOPO_OK)) != std::string(nopo_status_string(NOPO_ERR_REGIME)));
  CHECK(nopo_status_string(static_cast<nopo_status>(42)) != nullptr);
}

TEST_CASE("model lifecycle and scales") {
  nopo_model* m = make(3.0, 0.5);
  nopo_scales s;
  REQUIRE(nopo_model_scales(m, &s) == NOPO_OK);
  CHECK(s.eps_th == Approx(std::sqrt(7.25)));
  CHECK(s.symmetric == 1);
  CHECK(s.locking_feasible == 1);
  double cp = 0.0, cm = 0.0;
  REQUIRE(nopo_critical_points(m, &cp, &cm) == NOPO_OK);
  CHECK(cp == Approx(std::sqrt(7.25)));
  CHECK(cm == Approx(std::sqrt(13.25)));
  nopo_model_destroy(m);
  nopo_model_destroy(nullptr);
}

TEST_CASE("invalid arguments") {
  nopo_model* m = nullptr;
  CHECK(nopo_model_create(nullptr, &m) == NOPO_ERR_ARGUMENT);
  CHECK(std::strlen(nopo_last_error()) > 0);
  nopo_params p;
  nopo_params_default(&p);
  p.gamma1 = -1.0;
  CHECK(nopo_model_create(&p, &m) == NOPO_ERR_DOMAIN);
  CHECK(m == nullptr);
  CHECK(nopo_params_symmetric(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, &p) == NOPO_ERR_DOMAIN);
  CHECK(nopo_params_symmetric(1.0, 0.0, 0.0, -1.0, 0.0, 100.0, &p) == NOPO_ERR_DOMAIN);
  REQUIRE(nopo_params_symmetric(-1.0, 0.0, 0.0, 1.0, 0.0, 100.0, &p) == NOPO_OK);
  CHECK(nopo_model_create(&p, &m) == NOPO_ERR_DOMAIN);

  nopo_model* ok = make(3.0, 0.5);
  nopo_steady st;
  CHECK(nopo_steady_state(ok, 5.0, NOPO_BRANCH_PLUS, nullptr) == NOPO_ERR_ARGUMENT);
  CHECK(nopo_steady_state(nullptr, 5.0, NOPO_BRANCH_PLUS, &st) == NOPO_ERR_ARGUMENT);
  CHECK(nopo_steady_state(ok, 5.0, 17, &st) == NOPO_ERR_ARGUMENT);
  nopo_variance v;
  CHECK(nopo_variance_steady(ok, 99, 1.0, 0.0, &v) == NOPO_ERR_ARGUMENT);
  CHECK(nopo_variance_steady(ok, NOPO_REGIME_BELOW, 4.0, 0.0, &v) == NOPO_ERR_REGIME);
  CHECK(std::string(nopo_last_error()).size() > 0);
  CHECK(nopo_unitary_variance(1.0, 0.5, -1.0, 0.0, &v.V) == NOPO_ERR_DOMAIN);
  nopo_model_destroy(ok);

  nopo_model* flat = make(0.0, 0.5);
  CHECK(nopo_variance_steady(flat, NOPO_REGIME_ABOVE, 5.0, 0.0, &v) == NOPO_ERR_DOMAIN);
  nopo_model_destroy(flat);
}

TEST_CASE("steady state values") {
  nopo_model* m = make(3.0, 0.5);
  nopo_steady st;
  REQUIRE(nopo_steady_state(m, 2.0 * std::sqrt(7.25), NOPO_BRANCH_DEFAULT, &st) == NOPO_OK);
  CHECK(st.branch == NOPO_BRANCH_PLUS);
  CHECK(st.n10 == Approx(3.7697).epsilon(1e-4));
  CHECK(st.n20 == Approx(st.n10));
  CHECK(st.stable == 1);
  CHECK(std::abs(std::abs(st.phase_diff) - M_PI) < 1e-9);
  double rates[3];
  REQUIRE(nopo_output_rates(m, st.n10, st.n20, rates) == NOPO_OK);
  CHECK(rates[1] == Approx(2.0 * st.n10));
  nopo_model_destroy(m);
}

TEST_CASE("variance values") {
  nopo_model* m = make(10.0, 0.1);
  nopo_scales s;
  REQUIRE(nopo_model_scales(m, &s) == NOPO_OK);
  nopo_variance v;
  REQUIRE(nopo_variance_steady(m, NOPO_REGIME_AUTO, s.eps_th, 0.0, &v) == NOPO_OK);
  CHECK(v.regime == NOPO_REGIME_ABOVE);
  CHECK(v.V == Approx(0.5025));
  CHECK(v.product == Approx(0.2525));
  nopo_model_destroy(m);

  nopo_model* b = make(3.0, 0.5);
  REQUIRE(nopo_variance_steady(b, NOPO_REGIME_BELOW, 2.0, 0.0, &v) == NOPO_OK);
  CHECK(v.V == Approx(0.6110).epsilon(1e-4));
  nopo_moments mo;
  REQUIRE(nopo_moments_below(b, 2.0, &mo) == NOPO_OK);
  nopo_variance w;
  REQUIRE(nopo_variance_from_moments(&mo, v.sum, v.diff, &w) == NOPO_OK);
  CHECK(w.V == Approx(v.V).epsilon(1e-12));
  double n = 0.0;
  REQUIRE(nopo_mean_photon_below(b, 2.0, &n) == NOPO_OK);
  CHECK(n == Approx(mo.n));
  nopo_model_destroy(b);

  double t = 0.0, vm = 0.0, period = 0.0;
  REQUIRE(nopo_unitary_minimum(1.0, 2.0, &t, &vm, &period) == NOPO_OK);
  CHECK(vm == Approx(1.0 / 3.0));
  double vt = 0.0;
  REQUIRE(nopo_unitary_variance(1.0, 2.0, t, 0.0, &vt) == NOPO_OK);
  CHECK(vt == Approx(vm));
}

TEST_CASE("ensemble moments and histograms") {
  nopo_model* m = make(3.0, 0.5, 0.01);
  nopo_sim_config c;
  nopo_sim_config_default(&c);
  c.n_traj = 40;
  c.t_max = 15.0;
  c.burn_in = 5.0;
  c.workers = 2;
  const char* words[] = {"b1a1", "a1a2"};
  nopo_estimate est[2];
  REQUIRE(nopo_ensemble_moments(m, 2.0, &c, words, 2, est) == NOPO_OK);
  CHECK(std::string(est[0].label) == "b1a1");
  CHECK(est[0].n_effective == 40);
  CHECK(est[0].mean_re > 0.0);
  const char* bad[] = {"q9"};
  CHECK(nopo_ensemble_moments(m, 2.0, &c, bad, 1, est) == NOPO_ERR_DOMAIN);
  CHECK(nopo_ensemble_moments(m, 2.0, &c, nullptr, 1, est) == NOPO_ERR_ARGUMENT);

  nopo_sim_config tiny = c;
  tiny.divergence_bound = 1e-3;
  CHECK(nopo_ensemble_moments(m, 4.0, &tiny, words, 2, est) == NOPO_ERR_ESTIMATION);

  nopo_histograms* h = nullptr;
  REQUIRE(nopo_phase_histogram(m, 1.5 * std::sqrt(7.25), &c, 60, &h) == NOPO_OK);
  CHECK(nopo_histograms_bins(h) == 60);
  double lo = 0.0, hi = 0.0;
  REQUIRE(nopo_histograms_range(h, NOPO_HIST_ABS1, &lo, &hi) == NOPO_OK);
  CHECK(lo == Approx(-M_PI));
  CHECK(hi == Approx(M_PI));
  std::vector<uint64_t> counts(60);
  REQUIRE(nopo_histograms_counts(h, NOPO_HIST_DIFF, counts.data(), counts.size()) == NOPO_OK);
  uint64_t total = 0;
  for (uint64_t k : counts) total += k;
  uint64_t samples = 0, diverged = 0;
  REQUIRE(nopo_histograms_samples(h, &samples, &diverged) == NOPO_OK);
  CHECK(total == samples);
  CHECK(nopo_histograms_counts(h, NOPO_HIST_DIFF, counts.data(), 10) == NOPO_ERR_ARGUMENT);
  CHECK(nopo_histograms_counts(h, 7, counts.data(), counts.size()) == NOPO_ERR_ARGUMENT);
  double frac = 0.0;
  REQUIRE(nopo_histograms_mass_within(h, NOPO_HIST_DIFF, 0.0, 0.3, M_PI, &frac) == NOPO_OK);
  CHECK(frac > 0.9);
  CHECK(std::string(nopo_histograms_note(h)).empty());
  nopo_histograms_destroy(h);
  nopo_histograms_destroy(nullptr);
  nopo_model_destroy(m);
}
