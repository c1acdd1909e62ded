#include "nopo/nopo.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "nopo/entanglement.hpp"
#include "nopo/error.hpp"
#include "nopo/fluctuations.hpp"
#include "nopo/model.hpp"
#include "nopo/positive_p.hpp"
#include "nopo/semiclassical.hpp"

struct nopo_model {
  nopo::Model model;
};

struct nopo_histograms {
  nopo::PhaseHistograms h;
};

namespace {

thread_local std::string g_last_error;

nopo_status fail(nopo_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
nopo_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return NOPO_OK;
  } catch (const nopo::Error& e) {
    switch (e.kind()) {
      case nopo::ErrorKind::Domain: return fail(NOPO_ERR_DOMAIN, e.what());
      case nopo::ErrorKind::Regime: return fail(NOPO_ERR_REGIME, e.what());
      case nopo::ErrorKind::Estimation: return fail(NOPO_ERR_ESTIMATION, e.what());
      case nopo::ErrorKind::Contract: return fail(NOPO_ERR_CONTRACT, e.what());
    }
    return fail(NOPO_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(NOPO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NOPO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NOPO_ERR_INTERNAL, "unknown error");
  }
}

#define NOPO_REQUIRE(cond) \
  if (!(cond)) return fail(NOPO_ERR_ARGUMENT, "invalid argument: " #cond)

nopo::SystemParams to_cpp(const nopo_params& p) {
  nopo::SystemParams s;
  s.gamma1 = p.gamma1;
  s.gamma2 = p.gamma2;
  s.gamma3 = p.gamma3;
  s.delta1 = p.delta1;
  s.delta2 = p.delta2;
  s.chi = p.chi;
  s.k = p.k;
  s.E = p.E;
  s.phi_L = p.phi_L;
  s.phi_k = p.phi_k;
  s.phi_chi = p.phi_chi;
  return s;
}

nopo_params to_c(const nopo::SystemParams& s) {
  return {s.gamma1, s.gamma2, s.gamma3, s.delta1, s.delta2, s.chi,
          s.k,      s.E,      s.phi_L,  s.phi_k,  s.phi_chi};
}

void fill(const nopo::VarianceReport& r, nopo_variance* out) {
  out->V = r.V;
  out->R = r.R;
  out->V_plus = r.V_plus;
  out->V_minus = r.V_minus;
  out->product = r.product;
  out->inseparable = r.inseparable;
  out->strong_epr = r.strong_epr;
  out->linearization_unreliable = r.linearization_unreliable;
  out->degenerate = r.degenerate;
  out->regime = r.regime == nopo::Regime::Moments ? NOPO_REGIME_MOMENTS
                : r.regime == nopo::Regime::Unitary ? NOPO_REGIME_UNITARY
                : r.regime == nopo::Regime::Below   ? NOPO_REGIME_BELOW
                                                    : NOPO_REGIME_ABOVE;
  out->theta1 = r.angles.theta1;
  out->theta2 = r.angles.theta2;
  out->sum = r.angles.sum;
  out->diff = r.angles.diff;
}

nopo::SimConfig to_cpp(const nopo_sim_config& c) {
  nopo::SimConfig s;
  s.dt = c.dt;
  s.t_max = c.t_max;
  s.n_traj = static_cast<std::size_t>(c.n_traj);
  s.burn_in = c.burn_in;
  s.seed = c.seed;
  s.divergence_bound = c.divergence_bound;
  s.sample_interval = c.sample_interval;
  s.workers = c.workers;
  s.noise = c.noise != 0;
  s.max_discard_fraction = c.max_discard_fraction;
  s.initial = {{c.initial[0], c.initial[1]},
               {c.initial[2], c.initial[3]},
               {c.initial[4], c.initial[5]},
               {c.initial[6], c.initial[7]}};
  return s;
}

const nopo::Histogram* pick(const nopo_histograms* h, int kind) {
  switch (kind) {
    case NOPO_HIST_DIFF: return &h->h.diff;
    case NOPO_HIST_SUM: return &h->h.sum;
    case NOPO_HIST_ABS1: return &h->h.abs1;
    default: return nullptr;
  }
}

}  // namespace

extern "C" {

const char* nopo_version(void) { return NOPO_VERSION_STRING; }

const char* nopo_last_error(void) { return g_last_error.c_str(); }

const char* nopo_status_string(nopo_status s) {
  switch (s) {
    case NOPO_OK: return "ok";
    case NOPO_ERR_ARGUMENT: return "invalid argument";
    case NOPO_ERR_DOMAIN: return "parameter domain error";
    case NOPO_ERR_REGIME: return "regime error";
    case NOPO_ERR_ESTIMATION: return "estimation failure";
    case NOPO_ERR_CONTRACT: return "contract violation";
    case NOPO_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void nopo_params_default(nopo_params* p) {
  if (p) *p = to_c(nopo::SystemParams{});
}

nopo_status nopo_params_symmetric(double gamma, double delta, double chi, double lambda,
                                  double eps, double gamma3, nopo_params* out) {
  NOPO_REQUIRE(out);
  return guarded([&] {
    *out = to_c(nopo::SystemParams::symmetric(gamma, delta, chi, lambda, eps, gamma3));
  });
}

nopo_status nopo_model_create(const nopo_params* p, nopo_model** out) {
  NOPO_REQUIRE(p && out);
  *out = nullptr;
  return guarded([&] { *out = new nopo_model{nopo::Model(to_cpp(*p))}; });
}

void nopo_model_destroy(nopo_model* m) { delete m; }

nopo_status nopo_model_scales(const nopo_model* m, nopo_scales* out) {
  NOPO_REQUIRE(m && out);
  const auto& s = m->model.scales();
  out->eps = s.eps;
  out->lambda = s.lambda;
  out->gamma_tilde = s.gamma_tilde;
  out->eps_th = s.eps_th;
  out->E_th = s.E_th;
  out->P_th = s.P_th;
  out->p_th_literal = s.p_th_literal;
  out->threshold_known = s.threshold_known;
  out->adiabatic_ok = s.adiabatic_ok;
  out->locking_feasible = nopo::locking_feasible(m->model.params());
  out->symmetric = m->model.params().is_symmetric();
  g_last_error.clear();
  return NOPO_OK;
}

nopo_status nopo_critical_points(const nopo_model* m, double* plus, double* minus) {
  NOPO_REQUIRE(m && plus && minus);
  return guarded([&] {
    const nopo::CriticalPoints cp = nopo::critical_points(m->model);
    *plus = cp.eps_cr_plus;
    *minus = cp.eps_cr_minus;
  });
}

nopo_status nopo_steady_state(const nopo_model* m, double eps, int branch, nopo_steady* out) {
  NOPO_REQUIRE(m && out);
  NOPO_REQUIRE(branch >= NOPO_BRANCH_PLUS && branch <= NOPO_BRANCH_DEFAULT);
  return guarded([&] {
    const nopo::Branch b = branch == NOPO_BRANCH_DEFAULT ? nopo::default_branch(m->model)
                           : branch == NOPO_BRANCH_PLUS  ? nopo::Branch::Plus
                                                         : nopo::Branch::Minus;
    const nopo::SteadyStateBranch s = nopo::steady_state(m->model, eps, b);
    out->branch = s.branch == nopo::Branch::Plus ? NOPO_BRANCH_PLUS : NOPO_BRANCH_MINUS;
    out->eps = s.eps;
    out->n10 = s.n10;
    out->n20 = s.n20;
    out->phi10 = s.phi10;
    out->phi20 = s.phi20;
    out->phase_sum = s.phase_sum;
    out->phase_diff = s.phase_diff;
    out->below_critical = s.below_critical;
    out->locked = s.locked;
    out->stable = s.stable;
    out->stability_extrapolated = s.stability_extrapolated;
    for (int i = 0; i < 4; ++i) {
      out->eig_re[i] = s.eigenvalues[i].real();
      out->eig_im[i] = s.eigenvalues[i].imag();
    }
  });
}

nopo_status nopo_output_rates(const nopo_model* m, double n10, double n20, double rates[3]) {
  NOPO_REQUIRE(m && rates);
  const nopo::OutputRates r = nopo::output_rates(m->model, n10, n20);
  rates[0] = r.n3_in;
  rates[1] = r.n1_out;
  rates[2] = r.n2_out;
  g_last_error.clear();
  return NOPO_OK;
}

nopo_status nopo_variance_steady(const nopo_model* m, int regime, double eps, double delta_theta,
                                 nopo_variance* out) {
  NOPO_REQUIRE(m && out);
  NOPO_REQUIRE(regime == NOPO_REGIME_BELOW || regime == NOPO_REGIME_ABOVE ||
               regime == NOPO_REGIME_AUTO);
  return guarded([&] {
    nopo::VarianceReport r;
    if (regime == NOPO_REGIME_BELOW) r = nopo::variance_below(m->model, eps, delta_theta);
    else if (regime == NOPO_REGIME_ABOVE) r = nopo::variance_above(m->model, eps, delta_theta);
    else r = nopo::variance_auto(m->model, eps, delta_theta);
    fill(r, out);
  });
}

nopo_status nopo_variance_from_moments(const nopo_moments* mo, double sum, double diff,
                                       nopo_variance* out) {
  NOPO_REQUIRE(mo && out);
  return guarded([&] {
    nopo::MomentSet s;
    s.n = mo->n;
    s.m_aa = {mo->aa_re, mo->aa_im};
    s.m_a1sq = {mo->a1sq_re, mo->a1sq_im};
    s.m_cross = {mo->cross_re, mo->cross_im};
    nopo::QuadratureAngles q;
    q.sum = sum;
    q.diff = diff;
    q.theta1 = 0.5 * (sum - diff);
    q.theta2 = 0.5 * (sum + diff);
    fill(nopo::variances_from_moments(s, q), out);
  });
}

nopo_status nopo_moments_below(const nopo_model* m, double eps, nopo_moments* out) {
  NOPO_REQUIRE(m && out);
  return guarded([&] {
    const nopo::MomentSet s = nopo::moments_below(m->model, eps);
    *out = {s.n,          s.m_aa.real(),    s.m_aa.imag(),   s.m_a1sq.real(),
            s.m_a1sq.imag(), s.m_cross.real(), s.m_cross.imag()};
  });
}

nopo_status nopo_mean_photon_below(const nopo_model* m, double eps, double* n) {
  NOPO_REQUIRE(m && n);
  return guarded([&] { *n = nopo::mean_photon_below(m->model, eps); });
}

nopo_status nopo_unitary_variance(double chi, double eps, double t, double sigma_theta,
                                  double* V) {
  NOPO_REQUIRE(V);
  return guarded([&] { *V = nopo::unitary_variance(chi, eps, t, sigma_theta); });
}

nopo_status nopo_unitary_minimum(double chi, double eps, double* t_min, double* V_min,
                                 double* period) {
  NOPO_REQUIRE(t_min && V_min);
  return guarded([&] {
    const nopo::UnitaryMinimum u = nopo::unitary_minimum(chi, eps);
    *t_min = u.t_min;
    *V_min = u.V_min;
    if (period) *period = u.period;
  });
}

void nopo_sim_config_default(nopo_sim_config* c) {
  if (!c) return;
  const nopo::SimConfig s;
  c->dt = s.dt;
  c->t_max = s.t_max;
  c->n_traj = s.n_traj;
  c->burn_in = s.burn_in;
  c->seed = s.seed;
  c->divergence_bound = s.divergence_bound;
  c->sample_interval = s.sample_interval;
  c->workers = s.workers;
  c->noise = s.noise;
  c->max_discard_fraction = s.max_discard_fraction;
  for (double& v : c->initial) v = 0.0;
}

nopo_status nopo_ensemble_moments(const nopo_model* m, double eps, const nopo_sim_config* c,
                                  const char* const* specs, size_t n_specs, nopo_estimate* out) {
  NOPO_REQUIRE(m && c && (n_specs == 0 || (specs && out)));
  return guarded([&] {
    std::vector<nopo::MomentSpec> parsed;
    for (size_t i = 0; i < n_specs; ++i) {
      if (!specs[i]) throw nopo::DomainError("null moment word");
      parsed.push_back(nopo::parse_moment(specs[i]));
    }
    const auto est = nopo::ensemble_moments(m->model, eps, to_cpp(*c), parsed);
    for (size_t i = 0; i < n_specs; ++i) {
      nopo_estimate& e = out[i];
      std::memset(e.label, 0, sizeof e.label);
      std::strncpy(e.label, est[i].label.c_str(), sizeof e.label - 1);
      e.mean_re = est[i].mean.real();
      e.mean_im = est[i].mean.imag();
      e.se_re = est[i].se_real;
      e.se_im = est[i].se_imag;
      e.std_error = est[i].std_error;
      e.n_effective = est[i].n_effective;
      e.discard_fraction = est[i].discard_fraction;
    }
  });
}

nopo_status nopo_phase_histogram(const nopo_model* m, double eps, const nopo_sim_config* c,
                                 size_t bins, nopo_histograms** out) {
  NOPO_REQUIRE(m && c && out);
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<nopo_histograms>();
    h->h = nopo::phase_histogram(m->model, eps, to_cpp(*c), bins);
    *out = h.release();
  });
}

void nopo_histograms_destroy(nopo_histograms* h) { delete h; }

size_t nopo_histograms_bins(const nopo_histograms* h) { return h ? h->h.diff.counts.size() : 0; }

nopo_status nopo_histograms_range(const nopo_histograms* h, int kind, double* lo, double* hi) {
  NOPO_REQUIRE(h && lo && hi);
  const nopo::Histogram* x = pick(h, kind);
  NOPO_REQUIRE(x);
  *lo = x->lo;
  *hi = x->hi;
  g_last_error.clear();
  return NOPO_OK;
}

nopo_status nopo_histograms_counts(const nopo_histograms* h, int kind, uint64_t* counts,
                                   size_t n) {
  NOPO_REQUIRE(h && counts);
  const nopo::Histogram* x = pick(h, kind);
  NOPO_REQUIRE(x);
  NOPO_REQUIRE(n >= x->counts.size());
  std::copy(x->counts.begin(), x->counts.end(), counts);
  g_last_error.clear();
  return NOPO_OK;
}

nopo_status nopo_histograms_mass_within(const nopo_histograms* h, int kind, double center,
                                        double half_width, double period, double* fraction) {
  NOPO_REQUIRE(h && fraction);
  const nopo::Histogram* x = pick(h, kind);
  NOPO_REQUIRE(x);
  NOPO_REQUIRE(period > 0.0);
  *fraction = x->mass_within(center, half_width, period);
  g_last_error.clear();
  return NOPO_OK;
}

nopo_status nopo_histograms_samples(const nopo_histograms* h, uint64_t* samples,
                                    uint64_t* diverged) {
  NOPO_REQUIRE(h && samples && diverged);
  *samples = h->h.n_samples;
  *diverged = h->h.n_diverged;
  g_last_error.clear();
  return NOPO_OK;
}

const char* nopo_histograms_note(const nopo_histograms* h) {
  return h ? h->h.note.c_str() : "";
}

}  // extern "C"
