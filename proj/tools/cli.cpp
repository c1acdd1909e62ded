#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "nopo/nopo.h"

namespace nopo_cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Failure {
  int code;
  std::string message;
};

void check(nopo_status s) {
  if (s == NOPO_OK) return;
  int code = 1;
  switch (s) {
    case NOPO_ERR_DOMAIN:
    case NOPO_ERR_ARGUMENT: code = kExitDomain; break;
    case NOPO_ERR_REGIME: code = kExitRegime; break;
    case NOPO_ERR_ESTIMATION: code = kExitEstimation; break;
    default: break;
  }
  throw Failure{code, std::string(nopo_status_string(s)) + ": " + nopo_last_error()};
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ModelDeleter {
  void operator()(nopo_model* m) const { nopo_model_destroy(m); }
};
using ModelPtr = std::unique_ptr<nopo_model, ModelDeleter>;

struct HistDeleter {
  void operator()(nopo_histograms* h) const { nopo_histograms_destroy(h); }
};

// Every field of a run, settable from flags or a `key = value` file.
struct RunConfig {
  double gamma = 1.0;
  double gamma1 = kNaN;
  double gamma2 = kNaN;
  double gamma3 = 100.0;
  double delta = 0.0;
  double delta1 = kNaN;
  double delta2 = kNaN;
  double chi = 0.0;
  double lambda = 1.0;
  double eps = kNaN;
  double eps_ratio = kNaN;
  double eps_chi = kNaN;
  double phi_L = 0.0;
  double phi_k = 0.0;
  double phi_chi = 0.0;
  std::string branch = "default";

  std::string regime = "auto";
  double delta_theta = 0.0;
  double sigma_theta = 0.0;
  std::string sweep;
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  double dt = 1e-3;
  double t_max = 30.0;
  std::uint64_t n_traj = 1000;
  double burn_in = 10.0;
  std::uint64_t seed = 1;
  double divergence_bound = 1e6;
  double sample_interval = 0.01;
  unsigned workers = 0;
  double max_discard = 0.01;
  std::string moments = "b1a1,b2a2,a1a2,a1^2,b1a2,a1,a2,b1a1a2";
  bool histogram = false;
  std::size_t bins = 90;

  std::string output;
  std::string out_dir;
  int figure = 0;
};

std::string resolve_dir(const RunConfig& c) {
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv("NOPO_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

class Session {
 public:
  explicit Session(const RunConfig& c) : c_(c) {}

  nopo_params params(double eps) const {
    nopo_params p;
    nopo_params_default(&p);
    p.gamma1 = std::isnan(c_.gamma1) ? c_.gamma : c_.gamma1;
    p.gamma2 = std::isnan(c_.gamma2) ? c_.gamma : c_.gamma2;
    p.gamma3 = c_.gamma3;
    p.delta1 = std::isnan(c_.delta1) ? c_.delta : c_.delta1;
    p.delta2 = std::isnan(c_.delta2) ? c_.delta : c_.delta2;
    p.chi = c_.chi;
    p.phi_L = c_.phi_L;
    p.phi_k = c_.phi_k;
    p.phi_chi = c_.phi_chi;
    if (!(c_.lambda > 0.0) || !(c_.gamma3 > 0.0))
      throw Failure{kExitDomain, "lambda and gamma3 must be > 0"};
    p.k = std::sqrt(c_.lambda * c_.gamma3);
    p.E = eps * c_.gamma3 / p.k;
    return p;
  }

  ModelPtr model(double eps) const {
    const nopo_params p = params(eps);
    nopo_model* m = nullptr;
    check(nopo_model_create(&p, &m));
    return ModelPtr(m);
  }

  nopo_scales scales() const {
    nopo_scales s;
    check(nopo_model_scales(model(0.0).get(), &s));
    return s;
  }

  double eps_th() const {
    const nopo_scales s = scales();
    if (!s.threshold_known)
      throw Failure{kExitDomain, "threshold undefined: phase locking is infeasible for these parameters"};
    return s.eps_th;
  }

  // Absolute pump from --eps or --eps-ratio.
  double pump() const {
    if (!std::isnan(c_.eps)) return c_.eps;
    if (!std::isnan(c_.eps_ratio)) return c_.eps_ratio * eps_th();
    throw Failure{kExitDomain, "specify --eps or --eps-ratio"};
  }

  void header(std::ostream& os, const std::string& command, bool with_sim) const {
    const nopo_params p = params(0.0);
    os << "# nopo " << nopo_version() << "\n";
    os << "# command: " << command << "\n";
    os << "# params: gamma1=" << num(p.gamma1) << " gamma2=" << num(p.gamma2)
       << " gamma3=" << num(p.gamma3) << " delta1=" << num(p.delta1) << " delta2=" << num(p.delta2)
       << " chi=" << num(p.chi) << " lambda=" << num(c_.lambda) << " phi_L=" << num(p.phi_L)
       << " phi_k=" << num(p.phi_k) << " phi_chi=" << num(p.phi_chi) << "\n";
    if (with_sim) {
      os << "# sim: dt=" << num(c_.dt) << " t_max=" << num(c_.t_max) << " n_traj=" << c_.n_traj
         << " burn_in=" << num(c_.burn_in) << " divergence_bound=" << num(c_.divergence_bound)
         << " sample_interval=" << num(c_.sample_interval) << " scheme=euler-maruyama\n";
      os << "# seed: " << c_.seed << "\n";
    } else {
      os << "# seed: none\n";
    }
  }

  nopo_sim_config sim() const {
    nopo_sim_config s;
    nopo_sim_config_default(&s);
    s.dt = c_.dt;
    s.t_max = c_.t_max;
    s.n_traj = c_.n_traj;
    s.burn_in = c_.burn_in;
    s.seed = c_.seed;
    s.divergence_bound = c_.divergence_bound;
    s.sample_interval = c_.sample_interval;
    s.workers = c_.workers;
    s.max_discard_fraction = c_.max_discard;
    return s;
  }

 private:
  const RunConfig& c_;
};

std::vector<double> grid(const RunConfig& c) {
  if (!(c.step > 0.0)) throw Failure{kExitDomain, "sweep step must be > 0"};
  if (!(c.stop >= c.start)) throw Failure{kExitDomain, "sweep stop must be >= start"};
  const auto n = static_cast<std::size_t>(std::floor((c.stop - c.start) / c.step + 1e-9)) + 1;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = c.start + static_cast<double>(i) * c.step;
  return v;
}

int regime_code(const std::string& r) {
  if (r == "below") return NOPO_REGIME_BELOW;
  if (r == "above") return NOPO_REGIME_ABOVE;
  if (r == "auto") return NOPO_REGIME_AUTO;
  if (r == "unitary") return NOPO_REGIME_UNITARY;
  throw Failure{kExitDomain, "unknown regime '" + r + "'"};
}

int branch_code(const std::string& b) {
  if (b == "default") return NOPO_BRANCH_DEFAULT;
  if (b == "plus" || b == "+") return NOPO_BRANCH_PLUS;
  if (b == "minus" || b == "-") return NOPO_BRANCH_MINUS;
  throw Failure{kExitDomain, "unknown branch '" + b + "'"};
}

// ---- steady ---------------------------------------------------------------

void steady_row(const Session& s, const RunConfig& c, double eps, double eth, std::ostream& os) {
  const ModelPtr m = s.model(eps);
  nopo_steady st;
  check(nopo_steady_state(m.get(), eps, branch_code(c.branch), &st));
  double rates[3];
  check(nopo_output_rates(m.get(), st.n10, st.n20, rates));
  std::string note;
  if (!st.locked) note = "unlocked";
  else if (st.below_critical) note = "below threshold";
  else if (st.n10 == 0.0) note = "at threshold";
  if (st.stability_extrapolated) note += note.empty() ? "stability extrapolated" : "; stability extrapolated";
  const double pi = std::numbers::pi;
  os << num(eps / eth) << ',' << num(eps) << ',' << num(eth) << ','
     << (st.branch == NOPO_BRANCH_PLUS ? "plus" : "minus") << ',' << num(st.n10) << ','
     << num(st.n20) << ',' << num(st.phi10) << ',' << num(st.phi20) << ','
     << num(st.phi10 + pi) << ',' << num(st.phi20 + pi) << ',' << num(st.phase_sum) << ','
     << num(st.phase_diff) << ',' << (st.stable ? 1 : 0) << ',' << num(rates[1]) << ','
     << num(rates[2]) << ',' << note << '\n';
}

void cmd_steady(const Session& s, const RunConfig& c, std::ostream& os) {
  const nopo_scales sc = s.scales();
  const double eth = sc.threshold_known ? sc.eps_th : kNaN;
  std::vector<double> pumps;
  if (c.sweep.empty()) {
    pumps.push_back(s.pump());
  } else if (c.sweep == "eps-ratio") {
    for (double r : grid(c)) pumps.push_back(r * s.eps_th());
  } else if (c.sweep == "eps") {
    pumps = grid(c);
  } else {
    throw Failure{kExitDomain, "steady sweeps 'eps' or 'eps-ratio', not '" + c.sweep + "'"};
  }
  std::ostringstream body;
  body << "eps_ratio,eps,eps_th,branch,n10,n20,phi10,phi20,phi10_twin,phi20_twin,phase_sum,"
          "phase_diff,stable,n1_out,n2_out,note\n";
  for (double e : pumps) steady_row(s, c, e, eth, body);
  s.header(os, "steady", false);
  os << "# threshold: eps_th=" << num(eth) << " P_th=" << num(sc.P_th)
     << " (units of hbar*omega^3)\n";
  os << body.str();
}

// ---- variance -------------------------------------------------------------

std::string flag_of(const nopo_variance& v) {
  std::string f;
  if (v.linearization_unreliable) f = "near_threshold";
  if (v.degenerate) f += f.empty() ? "degenerate" : ";degenerate";
  return f.empty() ? "ok" : f;
}

void variance_line(std::ostream& os, double x, const nopo_variance& v) {
  os << num(x) << ',' << num(v.V) << ',' << num(v.R) << ',' << num(v.V_plus) << ','
     << num(v.V_minus) << ',' << num(v.product) << ',' << flag_of(v) << '\n';
}

double unitary_eps(const RunConfig& c) {
  if (!std::isnan(c.eps_chi)) return c.eps_chi * c.chi;
  if (!std::isnan(c.eps)) return c.eps;
  throw Failure{kExitDomain, "unitary regime needs --eps-chi or --eps"};
}

// Unitary curve over chi*t.
void unitary_table(const RunConfig& c, const std::vector<double>& chi_t, std::ostream& body) {
  if (!(c.chi > 0.0)) throw Failure{kExitDomain, "unitary regime needs --chi > 0"};
  const double d1 = std::isnan(c.delta1) ? c.delta : c.delta1;
  const double d2 = std::isnan(c.delta2) ? c.delta : c.delta2;
  if (d1 != 0.0 || d2 != 0.0)
    throw Failure{kExitDomain, "unitary evolution is defined at zero detuning only"};
  const double eps = unitary_eps(c);
  body << "chi_t,V,R,V_plus,V_minus,product,flag\n";
  for (double x : chi_t) {
    double V = 0.0;
    check(nopo_unitary_variance(c.chi, eps, x / c.chi, c.sigma_theta, &V));
    nopo_variance v{};
    v.V = v.V_plus = v.V_minus = V;
    v.product = V * V;
    variance_line(body, x, v);
  }
}

void steady_variance_table(const Session& s, const RunConfig& c, const std::vector<double>& ratios,
                           std::ostream& body) {
  const double eth = s.eps_th();
  const int regime = regime_code(c.regime);
  body << "eps_ratio,V,R,V_plus,V_minus,product,flag\n";
  for (double r : ratios) {
    const double eps = r * eth;
    const ModelPtr m = s.model(eps);
    nopo_variance v;
    check(nopo_variance_steady(m.get(), regime, eps, c.delta_theta, &v));
    variance_line(body, r, v);
  }
}

void cmd_variance(const Session& s, const RunConfig& c, std::ostream& os) {
  std::ostringstream body;
  if (c.regime == "unitary") {
    std::vector<double> xs;
    if (c.sweep.empty()) throw Failure{kExitDomain, "unitary regime needs --sweep chi-t"};
    if (c.sweep != "chi-t") throw Failure{kExitDomain, "unitary regime sweeps 'chi-t'"};
    unitary_table(c, grid(c), body);
  } else {
    regime_code(c.regime);
    std::vector<double> ratios;
    if (c.sweep.empty()) ratios.push_back(s.pump() / s.eps_th());
    else if (c.sweep == "eps-ratio") ratios = grid(c);
    else throw Failure{kExitDomain, "steady-state regimes sweep 'eps-ratio'"};
    steady_variance_table(s, c, ratios, body);
  }
  s.header(os, "variance regime=" + c.regime + " delta_theta=" + num(c.delta_theta) +
                   " sigma_theta=" + num(c.sigma_theta),
           false);
  os << body.str();
}

// ---- mc -------------------------------------------------------------------

std::vector<std::string> split_words(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string w;
  while (std::getline(ss, w, ',')) {
    w.erase(std::remove_if(w.begin(), w.end(), [](unsigned char ch) { return std::isspace(ch); }),
            w.end());
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

int word_order(const std::string& w) {
  int order = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 'a' || w[i] == 'b') {
      int p = 1;
      if (i + 2 < w.size() && w[i + 2] == '^') p = std::atoi(w.c_str() + i + 3);
      order += p;
    }
  }
  return order;
}

// Linearized below-threshold value of a moment word, when one exists.
bool analytic_moment(const std::string& w, const nopo_moments& mo, double& re, double& im) {
  re = im = 0.0;
  if (word_order(w) % 2 == 1) return true;
  if (w == "b1a1" || w == "a1b1" || w == "b2a2" || w == "a2b2") {
    re = mo.n;
  } else if (w == "a1a2" || w == "a2a1") {
    re = mo.aa_re;
    im = mo.aa_im;
  } else if (w == "b1b2" || w == "b2b1") {
    re = mo.aa_re;
    im = -mo.aa_im;
  } else if (w == "a1^2" || w == "a2^2" || w == "a1a1" || w == "a2a2") {
    re = mo.a1sq_re;
    im = mo.a1sq_im;
  } else if (w == "b1^2" || w == "b2^2" || w == "b1b1" || w == "b2b2") {
    re = mo.a1sq_re;
    im = -mo.a1sq_im;
  } else if (w == "b1a2" || w == "a2b1") {
    re = mo.cross_re;
    im = mo.cross_im;
  } else if (w == "b2a1" || w == "a1b2") {
    re = mo.cross_re;
    im = -mo.cross_im;
  } else {
    return false;
  }
  return true;
}

void cmd_mc(const Session& s, const RunConfig& c, std::ostream& os) {
  const double eps = s.pump();
  const double eth = s.scales().eps_th;
  const ModelPtr m = s.model(eps);
  const nopo_sim_config sim = s.sim();
  std::ostringstream body;

  if (c.histogram) {
    nopo_histograms* raw = nullptr;
    check(nopo_phase_histogram(m.get(), eps, &sim, c.bins, &raw));
    const std::unique_ptr<nopo_histograms, HistDeleter> h(raw);
    std::uint64_t samples = 0;
    std::uint64_t diverged = 0;
    check(nopo_histograms_samples(h.get(), &samples, &diverged));
    s.header(os, "mc histogram eps=" + num(eps), true);
    os << "# samples=" << samples << " diverged=" << diverged << "\n";
    if (*nopo_histograms_note(h.get())) os << "# note: " << nopo_histograms_note(h.get()) << "\n";
    nopo_steady st;
    if (eps > eth && nopo_steady_state(m.get(), eps, NOPO_BRANCH_DEFAULT, &st) == NOPO_OK) {
      double md = 0.0;
      double ms = 0.0;
      check(nopo_histograms_mass_within(h.get(), NOPO_HIST_DIFF, st.phase_diff, 0.3,
                                        std::numbers::pi, &md));
      check(nopo_histograms_mass_within(h.get(), NOPO_HIST_SUM, st.phase_sum, 0.3,
                                        std::numbers::pi, &ms));
      os << "# semiclassical: phase_diff=" << num(st.phase_diff) << " phase_sum="
         << num(st.phase_sum) << " mass_within_0.3: diff=" << num(md) << " sum=" << num(ms)
         << "\n";
    }
    body << "histogram,bin_center,count\n";
    const char* names[3] = {"phase_diff", "phase_sum", "phase_abs1"};
    const std::size_t nb = nopo_histograms_bins(h.get());
    std::vector<std::uint64_t> counts(nb);
    for (int kind = 0; kind < 3; ++kind) {
      double lo = 0.0;
      double hi = 0.0;
      check(nopo_histograms_range(h.get(), kind, &lo, &hi));
      check(nopo_histograms_counts(h.get(), kind, counts.data(), nb));
      for (std::size_t b = 0; b < nb; ++b) {
        const double center = lo + (static_cast<double>(b) + 0.5) * (hi - lo) / static_cast<double>(nb);
        body << names[kind] << ',' << num(center) << ',' << counts[b] << '\n';
      }
    }
    os << body.str();
    return;
  }

  const std::vector<std::string> words = split_words(c.moments);
  if (words.empty()) throw Failure{kExitDomain, "no moments requested"};
  std::vector<const char*> ptrs;
  for (const auto& w : words) ptrs.push_back(w.c_str());
  std::vector<nopo_estimate> est(words.size());
  check(nopo_ensemble_moments(m.get(), eps, &sim, ptrs.data(), ptrs.size(), est.data()));

  nopo_moments mo{};
  const bool below = eps < eth && nopo_moments_below(m.get(), eps, &mo) == NOPO_OK;
  body << "moment,order,mean_re,mean_im,se_re,se_im,std_error,n_effective,discard_fraction,"
          "linear_re,linear_im\n";
  for (std::size_t i = 0; i < words.size(); ++i) {
    const nopo_estimate& e = est[i];
    body << words[i] << ',' << word_order(words[i]) << ',' << num(e.mean_re) << ','
         << num(e.mean_im) << ',' << num(e.se_re) << ',' << num(e.se_im) << ','
         << num(e.std_error) << ',' << e.n_effective << ',' << num(e.discard_fraction) << ',';
    double re = 0.0;
    double im = 0.0;
    if (below && analytic_moment(words[i], mo, re, im)) body << num(re) << ',' << num(im);
    else body << ',';
    body << '\n';
  }
  s.header(os, "mc moments eps=" + num(eps), true);
  os << body.str();
}

// ---- figure ---------------------------------------------------------------

struct Curve {
  std::string file;
  std::string label;
  std::string body;
};

std::vector<Curve> figure_curves(const RunConfig& base, int n, std::string& comment) {
  std::vector<Curve> curves;
  auto add = [&](const std::string& label, const RunConfig& cfg, auto&& fill) {
    std::ostringstream os;
    fill(cfg, os);
    curves.push_back({"fig" + std::to_string(n) + "_curve" + std::to_string(curves.size() + 1) +
                          ".csv",
                      label, os.str()});
  };
  auto unitary = [&](double ratio, double stop, double step) {
    RunConfig c = base;
    c.chi = 1.0;
    c.delta = 0.0;
    c.delta1 = c.delta2 = kNaN;
    c.eps_chi = ratio;
    c.eps = kNaN;
    c.sigma_theta = 0.0;
    c.start = 0.0;
    c.stop = stop;
    c.step = step;
    add("eps/chi=" + num(ratio), c,
        [](const RunConfig& cc, std::ostream& os) { unitary_table(cc, grid(cc), os); });
  };
  auto steady = [&](double chi, double delta, const std::string& label) {
    RunConfig c = base;
    c.chi = chi;
    c.delta = delta;
    c.delta1 = c.delta2 = kNaN;
    c.gamma1 = c.gamma2 = kNaN;
    c.gamma = 1.0;
    c.regime = "auto";
    c.delta_theta = 0.0;
    c.start = 0.0;
    c.stop = 3.0;
    c.step = 0.01;
    add(label + " chi=" + num(chi) + " delta=" + num(delta), c,
        [](const RunConfig& cc, std::ostream& os) {
          const Session s(cc);
          steady_variance_table(s, cc, grid(cc), os);
        });
  };

  switch (n) {
    case 1:
      comment = "unitary V(chi t), cos(sigma_theta)=1, eps < chi";
      for (double r : {0.1, 0.4, 0.7}) unitary(r, 10.0, 0.01);
      break;
    case 2:
      comment = "unitary V(chi t), cos(sigma_theta)=1, eps > chi";
      for (double r : {1.1, 2.0, 3.0}) unitary(r, 1.0, 0.001);
      break;
    case 3:
      comment = "minimized V versus eps/eps_th";
      steady(0.1, 10.0, "V");
      steady(0.5, 3.0, "V");
      steady(0.5, 1.0, "V");
      break;
    case 4:
      comment = "V_plus (curve 1) and V_minus (curve 2), delta_theta=0";
      steady(0.5, 3.0, "V_plus");
      steady(0.5, 3.0, "V_minus");
      break;
    case 5:
      comment = "product V_plus V_minus, delta_theta=0";
      steady(0.1, 10.0, "product");
      steady(0.5, 1.0, "product");
      break;
    default:
      throw Failure{kExitDomain, "figure number must be 1..5"};
  }
  return curves;
}

void cmd_figure(const RunConfig& c, std::ostream& os) {
  std::string comment;
  const std::vector<Curve> curves = figure_curves(c, c.figure, comment);
  const std::filesystem::path dir = resolve_dir(c);
  std::filesystem::create_directories(dir);
  for (const Curve& cv : curves) {
    const std::filesystem::path path = dir / cv.file;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Failure{1, "cannot write " + path.string()};
    f << "# nopo " << nopo_version() << "\n# figure " << c.figure << ": " << comment
      << "\n# curve: " << cv.label << "\n# params: gamma=1 gamma3=" << num(c.gamma3)
      << " lambda=" << num(c.lambda) << "\n# seed: none\n"
      << cv.body;
    os << path.string() << "\n";
  }
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty() || c.output == "-") {
    out << text;
    return;
  }
  std::filesystem::path path = c.output;
  if (path.is_relative()) {
    if (const char* env = std::getenv("NOPO_OUTPUT_DIR"); env && *env) path = env / path;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{1, "cannot write " + path.string()};
  f << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Self-phase-locked NOPO: steady states, squeezing variances, positive-P Monte Carlo",
               "nopo"};
  app.set_config("--config", "", "flat 'key = value' file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--gamma", c.gamma, "subharmonic damping (both modes)");
  app.add_option("--gamma1", c.gamma1);
  app.add_option("--gamma2", c.gamma2);
  app.add_option("--gamma3", c.gamma3, "pump-mode damping");
  app.add_option("--delta", c.delta, "detuning (both modes)");
  app.add_option("--delta1", c.delta1);
  app.add_option("--delta2", c.delta2);
  app.add_option("--chi", c.chi, "polarization mixing");
  app.add_option("--lambda", c.lambda, "effective nonlinearity k^2/gamma3");
  app.add_option("--eps", c.eps, "scaled pump kE/gamma3");
  app.add_option("--eps-ratio", c.eps_ratio, "pump relative to threshold");
  app.add_option("--eps-chi", c.eps_chi, "pump relative to chi (unitary regime)");
  app.add_option("--phi-L", c.phi_L);
  app.add_option("--phi-k", c.phi_k);
  app.add_option("--phi-chi", c.phi_chi);
  app.add_option("--branch", c.branch, "default | plus | minus");
  app.add_option("--regime", c.regime, "unitary | below | above | auto");
  app.add_option("--delta-theta", c.delta_theta, "quadrature angle difference");
  app.add_option("--sigma-theta", c.sigma_theta, "quadrature angle sum (unitary regime)");
  app.add_option("--sweep", c.sweep, "eps-ratio | eps | chi-t");
  app.add_option("--start", c.start);
  app.add_option("--stop", c.stop);
  app.add_option("--step", c.step);
  app.add_option("--dt", c.dt);
  app.add_option("--t-max", c.t_max);
  app.add_option("--n-traj", c.n_traj);
  app.add_option("--burn-in", c.burn_in);
  app.add_option("--seed", c.seed);
  app.add_option("--divergence-bound", c.divergence_bound);
  app.add_option("--sample-interval", c.sample_interval);
  app.add_option("--workers", c.workers, "0 uses every hardware thread");
  app.add_option("--max-discard", c.max_discard);
  app.add_option("--moments", c.moments, "comma-separated words such as b1a1,a1^2");
  app.add_flag("--histogram", c.histogram, "phase histograms instead of moments");
  app.add_option("--bins", c.bins);
  app.add_option("-o,--output", c.output, "output file (stdout by default)");
  app.add_option("--out-dir", c.out_dir, "figure directory (default $NOPO_OUTPUT_DIR or .)");

  auto* steady = app.add_subcommand("steady", "steady state, threshold and stability");
  auto* variance = app.add_subcommand("variance", "two-mode squeezing variances");
  auto* mc = app.add_subcommand("mc", "positive-P Monte Carlo moments or phase histograms");
  auto* figure = app.add_subcommand("figure", "write the curves of figure N as CSV");
  figure->add_option("n", c.figure, "figure number 1..5")->required()->check(CLI::Range(1, 5));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    const Session s(c);
    std::ostringstream text;
    if (steady->parsed()) cmd_steady(s, c, text);
    else if (variance->parsed()) cmd_variance(s, c, text);
    else if (mc->parsed()) cmd_mc(s, c, text);
    else if (figure->parsed()) cmd_figure(c, text);
    emit(c, text.str(), out);
    return 0;
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nopo_cli
