#include "nopo/positive_p.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "nopo/error.hpp"

namespace nopo {

namespace {

constexpr double kPi = std::numbers::pi;

bool escaped(const PhaseSpaceState& z, double bound) {
  for (const cplx& c : z.as_array()) {
    if (!(std::abs(c) <= bound)) return true;
  }
  return false;
}

unsigned worker_count(const SimConfig& c) {
  unsigned w = c.workers ? c.workers : std::thread::hardware_concurrency();
  w = std::max(1u, w);
  return static_cast<unsigned>(std::min<std::size_t>(w, c.n_traj));
}

// Calls job(worker, index) for every index in [0, n). Work is claimed
// dynamically; callers must make results depend on the index only.
template <class Job>
void for_each_trajectory(std::size_t n, unsigned workers, Job job) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&](unsigned w) {
    try {
      for (std::size_t i = next++; i < n; i = next++) job(w, i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::size_t steps_for(double span, double dt) {
  return static_cast<std::size_t>(std::llround(span / dt));
}

}  // namespace

void validate(const SimConfig& c) {
  if (!(c.dt > 0.0)) throw DomainError("dt must be > 0");
  if (c.n_traj < 2) throw DomainError("n_traj must be >= 2");
  if (!(c.divergence_bound > 0.0)) throw DomainError("divergence_bound must be > 0");
  if (!(c.t_max > 0.0) || !(c.burn_in >= 0.0)) throw DomainError("need t_max > 0 and burn_in >= 0");
  if (!(c.t_max > c.burn_in)) throw DomainError("t_max must exceed burn_in");
  if (!(c.sample_interval > 0.0)) throw DomainError("sample_interval must be > 0");
  if (!(c.max_discard_fraction >= 0.0 && c.max_discard_fraction < 1.0))
    throw DomainError("max_discard_fraction must lie in [0, 1)");
  if (c.scheme != "euler-maruyama") throw DomainError("unknown integration scheme: " + c.scheme);
}

Rng trajectory_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

std::array<cplx, 4> noise_increment(const PhaseSpaceState& z, const Model& m, double eps,
                                    double dt, Rng& rng) {
  std::normal_distribution<double> normal;
  const double s = std::sqrt(dt);
  const double x1 = normal(rng) * s;
  const double x2 = normal(rng) * s;
  const double x3 = normal(rng) * s;
  const double x4 = normal(rng) * s;
  const NoiseCoefficients c = noise_coefficients(z, m, eps);
  const cplx ka = std::sqrt(0.5 * c.c_alpha);
  const cplx kb = std::sqrt(0.5 * c.c_beta);
  return {ka * cplx(x1, x2), ka * cplx(x1, -x2), kb * cplx(x3, x4), kb * cplx(x3, -x4)};
}

TrajectorySummary integrate_trajectory(
    const Model& m, double eps, const SimConfig& config, std::uint64_t index,
    const std::function<void(const TrajectoryState&)>& on_sample) {
  Rng rng = trajectory_rng(config.seed, index);
  const std::size_t n_steps = steps_for(config.t_max, config.dt);
  const std::size_t stride = std::max<std::size_t>(1, steps_for(config.sample_interval, config.dt));
  const std::size_t first = steps_for(config.burn_in, config.dt);

  TrajectorySummary out;
  TrajectoryState& s = out.final_state;
  s.z = config.initial;
  for (std::size_t step = 1; step <= n_steps; ++step) {
    const Drift a = drift_field(s.z, m, eps);
    std::array<cplx, 4> z = s.z.as_array();
    if (config.noise) {
      const std::array<cplx, 4> w = noise_increment(s.z, m, eps, config.dt, rng);
      for (int i = 0; i < 4; ++i) z[i] += a[i] * config.dt + w[i];
    } else {
      for (int i = 0; i < 4; ++i) z[i] += a[i] * config.dt;
    }
    s.z = PhaseSpaceState::from_array(z);
    s.t = static_cast<double>(step) * config.dt;
    if (escaped(s.z, config.divergence_bound)) {
      s.diverged = true;
      return out;
    }
    if (step > first && (step - first) % stride == 0) {
      ++out.n_samples;
      if (on_sample) on_sample(s);
    }
  }
  return out;
}

cplx MomentSpec::evaluate(const PhaseSpaceState& z) const {
  const std::array<cplx, 4> v = z.as_array();
  cplx r{1.0, 0.0};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < powers[i]; ++k) r *= v[i];
  return r;
}

MomentSpec parse_moment(const std::string& word) {
  MomentSpec spec;
  spec.label = word;
  std::size_t i = 0;
  auto fail = [&] { throw DomainError("malformed moment word: '" + word + "'"); };
  while (i < word.size()) {
    if (i + 1 >= word.size()) fail();
    const char kind = word[i];
    const char mode = word[i + 1];
    if ((kind != 'a' && kind != 'b') || (mode != '1' && mode != '2')) fail();
    const int slot = (kind == 'a' ? 0 : 2) + (mode - '1');
    i += 2;
    int power = 1;
    if (i < word.size() && word[i] == '^') {
      ++i;
      if (i >= word.size() || !std::isdigit(static_cast<unsigned char>(word[i]))) fail();
      power = 0;
      while (i < word.size() && std::isdigit(static_cast<unsigned char>(word[i])))
        power = power * 10 + (word[i++] - '0');
    }
    spec.powers[slot] += power;
  }
  if (spec.order() == 0) fail();
  return spec;
}

std::vector<EnsembleEstimate> ensemble_moments(const Model& m, double eps,
                                               const SimConfig& config,
                                               const std::vector<MomentSpec>& specs) {
  validate(config);
  const std::size_t nm = specs.size();
  const std::size_t nt = config.n_traj;
  std::vector<cplx> averages(nt * nm);
  std::vector<char> diverged(nt, 0);

  for_each_trajectory(nt, worker_count(config), [&](unsigned, std::size_t i) {
    std::vector<cplx> acc(nm);
    const TrajectorySummary s = integrate_trajectory(
        m, eps, config, i, [&](const TrajectoryState& st) {
          for (std::size_t k = 0; k < nm; ++k) acc[k] += specs[k].evaluate(st.z);
        });
    diverged[i] = s.final_state.diverged;
    if (s.n_samples == 0) diverged[i] = 1;
    for (std::size_t k = 0; k < nm; ++k)
      averages[i * nm + k] = acc[k] / static_cast<double>(std::max<std::size_t>(1, s.n_samples));
  });

  const auto lost = static_cast<std::size_t>(std::count(diverged.begin(), diverged.end(), 1));
  const std::size_t kept = nt - lost;
  const double discard = static_cast<double>(lost) / static_cast<double>(nt);
  if (kept < 2) {
    std::ostringstream os;
    os << "all but " << kept << " of " << nt << " trajectories diverged";
    throw EstimationError(os.str());
  }
  if (discard > config.max_discard_fraction) {
    std::ostringstream os;
    os << lost << " of " << nt << " trajectories diverged (fraction " << discard
       << " exceeds " << config.max_discard_fraction << ")";
    throw EstimationError(os.str());
  }

  std::vector<EnsembleEstimate> out(nm);
  for (std::size_t k = 0; k < nm; ++k) {
    cplx sum{};
    for (std::size_t i = 0; i < nt; ++i)
      if (!diverged[i]) sum += averages[i * nm + k];
    const cplx mean = sum / static_cast<double>(kept);
    double vr = 0.0;
    double vi = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      if (diverged[i]) continue;
      const cplx d = averages[i * nm + k] - mean;
      vr += d.real() * d.real();
      vi += d.imag() * d.imag();
    }
    const double denom = static_cast<double>(kept - 1) * static_cast<double>(kept);
    EnsembleEstimate& e = out[k];
    e.label = specs[k].label;
    e.mean = mean;
    e.se_real = std::sqrt(vr / denom);
    e.se_imag = std::sqrt(vi / denom);
    e.std_error = std::hypot(e.se_real, e.se_imag);
    e.n_effective = kept;
    e.discard_fraction = discard;
  }
  return out;
}

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

double Histogram::bin_center(std::size_t i) const {
  return lo + (static_cast<double>(i) + 0.5) * (hi - lo) / static_cast<double>(counts.size());
}

void Histogram::add(double x) {
  const auto nb = static_cast<double>(counts.size());
  const double f = std::floor((x - lo) / (hi - lo) * nb);
  const auto i = static_cast<std::size_t>(std::clamp(f, 0.0, nb - 1.0));
  ++counts[i];
}

double Histogram::mass_within(double center, double half_width, double period) const {
  const std::uint64_t t = total();
  if (t == 0) return 0.0;
  std::uint64_t in = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (std::abs(std::remainder(bin_center(i) - center, period)) <= half_width) in += counts[i];
  }
  return static_cast<double>(in) / static_cast<double>(t);
}

PhaseHistograms phase_histogram(const Model& m, double eps, const SimConfig& config,
                                std::size_t bins) {
  validate(config);
  if (bins == 0) throw DomainError("histogram needs at least one bin");
  auto blank = [bins](double lo, double hi) {
    return Histogram{lo, hi, std::vector<std::uint64_t>(bins, 0)};
  };
  const unsigned workers = worker_count(config);
  std::vector<PhaseHistograms> partial(workers);
  for (auto& p : partial) {
    p.diff = blank(-kPi / 2, kPi / 2);
    p.sum = blank(-kPi / 2, kPi / 2);
    p.abs1 = blank(-kPi, kPi);
  }

  for_each_trajectory(config.n_traj, workers, [&](unsigned w, std::size_t i) {
    PhaseHistograms local;
    local.diff = blank(-kPi / 2, kPi / 2);
    local.sum = blank(-kPi / 2, kPi / 2);
    local.abs1 = blank(-kPi, kPi);
    const TrajectorySummary s =
        integrate_trajectory(m, eps, config, i, [&](const TrajectoryState& st) {
          const PhaseSpaceState& z = st.z;
          local.diff.add(0.5 * std::arg(z.alpha2 * z.beta1 / (z.alpha1 * z.beta2)));
          local.sum.add(0.5 * std::arg(z.alpha1 * z.alpha2 / (z.beta1 * z.beta2)));
          local.abs1.add(std::arg(z.alpha1));
        });
    PhaseHistograms& p = partial[w];
    if (s.final_state.diverged) {
      ++p.n_diverged;
      return;
    }
    p.n_samples += s.n_samples;
    for (std::size_t b = 0; b < bins; ++b) {
      p.diff.counts[b] += local.diff.counts[b];
      p.sum.counts[b] += local.sum.counts[b];
      p.abs1.counts[b] += local.abs1.counts[b];
    }
  });

  PhaseHistograms out = partial[0];
  for (std::size_t w = 1; w < partial.size(); ++w) {
    out.n_samples += partial[w].n_samples;
    out.n_diverged += partial[w].n_diverged;
    for (std::size_t b = 0; b < bins; ++b) {
      out.diff.counts[b] += partial[w].diff.counts[b];
      out.sum.counts[b] += partial[w].sum.counts[b];
      out.abs1.counts[b] += partial[w].abs1.counts[b];
    }
  }
  if (eps < m.eps_th()) out.note = "phases undefined at zero amplitude (below threshold)";
  return out;
}

}  // namespace nopo
