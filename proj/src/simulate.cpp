#include "ctmc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace ctmc {

std::size_t SimConfig::grid_length() const {
  if (!(t_end > 0.0) || !(sample_dt > 0.0)) return 0;
  const double ratio = std::round(t_end / sample_dt);
  if (!(ratio >= 1.0) || ratio > 9.0e15) return 0;
  return static_cast<std::size_t>(ratio);
}

void SimConfig::validate() const {
  if (!(t_end > 0.0)) throw Error("simulation: t_end must be positive");
  if (!(sample_dt > 0.0)) throw Error("simulation: sample_dt must be positive");
  if (n_realizations < 1) throw Error("simulation: need at least one realization");
  if (!(burn_in_fraction >= 0.0)) throw Error("simulation: burn-in fraction must be non-negative");
  const std::size_t n = grid_length();
  if (n < 4 || !is_power_of_two(n))
    throw Error("simulation: t_end / sample_dt must round to a power of two >= 4 (got " +
                std::to_string(t_end / sample_dt) + ")");
}

SimConfig default_sim_config(const JumpModel& model, std::optional<double> omega_min,
                             std::uint64_t seed, std::size_t realizations, double min_t_end) {
  SimConfig cfg;
  cfg.seed = seed;
  cfg.n_realizations = realizations;
  cfg.sample_dt = 1.0 / (4.0 * max_exit_rate(model));
  double horizon = min_t_end;
  if (omega_min) horizon = std::max(horizon, 100.0 / *omega_min);
  std::size_t n = 4;
  while (static_cast<double>(n) * cfg.sample_dt < horizon) n *= 2;
  cfg.t_end = static_cast<double>(n) * cfg.sample_dt;
  return cfg;
}

namespace {

struct NullSink {
  void segment(double, double, State) {}
  bool full() const { return false; }
};

struct TrajectorySink {
  Trajectory* traj;
  std::size_t max_segments;
  void segment(double from, double to, State s) {
    traj->jump_times.push_back(from);
    traj->states.push_back(s);
    if (full()) traj->t_end = to;
  }
  bool full() const { return traj->states.size() >= max_segments; }
};

template <class P>
struct GridSink {
  const P* process;
  double dt;
  std::vector<double>* series;
  std::size_t next = 0;
  double occupation = 0.0;
  std::size_t segments = 0;

  void segment(double from, double to, State s) {
    const double v = process->value(s);
    occupation += v * (to - from);
    ++segments;
    while (next < series->size() && static_cast<double>(next) * dt < to) (*series)[next++] = v;
  }
  bool full() const { return false; }
};

// Runs the chain for `duration` from state s, reporting each holding segment
// clipped to [0, duration]. The residual holding time at the end is discarded,
// which is exact by memorylessness.
template <class P, class Sink>
State evolve(const P& p, Rng& rng, State s, double duration, Sink& sink) {
  double t = 0.0;
  for (;;) {
    const double hold = rng.exponential(p.exit_rate(s));
    if (t + hold >= duration) {
      sink.segment(t, duration, s);
      return s;
    }
    sink.segment(t, t + hold, s);
    if (sink.full()) return s;
    t += hold;
    s = p.jump(s, rng.uniform());
  }
}

double horizon(const SimConfig& cfg) {
  return static_cast<double>(cfg.grid_length()) * cfg.sample_dt;
}

template <class P>
State initial_state(const P& p, const SimConfig& cfg, Rng& rng) {
  if (!cfg.initial_state && p.has_stationary()) return p.sample_stationary(rng);
  const State s0 = cfg.initial_state.value_or(0);
  if constexpr (std::is_same_v<P, GeneratorProcess>) {
    if (s0 < 0 || static_cast<std::size_t>(s0) >= p.size())
      throw Error("simulation: initial state out of range");
  } else {
    if (s0 < 0) throw Error("simulation: initial state must be non-negative");
  }
  NullSink discard;
  return evolve(p, rng, s0, cfg.burn_in_fraction * horizon(cfg), discard);
}

}  // namespace

Trajectory gillespie_path(const JumpModel& model, const SimConfig& cfg, std::size_t realization,
                          std::size_t max_events) {
  cfg.validate();
  return std::visit(
      [&](const auto& p) {
        Rng rng(cfg.seed, realization);
        Trajectory traj;
        traj.t_end = horizon(cfg);
        const std::size_t segments =
            max_events == std::numeric_limits<std::size_t>::max() ? max_events : max_events + 1;
        TrajectorySink sink{&traj, segments};
        evolve(p, rng, initial_state(p, cfg, rng), traj.t_end, sink);
        return traj;
      },
      model);
}

SampledPath sampled_path(const JumpModel& model, const SimConfig& cfg, std::size_t realization) {
  cfg.validate();
  return std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        Rng rng(cfg.seed, realization);
        SampledPath out;
        out.series.resize(cfg.grid_length());
        GridSink<P> sink{&p, cfg.sample_dt, &out.series};
        const double t_end = horizon(cfg);
        evolve(p, rng, initial_state(p, cfg, rng), t_end, sink);
        out.time_average = sink.occupation / t_end;
        out.events = sink.segments - 1;
        return out;
      },
      model);
}

namespace {

template <class Value>
std::vector<double> resample_with(const Trajectory& traj, double sample_dt, Value value) {
  if (!(sample_dt > 0.0)) throw Error("resample: sample_dt must be positive");
  if (traj.states.empty() || traj.jump_times.size() != traj.states.size())
    throw Error("resample: malformed trajectory");
  const double n_real = std::round(traj.t_end / sample_dt);
  const auto n = static_cast<std::size_t>(std::max(0.0, n_real));
  std::vector<double> out(n);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) * sample_dt;
    while (seg + 1 < traj.jump_times.size() && traj.jump_times[seg + 1] <= t) ++seg;
    out[j] = value(traj.states[seg]);
  }
  return out;
}

}  // namespace

std::vector<double> resample_uniform(const Trajectory& traj, double sample_dt) {
  return resample_with(traj, sample_dt, [](State s) { return static_cast<double>(s); });
}

std::vector<double> resample_uniform(const Trajectory& traj, double sample_dt,
                                     const JumpModel& model) {
  return std::visit(
      [&](const auto& p) { return resample_with(traj, sample_dt, [&](State s) { return p.value(s); }); },
      model);
}

double time_average(const Trajectory& traj, const JumpModel& model) {
  if (traj.states.empty() || !(traj.t_end > 0.0)) throw Error("time average: empty trajectory");
  return std::visit(
      [&](const auto& p) {
        double acc = 0.0;
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
          const double to = i + 1 < traj.states.size() ? traj.jump_times[i + 1] : traj.t_end;
          acc += p.value(traj.states[i]) * (to - traj.jump_times[i]);
        }
        return acc / traj.t_end;
      },
      model);
}

double AveragedPeriodogram::mean_time_average() const {
  if (time_averages.empty()) return 0.0;
  long double acc = 0.0L;
  for (double v : time_averages) acc += v;
  return static_cast<double>(acc / static_cast<long double>(time_averages.size()));
}

namespace {

struct RealizationResult {
  Periodogram periodogram;
  double time_average = 0.0;
  double variance = 0.0;
  std::size_t events = 0;
};

RealizationResult run_realization(const JumpModel& model, const SimConfig& cfg, std::size_t index,
                                  Window window) {
  SampledPath path = sampled_path(model, cfg, index);
  RealizationResult r;
  r.periodogram = periodogram(path.series, cfg.sample_dt, window);
  r.time_average = path.time_average;
  r.variance = series_variance(path.series);
  r.events = path.events;
  return r;
}

}  // namespace

AveragedPeriodogram averaged_periodogram(const JumpModel& model, const SimConfig& cfg,
                                         Window window) {
  cfg.validate();
  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.n_realizations));

  AveragedPeriodogram avg;
  std::vector<double> sum;
  for (std::size_t first = 0; first < cfg.n_realizations; first += workers) {
    const std::size_t count = std::min<std::size_t>(workers, cfg.n_realizations - first);
    std::vector<RealizationResult> batch(count);
    if (count == 1) {
      batch[0] = run_realization(model, cfg, first, window);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(count);
      for (std::size_t i = 0; i < count; ++i)
        pool.emplace_back([&, i] {
          try {
            batch[i] = run_realization(model, cfg, first + i, window);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        });
      for (auto& t : pool) t.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    // Fixed accumulation order keeps the mean bit-reproducible.
    for (auto& r : batch) {
      if (sum.empty()) {
        sum.assign(r.periodogram.power.size(), 0.0);
        avg.periodogram.freqs = r.periodogram.freqs;
        avg.periodogram.sample_dt = cfg.sample_dt;
      }
      for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += r.periodogram.power[j];
      avg.time_averages.push_back(r.time_average);
      avg.series_variances.push_back(r.variance);
      const double integrated = r.periodogram.integrated_power();
      avg.parseval_errors.push_back(
          r.variance > 0.0 ? std::abs(integrated - r.variance) / r.variance : std::abs(integrated));
      avg.events += r.events;
    }
  }
  const double inv = 1.0 / static_cast<double>(cfg.n_realizations);
  avg.periodogram.power.resize(sum.size());
  for (std::size_t j = 0; j < sum.size(); ++j) avg.periodogram.power[j] = sum[j] * inv;
  avg.periodogram.n_realizations = cfg.n_realizations;
  return avg;
}

ComparisonReport compare_analytic_empirical(const Generator& g, const StateWeights& x,
                                            const SimConfig& cfg, double f_lo, double f_hi,
                                            std::size_t bins_per_decade) {
  const SpectralAnalysis analysis = analyze(g, x);
  const JumpModel model = GeneratorProcess(g, x);
  const AveragedPeriodogram avg = averaged_periodogram(model, cfg);
  return compare_spectra(analysis.spectrum, avg.periodogram, f_lo, f_hi, bins_per_decade);
}

}  // namespace ctmc
