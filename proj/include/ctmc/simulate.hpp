#pragma once

// Gillespie sample paths, uniform resampling and averaged periodograms.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ctmc/jump_process.hpp"
#include "ctmc/periodogram.hpp"

namespace ctmc {

/// Piecewise-constant path: states[i] holds on [jump_times[i], jump_times[i+1]),
/// the last one until t_end. jump_times[0] = 0 carries the initial state.
struct Trajectory {
  std::vector<double> jump_times;
  std::vector<State> states;
  double t_end = 0.0;

  std::size_t events() const { return states.empty() ? 0 : states.size() - 1; }
};

struct SimConfig {
  std::uint64_t seed = 0;
  double t_end = 0.0;
  double sample_dt = 0.0;
  std::size_t n_realizations = 1;
  /// Unset: draw from the stationary law. Set, or when the model has no
  /// stationary law: start here and discard a burn-in of burn_in_fraction * t_end.
  std::optional<State> initial_state;
  double burn_in_fraction = 0.1;
  /// Worker threads for averaging; 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// N = round(t_end / sample_dt).
  std::size_t grid_length() const;
  /// Throws unless N is a power of two and the other fields are in range.
  void validate() const;
};

/// sample_dt = 1/(4 max exit rate); t_end the smallest power-of-two multiple
/// of sample_dt that is at least max(100 / omega_min, min_t_end).
SimConfig default_sim_config(const JumpModel& model, std::optional<double> omega_min,
                             std::uint64_t seed, std::size_t realizations, double min_t_end = 0.0);

/// Event list of one realization over [0, t_end]. With max_events the path
/// stops after that many jumps and t_end becomes the time of the next one.
Trajectory gillespie_path(const JumpModel& model, const SimConfig& cfg, std::size_t realization,
                          std::size_t max_events = std::numeric_limits<std::size_t>::max());

/// States held at t_j = j dt for j = 0..round(t_end/dt) - 1.
std::vector<double> resample_uniform(const Trajectory& traj, double sample_dt);
/// Same grid, mapped through the model's observable.
std::vector<double> resample_uniform(const Trajectory& traj, double sample_dt,
                                     const JumpModel& model);

/// Exact occupation-time average of the observable over [0, t_end].
double time_average(const Trajectory& traj, const JumpModel& model);

/// One realization sampled on the grid while it is generated, without storing
/// the events. Bit-identical to resample_uniform(gillespie_path(...)).
struct SampledPath {
  std::vector<double> series;
  double time_average = 0.0;  ///< exact occupation-time average
  std::size_t events = 0;
};

SampledPath sampled_path(const JumpModel& model, const SimConfig& cfg, std::size_t realization);

struct AveragedPeriodogram {
  Periodogram periodogram;
  std::vector<double> time_averages;     ///< per realization
  std::vector<double> series_variances;  ///< per realization
  std::vector<double> parseval_errors;   ///< per realization, relative
  std::size_t events = 0;

  double mean_time_average() const;
};

AveragedPeriodogram averaged_periodogram(const JumpModel& model, const SimConfig& cfg,
                                         Window window = Window::rectangular);

/// Simulates the finite chain and compares with its analytic PSD.
ComparisonReport compare_analytic_empirical(const Generator& g, const StateWeights& x,
                                            const SimConfig& cfg, double f_lo, double f_hi,
                                            std::size_t bins_per_decade = 10);

}  // namespace ctmc
