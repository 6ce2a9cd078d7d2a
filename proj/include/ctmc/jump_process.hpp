#pragma once

// Jump-process descriptions consumed by the path simulator.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ctmc/generator.hpp"
#include "ctmc/rng.hpp"

namespace ctmc {

using State = std::int64_t;

/// Finite chain given by a generator. Outgoing rates are stored as cumulative
/// sums per row, so each jump is one binary search.
class GeneratorProcess {
 public:
  GeneratorProcess(const Generator& g, const StateWeights& x);

  double exit_rate(State s) const { return exit_[static_cast<std::size_t>(s)]; }
  /// Next state given u uniform on [0, 1).
  State jump(State s, double u) const;
  double value(State s) const { return x_[static_cast<std::size_t>(s)]; }
  bool has_stationary() const { return true; }
  State sample_stationary(Rng& rng) const;
  double max_exit_rate() const { return max_exit_; }
  std::size_t size() const { return exit_.size(); }
  const StationaryDistribution& stationary() const { return pi_; }

 private:
  std::vector<double> exit_;
  std::vector<double> x_;
  std::vector<std::size_t> row_begin_;
  std::vector<State> targets_;
  std::vector<double> cumulative_;
  std::vector<double> pi_cumulative_;
  StationaryDistribution pi_;
  double max_exit_ = 0.0;
};

/// M/M/1 queue length as a plain counter: births at lambda, deaths at mu,
/// deaths switched off at 0. Observable is the queue length.
class UnboundedMM1 {
 public:
  UnboundedMM1(double lambda, double mu);

  double exit_rate(State s) const { return s == 0 ? lambda_ : lambda_ + mu_; }
  State jump(State s, double u) const {
    if (s == 0) return 1;
    return u * (lambda_ + mu_) < lambda_ ? s + 1 : s - 1;
  }
  double value(State s) const { return static_cast<double>(s); }
  /// Geometric law (1 - rho) rho^q, only for rho = lambda/mu < 1.
  bool has_stationary() const { return lambda_ < mu_; }
  State sample_stationary(Rng& rng) const;
  double max_exit_rate() const { return lambda_ + mu_; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  double stationary_mean() const;

 private:
  double lambda_;
  double mu_;
};

using JumpModel = std::variant<GeneratorProcess, UnboundedMM1>;

double max_exit_rate(const JumpModel& m);
std::string describe(const JumpModel& m);

}  // namespace ctmc
