#include "ctmc/jump_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ctmc {

GeneratorProcess::GeneratorProcess(const Generator& g, const StateWeights& x)
    : pi_(stationary_distribution(g)) {
  const std::size_t n = g.size();
  if (x.size() != n) throw Error("simulation: observable and generator differ in size");
  exit_.resize(n);
  x_.assign(x.values().data(), x.values().data() + n);
  row_begin_.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    row_begin_.push_back(targets_.size());
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double r = g.jump_rate(i, j);
      if (r <= 0.0) continue;
      total += r;
      targets_.push_back(static_cast<State>(j));
      cumulative_.push_back(total);
    }
    if (!(total > 0.0)) throw Error("simulation: absorbing state " + std::to_string(i));
    exit_[i] = total;
    max_exit_ = std::max(max_exit_, total);
  }
  row_begin_.push_back(targets_.size());

  pi_cumulative_.resize(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) pi_cumulative_[i] = (acc += pi_[i]);
}

State GeneratorProcess::jump(State s, double u) const {
  const auto row = static_cast<std::size_t>(s);
  const auto first = cumulative_.begin() + static_cast<std::ptrdiff_t>(row_begin_[row]);
  const auto last = cumulative_.begin() + static_cast<std::ptrdiff_t>(row_begin_[row + 1]);
  auto it = std::upper_bound(first, last, u * exit_[row]);
  if (it == last) --it;
  return targets_[static_cast<std::size_t>(it - cumulative_.begin())];
}

State GeneratorProcess::sample_stationary(Rng& rng) const {
  const double u = rng.uniform() * pi_cumulative_.back();
  auto it = std::upper_bound(pi_cumulative_.begin(), pi_cumulative_.end(), u);
  if (it == pi_cumulative_.end()) --it;
  return static_cast<State>(it - pi_cumulative_.begin());
}

UnboundedMM1::UnboundedMM1(double lambda, double mu) : lambda_(lambda), mu_(mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw Error("mm1: rates must be positive");
}

State UnboundedMM1::sample_stationary(Rng& rng) const {
  if (!has_stationary()) throw Error("mm1: no stationary law for lambda >= mu");
  // P(q >= m) = rho^m
  const double q = std::floor(std::log(rng.uniform_open_closed()) / std::log(lambda_ / mu_));
  if (q > static_cast<double>(std::numeric_limits<State>::max() / 2))
    throw Error("mm1: stationary draw overflows the counter");
  return static_cast<State>(q);
}

double UnboundedMM1::stationary_mean() const {
  if (!has_stationary()) throw Error("mm1: no stationary law for lambda >= mu");
  return lambda_ / (mu_ - lambda_);
}

double max_exit_rate(const JumpModel& m) {
  return std::visit([](const auto& p) { return p.max_exit_rate(); }, m);
}

std::string describe(const JumpModel& m) {
  if (const auto* g = std::get_if<GeneratorProcess>(&m))
    return "finite chain, " + std::to_string(g->size()) + " states";
  return "unbounded M/M/1 counter";
}

}  // namespace ctmc
