#include <cmath>
#include <vector>

#include "doctest.h"
#include "ctmc/models.hpp"
#include "ctmc/simulate.hpp"

using namespace ctmc;

namespace {

SimConfig config(double t_end, double dt, std::uint64_t seed = 1) {
  SimConfig c;
  c.seed = seed;
  c.t_end = t_end;
  c.sample_dt = dt;
  return c;
}

}  // namespace

TEST_CASE("two-state holding times are exponential with mean 1") {
  const JumpModel m = GeneratorProcess(telegraph_generator(1.0, 1.0), StateWeights::index(2));
  const Trajectory t = gillespie_path(m, config(1073741824.0, 1.0), 0, 40000);
  REQUIRE(t.events() == 40000);
  double sum = 0.0;
  for (std::size_t i = 1; i < t.jump_times.size(); ++i) {
    sum += t.jump_times[i] - t.jump_times[i - 1];
    CHECK(t.states[i] != t.states[i - 1]);
  }
  CHECK(sum / 40000.0 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("resampling holds the state in force at each grid time") {
  Trajectory t;
  t.jump_times = {0.0, 1.5};
  t.states = {0, 1};
  t.t_end = 4.0;
  CHECK(resample_uniform(t, 1.0) == std::vector<double>{0, 0, 1, 1});
  t.jump_times = {0.0, 1.0, 1.2, 2.9};
  t.states = {2, 0, 1, 3};
  CHECK(resample_uniform(t, 1.0) == std::vector<double>{2, 0, 1, 3});
}

TEST_CASE("grid average approaches the exact time average") {
  const JumpModel m = GeneratorProcess(mm1_generator(1.0, 2.0, 8), StateWeights::index(8));
  const SimConfig c = config(4096.0, 1.0 / 64.0, 3);
  const Trajectory t = gillespie_path(m, c, 0);
  const auto grid = resample_uniform(t, c.sample_dt, m);
  double mean = 0.0;
  for (double v : grid) mean += v;
  mean /= static_cast<double>(grid.size());
  CHECK(std::abs(mean - time_average(t, m)) < 1e-3);
}

TEST_CASE("streaming sampler is bit-identical to path plus resampling") {
  const JumpModel m = GeneratorProcess(ring_generator(1.0, 1.0, 16), StateWeights::index(16));
  const SimConfig c = config(512.0, 0.25, 77);
  for (std::size_t r : {0, 3}) {
    const SampledPath s = sampled_path(m, c, r);
    const Trajectory t = gillespie_path(m, c, r);
    CHECK(s.series == resample_uniform(t, c.sample_dt, m));
    CHECK(s.events == t.events());
    CHECK(s.time_average == time_average(t, m));
    CHECK(sampled_path(m, c, r).series == s.series);
  }
  CHECK(sampled_path(m, c, 0).series != sampled_path(m, c, 1).series);
}

TEST_CASE("averaging is independent of the thread count") {
  const JumpModel m = GeneratorProcess(star_generator(1.0, 2.0, 5), StateWeights::index(6));
  SimConfig c = config(256.0, 0.125, 9);
  c.n_realizations = 6;
  c.threads = 1;
  const AveragedPeriodogram one = averaged_periodogram(m, c);
  c.threads = 4;
  const AveragedPeriodogram four = averaged_periodogram(m, c);
  CHECK(one.periodogram.power == four.periodogram.power);
  CHECK(one.time_averages == four.time_averages);
  CHECK(one.periodogram.n_realizations == 6);
  for (double e : one.parseval_errors) CHECK(e < 1e-10);
}

TEST_CASE("occupation of a truncated M/M/1 chain matches its stationary law") {
  const Generator g = mm1_generator(1.0, 2.0, 16);
  const JumpModel m = GeneratorProcess(g, StateWeights::index(16));
  const Trajectory t = gillespie_path(m, config(131072.0, 1.0, 21), 0);
  std::vector<double> occ(16, 0.0);
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    const double end = i + 1 < t.jump_times.size() ? t.jump_times[i + 1] : t.t_end;
    occ[static_cast<std::size_t>(t.states[i])] += end - t.jump_times[i];
  }
  const auto pi = stationary_distribution(g);
  double tv = 0.0;
  for (std::size_t q = 0; q < 16; ++q) tv += 0.5 * std::abs(occ[q] / t.t_end - pi[q]);
  CHECK(tv < 0.02);
}

TEST_CASE("unbounded M/M/1 counter") {
  const UnboundedMM1 q(1.0, 1.25);
  CHECK(q.stationary_mean() == doctest::Approx(4.0));
  CHECK(q.jump(0, 0.99) == 1);
  CHECK(q.jump(5, 0.1) == 6);
  CHECK(q.jump(5, 0.9) == 4);
  Rng rng(4, 0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += static_cast<double>(q.sample_stationary(rng));
  CHECK(sum / 1e5 == doctest::Approx(4.0).epsilon(0.03));
  CHECK_FALSE(UnboundedMM1(1.0, 0.5).has_stationary());
}

TEST_CASE("heavy-traffic time average is near lambda/(mu - lambda)") {
  const JumpModel m = UnboundedMM1(1.0, 1.01);
  SimConfig c = config(8388608.0, 128.0, 31);
  c.n_realizations = 8;
  const AveragedPeriodogram avg = averaged_periodogram(m, c);
  CHECK(avg.mean_time_average() == doctest::Approx(100.0).epsilon(0.15));
}

TEST_CASE("fixed initial state without a stationary law") {
  const JumpModel m = UnboundedMM1(1.0, 0.5);
  SimConfig c = config(64.0, 1.0, 2);
  const Trajectory t = gillespie_path(m, c, 0);
  CHECK(t.t_end == doctest::Approx(64.0));
  CHECK(t.jump_times.front() == 0.0);
  c.initial_state = -1;
  CHECK_THROWS_AS(gillespie_path(m, c, 0), Error);
}

TEST_CASE("invalid inputs are rejected") {
  Eigen::MatrixXd absorbing(2, 2);
  absorbing << 1.0, -1.0, 0.0, 0.0;
  CHECK_THROWS_AS(GeneratorProcess(Generator(absorbing), StateWeights::index(2)), Error);
  CHECK_THROWS_AS(GeneratorProcess(telegraph_generator(1, 1), StateWeights::index(3)), Error);
  CHECK_THROWS_AS(config(100.0, 1.0).validate(), Error);
  CHECK_THROWS_AS(config(64.0, 0.0).validate(), Error);
  SimConfig zero = config(64.0, 1.0);
  zero.n_realizations = 0;
  CHECK_THROWS_AS(zero.validate(), Error);
  CHECK_NOTHROW(config(64.0, 1.0).validate());
  CHECK(config(64.0, 0.5).grid_length() == 128);
}

TEST_CASE("default configuration") {
  const JumpModel m = GeneratorProcess(telegraph_generator(1.0, 3.0), StateWeights::index(2));
  const SimConfig c = default_sim_config(m, 4.0, 5, 2);
  CHECK(c.sample_dt == doctest::Approx(1.0 / 12.0));
  CHECK(c.t_end >= 25.0);
  CHECK(is_power_of_two(c.grid_length()));
  CHECK(c.t_end / 2.0 < 25.0);
  CHECK(c.n_realizations == 2);
}
