#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ctmc/models.hpp"
#include "ctmc/periodogram.hpp"
#include "ctmc/simulate.hpp"

using namespace ctmc;

TEST_CASE("frequency grid and power-of-two guard") {
  const std::vector<double> s(16, 0.0);
  const Periodogram p = periodogram(s, 0.5);
  REQUIRE(p.size() == 8);
  CHECK(p.freqs.front() == doctest::Approx(1.0 / 8.0));
  CHECK(p.freqs.back() == doctest::Approx(1.0));
  CHECK(p.df() == doctest::Approx(0.125));
  CHECK(is_power_of_two(1024));
  CHECK_FALSE(is_power_of_two(1000));
  CHECK_THROWS_AS(periodogram(std::vector<double>(12, 1.0), 1.0), Error);
  CHECK_THROWS_AS(periodogram(std::vector<double>(2, 1.0), 1.0), Error);
  CHECK_THROWS_AS(periodogram(s, 0.0), Error);
}

TEST_CASE("constant series has zero power") {
  const Periodogram p = periodogram(std::vector<double>(64, 3.25), 1.0);
  for (double v : p.power) CHECK(std::abs(v) < 1e-20);
}

TEST_CASE("a sinusoid puts its power in one bin and Parseval holds") {
  const std::size_t n = 256;
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = 2.0 * std::cos(2.0 * std::numbers::pi * 5.0 * static_cast<double>(i) / n);
  const Periodogram p = periodogram(s, 0.1);
  const double total = p.integrated_power();
  CHECK(total == doctest::Approx(series_variance(s)).epsilon(1e-12));
  CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.power[4] * p.df() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.freqs[4] == doctest::Approx(5.0 / (n * 0.1)));

  std::vector<double> noise(n);
  for (std::size_t i = 0; i < n; ++i) noise[i] = std::sin(0.37 * i * i) + 0.1 * i;
  CHECK(periodogram(noise, 2.0).integrated_power() == doctest::Approx(series_variance(noise)).epsilon(1e-12));
  CHECK(periodogram(noise, 2.0, Window::hann).size() == n / 2);
}

TEST_CASE("Lorentzian fit recovers an exact Lorentzian") {
  Periodogram p;
  p.sample_dt = 0.01;
  for (int j = 1; j <= 5000; ++j) {
    const double f = 0.01 * j;
    p.freqs.push_back(f);
    p.power.push_back(3.0 / (1.0 + std::pow(2.0 * std::numbers::pi * f / 4.0, 2)));
  }
  const LorentzianFit fit = fit_lorentzian(p, 0.01, 10.0);
  // Bin averaging of the curved profile biases the estimate slightly.
  CHECK(fit.knee_omega == doctest::Approx(4.0).epsilon(1e-2));
  CHECK(fit.amplitude == doctest::Approx(3.0).epsilon(1e-2));
  CHECK(fit.rms_log10_residual < 1e-2);
}

TEST_CASE("analytic one-sided PSD integrates to the variance") {
  const auto s = analyze(telegraph_generator(1.0, 3.0), StateWeights::index(2)).spectrum;
  // 4 S_raw(2 pi f) = 4 g w / (w^2 + 4 pi^2 f^2); integral over f is g.
  double sum = 0.0;
  const double h = 1e-3;
  for (int i = 0; i < 2000000; ++i) sum += one_sided_psd(s, (i + 0.5) * h) * h;
  CHECK(sum == doctest::Approx(s.total_weight()).epsilon(1e-3));
}

TEST_CASE("empirical PSD matches the analytic one for a two-state chain") {
  SimConfig cfg;
  cfg.seed = 11;
  cfg.sample_dt = 1.0 / 16.0;
  cfg.t_end = cfg.sample_dt * 4096.0;
  cfg.n_realizations = 100;
  const ComparisonReport r =
      compare_analytic_empirical(telegraph_generator(1.0, 1.0), StateWeights::index(2), cfg, 0.1, 2.0, 5);
  REQUIRE(r.bins.size() >= 5);
  for (const auto& b : r.bins) CHECK(std::abs(b.empirical / b.analytic - 1.0) < 0.1);
}

TEST_CASE("empirical PSD of a symmetric ring") {
  SimConfig cfg;
  cfg.seed = 5;
  cfg.sample_dt = 0.125;
  cfg.t_end = 0.125 * 16384.0;
  cfg.n_realizations = 16;
  const ComparisonReport r =
      compare_analytic_empirical(ring_generator(1.0, 1.0, 64), StateWeights::index(64), cfg, 0.01, 1.0);
  CHECK(r.n_realizations == 16);
  CHECK(r.max_abs_log10_ratio < 0.15);
}

TEST_CASE("star knee from a simulated periodogram") {
  const std::size_t n = 100;
  SimConfig cfg;
  cfg.seed = 8;
  cfg.sample_dt = 0.05;
  cfg.t_end = 0.05 * 16384.0;
  cfg.n_realizations = 20;
  const AveragedPeriodogram avg =
      averaged_periodogram(GeneratorProcess(star_generator(1.0, 1.0, n - 1), StateWeights::index(n)), cfg);
  const LorentzianFit fit = fit_lorentzian(avg.periodogram, 0.01, 1.0);
  CHECK(fit.knee_omega == doctest::Approx(1.0).epsilon(0.2));
}
