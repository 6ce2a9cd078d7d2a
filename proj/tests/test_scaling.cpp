#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ctmc/generator.hpp"
#include "ctmc/scaling.hpp"
#include "ctmc/spectral.hpp"

using namespace ctmc;

TEST_CASE("power-law fit recovers exact exponents") {
  std::vector<double> v;
  for (int k = 1; k <= 100; ++k) v.push_back(3.0 * std::pow(k, 1.7));
  const PowerLawFit fit = fit_power_law(v, {5, 50});
  CHECK(fit.exponent == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.residual < 1e-12);
  CHECK(default_fit_window(1000).first == 5);
  CHECK(default_fit_window(1000).last == 100);
  CHECK_THROWS_AS(fit_power_law(v, {5, 101}), Error);
  CHECK_THROWS_AS(fit_power_law(v, {5, 8}), Error);
  v[9] = -1.0;
  CHECK_THROWS_AS(fit_power_law(v, {5, 20}), Error);
}

TEST_CASE("noise exponent prediction") {
  CHECK(predict_zeta(2.0, -1.0).zeta == doctest::Approx(-1.5));
  CHECK(predict_zeta(2.0, -0.5).zeta == doctest::Approx(-1.0));
  CHECK(predict_zeta(2.0, -1.0).admissible);
  CHECK_FALSE(predict_zeta(1.0, 0.5).admissible);
  CHECK_FALSE(predict_zeta(-1.0, 0.0).admissible);
}

TEST_CASE("correction coefficient K") {
  CHECK(correction_coefficient(2.0, -1.0) == doctest::Approx(0.5));
  CHECK(correction_coefficient(2.0, -0.5) == doctest::Approx(1.0 / 12.0));
  CHECK(correction_coefficient(3.0, -1.0) == doctest::Approx(1.0 / 12.0));
  CHECK(correction_coefficient(4.0, -0.5) == doctest::Approx(-1.0 / 120.0));
  CHECK(correction_coefficient(3.0, -0.5) == 0.0);
  CHECK(correction_coefficient(2.5, -0.3) == 0.0);
  // Odd s: K = -zeta(-s).
  CHECK(correction_coefficient(6.0, -0.5) == doctest::Approx(1.0 / 252.0));
}

TEST_CASE("asymptotic form approaches the direct sum") {
  // The residual behind the K w^-2 term shrinks faster than w^-2.
  for (auto [a, b] : std::vector<std::pair<double, double>>{{2.0, -1.0}, {2.0, -0.5}, {4.0, -0.5}, {3.0, -1.0}}) {
    const double w = 1e4;
    const CertifiedSum s = lorentzian_sum_auto(a, b, w, 1e-13);
    CHECK(s.half_width <= 1e-13 * s.value);
    const double K = correction_coefficient(a, b);
    CHECK(std::abs(s.value - asymptotic_psd(a, b, w)) * w * w < 1e-2 * std::abs(K));
    CHECK(std::abs(s.value - cauchy_moment_integral(a, b, w)) * w * w > 0.5 * std::abs(K));
  }
  CHECK(cauchy_moment_integral(2.0, -1.0, 1.0) == doctest::Approx(std::numbers::pi / 4.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(cauchy_moment_integral(1.0, 0.5, 1.0), Error);
  CHECK_THROWS_AS(lorentzian_sum_direct(2.0, -1.0, 1e3, 10), Error);
}

TEST_CASE("slope estimator recovers the analytic exponent") {
  for (auto [a, b] : std::vector<std::pair<double, double>>{{2.0, -1.0}, {2.0, -0.5}, {3.0, -1.0}}) {
    std::vector<SpectralLine> lines;
    for (int k = 1; k <= 3000; ++k)
      lines.push_back({std::pow(k, a), std::pow(k, 2.0 * b), 1});
    const LorentzianSpectrum spec(lines);
    std::vector<SpectrumSample> samples;
    for (int i = 0; i <= 400; ++i) {
      const double w = std::pow(10.0, 1.0 + 2.0 * i / 400.0);
      samples.push_back({w, analytic_psd(spec, w)});
    }
    const SlopeEstimate est = estimate_psd_slope(samples, 100.0, 1000.0);
    CHECK(std::abs(est.slope - predict_zeta(a, b).zeta) < 0.05);
    CHECK(est.bins >= 3);
  }
}

TEST_CASE("slope estimator preconditions") {
  std::vector<SpectrumSample> samples;
  for (int i = 1; i <= 100; ++i) samples.push_back({static_cast<double>(i), 1.0 / i});
  CHECK(estimate_psd_slope(samples, 1.0, 100.0).slope == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK_THROWS_AS(estimate_psd_slope(samples, 10.0, 50.0), Error);
  CHECK_THROWS_AS(estimate_psd_slope(samples, 1.0, 100.0, 1), Error);
  CHECK_THROWS_AS(estimate_psd_slope(std::vector<SpectrumSample>(samples.begin(), samples.begin() + 15), 1.0, 15.0),
                  Error);

  const auto bins = log_bin_spectrum(samples, 1.0, 100.0, 2);
  std::size_t total = 0;
  for (const auto& bin : bins) total += bin.count;
  CHECK(total == 100);
}
