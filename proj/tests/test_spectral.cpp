#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ctmc/models.hpp"
#include "ctmc/spectral.hpp"

using namespace ctmc;

TEST_CASE("telegraph process has one Lorentzian with the Bernoulli variance") {
  const double a = 0.3, b = 1.7;
  const SpectralAnalysis s = analyze(telegraph_generator(a, b), StateWeights::index(2));
  REQUIRE(s.spectrum.lines().size() == 1);
  const SpectralLine& line = s.spectrum.lines()[0];
  CHECK(line.omega == doctest::Approx(a + b).epsilon(1e-13));
  CHECK(line.weight == doctest::Approx(a * b / ((a + b) * (a + b))).epsilon(1e-13));
  const double w = 0.8;
  CHECK(analytic_psd(s.spectrum, w) == doctest::Approx(line.weight * 2.0 / (4.0 + w * w)).epsilon(1e-13));
  CHECK(autocorrelation(s.spectrum, 0.5) == doctest::Approx(line.weight * std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("total weight is the stationary variance") {
  const std::vector<Generator> chains{mm1_generator(1.0, 1.5, 40), ring_generator(1.0, 1.0, 17),
                                      star_generator(2.0, 0.5, 12)};
  for (const auto& g : chains) {
    const StateWeights x = StateWeights::index(g.size());
    const SpectralAnalysis s = analyze(g, x);
    CHECK(s.spectrum.total_weight() == doctest::Approx(stationary_variance(x, s.pi)).epsilon(1e-11));
    CHECK(autocorrelation(s.spectrum, 0.0) == doctest::Approx(s.spectrum.total_weight()).epsilon(1e-14));
    CHECK(s.spectrum.with_mode(Normalization::energy).energy() ==
          doctest::Approx(s.spectrum.total_weight()).epsilon(1e-12));
    CHECK(s.spectrum.energy() == doctest::Approx(std::numbers::pi / 2.0 * s.spectrum.total_weight()));
  }
}

TEST_CASE("energy normalization scales by 2/pi") {
  const auto s = analyze(mm1_generator(1.0, 2.0, 10), StateWeights::index(10)).spectrum;
  const auto e = s.with_mode(Normalization::energy);
  CHECK(analytic_psd(e, 0.37) == doctest::Approx(2.0 / std::numbers::pi * analytic_psd(s, 0.37)));
}

TEST_CASE("eigenvectors are biorthogonal and projectors resolve the identity") {
  const Generator g = mm1_generator(1.0, 1.4, 12);
  const auto pi = stationary_distribution(g);
  const Eigendecomposition es = eigendecompose(g, pi);
  CHECK(es.eigenvalues()(0) == 0.0);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(12, 12);
  for (std::size_t k = 0; k < es.size(); ++k) {
    const Eigen::VectorXd v = es.right_vector(k), w = es.left_vector(k);
    CHECK(w.dot(v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((g.matrix() * v - es.eigenvalues()(static_cast<Eigen::Index>(k)) * v).norm() < 1e-11);
    sum += es.projector(k);
  }
  CHECK((sum - Eigen::MatrixXd::Identity(12, 12)).norm() < 1e-11);
}

TEST_CASE("degenerate eigenvalues are grouped into one line") {
  const auto lines = analyze(ring_generator(1.0, 1.0, 10), StateWeights::index(10)).spectrum.lines();
  REQUIRE(lines.size() == 5);
  for (std::size_t k = 0; k < 4; ++k) CHECK(lines[k].multiplicity == 2);
  CHECK(lines[4].multiplicity == 1);
  for (std::size_t k = 1; k < lines.size(); ++k) CHECK(lines[k].omega > lines[k - 1].omega);

  // Star: leaves share one eigenvalue mu with multiplicity m - 1.
  const Generator star = star_generator(1.0, 2.0, 6);
  const auto pi = stationary_distribution(star);
  const auto lines_star = coupling_coefficients(eigendecompose(star, pi), StateWeights::index(7));
  REQUIRE(lines_star.size() == 2);
  CHECK(lines_star[0].omega == doctest::Approx(2.0));
  CHECK(lines_star[0].multiplicity == 5);
  CHECK(lines_star[1].omega == doctest::Approx(2.0 + 6.0));
}

TEST_CASE("zero-frequency kernel is the group inverse") {
  const Generator g = star_generator(0.7, 1.3, 5);
  const auto pi = stationary_distribution(g);
  const Eigen::MatrixXd z = generalized_fundamental_matrix(g, pi, 0.0);
  const Eigen::MatrixXd proj = Eigen::VectorXd::Ones(6) * pi.values().transpose();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(6, 6);
  CHECK((g.matrix() * z - (eye - proj)).norm() < 1e-12);
  CHECK((z * g.matrix() * z - z).norm() < 1e-12);
  CHECK((z * proj).norm() < 1e-12);

  const StateWeights x = StateWeights::index(6);
  const SpectralAnalysis s = analyze(g, x);
  const Eigen::VectorXd xc = x.values().array() - stationary_mean(x, pi);
  CHECK(pi_inner_product(xc, z * xc, pi) == doctest::Approx(diffusion_coefficient(s.spectrum)).epsilon(1e-12));
  CHECK(analytic_psd(s.spectrum, 0.0) == doctest::Approx(diffusion_coefficient(s.spectrum)));
}

TEST_CASE("graph Fourier transform satisfies Parseval on a symmetric ring") {
  const std::size_t n = 12;
  const Generator g = ring_generator(1.0, 1.0, n);
  const auto pi = stationary_distribution(g);
  const Eigendecomposition es = eigendecompose(g, pi);
  const StateWeights x = StateWeights::index(n);
  const auto coeffs = graph_fourier_transform(x, es);
  REQUIRE(coeffs.size() == n - 1);
  const Eigen::VectorXd xc = x.values().array() - x.values().mean();
  double energy = 0.0;
  for (double c : coeffs) energy += c * c;
  CHECK(energy == doctest::Approx(xc.squaredNorm()).epsilon(1e-12));

  CHECK_THROWS_AS(graph_fourier_transform(StateWeights::index(5), eigendecompose(mm1_generator(1, 2, 5),
                  stationary_distribution(mm1_generator(1, 2, 5)))), Error);
}

TEST_CASE("spectral inputs are validated") {
  const Generator ring = ring_generator(1.0, 3.0, 6);
  CHECK_THROWS_AS(eigendecompose(ring, stationary_distribution(ring)), Error);
  CHECK_THROWS_AS(LorentzianSpectrum({{-1.0, 1.0, 1}}), Error);
  CHECK_THROWS_AS(LorentzianSpectrum({{1.0, -1.0, 1}}), Error);
  const auto s = analyze(telegraph_generator(1, 1), StateWeights::index(2)).spectrum;
  CHECK_THROWS_AS(autocorrelation(s, -1.0), Error);
  const auto g = mm1_generator(1, 2, 4);
  CHECK_THROWS_AS(coupling_coefficients(eigendecompose(g, stationary_distribution(g)), StateWeights::index(3)),
                  Error);
}
