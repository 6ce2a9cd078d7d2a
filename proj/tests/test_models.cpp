#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ctmc/models.hpp"
#include "ctmc/spectral.hpp"

using namespace ctmc;

TEST_CASE("M/M/1 generator has the documented boundary rows") {
  const Generator g = mm1_generator(1.0, 2.0, 5);
  CHECK(g(0, 0) == 1.0);
  CHECK(g(0, 1) == -1.0);
  CHECK(g(2, 1) == -2.0);
  CHECK(g(2, 2) == 3.0);
  CHECK(g(2, 3) == -1.0);
  CHECK(g(4, 3) == -2.0);
  CHECK(g(4, 4) == 2.0);
  CHECK(validate_generator(g).ok());
  CHECK(g.structure() == Structure::tridiagonal);
  CHECK_THROWS_AS(mm1_generator(1.0, 0.0, 5), Error);
  CHECK_THROWS_AS(mm1_generator(1.0, 2.0, 1), Error);
}

TEST_CASE("Toeplitz closed forms match a dense eigensolver") {
  const ToeplitzParams p{-1.3, 2.0, -0.6, 9};
  const auto closed = toeplitz_eigenvalues(p);
  REQUIRE(closed.size() == 9);
  for (std::size_t k = 1; k < closed.size(); ++k) CHECK(closed[k] > closed[k - 1]);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(p.matrix(), false);
  std::vector<double> numeric;
  for (Eigen::Index i = 0; i < 9; ++i) numeric.push_back(solver.eigenvalues()(i).real());
  std::sort(numeric.begin(), numeric.end());
  for (std::size_t k = 0; k < 9; ++k) CHECK(numeric[k] == doctest::Approx(closed[k]).epsilon(1e-11));

  const Eigen::MatrixXd t = p.matrix();
  for (std::size_t k = 1; k <= 9; ++k) {
    const ToeplitzMode m = toeplitz_eigenvectors(p, k);
    const double om = closed[k - 1];
    CHECK((t * m.right - om * m.right).norm() < 1e-11 * m.right.norm());
    CHECK((t.transpose() * m.left - om * m.left).norm() < 1e-11 * m.left.norm());
    CHECK(m.normalizer * m.left.dot(m.right) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(toeplitz_eigenvectors(p, 0), Error);
  CHECK_THROWS_AS(toeplitz_eigenvalues({1.0, 2.0, -1.0, 4}), Error);
}

TEST_CASE("Toeplitz M/M/1 parameters") {
  const auto p = ToeplitzParams::mm1(1.0, 1.5, 4);
  CHECK(p.a == -1.5);
  CHECK(p.b == 2.5);
  CHECK(p.c == -1.0);
  const Eigen::MatrixXd t = p.matrix();
  const Eigen::MatrixXd g = mm1_generator(1.0, 1.5, 4).matrix();
  CHECK(t.block(1, 0, 2, 4) == g.block(1, 0, 2, 4));
}

TEST_CASE("heavy traffic coupling scale") {
  const HeavyTrafficConfig cfg{1e-4, 1000};
  CHECK(cfg.mu() == 1.0 + 1e-4);
  CHECK(mm1_gamma_scaling(cfg, 2) ==
        doctest::Approx(std::sqrt(1e-4) * 1e6 / (2.0 * std::numbers::pi)));
  CHECK_THROWS_AS(mm1_gamma_scaling(cfg, 101), Error);
  CHECK_THROWS_AS(mm1_gamma_scaling(cfg, 0), Error);
}

TEST_CASE("ring eigenvalues and couplings") {
  const std::size_t n = 7;
  const Generator g = ring_generator(1.0, 2.0, n);
  CHECK(validate_generator(g).ok());
  CHECK(g(0, 1) == -1.0);
  CHECK(g(0, n - 1) == -2.0);
  CHECK(g(n - 1, 0) == -1.0);
  CHECK(std::abs(ring_eigenvalue(1.0, 2.0, n, 0)) < 1e-15);
  const auto w3 = ring_eigenvalue(1.0, 2.0, n, 3);
  const double th = 2.0 * std::numbers::pi * 3.0 / n;
  CHECK(w3.real() == doctest::Approx(3.0 - 3.0 * std::cos(th)));
  CHECK(w3.imag() == doctest::Approx(std::sin(th)));
  CHECK(ring_gamma_closed_form(6, 3) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ring_gamma_closed_form(6, 6), Error);
  CHECK_THROWS_AS(ring_generator(1.0, 1.0, 2), Error);

  // Summing the closed-form weights recovers Var(x) = (n^2 - 1)/12.
  double total = 0.0;
  for (std::size_t k = 1; k < 20; ++k) total += std::pow(ring_gamma_closed_form(20, k), 2);
  CHECK(total == doctest::Approx((400.0 - 1.0) / 12.0).epsilon(1e-12));
}

TEST_CASE("star and telegraph") {
  const Generator s = star_generator(0.5, 3.0, 4);
  REQUIRE(s.size() == 5);
  CHECK(s(0, 0) == doctest::Approx(2.0));
  CHECK(s(3, 0) == -3.0);
  CHECK(s(1, 2) == 0.0);
  CHECK(validate_generator(s).ok());
  const auto pi = stationary_distribution(s);
  CHECK(pi[0] == doctest::Approx(3.0 / 5.0));

  const Generator t = telegraph_generator(0.5, 3.0);
  CHECK(t.matrix() == star_generator(0.5, 3.0, 1).matrix());
  CHECK_THROWS_AS(star_generator(1.0, 1.0, 0), Error);
}

TEST_CASE("birth-death rates validate their inputs") {
  CHECK_THROWS_AS(BirthDeathRates({1.0, 2.0}, {1.0}), Error);
  CHECK_THROWS_AS(BirthDeathRates({}, {}), Error);
  CHECK_THROWS_AS(BirthDeathRates({1.0}, {-1.0}), Error);
  const Generator g = birth_death_generator(BirthDeathRates({1.0, 2.0}, {3.0, 4.0}));
  CHECK(g(1, 0) == -3.0);
  CHECK(g(1, 2) == -2.0);
  CHECK(g(2, 2) == 4.0);
}
