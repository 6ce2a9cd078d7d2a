#include <cmath>

#include "doctest.h"
#include "ctmc/generator.hpp"
#include "ctmc/matrix_exponential.hpp"
#include "ctmc/models.hpp"

using namespace ctmc;

namespace {

Generator two_state(double a, double b) {
  Eigen::MatrixXd g(2, 2);
  g << a, -a, -b, b;
  return Generator(g);
}

}  // namespace

TEST_CASE("generator construction rejects malformed matrices") {
  CHECK_THROWS_AS(Generator(Eigen::MatrixXd::Zero(2, 3)), Error);
  CHECK_THROWS_AS(Generator(Eigen::MatrixXd::Zero(1, 1)), Error);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(Generator{bad}, Error);
}

TEST_CASE("validation flags row sums, signs and reducibility") {
  CHECK(validate_generator(two_state(1.0, 2.0)).ok());

  Eigen::MatrixXd rows(2, 2);
  rows << 1.0, -0.5, -2.0, 2.0;
  CHECK(validate_generator(Generator(rows)).has(Violation::row_sum));

  Eigen::MatrixXd signs(2, 2);
  signs << -1.0, 1.0, -2.0, 2.0;
  CHECK(validate_generator(Generator(signs)).has(Violation::sign_pattern));

  Eigen::MatrixXd split = Eigen::MatrixXd::Zero(4, 4);
  split.block(0, 0, 2, 2) << 1, -1, -1, 1;
  split.block(2, 2, 2, 2) << 1, -1, -1, 1;
  const Generator g(split);
  CHECK_FALSE(is_irreducible(g));
  CHECK(validate_generator(g).has(Violation::reducible));
  CHECK_THROWS_AS(stationary_distribution(g), Error);

  Eigen::MatrixXd one_way(2, 2);
  one_way << 1.0, -1.0, 0.0, 0.0;
  CHECK_FALSE(is_irreducible(Generator(one_way)));
}

TEST_CASE("two-state stationary law is (b, a) / (a + b)") {
  const auto pi = stationary_distribution(two_state(0.3, 1.7));
  CHECK(pi[0] == doctest::Approx(1.7 / 2.0).epsilon(1e-14));
  CHECK(pi[1] == doctest::Approx(0.3 / 2.0).epsilon(1e-14));
  CHECK(check_detailed_balance(two_state(0.3, 1.7), pi));
}

TEST_CASE("stationary law solves pi G = 0 on every code path") {
  const std::vector<Generator> chains{mm1_generator(1.0, 2.0, 30), ring_generator(1.0, 1.0, 12),
                                      star_generator(0.5, 2.0, 9),
                                      Generator(mm1_generator(1.0, 1.3, 8).matrix())};
  for (const auto& g : chains) {
    const auto pi = stationary_distribution(g);
    const Eigen::RowVectorXd residual = pi.values().transpose() * g.matrix();
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-12 * g.max_abs_entry());
    CHECK(pi.values().sum() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(check_detailed_balance(g, pi));
  }
}

TEST_CASE("truncated M/M/1 law is geometric") {
  const auto pi = stationary_distribution(mm1_generator(1.0, 2.0, 16));
  for (std::size_t i = 1; i < 16; ++i) CHECK(pi[i] / pi[i - 1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("non-reversible ring fails detailed balance") {
  const Generator g = ring_generator(1.0, 2.0, 5);
  const auto pi = stationary_distribution(g);
  CHECK(pi[3] == doctest::Approx(0.2));
  CHECK_FALSE(check_detailed_balance(g, pi));
}

TEST_CASE("stationary distribution and weights validate inputs") {
  CHECK_THROWS_AS(StationaryDistribution(Eigen::Vector2d(0.5, 0.6)), Error);
  CHECK_THROWS_AS(StationaryDistribution(Eigen::Vector2d(1.0, 0.0)), Error);
  CHECK(StateWeights::index(4).values()(3) == 3.0);
  CHECK(StateWeights::constant(3, 2.5).values()(1) == 2.5);
}

TEST_CASE("pi moments") {
  const StationaryDistribution pi(Eigen::Vector3d(0.2, 0.3, 0.5));
  const StateWeights x = StateWeights::index(3);
  CHECK(stationary_mean(x, pi) == doctest::Approx(1.3));
  CHECK(stationary_variance(x, pi) == doctest::Approx(0.3 + 2.0 - 1.69));
  CHECK(pi_inner_product(Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, 2, 3), pi) == doctest::Approx(2.3));
}

TEST_CASE("matrix exponential: identity, semigroup and stochastic rows") {
  const Generator g = mm1_generator(1.0, 1.5, 6);
  const Eigen::MatrixXd p0 = transition_matrix(g, 0.0);
  CHECK((p0 - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-15);
  const Eigen::MatrixXd p1 = transition_matrix(g, 0.7), p2 = transition_matrix(g, 1.9);
  CHECK((p1 * p2 - transition_matrix(g, 2.6)).norm() < 1e-13);
  CHECK((p2.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-13);
  CHECK(p2.minCoeff() >= 0.0);

  const Eigen::MatrixXd far = transition_matrix(g, 500.0);
  const auto pi = stationary_distribution(g);
  for (Eigen::Index i = 0; i < 6; ++i)
    CHECK((far.row(i).transpose() - pi.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("matrix exponential of a diagonal matrix") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << -2.0, 0.5, 10.0;
  const Eigen::MatrixXd e = matrix_exponential(d);
  CHECK(e(0, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(e(2, 2) == doctest::Approx(std::exp(10.0)).epsilon(1e-13));
  CHECK(std::abs(e(0, 1)) < 1e-300);
}
