#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ctmc/generator.hpp"

namespace ctmc {

/// Birth rates lambda_0..lambda_{n-2} and death rates mu_1..mu_{n-1} of an
/// n-state birth-death chain. mus[i] is the rate of state i+1 -> i.
struct BirthDeathRates {
  std::vector<double> lambdas;
  std::vector<double> mus;

  BirthDeathRates(std::vector<double> births, std::vector<double> deaths);
  static BirthDeathRates constant(double lambda, double mu, std::size_t n);
  std::size_t states() const { return lambdas.size() + 1; }
};

/// Tridiagonal generator; the top state only has the death transition.
Generator birth_death_generator(const BirthDeathRates& r);

/// Truncated M/M/1 queue: first row (lambda, -lambda), interior rows
/// (-mu, lambda + mu, -lambda), last row (-mu, mu).
Generator mm1_generator(double lambda, double mu, std::size_t n);

/// T_n(a, b, c): constant sub-diagonal a, diagonal b, super-diagonal c.
struct ToeplitzParams {
  double a = -1.0;
  double b = 2.0;
  double c = -1.0;
  std::size_t n = 2;

  /// The approximation of the M/M/1 generator: a = -mu, b = lambda + mu, c = -lambda.
  static ToeplitzParams mm1(double lambda, double mu, std::size_t n) { return {-mu, lambda + mu, -lambda, n}; }
  Eigen::MatrixXd matrix() const;
};

/// omega_k = b - 2 sqrt(ac) cos(k pi / (n+1)), k = 1..n, ascending.
std::vector<double> toeplitz_eigenvalues(const ToeplitzParams& p);

struct ToeplitzMode {
  Eigen::VectorXd right;   ///< v_i = (a/c)^{i/2} sin(k i pi / (n+1))
  Eigen::VectorXd left;    ///< w_i = (c/a)^{i/2} sin(k i pi / (n+1))
  double normalizer = 1;   ///< 1 / (w . v), so (normalizer w) . v = 1
};

ToeplitzMode toeplitz_eigenvectors(const ToeplitzParams& p, std::size_t k);

/// Heavy traffic M/M/1: lambda = 1, mu = 1 + epsilon, n retained states.
struct HeavyTrafficConfig {
  double epsilon = 1e-4;
  std::size_t n = 1000;

  double lambda() const { return 1.0; }
  double mu() const { return 1.0 + epsilon; }
};

/// |gamma_k| ~ sqrt(eps) n^2 / (pi k), valid for k << n (k <= n/10 enforced).
double mm1_gamma_scaling(const HeavyTrafficConfig& cfg, std::size_t k);

/// Exponents (alpha, beta) of the heavy traffic eigenstructure.
struct ScalingExponents {
  double alpha;
  double beta;
};
inline constexpr ScalingExponents kHeavyTrafficExponents{2.0, -1.0};

/// Ring of n states, rate lambda clockwise (q -> q+1) and mu counterclockwise.
Generator ring_generator(double lambda, double mu, std::size_t n);

/// omega_k = lambda + mu - lambda w^k - mu w^{(n-1)k}, w = exp(2 pi i / n).
std::complex<double> ring_eigenvalue(double lambda, double mu, std::size_t n, std::size_t k);

/// gamma_k = 1 / (2 sin(pi k / n)) for lambda = mu = 1 and x_q = q.
double ring_gamma_closed_form(std::size_t n, std::size_t k);

/// Star with one center (state 0) and `peripheral` leaves; n+1 states in total.
/// Center -> each leaf at rate lambda, leaf -> center at rate mu.
Generator star_generator(double lambda, double mu, std::size_t peripheral);

/// Two-state telegraph process, the one-leaf star.
Generator telegraph_generator(double lambda, double mu);

}  // namespace ctmc
