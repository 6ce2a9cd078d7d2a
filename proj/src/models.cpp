#include "ctmc/models.hpp"

#include <cmath>
#include <numbers>

namespace ctmc {

BirthDeathRates::BirthDeathRates(std::vector<double> births, std::vector<double> deaths)
    : lambdas(std::move(births)), mus(std::move(deaths)) {
  if (lambdas.empty()) throw Error("birth-death chain needs at least 2 states");
  if (lambdas.size() != mus.size()) throw Error("birth and death rate vectors differ in length");
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    if (!(lambdas[i] > 0.0) || !(mus[i] > 0.0)) throw Error("birth-death rates must be positive");
}

BirthDeathRates BirthDeathRates::constant(double lambda, double mu, std::size_t n) {
  if (n < 2) throw Error("birth-death chain needs at least 2 states");
  return BirthDeathRates(std::vector<double>(n - 1, lambda), std::vector<double>(n - 1, mu));
}

Generator birth_death_generator(const BirthDeathRates& r) {
  const auto n = static_cast<Eigen::Index>(r.states());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double up = r.lambdas[static_cast<std::size_t>(i)];
    const double down = r.mus[static_cast<std::size_t>(i)];
    g(i, i + 1) = -up;
    g(i, i) += up;
    g(i + 1, i) = -down;
    g(i + 1, i + 1) += down;
  }
  return Generator(std::move(g), Structure::tridiagonal);
}

Generator mm1_generator(double lambda, double mu, std::size_t n) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw Error("mm1: rates must be positive");
  return birth_death_generator(BirthDeathRates::constant(lambda, mu, n));
}

Eigen::MatrixXd ToeplitzParams::matrix() const {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    t(i, i) = b;
    if (i + 1 < m) {
      t(i, i + 1) = c;
      t(i + 1, i) = a;
    }
  }
  return t;
}

namespace {

void check_toeplitz(const ToeplitzParams& p) {
  if (p.n < 1) throw Error("toeplitz: empty matrix");
  if (!(p.a < 0.0) || !(p.c < 0.0)) throw Error("toeplitz: closed forms need a < 0 and c < 0");
}

}  // namespace

std::vector<double> toeplitz_eigenvalues(const ToeplitzParams& p) {
  check_toeplitz(p);
  std::vector<double> out(p.n);
  const double s = 2.0 * std::sqrt(p.a * p.c);
  const double np1 = static_cast<double>(p.n + 1);
  for (std::size_t k = 1; k <= p.n; ++k)
    out[k - 1] = p.b - s * std::cos(static_cast<double>(k) * std::numbers::pi / np1);
  return out;
}

ToeplitzMode toeplitz_eigenvectors(const ToeplitzParams& p, std::size_t k) {
  check_toeplitz(p);
  if (k < 1 || k > p.n) throw Error("toeplitz: mode index out of range");
  const double log_ratio = std::log(p.a / p.c);
  if (0.5 * static_cast<double>(p.n) * std::abs(log_ratio) > 700.0)
    throw Error("toeplitz: (a/c)^{n/2} overflows double precision");

  const auto m = static_cast<Eigen::Index>(p.n);
  ToeplitzMode mode{Eigen::VectorXd(m), Eigen::VectorXd(m), 1.0};
  const double np1 = static_cast<double>(p.n + 1);
  for (Eigen::Index idx = 0; idx < m; ++idx) {
    const double i = static_cast<double>(idx + 1);
    const double s = std::sin(static_cast<double>(k) * i * std::numbers::pi / np1);
    mode.right(idx) = std::exp(0.5 * i * log_ratio) * s;
    mode.left(idx) = std::exp(-0.5 * i * log_ratio) * s;
  }
  mode.normalizer = 1.0 / mode.left.dot(mode.right);
  return mode;
}

double mm1_gamma_scaling(const HeavyTrafficConfig& cfg, std::size_t k) {
  if (!(cfg.epsilon > 0.0)) throw Error("heavy traffic: epsilon must be positive");
  if (k < 1 || 10 * k > cfg.n) throw Error("heavy traffic: k outside the k << n window (1 <= k <= n/10)");
  const double n = static_cast<double>(cfg.n);
  return std::sqrt(cfg.epsilon) * n * n / (std::numbers::pi * static_cast<double>(k));
}

Generator ring_generator(double lambda, double mu, std::size_t n) {
  if (n < 3) throw Error("ring: needs at least 3 states");
  if (!(lambda > 0.0) || !(mu > 0.0)) throw Error("ring: rates must be positive");
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index q = 0; q < m; ++q) {
    g(q, q) = lambda + mu;
    g(q, (q + 1) % m) = -lambda;
    g(q, (q + m - 1) % m) = -mu;
  }
  return Generator(std::move(g), Structure::circulant);
}

std::complex<double> ring_eigenvalue(double lambda, double mu, std::size_t n, std::size_t k) {
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
  const std::complex<double> w = std::polar(1.0, phase);
  return lambda + mu - lambda * w - mu * std::conj(w);
}

double ring_gamma_closed_form(std::size_t n, std::size_t k) {
  if (k < 1 || k >= n) throw Error("ring: mode index must satisfy 1 <= k <= n-1");
  return 1.0 / (2.0 * std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)));
}

Generator star_generator(double lambda, double mu, std::size_t peripheral) {
  if (peripheral < 1) throw Error("star: needs at least one leaf");
  if (!(lambda > 0.0) || !(mu > 0.0)) throw Error("star: rates must be positive");
  const auto m = static_cast<Eigen::Index>(peripheral + 1);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  g(0, 0) = lambda * static_cast<double>(peripheral);
  for (Eigen::Index j = 1; j < m; ++j) {
    g(0, j) = -lambda;
    g(j, 0) = -mu;
    g(j, j) = mu;
  }
  return Generator(std::move(g), peripheral == 1 ? Structure::tridiagonal : Structure::arrowhead);
}

Generator telegraph_generator(double lambda, double mu) { return star_generator(lambda, mu, 1); }

}  // namespace ctmc
