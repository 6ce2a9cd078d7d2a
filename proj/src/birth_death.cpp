#include "ctmc/birth_death.hpp"

#include <algorithm>
#include <cmath>

namespace ctmc {

TridiagonalOperator::TridiagonalOperator(std::vector<double> d, std::vector<double> up,
                                         std::vector<double> low)
    : diag(std::move(d)), upper(std::move(up)), lower(std::move(low)) {
  if (diag.empty()) throw Error("tridiagonal operator: empty");
  if (upper.size() + 1 != diag.size() || lower.size() + 1 != diag.size())
    throw Error("tridiagonal operator: off-diagonal length mismatch");
  for (std::size_t i = 0; i < upper.size(); ++i)
    if (!(upper[i] * lower[i] > 0.0))
      throw Error("tridiagonal operator: off-diagonal products must be positive");
}

TridiagonalOperator TridiagonalOperator::birth_death(const BirthDeathRates& r) {
  const std::size_t n = r.states();
  std::vector<double> d(n, 0.0), up(n - 1), low(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    up[i] = -r.lambdas[i];
    low[i] = -r.mus[i];
    d[i] += r.lambdas[i];
    d[i + 1] += r.mus[i];
  }
  return TridiagonalOperator(std::move(d), std::move(up), std::move(low));
}

TridiagonalOperator TridiagonalOperator::toeplitz(const ToeplitzParams& p) {
  if (p.n < 1) throw Error("toeplitz: empty matrix");
  return TridiagonalOperator(std::vector<double>(p.n, p.b), std::vector<double>(p.n - 1, p.c),
                             std::vector<double>(p.n - 1, p.a));
}

Eigen::MatrixXd TridiagonalOperator::leading_block(std::size_t m) const {
  if (m < 1 || m > size()) throw Error("tridiagonal operator: block size out of range");
  const auto k = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out(i, i) = diag[static_cast<std::size_t>(i)];
    if (i + 1 < k) {
      out(i, i + 1) = upper[static_cast<std::size_t>(i)];
      out(i + 1, i) = lower[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

std::vector<double> birth_death_char_polys(const TridiagonalOperator& op, double x, std::size_t upto) {
  if (upto > op.size()) throw Error("char polys: order exceeds the operator size");
  std::vector<double> f(upto + 1);
  f[0] = 1.0;
  if (upto >= 1) f[1] = op.diag[0] - x;
  for (std::size_t m = 1; m < upto; ++m)
    f[m + 1] = (op.diag[m] - x) * f[m] - op.upper[m - 1] * op.lower[m - 1] * f[m - 1];
  return f;
}

std::vector<double> birth_death_char_polys(const BirthDeathRates& r, double x, std::size_t upto) {
  return birth_death_char_polys(TridiagonalOperator::birth_death(r), x, upto);
}

namespace {

// Gershgorin bounds of the symmetrized matrix (same spectrum).
std::pair<double, double> spectral_bounds(const TridiagonalOperator& op) {
  double lo = op.diag[0], hi = op.diag[0];
  for (std::size_t i = 0; i < op.size(); ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::sqrt(op.upper[i - 1] * op.lower[i - 1]);
    if (i + 1 < op.size()) radius += std::sqrt(op.upper[i] * op.lower[i]);
    lo = std::min(lo, op.diag[i] - radius);
    hi = std::max(hi, op.diag[i] + radius);
  }
  const double pad = 1e-12 * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  return {lo - pad, hi + pad};
}

double poly_at(const TridiagonalOperator& op, double x, std::size_t m) {
  return birth_death_char_polys(op, x, m)[m];
}

double bisect(const TridiagonalOperator& op, std::size_t m, double lo, double hi) {
  double flo = poly_at(op, lo, m);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = poly_at(op, mid, m);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> char_poly_roots(const TridiagonalOperator& op, std::size_t m) {
  if (m < 1 || m > op.size()) throw Error("char poly roots: order out of range");
  const auto [lo, hi] = spectral_bounds(op);
  std::vector<double> roots{op.diag[0]};
  for (std::size_t order = 2; order <= m; ++order) {
    std::vector<double> next;
    next.reserve(order);
    double left = lo;
    for (std::size_t i = 0; i <= roots.size(); ++i) {
      const double right = (i < roots.size()) ? roots[i] : hi;
      next.push_back(bisect(op, order, left, right));
      left = right;
    }
    roots = std::move(next);
  }
  return roots;
}

OrthogonalPolynomialMode birth_death_eigvec_coeffs(const TridiagonalOperator& op,
                                                   const std::vector<double>& roots, std::size_t k) {
  const std::size_t n = op.size();
  if (roots.size() != n) throw Error("eigvec coeffs: need all n roots of f_n");
  if (k >= n) throw Error("eigvec coeffs: root index out of range");
  const double omega = roots[k];

  double scale = 0.0;
  for (double r : roots) scale = std::max(scale, std::abs(r));
  double gaps = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == k) continue;
    const double gap = omega - roots[i];
    if (std::abs(gap) < 1e-10 * scale) throw Error("eigvec coeffs: eigenvalue is nearly degenerate");
    gaps *= gap;
  }

  const auto f = birth_death_char_polys(op, omega, n - 1);
  OrthogonalPolynomialMode mode;
  mode.psi.resize(static_cast<Eigen::Index>(n));
  double beta = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) beta *= -op.lower[i - 1];
    mode.psi(static_cast<Eigen::Index>(i)) = f[i] / beta;
  }
  // beta now holds beta_{n-1}. The sign (-1)^{n+1} comes from f_n = det(M - xI).
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;
  mode.q_sq = sign * beta / (mode.psi(static_cast<Eigen::Index>(n - 1)) * gaps);
  if (!(mode.q_sq > 0.0)) throw Error("eigvec coeffs: normalization is not positive");
  return mode;
}

double orthogonal_polynomial_gamma_sq(const OrthogonalPolynomialMode& mode, const StateWeights& x,
                                      const StationaryDistribution& pi) {
  if (x.size() != static_cast<std::size_t>(mode.psi.size()) || pi.size() != x.size())
    throw Error("orthogonal polynomial gamma: size mismatch");
  const double weighted = (pi.values().array() * x.values().array() * mode.psi.array()).sum();
  const double plain = x.values().dot(mode.psi);
  return mode.q_sq * weighted * plain;
}

double generalized_fourier_gamma(const OrthogonalPolynomialMode& mode, const StateWeights& x,
                                 const StationaryDistribution& pi) {
  if (x.size() != static_cast<std::size_t>(mode.psi.size()) || pi.size() != x.size())
    throw Error("generalized Fourier gamma: size mismatch");
  return std::sqrt(pi[0]) * std::sqrt(mode.q_sq) * x.values().dot(mode.psi);
}

}  // namespace ctmc
