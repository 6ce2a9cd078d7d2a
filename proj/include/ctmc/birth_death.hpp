#pragma once

// Orthogonal-polynomial view of tridiagonal (birth-death) generators.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ctmc/generator.hpp"
#include "ctmc/models.hpp"

namespace ctmc {

/// Tridiagonal matrix M with M(i,i) = diag[i], M(i,i+1) = upper[i] and
/// M(i+1,i) = lower[i]. Off-diagonal products must be positive.
struct TridiagonalOperator {
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> lower;

  TridiagonalOperator(std::vector<double> d, std::vector<double> up, std::vector<double> low);

  /// The closed n-state birth-death generator. Its leading principal m x m
  /// blocks (m < n) are the open truncations of the infinite chain.
  static TridiagonalOperator birth_death(const BirthDeathRates& r);
  static TridiagonalOperator toeplitz(const ToeplitzParams& p);

  std::size_t size() const { return diag.size(); }
  /// Leading principal m x m block as a dense matrix.
  Eigen::MatrixXd leading_block(std::size_t m) const;
};

/// f_0(x)..f_upto(x), f_m = det(M_m - x I) of the leading m x m block, from
/// f_0 = 1, f_1 = d_0 - x, f_{m+1} = (d_m - x) f_m - upper_{m-1} lower_{m-1} f_{m-1}.
std::vector<double> birth_death_char_polys(const TridiagonalOperator& op, double x, std::size_t upto);
std::vector<double> birth_death_char_polys(const BirthDeathRates& r, double x, std::size_t upto);

/// Roots of f_m in ascending order, by bisection. The roots of f_{m-1}
/// bracket those of f_m one per interval.
std::vector<double> char_poly_roots(const TridiagonalOperator& op, std::size_t m);

struct OrthogonalPolynomialMode {
  Eigen::VectorXd psi;  ///< psi_i(omega) = f_{i-1}(omega) / beta_{i-1}, i = 1..n
  double q_sq = 0.0;    ///< normalization, v_{k,i} = q_k psi_i(omega_k)
};

/// Eigenvector coefficients at the k-th (0-based) root of f_n, n = op.size().
/// beta_i = prod_{l<i} (-lower_l) is the product of the first i death rates.
/// Throws when the root is nearly degenerate.
OrthogonalPolynomialMode birth_death_eigvec_coeffs(const TridiagonalOperator& op,
                                                   const std::vector<double>& roots, std::size_t k);

/// gamma_k^2 ~= q_k^2 (sum_i pi_i x_i psi_i)(sum_i x_i psi_i).
double orthogonal_polynomial_gamma_sq(const OrthogonalPolynomialMode& mode, const StateWeights& x,
                                      const StationaryDistribution& pi);

/// gamma_k ~= sqrt(pi_0) q_k xhat(omega_k) with xhat = sum_i x_i psi_i(omega_k),
/// the near-uniform (rho_i ~ 1) limit.
double generalized_fourier_gamma(const OrthogonalPolynomialMode& mode, const StateWeights& x,
                                 const StationaryDistribution& pi);

}  // namespace ctmc
