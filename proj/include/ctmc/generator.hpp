#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ctmc {

/// Raised for malformed inputs and for numerical preconditions that fail.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hint used to pick a faster solver path. Never changes results beyond rounding.
enum class Structure { dense, tridiagonal, circulant, arrowhead };

std::string to_string(Structure s);

/// Infinitesimal generator of a finite continuous-time Markov chain.
///
/// Sign convention: P(t) = exp(-G t), so the diagonal is the total exit rate
/// (>= 0), off-diagonal entries are minus the jump rates (<= 0) and every
/// row sums to zero. The stationary law is the left null vector.
class Generator {
 public:
  Generator(Eigen::MatrixXd rates, Structure structure = Structure::dense);

  std::size_t size() const { return static_cast<std::size_t>(rates_.rows()); }
  const Eigen::MatrixXd& matrix() const { return rates_; }
  Structure structure() const { return structure_; }
  double operator()(std::size_t i, std::size_t j) const {
    return rates_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  double max_abs_entry() const { return max_abs_; }

  /// Rate of the jump i -> j (i != j), i.e. -G(i, j).
  double jump_rate(std::size_t i, std::size_t j) const { return -(*this)(i, j); }
  double exit_rate(std::size_t i) const { return (*this)(i, i); }
  bool is_symmetric(double rel_tol = 1e-12) const;

 private:
  Eigen::MatrixXd rates_;
  Structure structure_;
  double max_abs_ = 0.0;
};

enum class Violation { row_sum, sign_pattern, reducible };

struct ValidationIssue {
  Violation kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  bool has(Violation v) const;
};

ValidationReport validate_generator(const Generator& g);

/// Strong connectivity of the jump graph (edges where G(i, j) != 0, i != j).
bool is_irreducible(const Generator& g);

/// Probability vector over states; all entries are strictly positive.
class StationaryDistribution {
 public:
  explicit StationaryDistribution(Eigen::VectorXd pi);

  std::size_t size() const { return static_cast<std::size_t>(pi_.size()); }
  const Eigen::VectorXd& values() const { return pi_; }
  double operator[](std::size_t i) const { return pi_(static_cast<Eigen::Index>(i)); }

 private:
  Eigen::VectorXd pi_;
};

/// Observable value attached to each state (x_i).
class StateWeights {
 public:
  explicit StateWeights(Eigen::VectorXd x);
  /// x_i = i, the state index itself.
  static StateWeights index(std::size_t n);
  static StateWeights constant(std::size_t n, double value);

  std::size_t size() const { return static_cast<std::size_t>(x_.size()); }
  const Eigen::VectorXd& values() const { return x_; }

 private:
  Eigen::VectorXd x_;
};

StationaryDistribution stationary_distribution(const Generator& g);

bool check_detailed_balance(const Generator& g, const StationaryDistribution& pi);

/// <u, v>_pi = sum_i pi_i u_i v_i.
double pi_inner_product(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                        const StationaryDistribution& pi);

/// Mean and variance of the observable under pi.
double stationary_mean(const StateWeights& x, const StationaryDistribution& pi);
double stationary_variance(const StateWeights& x, const StationaryDistribution& pi);

/// Largest state count accepted by the dense oracle paths.
inline constexpr std::size_t kDenseLimit = 2048;

/// P(tau) = exp(-G tau), dense. Intended for cross-checks on small chains.
Eigen::MatrixXd transition_matrix(const Generator& g, double tau);

}  // namespace ctmc
