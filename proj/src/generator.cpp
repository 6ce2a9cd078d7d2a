#include "ctmc/generator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ctmc/matrix_exponential.hpp"

namespace ctmc {

std::string to_string(Structure s) {
  switch (s) {
    case Structure::dense: return "dense";
    case Structure::tridiagonal: return "tridiagonal";
    case Structure::circulant: return "circulant";
    case Structure::arrowhead: return "arrowhead";
  }
  return "dense";
}

Generator::Generator(Eigen::MatrixXd rates, Structure structure)
    : rates_(std::move(rates)), structure_(structure) {
  if (rates_.rows() != rates_.cols()) throw Error("generator matrix is not square");
  if (rates_.rows() < 2) throw Error("generator needs at least 2 states");
  if (!rates_.allFinite()) throw Error("generator has non-finite entries");
  max_abs_ = rates_.cwiseAbs().maxCoeff();
}

bool Generator::is_symmetric(double rel_tol) const {
  return ((rates_ - rates_.transpose()).cwiseAbs().maxCoeff() <= rel_tol * max_abs_);
}

bool ValidationReport::has(Violation v) const {
  return std::any_of(issues.begin(), issues.end(),
                     [v](const ValidationIssue& i) { return i.kind == v; });
}

namespace {

// Breadth-first reachability from state 0, following either G(i, j) != 0 or
// its transpose. Together the two passes give Kosaraju's strong-connectivity
// test for the single-component question.
bool all_reachable(const Eigen::MatrixXd& m, bool transpose) {
  const Eigen::Index n = m.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> stack{0};
  seen[0] = 1;
  Eigen::Index count = 1;
  while (!stack.empty()) {
    const Eigen::Index i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || seen[static_cast<std::size_t>(j)]) continue;
      const double entry = transpose ? m(j, i) : m(i, j);
      if (entry != 0.0) {
        seen[static_cast<std::size_t>(j)] = 1;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == n;
}

}  // namespace

bool is_irreducible(const Generator& g) {
  return all_reachable(g.matrix(), false) && all_reachable(g.matrix(), true);
}

ValidationReport validate_generator(const Generator& g) {
  ValidationReport report;
  const auto& m = g.matrix();
  const Eigen::Index n = m.rows();
  const double tol = 1e-12 * std::max(g.max_abs_entry(), 1e-300);

  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = m.row(i).sum();
    if (std::abs(s) > tol) {
      std::ostringstream os;
      os << "row " << i << " sums to " << s;
      report.issues.push_back({Violation::row_sum, os.str()});
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const bool bad = (i == j) ? m(i, j) < 0.0 : m(i, j) > 0.0;
      if (bad) {
        std::ostringstream os;
        os << "entry (" << i << ", " << j << ") = " << m(i, j) << " has the wrong sign";
        report.issues.push_back({Violation::sign_pattern, os.str()});
      }
    }
  }
  if (!is_irreducible(g)) {
    report.issues.push_back({Violation::reducible, "jump graph is not strongly connected"});
  }
  return report;
}

StationaryDistribution::StationaryDistribution(Eigen::VectorXd pi) : pi_(std::move(pi)) {
  if (pi_.size() < 1) throw Error("empty stationary distribution");
  if (!pi_.allFinite() || pi_.minCoeff() <= 0.0)
    throw Error("stationary distribution must have strictly positive entries");
  if (std::abs(pi_.sum() - 1.0) > 1e-12)
    throw Error("stationary distribution is not normalized");
}

StateWeights::StateWeights(Eigen::VectorXd x) : x_(std::move(x)) {
  if (!x_.allFinite()) throw Error("state weights must be finite");
}

StateWeights StateWeights::index(std::size_t n) {
  return StateWeights(Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), 0.0,
                                                 static_cast<double>(n) - 1.0));
}

StateWeights StateWeights::constant(std::size_t n, double value) {
  return StateWeights(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), value));
}

namespace {

bool is_tridiagonal(const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (std::abs(i - j) > 1 && m(i, j) != 0.0) return false;
  return true;
}

// pi_{k+1} / pi_k = lambda_k / mu_{k+1}, accumulated in log space.
Eigen::VectorXd product_form(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd logp(n);
  logp(0) = 0.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double up = -m(k, k + 1);
    const double down = -m(k + 1, k);
    if (up <= 0.0 || down <= 0.0) throw Error("birth-death chain is not irreducible");
    logp(k + 1) = logp(k) + std::log(up) - std::log(down);
  }
  Eigen::VectorXd p = (logp.array() - logp.maxCoeff()).exp().matrix();
  return p / p.sum();
}

// Solve pi G = 0 with the last balance equation replaced by sum(pi) = 1.
Eigen::VectorXd deflated_solve(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd a = m.transpose();
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw Error("stationary distribution is not unique (reducible chain)");
  Eigen::VectorXd p = lu.solve(rhs);
  return p / p.sum();
}

}  // namespace

StationaryDistribution stationary_distribution(const Generator& g) {
  if (!is_irreducible(g)) throw Error("stationary distribution: chain is reducible");
  const auto& m = g.matrix();
  Eigen::VectorXd p;
  switch (g.structure()) {
    case Structure::circulant:
      p = Eigen::VectorXd::Constant(m.rows(), 1.0 / static_cast<double>(m.rows()));
      break;
    case Structure::tridiagonal:
      if (is_tridiagonal(m)) {
        p = product_form(m);
        break;
      }
      [[fallthrough]];
    default:
      p = deflated_solve(m);
  }
  if (p.minCoeff() <= 0.0)
    throw Error("stationary distribution underflows: some states have zero mass in double precision");
  const double residual = (p.transpose() * m).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * g.max_abs_entry())
    throw Error("stationary distribution: balance residual too large");
  return StationaryDistribution(std::move(p));
}

bool check_detailed_balance(const Generator& g, const StationaryDistribution& pi) {
  if (pi.size() != g.size()) throw Error("detailed balance: size mismatch");
  const auto& m = g.matrix();
  const auto& p = pi.values();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(p(i) * m(i, j) - p(j) * m(j, i)));
  return worst <= 1e-10 * g.max_abs_entry();
}

double pi_inner_product(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                        const StationaryDistribution& pi) {
  if (u.size() != v.size() || static_cast<std::size_t>(u.size()) != pi.size())
    throw Error("pi_inner_product: length mismatch");
  return (pi.values().array() * u.array() * v.array()).sum();
}

double stationary_mean(const StateWeights& x, const StationaryDistribution& pi) {
  return pi_inner_product(x.values(), Eigen::VectorXd::Ones(x.values().size()), pi);
}

double stationary_variance(const StateWeights& x, const StationaryDistribution& pi) {
  const double mean = stationary_mean(x, pi);
  const Eigen::VectorXd centered = x.values().array() - mean;
  return pi_inner_product(centered, centered, pi);
}

Eigen::MatrixXd transition_matrix(const Generator& g, double tau) {
  if (tau < 0.0) throw Error("transition_matrix: tau must be non-negative");
  if (g.size() > kDenseLimit) throw Error("transition_matrix: chain too large for dense exponentiation");
  return matrix_exponential(-tau * g.matrix());
}

}  // namespace ctmc
