#include "ctmc/spectral.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace ctmc {

Eigendecomposition::Eigendecomposition(Eigen::VectorXd eigenvalues, Eigen::MatrixXd symmetric_vectors,
                                       Eigen::VectorXd sqrt_pi, bool symmetric_generator)
    : eigenvalues_(std::move(eigenvalues)),
      vectors_(std::move(symmetric_vectors)),
      sqrt_pi_(std::move(sqrt_pi)),
      symmetric_(symmetric_generator) {}

Eigen::VectorXd Eigendecomposition::right_vector(std::size_t k) const {
  return vectors_.col(static_cast<Eigen::Index>(k)).cwiseQuotient(sqrt_pi_);
}

Eigen::VectorXd Eigendecomposition::left_vector(std::size_t k) const {
  return vectors_.col(static_cast<Eigen::Index>(k)).cwiseProduct(sqrt_pi_);
}

Eigen::MatrixXd Eigendecomposition::projector(std::size_t k) const {
  return right_vector(k) * left_vector(k).transpose();
}

Eigendecomposition eigendecompose(const Generator& g, const StationaryDistribution& pi) {
  if (pi.size() != g.size()) throw Error("eigendecompose: size mismatch");
  if (g.size() > kDenseLimit) throw Error("eigendecompose: chain too large for the dense eigensolver");
  if (!check_detailed_balance(g, pi)) throw Error("eigendecompose: chain is not reversible");

  const Eigen::Index n = static_cast<Eigen::Index>(g.size());
  const Eigen::VectorXd sqrt_pi = pi.values().cwiseSqrt();
  const auto& m = g.matrix();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (g.structure() == Structure::tridiagonal) {
    Eigen::VectorXd diag = m.diagonal();
    Eigen::VectorXd sub(n - 1);
    // Detailed balance makes sqrt(G(i,i+1) G(i+1,i)) the symmetrized entry.
    for (Eigen::Index i = 0; i + 1 < n; ++i) sub(i) = -std::sqrt(m(i, i + 1) * m(i + 1, i));
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  } else {
    Eigen::MatrixXd s = sqrt_pi.asDiagonal() * m * sqrt_pi.cwiseInverse().asDiagonal();
    s = 0.5 * (s + s.transpose()).eval();
    solver.compute(s, Eigen::ComputeEigenvectors);
  }
  if (solver.info() != Eigen::Success) throw Error("eigendecompose: eigensolver did not converge");

  Eigen::VectorXd values = solver.eigenvalues();
  const double scale = values.cwiseAbs().maxCoeff();
  if (std::abs(values(0)) > 1e-9 * scale) throw Error("eigendecompose: no zero eigenvalue found");
  if (std::abs(values(1)) <= 1e-9 * scale)
    throw Error("eigendecompose: zero eigenvalue is not simple (reducible chain)");
  values(0) = 0.0;
  return Eigendecomposition(std::move(values), solver.eigenvectors(), sqrt_pi, g.is_symmetric());
}

std::vector<SpectralLine> coupling_coefficients(const Eigendecomposition& es, const StateWeights& x) {
  if (x.size() != es.size()) throw Error("coupling_coefficients: size mismatch");
  // gamma_k^2 = (u_k . D^{1/2} x)^2 for each orthonormal eigenvector u_k.
  const Eigen::VectorXd proj =
      es.symmetric_vectors().transpose() * es.sqrt_pi().cwiseProduct(x.values());
  const auto& w = es.eigenvalues();

  std::vector<SpectralLine> lines;
  for (Eigen::Index k = 1; k < w.size(); ++k) {
    const double g2 = proj(k) * proj(k);
    if (!lines.empty()) {
      SpectralLine& last = lines.back();
      // The first value of the running group anchors the comparison so a
      // slow drift cannot chain distinct eigenvalues together.
      const double anchor = w(k - static_cast<Eigen::Index>(last.multiplicity));
      if (w(k) - anchor <= kDegeneracyTol * w(k)) {
        last.omega = (last.omega * static_cast<double>(last.multiplicity) + w(k)) /
                     static_cast<double>(last.multiplicity + 1);
        last.weight += g2;
        ++last.multiplicity;
        continue;
      }
    }
    lines.push_back({w(k), g2, 1});
  }
  return lines;
}

LorentzianSpectrum::LorentzianSpectrum(std::vector<SpectralLine> lines, Normalization mode)
    : lines_(std::move(lines)), mode_(mode) {
  for (const auto& l : lines_) {
    if (!(l.omega > 0.0)) throw Error("Lorentzian spectrum: eigenvalues must be positive");
    if (l.weight < 0.0) throw Error("Lorentzian spectrum: weights must be non-negative");
  }
}

double LorentzianSpectrum::total_weight() const {
  double s = 0.0;
  for (const auto& l : lines_) s += l.weight;
  return s;
}

double LorentzianSpectrum::energy() const {
  const double raw = 0.5 * std::numbers::pi * total_weight();
  return mode_ == Normalization::raw ? raw : raw * 2.0 / std::numbers::pi;
}

double analytic_psd(const LorentzianSpectrum& spec, double omega) {
  double s = 0.0;
  const double w2 = omega * omega;
  for (const auto& l : spec.lines()) s += l.weight * l.omega / (l.omega * l.omega + w2);
  return spec.mode() == Normalization::raw ? s : s * 2.0 / std::numbers::pi;
}

double autocorrelation(const LorentzianSpectrum& spec, double tau) {
  if (tau < 0.0) throw Error("autocorrelation: tau must be non-negative");
  double c = 0.0;
  for (const auto& l : spec.lines()) c += l.weight * std::exp(-l.omega * tau);
  return c;
}

double diffusion_coefficient(const LorentzianSpectrum& spec) {
  double d = 0.0;
  for (const auto& l : spec.lines()) d += l.weight / l.omega;
  return d;
}

Eigen::MatrixXd generalized_fundamental_matrix(const Eigendecomposition& es, double omega) {
  const Eigen::Index n = static_cast<Eigen::Index>(es.size());
  const auto& w = es.eigenvalues();
  Eigen::VectorXd filter(n);
  filter(0) = 0.0;
  for (Eigen::Index k = 1; k < n; ++k) filter(k) = w(k) / (w(k) * w(k) + omega * omega);
  const auto& u = es.symmetric_vectors();
  const Eigen::MatrixXd core = u * filter.asDiagonal() * u.transpose();
  return es.sqrt_pi().cwiseInverse().asDiagonal() * core * es.sqrt_pi().asDiagonal();
}

Eigen::MatrixXd generalized_fundamental_matrix(const Generator& g, const StationaryDistribution& pi,
                                               double omega) {
  return generalized_fundamental_matrix(eigendecompose(g, pi), omega);
}

std::vector<double> graph_fourier_transform(const StateWeights& x, const Eigendecomposition& es) {
  if (!es.symmetric_generator())
    throw Error("graph_fourier_transform: generator is not symmetric");
  if (x.size() != es.size()) throw Error("graph_fourier_transform: size mismatch");
  const Eigen::VectorXd hat = es.symmetric_vectors().transpose() * x.values();
  return std::vector<double>(hat.data() + 1, hat.data() + hat.size());
}

SpectralAnalysis analyze(const Generator& g, const StateWeights& x) {
  auto pi = stationary_distribution(g);
  auto es = eigendecompose(g, pi);
  LorentzianSpectrum spec(coupling_coefficients(es, x));
  return {std::move(pi), std::move(es), std::move(spec)};
}

}  // namespace ctmc
