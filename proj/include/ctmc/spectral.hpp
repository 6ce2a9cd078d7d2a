#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ctmc/generator.hpp"

namespace ctmc {

/// Eigenstructure of a reversible generator.
///
/// Computed from the symmetric matrix S = D^{1/2} G D^{-1/2} (D = diag pi).
/// With orthonormal eigenvectors u_k of S, the right eigenvectors of G are
/// v_k = D^{-1/2} u_k and the left ones w_k = D^{1/2} u_k, so w_k . v_k = 1
/// and the spectral projector is Pi_k = v_k w_k^T.
class Eigendecomposition {
 public:
  Eigendecomposition(Eigen::VectorXd eigenvalues, Eigen::MatrixXd symmetric_vectors,
                     Eigen::VectorXd sqrt_pi, bool symmetric_generator);

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues_.size()); }
  /// All n eigenvalues in ascending order; entry 0 is exactly zero.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  /// Non-zero eigenvalues omega_1..omega_{n-1}.
  Eigen::VectorXd nonzero_eigenvalues() const { return eigenvalues_.tail(eigenvalues_.size() - 1); }
  const Eigen::MatrixXd& symmetric_vectors() const { return vectors_; }
  const Eigen::VectorXd& sqrt_pi() const { return sqrt_pi_; }
  bool symmetric_generator() const { return symmetric_; }

  Eigen::VectorXd right_vector(std::size_t k) const;
  Eigen::VectorXd left_vector(std::size_t k) const;
  Eigen::MatrixXd projector(std::size_t k) const;

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd sqrt_pi_;
  bool symmetric_;
};

Eigendecomposition eigendecompose(const Generator& g, const StationaryDistribution& pi);

/// One Lorentzian term: a distinct non-zero eigenvalue and gamma^2, the
/// squared coupling of x onto its whole eigenspace.
struct SpectralLine {
  double omega = 0.0;
  double weight = 0.0;
  std::size_t multiplicity = 1;
};

/// Relative tolerance under which eigenvalues are merged into one eigenspace.
inline constexpr double kDegeneracyTol = 1e-8;

/// gamma_k^2 = <x, Pi_k x>_pi for every distinct non-zero eigenvalue, in
/// ascending order of omega.
std::vector<SpectralLine> coupling_coefficients(const Eigendecomposition& es,
                                                const StateWeights& x);

enum class Normalization {
  raw,     ///< S(w) = sum gamma_k^2 w_k / (w_k^2 + w^2)
  energy,  ///< raw times 2/pi, so the integral over w >= 0 is Var(x)
};

class LorentzianSpectrum {
 public:
  explicit LorentzianSpectrum(std::vector<SpectralLine> lines,
                              Normalization mode = Normalization::raw);

  const std::vector<SpectralLine>& lines() const { return lines_; }
  Normalization mode() const { return mode_; }
  LorentzianSpectrum with_mode(Normalization mode) const { return LorentzianSpectrum(lines_, mode); }

  /// sum of gamma_k^2, the variance of the centered observable.
  double total_weight() const;
  /// Integral of S over [0, inf) from the closed-form Lorentzian integrals.
  double energy() const;

 private:
  std::vector<SpectralLine> lines_;
  Normalization mode_;
};

double analytic_psd(const LorentzianSpectrum& spec, double omega);
/// C(tau) = sum gamma_k^2 exp(-omega_k tau).
double autocorrelation(const LorentzianSpectrum& spec, double tau);
/// D = sum gamma_k^2 / omega_k = S(0) in raw mode.
double diffusion_coefficient(const LorentzianSpectrum& spec);

/// Z(w) = sum_k omega_k / (omega_k^2 + w^2) Pi_k. At w = 0 this is the group
/// inverse of G (the fundamental matrix).
Eigen::MatrixXd generalized_fundamental_matrix(const Eigendecomposition& es, double omega);
Eigen::MatrixXd generalized_fundamental_matrix(const Generator& g, const StationaryDistribution& pi,
                                               double omega);

/// <x, v_k> against the orthonormal eigenvectors of a symmetric generator,
/// for k = 1..n-1. Entry k-1 corresponds to eigenvalues()(k).
std::vector<double> graph_fourier_transform(const StateWeights& x, const Eigendecomposition& es);

/// Convenience bundle used by the pipelines.
struct SpectralAnalysis {
  StationaryDistribution pi;
  Eigendecomposition decomposition;
  LorentzianSpectrum spectrum;
};

SpectralAnalysis analyze(const Generator& g, const StateWeights& x);

}  // namespace ctmc
