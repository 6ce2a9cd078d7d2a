#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ctmc {

/// Inclusive 1-based index window [first, last].
struct IndexRange {
  std::size_t first = 1;
  std::size_t last = 1;
  std::size_t count() const { return last >= first ? last - first + 1 : 0; }
};

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  /// max over the window of |log(value) - log(fit)|.
  double residual = 0.0;
  IndexRange window;
};

/// Least squares of log(values[k-1]) against log(k) over the window.
PowerLawFit fit_power_law(std::span<const double> values, IndexRange window);

/// Default window [5, n/10] for a sequence of length n.
IndexRange default_fit_window(std::size_t n);

struct ScalingFit {
  PowerLawFit omega;  ///< omega_k ~ omega0 k^alpha
  PowerLawFit gamma;  ///< |gamma_k| ~ gamma0 k^beta
  double alpha() const { return omega.exponent; }
  double beta() const { return gamma.exponent; }
};

/// Fit both power laws; gammas are |gamma_k| (not squared).
ScalingFit fit_eigenstructure(std::span<const double> omegas, std::span<const double> gammas,
                              IndexRange window);

struct NoiseExponent {
  double zeta = 0.0;       ///< only meaningful when admissible
  bool admissible = false; ///< alpha > |2 beta + 1|
  double K = 0.0;          ///< coefficient of the omega^-2 correction
};

/// zeta = (2 beta - alpha + 1) / alpha when alpha > |2 beta + 1|.
NoiseExponent predict_zeta(double alpha, double beta);

/// Euler-Maclaurin boundary coefficient K of the omega^-2 correction:
/// 1/2 when 2 beta + alpha = 0; B_{2p}/(2p)! (2p-1)! when 2p = 2 beta + alpha + 1
/// for p in 1..5; 0 otherwise.
double correction_coefficient(double alpha, double beta);

/// I(w) = pi/(2 alpha) sec(pi (1 + 2 beta)/(2 alpha)) w^zeta, the integral of
/// f(x) = x^{2 beta + alpha} / (x^{2 alpha} + w^2) over (0, inf).
double cauchy_moment_integral(double alpha, double beta, double omega_bar);

/// I(w) - K w^-2: asymptotic form of sum_k f(k) in the rescaled frequency w.
double asymptotic_psd(double alpha, double beta, double omega_bar);

struct CertifiedSum {
  double value = 0.0;
  double half_width = 0.0;  ///< certified bound on |value - exact|
  std::size_t terms = 0;
};

/// sum_{k>=1} f(k): explicit terms 1..terms plus the midpoint of the integral
/// bracket for the tail. Throws when the bracket exceeds rel_tol * value.
CertifiedSum lorentzian_sum_direct(double alpha, double beta, double omega_bar, std::size_t terms,
                                   double rel_tol = 1e-8);

/// Smallest power-of-two number of terms meeting rel_tol, up to max_terms.
CertifiedSum lorentzian_sum_auto(double alpha, double beta, double omega_bar, double rel_tol = 1e-8,
                                 std::size_t max_terms = std::size_t{1} << 26);

struct SpectrumSample {
  double freq;
  double power;
};

/// Mean power over one logarithmic frequency bin.
struct LogBin {
  double freq = 0.0;   ///< geometric mean of the member frequencies
  double power = 0.0;  ///< arithmetic mean of the member powers
  std::size_t count = 0;
};

/// Log-spaced bins over [f_lo, f_hi]; empty bins are dropped.
std::vector<LogBin> log_bin_spectrum(std::span<const SpectrumSample> psd, double f_lo, double f_hi,
                                     std::size_t bins_per_decade);

struct SlopeEstimate {
  double slope = 0.0;
  double standard_error = 0.0;
  std::size_t bins = 0;   ///< log bins that entered the regression
  std::size_t points = 0; ///< raw samples inside the window
};

/// Least-squares slope of log S against log f over log-spaced bin averages of
/// the samples inside [f_lo, f_hi]. Requires f_hi >= 10 f_lo and >= 20 points.
SlopeEstimate estimate_psd_slope(std::span<const SpectrumSample> psd, double f_lo, double f_hi,
                                 std::size_t bins_per_decade = 10);

}  // namespace ctmc
