#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ctmc/scaling.hpp"
#include "ctmc/spectral.hpp"

namespace ctmc {

enum class Window { rectangular, hann };

/// One-sided PSD estimate on f_j = j / (N dt), j = 1..N/2.
///
/// P_j = 2 (dt/N) |X_j|^2 below Nyquist and (dt/N) |X_{N/2}|^2 at Nyquist, with
/// X the DFT of the mean-removed series, so that sum_j P_j df is the series
/// variance.
struct Periodogram {
  std::vector<double> freqs;
  std::vector<double> power;
  std::size_t n_realizations = 1;
  double sample_dt = 0.0;

  std::size_t size() const { return freqs.size(); }
  double df() const { return freqs.empty() ? 0.0 : freqs.front(); }
  /// sum_j P_j df.
  double integrated_power() const;
  std::vector<SpectrumSample> samples() const;
};

bool is_power_of_two(std::size_t n);

/// Throws unless the length is a power of two and at least 4.
Periodogram periodogram(std::span<const double> series, double sample_dt,
                        Window window = Window::rectangular);

/// Population variance sum (x - mean)^2 / N.
double series_variance(std::span<const double> series);

/// Analytic counterpart of Periodogram: 4 S_raw(2 pi f).
double one_sided_psd(const LorentzianSpectrum& spec, double freq);

struct ComparisonBin {
  double freq = 0.0;
  double empirical = 0.0;
  double analytic = 0.0;
  double log10_ratio = 0.0;  ///< log10(empirical / analytic)
  std::size_t count = 0;
};

struct ComparisonReport {
  std::vector<ComparisonBin> bins;
  double f_lo = 0.0;
  double f_hi = 0.0;
  double max_abs_log10_ratio = 0.0;
  std::size_t n_realizations = 0;
};

/// Log-bins the empirical estimate and the analytic PSD (evaluated on the same
/// frequencies) over [f_lo, f_hi].
ComparisonReport compare_spectra(const LorentzianSpectrum& analytic, const Periodogram& empirical,
                                 double f_lo, double f_hi, std::size_t bins_per_decade = 10);

struct LorentzianFit {
  double amplitude = 0.0;   ///< one-sided power at f -> 0
  double knee_omega = 0.0;  ///< angular corner frequency
  double rms_log10_residual = 0.0;
  std::size_t bins = 0;
};

/// Least squares in log space of A / (1 + (2 pi f / w_c)^2) on log-binned
/// data over [f_lo, f_hi]. A has a closed form for fixed w_c; w_c is found by
/// a scan plus golden-section refinement in log w_c.
LorentzianFit fit_lorentzian(const Periodogram& p, double f_lo, double f_hi,
                             std::size_t bins_per_decade = 10);

}  // namespace ctmc
