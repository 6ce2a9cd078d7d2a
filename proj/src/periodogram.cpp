#include "ctmc/periodogram.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace ctmc {

namespace {

// The FFTW planner is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double Periodogram::integrated_power() const {
  long double acc = 0.0L;
  for (double p : power) acc += p;
  return static_cast<double>(acc) * df();
}

std::vector<SpectrumSample> Periodogram::samples() const {
  std::vector<SpectrumSample> out(freqs.size());
  for (std::size_t j = 0; j < freqs.size(); ++j) out[j] = {freqs[j], power[j]};
  return out;
}

double series_variance(std::span<const double> series) {
  if (series.empty()) throw Error("variance: empty series");
  long double mean = 0.0L;
  for (double v : series) mean += v;
  mean /= static_cast<long double>(series.size());
  long double ss = 0.0L;
  for (double v : series) ss += (v - mean) * (v - mean);
  return static_cast<double>(ss / static_cast<long double>(series.size()));
}

Periodogram periodogram(std::span<const double> series, double sample_dt, Window window) {
  const std::size_t n = series.size();
  if (n < 4 || !is_power_of_two(n)) throw Error("periodogram: length must be a power of two >= 4");
  if (!(sample_dt > 0.0)) throw Error("periodogram: sample_dt must be positive");

  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
  if (!in || !out) throw Error("periodogram: out of memory");

  long double mean = 0.0L;
  for (double v : series) mean += v;
  mean /= static_cast<long double>(n);

  double window_power = static_cast<double>(n);  // sum of w^2
  if (window == Window::rectangular) {
    for (std::size_t i = 0; i < n; ++i) in.get()[i] = static_cast<double>(series[i] - mean);
  } else {
    window_power = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                            static_cast<double>(n));
      in.get()[i] = static_cast<double>(series[i] - mean) * w;
      window_power += w * w;
    }
  }

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("periodogram: FFT planning failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  Periodogram p;
  p.sample_dt = sample_dt;
  const std::size_t half = n / 2;
  p.freqs.resize(half);
  p.power.resize(half);
  const double df = 1.0 / (static_cast<double>(n) * sample_dt);
  const double scale = sample_dt / window_power;
  for (std::size_t j = 1; j <= half; ++j) {
    const double re = out.get()[j][0];
    const double im = out.get()[j][1];
    const double mag2 = re * re + im * im;
    p.freqs[j - 1] = static_cast<double>(j) * df;
    p.power[j - 1] = (j == half ? 1.0 : 2.0) * scale * mag2;
  }
  return p;
}

double one_sided_psd(const LorentzianSpectrum& spec, double freq) {
  return 4.0 * analytic_psd(spec.with_mode(Normalization::raw), 2.0 * std::numbers::pi * freq);
}

ComparisonReport compare_spectra(const LorentzianSpectrum& analytic, const Periodogram& empirical,
                                 double f_lo, double f_hi, std::size_t bins_per_decade) {
  std::vector<SpectrumSample> emp, model;
  const LorentzianSpectrum raw = analytic.with_mode(Normalization::raw);
  for (std::size_t j = 0; j < empirical.size(); ++j) {
    const double f = empirical.freqs[j];
    if (f < f_lo || f > f_hi) continue;
    emp.push_back({f, empirical.power[j]});
    model.push_back({f, 4.0 * analytic_psd(raw, 2.0 * std::numbers::pi * f)});
  }
  const auto eb = log_bin_spectrum(emp, f_lo, f_hi, bins_per_decade);
  const auto mb = log_bin_spectrum(model, f_lo, f_hi, bins_per_decade);
  if (eb.empty()) throw Error("compare: no periodogram samples in the band");

  ComparisonReport report;
  report.f_lo = f_lo;
  report.f_hi = f_hi;
  report.n_realizations = empirical.n_realizations;
  for (std::size_t b = 0; b < eb.size(); ++b) {
    ComparisonBin bin{eb[b].freq, eb[b].power, mb[b].power, 0.0, eb[b].count};
    bin.log10_ratio = (bin.empirical > 0.0 && bin.analytic > 0.0)
                          ? std::log10(bin.empirical / bin.analytic)
                          : std::numeric_limits<double>::infinity();
    report.max_abs_log10_ratio = std::max(report.max_abs_log10_ratio, std::abs(bin.log10_ratio));
    report.bins.push_back(bin);
  }
  return report;
}

namespace {

struct KneeObjective {
  std::vector<double> omega;
  std::vector<double> log_power;

  // Optimal log A for this knee and the residual sum of squares.
  std::pair<double, double> evaluate(double log_knee) const {
    const double knee = std::exp(log_knee);
    std::vector<double> shape(omega.size());
    double log_a = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
      const double r = omega[i] / knee;
      shape[i] = -std::log1p(r * r);
      log_a += log_power[i] - shape[i];
    }
    log_a /= static_cast<double>(omega.size());
    double rss = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
      const double d = log_power[i] - log_a - shape[i];
      rss += d * d;
    }
    return {log_a, rss};
  }
};

}  // namespace

LorentzianFit fit_lorentzian(const Periodogram& p, double f_lo, double f_hi,
                             std::size_t bins_per_decade) {
  const auto samples = p.samples();
  const auto bins = log_bin_spectrum(samples, f_lo, f_hi, bins_per_decade);
  KneeObjective obj;
  for (const auto& b : bins) {
    if (!(b.power > 0.0)) continue;
    obj.omega.push_back(2.0 * std::numbers::pi * b.freq);
    obj.log_power.push_back(std::log(b.power));
  }
  if (obj.omega.size() < 4) throw Error("lorentzian fit: fewer than 4 populated bins");

  const double lo = std::log(obj.omega.front()) - std::log(10.0);
  const double hi = std::log(obj.omega.back()) + std::log(10.0);
  constexpr int kScan = 400;
  double best = lo;
  double best_rss = obj.evaluate(lo).second;
  for (int i = 1; i <= kScan; ++i) {
    const double t = lo + (hi - lo) * i / kScan;
    const double rss = obj.evaluate(t).second;
    if (rss < best_rss) {
      best_rss = rss;
      best = t;
    }
  }
  const double step = (hi - lo) / kScan;
  double a = std::max(lo, best - step);
  double b = std::min(hi, best + step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  for (int it = 0; it < 100; ++it) {
    if (obj.evaluate(c).second < obj.evaluate(d).second)
      b = d;
    else
      a = c;
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  const double log_knee = 0.5 * (a + b);
  const auto [log_a, rss] = obj.evaluate(log_knee);

  LorentzianFit fit;
  fit.knee_omega = std::exp(log_knee);
  fit.amplitude = std::exp(log_a);
  fit.bins = obj.omega.size();
  fit.rms_log10_residual = std::sqrt(rss / static_cast<double>(fit.bins)) / std::log(10.0);
  return fit;
}

}  // namespace ctmc
