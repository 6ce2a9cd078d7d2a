#include "ctmc/scaling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ctmc/generator.hpp"

namespace ctmc {

namespace {

struct LineFit {
  double slope;
  double intercept;
  double slope_stderr;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ssr += r * r;
  }
  const double se = xs.size() > 2 ? std::sqrt(ssr / (m - 2.0) / sxx) : 0.0;
  return {slope, intercept, se};
}

bool near_integer(double v, long& out) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-12 * std::max(1.0, std::abs(v))) return false;
  out = static_cast<long>(r);
  return true;
}

}  // namespace

IndexRange default_fit_window(std::size_t n) { return {5, std::max<std::size_t>(5, n / 10)}; }

PowerLawFit fit_power_law(std::span<const double> values, IndexRange window) {
  if (window.first < 1 || window.last > values.size())
    throw Error("fit_power_law: window exceeds the sequence");
  if (window.count() < 5) throw Error("fit_power_law: window needs at least 5 points");
  std::vector<double> xs, ys;
  for (std::size_t k = window.first; k <= window.last; ++k) {
    const double v = values[k - 1];
    if (!(v > 0.0)) throw Error("fit_power_law: values must be positive");
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(v));
  }
  const LineFit line = least_squares(xs, ys);
  PowerLawFit fit{line.slope, std::exp(line.intercept), 0.0, window};
  for (std::size_t i = 0; i < xs.size(); ++i)
    fit.residual = std::max(fit.residual, std::abs(ys[i] - (line.intercept + line.slope * xs[i])));
  return fit;
}

ScalingFit fit_eigenstructure(std::span<const double> omegas, std::span<const double> gammas,
                              IndexRange window) {
  return {fit_power_law(omegas, window), fit_power_law(gammas, window)};
}

double correction_coefficient(double alpha, double beta) {
  const double s = 2.0 * beta + alpha;
  long si = 0;
  if (!near_integer(s, si)) return 0.0;
  if (si == 0) return 0.5;
  if (si < 0 || si % 2 == 0) return 0.0;
  const long p = (si + 1) / 2;
  // B_2 .. B_10
  static constexpr std::array<double, 5> bernoulli{1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
                                                   5.0 / 66.0};
  if (p > static_cast<long>(bernoulli.size()))
    throw Error("correction_coefficient: 2 beta + alpha beyond the tabulated Bernoulli numbers");
  // B_{2p}/(2p)! * (2p-1)!  ==  B_{2p} / (2p)
  return bernoulli[static_cast<std::size_t>(p - 1)] / static_cast<double>(2 * p);
}

NoiseExponent predict_zeta(double alpha, double beta) {
  NoiseExponent out;
  out.admissible = alpha > 0.0 && alpha > std::abs(2.0 * beta + 1.0);
  if (!out.admissible) return out;
  out.zeta = (2.0 * beta - alpha + 1.0) / alpha;
  out.K = correction_coefficient(alpha, beta);
  return out;
}

double cauchy_moment_integral(double alpha, double beta, double omega_bar) {
  if (!predict_zeta(alpha, beta).admissible)
    throw Error("cauchy_moment_integral: requires alpha > |2 beta + 1|");
  if (!(omega_bar > 0.0)) throw Error("cauchy_moment_integral: omega_bar must be positive");
  const double zeta = (2.0 * beta - alpha + 1.0) / alpha;
  const double sec = 1.0 / std::cos(std::numbers::pi * (1.0 + 2.0 * beta) / (2.0 * alpha));
  return std::numbers::pi / (2.0 * alpha) * sec * std::pow(omega_bar, zeta);
}

double asymptotic_psd(double alpha, double beta, double omega_bar) {
  const double integral = cauchy_moment_integral(alpha, beta, omega_bar);
  return integral - correction_coefficient(alpha, beta) / (omega_bar * omega_bar);
}

namespace {

// Integral of x^s / (x^{2a} + w^2) over [from, inf), expanded in w^2 / x^{2a}.
double tail_integral(double s, double a, double w, double from) {
  const double r = (w * w) / std::pow(from, 2.0 * a);
  double term_scale = std::pow(from, s - 2.0 * a + 1.0);
  double total = 0.0;
  double sign = 1.0;
  for (int m = 0; m < 10000; ++m) {
    const double denom = 2.0 * a * (m + 1) - s - 1.0;
    const double term = sign * term_scale / denom;
    total += term;
    if (std::abs(term) <= 1e-18 * std::abs(total)) break;
    term_scale *= r;
    sign = -sign;
    if (r == 0.0) break;
  }
  return total;
}

}  // namespace

CertifiedSum lorentzian_sum_direct(double alpha, double beta, double omega_bar, std::size_t terms,
                                   double rel_tol) {
  if (!predict_zeta(alpha, beta).admissible)
    throw Error("lorentzian_sum_direct: requires alpha > |2 beta + 1|");
  if (omega_bar < 0.0) throw Error("lorentzian_sum_direct: omega_bar must be non-negative");
  if (terms < 1) throw Error("lorentzian_sum_direct: need at least one term");

  const double s = 2.0 * beta + alpha;
  const double n = static_cast<double>(terms);
  // The bracket needs f decreasing on [N, inf) and a convergent tail expansion.
  const double w2 = omega_bar * omega_bar;
  if (std::pow(n, 2.0 * alpha) < 4.0 * w2)
    throw Error("lorentzian_sum_direct: too few terms for the tail expansion");
  if (s > 0.0 && std::pow(n, 2.0 * alpha) * (2.0 * alpha - s) < s * w2)
    throw Error("lorentzian_sum_direct: too few terms, summand still increasing");

  long double partial = 0.0L;
  for (std::size_t k = terms; k >= 1; --k) {  // smallest terms first
    const double x = static_cast<double>(k);
    partial += std::pow(x, s) / (std::pow(x, 2.0 * alpha) + w2);
  }
  const double upper = tail_integral(s, alpha, omega_bar, n);
  const double lower = tail_integral(s, alpha, omega_bar, n + 1.0);
  CertifiedSum out;
  out.value = static_cast<double>(partial) + 0.5 * (upper + lower);
  out.half_width = 0.5 * (upper - lower);
  out.terms = terms;
  if (out.half_width > rel_tol * out.value)
    throw Error("lorentzian_sum_direct: tail bound not achieved with the given number of terms");
  return out;
}

CertifiedSum lorentzian_sum_auto(double alpha, double beta, double omega_bar, double rel_tol,
                                 std::size_t max_terms) {
  for (std::size_t terms = 64; terms <= max_terms; terms *= 2) {
    try {
      return lorentzian_sum_direct(alpha, beta, omega_bar, terms, rel_tol);
    } catch (const Error&) {
      if (terms * 2 > max_terms) throw;
    }
  }
  throw Error("lorentzian_sum_auto: max_terms too small");
}

std::vector<LogBin> log_bin_spectrum(std::span<const SpectrumSample> psd, double f_lo, double f_hi,
                                     std::size_t bins_per_decade) {
  if (!(f_lo > 0.0) || !(f_hi > f_lo)) throw Error("log bins: need 0 < f_lo < f_hi");
  if (bins_per_decade < 1) throw Error("log bins: need at least one bin per decade");
  const double l0 = std::log10(f_lo);
  const double span = std::log10(f_hi) - l0;
  const auto nbins = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(span * static_cast<double>(bins_per_decade) - 1e-9)));
  std::vector<double> sum_logf(nbins, 0.0), sum_p(nbins, 0.0);
  std::vector<std::size_t> count(nbins, 0);
  for (const auto& s : psd) {
    if (s.freq < f_lo || s.freq > f_hi) continue;
    auto b = static_cast<std::size_t>((std::log10(s.freq) - l0) / span * static_cast<double>(nbins));
    b = std::min(b, nbins - 1);
    sum_logf[b] += std::log(s.freq);
    sum_p[b] += s.power;
    ++count[b];
  }
  std::vector<LogBin> out;
  for (std::size_t b = 0; b < nbins; ++b) {
    if (count[b] == 0) continue;
    const double m = static_cast<double>(count[b]);
    out.push_back({std::exp(sum_logf[b] / m), sum_p[b] / m, count[b]});
  }
  return out;
}

SlopeEstimate estimate_psd_slope(std::span<const SpectrumSample> psd, double f_lo, double f_hi,
                                 std::size_t bins_per_decade) {
  if (!(f_lo > 0.0) || f_hi < 10.0 * f_lo * (1.0 - 1e-12))
    throw Error("estimate_psd_slope: window must span at least a decade");
  if (bins_per_decade < 2) throw Error("estimate_psd_slope: need at least 2 bins per decade");

  std::vector<SpectrumSample> positive;
  for (const auto& s : psd)
    if (s.freq >= f_lo && s.freq <= f_hi && s.power > 0.0) positive.push_back(s);
  SlopeEstimate est;
  est.points = positive.size();
  if (est.points == 0) throw Error("estimate_psd_slope: no samples in the window");
  if (est.points < 20) throw Error("estimate_psd_slope: fewer than 20 samples in the window");

  std::vector<double> xs, ys;
  for (const auto& bin : log_bin_spectrum(positive, f_lo, f_hi, bins_per_decade)) {
    xs.push_back(std::log(bin.freq));
    ys.push_back(std::log(bin.power));
  }
  if (xs.size() < 3) throw Error("estimate_psd_slope: fewer than 3 populated bins");
  const LineFit line = least_squares(xs, ys);
  est.slope = line.slope;
  est.standard_error = line.slope_stderr;
  est.bins = xs.size();
  return est;
}

}  // namespace ctmc
