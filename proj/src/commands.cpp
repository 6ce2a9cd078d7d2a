#include "ctmc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ctmc/checks.hpp"
#include "ctmc/models.hpp"
#include "ctmc/scaling.hpp"
#include "ctmc/simulate.hpp"

namespace ctmc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::size_t kMaxDefaultGrid = std::size_t{1} << 22;

fs::path prepare_out_dir(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + cfg.out_dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) buf_ << (i ? "," : "") << header[i];
    buf_ << "\n";
  }
  template <class... Cols>
  void row(const Cols&... cols) {
    std::size_t i = 0;
    ((buf_ << (i++ ? "," : "") << cell(cols)), ...);
    buf_ << "\n";
  }
  std::string str() const { return buf_.str(); }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(State v) { return std::to_string(v); }
  std::ostringstream buf_;
};

Generator model_generator(const RunConfig& cfg) {
  const double lambda = cfg.birth_rate(), mu = cfg.death_rate();
  switch (cfg.model) {
    case ModelKind::mm1: return mm1_generator(lambda, mu, cfg.n);
    case ModelKind::ring: return ring_generator(lambda, mu, cfg.n);
    case ModelKind::star:
      if (cfg.n < 2) throw Error("star: needs at least 2 nodes");
      return star_generator(lambda, mu, cfg.n - 1);
    case ModelKind::telegraph: return telegraph_generator(lambda, mu);
  }
  throw Error("unknown model");
}

Normalization normalization_of(const RunConfig& cfg) {
  return cfg.normalization == "energy" ? Normalization::energy : Normalization::raw;
}

json fit_json(const PowerLawFit& f) {
  return {{"exponent", f.exponent},
          {"prefactor", f.prefactor},
          {"max_log_residual", f.residual},
          {"window", {f.window.first, f.window.last}}};
}

// Slope of the periodogram over [f_lo, f_hi]; failures become an "error" entry.
json band_slope(const Periodogram& p, const std::string& name, double f_lo, double f_hi,
                std::size_t bins_per_decade) {
  json j = {{"band", name}, {"f_lo", f_lo}, {"f_hi", f_hi}};
  try {
    const SlopeEstimate est = estimate_psd_slope(p.samples(), f_lo, f_hi, bins_per_decade);
    j["slope"] = est.slope;
    j["standard_error"] = est.standard_error;
    j["bins"] = est.bins;
  } catch (const Error& e) {
    j["error"] = e.what();
  }
  return j;
}

void snapshot(const fs::path& dir, const RunConfig& effective) {
  write_text(dir / "config.txt", effective.to_text());
}

}  // namespace

SpectralAnalysis model_analysis(const RunConfig& cfg) {
  const Generator g = model_generator(cfg);
  return analyze(g, StateWeights::index(g.size()));
}

std::vector<SpectralLine> read_eigenstructure_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read eigenstructure file " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("eigenstructure file is empty");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) {
      col.erase(std::remove_if(col.begin(), col.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
                col.end());
      header.push_back(col);
    }
  }
  auto find = [&](const std::string& name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto c_omega = find("omega");
  const auto c_gsq = find("gamma_sq");
  const auto c_g = find("gamma");
  if (c_omega < 0 || (c_gsq < 0 && c_g < 0))
    throw Error("eigenstructure file needs an omega column and a gamma_sq or gamma column");

  std::vector<SpectralLine> lines;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    auto number = [&](std::ptrdiff_t c) {
      if (c >= static_cast<std::ptrdiff_t>(cells.size()))
        throw Error("eigenstructure row " + std::to_string(row) + ": missing column");
      char* end = nullptr;
      const std::string& s = cells[static_cast<std::size_t>(c)];
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str()) throw Error("eigenstructure row " + std::to_string(row) + ": not a number");
      return v;
    };
    SpectralLine l;
    l.omega = number(c_omega);
    l.weight = c_gsq >= 0 ? number(c_gsq) : std::pow(number(c_g), 2.0);
    if (!(l.omega > 0.0) || !(l.weight >= 0.0))
      throw Error("eigenstructure row " + std::to_string(row) + ": need omega > 0 and gamma_sq >= 0");
    if (!lines.empty() && !(l.omega > lines.back().omega))
      throw Error("eigenstructure row " + std::to_string(row) + ": omega must increase");
    lines.push_back(l);
  }
  if (lines.empty()) throw Error("eigenstructure file has no rows");
  return lines;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const Generator g = model_generator(cfg);
  const SpectralAnalysis a = analyze(g, StateWeights::index(g.size()));
  const fs::path dir = prepare_out_dir(cfg);
  snapshot(dir, cfg);

  const auto& lines = a.spectrum.lines();
  CsvWriter eig({"k", "omega", "gamma_sq", "multiplicity"});
  for (std::size_t k = 0; k < lines.size(); ++k)
    eig.row(k + 1, lines[k].omega, lines[k].weight, lines[k].multiplicity);
  write_text(dir / "eigenstructure.csv", eig.str());

  const LorentzianSpectrum spec = a.spectrum.with_mode(normalization_of(cfg));
  const double lo = lines.front().omega / 100.0, hi = lines.back().omega * 100.0;
  const auto points = static_cast<std::size_t>(std::ceil(std::log10(hi / lo) * 20.0));
  CsvWriter psd({"omega", "S"});
  for (std::size_t i = 0; i <= points; ++i) {
    const double w = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(points));
    psd.row(w, analytic_psd(spec, w));
  }
  write_text(dir / "psd.csv", psd.str());

  const double sum_gamma = a.spectrum.total_weight();
  const double d_x = diffusion_coefficient(a.spectrum);
  json summary = {{"command", "spectrum"},
                  {"model", to_string(cfg.model)},
                  {"states", g.size()},
                  {"structure", to_string(g.structure())},
                  {"lambda", cfg.birth_rate()},
                  {"mu", cfg.death_rate()},
                  {"distinct_eigenvalues", lines.size() + 1},
                  {"omega_min", lines.front().omega},
                  {"omega_max", lines.back().omega},
                  {"sum_gamma_sq", sum_gamma},
                  {"variance", stationary_variance(StateWeights::index(g.size()), a.pi)},
                  {"D_X", d_x},
                  {"S0_raw", analytic_psd(a.spectrum, 0.0)},
                  {"normalization", cfg.normalization}};
  write_json(dir / "summary.json", summary);
  out << "distinct eigenvalues: " << lines.size() + 1 << "\n"
      << "sum gamma_k^2 = " << format_double(sum_gamma) << "\n"
      << "D_X = S(0) = " << format_double(d_x) << "\n";
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg_in, std::ostream& out) {
  if (!cfg_in.seed) throw Error("simulate: --seed is required");
  RunConfig cfg = cfg_in;
  const double lambda = cfg.birth_rate(), mu = cfg.death_rate();

  std::optional<JumpModel> model;
  std::optional<SpectralAnalysis> analysis;
  double omega_min = 0.0;
  std::vector<double> mid_band;  // angular frequencies
  if (cfg.model == ModelKind::mm1) {
    model = UnboundedMM1(lambda, mu);
    omega_min = std::pow(std::sqrt(mu) - std::sqrt(lambda), 2.0);
    if (omega_min > 0.0) mid_band = {100.0 * omega_min, 1e4 * omega_min};
  } else {
    const Generator g = model_generator(cfg);
    const StateWeights x = StateWeights::index(g.size());
    model = GeneratorProcess(g, x);
    analysis = analyze(g, x);
    const auto& lines = analysis->spectrum.lines();
    omega_min = lines.front().omega;
    if (lines.size() >= 20) {
      const double hi = lines[std::min<std::size_t>(100, lines.size()) - 1].omega;
      if (hi >= 10.0 * lines[9].omega) mid_band = {lines[9].omega, hi};
    }
  }

  SimConfig sc;
  sc.seed = *cfg.seed;
  sc.n_realizations = cfg.realizations;
  sc.threads = cfg.threads;
  const double dt0 = 1.0 / (4.0 * max_exit_rate(*model));
  const double horizon = omega_min > 0.0 ? 100.0 / omega_min : 1e4 * dt0;
  auto pow2_at_least = [](double v) {
    std::size_t n = 4;
    while (static_cast<double>(n) < v) n *= 2;
    return n;
  };
  if (cfg.t_end && cfg.dt) {
    sc.t_end = *cfg.t_end;
    sc.sample_dt = *cfg.dt;
  } else if (cfg.t_end) {
    sc.t_end = *cfg.t_end;
    sc.sample_dt = sc.t_end / static_cast<double>(pow2_at_least(sc.t_end / dt0));
  } else if (cfg.dt) {
    sc.sample_dt = *cfg.dt;
    sc.t_end = sc.sample_dt * static_cast<double>(pow2_at_least(horizon / sc.sample_dt));
  } else {
    const std::size_t n = pow2_at_least(horizon / dt0);
    if (n > kMaxDefaultGrid) {
      sc.sample_dt = horizon / static_cast<double>(kMaxDefaultGrid);
      sc.t_end = horizon;
    } else {
      sc.sample_dt = dt0;
      sc.t_end = dt0 * static_cast<double>(n);
    }
  }
  sc.validate();
  cfg.t_end = sc.t_end;
  cfg.dt = sc.sample_dt;

  const fs::path dir = prepare_out_dir(cfg);
  snapshot(dir, cfg);

  const AveragedPeriodogram avg = averaged_periodogram(*model, sc);
  const Periodogram& p = avg.periodogram;
  CsvWriter pcsv({"freq", "power"});
  for (std::size_t j = 0; j < p.size(); ++j) pcsv.row(p.freqs[j], p.power[j]);
  write_text(dir / "periodogram.csv", pcsv.str());

  const Trajectory traj = gillespie_path(*model, sc, 0, cfg.trajectory_events);
  CsvWriter tcsv({"time", "state"});
  for (std::size_t i = 0; i < traj.states.size(); ++i) tcsv.row(traj.jump_times[i], traj.states[i]);
  write_text(dir / "trajectory.csv", tcsv.str());

  const double nyquist = 0.5 / sc.sample_dt;
  json slopes = json::array();
  if (!mid_band.empty())
    slopes.push_back(band_slope(p, "mid", mid_band[0] / (2.0 * std::numbers::pi),
                                mid_band[1] / (2.0 * std::numbers::pi), cfg.bins_per_decade));
  slopes.push_back(band_slope(p, "high", nyquist / 40.0, nyquist / 4.0, cfg.bins_per_decade));

  double parseval = 0.0;
  for (double e : avg.parseval_errors) parseval = std::max(parseval, e);
  json summary = {{"command", "simulate"},
                  {"model", to_string(cfg.model)},
                  {"simulated_process", describe(*model)},
                  {"lambda", lambda},
                  {"mu", mu},
                  {"seed", sc.seed},
                  {"realizations", sc.n_realizations},
                  {"t_end", sc.t_end},
                  {"sample_dt", sc.sample_dt},
                  {"grid_length", sc.grid_length()},
                  {"events", avg.events},
                  {"time_average", avg.mean_time_average()},
                  {"time_averages", avg.time_averages},
                  {"max_parseval_error", parseval},
                  {"slopes", slopes}};
  if (const auto* q = std::get_if<UnboundedMM1>(&*model); q && q->has_stationary())
    summary["stationary_mean"] = q->stationary_mean();

  if (analysis) {
    const double f_lo = std::max(0.5 * omega_min / (2.0 * std::numbers::pi), p.df());
    const double f_hi = nyquist / 4.0;
    summary["stationary_mean"] = stationary_mean(StateWeights::index(analysis->pi.size()), analysis->pi);
    if (f_hi > f_lo) {
      const ComparisonReport rep = compare_spectra(analysis->spectrum, p, f_lo, f_hi, cfg.bins_per_decade);
      json bins = json::array();
      for (const auto& b : rep.bins)
        bins.push_back({{"freq", b.freq}, {"empirical", b.empirical}, {"analytic", b.analytic},
                        {"log10_ratio", b.log10_ratio}, {"count", b.count}});
      write_json(dir / "comparison.json", {{"f_lo", rep.f_lo}, {"f_hi", rep.f_hi},
                                          {"n_realizations", rep.n_realizations},
                                          {"max_abs_log10_ratio", rep.max_abs_log10_ratio},
                                          {"bins", bins}});
      summary["max_abs_log10_ratio"] = rep.max_abs_log10_ratio;
    }
    if (analysis->spectrum.lines().size() <= 3) {
      const double knee = analysis->spectrum.lines().front().omega / (2.0 * std::numbers::pi);
      try {
        const LorentzianFit fit = fit_lorentzian(p, std::max(knee / 10.0, p.df()),
                                                 std::min(knee * 10.0, nyquist / 4.0), cfg.bins_per_decade);
        summary["lorentzian_fit"] = {{"knee_omega", fit.knee_omega},
                                     {"amplitude", fit.amplitude},
                                     {"rms_log10_residual", fit.rms_log10_residual}};
      } catch (const Error& e) {
        summary["lorentzian_fit"] = {{"error", e.what()}};
      }
    }
  }
  write_json(dir / "summary.json", summary);

  out << "events: " << avg.events << "\n"
      << "time-average state: " << format_double(avg.mean_time_average()) << "\n";
  for (const auto& s : slopes)
    if (s.contains("slope"))
      out << s["band"].get<std::string>() << "-band slope: " << format_double(s["slope"].get<double>())
          << "\n";
  return kExitOk;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  std::vector<SpectralLine> lines;
  std::string source;
  if (!cfg.eigen_file.empty()) {
    lines = read_eigenstructure_csv(cfg.eigen_file);
    source = cfg.eigen_file;
  } else {
    lines = model_analysis(cfg).spectrum.lines();
    source = "model " + to_string(cfg.model);
  }
  std::vector<double> omegas, gammas;
  for (const auto& l : lines) {
    omegas.push_back(l.omega);
    gammas.push_back(std::sqrt(l.weight));
  }
  IndexRange window = default_fit_window(lines.size());
  if (cfg.window_first) window.first = *cfg.window_first;
  if (cfg.window_last) window.last = *cfg.window_last;

  json report = {{"command", "fit"}, {"source", source}, {"lines", lines.size()},
                 {"window", {window.first, window.last}}};
  std::optional<double> alpha, beta;
  try {
    const PowerLawFit f = fit_power_law(omegas, window);
    alpha = f.exponent;
    report["alpha"] = fit_json(f);
  } catch (const Error& e) {
    report["alpha"] = {{"error", e.what()}};
  }
  try {
    const PowerLawFit f = fit_power_law(gammas, window);
    beta = f.exponent;
    report["beta"] = fit_json(f);
  } catch (const Error& e) {
    report["beta"] = {{"error", e.what()}};
  }
  if (alpha && beta) {
    const NoiseExponent ne = predict_zeta(*alpha, *beta);
    report["admissible"] = ne.admissible;
    if (ne.admissible) {
      report["zeta_predicted"] = ne.zeta;
      report["K"] = ne.K;
    }
    try {
      const double lo = omegas[window.first - 1], hi = omegas[window.last - 1];
      const LorentzianSpectrum spec(lines);
      std::vector<SpectrumSample> samples;
      const auto count = static_cast<std::size_t>(std::ceil(std::log10(hi / lo) * 50.0));
      for (std::size_t i = 0; i <= count; ++i) {
        const double w = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count));
        samples.push_back({w, analytic_psd(spec, w)});
      }
      const SlopeEstimate est = estimate_psd_slope(samples, lo, hi, cfg.bins_per_decade);
      report["zeta_measured"] = est.slope;
      report["measured_band_omega"] = {lo, hi};
      if (ne.admissible) report["difference"] = est.slope - ne.zeta;
    } catch (const Error& e) {
      report["zeta_measured"] = {{"error", e.what()}};
    }
  }
  const fs::path dir = prepare_out_dir(cfg);
  snapshot(dir, cfg);
  write_json(dir / "fit.json", report);
  out << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  CheckOptions opt;
  opt.quick = cfg.quick;
  opt.slow = cfg.slow;
  if (cfg.seed) opt.seed = *cfg.seed;
  opt.tolerance_scale = cfg.tolerance_scale;
  opt.threads = cfg.threads;
  opt.only = cfg.only;
  const fs::path dir = prepare_out_dir(cfg);
  snapshot(dir, cfg);

  bool all = true;
  json checks = json::array();
  run_checks(opt, [&](const CheckResult& r) {
    out << format_result_line(r) << "\n" << std::flush;
    all = all && r.passed;
    checks.push_back(to_json(r));
  });
  write_json(dir / "verify.json", {{"command", "verify"}, {"quick", opt.quick}, {"seed", opt.seed},
                                   {"tolerance_scale", opt.tolerance_scale}, {"passed", all},
                                   {"checks", checks}});
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace ctmc
