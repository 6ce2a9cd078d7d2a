// ctmc_noise: spectra, simulations, scaling fits and acceptance checks for
// reversible continuous-time Markov chains.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "ctmc/commands.hpp"
#include "ctmc/generator.hpp"
#include "ctmc/run_config.hpp"

namespace {

struct ValueFlag {
  const char* name;
  const char* help;
};

constexpr ValueFlag kCommon[] = {
    {"model", "mm1 | ring | star | telegraph"},
    {"n", "number of states (star: nodes including the center)"},
    {"eps", "heavy-traffic offset, mu = lambda (1 + eps) for mm1"},
    {"lambda", "birth / clockwise / center-to-leaf rate"},
    {"mu", "death / counterclockwise / leaf-to-center rate"},
    {"seed", "master RNG seed"},
    {"out-dir", "output directory"},
    {"realizations", "number of averaged simulation runs"},
    {"t-end", "simulation horizon"},
    {"dt", "resampling step"},
    {"threads", "worker threads for simulations (0 = all cores)"},
};

constexpr ValueFlag kExtra[] = {
    {"normalization", "raw | energy (spectrum)"},
    {"eigen-file", "eigenstructure CSV with omega and gamma_sq columns (fit)"},
    {"window-first", "first mode index of the fit window (fit)"},
    {"window-last", "last mode index of the fit window (fit)"},
    {"bins-per-decade", "log bins per decade for slope estimates"},
    {"trajectory-events", "events kept in trajectory.csv (simulate)"},
    {"tolerance-scale", "multiply every acceptance tolerance (verify)"},
    {"only", "comma-separated check ids (verify)"},
};

struct Subcommand {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::string config_file;
  bool quick = false;
  bool slow = false;
};

void add_flags(Subcommand& sc) {
  for (const auto& f : kCommon) sc.app->add_option(std::string("--") + f.name, sc.values[f.name], f.help);
  for (const auto& f : kExtra) sc.app->add_option(std::string("--") + f.name, sc.values[f.name], f.help);
  sc.app->add_option("--config", sc.config_file, "flat key = value config file; flags override it");
  sc.app->add_flag("--quick", sc.quick, "small-n subset of the checks (verify)");
  sc.app->add_flag("--slow", sc.slow, "include slow-tagged checks (verify)");
}

ctmc::RunConfig resolve(const Subcommand& sc) {
  ctmc::ConfigPairs pairs;
  if (!sc.config_file.empty()) pairs = ctmc::read_config_file(sc.config_file);
  ctmc::ConfigPairs flags;
  for (const auto& [key, value] : sc.values)
    if (sc.app->count("--" + key) > 0) flags[key] = value;
  if (sc.quick) flags["quick"] = "true";
  if (sc.slow) flags["slow"] = "true";
  return ctmc::RunConfig::from_pairs(ctmc::merge_pairs(pairs, flags));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis and simulation of 1/f-type noise in reversible Markov chains"};
  app.require_subcommand(1);

  std::map<std::string, Subcommand> subs;
  const std::pair<const char*, const char*> names[] = {
      {"spectrum", "eigenstructure and analytic PSD of a model"},
      {"simulate", "Gillespie simulation and averaged periodogram"},
      {"fit", "power-law fits of the eigenstructure and predicted noise exponent"},
      {"verify", "run the acceptance checks"},
  };
  for (const auto& [name, help] : names) {
    Subcommand& sc = subs[name];
    sc.app = app.add_subcommand(name, help);
    add_flags(sc);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ctmc::kExitOk : ctmc::kExitInvalidInput;
  }

  try {
    for (auto& [name, sc] : subs) {
      if (!sc.app->parsed()) continue;
      const ctmc::RunConfig cfg = resolve(sc);
      if (name == "spectrum") return ctmc::cmd_spectrum(cfg, std::cout);
      if (name == "simulate") return ctmc::cmd_simulate(cfg, std::cout);
      if (name == "fit") return ctmc::cmd_fit(cfg, std::cout);
      return ctmc::cmd_verify(cfg, std::cout);
    }
  } catch (const ctmc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ctmc::kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ctmc::kExitInvalidInput;
  }
  return ctmc::kExitInvalidInput;
}
