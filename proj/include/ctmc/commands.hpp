#pragma once

// Pipelines behind the ctmc_noise subcommands. Each writes into cfg.out_dir
// (config.txt snapshot, CSVs, JSON) and returns the process exit code:
// 0 success, 1 failed check, 2 invalid input.

#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "ctmc/run_config.hpp"
#include "ctmc/spectral.hpp"

namespace ctmc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidInput = 2;

/// eigenstructure.csv (k, omega, gamma_sq, multiplicity), psd.csv (omega, S), summary.json.
int cmd_spectrum(const RunConfig& cfg, std::ostream& out);
/// periodogram.csv (freq, power), trajectory.csv (time, state), comparison.json, summary.json.
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
/// fit.json with the exponent fits, admissibility, predicted and measured zeta.
int cmd_fit(const RunConfig& cfg, std::ostream& out);
/// verify.json with one entry per acceptance check.
int cmd_verify(const RunConfig& cfg, std::ostream& out);

/// Distinct line spectrum of the configured model with x_q = q.
SpectralAnalysis model_analysis(const RunConfig& cfg);

/// Reads k, omega and gamma_sq (or gamma) columns; extra columns are ignored.
std::vector<SpectralLine> read_eigenstructure_csv(const std::string& path);

}  // namespace ctmc
