#pragma once

// Flat key-value run configuration.
//
// Grammar, one entry per line:
//   line    := blank | comment | entry
//   comment := '#' anything
//   entry   := key ws* '=' ws* value ws* [comment]
//   key     := [a-z0-9-]+   (the long flag name without the leading dashes)
// Keys may appear once. Command-line flags override file entries.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace ctmc {

enum class ModelKind { mm1, ring, star, telegraph };

std::string to_string(ModelKind k);
ModelKind parse_model_kind(const std::string& s);

using ConfigPairs = std::map<std::string, std::string>;

struct RunConfig {
  ModelKind model = ModelKind::mm1;
  /// States: retained queue levels (mm1), ring sites, star nodes including the center.
  std::size_t n = 1000;
  double eps = 1e-4;
  std::optional<double> lambda;
  std::optional<double> mu;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::size_t realizations = 8;
  std::optional<double> t_end;
  std::optional<double> dt;
  unsigned threads = 0;
  std::string normalization = "raw";
  std::string eigen_file;
  std::optional<std::size_t> window_first;
  std::optional<std::size_t> window_last;
  std::size_t bins_per_decade = 10;
  std::size_t trajectory_events = 10000;
  bool quick = false;
  bool slow = false;
  double tolerance_scale = 1.0;
  std::set<int> only;

  /// Birth rate; 1 unless given.
  double birth_rate() const { return lambda.value_or(1.0); }
  /// Death rate; for mm1 defaults to lambda (1 + eps), otherwise 1.
  double death_rate() const;

  static RunConfig from_pairs(const ConfigPairs& pairs);
  /// Every field with its effective value; doubles use 17 significant digits.
  ConfigPairs to_pairs() const;
  std::string to_text() const;
};

ConfigPairs parse_config_text(std::string_view text);
ConfigPairs read_config_file(const std::string& path);

/// Entries of `overrides` replace those of `base`.
ConfigPairs merge_pairs(ConfigPairs base, const ConfigPairs& overrides);

std::string format_double(double v);

}  // namespace ctmc
