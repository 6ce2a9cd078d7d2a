#pragma once

// Acceptance checks shared by `ctmc_noise verify` and the acceptance test binary.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace ctmc {

struct CheckPart {
  std::string name;
  double value = 0.0;
  std::string target;  ///< human-readable acceptance condition
  bool passed = false;
};

struct CheckResult {
  int id = 0;
  std::string title;
  bool passed = false;
  bool skipped = false;
  std::string note;
  double seconds = 0.0;
  std::vector<CheckPart> parts;
  nlohmann::json detail = nlohmann::json::object();
};

struct CheckOptions {
  bool quick = false;  ///< small-n subset only
  bool slow = false;   ///< also run the slow-tagged extras
  std::uint64_t seed = 20240611;
  /// Multiplies every tolerance; values below 1 tighten the suite.
  double tolerance_scale = 1.0;
  unsigned threads = 0;
  std::set<int> only;  ///< empty: every criterion
};

/// Criteria run by --quick.
bool is_quick_check(int id);

/// Runs the selected checks in id order; `on_result` fires after each one.
std::vector<CheckResult> run_checks(const CheckOptions& opt,
                                    const std::function<void(const CheckResult&)>& on_result = {});

CheckResult run_check(int id, const CheckOptions& opt);

/// "PASS [3] title  (1.2 s)  part=value ..." on one line.
std::string format_result_line(const CheckResult& r);
nlohmann::json to_json(const CheckResult& r);

inline constexpr int kCheckCount = 10;

}  // namespace ctmc
