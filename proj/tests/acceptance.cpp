// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
//
//   acceptance [--only N]... [--slow] [--seed S]

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "ctmc/checks.hpp"

int main(int argc, char** argv) {
  ctmc::CheckOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      opt.only.insert(std::atoi(argv[++i]));
    } else if (!std::strcmp(argv[i], "--slow")) {
      opt.slow = true;
    } else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) {
      opt.seed = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]... [--slow] [--seed S]\n", argv[0]);
      return 2;
    }
  }
  bool all = true;
  ctmc::run_checks(opt, [&](const ctmc::CheckResult& r) {
    std::printf("%s\n", ctmc::format_result_line(r).c_str());
    std::fflush(stdout);
    all = all && r.passed;
  });
  return all ? 0 : 1;
}
