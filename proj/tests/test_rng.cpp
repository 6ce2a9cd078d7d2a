#include <cmath>
#include <set>

#include "doctest.h"
#include "ctmc/rng.hpp"

using namespace ctmc;

TEST_CASE("same seed and stream give the same draws") {
  Rng a(42, 3), b(42, 3);
  for (int i = 0; i < 1000; ++i) CHECK(a.engine()() == b.engine()());
}

TEST_CASE("streams and seeds differ") {
  std::set<std::uint64_t> first;
  for (std::uint64_t s = 0; s < 8; ++s) first.insert(Rng(7, s).engine()());
  for (std::uint64_t seed = 0; seed < 8; ++seed) first.insert(Rng(seed + 100, 0).engine()());
  CHECK(first.size() == 16);
}

TEST_CASE("stream i is i jumps from the seeded engine") {
  Xoshiro256pp e(99);
  e.jump();
  e.jump();
  Rng r(99, 2);
  for (int i = 0; i < 10; ++i) CHECK(e() == r.engine()());
}

TEST_CASE("uniform ranges and exponential mean") {
  Rng r(1, 0);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    const double v = r.uniform_open_closed();
    CHECK_UNARY(u >= 0.0);
    CHECK_UNARY(u < 1.0);
    CHECK_UNARY(v > 0.0);
    CHECK_UNARY(v <= 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += r.exponential(4.0);
  }
  CHECK(lo < 1e-4);
  CHECK(hi > 1.0 - 1e-4);
  CHECK(sum / n == doctest::Approx(0.25).epsilon(0.01));
}
