#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "svx/rng.hpp"

using namespace svx;

TEST_CASE("derive_seed is deterministic and separates streams") {
  CHECK(derive_seed(42, 1) == derive_seed(42, 1));
  CHECK(derive_seed(42, 1) != derive_seed(42, 2));
  CHECK(derive_seed(42, 1) != derive_seed(43, 1));
  CHECK(derive_seed(0, 0) != 0);
}

TEST_CASE("rng reproduces the same sequence per seed") {
  Rng a(123), b(123), c(124);
  bool any_diff = false;
  for (int i = 0; i < 100; ++i) {
    double va = a.uniform();
    CHECK(va == b.uniform());
    if (va != c.uniform()) any_diff = true;
    CHECK(va > 0.0);
    CHECK(va < 1.0);
  }
  CHECK(any_diff);
}

TEST_CASE("normal draws have the right moments") {
  Rng rng(7);
  const int n = 200000;
  double s = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal();
    s += x;
    s2 += x * x;
    s3 += x * x * x;
    s4 += x * x * x * x;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(s3 / n) < 0.03);
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("mc_slices partitions the total deterministically") {
  auto slices = mc_slices(1000003, 99, kStreamLimitMc);
  CHECK(slices.size() == kMcStreams);
  std::uint64_t sum = 0, expected_begin = 0;
  for (const auto& s : slices) {
    CHECK(s.begin == expected_begin);
    expected_begin += s.count;
    sum += s.count;
  }
  CHECK(sum == 1000003);

  auto again = mc_slices(1000003, 99, kStreamLimitMc);
  for (std::size_t i = 0; i < slices.size(); ++i) {
    CHECK(slices[i].seed == again[i].seed);
    CHECK(slices[i].count == again[i].count);
  }
  auto other = mc_slices(1000003, 100, kStreamLimitMc);
  CHECK(other[0].seed != slices[0].seed);
}

TEST_CASE("small totals still cover every iteration") {
  auto slices = mc_slices(5, 1, kStreamLimitMc);
  std::uint64_t sum = 0;
  for (const auto& s : slices) sum += s.count;
  CHECK(sum == 5);
}
