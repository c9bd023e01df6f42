#include "doctest.h"
#include "zc/rng.hpp"

#include <vector>

TEST_SUITE_BEGIN("rng");

TEST_CASE("same seed reproduces the same sequence") {
  zc::Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("distinct seeds and streams diverge") {
  zc::Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += a.next() == b.next();
  CHECK(same == 0);

  auto s0 = zc::Rng::stream(7, 0);
  auto s1 = zc::Rng::stream(7, 1);
  same = 0;
  for (int i = 0; i < 64; ++i) same += s0.next() == s1.next();
  CHECK(same == 0);
}

TEST_CASE("below stays in range and is roughly uniform") {
  zc::Rng rng(123);
  const int bins = 16;
  std::vector<int> count(bins, 0);
  const int draws = 160000;
  for (int i = 0; i < draws; ++i) {
    const auto v = rng.below(bins);
    REQUIRE(v < static_cast<std::uint64_t>(bins));
    ++count[v];
  }
  // chi-square, 15 dof; 99.9% quantile ~ 37.7
  const double expect = static_cast<double>(draws) / bins;
  double chi2 = 0;
  for (int c : count) chi2 += (c - expect) * (c - expect) / expect;
  CHECK(chi2 < 37.7);
}

TEST_CASE("unit stays in [0, 1) and chance handles boundaries") {
  zc::Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  CHECK_FALSE(rng.chance(0.0));
  CHECK(rng.chance(1.0));
}

TEST_SUITE_END();
