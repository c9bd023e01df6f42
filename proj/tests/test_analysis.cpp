#include "doctest.h"
#include "zc/analysis.hpp"

#include <stdexcept>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace {

// Independent oracle: enumerate all N^M slot assignments and count how many
// have exactly k singleton slots.
std::vector<double> brute_force_pmf(int N, int M) {
  std::vector<double> pmf(M + 1, 0.0);
  std::vector<int> pick(M, 0);
  double total = std::pow(static_cast<double>(N), M);
  for (;;) {
    std::vector<int> occ(N, 0);
    for (int i = 0; i < M; ++i) ++occ[pick[i]];
    int singles = 0;
    for (int c : occ) singles += c == 1;
    pmf[singles] += 1.0;
    int i = M - 1;
    while (i >= 0 && pick[i] == N - 1) pick[i--] = 0;
    if (i < 0) break;
    ++pick[i];
  }
  for (auto& p : pmf) p /= total;
  return pmf;
}

// Monte-Carlo oracle for the abstract cycle process: each cycle the
// unreserved stations pick uniformly among the unreserved slots; sole pickers
// reserve. Returns cycles to absorb and the accumulated wall time.
struct CycleSample {
  long long cycles = 0;
  double time_us = 0;
};

CycleSample run_abstract_process(int N, int M, const zc::TimingParameters& t,
                                 std::mt19937_64& gen) {
  CycleSample out;
  int reserved = 0;
  std::vector<int> occ(N, 0);
  while (reserved < M) {
    const int free = N - reserved;
    const int pickers = M - reserved;
    std::fill(occ.begin(), occ.begin() + free, 0);
    std::uniform_int_distribution<int> pick(0, free - 1);
    for (int i = 0; i < pickers; ++i) ++occ[pick(gen)];
    int newly = 0, collided = 0, idle = 0;
    for (int s = 0; s < free; ++s) {
      if (occ[s] == 1) ++newly;
      else if (occ[s] == 0) ++idle;
      else ++collided;
    }
    out.time_us += t.t_s * N + t.t_g * (reserved + newly) + t.t_v * idle +
                   t.t_b * collided;
    reserved += newly;
    ++out.cycles;
  }
  return out;
}

struct MeanCi {
  double mean = 0;
  double half99 = 0;  // 99% confidence half-width
};

template <class F>
MeanCi monte_carlo(int runs, F&& draw) {
  double sum = 0, sumsq = 0;
  for (int i = 0; i < runs; ++i) {
    const double x = draw();
    sum += x;
    sumsq += x * x;
  }
  MeanCi out;
  out.mean = sum / runs;
  const double var = (sumsq - sum * sum / runs) / (runs - 1);
  out.half99 = 2.576 * std::sqrt(var / runs);
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("singleton pmf matches exhaustive enumeration up to N = M = 6") {
  for (int N = 1; N <= 6; ++N)
    for (int M = 1; M <= N; ++M) {
      const auto oracle = brute_force_pmf(N, M);
      double sum = 0;
      for (int k = 0; k <= M; ++k) {
        const double p = zc::reservation_probability(N, M, k);
        CHECK(std::abs(p - oracle[k]) < 1e-12);
        sum += p;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("singleton pmf matches the exact integer census up to 9") {
  for (int N = 1; N <= 9; ++N)
    for (int M = 0; M <= N; ++M) {
      const auto counts = zc::singleton_counts_exact(N, M);
      std::uint64_t total = 0;
      for (auto c : counts) total += c;
      std::uint64_t pow = 1;
      for (int i = 0; i < M; ++i) pow *= static_cast<std::uint64_t>(N);
      CHECK(total == pow);
      for (int k = 0; k <= M; ++k) {
        const double p = static_cast<double>(counts[k]) / static_cast<double>(pow);
        CHECK(zc::reservation_probability(N, M, k) ==
              doctest::Approx(p).epsilon(1e-12));
      }
    }
}

TEST_CASE("pmf argument validation") {
  CHECK_THROWS_AS(zc::reservation_probability(0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(zc::reservation_probability(4, -1, 0), std::invalid_argument);
  CHECK_THROWS_AS(zc::reservation_probability(4, 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(zc::singleton_counts_exact(64, 32), std::invalid_argument);
}

TEST_CASE("reservation chain structure") {
  for (auto [N, M] : {std::pair{1, 1}, {2, 2}, {4, 3}, {8, 8}, {16, 11}}) {
    const auto chain = zc::build_chain(N, M);
    REQUIRE(static_cast<int>(chain.P.size()) == M + 1);
    for (int m = 0; m <= M; ++m) {
      double row = 0;
      for (int j = 0; j <= M; ++j) {
        CHECK(chain.P[m][j] >= 0.0);
        if (j < m) CHECK(chain.P[m][j] == 0.0);  // reservations never regress
        row += chain.P[m][j];
      }
      CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(chain.P[M][M] == doctest::Approx(1.0));  // absorbing
  }
  CHECK_THROWS_AS(zc::build_chain(4, 5), std::invalid_argument);
}

TEST_CASE("chain example rows") {
  const auto c11 = zc::build_chain(1, 1);
  CHECK(c11.P[0][1] == doctest::Approx(1.0));
  CHECK(c11.P[1][1] == doctest::Approx(1.0));

  const auto c22 = zc::build_chain(2, 2);
  CHECK(c22.P[0][0] == doctest::Approx(0.5));
  CHECK(c22.P[0][2] == doctest::Approx(0.5));
  CHECK(c22.P[2][2] == doctest::Approx(1.0));

  // Each interior row is the singleton pmf of the reduced occupancy problem.
  const auto c43 = zc::build_chain(4, 3);
  for (int m = 0; m <= 3; ++m) {
    const auto oracle = brute_force_pmf(4 - m, 3 - m);
    for (int k = 0; k <= 3 - m; ++k)
      CHECK(c43.P[m][m + k] == doctest::Approx(oracle[k]).epsilon(1e-12));
  }
}

TEST_CASE("expected cycles: small exact values and the 128-station figure") {
  CHECK(zc::expected_cycles(zc::build_chain(1, 1)) == doctest::Approx(1.0));
  CHECK(zc::expected_cycles(zc::build_chain(2, 2)) == doctest::Approx(2.0));
  CHECK(zc::expected_cycles(zc::build_chain(8, 0)) == doctest::Approx(0.0));
  // Frozen from the recursion; cross-checked by the Monte-Carlo oracle below.
  CHECK(zc::expected_cycles(zc::build_chain(128, 128)) ==
        doctest::Approx(10.1730344).epsilon(1e-7));
}

TEST_CASE("expected cycles is non-decreasing in M") {
  for (int N : {8, 16, 32}) {
    double prev = 0;
    for (int M = 1; M <= N; ++M) {
      const double e = zc::expected_cycles(zc::build_chain(N, M));
      CHECK(e >= prev - 1e-12);
      prev = e;
    }
  }
}

TEST_CASE("expected cycles agrees with the Monte-Carlo oracle") {
  const auto t = zc::TimingParameters::explicit_values(100, 120, 20, 0);
  std::mt19937_64 gen(20240817);
  for (auto [N, M] : {std::pair{8, 4}, {16, 16}, {32, 24}}) {
    const auto mc = monte_carlo(100000, [&] {
      return static_cast<double>(run_abstract_process(N, M, t, gen).cycles);
    });
    const double exact = zc::expected_cycles(zc::build_chain(N, M));
    CHECK(std::abs(exact - mc.mean) <= mc.half99);
  }
}

TEST_CASE("upper bound: direct substitution and boundaries") {
  // E[L] = 2 cycles of (2 idle + 2 busy) slots.
  const auto t = zc::TimingParameters::explicit_values(1000, 1000, 20, 0);
  CHECK(zc::upper_bound_time_s(zc::build_chain(2, 2), t) ==
        doctest::Approx(0.004).epsilon(1e-12));
  CHECK(zc::upper_bound_time_s(zc::build_chain(8, 0), t) == doctest::Approx(0.0));
}

TEST_CASE("exact expected time: one station converges in one slot") {
  for (auto t : {zc::TimingParameters::explicit_values(2150, 2266, 20, 0),
                 zc::TimingParameters::explicit_values(500, 700, 20, 5)}) {
    CHECK(zc::exact_expected_time_s(zc::build_chain(1, 1), t) ==
          doctest::Approx((t.t_s + t.t_g) / 1e6).epsilon(1e-9));
  }
}

TEST_CASE("exact expected time agrees with the Monte-Carlo oracle") {
  const auto t = zc::TimingParameters::explicit_values(2150, 2266, 20, 0);
  std::mt19937_64 gen(991);
  for (auto [N, M] : {std::pair{4, 3}, {16, 16}}) {
    const auto mc = monte_carlo(1000000, [&] {
      return run_abstract_process(N, M, t, gen).time_us / 1e6;
    });
    const double exact =
        zc::exact_expected_time_s(zc::build_chain(N, M), t, 1e-12);
    CHECK(std::abs(exact - mc.mean) <= mc.half99);
  }
}

TEST_CASE("exact expected time never exceeds the upper bound") {
  const auto t = zc::TimingParameters::explicit_values(2150, 2266, 20, 0);
  for (int N : {8, 16, 32, 64}) {
    for (int M : {1, N / 4, N / 2, 3 * N / 4, N}) {
      if (M < 1) continue;
      const auto chain = zc::build_chain(N, M);
      CHECK(zc::exact_expected_time_s(chain, t) <=
            zc::upper_bound_time_s(chain, t) + 1e-12);
    }
  }
}

TEST_CASE("absorption distributions: cdf is monotone and reaches 1") {
  const auto d = zc::absorption_distributions(zc::build_chain(16, 12));
  double prev = 0;
  for (double c : d.absorption_cdf) {
    CHECK(c >= prev - 1e-15);
    prev = c;
  }
  CHECK(d.absorption_cdf.back() == doctest::Approx(1.0).epsilon(1e-8));
  // A cap too small to drain the tail mass is an error, not a silent result.
  CHECK_THROWS_AS(zc::absorption_distributions(zc::build_chain(16, 12), 1e-9, 2),
                  std::runtime_error);
}

TEST_SUITE_END();
