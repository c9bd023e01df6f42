#pragma once

#include <cstdint>
#include <vector>

#include "zc/timing.hpp"

namespace zc {

// pmf over k of "exactly k singleton slots" when M stations each pick one of
// N slots independently and uniformly. Computed by a slot-by-slot conditional
// binomial recursion: all terms are nonnegative, so the result is stable for
// large N, M (a direct inclusion-exclusion evaluation cancels catastrophically
// past N ~ 30).
std::vector<double> singleton_pmf(int N, int M);

// p_{N,M}(k): probability that exactly k of the M pickers are alone in their
// slot. Throws std::invalid_argument for N < 1, M < 0, or k outside [0, M].
double reservation_probability(int N, int M, int k);

// Exact integer census of the same quantity for small sizes: counts[k] is the
// number of the N^M equally likely assignments with exactly k singleton
// slots. Requires N^M < 2^63 (N, M <= 12 is always safe); used as an
// arithmetic-error-free oracle.
std::vector<std::uint64_t> singleton_counts_exact(int N, int M);

// Markov chain of the reserved-station count: state m in 0..M, transition
// P[m][m+k] = p_{N-m, M-m}(k). State M is absorbing.
struct ReservationChain {
  int N = 0;
  int M = 0;
  std::vector<std::vector<double>> P;
};

// Throws std::invalid_argument if N < 1, M < 0, or M > N (with M > N no
// collision-free state exists and the chain never absorbs).
ReservationChain build_chain(int N, int M);

// Expected number of cycles to reach the all-reserved state from m = 0,
// by back-substitution of beta(i) = (1 + sum_{j>i} P[i][j] beta(j)) /
// (1 - P[i][i]) with beta(M) = 0. Returns 0 for M = 0.
double expected_cycles(const ReservationChain& chain);

// Upper bound on the expected convergence time in seconds:
//   ((t_s + t_v) N + (max(t_g, t_b) - t_v) M) * expected_cycles.
double upper_bound_time_s(const ReservationChain& chain,
                          const TimingParameters& t);

struct ConvergenceDistributions {
  std::vector<std::vector<double>> pi;  // pi[n][k] = P(z_n = k)
  std::vector<double> absorption_cdf;   // P(L <= n) = pi[n][M]
  double truncation_epsilon = 0;
};

// Forward distributions of the chain until the unabsorbed tail mass drops
// below epsilon. Throws std::runtime_error("no convergence ...") if that does
// not happen within cap steps.
ConvergenceDistributions absorption_distributions(const ReservationChain& chain,
                                                  double epsilon = 1e-9,
                                                  int cap = 10000);

// Exact expected convergence time in seconds: sums over the absorption-cycle
// pmf P(L = l) the expected per-cycle slot composition
//   E[T | L = l] = sum_n (t_s + t_b) N + (t_g - t_b) E[G_n | L] +
//                        (t_v - t_b) E[V_n | L]
// where the conditioned occupancy distributions come from forward filtering
// combined with the first-passage kernel to absorption. Truncation and cap as
// in absorption_distributions.
double exact_expected_time_s(const ReservationChain& chain,
                             const TimingParameters& t, double epsilon = 1e-9,
                             int cap = 10000);

}  // namespace zc
