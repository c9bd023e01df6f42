#include "zc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace zc {
namespace {

using Layer = std::vector<std::vector<double>>;  // [m][k]

// One step of the slot recursion: g_n(m, k) = sum_c Binom(m, c; 1/n) *
// g_{n-1}(m - c, k - [c == 1]). Conditioning on the count c of pickers that
// landed in the newest slot leaves the remaining m - c pickers uniform over
// the other n - 1 slots.
Layer advance(const Layer& prev, int n, int M) {
  Layer cur(M + 1, std::vector<double>(M + 1, 0.0));
  const double p = 1.0 / n;
  for (int m = 0; m <= M; ++m) {
    if (n == 1) {  // every picker lands in the single slot
      const auto& src = prev[0];
      const int shift = (m == 1) ? 1 : 0;
      for (int k = 0; k + shift <= M; ++k) cur[m][k + shift] += src[k];
      continue;
    }
    double w = std::pow(1.0 - p, m);  // Binom(m, 0)
    for (int c = 0; c <= m; ++c) {
      if (w > 0.0) {
        const auto& src = prev[m - c];
        const int shift = (c == 1) ? 1 : 0;
        for (int k = 0; k + shift <= M; ++k) cur[m][k + shift] += w * src[k];
      }
      w *= static_cast<double>(m - c) / (c + 1) * p / (1.0 - p);
    }
  }
  return cur;
}

Layer base_layer(int M) {
  Layer g0(M + 1, std::vector<double>(M + 1, 0.0));
  g0[0][0] = 1.0;  // zero slots hold zero pickers, zero singletons
  return g0;
}

void check_args(int N, int M) {
  if (N < 1) throw std::invalid_argument("analysis: N must be >= 1");
  if (M < 0) throw std::invalid_argument("analysis: M must be >= 0");
}

}  // namespace

std::vector<double> singleton_pmf(int N, int M) {
  check_args(N, M);
  Layer g = base_layer(M);
  for (int n = 1; n <= N; ++n) g = advance(g, n, M);
  return g[M];
}

double reservation_probability(int N, int M, int k) {
  check_args(N, M);
  if (k < 0 || k > M)
    throw std::invalid_argument("reservation_probability: k outside [0, M]");
  return singleton_pmf(N, M)[k];
}

std::vector<std::uint64_t> singleton_counts_exact(int N, int M) {
  check_args(N, M);
  // Same recursion over exact assignment counts:
  //   cnt_n(m, k) = sum_c C(m, c) cnt_{n-1}(m - c, k - [c == 1]),
  // totals per (n, m) equal n^m, so N^M must fit in 64 bits.
  double total = std::pow(static_cast<double>(N), M);
  if (total >= 9.2e18)
    throw std::invalid_argument("singleton_counts_exact: N^M exceeds 64 bits");
  using Row = std::vector<std::uint64_t>;
  std::vector<Row> g(M + 1, Row(M + 1, 0));
  g[0][0] = 1;
  // Pascal triangle for C(m, c).
  std::vector<std::vector<std::uint64_t>> C(M + 1, Row(M + 1, 0));
  for (int m = 0; m <= M; ++m) {
    C[m][0] = 1;
    for (int c = 1; c <= m; ++c) C[m][c] = C[m - 1][c - 1] + C[m - 1][c];
  }
  for (int n = 1; n <= N; ++n) {
    std::vector<Row> cur(M + 1, Row(M + 1, 0));
    for (int m = 0; m <= M; ++m)
      for (int c = 0; c <= m; ++c) {
        const int shift = (c == 1) ? 1 : 0;
        for (int k = 0; k + shift <= M; ++k)
          cur[m][k + shift] += C[m][c] * g[m - c][k];
      }
    g = std::move(cur);
  }
  return g[M];
}

ReservationChain build_chain(int N, int M) {
  check_args(N, M);
  if (M > N)
    throw std::invalid_argument(
        "build_chain: M > N has no collision-free state; the chain would "
        "never absorb");
  ReservationChain chain;
  chain.N = N;
  chain.M = M;
  chain.P.assign(M + 1, std::vector<double>(M + 1, 0.0));
  chain.P[M][M] = 1.0;
  // Row m needs the pmf for N - m slots and M - m pickers; one sweep of the
  // slot recursion yields every (n, M - N + n) diagonal entry on the way up.
  Layer g = base_layer(M);
  if (N == M) chain.P[M][M] = 1.0;
  for (int n = 1; n <= N; ++n) {
    g = advance(g, n, M);
    const int m = N - n;  // row with N - m == n remaining slots
    if (m >= 0 && m < M) {
      const auto& pk = g[M - m];
      for (int k = 0; k <= M - m; ++k) chain.P[m][m + k] = pk[k];
    }
  }
  return chain;
}

double expected_cycles(const ReservationChain& chain) {
  const int M = chain.M;
  if (M == 0) return 0.0;
  std::vector<double> beta(M + 1, 0.0);
  for (int i = M - 1; i >= 0; --i) {
    double s = 1.0;
    for (int j = i + 1; j <= M; ++j) s += chain.P[i][j] * beta[j];
    const double stay = 1.0 - chain.P[i][i];
    if (stay <= 0.0)
      throw std::runtime_error("expected_cycles: degenerate self-loop");
    beta[i] = s / stay;
  }
  return beta[0];
}

double upper_bound_time_s(const ReservationChain& chain,
                          const TimingParameters& t) {
  t.validate();
  const double per_cycle_us = (t.t_s + t.t_v) * chain.N +
                              (std::max(t.t_g, t.t_b) - t.t_v) * chain.M;
  return per_cycle_us * expected_cycles(chain) / 1e6;
}

ConvergenceDistributions absorption_distributions(const ReservationChain& chain,
                                                  double epsilon, int cap) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("absorption_distributions: epsilon in (0,1)");
  const int M = chain.M;
  ConvergenceDistributions out;
  out.truncation_epsilon = epsilon;
  std::vector<double> pi(M + 1, 0.0);
  pi[0] = 1.0;
  out.pi.push_back(pi);
  out.absorption_cdf.push_back(pi[M]);
  int n = 0;
  while (1.0 - out.absorption_cdf.back() >= epsilon) {
    if (++n > cap)
      throw std::runtime_error(
          "no convergence: absorption tail mass above epsilon after " +
          std::to_string(cap) + " cycles");
    std::vector<double> next(M + 1, 0.0);
    for (int a = 0; a <= M; ++a) {
      if (pi[a] == 0.0) continue;
      for (int b = a; b <= M; ++b) next[b] += pi[a] * chain.P[a][b];
    }
    pi = std::move(next);
    out.pi.push_back(pi);
    out.absorption_cdf.push_back(pi[M]);
  }
  return out;
}

double exact_expected_time_s(const ReservationChain& chain,
                             const TimingParameters& t, double epsilon,
                             int cap) {
  t.validate();
  const int N = chain.N;
  const int M = chain.M;
  if (M == 0) return 0.0;
  const auto dist = absorption_distributions(chain, epsilon, cap);
  const int lmax = static_cast<int>(dist.pi.size()) - 1;

  // First-passage kernel: A[s][k] = P(absorbed within s more cycles | z = k),
  // so d_s(k) = A[s][k] - A[s-1][k] is the probability of absorbing in
  // exactly s more cycles. Joint law P(z_n = k, L = l) = pi_n(k) d_{l-n}(k)
  // for k < M, which conditions the per-cycle slot composition on L = l.
  std::vector<std::vector<double>> A(lmax + 1,
                                     std::vector<double>(M + 1, 0.0));
  A[0][M] = 1.0;
  for (int s = 1; s <= lmax; ++s)
    for (int a = 0; a <= M; ++a) {
      double acc = 0.0;
      for (int b = a; b <= M; ++b) acc += chain.P[a][b] * A[s - 1][b];
      A[s][a] = acc;
    }

  // E[idle mini-slots in a cycle | z = k] = (N - k) (1 - 1/(N - k))^{M - k}:
  // each of the N - k open slots stays empty iff all M - k contenders avoid
  // it.
  std::vector<double> empty_given(M, 0.0);
  for (int k = 0; k < M; ++k) {
    const int open = N - k;
    empty_given[k] =
        open > 0 ? open * std::pow(1.0 - 1.0 / open, M - k) : 0.0;
  }

  double total_us = 0.0;
  for (int l = 1; l <= lmax; ++l) {
    const double pl = dist.absorption_cdf[l] - dist.absorption_cdf[l - 1];
    if (pl <= 0.0) continue;
    double inner = 0.0;  // E[T | L = l] * P(L = l), accumulated cycle by cycle
    for (int n = 1; n <= l; ++n) {
      // E[G_n; L = l]: successful slots during cycle n equal z_n.
      double eg = 0.0;
      if (n == l) {
        eg = static_cast<double>(M) * pl;
      } else {
        const int s = l - n;
        for (int k = 0; k < M; ++k)
          eg += k * dist.pi[n][k] * (A[s][k] - A[s - 1][k]);
      }
      // E[V_n; L = l]: idle mini-slots given the cycle starts at z_{n-1}.
      double ev = 0.0;
      {
        const int s = l - (n - 1);
        for (int k = 0; k < M; ++k)
          ev += empty_given[k] * dist.pi[n - 1][k] * (A[s][k] - A[s - 1][k]);
      }
      inner += ((t.t_s + t.t_b) * N) * pl + (t.t_g - t.t_b) * eg +
               (t.t_v - t.t_b) * ev;
    }
    total_us += inner;
  }
  return total_us / 1e6;
}

}  // namespace zc
