#pragma once

// Test-only oracles, kept independent of the library's shortest-path
// implementation.

#include <vector>

#include "warplab/warp.hpp"

namespace warplab::testsupport {

/// Brute-force warped distance: the infimum of
///   sum_i |gamma_i| + scale·d(gamma_i x_i, x_{i+1})
/// over all finite sequences with |gamma_i| <= 1, computed as the min-plus
/// closure of the one-step cost matrix. Off-diagonal one-step costs are
/// strictly positive, so the closure stabilizes after at most n-1 rounds.
template <class S>
DistanceMatrix<S> fact1_infimum(const WarpSystem<S>& sys) {
  const int n = sys.size();
  std::vector<S> cost(std::size_t(n) * n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      S best = sys.space.scaled(u, v);  // gamma = id
      for (int s = 0; s < sys.gens.size(); ++s) {
        if (sys.gens.is_identity(s)) continue;
        int su = sys.action[s][u];
        if (su < 0) continue;
        S cand = S(1) + sys.space.scaled(su, v);
        if (cand < best) best = std::move(cand);
      }
      cost[std::size_t(u) * n + v] = std::move(best);
    }

  std::vector<S> dist = cost;
  for (int round = 0; round < n; ++round) {
    bool changed = false;
    std::vector<S> next = dist;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        S& cur = next[std::size_t(i) * n + j];
        for (int k = 0; k < n; ++k) {
          S cand = dist[std::size_t(i) * n + k] + cost[std::size_t(k) * n + j];
          if (cand < cur) {
            cur = std::move(cand);
            changed = true;
          }
        }
      }
    dist = std::move(next);
    if (!changed) break;
  }
  DistanceMatrix<S> out;
  out.n = n;
  out.values = std::move(dist);
  out.provenance = Provenance::warped;
  return out;
}

/// Literal depth-first enumeration of Fact-1 sequences with best-cost
/// pruning; exponential, for tiny instances only.
template <class S>
S fact1_enumerate_pair(const WarpSystem<S>& sys, int x, int x2) {
  const int n = sys.size();
  S best = sys.space.scaled(x, x2);
  std::vector<std::pair<int, S>> stack;  // (current point, accumulated cost)
  stack.emplace_back(x, S{});
  while (!stack.empty()) {
    auto [u, acc] = stack.back();
    stack.pop_back();
    for (int s = 0; s < sys.gens.size(); ++s) {
      int gu = sys.gens.is_identity(s) ? u : sys.action[s][u];
      if (gu < 0) continue;
      S step_base = acc + (sys.gens.is_identity(s) ? S{} : S(1));
      // close the sequence at x2
      S direct = step_base + sys.space.scaled(gu, x2);
      if (direct < best) best = direct;
      // or hop to an intermediate point and continue
      for (int v = 0; v < n; ++v) {
        if (v == gu) continue;
        S cand = step_base + sys.space.scaled(gu, v);
        if (cand < best) stack.emplace_back(v, cand);
      }
      if (!sys.gens.is_identity(s) && step_base < best)
        stack.emplace_back(gu, step_base);
    }
  }
  return best;
}

}  // namespace warplab::testsupport
