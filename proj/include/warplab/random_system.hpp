#pragma once

#include <random>

#include "warplab/metric.hpp"

namespace warplab {

enum class RandomSystemKind {
  kBallMetric,     // entries in [1,2], random permutation action (L <= 2)
  kGraphMetric,    // shortest-path closure of a random weighted graph
  kIsometric,      // circulant shortest-path metric with rotation action
};

/// Seeded random warp systems with dyadic entries (denominators dividing 64)
/// so that exact-path sums stay small and sandwich checks can use integer
/// powers. Generators are permutation pairs plus the identity.
inline WarpSystem<Rat> random_warp_system(std::uint64_t seed, int n,
                                          int gen_pairs,
                                          RandomSystemKind kind,
                                          Rat scale = Rat(1)) {
  std::mt19937_64 rng(seed);
  auto dyadic = [&](double lo, double hi) {
    // multiples of 1/64 in [lo, hi]
    std::uniform_int_distribution<long long> pick(
        static_cast<long long>(lo * 64), static_cast<long long>(hi * 64));
    return Rat(CheckedInt(pick(rng)), CheckedInt(64));
  };
  auto random_perm = [&](int size) {
    std::vector<int> p(size);
    for (int i = 0; i < size; ++i) p[i] = i;
    for (int i = size - 1; i > 0; --i) {
      std::uniform_int_distribution<int> pick(0, i);
      std::swap(p[i], p[pick(rng)]);
    }
    return p;
  };

  WarpSystem<Rat> sys;
  std::vector<Rat> dist(std::size_t(n) * n, Rat(0));
  auto set = [&](int i, int j, const Rat& v) {
    dist[std::size_t(i) * n + j] = v;
    dist[std::size_t(j) * n + i] = v;
  };

  auto floyd_warshall = [&]() {
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Rat via = dist[std::size_t(i) * n + k] + dist[std::size_t(k) * n + j];
          if (via < dist[std::size_t(i) * n + j]) set(i, j, via);
        }
  };

  switch (kind) {
    case RandomSystemKind::kBallMetric: {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) set(i, j, dyadic(1.0, 2.0));
      break;
    }
    case RandomSystemKind::kGraphMetric: {
      // random spanning path plus extra edges, then shortest-path closure
      const Rat big(1000);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) set(i, j, big);
      auto order = random_perm(n);
      for (int i = 0; i + 1 < n; ++i)
        set(order[i], order[i + 1], dyadic(0.25, 2.0));
      int extra = n;
      for (int e = 0; e < extra; ++e) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        int a = pick(rng), b = pick(rng);
        if (a == b) continue;
        Rat w = dyadic(0.25, 2.0);
        if (w < dist[std::size_t(a) * n + b]) set(a, b, w);
      }
      floyd_warshall();
      break;
    }
    case RandomSystemKind::kIsometric: {
      // circulant graph on Z/n: offset classes {1, a} with one weight each
      const Rat big(1000);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) set(i, j, big);
      Rat w1 = dyadic(0.5, 2.0);
      for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        if (w1 < dist[std::size_t(i) * n + j]) set(i, j, w1);
      }
      if (n >= 5) {
        std::uniform_int_distribution<int> pick(2, n / 2);
        int a = pick(rng);
        Rat w2 = dyadic(0.5, 2.0);
        for (int i = 0; i < n; ++i) {
          int j = (i + a) % n;
          if (i != j && w2 < dist[std::size_t(i) * n + j]) set(i, j, w2);
        }
      }
      floyd_warshall();
      break;
    }
  }

  sys.space = FiniteMetricSpace<Rat>(n, std::move(dist), std::move(scale));
  sys.space.validate();

  sys.gens.symbols = {"id"};
  sys.gens.inverse = {0};
  sys.gens.identity_index = 0;
  sys.action.push_back([&] {
    std::vector<int> idp(n);
    for (int i = 0; i < n; ++i) idp[i] = i;
    return idp;
  }());

  for (int g = 0; g < gen_pairs; ++g) {
    std::vector<int> perm;
    if (kind == RandomSystemKind::kIsometric) {
      // rotations preserve the circulant metric
      std::uniform_int_distribution<int> pick(1, std::max(1, n - 1));
      int shift = g == 0 ? 1 : pick(rng);
      perm.resize(n);
      for (int i = 0; i < n; ++i) perm[i] = (i + shift) % n;
    } else {
      perm = random_perm(n);
    }
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[perm[i]] = i;
    int idx = sys.gens.size();
    sys.gens.symbols.push_back("g" + std::to_string(g));
    sys.gens.symbols.push_back("g" + std::to_string(g) + "^-1");
    sys.gens.inverse.push_back(idx + 1);
    sys.gens.inverse.push_back(idx);
    sys.action.push_back(std::move(perm));
    sys.action.push_back(std::move(inv));
  }
  sys.finalize();
  return sys;
}

}  // namespace warplab
