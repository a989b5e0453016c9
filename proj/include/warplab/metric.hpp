#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "warplab/group.hpp"
#include "warplab/rational.hpp"

namespace warplab {

template <class S>
inline constexpr bool kExactScalar = false;
template <>
inline constexpr bool kExactScalar<Rat> = true;

/// Finite point set with a symmetric distance matrix and a positive scale
/// multiplier applied as scale·d. S is Rat (exact mode) or double (float
/// mode with a declared comparison tolerance).
template <class S>
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  FiniteMetricSpace(int n, std::vector<S> dist, S scale, double tolerance = 1e-9)
      : n_(n), dist_(std::move(dist)), scale_(std::move(scale)), tol_(tolerance) {
    if (static_cast<std::size_t>(n_) * n_ != dist_.size())
      throw std::invalid_argument("metric space: matrix size mismatch");
  }

  int size() const { return n_; }
  const S& scale() const { return scale_; }
  void set_scale(S s) { scale_ = std::move(s); }
  double tolerance() const { return tol_; }

  const S& at(int i, int j) const { return dist_[std::size_t(i) * n_ + j]; }
  S& at(int i, int j) { return dist_[std::size_t(i) * n_ + j]; }
  S scaled(int i, int j) const { return scale_ * at(i, j); }
  const std::vector<S>& raw() const { return dist_; }

  S diameter() const {
    S m{};
    for (const auto& v : dist_) m = std::max(m, v);
    return m;
  }

  /// Zero diagonal, symmetry, positive off-diagonal entries, exhaustive
  /// triangle inequality. Throws std::invalid_argument naming the first
  /// offending triple.
  void validate() const;

 private:
  int n_ = 0;
  std::vector<S> dist_;
  S scale_{1};
  double tol_ = 1e-9;
};

/// A metric space together with a generating-set action by (possibly
/// partial) permutations of the point set. Partial entries (-1) arise from
/// window-truncated models; warped distances computed on such systems are
/// upper bounds for the untruncated ones and reports must flag it.
template <class S>
struct WarpSystem {
  FiniteMetricSpace<S> space;
  GeneratorSet gens;
  std::vector<std::vector<int>> action;  // gens.size() x n, target or -1
  bool truncated = false;
  S lipschitz_L{1};
  bool isometric = true;

  int size() const { return space.size(); }

  /// Bijectivity of each defined generator map, inverse consistency, and
  /// the computed Lipschitz data. Call after filling space/gens/action.
  void finalize();
};

template <class S>
void FiniteMetricSpace<S>::validate() const {
  auto leq = [&](const S& a, const S& b) {
    if constexpr (kExactScalar<S>)
      return a <= b;
    else
      return a <= b + tol_;
  };
  for (int i = 0; i < n_; ++i) {
    if (!(at(i, i) == S{}))
      throw std::invalid_argument("metric space: nonzero diagonal at " +
                                  std::to_string(i));
    for (int j = i + 1; j < n_; ++j) {
      if (!(at(i, j) == at(j, i)))
        throw std::invalid_argument("metric space: asymmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      if (!(S{} < at(i, j)))
        throw std::invalid_argument("metric space: nonpositive distance at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  // Exact mode: run the O(n^3) scan over a common-denominator integer view
  // when it fits; otherwise fall back to rational sums.
  if constexpr (kExactScalar<S>) {
    CheckedInt lcm = 1;
    bool ok = true;
    try {
      for (const auto& v : dist_) lcm = checked_lcm(lcm, v.denominator());
    } catch (const std::overflow_error&) {
      ok = false;
    }
    if (ok) {
      std::vector<std::int64_t> s(dist_.size());
      try {
        for (std::size_t k = 0; k < dist_.size(); ++k)
          s[k] = to_ll(dist_[k].numerator() * (lcm / dist_[k].denominator()));
      } catch (const std::overflow_error&) {
        ok = false;
      }
      if (ok) {
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
              if (s[std::size_t(i) * n_ + j] >
                  s[std::size_t(i) * n_ + k] + s[std::size_t(k) * n_ + j])
                throw std::invalid_argument(
                    "metric space: triangle inequality fails at (" +
                    std::to_string(i) + "," + std::to_string(j) + "," +
                    std::to_string(k) + ")");
        return;
      }
    }
  }
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        if (!leq(at(i, j), at(i, k) + at(k, j)))
          throw std::invalid_argument(
              "metric space: triangle inequality fails at (" + std::to_string(i) +
              "," + std::to_string(j) + "," + std::to_string(k) + ")");
}

template <class S>
void WarpSystem<S>::finalize() {
  gens.validate();
  const int n = space.size();
  if (static_cast<int>(action.size()) != gens.size())
    throw std::invalid_argument("warp system: one permutation per generator");
  truncated = false;
  for (int s = 0; s < gens.size(); ++s) {
    const auto& perm = action[s];
    if (static_cast<int>(perm.size()) != n)
      throw std::invalid_argument("warp system: permutation size mismatch");
    std::vector<char> hit(n, 0);
    for (int x = 0; x < n; ++x) {
      int y = perm[x];
      if (y < 0) {
        truncated = true;
        continue;
      }
      if (y >= n || hit[y])
        throw std::invalid_argument("warp system: generator map not injective");
      hit[y] = 1;
      // inverse generator must undo the move where both are defined
      int back = action[gens.inverse[s]][y];
      if (back >= 0 && back != x)
        throw std::invalid_argument("warp system: inverse action inconsistent");
    }
    if (gens.is_identity(s))
      for (int x = 0; x < n; ++x)
        if (perm[x] != x)
          throw std::invalid_argument("warp system: identity generator must fix points");
  }

  bool have_ratio = false;
  S max_ratio{1}, min_ratio{1};
  for (int s = 0; s < gens.size(); ++s) {
    if (gens.is_identity(s)) continue;
    for (int x = 0; x < n; ++x) {
      int sx = action[s][x];
      if (sx < 0) continue;
      for (int y = x + 1; y < n; ++y) {
        int sy = action[s][y];
        if (sy < 0) continue;
        S ratio = space.at(sx, sy) / space.at(x, y);
        if (!have_ratio) {
          max_ratio = min_ratio = ratio;
          have_ratio = true;
        } else {
          if (max_ratio < ratio) max_ratio = ratio;
          if (ratio < min_ratio) min_ratio = ratio;
        }
      }
    }
  }
  if (!have_ratio) {
    lipschitz_L = S{1};
    isometric = true;
    return;
  }
  lipschitz_L = std::max(max_ratio, S{1});
  if constexpr (kExactScalar<S>) {
    isometric = (max_ratio == S{1}) && (min_ratio == S{1});
  } else {
    isometric = std::abs(max_ratio - 1.0) <= space.tolerance() &&
                std::abs(min_ratio - 1.0) <= space.tolerance();
  }
}

}  // namespace warplab
