#pragma once

// Template implementations for warp.hpp; not a public include.

#include <atomic>
#include <deque>

namespace warplab {
namespace detail {

template <class Fn>
void parallel_sources(int n, Fn&& body) {
  std::atomic<bool> failed{false};
  std::exception_ptr eptr = nullptr;
#pragma omp parallel for schedule(dynamic)
  for (int src = 0; src < n; ++src) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      body(src);
    } catch (...) {
#pragma omp critical
      {
        if (!failed.exchange(true)) eptr = std::current_exception();
      }
    }
  }
  if (eptr) std::rethrow_exception(eptr);
}

inline BigRat big_rat_pow(const BigRat& base, long long e) {
  BigInt num = mp::pow(mp::numerator(base), static_cast<unsigned>(e));
  BigInt den = mp::pow(mp::denominator(base), static_cast<unsigned>(e));
  return BigRat(num, den);
}

/// Largest integer k in [0, hi] with k^b <= bound; exact.
inline long long floor_root_bound(const BigRat& bound, long long b, long long hi) {
  auto fits = [&](long long k) {
    BigInt kb = mp::pow(BigInt(k), static_cast<unsigned>(b));
    return BigRat(kb) <= bound;
  };
  if (!fits(0)) return -1;
  long long lo = 0;
  while (lo < hi) {
    long long mid = lo + (hi - lo + 1) / 2;
    if (fits(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

}  // namespace detail

template <class S>
DistanceMatrix<S> warped_metric(const WarpSystem<S>& sys) {
  const int n = sys.size();
  DistanceMatrix<S> out;
  out.n = n;
  out.provenance = Provenance::warped;
  out.values.assign(std::size_t(n) * n, S{});
  auto w = detail::scaled_weights(sys);

  std::vector<int> gen_ids;
  for (int s = 0; s < sys.gens.size(); ++s)
    if (!sys.gens.is_identity(s)) gen_ids.push_back(s);

  if constexpr (kExactScalar<S>) {
    auto view = detail::make_int_view(w, n);
    if (view.ok) {
      std::vector<std::int64_t> idist(std::size_t(n) * n, 0);
      detail::parallel_sources(n, [&](int src) {
        detail::dijkstra_row_int(view.weights, n, sys.action, gen_ids,
                                 view.denominator, src,
                                 &idist[std::size_t(src) * n]);
      });
      const CheckedInt den(view.denominator);
      for (std::size_t k = 0; k < idist.size(); ++k)
        out.values[k] = Rat(CheckedInt(idist[k]), den);
      return out;
    }
  }
  detail::parallel_sources(n, [&](int src) {
    detail::dijkstra_row(w, sys, src, &out.values[std::size_t(src) * n]);
  });
  return out;
}

template <class S>
std::optional<std::string> check_warped_invariants(const WarpSystem<S>& sys,
                                                   const DistanceMatrix<S>& m) {
  const int n = sys.size();
  const double tol = sys.space.tolerance();
  auto leq = [&](const S& a, const S& b) {
    if constexpr (kExactScalar<S>)
      return a <= b;
    else
      return a <= b + tol;
  };
  std::ostringstream msg;
  for (int i = 0; i < n; ++i) {
    if (!(m.at(i, i) == S{})) {
      msg << "nonzero diagonal at " << i;
      return msg.str();
    }
    for (int j = 0; j < n; ++j) {
      if (!(m.at(i, j) == m.at(j, i))) {
        msg << "asymmetric at (" << i << "," << j << ")";
        return msg.str();
      }
      if (!leq(m.at(i, j), sys.space.scaled(i, j))) {
        msg << "exceeds scaled metric at (" << i << "," << j << ")";
        return msg.str();
      }
    }
  }
  for (int s = 0; s < sys.gens.size(); ++s) {
    if (sys.gens.is_identity(s)) continue;
    for (int x = 0; x < n; ++x) {
      int sx = sys.action[s][x];
      if (sx >= 0 && !leq(m.at(x, sx), S{1})) {
        msg << "generator pair (" << x << "," << sx << ") above 1";
        return msg.str();
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (!leq(m.at(i, j), m.at(i, k) + m.at(k, j))) {
          msg << "triangle fails at (" << i << "," << j << "," << k << ")";
          return msg.str();
        }
  return std::nullopt;
}

template <class S>
bool lipschitz_upper_ok(const S& L, const S& d_gamma, const S& D, double tol) {
  if constexpr (kExactScalar<S>) {
    if (d_gamma == S{}) return D == S{};
    if (D <= d_gamma) return true;  // L >= 1 makes the bound at least d_gamma
    long long a = to_ll(d_gamma.numerator());
    long long b = to_ll(d_gamma.denominator());
    BigRat lhs = detail::big_rat_pow(to_big(D), b);
    BigRat rhs = detail::big_rat_pow(to_big(L), a) *
                 detail::big_rat_pow(to_big(d_gamma), b);
    return lhs <= rhs;
  } else {
    return D <= std::pow(L, d_gamma) * d_gamma + tol;
  }
}

template <class S>
OneStepResult<S> one_step_distance(const WarpSystem<S>& sys,
                                   const DistanceMatrix<S>& warped,
                                   int radius_cap) {
  const int n = sys.size();
  auto w = detail::scaled_weights(sys);
  std::vector<int> radius(std::size_t(n) * n, 0);
  int rmax = 0;

  for (int x = 0; x < n; ++x) {
    for (int x2 = 0; x2 < n; ++x2) {
      if (x == x2) continue;
      const S& dg = warped.at(x, x2);
      const S& m = w[std::size_t(x) * n + x2];
      long long r;
      if constexpr (kExactScalar<S>) {
        // bound = min(L^{d_Gamma}·d_Gamma, scale·d); exact floor
        long long a = to_ll(dg.numerator());
        long long b = to_ll(dg.denominator());
        BigRat big_bound = detail::big_rat_pow(to_big(sys.lipschitz_L), a) *
                           detail::big_rat_pow(to_big(dg), b);
        BigRat mb = detail::big_rat_pow(to_big(m), b);
        if (big_bound <= mb)
          r = detail::floor_root_bound(big_bound, b, rat_floor(m) + 1);
        else
          r = rat_floor(m);
      } else {
        double bound = std::min(std::pow(double(sys.lipschitz_L), double(dg)) * dg,
                                double(m));
        r = static_cast<long long>(std::floor(bound + sys.space.tolerance()));
      }
      if (r > radius_cap) throw BallRadiusOverflow(std::to_string(r));
      radius[std::size_t(x) * n + x2] = static_cast<int>(std::max(r, 0LL));
      rmax = std::max(rmax, static_cast<int>(r));
    }
  }

  ActionWordBall ball(sys, rmax);
  OneStepResult<S> out;
  out.max_radius_used = rmax;
  out.values.n = n;
  out.values.provenance = Provenance::one_step;
  out.values.values.assign(std::size_t(n) * n, S{});
  for (int x = 0; x < n; ++x) {
    for (int x2 = 0; x2 < n; ++x2) {
      if (x == x2) continue;
      S best = w[std::size_t(x) * n + x2];  // gamma = id
      int r = radius[std::size_t(x) * n + x2];
      for (const auto& e : ball.elements()) {
        if (e.length > r) break;  // BFS order: lengths nondecreasing
        if (e.length == 0) continue;
        int gx = e.map[x];
        if (gx < 0) continue;
        S cand = S(e.length) + w[std::size_t(gx) * n + x2];
        if (cand < best) best = std::move(cand);
      }
      out.values.at(x, x2) = std::move(best);
    }
  }
  return out;
}

template <class S>
HalfStepResult<S> half_step_distance(const WarpSystem<S>& sys, int x, int x2,
                                     int radius_cap) {
  const int n = sys.size();
  HalfStepResult<S> out;
  out.value = sys.space.scaled(x, x2);
  if (x == x2) {
    out.value = S{};
    out.orbit_reached = true;
    out.word_distance = 0;
    return out;
  }
  std::vector<int> dist(n, -1);
  dist[x] = 0;
  std::deque<int> frontier{x};
  bool capped = false;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop_front();
    if (dist[u] >= radius_cap) {
      capped = true;
      continue;
    }
    for (int s = 0; s < sys.gens.size(); ++s) {
      if (sys.gens.is_identity(s)) continue;
      int v = sys.action[s][u];
      if (v < 0 || dist[v] >= 0) continue;
      dist[v] = dist[u] + 1;
      if (v == x2) {
        out.orbit_reached = true;
        out.word_distance = dist[v];
        out.radius_searched = dist[v];
        S word_part{dist[v]};
        if (word_part < out.value) out.value = word_part;
        return out;
      }
      frontier.push_back(v);
    }
    out.radius_searched = std::max(out.radius_searched, dist[u] + 1);
  }
  out.undetermined = capped;  // cap hit before the orbit was exhausted
  out.radius_searched = std::min(out.radius_searched, radius_cap);
  return out;
}

namespace detail {

template <class S>
void delta_level_row(const WarpSystem<S>& sys, const std::vector<S>& prev,
                     int y, std::vector<S>& scratch, std::vector<S>& next) {
  const int n = sys.size();
  // scratch[w] = min over (z, s) with s·z = w of prev(y, z)
  for (int wpt = 0; wpt < n; ++wpt) scratch[wpt] = prev[std::size_t(y) * n + wpt];
  for (int s = 0; s < sys.gens.size(); ++s) {
    if (sys.gens.is_identity(s)) continue;
    const auto& act = sys.action[s];
    for (int z = 0; z < n; ++z) {
      int wpt = act[z];
      if (wpt < 0) continue;
      const S& cand = prev[std::size_t(y) * n + z];
      if (cand < scratch[wpt]) scratch[wpt] = cand;
    }
  }
  for (int y2 = 0; y2 < n; ++y2) {
    S best = scratch[0] + sys.space.at(0, y2);
    for (int wpt = 1; wpt < n; ++wpt) {
      S cand = scratch[wpt] + sys.space.at(wpt, y2);
      if (cand < best) best = std::move(cand);
    }
    next[std::size_t(y) * n + y2] = std::move(best);
  }
}

}  // namespace detail

template <class S>
DeltaTable<S> delta_table_serial(const WarpSystem<S>& sys, int n_max) {
  const int n = sys.size();
  DeltaTable<S> table;
  table.n = n;
  table.levels.reserve(n_max + 1);
  table.levels.push_back(sys.space.raw());
  std::vector<S> scratch(n);
  for (int k = 0; k < n_max; ++k) {
    std::vector<S> next(std::size_t(n) * n);
    for (int y = 0; y < n; ++y)
      detail::delta_level_row(sys, table.levels.back(), y, scratch, next);
    table.levels.push_back(std::move(next));
  }
  return table;
}

template <class S>
DeltaTable<S> delta_table(const WarpSystem<S>& sys, int n_max) {
  const int n = sys.size();
  DeltaTable<S> table;
  table.n = n;
  table.levels.reserve(n_max + 1);
  table.levels.push_back(sys.space.raw());
  for (int k = 0; k < n_max; ++k) {
    std::vector<S> next(std::size_t(n) * n);
    const auto& prev = table.levels.back();
    detail::parallel_sources(n, [&](int y) {
      std::vector<S> scratch(n);
      detail::delta_level_row(sys, prev, y, scratch, next);
    });
    table.levels.push_back(std::move(next));
  }
  return table;
}

template <class S>
DistanceMatrix<S> level_metric(const WarpSystem<S>& sys, const S& s,
                               const DeltaTable<S>& delta) {
  const int n = sys.size();
  const int n_max = delta.n_max();
  DistanceMatrix<S> out;
  out.n = n;
  out.provenance = Provenance::level_s;
  out.values.assign(std::size_t(n) * n, S{});
  const S stable_bound = S(n_max + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      S best = s * delta.at(0, i, j);
      for (int k = 1; k <= n_max; ++k) {
        S cand = S(k) + s * delta.at(k, i, j);
        if (cand < best) best = std::move(cand);
      }
      bool stable;
      if constexpr (kExactScalar<S>)
        stable = best <= stable_bound;
      else
        stable = best <= stable_bound + sys.space.tolerance();
      if (!stable) throw LevelMetricUnstable(i, j, n_max);
      out.at(i, j) = std::move(best);
    }
  }
  return out;
}

template <class S>
DistanceMatrix<S> level_metric(const WarpSystem<S>& sys, const S& s) {
  int n_max = 4;
  for (;;) {
    auto delta = delta_table(sys, n_max);
    try {
      return level_metric(sys, s, delta);
    } catch (const LevelMetricUnstable&) {
      if (n_max > 1 << 16) throw;
      n_max *= 2;
    }
  }
}

template <class S>
S cone_distance(const WarpSystem<S>& sys, const S& s, int y, const S& t, int y2) {
  if (s < S{1} || t < S{1})
    throw std::invalid_argument("cone distance: radial coordinates must be >= 1");
  const S& lo = s < t ? s : t;
  S radial = s < t ? t - s : s - t;
  auto level = level_metric(sys, lo);
  return radial + level.at(y, y2);
}

template <class S>
StabilizationThreshold<S> stabilization_threshold(const WarpSystem<S>& sys,
                                                  int y, int y2) {
  StabilizationThreshold<S> out;
  auto half = half_step_distance(sys, y, y2);
  if (!half.orbit_reached) {
    out.same_orbit = false;
    return out;
  }
  out.same_orbit = true;
  out.word_distance = *half.word_distance;
  const int N = out.word_distance;
  if (N == 0) {
    out.s_star = S{};
    return out;
  }
  auto delta = delta_table(sys, N - 1);
  S best{};
  for (int k = 0; k < N; ++k) {
    const S& dk = delta.at(k, y, y2);
    // same orbit at word distance N > k forces delta_k > 0
    S cand = S(N - k) / dk;
    if (k == 0 || best < cand) best = std::move(cand);
  }
  out.s_star = std::move(best);
  return out;
}

}  // namespace warplab
