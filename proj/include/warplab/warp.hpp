#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "warplab/metric.hpp"

namespace warplab {

enum class Provenance { warped, level_s, one_step, half_step };

template <class S>
struct DistanceMatrix {
  int n = 0;
  std::vector<S> values;
  Provenance provenance = Provenance::warped;

  const S& at(int i, int j) const { return values[std::size_t(i) * n + j]; }
  S& at(int i, int j) { return values[std::size_t(i) * n + j]; }
};

namespace detail {

template <class S>
std::vector<S> scaled_weights(const WarpSystem<S>& sys) {
  const int n = sys.size();
  std::vector<S> w(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w[std::size_t(i) * n + j] = sys.space.scaled(i, j);
  return w;
}

/// One Dijkstra source on the warped graph: a metric edge of weight w(u,v)
/// between every pair plus a unit edge (u, s·u) per non-identity generator.
/// O(n^2); the metric edges make the graph complete, so no heap pays off.
template <class S>
void dijkstra_row(const std::vector<S>& w, const WarpSystem<S>& sys, int src,
                  S* dist) {
  const int n = sys.size();
  std::vector<char> has(n, 0), done(n, 0);
  dist[src] = S{};
  has[src] = 1;
  const S one{1};
  for (int iter = 0; iter < n; ++iter) {
    int u = -1;
    for (int v = 0; v < n; ++v)
      if (!done[v] && has[v] && (u < 0 || dist[v] < dist[u])) u = v;
    if (u < 0) break;
    done[u] = 1;
    const S* wu = &w[std::size_t(u) * n];
    for (int v = 0; v < n; ++v) {
      if (done[v] || v == u) continue;
      S cand = dist[u] + wu[v];
      if (!has[v] || cand < dist[v]) {
        dist[v] = std::move(cand);
        has[v] = 1;
      }
    }
    for (int s = 0; s < sys.gens.size(); ++s) {
      if (sys.gens.is_identity(s)) continue;
      int v = sys.action[s][u];
      if (v < 0 || done[v]) continue;
      S cand = dist[u] + one;
      if (!has[v] || cand < dist[v]) {
        dist[v] = std::move(cand);
        has[v] = 1;
      }
    }
  }
}

void dijkstra_row_int(const std::vector<std::int64_t>& w, int n,
                      const std::vector<std::vector<int>>& action,
                      const std::vector<int>& gen_ids, std::int64_t unit,
                      int src, std::int64_t* dist);

/// Common-denominator integer view of the scaled weight matrix. Empty when
/// the values do not fit comfortably in 64 bits.
struct ScaledIntView {
  std::vector<std::int64_t> weights;
  std::int64_t denominator = 0;
  bool ok = false;
};

inline ScaledIntView make_int_view(const std::vector<Rat>& w, int n) {
  ScaledIntView view;
  try {
    CheckedInt lcm = 1;
    for (const auto& v : w) lcm = checked_lcm(lcm, v.denominator());
    BigInt bound = 0;
    for (const auto& v : w)
      bound = std::max(bound, BigInt(to_ll(v.numerator())) *
                                  (BigInt(to_ll(lcm)) / to_ll(v.denominator())));
    // worst path: n metric hops of max weight plus n unit edges
    BigInt path_bound = (bound + BigInt(to_ll(lcm))) * (n + 1);
    if (path_bound >= (BigInt(1) << 62)) return view;
    view.weights.resize(w.size());
    for (std::size_t k = 0; k < w.size(); ++k)
      view.weights[k] =
          to_ll(w[k].numerator() * (lcm / w[k].denominator()));
    view.denominator = to_ll(lcm);
    view.ok = true;
  } catch (const std::overflow_error&) {
    view.ok = false;
  }
  return view;
}

template <class Fn>
void parallel_sources(int n, Fn&& body);  // defined in warp_impl below

}  // namespace detail

/// Reference implementation: straightforward serial Dijkstra per source in
/// the scalar's own arithmetic. Kept as the baseline the parallel kernel is
/// tested against.
template <class S>
DistanceMatrix<S> warped_metric_serial(const WarpSystem<S>& sys) {
  const int n = sys.size();
  DistanceMatrix<S> out;
  out.n = n;
  out.values.assign(std::size_t(n) * n, S{});
  auto w = detail::scaled_weights(sys);
  for (int src = 0; src < n; ++src)
    detail::dijkstra_row(w, sys, src, &out.values[std::size_t(src) * n]);
  out.provenance = Provenance::warped;
  return out;
}

/// Production kernel: OpenMP over sources; in exact mode the rows run on a
/// common-denominator integer view when it fits in 64 bits. Results are
/// identical to warped_metric_serial (exact arithmetic in both paths).
template <class S>
DistanceMatrix<S> warped_metric(const WarpSystem<S>& sys);

/// d_Gamma <= scale·d, <= 1 on generator pairs, pseudometric axioms.
/// Returns a human-readable violation or nullopt.
template <class S>
std::optional<std::string> check_warped_invariants(const WarpSystem<S>& sys,
                                                   const DistanceMatrix<S>& m);

// ---------------------------------------------------------------------------
// Word balls of the action (images of group elements as partial point maps)

struct ActionBallElement {
  std::vector<int> map;  // point -> image, -1 outside the domain
  int length = 0;
};

class ActionWordBall {
 public:
  template <class S>
  ActionWordBall(const WarpSystem<S>& sys, int max_radius,
                 std::size_t max_elements = 200000)
      : ActionWordBall(sys.action, sys.gens, max_radius, max_elements) {}

  ActionWordBall(const std::vector<std::vector<int>>& action,
                 const GeneratorSet& gens, int max_radius,
                 std::size_t max_elements);

  const std::vector<ActionBallElement>& elements() const { return elements_; }
  int radius_reached() const { return radius_reached_; }
  bool saturated() const { return saturated_; }  // whole image group enumerated

 private:
  std::vector<ActionBallElement> elements_;
  int radius_reached_ = 0;
  bool saturated_ = false;
};

/// Thrown when the one-step ball bound exceeds the configured cap; carries
/// the exact bound so the caller can decide to raise the cap.
struct BallRadiusOverflow : std::runtime_error {
  explicit BallRadiusOverflow(const std::string& bound)
      : std::runtime_error("one-step ball radius exceeds cap; required bound " +
                           bound),
        required_bound(bound) {}
  std::string required_bound;
};

template <class S>
struct OneStepResult {
  DistanceMatrix<S> values;  // possibly asymmetric for Lipschitz actions
  int max_radius_used = 0;
};

/// D(x,x') = min over gamma in the word ball of |gamma| + scale·d(gamma x, x'),
/// with the per-pair ball radius min(L^{d_Gamma}·d_Gamma, scale·d(x,x'))
/// evaluated exactly in exact mode.
template <class S>
OneStepResult<S> one_step_distance(const WarpSystem<S>& sys,
                                   const DistanceMatrix<S>& warped,
                                   int radius_cap = 64);

/// Upper half of the one-step sandwich: D <= L^{d_Gamma}·d_Gamma. The
/// rational exponent is handled exactly by comparing D^b <= L^a·d^b where
/// d_Gamma = a/b, in arbitrary precision.
template <class S>
bool lipschitz_upper_ok(const S& L, const S& d_gamma, const S& D, double tol = 0.0);

// ---------------------------------------------------------------------------
// Half-step distance

template <class S>
struct HalfStepResult {
  S value{};                 // min(scale·d, word part); metric part if no orbit hit
  bool orbit_reached = false;
  bool undetermined = false;  // radius cap hit before the orbit was exhausted
  int radius_searched = 0;
  std::optional<int> word_distance;
};

template <class S>
HalfStepResult<S> half_step_distance(const WarpSystem<S>& sys, int x, int x2,
                                     int radius_cap = 1 << 20);

// ---------------------------------------------------------------------------
// Delta tables and level metrics

template <class S>
struct DeltaTable {
  int n = 0;
  std::vector<std::vector<S>> levels;  // levels[k] is the n x n matrix delta_k

  int n_max() const { return static_cast<int>(levels.size()) - 1; }
  const S& at(int k, int i, int j) const {
    return levels[k][std::size_t(i) * n + j];
  }
};

/// delta_0 = d (scale-free); delta_{k+1}(y,y') = min over (z, s in S) of
/// delta_k(y,z) + d(s·z, y'). The identity generator makes the table
/// nonincreasing in k.
template <class S>
DeltaTable<S> delta_table(const WarpSystem<S>& sys, int n_max);

template <class S>
DeltaTable<S> delta_table_serial(const WarpSystem<S>& sys, int n_max);

struct LevelMetricUnstable : std::runtime_error {
  LevelMetricUnstable(int i, int j, int n_max)
      : std::runtime_error("level metric not stabilized at pair (" +
                           std::to_string(i) + "," + std::to_string(j) +
                           ") with n_max " + std::to_string(n_max)),
        pair_i(i), pair_j(j) {}
  int pair_i, pair_j;
};

/// d_s(y,y') = min_{n <= n_max} (n + s·delta_n(y,y')). Throws
/// LevelMetricUnstable naming the first pair whose minimum might still
/// drop with a deeper table.
template <class S>
DistanceMatrix<S> level_metric(const WarpSystem<S>& sys, const S& s,
                               const DeltaTable<S>& delta);

/// Convenience: grows the delta table until every pair is stabilized.
template <class S>
DistanceMatrix<S> level_metric(const WarpSystem<S>& sys, const S& s);

/// |t - s| + d_min(s,t)(y, y2) on the warped cone; s, t >= 1.
template <class S>
S cone_distance(const WarpSystem<S>& sys, const S& s, int y, const S& t, int y2);

template <class S>
struct StabilizationThreshold {
  bool same_orbit = false;
  int word_distance = 0;  // N
  S s_star{};             // level metric equals N for every s >= s_star
};

/// Stabilization data: N = shortest word moving y to y2 under the action,
/// s_star = max_{n<N} (N-n)/delta_n(y,y2).
template <class S>
StabilizationThreshold<S> stabilization_threshold(const WarpSystem<S>& sys,
                                                  int y, int y2);

}  // namespace warplab

#include "warplab/warp_impl.hpp"
