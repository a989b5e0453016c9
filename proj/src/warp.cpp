#include "warplab/warp.hpp"

namespace warplab {

namespace detail {

void dijkstra_row_int(const std::vector<std::int64_t>& w, int n,
                      const std::vector<std::vector<int>>& action,
                      const std::vector<int>& gen_ids, std::int64_t unit,
                      int src, std::int64_t* dist) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<char> done(n, 0);
  for (int v = 0; v < n; ++v) dist[v] = kInf;
  dist[src] = 0;
  for (int iter = 0; iter < n; ++iter) {
    int u = -1;
    std::int64_t best = kInf;
    for (int v = 0; v < n; ++v)
      if (!done[v] && dist[v] < best) {
        best = dist[v];
        u = v;
      }
    if (u < 0) break;
    done[u] = 1;
    const std::int64_t du = dist[u];
    const std::int64_t* wu = &w[std::size_t(u) * n];
    for (int v = 0; v < n; ++v) {
      std::int64_t cand = du + wu[v];
      if (cand < dist[v]) dist[v] = cand;
    }
    for (int s : gen_ids) {
      int v = action[s][u];
      if (v < 0) continue;
      std::int64_t cand = du + unit;
      if (cand < dist[v]) dist[v] = cand;
    }
  }
}

}  // namespace detail

ActionWordBall::ActionWordBall(const std::vector<std::vector<int>>& action,
                               const GeneratorSet& gens, int max_radius,
                               std::size_t max_elements) {
  const int n = action.empty() ? 0 : static_cast<int>(action[0].size());
  std::vector<int> identity(n);
  for (int i = 0; i < n; ++i) identity[i] = i;

  std::map<std::vector<int>, int> seen;
  seen[identity] = 0;
  elements_.push_back({identity, 0});

  saturated_ = true;
  std::size_t frontier_begin = 0;
  for (int depth = 0; depth < max_radius; ++depth) {
    std::size_t frontier_end = elements_.size();
    if (frontier_begin == frontier_end) break;  // image group exhausted
    for (std::size_t idx = frontier_begin; idx < frontier_end; ++idx) {
      for (int s = 0; s < gens.size(); ++s) {
        if (gens.is_identity(s)) continue;
        std::vector<int> composed(n);
        const auto& cur = elements_[idx].map;
        for (int x = 0; x < n; ++x)
          composed[x] = cur[x] < 0 ? -1 : action[s][cur[x]];
        auto [it, inserted] =
            seen.try_emplace(composed, static_cast<int>(elements_.size()));
        if (inserted) {
          elements_.push_back({std::move(composed), depth + 1});
          if (elements_.size() > max_elements)
            throw std::runtime_error("action word ball exceeds element cap");
        }
      }
    }
    frontier_begin = frontier_end;
    radius_reached_ = depth + 1;
  }
  if (frontier_begin < elements_.size()) saturated_ = false;
}

}  // namespace warplab
