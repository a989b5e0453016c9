#include "warplab/profinite.hpp"

#include <algorithm>
#include <stdexcept>

namespace warplab {

namespace {

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

}  // namespace

QuotientChain QuotientChain::cyclic_tower(std::int64_t m, int levels) {
  std::vector<FiniteQuotientGroup> groups;
  std::vector<std::vector<int>> connecting;
  for (int n = 1; n <= levels; ++n) groups.push_back(cyclic_group(ipow(m, n)));
  for (int n = 2; n <= levels; ++n) {
    const auto& upper = groups[n - 1];
    const auto& lower = groups[n - 2];
    std::int64_t mod = ipow(m, n - 1);
    std::vector<int> f(upper.size());
    for (int g = 0; g < upper.size(); ++g) {
      auto idx = lower.index_of({upper.payload(g)[0] % mod});
      if (!idx) throw std::runtime_error("cyclic tower: reduction missing");
      f[g] = *idx;
    }
    connecting.push_back(std::move(f));
  }
  return from_parts(std::move(groups), std::move(connecting));
}

QuotientChain QuotientChain::sl2_tower(std::int64_t m, int levels) {
  std::vector<FiniteQuotientGroup> groups;
  std::vector<std::vector<int>> connecting;
  for (int n = 1; n <= levels; ++n) groups.push_back(sl2_mod_group(ipow(m, n)));
  for (int n = 2; n <= levels; ++n) {
    const auto& upper = groups[n - 1];
    const auto& lower = groups[n - 2];
    std::int64_t mod = ipow(m, n - 1);
    std::vector<int> f(upper.size());
    for (int g = 0; g < upper.size(); ++g) {
      const auto& p = upper.payload(g);
      auto idx = lower.index_of({p[0] % mod, p[1] % mod, p[2] % mod, p[3] % mod});
      if (!idx) throw std::runtime_error("sl2 tower: reduction missing");
      f[g] = *idx;
    }
    connecting.push_back(std::move(f));
  }
  return from_parts(std::move(groups), std::move(connecting));
}

QuotientChain QuotientChain::from_parts(
    std::vector<FiniteQuotientGroup> groups,
    std::vector<std::vector<int>> connecting) {
  QuotientChain chain;
  chain.groups_ = std::move(groups);
  chain.connecting_ = std::move(connecting);
  chain.validate();
  return chain;
}

std::vector<int> QuotientChain::projection(int from, int n) const {
  if (n < 1 || n > from) throw std::out_of_range("projection level");
  std::vector<int> map(group(from).size());
  for (std::size_t g = 0; g < map.size(); ++g) map[g] = static_cast<int>(g);
  for (int k = from; k > n; --k) {
    const auto& f = connecting_map(k);
    for (auto& v : map) v = f[v];
  }
  return map;
}

void QuotientChain::validate() const {
  if (connecting_.size() + 1 != groups_.size() && !groups_.empty() &&
      !(groups_.size() == 1 && connecting_.empty()))
    throw std::invalid_argument("chain: need one connecting map per step");
  for (int n = 2; n <= levels(); ++n) {
    const auto& upper = group(n);
    const auto& lower = group(n - 1);
    if (upper.size() <= lower.size())
      throw std::invalid_argument("chain: orders must strictly increase");
    const auto& f = connecting_map(n);
    if (static_cast<int>(f.size()) != upper.size())
      throw std::invalid_argument("chain: connecting map size mismatch");
    std::vector<char> hit(lower.size(), 0);
    for (int v : f) {
      if (v < 0 || v >= lower.size())
        throw std::invalid_argument("chain: connecting map out of range");
      hit[v] = 1;
    }
    if (std::find(hit.begin(), hit.end(), 0) != hit.end())
      throw std::invalid_argument("chain: connecting map not surjective");
    if (f[upper.identity()] != lower.identity())
      throw std::invalid_argument("chain: connecting map must preserve identity");
    if (upper.gens().size() != lower.gens().size())
      throw std::invalid_argument("chain: generator sets must correspond");
    // homomorphism on generators: f(s·g) = s·f(g)
    for (int s = 0; s < upper.gens().size(); ++s)
      for (int g = 0; g < upper.size(); ++g)
        if (f[upper.gen_mult(s, g)] != lower.gen_mult(s, f[g]))
          throw std::invalid_argument(
              "chain: connecting map does not commute with generators");
  }
}

void WeightSequence::validate_decreasing() const {
  for (int i = 0; i < size(); ++i) {
    if (!(Rat(0) < a[i]))
      throw std::invalid_argument("weights: entries must be positive");
    if (i > 0 && !(a[i] < a[i - 1]))
      throw std::invalid_argument("weights: entries must strictly decrease");
  }
}

WeightSequence WeightSequence::for_chain(const QuotientChain& chain,
                                         std::vector<Rat> weights) {
  WeightSequence w;
  w.a = std::move(weights);
  w.validate_decreasing();
  w.convention_ok = true;
  for (int n = 1; n < w.size() && n <= chain.levels(); ++n) {
    int diam = 0;
    const auto& g = chain.group(n);
    for (int e = 0; e < g.size(); ++e) diam = std::max(diam, g.word_length(e));
    if (diam > 0 && !(w.a[n] < w.a[n - 1] / Rat(diam))) {
      w.convention_ok = false;
      if (w.first_failing_index == 0) w.first_failing_index = n;
    }
  }
  return w;
}

TruncatedCompletion::TruncatedCompletion(QuotientChain chain,
                                         WeightSequence weights, int level,
                                         bool allow_convention_violation)
    : chain_(std::move(chain)), weights_(std::move(weights)), level_(level) {
  if (level_ < 0 || level_ > chain_.levels())
    throw std::invalid_argument("truncation: level out of range");
  if (weights_.size() < level_)
    throw std::invalid_argument("truncation: need one weight per level");
  if (!weights_.convention_ok && !allow_convention_violation)
    throw std::invalid_argument(
        "truncation: weight convention a_{n+1} < a_n/diam(G_n) fails at index " +
        std::to_string(weights_.first_failing_index));
  for (int n = 1; n <= level_; ++n) {
    projections_.push_back(chain_.projection(level_, n));
    const auto& g = chain_.group(n);
    std::vector<int> table(std::size_t(g.size()) * g.size());
    for (int src = 0; src < g.size(); ++src) {
      auto row = g.word_lengths_from(src);
      std::copy(row.begin(), row.end(), table.begin() + std::size_t(src) * g.size());
    }
    word_distances_.push_back(std::move(table));
  }
}

int TruncatedCompletion::num_points() const {
  return level_ == 0 ? 1 : chain_.group(level_).size();
}

int TruncatedCompletion::project(int g, int n) const {
  if (n == 0) return 0;
  return projections_.at(n - 1)[g];
}

int TruncatedCompletion::first_differing_level(int g, int g2) const {
  for (int n = 1; n <= level_; ++n)
    if (project(g, n) != project(g2, n)) return n;
  return level_ + 1;
}

Rat TruncatedCompletion::point_distance(int g, int g2) const {
  int n = first_differing_level(g, g2);
  if (n > level_) return Rat(0);
  return weights_.a[n - 1];
}

int TruncatedCompletion::delta(int n, int g, int g2) const {
  if (n == 0) return 0;
  const auto& g_n = chain_.group(n);
  return word_distances_.at(n - 1)[std::size_t(project(g, n)) * g_n.size() +
                                   project(g2, n)];
}

int TruncatedCompletion::delta_diameter(int n) const {
  if (n == 0) return 0;
  const auto& g = chain_.group(n);
  int diam = 0;
  for (int e = 0; e < g.size(); ++e) diam = std::max(diam, g.word_length(e));
  return diam;
}

WarpSystem<Rat> TruncatedCompletion::warp_system(const Rat& scale) const {
  const int n = num_points();
  std::vector<Rat> dist(std::size_t(n) * n, Rat(0));
  for (int g = 0; g < n; ++g)
    for (int g2 = g + 1; g2 < n; ++g2) {
      Rat d = point_distance(g, g2);
      dist[std::size_t(g) * n + g2] = d;
      dist[std::size_t(g2) * n + g] = d;
    }
  WarpSystem<Rat> sys;
  sys.space = FiniteMetricSpace<Rat>(n, std::move(dist), scale);
  sys.space.validate();
  if (level_ == 0) {
    sys.gens.symbols = {"id"};
    sys.gens.inverse = {0};
    sys.gens.identity_index = 0;
    sys.action.push_back({0});
  } else {
    const auto& top = chain_.group(level_);
    sys.gens = top.gens();
    for (int s = 0; s < sys.gens.size(); ++s)
      sys.action.push_back(top.gen_action(s));
  }
  sys.finalize();
  if (!sys.isometric)
    throw std::logic_error("truncation: left multiplication must be isometric");
  return sys;
}

DistanceMatrix<Rat> TruncatedCompletion::slice_metric_closed_form(
    const Rat& s) const {
  const int n = num_points();
  DistanceMatrix<Rat> out;
  out.n = n;
  out.provenance = Provenance::level_s;
  out.values.assign(std::size_t(n) * n, Rat(0));
  for (int g = 0; g < n; ++g)
    for (int g2 = g + 1; g2 < n; ++g2) {
      Rat best(delta(level_, g, g2));  // the a_{N+1} = 0 term
      for (int lv = 1; lv <= level_; ++lv) {
        Rat cand = Rat(delta(lv - 1, g, g2)) + s * weights_.a[lv - 1];
        if (cand < best) best = std::move(cand);
      }
      out.at(g, g2) = best;
      out.at(g2, g) = std::move(best);
    }
  return out;
}

int largest_scale_index(const TruncatedCompletion& trunc, const Rat& s) {
  int n_s = 0;
  for (int n = 1; n <= trunc.level(); ++n)
    if (s * trunc.weights().a[n - 1] >= Rat(1)) n_s = n;
  return n_s;
}

SliceDecomposition slice_decomposition(const TruncatedCompletion& trunc,
                                       const Rat& s) {
  SliceDecomposition out;
  out.s = s;
  out.n_s = largest_scale_index(trunc, s);
  if (out.n_s == 0)
    throw std::invalid_argument(
        "slice decomposition: s is below the first scale (s·a_1 < 1)");
  out.cap = s * trunc.weights().a[out.n_s - 1];
  const int n = trunc.num_points();
  out.d_prime.n = n;
  out.d_prime.provenance = Provenance::level_s;
  out.d_prime.values.assign(std::size_t(n) * n, Rat(0));
  for (int g = 0; g < n; ++g)
    for (int g2 = g + 1; g2 < n; ++g2) {
      Rat tail = rat_min(out.cap, Rat(trunc.delta(out.n_s, g, g2)));
      Rat v = Rat(trunc.delta(out.n_s - 1, g, g2)) + tail;
      out.d_prime.at(g, g2) = v;
      out.d_prime.at(g2, g) = std::move(v);
    }
  return out;
}

std::vector<BoxSpaceLevel> box_space(const QuotientChain& chain) {
  std::vector<BoxSpaceLevel> levels;
  for (int n = 1; n <= chain.levels(); ++n) {
    const auto& g = chain.group(n);
    BoxSpaceLevel lv;
    lv.level = n;
    lv.order = g.size();
    lv.diameter = g.diameter();
    lv.cayley = g.cayley_graph();
    levels.push_back(std::move(lv));
  }
  return levels;
}

SectionScaleReport section_scale_check(const TruncatedCompletion& trunc, int n) {
  if (n < 1 || n > trunc.level())
    throw std::out_of_range("section scale check: level out of range");
  SectionScaleReport report;
  report.n = n;
  int diam = trunc.delta_diameter(n);
  if (diam == 0) {
    report.vacuous = true;
    report.certificate_holds = true;
    report.s_n = Rat(0);
    return report;
  }
  report.s_n = Rat(diam) / trunc.weights().a[n - 1];
  auto d_s = trunc.slice_metric_closed_form(report.s_n);
  report.certificate_holds = true;
  report.max_upper_deviation = Rat(0);
  const int pts = trunc.num_points();
  for (int g = 0; g < pts; ++g)
    for (int g2 = g + 1; g2 < pts; ++g2) {
      Rat dn(trunc.delta(n, g, g2));
      const Rat& ds = d_s.at(g, g2);
      if (ds < dn || Rat(1) + dn < ds) {
        report.certificate_holds = false;
        report.worst_pair = {g, g2};
      }
      Rat dev = ds - dn;
      if (report.max_upper_deviation < dev) {
        report.max_upper_deviation = dev;
        if (report.certificate_holds) report.worst_pair = {g, g2};
      }
    }
  return report;
}

}  // namespace warplab
