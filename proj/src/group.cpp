#include "warplab/group.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <stdexcept>

namespace warplab {

void GeneratorSet::validate() const {
  const int n = size();
  if (static_cast<int>(inverse.size()) != n)
    throw std::invalid_argument("generator set: pairing size mismatch");
  if (identity_index < 0 || identity_index >= n)
    throw std::invalid_argument("generator set: identity label missing");
  if (inverse[identity_index] != identity_index)
    throw std::invalid_argument("generator set: identity must be self-inverse");
  for (int i = 0; i < n; ++i) {
    if (inverse[i] < 0 || inverse[i] >= n || inverse[inverse[i]] != i)
      throw std::invalid_argument("generator set: pairing is not an involution");
  }
}

std::vector<int> GeneratorSet::inverse_pair_representatives() const {
  std::vector<int> reps;
  for (int i = 0; i < size(); ++i)
    if (i != identity_index && i <= inverse[i]) reps.push_back(i);
  return reps;
}

FiniteQuotientGroup FiniteQuotientGroup::enumerate(
    GeneratorSet gens, const std::vector<Payload>& gen_payloads,
    const Payload& identity, MultFn mult,
    std::optional<std::size_t> declared_size, std::size_t max_size) {
  gens.validate();
  if (gen_payloads.size() != static_cast<std::size_t>(gens.size()))
    throw std::invalid_argument("group: one payload per generator required");

  FiniteQuotientGroup g;
  g.gens_ = std::move(gens);
  g.mult_ = std::move(mult);

  g.payloads_.push_back(identity);
  g.index_[identity] = 0;
  g.word_length_.push_back(0);

  // BFS from the identity; canonical element order. Generator moves are
  // left multiplications h -> s·h.
  std::deque<int> frontier{0};
  std::vector<std::vector<int>> left(g.gens_.size());
  while (!frontier.empty()) {
    int h = frontier.front();
    frontier.pop_front();
    for (int s = 0; s < g.gens_.size(); ++s) {
      if (g.gens_.is_identity(s)) continue;
      Payload p = g.mult_(gen_payloads[s], g.payloads_[h]);
      auto [it, inserted] = g.index_.try_emplace(p, g.size());
      if (inserted) {
        g.payloads_.push_back(p);
        g.word_length_.push_back(g.word_length_[h] + 1);
        if (g.payloads_.size() > max_size)
          throw std::runtime_error("group enumeration exceeds size cap");
        frontier.push_back(it->second);
      }
    }
  }
  if (declared_size && *declared_size != g.payloads_.size())
    throw std::runtime_error("generators do not generate the declared group");

  for (int s = 0; s < g.gens_.size(); ++s) {
    auto& perm = g.gen_left_.emplace_back(g.size());
    for (int h = 0; h < g.size(); ++h) {
      if (g.gens_.is_identity(s)) {
        perm[h] = h;
        continue;
      }
      auto it = g.index_.find(g.mult_(gen_payloads[s], g.payloads_[h]));
      if (it == g.index_.end())
        throw std::runtime_error("group: generator action leaves the group");
      perm[h] = it->second;
    }
  }
  return g;
}

GroupWord FiniteQuotientGroup::shortest_word(int g) const {
  GroupWord word;
  int cur = g;
  while (cur != 0) {
    bool advanced = false;
    for (int s = 0; s < gens_.size(); ++s) {
      if (gens_.is_identity(s)) continue;
      int prev = gen_left_[gens_.inverse[s]][cur];
      if (word_length_[prev] == word_length_[cur] - 1) {
        word.letters.push_back(s);
        cur = prev;
        advanced = true;
        break;
      }
    }
    if (!advanced) throw std::runtime_error("group: word walk failed");
  }
  word.length = static_cast<int>(word.letters.size());
  return word;  // g = letters[0]·letters[1]···letters[k-1]
}

int FiniteQuotientGroup::mult(int a, int b) const {
  auto it = index_.find(mult_(payloads_[a], payloads_[b]));
  if (it == index_.end()) throw std::runtime_error("group: product not closed");
  return it->second;
}

int FiniteQuotientGroup::inverse(int a) const {
  // a^-1 is the unique b with a·b = e; found by walking a shortest word,
  // but a direct scan over generators of the BFS tree is simplest: follow
  // word_length decreasing neighbors.
  int cur = a;
  std::vector<int> word;  // generator indices whose product (right to left) is a
  while (cur != 0) {
    bool advanced = false;
    for (int s = 0; s < gens_.size(); ++s) {
      if (gens_.is_identity(s)) continue;
      int prev = gen_left_[gens_.inverse[s]][cur];  // s^-1 · cur
      if (word_length_[prev] == word_length_[cur] - 1) {
        word.push_back(s);
        cur = prev;
        advanced = true;
        break;
      }
    }
    if (!advanced) throw std::runtime_error("group: inverse walk failed");
  }
  // a = word[0]·word[1]···word[k-1], so a^-1 multiplies the generator
  // inverses in the same order on the left of the identity.
  int inv = 0;
  for (int s : word) inv = gen_left_[gens_.inverse[s]][inv];
  return inv;
}

std::optional<int> FiniteQuotientGroup::index_of(const Payload& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> FiniteQuotientGroup::word_lengths_from(int g) const {
  std::vector<int> dist(size(), -1);
  dist[g] = 0;
  std::deque<int> frontier{g};
  while (!frontier.empty()) {
    int h = frontier.front();
    frontier.pop_front();
    for (int s = 0; s < gens_.size(); ++s) {
      if (gens_.is_identity(s)) continue;
      int nh = gen_left_[s][h];
      if (dist[nh] < 0) {
        dist[nh] = dist[h] + 1;
        frontier.push_back(nh);
      }
    }
  }
  for (int d : dist)
    if (d < 0) throw std::runtime_error("generators do not generate");
  return dist;
}

int FiniteQuotientGroup::group_distance(int g, int g2) const {
  return word_lengths_from(g)[g2];
}

int FiniteQuotientGroup::diameter() const {
  if (diameter_ < 0)
    diameter_ = *std::max_element(word_length_.begin(), word_length_.end());
  return diameter_;
}

std::vector<std::pair<int, int>> FiniteQuotientGroup::word_ball(
    int radius) const {
  std::vector<std::pair<int, int>> ball;
  for (int h = 0; h < size(); ++h)
    if (word_length_[h] <= radius) ball.emplace_back(h, word_length_[h]);
  return ball;
}

Multigraph FiniteQuotientGroup::cayley_graph() const {
  Multigraph graph;
  graph.num_vertices = size();
  for (int s : gens_.inverse_pair_representatives()) {
    const bool involution = gens_.inverse[s] == s;
    for (int h = 0; h < size(); ++h) {
      int sh = gen_left_[s][h];
      if (involution && sh < h) continue;  // each unordered edge once
      graph.add_edge(h, sh);
    }
  }
  return graph;
}

void FiniteQuotientGroup::validate_axioms(std::uint64_t sample_seed) const {
  const int n = size();
  for (int a = 0; a < n; ++a) {
    if (mult(0, a) != a || mult(a, 0) != a)
      throw std::runtime_error("group axioms: identity fails");
    int inv = inverse(a);
    if (mult(a, inv) != 0 || mult(inv, a) != 0)
      throw std::runtime_error("group axioms: inverse fails");
  }
  auto check = [&](int a, int b, int c) {
    if (mult(mult(a, b), c) != mult(a, mult(b, c)))
      throw std::runtime_error("group axioms: associativity fails");
  };
  if (n <= 128) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) check(a, b, c);
  } else {
    std::mt19937_64 rng(sample_seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < 100000; ++i) check(pick(rng), pick(rng), pick(rng));
  }
}

namespace {

std::int64_t mod_nonneg(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

FiniteQuotientGroup cyclic_group(std::int64_t m) {
  if (m <= 0) throw std::invalid_argument("cyclic group: modulus must be positive");
  GeneratorSet gens;
  gens.symbols = {"id", "+1", "-1"};
  gens.inverse = {0, 2, 1};
  gens.identity_index = 0;
  using P = FiniteQuotientGroup::Payload;
  std::vector<P> payloads = {{0}, {mod_nonneg(1, m)}, {mod_nonneg(-1, m)}};
  auto mult = [m](const P& a, const P& b) -> P {
    return {mod_nonneg(a[0] + b[0], m)};
  };
  return FiniteQuotientGroup::enumerate(gens, payloads, {0}, mult);
}

FiniteQuotientGroup sl2_mod_group(std::int64_t m) {
  if (m <= 0) throw std::invalid_argument("SL2 group: modulus must be positive");
  GeneratorSet gens;
  gens.symbols = {"id", "E12(+1)", "E12(-1)", "E21(+1)", "E21(-1)"};
  gens.inverse = {0, 2, 1, 4, 3};
  gens.identity_index = 0;
  using P = FiniteQuotientGroup::Payload;
  auto mat = [&](std::int64_t a, std::int64_t b, std::int64_t c,
                 std::int64_t d) -> P {
    return {mod_nonneg(a, m), mod_nonneg(b, m), mod_nonneg(c, m),
            mod_nonneg(d, m)};
  };
  std::vector<P> payloads = {mat(1, 0, 0, 1), mat(1, 1, 0, 1), mat(1, -1, 0, 1),
                             mat(1, 0, 1, 1), mat(1, 0, -1, 1)};
  auto mult = [m, mat](const P& x, const P& y) -> P {
    return mat(x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
               x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]);
  };
  return FiniteQuotientGroup::enumerate(gens, payloads, mat(1, 0, 0, 1), mult);
}

FiniteQuotientGroup permutation_group(const std::vector<std::vector<int>>& perms,
                                      const std::vector<std::string>& labels) {
  if (perms.empty()) throw std::invalid_argument("permutation group: no generators");
  const std::size_t deg = perms[0].size();
  for (const auto& p : perms) {
    if (p.size() != deg)
      throw std::invalid_argument("permutation group: degree mismatch");
    std::vector<char> seen(deg, 0);
    for (int v : p) {
      if (v < 0 || static_cast<std::size_t>(v) >= deg || seen[v])
        throw std::invalid_argument("permutation group: not a bijection");
      seen[v] = 1;
    }
  }
  using P = FiniteQuotientGroup::Payload;
  P identity(deg);
  for (std::size_t i = 0; i < deg; ++i) identity[i] = static_cast<std::int64_t>(i);

  auto to_payload = [&](const std::vector<int>& p) {
    return P(p.begin(), p.end());
  };
  auto invert = [&](const P& p) {
    P inv(deg);
    for (std::size_t i = 0; i < deg; ++i) inv[p[i]] = static_cast<std::int64_t>(i);
    return inv;
  };

  GeneratorSet gens;
  gens.symbols.push_back("id");
  gens.inverse.push_back(0);
  gens.identity_index = 0;
  std::vector<P> payloads = {identity};
  for (std::size_t i = 0; i < perms.size(); ++i) {
    P p = to_payload(perms[i]);
    P pinv = invert(p);
    std::string base = i < labels.size() ? labels[i] : "g" + std::to_string(i);
    int idx = static_cast<int>(payloads.size());
    payloads.push_back(p);
    gens.symbols.push_back(base);
    if (pinv == p) {
      gens.inverse.push_back(idx);
    } else {
      payloads.push_back(pinv);
      gens.symbols.push_back(base + "^-1");
      gens.inverse.push_back(idx + 1);
      gens.inverse.push_back(idx);
    }
  }
  auto mult = [deg](const P& a, const P& b) -> P {
    P r(deg);
    for (std::size_t i = 0; i < deg; ++i) r[i] = a[b[i]];  // (a∘b)(i)
    return r;
  };
  return FiniteQuotientGroup::enumerate(gens, payloads, identity, mult);
}

}  // namespace warplab
