#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "warplab/group.hpp"

using namespace warplab;

TEST_CASE("word balls of Z/5") {
  auto g = cyclic_group(5);
  REQUIRE(g.size() == 5);
  g.validate_axioms();

  auto b0 = g.word_ball(0);
  REQUIRE(b0.size() == 1);
  CHECK(b0[0] == std::pair<int, int>{0, 0});

  auto b1 = g.word_ball(1);
  CHECK(b1.size() == 3);
  for (auto [e, len] : b1) {
    long long residue = g.payload(e)[0];
    if (residue == 0) CHECK(len == 0);
    if (residue == 1 || residue == 4) CHECK(len == 1);
  }

  auto b2 = g.word_ball(2);
  CHECK(b2.size() == 5);
  std::vector<int> by_residue(5);
  for (auto [e, len] : b2) by_residue[g.payload(e)[0]] = len;
  CHECK(by_residue == std::vector<int>{0, 1, 2, 2, 1});
}

TEST_CASE("group distance is the right-invariant word metric") {
  auto z5 = cyclic_group(5);
  auto at = [&](const FiniteQuotientGroup& g, long long r) {
    return *g.index_of({r});
  };
  CHECK(z5.group_distance(at(z5, 0), at(z5, 0)) == 0);
  CHECK(z5.group_distance(at(z5, 0), at(z5, 3)) == 2);

  auto z9 = cyclic_group(9);
  CHECK(z9.group_distance(at(z9, 0), at(z9, 4)) == 4);

  // symmetry on all pairs
  for (int a = 0; a < z9.size(); ++a) {
    auto from_a = z9.word_lengths_from(a);
    for (int b = 0; b < z9.size(); ++b)
      CHECK(from_a[b] == z9.word_lengths_from(b)[a]);
  }
}

TEST_CASE("Cayley graphs of cyclic groups") {
  auto z3 = cyclic_group(3);
  auto g3 = z3.cayley_graph();
  CHECK(g3.num_vertices == 3);
  CHECK(g3.edges.size() == 3);  // triangle, one edge per generator pair
  for (int d : g3.degrees()) CHECK(d == 2);

  auto z8 = cyclic_group(8);
  auto g8 = z8.cayley_graph();
  CHECK(g8.edges.size() == 8);
  CHECK(g8.connected());
  for (int d : g8.degrees()) CHECK(d == 2);

  auto z1 = cyclic_group(1);
  auto g1 = z1.cayley_graph();
  CHECK(g1.num_vertices == 1);
  REQUIRE(g1.edges.size() == 1);  // the +1/-1 pair becomes a self-loop
  CHECK(g1.edges[0] == std::pair<int, int>{0, 0});
}

TEST_CASE("group distance agrees with Cayley shortest paths") {
  for (long long m : {6, 9, 16}) {
    auto g = cyclic_group(m);
    auto graph = g.cayley_graph();
    auto adj = graph.adjacency();
    for (int src = 0; src < g.size(); ++src) {
      std::vector<int> dist(g.size(), -1);
      std::vector<int> frontier{src};
      dist[src] = 0;
      for (std::size_t qi = 0; qi < frontier.size(); ++qi) {
        int u = frontier[qi];
        for (int v : adj[u])
          if (dist[v] < 0) {
            dist[v] = dist[u] + 1;
            frontier.push_back(v);
          }
      }
      auto wl = g.word_lengths_from(src);
      CHECK(wl == dist);
    }
  }
}

TEST_CASE("word balls are nested and exhaust the group at the diameter") {
  auto g = sl2_mod_group(3);
  REQUIRE(g.size() == 24);
  g.validate_axioms();
  std::set<int> prev;
  for (int r = 0; r <= g.diameter(); ++r) {
    std::set<int> cur;
    for (auto [e, len] : g.word_ball(r)) {
      CHECK(len <= r);
      cur.insert(e);
    }
    for (int e : prev) CHECK(cur.count(e) == 1);
    prev = cur;
  }
  CHECK(static_cast<int>(prev.size()) == g.size());
}

TEST_CASE("SL2 quotient orders follow the congruence formula") {
  CHECK(sl2_mod_group(3).size() == 24);
  CHECK(sl2_mod_group(9).size() == 648);
  // |SL2(Z/3^k)| = 24·27^(k-1)
}

TEST_CASE("explicit permutation groups") {
  // rotation and reflection generating the dihedral group of the square
  auto rot = std::vector<int>{1, 2, 3, 0};
  auto flip = std::vector<int>{1, 0, 3, 2};
  auto d4 = permutation_group({rot, flip});
  CHECK(d4.size() == 8);
  d4.validate_axioms();

  auto just_rot = permutation_group({rot});
  CHECK(just_rot.size() == 4);
}

TEST_CASE("generator set validation rejects broken pairings") {
  GeneratorSet gens;
  gens.symbols = {"id", "a"};
  gens.inverse = {0, 0};
  gens.identity_index = 0;
  CHECK_THROWS_AS(gens.validate(), std::invalid_argument);

  gens.inverse = {0, 1};
  CHECK_NOTHROW(gens.validate());  // self-inverse generator is fine

  gens.identity_index = -1;
  CHECK_THROWS_AS(gens.validate(), std::invalid_argument);
}

TEST_CASE("declared size mismatch is reported as non-generation") {
  GeneratorSet gens;
  gens.symbols = {"id", "+2", "-2"};
  gens.inverse = {0, 2, 1};
  gens.identity_index = 0;
  using P = FiniteQuotientGroup::Payload;
  auto mult = [](const P& a, const P& b) -> P { return {(a[0] + b[0]) % 6}; };
  // +2 generates only the even residues of Z/6
  CHECK_THROWS_WITH_AS(
      FiniteQuotientGroup::enumerate(gens, {P{0}, P{2}, P{4}}, P{0}, mult,
                                     std::size_t{6}),
      "generators do not generate the declared group", std::runtime_error);
}

TEST_CASE("group distance matches Cayley shortest paths on SL2(Z/9)") {
  auto g = sl2_mod_group(9);
  REQUIRE(g.size() == 648);  // within the exhaustive-check regime
  auto adj = g.cayley_graph().adjacency();
  for (int src = 0; src < g.size(); src += 1) {
    std::vector<int> dist(g.size(), -1);
    std::vector<int> frontier{src};
    dist[src] = 0;
    for (std::size_t qi = 0; qi < frontier.size(); ++qi) {
      int u = frontier[qi];
      for (int v : adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          frontier.push_back(v);
        }
    }
    CHECK(g.word_lengths_from(src) == dist);
  }
}

TEST_CASE("shortest words multiply back to their element") {
  auto g = sl2_mod_group(3);
  for (int e = 0; e < g.size(); ++e) {
    auto word = g.shortest_word(e);
    CHECK(word.length == g.word_length(e));
    int prod = g.identity();
    for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it)
      prod = g.gen_mult(*it, prod);
    CHECK(prod == e);
  }
}
