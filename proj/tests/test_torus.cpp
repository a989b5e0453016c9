#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "warplab/torus.hpp"

using namespace warplab;

TEST_CASE("torus model basics and metric validation") {
  auto model = fix_c_model();
  CHECK(model.num_points() == 36);
  model.validate_metric();

  // quotient distance wraps around: 5/6 and 0 are 1/6 apart
  int a = model.index_of({5, 0});
  int b = model.index_of({0, 0});
  CHECK(model.squared_distance(a, b) == Rat(1, 36));
}

TEST_CASE("generator matrices act as bijections with exact inverses") {
  auto model = fix_c_model();
  auto gens = IntegerMatrixGens::elementary(2);
  gens.validate();
  for (int s = 0; s < gens.labels.size(); ++s) {
    auto perm = model.permutation(gens.matrices[s]);
    auto inv = model.permutation(gens.matrices[gens.labels.inverse[s]]);
    std::vector<char> seen(model.num_points(), 0);
    for (int x = 0; x < model.num_points(); ++x) {
      CHECK(!seen[perm[x]]);
      seen[perm[x]] = 1;
      CHECK(inv[perm[x]] == x);
    }
  }
}

TEST_CASE("orbits: fixed point, small orbit, FIX-C orbit") {
  auto model = fix_c_model();
  auto gens = IntegerMatrixGens::elementary(2);

  auto zero = orbit(model, gens, model.index_of({0, 0}));
  CHECK(zero.size() == 1);

  // (1/2, 0): nonzero points of (Z/2)^2 embedded at denominator 6
  auto half = orbit(model, gens, model.index_of({3, 0}));
  CHECK(half.size() == 3);
  std::vector<int> dists;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) dists.push_back(half.dist(i, j));
  CHECK(*std::max_element(dists.begin(), dists.end()) == 2);

  auto fixc = orbit(model, gens, fix_c_start());
  CHECK(fixc.size() <= 36);
  // independent count: the orbit is the set of primitive vectors mod 6
  int primitive = 0;
  for (int x = 0; x < 36; ++x) {
    auto t = model.tuple_of(x);
    if (std::gcd(std::gcd(t[0], t[1]), std::int64_t{6}) == 1) ++primitive;
  }
  CHECK(fixc.size() == primitive);
  CHECK(fixc.size() == 24);
}

TEST_CASE("orbit word distances are symmetric and satisfy the triangle inequality") {
  auto model = fix_c_model();
  auto gens = IntegerMatrixGens::elementary(2);
  auto orb = orbit(model, gens, fix_c_start());
  for (int i = 0; i < orb.size(); ++i)
    for (int j = 0; j < orb.size(); ++j) {
      CHECK(orb.dist(i, j) == orb.dist(j, i));
      for (int k = 0; k < orb.size(); ++k)
        CHECK(orb.dist(i, j) <= orb.dist(i, k) + orb.dist(k, j));
    }
}

TEST_CASE("orbit cap raises a partial-orbit error") {
  auto model = fix_c_model();
  auto gens = IntegerMatrixGens::elementary(2);
  CHECK_THROWS_AS(orbit(model, gens, fix_c_start(), 5), OrbitCapExceeded);
}

TEST_CASE("stabilizer congruences: frozen examples") {
  auto id = IntMat::identity(2);
  auto cid = stabilizer_congruence_check(id, {2, 3}, 1);
  CHECK(cid.fixes_direct);
  CHECK(cid.fixes_congruence);
  CHECK(cid.agree);

  IntMat fixer;
  fixer.dim = 2;
  fixer.at(0, 0) = 1;
  fixer.at(0, 1) = 3;
  fixer.at(1, 0) = 2;
  fixer.at(1, 1) = 7;
  auto cfix = stabilizer_congruence_check(fixer, {2, 3}, 1);
  CHECK(cfix.fixes_direct);
  CHECK(cfix.fixes_congruence);
  CHECK(cfix.agree);

  auto shear = stabilizer_congruence_check(IntMat::elementary(2, 0, 1, 1), {2, 3}, 1);
  CHECK(!shear.fixes_direct);  // moves (1/2,1/3) to (5/6,1/3)
  CHECK(!shear.fixes_congruence);
  CHECK(shear.agree);
}

TEST_CASE("stabilizer check validates its inputs") {
  auto id = IntMat::identity(2);
  CHECK_THROWS_AS(stabilizer_congruence_check(id, {2, 4}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(stabilizer_congruence_check(id, {1, 3}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(stabilizer_congruence_check(IntMat::elementary(2, 0, 1, 1) *
                                                  IntMat::elementary(2, 0, 1, 1),
                                              {2}, 1),
                  std::invalid_argument);  // dim mismatch
}

TEST_CASE("nested stabilizers over the radius-4 ball") {
  auto report = nested_stabilizer_check({2, 3}, 2, 4);
  CHECK(report.routes_agree);
  CHECK(report.nested);
  CHECK(report.trivial_intersection_ok);
  CHECK(report.ball_size > 100);

  // E21(4) = E21(1)^4 has word length 4 and fixes both x_1 = (1/2, 1/3)
  // and x_2 = (1/4, 1/9); it drops out at m = 3.
  IntMat e21_4 = IntMat::elementary(2, 1, 0, 4);
  bool found = false;
  for (const auto& m : report.fixers_within_m_max)
    if (m == e21_4) found = true;
  CHECK(found);
  CHECK(!stabilizer_congruence_check(e21_4, {2, 3}, 3).fixes_direct);
  CHECK(stabilizer_congruence_check(e21_4, {2, 3}, 2).fixes_direct);
}

TEST_CASE("embedded expander certificate on the 3-point orbit") {
  auto model = fix_c_model();
  auto gens = IntegerMatrixGens::elementary(2);
  int start = model.index_of({3, 0});
  double s_star = orbit_stabilization_scale(model, gens, start);
  CHECK(s_star > 0);
  auto report = embedded_expander_check(model, gens, start, 2 * s_star);
  CHECK(report.orbit_size == 3);
  CHECK(report.isometric_match);
  CHECK(report.max_abs_error < 1e-9);
  CHECK_THROWS_AS(embedded_expander_check(model, gens, start, 0.5 * s_star),
                  ScaleBelowThreshold);
}

TEST_CASE("orbit sizes grow with the first denominator") {
  auto gens = IntegerMatrixGens::elementary(2);
  std::size_t prev = 0;
  for (std::int64_t q1 : {2, 3, 5, 7}) {
    RationalTorusModel model(2, q1);
    auto orb = orbit(model, gens, model.index_of({1, 0}));
    CHECK(prev < static_cast<std::size_t>(orb.size()));
    prev = orb.size();
  }
}

TEST_CASE("schreier graph of an orbit is regular and connected") {
  auto model = fix_c_model();
  auto gens = IntegerMatrixGens::elementary(2);
  auto orb = orbit(model, gens, fix_c_start());
  auto graph = orb.schreier_graph(gens.labels);
  CHECK(graph.num_vertices == orb.size());
  CHECK(graph.connected());
  for (int d : graph.degrees()) CHECK(d == 4);
}
