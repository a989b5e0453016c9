#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "warplab/embedding.hpp"
#include "warplab/fixtures.hpp"

using namespace warplab;

namespace {

std::vector<double> to_double_matrix(const DistanceMatrix<Rat>& m) {
  std::vector<double> out(m.values.size());
  for (std::size_t i = 0; i < m.values.size(); ++i) out[i] = to_double(m.values[i]);
  return out;
}

PointEmbedding line_embedding(const std::vector<double>& xs) {
  PointEmbedding e;
  e.p = 2.0;
  e.vectors = Eigen::MatrixXd::Zero(xs.size(), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) e.vectors(i, 0) = xs[i];
  return e;
}

std::vector<double> line_metric(const std::vector<double>& xs) {
  const int n = static_cast<int>(xs.size());
  std::vector<double> m(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[std::size_t(i) * n + j] = std::abs(xs[i] - xs[j]);
  return m;
}

PointEmbedding random_embedding(std::uint64_t seed, int n, int dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  PointEmbedding e;
  e.p = 2.0;
  e.vectors = Eigen::MatrixXd::Zero(n, dim);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < dim; ++d) e.vectors(i, d) = gauss(rng);
  return e;
}

}  // namespace

TEST_CASE("compression profile of an isometric line embedding is the identity") {
  std::vector<double> xs = {0, 1, 2.5, 4};
  auto prof = compression_profile(line_embedding(xs), line_metric(xs), 4);
  for (std::size_t k = 0; k < prof.breakpoints.size(); ++k) {
    CHECK(prof.rho_minus[k] == doctest::Approx(prof.breakpoints[k]));
    CHECK(prof.rho_plus[k] == doctest::Approx(prof.breakpoints[k]));
  }
  CHECK(prof.coarse_on_instance);
}

TEST_CASE("constant embeddings are flagged non-coarse") {
  std::vector<double> xs = {0, 1, 2};
  auto prof = compression_profile(line_embedding({5, 5, 5}), line_metric(xs), 3);
  CHECK(!prof.coarse_on_instance);
  for (double v : prof.rho_plus) CHECK(v == 0.0);
}

TEST_CASE("compression profile matches a direct pair scan") {
  auto trunc = fix_b_truncation(2);
  auto emb = random_embedding(3, trunc.num_points(), 3);
  auto metric = to_double_matrix(trunc.slice_metric_closed_form(Rat(4)));
  auto prof = compression_profile(emb, metric, trunc.num_points());
  // independent scan at a few thresholds
  for (double r : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    bool any_lo = false;
    for (int i = 0; i < trunc.num_points(); ++i)
      for (int j = i + 1; j < trunc.num_points(); ++j) {
        double d = metric[std::size_t(i) * trunc.num_points() + j];
        double nrm = emb.pair_norm(i, j);
        if (d >= r) {
          lo = std::min(lo, nrm);
          any_lo = true;
        }
        if (d <= r) hi = std::max(hi, nrm);
      }
    if (any_lo) CHECK(prof.rho_minus_at(r) == doctest::Approx(lo));
    CHECK(prof.rho_plus_at(r) == doctest::Approx(hi));
  }
}

TEST_CASE("concave envelopes: sqrt stays fixed, staircase flattens") {
  std::vector<double> grid, f, F;
  for (double t = 1.0; t <= 110.0; t += 0.01) {
    grid.push_back(t);
    f.push_back(std::sqrt(t));
    F.push_back(std::sqrt(t));
  }
  auto env = concave_envelopes(grid, f, F, 1.0, 1.0);
  for (std::size_t i = 0; i < grid.size(); i += 997)
    CHECK(env.c[i] == doctest::Approx(f[i]).epsilon(1e-9));

  std::vector<double> f2, F2;
  for (double t : grid) {
    double v = t < 4.0 ? 1.0 : 10.0;
    f2.push_back(v);
    F2.push_back(v);
  }
  auto env2 = concave_envelopes(grid, f2, F2, 1.0, 1.0);
  CHECK(env2.c_at(2.0) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(env2.c_at(8.0) == doctest::Approx(2.0).epsilon(0.01));
  CHECK(env2.c_at(100.0) == doctest::Approx(10.0).epsilon(0.01));

  std::vector<double> f3, F3;
  for (double t : grid) {
    f3.push_back(3.0 * t);
    F3.push_back(3.0 * t);
  }
  auto env3 = concave_envelopes(grid, f3, F3, 1.0, 3.0);
  for (std::size_t i = 0; i < grid.size(); i += 1499)
    CHECK(env3.c[i] == doctest::Approx(f3[i]).epsilon(1e-9));
}

TEST_CASE("envelope laws hold on random monotone samples") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> step(0.0, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> grid, f, F;
    double fv = 0.5 + step(rng), Fv = fv + 1.0;
    for (double t = 1.0; t <= 20.0; t += 0.05) {
      grid.push_back(t);
      fv += step(rng);
      Fv += step(rng);
      Fv = std::max(Fv, fv);  // keep F above f and monotone
      f.push_back(fv);
      F.push_back(Fv);
    }
    auto env = concave_envelopes(grid, f, F, 1.0, 0.5);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(env.c[i] <= f[i] + 1e-9);
      CHECK(env.C[i] >= F[i] - 1e-9);
      if (i > 0) {
        CHECK(env.c[i] + 1e-9 >= env.c[i - 1]);
        CHECK(env.C[i] + 1e-9 >= env.C[i - 1]);
      }
    }
    // theta-homogeneity on grid pairs
    for (std::size_t i = 0; i < grid.size(); i += 37)
      for (std::size_t j = i; j < grid.size(); j += 37) {
        double theta = grid[i] / grid[j];
        CHECK(env.c[i] + 1e-9 >= theta * env.c[j]);
        CHECK(env.C[i] <= theta * env.C[j] + 1e-9);
      }
  }
  CHECK_THROWS_AS(concave_envelopes({1.0, 2.0}, {2.0, 1.0}, {2.0, 2.5}, 1.0, 0.5),
                  std::invalid_argument);
}

TEST_CASE("product embedding: two 2-point factors with isometric lines") {
  PointEmbedding f1 = line_embedding({0, 2});
  auto m1 = line_metric({0, 2});
  std::vector<double> grid;
  std::vector<double> id_samples;
  for (double t = 2.0; t <= 5.0; t += 0.01) {
    grid.push_back(t);
    id_samples.push_back(t);
  }
  auto env = concave_envelopes(grid, id_samples, id_samples, 2.0, 2.0);
  auto prod = product_embedding({f1, f1}, {m1, m1}, 1.0, 2.0, 2.0, env);
  CHECK(prod.bounds_hold);
  int idx00 = prod.point_index({0, 0});
  int idx11 = prod.point_index({1, 1});
  CHECK(prod.embedding.pair_norm(idx00, idx11) == doctest::Approx(4.0));
  // bounds hold with equality there: c(4) = 4 = C(4)
  CHECK(env.c_at(4.0) == doctest::Approx(4.0));

  // single factor reduces to the factor embedding
  auto single = product_embedding({f1}, {m1}, 2.0, 2.0, 2.0, env);
  CHECK(single.bounds_hold);
  CHECK(single.embedding.pair_norm(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("product bound on a 3-fold power, p in {1,2,3}") {
  std::vector<double> xs = {0.0, 1.0, 3.0};
  auto base = line_embedding(xs);
  auto metric = line_metric(xs);
  std::vector<double> grid, id;
  for (double t = 1.0; t <= 12.0; t += 0.005) {
    grid.push_back(t);
    id.push_back(t);
  }
  auto env = concave_envelopes(grid, id, id, 1.0, 1.0);
  for (double p : {1.0, 2.0, 3.0}) {
    auto prod = product_embedding({base, base, base}, {metric, metric, metric},
                                  p, 1.0, 1.0, env);
    CHECK(prod.bounds_hold);
    CHECK(prod.worst_lower_slack >= -1e-9);
    CHECK(prod.worst_upper_slack >= -1e-9);
  }
  CHECK_THROWS_AS(product_embedding({line_embedding({0, 0.5})},
                                    {line_metric({0, 0.5})}, 2.0, 1.0, 1.0, env),
                  std::invalid_argument);
}

TEST_CASE("squared-distance kernels: frozen collinear example") {
  auto emb = line_embedding({0, 1, 3});
  auto k = embedding_to_neg_kernel(emb);
  CHECK(k.values(0, 1) == doctest::Approx(1.0));
  CHECK(k.values(0, 2) == doctest::Approx(9.0));
  CHECK(k.values(1, 2) == doctest::Approx(4.0));
  CHECK(k.kind == KernelMatrix::Kind::negative_type);

  auto zero = embedding_to_neg_kernel(line_embedding({0, 0, 0}));
  CHECK(zero.values.cwiseAbs().maxCoeff() == 0.0);

  PointEmbedding l1 = line_embedding({0, 1});
  l1.p = 1.0;
  CHECK_THROWS_AS(embedding_to_neg_kernel(l1), std::invalid_argument);
}

TEST_CASE("kernel to embedding round trip") {
  auto emb = line_embedding({0, 1, 3});
  auto k = embedding_to_neg_kernel(emb);
  auto rec = neg_kernel_to_embedding(k);
  CHECK(rec.pair_norm(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rec.pair_norm(1, 2) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(rec.pair_norm(0, 2) == doctest::Approx(3.0).epsilon(1e-6));

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto rnd = random_embedding(seed, 8, 4);
    auto kr = embedding_to_neg_kernel(rnd);
    auto rr = neg_kernel_to_embedding(kr, static_cast<int>(seed % 8));
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j) {
        double want = rnd.pair_norm(i, j);
        CHECK(rr.pair_norm(i, j) == doctest::Approx(want).epsilon(1e-6));
      }
  }

  // zero kernel -> zero embedding
  KernelMatrix zk;
  zk.values = Eigen::MatrixXd::Zero(3, 3);
  zk.kind = KernelMatrix::Kind::negative_type;
  auto zrec = neg_kernel_to_embedding(zk);
  CHECK(zrec.vectors.cwiseAbs().maxCoeff() == 0.0);

  // a kernel violating negative type is rejected with a witness
  KernelMatrix bad;
  bad.values = Eigen::MatrixXd::Zero(3, 3);
  bad.values(0, 1) = bad.values(1, 0) = 1.0;
  bad.values(1, 2) = bad.values(2, 1) = 1.0;
  bad.values(0, 2) = bad.values(2, 0) = 9.0;  // way beyond any l2 square
  CHECK_THROWS_AS(neg_kernel_to_embedding(bad), KernelNotNegativeType);
}

TEST_CASE("bernstein truncation: closed-form value and ratio bound") {
  auto emb = line_embedding({0, 1});
  auto k = embedding_to_neg_kernel(emb);
  auto bern = bernstein_truncate(k, 1.0);
  CHECK(bern.kernel.values(0, 1) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(bern.negative_type_ok);
  CHECK(bern.ratio_bound_ok);

  for (std::uint64_t seed = 21; seed <= 40; ++seed) {
    auto rnd = random_embedding(seed, 7, 3);
    auto kr = embedding_to_neg_kernel(rnd);
    for (double l : {0.25, 1.0, 4.0}) {
      auto b = bernstein_truncate(kr, l);
      CHECK(b.negative_type_ok);
      CHECK(b.ratio_bound_ok);
      CHECK(b.min_ratio >= 1.0 - std::exp(-1.0) - 1e-12);
      CHECK(b.max_ratio <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("slice embedding from box embeddings on the cyclic tower") {
  auto trunc = fix_b_truncation(3);
  std::vector<PointEmbedding> box;
  for (int n = 1; n <= 3; ++n)
    box.push_back(cycle_embedding(trunc.chain().group(n)));

  auto result = slice_embedding_from_box(trunc, Rat(4), box);
  CHECK(result.n_s == 2);
  CHECK(result.l == doctest::Approx(4.0));  // (4·a_2)^2 = 4
  CHECK(!result.below_first_scale);
  CHECK(result.roundtrip_error < 1e-6);

  auto rho_minus = [](double r) { return 2.0 / M_PI * r; };
  auto rho_plus = [](double r) { return r; };
  for (const Rat& s : {Rat(2), Rat(4), Rat(8), Rat(16)}) {
    auto res = slice_embedding_from_box(trunc, s, box);
    auto d_s = to_double_matrix(trunc.slice_metric_closed_form(s));
    auto check = check_slice_embedding(res, d_s, trunc.num_points(), rho_minus,
                                       rho_plus);
    CHECK(check.coarse_bounds_hold);
  }

  // below the first scale: flagged, Bernstein-only block
  auto low = slice_embedding_from_box(trunc, Rat(1, 2), box);
  CHECK(low.below_first_scale);
}

TEST_CASE("slice profile at the section scale matches the box profile up to 1") {
  auto trunc = fix_b_truncation(3);
  std::vector<PointEmbedding> box;
  for (int n = 1; n <= 3; ++n)
    box.push_back(cycle_embedding(trunc.chain().group(n)));
  auto r2 = section_scale_check(trunc, 2);
  auto res = slice_embedding_from_box(trunc, r2.s_n, box);

  const int n = trunc.num_points();
  auto d_s = to_double_matrix(trunc.slice_metric_closed_form(r2.s_n));
  std::vector<double> delta2(std::size_t(n) * n);
  for (int g = 0; g < n; ++g)
    for (int g2 = 0; g2 < n; ++g2)
      delta2[std::size_t(g) * n + g2] = trunc.delta(2, g, g2);

  auto prof_d = compression_profile(res.embedding, d_s, n);
  auto prof_b = compression_profile(res.embedding, delta2, n);
  for (double r = 0.0; r <= 6.0; r += 0.25) {
    // delta_2 <= d_s <= delta_2 + 1 shifts profiles by at most 1 in r
    CHECK(prof_d.rho_plus_at(r) <= prof_b.rho_plus_at(r) + 1e-9);
    CHECK(prof_b.rho_plus_at(r) <= prof_d.rho_plus_at(r + 1.0) + 1e-9);
    CHECK(prof_d.rho_minus_at(r) <= prof_b.rho_minus_at(r) + 1e-9);
    CHECK(prof_b.rho_minus_at(r) <= prof_d.rho_minus_at(r + 1.0) + 1e-9);
  }
}

TEST_CASE("cone embedding: constant slices collapse to the radial coordinate") {
  PointEmbedding zero;
  zero.p = 2.0;
  zero.vectors = Eigen::MatrixXd::Zero(5, 2);
  auto cone = cone_embedding_from_slices({zero, zero, zero}, 1,
                                         {2.0, 3.0, 4.0, 6.0, 8.0});
  CHECK(cone.actual_D == 0.0);
  for (std::size_t si = 0; si < cone.sample_scales.size(); ++si)
    for (int y = 0; y < 5; ++y) {
      int r = cone.row(static_cast<int>(si), y);
      CHECK(cone.embedding.vectors(r, 0) == cone.sample_scales[si]);
      CHECK(cone.embedding.vectors.row(r).tail(4).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("cone embedding: identical slices interpolate continuously") {
  auto trunc = fix_b_truncation(2);
  auto phi = cycle_embedding(trunc.chain().group(2));
  PointEmbedding lifted;
  lifted.p = 2.0;
  lifted.vectors = Eigen::MatrixXd::Zero(trunc.num_points(), phi.dim());
  for (int g = 0; g < trunc.num_points(); ++g)
    lifted.vectors.row(g) = phi.vectors.row(trunc.project(g, 2));
  auto cone = cone_embedding_from_slices({lifted, lifted}, 1, {2.0, 3.0, 4.0});
  // the convex combination of equal vectors is constant in s
  for (int y = 0; y < trunc.num_points(); ++y) {
    auto a = cone.embedding.vectors.row(cone.row(0, y)).tail(2 * phi.dim());
    auto b = cone.embedding.vectors.row(cone.row(2, y)).tail(2 * phi.dim());
    Eigen::VectorXd suma = a.head(phi.dim()) + a.tail(phi.dim());
    Eigen::VectorXd sumb = b.head(phi.dim()) + b.tail(phi.dim());
    CHECK((suma - sumb).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cone embedding rejects oversized slices when a bound is declared") {
  PointEmbedding big;
  big.p = 2.0;
  big.vectors = Eigen::MatrixXd::Constant(4, 1, 100.0);
  PointEmbedding small;
  small.p = 2.0;
  small.vectors = Eigen::MatrixXd::Zero(4, 1);
  CHECK_THROWS_AS(
      cone_embedding_from_slices({small, big}, 1, {2.0, 4.0}, 1.0),
      SliceLevelTooLarge);
}

TEST_CASE("cone embedding inequalities hold on cyclic-tower samples") {
  auto trunc = fix_b_truncation(3);
  std::vector<PointEmbedding> box;
  for (int n = 1; n <= 3; ++n)
    box.push_back(cycle_embedding(trunc.chain().group(n)));

  std::vector<PointEmbedding> slices;
  std::vector<CompressionProfile> profiles;
  for (int n = 1; n <= 3; ++n) {
    Rat s(1 << n);
    auto res = slice_embedding_from_box(trunc, s, box);
    auto d_s = to_double_matrix(trunc.slice_metric_closed_form(s));
    profiles.push_back(
        compression_profile(res.embedding, d_s, trunc.num_points()));
    slices.push_back(std::move(res.embedding));
  }
  auto rho_minus = [&](double r) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : profiles) m = std::min(m, p.rho_minus_at(r));
    return std::isinf(m) ? 0.0 : m;
  };
  auto rho_plus = [&](double r) {
    double m = 0;
    for (const auto& p : profiles) m = std::max(m, p.rho_plus_at(r));
    return m;
  };

  std::vector<double> scales = {2.0, 2.5, 3.0, 4.0, 5.0, 6.5, 8.0};
  std::vector<std::vector<double>> level_metrics;
  for (double s : scales) {
    Rat sr(CheckedInt(llround(s * 2)), CheckedInt(2));
    level_metrics.push_back(to_double_matrix(trunc.slice_metric_closed_form(sr)));
  }
  auto cone = cone_embedding_from_slices(slices, 1, scales);
  auto check = check_cone_embedding(cone, level_metrics, rho_minus, rho_plus);
  CHECK(check.pairs_checked > 10000);
  CHECK(check.far_case_ok);
  CHECK(check.near_upper_ok);
  CHECK(check.near_lower_ok);
}

TEST_CASE("affine upper envelopes are flagged") {
  std::vector<double> xs = {0, 1, 2, 3.5};
  auto prof = compression_profile(line_embedding(xs), line_metric(xs), 4);
  CHECK(prof.rho_plus_affine);

  std::vector<double> bent = {0, 1, 4, 9};  // quadratic spacing
  auto prof2 = compression_profile(line_embedding(bent),
                                   line_metric({0, 1, 2, 3}), 4);
  CHECK(!prof2.rho_plus_affine);
}
