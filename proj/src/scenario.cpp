#include "warplab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "warplab/fixtures.hpp"
#include "warplab/spectral.hpp"

namespace warplab {

namespace {

GeneratorSet paired_generators(const std::vector<std::string>& names) {
  GeneratorSet gens;
  gens.symbols = {"id"};
  gens.inverse = {0};
  gens.identity_index = 0;
  for (const auto& base : names) {
    int idx = gens.size();
    gens.symbols.push_back(base);
    gens.symbols.push_back(base + "^-1");
    gens.inverse.push_back(idx + 1);
    gens.inverse.push_back(idx);
  }
  return gens;
}

WarpSystem<Rat> custom_system(const ConfigTable& table,
                              const std::vector<const ConfigTable*>& gen_tables) {
  const auto& rows = table.at("metric").as_list();
  const int n = static_cast<int>(rows.size());
  std::vector<Rat> dist(std::size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[i].as_list();
    if (static_cast<int>(row.size()) != n)
      throw std::runtime_error("custom fixture: metric must be square");
    for (int j = 0; j < n; ++j) dist[std::size_t(i) * n + j] = row[j].as_rational();
  }
  WarpSystem<Rat> sys;
  sys.space = FiniteMetricSpace<Rat>(n, std::move(dist),
                                     table.rational_or("scale", Rat(1)));
  sys.space.validate();

  std::vector<std::string> names;
  std::vector<std::vector<int>> perms;
  for (const auto* gt : gen_tables) {
    names.push_back(gt->string_or("label", "g" + std::to_string(names.size())));
    const auto& img = gt->at("perm").as_list();
    if (static_cast<int>(img.size()) != n)
      throw std::runtime_error("custom fixture: permutation size mismatch");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = static_cast<int>(img[i].as_integer());
    perms.push_back(std::move(perm));
  }
  sys.gens = paired_generators(names);
  sys.action.push_back([&] {
    std::vector<int> idp(n);
    for (int i = 0; i < n; ++i) idp[i] = i;
    return idp;
  }());
  for (const auto& perm : perms) {
    std::vector<int> inv(n, -1);
    for (int i = 0; i < n; ++i)
      if (perm[i] >= 0) inv[perm[i]] = i;
    sys.action.push_back(perm);
    sys.action.push_back(std::move(inv));
  }
  sys.finalize();
  return sys;
}

TruncatedCompletion chain_truncation(const ConfigTable& table) {
  const std::string group = table.string_or("group", "cyclic");
  const long long modulus = table.integer_or("modulus", 3);
  const int levels = static_cast<int>(table.integer_or("levels", 3));
  QuotientChain chain = group == "sl2" ? QuotientChain::sl2_tower(modulus, levels)
                                       : QuotientChain::cyclic_tower(modulus, levels);
  std::vector<Rat> weights;
  if (const auto* w = table.find("weights")) {
    for (const auto& v : w->as_list()) weights.push_back(v.as_rational());
  } else {
    // steepest convention-satisfying default: a_{n+1} = a_n / (diam + 1)
    Rat a(1);
    for (int n = 1; n <= levels; ++n) {
      weights.push_back(a);
      int diam = chain.group(n).diameter();
      a = a / Rat(diam + 1);
    }
  }
  auto ws = WeightSequence::for_chain(chain, std::move(weights));
  const int level = static_cast<int>(table.integer_or("level", levels));
  return TruncatedCompletion(std::move(chain), std::move(ws), level,
                             table.boolean_or("allow_convention_violation", false));
}

}  // namespace

WarpSystem<Rat> ResolvedFixture::exact_system(const Rat& scale) const {
  if (truncation) return truncation->warp_system(scale);
  if (system) {
    WarpSystem<Rat> sys = *system;
    sys.space.set_scale(scale);
    return sys;
  }
  throw std::runtime_error("fixture '" + name + "' has no exact warp system");
}

ResolvedFixture resolve_fixture(const ConfigTable& table) {
  ResolvedFixture fx;
  fx.name = table.string_or("kind", "fix-a");
  if (fx.name == "fix-a") {
    fx.system = fix_a_z8_rot(table.rational_or("scale", Rat(1)));
  } else if (fx.name == "fix-b") {
    fx.truncation = fix_b_truncation(static_cast<int>(table.integer_or("level", 3)));
  } else if (fx.name == "fix-c") {
    fx.torus = fix_c_model();
    fx.torus_gens = IntegerMatrixGens::elementary(2);
    fx.torus_start = fix_c_start();
  } else if (fx.name == "fix-d") {
    fx.system = fix_d_exp2_window(static_cast<int>(table.integer_or("window", 8)),
                                  table.rational_or("scale", Rat(1)));
  } else if (fx.name == "chain") {
    fx.truncation = chain_truncation(table);
  } else if (fx.name == "torus") {
    const int dim = static_cast<int>(table.integer_or("dim", 2));
    const long long q = table.integer_or("denominator", 6);
    fx.torus = RationalTorusModel(dim, q);
    fx.torus_gens = IntegerMatrixGens::elementary(dim);
    if (const auto* x = table.find("x")) {
      std::vector<std::int64_t> tuple;
      for (const auto& c : x->as_list()) {
        Rat r = c.as_rational();
        Rat scaled = r * Rat(q);
        if (scaled.denominator() != 1)
          throw std::runtime_error("torus fixture: point is not on the q-grid");
        tuple.push_back(to_ll(scaled.numerator()));
      }
      fx.torus_start = fx.torus->index_of(tuple);
    } else {
      fx.torus_start = fx.torus->index_of(std::vector<std::int64_t>(dim, 1));
    }
  } else if (fx.name == "custom") {
    throw std::runtime_error(
        "custom fixtures need the full config form (resolve via scenario)");
  } else {
    throw std::runtime_error("unknown fixture kind: " + fx.name);
  }
  return fx;
}

FiniteQuotientGroup load_group(const ConfigTable& table) {
  const std::string kind = table.string_or("kind", "cyclic");
  if (kind == "cyclic") return cyclic_group(table.integer_or("modulus", 5));
  if (kind == "sl2") return sl2_mod_group(table.integer_or("modulus", 3));
  if (kind == "permutation") {
    std::vector<std::vector<int>> perms;
    for (const auto& p : table.at("generators").as_list()) {
      std::vector<int> perm;
      for (const auto& v : p.as_list())
        perm.push_back(static_cast<int>(v.as_integer()));
      perms.push_back(std::move(perm));
    }
    return permutation_group(perms);
  }
  throw std::runtime_error("unknown group kind: " + kind);
}

ScenarioConfig ScenarioConfig::from_config(const Config& cfg) {
  ScenarioConfig sc;
  if (cfg.tables.count("fixture")) {
    const auto& ft = cfg.table("fixture");
    if (ft.string_or("kind", "") == "custom") {
      sc.fixture.name = "custom";
      sc.fixture.system = custom_system(ft, cfg.array("generator"));
    } else {
      sc.fixture = resolve_fixture(ft);
    }
  }
  if (cfg.tables.count("caps")) {
    const auto& ct = cfg.table("caps");
    sc.caps.max_points = ct.integer_or("max_points", sc.caps.max_points);
    sc.caps.max_ball_radius =
        static_cast<int>(ct.integer_or("max_ball_radius", sc.caps.max_ball_radius));
    sc.caps.max_orbit = static_cast<std::size_t>(
        ct.integer_or("max_orbit", static_cast<long long>(sc.caps.max_orbit)));
  }
  sc.exact = cfg.globals.string_or("arithmetic", "exact") != "float";
  sc.tolerance = to_double(cfg.globals.rational_or("tolerance", parse_rat("1/1000000000")));
  for (const auto& [name, t] : cfg.array_tables)
    if (name == "operation")
      sc.operations.emplace_back(t.string_or("op", "warp"), t);
  return sc;
}

// --------------------------------------------------------------------------
// operation handlers

namespace {

using Handler = void (*)(const ConfigTable&, const ResolvedFixture&,
                         const ResourceCaps&, OperationResult&);

void set_status(OperationResult& res, bool pass) {
  res.status = pass ? "pass" : "fail";
}

std::vector<double> as_double_matrix(const DistanceMatrix<Rat>& m) {
  std::vector<double> out(m.values.size());
  for (std::size_t i = 0; i < m.values.size(); ++i) out[i] = to_double(m.values[i]);
  return out;
}

void op_warp(const ConfigTable& params, const ResolvedFixture& fx,
             const ResourceCaps& caps, OperationResult& res) {
  if (fx.torus) {
    double scale = to_double(params.rational_or("scale", Rat(1)));
    auto sys = fx.torus->warp_system(*fx.torus_gens, scale);
    if (sys.size() > caps.max_points) throw std::runtime_error("cap: max_points");
    auto d = warped_metric(sys);
    auto serial = warped_metric_serial(sys);
    double max_dev = 0;
    for (std::size_t i = 0; i < d.values.size(); ++i)
      max_dev = std::max(max_dev, std::abs(d.values[i] - serial.values[i]));
    res.details["parallel_matches_serial"] = max_dev <= sys.space.tolerance();
    res.details["mode"] = "float";
    res.details["lipschitz_L"] = sys.lipschitz_L;
    res.tables.emplace_back("warped", matrix_csv(d));
    set_status(res, max_dev <= sys.space.tolerance());
    return;
  }
  auto sys = fx.exact_system(params.rational_or("scale", Rat(1)));
  if (sys.size() > caps.max_points) throw std::runtime_error("cap: max_points");
  auto d = warped_metric(sys);
  auto serial = warped_metric_serial(sys);
  bool same = d.values == serial.values;
  auto violation = check_warped_invariants(sys, d);
  res.details["parallel_matches_serial"] = same;
  res.details["invariants"] = violation ? Json(*violation) : Json("ok");
  res.details["truncated_action"] = sys.truncated;
  res.details["lipschitz_L"] = rat_json(sys.lipschitz_L);
  if (sys.size() <= 32) res.details["matrix"] = rat_matrix_json(d);
  res.tables.emplace_back("warped", matrix_csv(d));
  set_status(res, same && !violation);
}

void op_one_step(const ConfigTable& params, const ResolvedFixture& fx,
                 const ResourceCaps& caps, OperationResult& res) {
  auto sys = fx.exact_system(params.rational_or("scale", Rat(1)));
  auto d = warped_metric(sys);
  auto one = one_step_distance(sys, d, caps.max_ball_radius);
  bool sandwich = true;
  Json witness;
  for (int i = 0; i < sys.size() && sandwich; ++i)
    for (int j = 0; j < sys.size(); ++j) {
      bool lower = d.at(i, j) <= one.values.at(i, j);
      bool upper =
          lipschitz_upper_ok(sys.lipschitz_L, d.at(i, j), one.values.at(i, j));
      if (!lower || !upper) {
        sandwich = false;
        witness = {{"pair", {i, j}},
                   {"warped", rat_string(d.at(i, j))},
                   {"one_step", rat_string(one.values.at(i, j))}};
        break;
      }
    }
  bool collapse_ok = true;
  if (sys.isometric)
    collapse_ok = one.values.values == d.values;
  res.details["isometric"] = sys.isometric;
  res.details["sandwich_holds"] = sandwich;
  res.details["isometric_collapse"] = collapse_ok;
  res.details["max_ball_radius_used"] = one.max_radius_used;
  if (!witness.empty()) res.details["witness"] = witness;
  res.tables.emplace_back("one_step", matrix_csv(one.values));
  set_status(res, sandwich && collapse_ok);
}

void op_stabilization(const ConfigTable& params, const ResolvedFixture& fx,
                      const ResourceCaps&, OperationResult& res) {
  auto sys = fx.exact_system(Rat(1));
  int y = static_cast<int>(params.integer_or("from", 0));
  int y2 = static_cast<int>(params.integer_or("to", sys.size() - 1));
  auto threshold = stabilization_threshold(sys, y, y2);
  res.details["same_orbit"] = threshold.same_orbit;
  if (!threshold.same_orbit) {
    set_status(res, true);
    return;
  }
  res.details["word_distance"] = threshold.word_distance;
  res.details["s_star"] = rat_string(threshold.s_star);
  bool ok = true;
  if (threshold.s_star > Rat(0)) {
    for (const Rat& s : {threshold.s_star, Rat(2) * threshold.s_star}) {
      auto level = level_metric(sys, s);
      if (!(level.at(y, y2) == Rat(threshold.word_distance))) ok = false;
    }
  }
  res.details["level_metric_freezes"] = ok;
  set_status(res, ok);
}

void op_delta(const ConfigTable& params, const ResolvedFixture& fx,
              const ResourceCaps&, OperationResult& res) {
  auto sys = fx.exact_system(Rat(1));
  int n_max = static_cast<int>(params.integer_or("n_max", 4));
  auto table = delta_table(sys, n_max);
  bool monotone = true;
  for (int k = 0; k < n_max; ++k)
    for (std::size_t i = 0; i < table.levels[k].size(); ++i)
      if (table.levels[k + 1][i] > table.levels[k][i]) monotone = false;
  res.details["n_max"] = n_max;
  res.details["monotone_nonincreasing"] = monotone;
  for (int k = 0; k <= n_max; ++k) {
    DistanceMatrix<Rat> lvl;
    lvl.n = table.n;
    lvl.values = table.levels[k];
    res.tables.emplace_back("delta_" + std::to_string(k), matrix_csv(lvl));
  }
  set_status(res, monotone);
}

void op_level(const ConfigTable& params, const ResolvedFixture& fx,
              const ResourceCaps&, OperationResult& res) {
  auto sys = fx.exact_system(Rat(1));
  Rat s = params.rational_or("scale", Rat(2));
  auto level = level_metric(sys, s);
  auto rescaled = sys;
  rescaled.space.set_scale(s);
  auto direct = warped_metric(rescaled);
  bool equal = level.values == direct.values;
  res.details["scale"] = rat_json(s);
  res.details["matches_rescaled_warp"] = equal;
  if (!equal) {
    for (int i = 0; i < level.n && res.details.count("witness") == 0; ++i)
      for (int j = 0; j < level.n; ++j)
        if (!(level.at(i, j) == direct.at(i, j))) {
          res.details["witness"] = {{"pair", {i, j}},
                                    {"level", rat_string(level.at(i, j))},
                                    {"dijkstra", rat_string(direct.at(i, j))}};
          break;
        }
  }
  res.tables.emplace_back("level", matrix_csv(level));
  set_status(res, equal);
}

void op_slice(const ConfigTable& params, const ResolvedFixture& fx,
              const ResourceCaps&, OperationResult& res) {
  if (!fx.truncation) throw std::runtime_error("slice: fixture has no chain");
  const auto& trunc = *fx.truncation;
  Rat s = params.rational_or("scale", Rat(4));
  auto closed = trunc.slice_metric_closed_form(s);
  auto direct = warped_metric(trunc.warp_system(s));
  bool equal = closed.values == direct.values;
  res.details["scale"] = rat_json(s);
  if (Rat(2) < trunc.weights().a[0])
    res.details["note"] = "a_1 exceeds 2; cone statements assume diameter <= 2";
  res.details["closed_form_matches_dijkstra"] = equal;
  if (!equal) {
    for (int i = 0; i < closed.n && res.details.count("witness") == 0; ++i)
      for (int j = 0; j < closed.n; ++j)
        if (!(closed.at(i, j) == direct.at(i, j))) {
          res.details["witness"] = {{"pair", {i, j}},
                                    {"closed_form", rat_string(closed.at(i, j))},
                                    {"dijkstra", rat_string(direct.at(i, j))}};
          break;
        }
  }
  bool sandwich_ok = true;
  if (largest_scale_index(trunc, s) >= 1) {
    auto dec = slice_decomposition(trunc, s);
    for (std::size_t i = 0; i < closed.values.size(); ++i) {
      if (dec.d_prime.values[i] > Rat(2) * closed.values[i] ||
          closed.values[i] > dec.d_prime.values[i] + Rat(1))
        sandwich_ok = false;
    }
    res.details["n_s"] = dec.n_s;
    res.details["decomposition_sandwich"] = sandwich_ok;
  } else {
    res.details["decomposition_sandwich"] = "below first scale";
  }
  res.tables.emplace_back("slice", matrix_csv(closed));
  set_status(res, equal && sandwich_ok);
}

void op_section_scale(const ConfigTable& params, const ResolvedFixture& fx,
                      const ResourceCaps&, OperationResult& res) {
  if (!fx.truncation) throw std::runtime_error("section: fixture has no chain");
  const auto& trunc = *fx.truncation;
  bool all_ok = true;
  Json rows = Json::array();
  int n_lo = 1, n_hi = trunc.level();
  if (params.has("level"))
    n_lo = n_hi = static_cast<int>(params.at("level").as_integer());
  for (int n = n_lo; n <= n_hi; ++n) {
    auto report = section_scale_check(trunc, n);
    rows.push_back({{"n", n},
                    {"s_n", rat_string(report.s_n)},
                    {"vacuous", report.vacuous},
                    {"holds", report.certificate_holds},
                    {"max_upper_deviation", rat_string(report.max_upper_deviation)},
                    {"worst_pair", {report.worst_pair.first, report.worst_pair.second}}});
    all_ok = all_ok && report.certificate_holds;
  }
  res.details["sections"] = rows;
  set_status(res, all_ok);
}

void op_box(const ConfigTable&, const ResolvedFixture& fx, const ResourceCaps&,
            OperationResult& res) {
  if (!fx.truncation) throw std::runtime_error("box: fixture has no chain");
  auto levels = box_space(fx.truncation->chain());
  Json rows = Json::array();
  for (const auto& lv : levels) {
    rows.push_back({{"n", lv.level}, {"order", lv.order}, {"diameter", lv.diameter}});
    res.tables.emplace_back("cayley_" + std::to_string(lv.level),
                            lv.cayley.to_edge_list());
  }
  res.details["levels"] = rows;
  set_status(res, true);
}

void op_spectral(const ConfigTable& params, const ResolvedFixture& fx,
                 const ResourceCaps&, OperationResult& res) {
  std::vector<Multigraph> graphs;
  std::vector<std::pair<int, int>> n_order;
  if (params.has("input")) {
    std::ifstream in(params.at("input").as_string());
    if (!in) throw std::runtime_error("spectral: cannot open edge list");
    std::ostringstream buf;
    buf << in.rdbuf();
    graphs.push_back(Multigraph::from_edge_list(buf.str()));
    n_order.emplace_back(1, graphs.back().num_vertices);
  } else if (fx.truncation) {
    auto levels = box_space(fx.truncation->chain());
    for (const auto& lv : levels) {
      graphs.push_back(lv.cayley);
      n_order.emplace_back(lv.level, lv.order);
    }
  } else if (fx.torus) {
    auto orb = orbit(*fx.torus, *fx.torus_gens, fx.torus_start);
    graphs.push_back(orb.schreier_graph(fx.torus_gens->labels));
    n_order.emplace_back(1, orb.size());
  } else {
    throw std::runtime_error("spectral: no graph source");
  }
  auto report = expander_family_report(graphs);
  std::vector<std::array<double, 3>> rows;
  Json jrows = Json::array();
  for (const auto& row : report.rows) {
    rows.push_back({row.lambda2, row.cheeger_lower, row.cheeger_upper});
    jrows.push_back({{"order", row.order},
                     {"lambda2", row.lambda2},
                     {"cheeger_lower", row.cheeger_lower},
                     {"cheeger_upper", row.cheeger_upper}});
  }
  res.details["rows"] = jrows;
  res.details["classification"] = report.classification;
  res.details["min_gap"] = report.min_gap;
  res.tables.emplace_back("spectra", spectra_csv(rows, n_order));
  set_status(res, true);
}

std::vector<PointEmbedding> box_cycle_embeddings(const TruncatedCompletion& trunc) {
  std::vector<PointEmbedding> out;
  for (int n = 1; n <= trunc.level(); ++n) {
    const auto& g = trunc.chain().group(n);
    if (g.gens().size() != 3)
      throw std::runtime_error("box embeddings are built in for cyclic chains only");
    out.push_back(cycle_embedding(g));
  }
  return out;
}

void op_embed_box(const ConfigTable& params, const ResolvedFixture& fx,
                  const ResourceCaps&, OperationResult& res) {
  if (!fx.truncation) throw std::runtime_error("embed-box: fixture has no chain");
  const auto& trunc = *fx.truncation;
  Rat s = params.rational_or("scale", Rat(4));
  auto box = box_cycle_embeddings(trunc);
  auto result = slice_embedding_from_box(trunc, s, box);
  auto d_s = as_double_matrix(trunc.slice_metric_closed_form(s));
  auto rho_minus = [](double r) { return 2.0 / M_PI * r; };
  auto rho_plus = [](double r) { return r; };
  auto check = check_slice_embedding(result, d_s, trunc.num_points(), rho_minus,
                                     rho_plus);
  res.details["scale"] = rat_json(s);
  res.details["n_s"] = result.n_s;
  res.details["bernstein_l"] = result.l;
  res.details["below_first_scale"] = result.below_first_scale;
  res.details["roundtrip_error"] = result.roundtrip_error;
  res.details["coarse_bounds_hold"] = check.coarse_bounds_hold;
  res.details["pairs_checked"] = check.pairs_checked;

  auto prof = compression_profile(result.embedding, d_s, trunc.num_points());
  res.tables.emplace_back("profile", profile_csv(prof.breakpoints,
                                                 prof.rho_minus, prof.rho_plus));
  std::ostringstream emb;
  for (int g = 0; g < result.embedding.num_points(); ++g) {
    emb << g;
    for (int c = 0; c < result.embedding.dim(); ++c)
      emb << "," << result.embedding.vectors(g, c);
    emb << "\n";
  }
  res.tables.emplace_back("embedding", emb.str());
  set_status(res, check.coarse_bounds_hold);
}

void op_embed_cone(const ConfigTable& params, const ResolvedFixture& fx,
                   const ResourceCaps&, OperationResult& res) {
  if (!fx.truncation) throw std::runtime_error("embed-cone: fixture has no chain");
  const auto& trunc = *fx.truncation;
  auto box = box_cycle_embeddings(trunc);
  int n_lo = static_cast<int>(params.integer_or("n_lo", 1));
  int n_hi = static_cast<int>(params.integer_or("n_hi", trunc.level()));

  std::vector<PointEmbedding> slices;
  std::vector<CompressionProfile> profiles;
  for (int n = n_lo; n <= n_hi; ++n) {
    Rat s(CheckedInt(1) << n);
    auto result = slice_embedding_from_box(trunc, s, box);
    auto d_s = as_double_matrix(trunc.slice_metric_closed_form(s));
    profiles.push_back(
        compression_profile(result.embedding, d_s, trunc.num_points()));
    slices.push_back(std::move(result.embedding));
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

  std::vector<double> scales;
  std::vector<std::vector<double>> level_metrics;
  for (int n = n_lo; n < n_hi; ++n) {
    for (int quarter = 0; quarter < 4; ++quarter) {
      Rat s = Rat(CheckedInt(1) << n) * (Rat(4) + Rat(quarter)) / Rat(4);
      scales.push_back(to_double(s));
      level_metrics.push_back(as_double_matrix(trunc.slice_metric_closed_form(s)));
    }
  }
  scales.push_back(std::ldexp(1.0, n_hi));
  level_metrics.push_back(
      as_double_matrix(trunc.slice_metric_closed_form(Rat(CheckedInt(1) << n_hi))));

  auto cone = cone_embedding_from_slices(slices, n_lo, scales);
  auto check = check_cone_embedding(cone, level_metrics, rho_minus, rho_plus);
  res.details["levels"] = {n_lo, n_hi};
  res.details["actual_D"] = cone.actual_D;
  res.details["pairs_checked"] = check.pairs_checked;
  res.details["far_case_ok"] = check.far_case_ok;
  res.details["near_upper_ok"] = check.near_upper_ok;
  res.details["near_lower_ok"] = check.near_lower_ok;
  set_status(res, check.far_case_ok && check.near_upper_ok && check.near_lower_ok);
}

void op_hr(const ConfigTable& params, const ResolvedFixture& fx,
           const ResourceCaps&, OperationResult& res) {
  if (!fx.truncation) throw std::runtime_error("hr: fixture has no chain");
  const auto& trunc = *fx.truncation;
  Rat s = params.rational_or("scale", Rat(8));
  Rat R = params.rational_or("radius", Rat(3));
  auto single = singleton_hr(trunc, s, R);
  auto cert = verify_hr(single.family);
  res.details["singleton"] = {
      {"n_star", single.n_star},
      {"variation", rat_string(cert.max_variation)},
      {"worst_pair", {cert.worst_pair.first, cert.worst_pair.second}},
      {"support_radius", rat_string(cert.max_support_radius)},
      {"claimed_bound", rat_string(single.claimed_support_bound)},
      {"S_below_R", single.family.S < R},
      {"passes", cert.passes}};
  bool ok = cert.passes && cert.max_variation == Rat(0) && single.family.S < R;

  std::ostringstream sparse;
  sparse << "point,support_point,mass\n";
  for (int g = 0; g < single.family.n; ++g)
    for (const auto& [tgt, mass] : single.family.assignment[g])
      sparse << g << "," << tgt << "," << rat_string(mass) << "\n";
  res.tables.emplace_back("singleton_family", sparse.str());

  if (params.boolean_or("cone", false)) {
    auto base = trunc.warp_system();
    int r_max = static_cast<int>(params.integer_or("r_max", 8));
    std::vector<SliceFamilyInput> slices;
    for (int m = 1; m <= r_max; ++m) {
      SliceFamilyInput input;
      input.level = m;
      input.assignment = singleton_hr(trunc, Rat(m), R).family.assignment;
      slices.push_back(std::move(input));
    }
    Rat eps(0);
    for (const auto& sf : slices) {
      auto dm = level_metric(base, Rat(sf.level));
      for (int y = 0; y < base.size(); ++y)
        for (int y2 = y + 1; y2 < base.size(); ++y2)
          if (dm.at(y, y2) <= R)
            eps = rat_max(eps, l1_distance(sf.assignment[y], sf.assignment[y2]));
    }
    if (eps == Rat(0)) eps = Rat(1);
    auto cone = cone_hr_from_slice_hr(base, slices, R, eps, r_max);
    res.details["cone"] = {
        {"M", cone.M},
        {"epsilon", rat_string(eps)},
        {"support_bound", rat_string(cone.support_bound)},
        {"support_radius", rat_string(cone.cone_support_radius)},
        {"support_ok", cone.support_ok},
        {"same_level_variation", rat_string(cone.max_same_level_variation)},
        {"radial_variation", rat_string(cone.max_radial_variation)},
        {"combined_variation", rat_string(cone.max_combined_variation)},
        {"variation_ok", cone.variation_ok}};
    ok = ok && cone.support_ok && cone.variation_ok;

    Json marg_rows = Json::array();
    for (std::size_t ri = 0; ri < cone.sample_radii.size(); ++ri) {
      if (cone.sample_radii[ri].denominator() != 1) continue;
      auto marg = marginalize_cone_hr(cone, base, static_cast<int>(ri));
      marg_rows.push_back({{"radius", rat_string(cone.sample_radii[ri])},
                           {"contraction_ok", marg.contraction_ok},
                           {"support_ok", marg.support_ok}});
      ok = ok && marg.contraction_ok && marg.support_ok;
    }
    res.details["marginalization"] = marg_rows;
  }
  set_status(res, ok);
}

void op_induced_kernel(const ConfigTable& params, const ResolvedFixture& fx,
                       const ResourceCaps&, OperationResult& res) {
  if (!fx.truncation) throw std::runtime_error("induced-kernel: fixture has no chain");
  const auto& g = fx.truncation->top_group();
  const int n = g.size();
  int radius = static_cast<int>(params.integer_or("radius", 3));
  std::uint64_t seed = static_cast<std::uint64_t>(params.integer_or("seed", 5));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd v(n, 3);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < 3; ++d) v(i, d) = gauss(rng);
    v.row(i).normalize();
  }
  Eigen::MatrixXd kernel = v * v.transpose();
  auto result = induced_group_kernel(g, kernel, radius);
  res.details["ball_size"] = result.ball.size();
  res.details["min_gram_eigenvalue"] = result.min_gram_eigenvalue;
  res.details["psd_ok"] = result.psd_ok;
  set_status(res, result.psd_ok);
}

void op_stabilizer(const ConfigTable& params, const ResolvedFixture&,
                   const ResourceCaps& caps, OperationResult& res) {
  std::vector<std::int64_t> q;
  if (const auto* qv = params.find("coprime")) {
    for (const auto& v : qv->as_list()) q.push_back(v.as_integer());
  } else {
    q = {2, 3};
  }
  int m_max = static_cast<int>(params.integer_or("power", 2));
  int radius = static_cast<int>(params.integer_or("radius", 4));
  if (radius > caps.max_ball_radius) throw std::runtime_error("cap: max_ball_radius");
  auto report = nested_stabilizer_check(q, m_max, radius);
  res.details["ball_size"] = report.ball_size;
  res.details["routes_agree"] = report.routes_agree;
  res.details["nested"] = report.nested;
  res.details["m_trivial"] = report.m_trivial;
  res.details["trivial_intersection_ok"] = report.trivial_intersection_ok;
  Json fixers = Json::array();
  for (const auto& m : report.fixers_within_m_max) fixers.push_back(m.str());
  res.details["fixers_within_m_max"] = fixers;
  set_status(res, report.routes_agree && report.nested &&
                      report.trivial_intersection_ok);
}

void op_orbit(const ConfigTable& params, const ResolvedFixture& fx,
              const ResourceCaps& caps, OperationResult& res) {
  if (!fx.torus) throw std::runtime_error("orbit: fixture has no torus model");
  auto orb = orbit(*fx.torus, *fx.torus_gens, fx.torus_start, caps.max_orbit);
  res.details["orbit_size"] = orb.size();
  std::ostringstream table;
  for (int i = 0; i < orb.size(); ++i) {
    for (int j = 0; j < orb.size(); ++j)
      table << (j ? "," : "") << orb.dist(i, j);
    table << "\n";
  }
  res.tables.emplace_back("word_distance", table.str());
  res.tables.emplace_back("schreier",
                          orb.schreier_graph(fx.torus_gens->labels).to_edge_list());

  double s_star = orbit_stabilization_scale(*fx.torus, *fx.torus_gens,
                                            fx.torus_start);
  res.details["s_star"] = s_star;
  double s = params.has("scale") ? to_double(params.at("scale").as_rational())
                                 : 2 * std::max(s_star, 1.0);
  auto check = embedded_expander_check(*fx.torus, *fx.torus_gens, fx.torus_start, s);
  res.details["scale"] = s;
  res.details["isometric_match"] = check.isometric_match;
  res.details["max_abs_error"] = check.max_abs_error;
  set_status(res, check.isometric_match);
}

void op_divergence(const ConfigTable& params, const ResolvedFixture& fx,
                   const ResourceCaps&, OperationResult& res) {
  if (!fx.system) throw std::runtime_error("divergence: needs the window fixture");
  int window = static_cast<int>(params.integer_or("window", 8));
  int n_max = static_cast<int>(params.integer_or("n", 6));
  auto sys = *fx.system;
  auto d = warped_metric(sys);
  std::ostringstream table;
  table << "n,half_step,warped,ratio\n";
  Rat prev_ratio(0);
  bool increasing = true, bounded = true;
  for (int n = 1; n <= n_max; ++n) {
    int x = fix_d_index(window, n, -n);
    int x2 = fix_d_index(window, n + 1, 0);
    auto half = half_step_distance(sys, x, x2);
    Rat ratio = half.value / d.at(x, x2);
    table << n << "," << rat_string(half.value) << "," << rat_string(d.at(x, x2))
          << "," << rat_string(ratio) << "\n";
    if (!(prev_ratio < ratio)) increasing = false;
    if (d.at(x, x2) > Rat(2)) bounded = false;
    prev_ratio = ratio;
  }
  res.details["ratio_strictly_increasing"] = increasing;
  res.details["warped_bounded_by_2"] = bounded;
  res.tables.emplace_back("divergence", table.str());
  set_status(res, increasing && bounded);
}

void op_group(const ConfigTable& params, const ResolvedFixture&,
              const ResourceCaps&, OperationResult& res) {
  auto g = load_group(params);
  g.validate_axioms();
  res.details["order"] = g.size();
  res.details["diameter"] = g.diameter();
  res.tables.emplace_back("cayley", g.cayley_graph().to_edge_list());
  set_status(res, true);
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"warp", op_warp},
      {"one-step", op_one_step},
      {"stabilization", op_stabilization},
      {"delta", op_delta},
      {"level", op_level},
      {"slice", op_slice},
      {"section-scale", op_section_scale},
      {"box", op_box},
      {"spectral", op_spectral},
      {"embed-box", op_embed_box},
      {"embed-cone", op_embed_cone},
      {"hr", op_hr},
      {"induced-kernel", op_induced_kernel},
      {"stabilizer", op_stabilizer},
      {"orbit", op_orbit},
      {"divergence", op_divergence},
      {"group", op_group},
  };
  return table;
}

}  // namespace

OperationResult run_operation(const std::string& op, const ConfigTable& params,
                              const ResolvedFixture& fixture,
                              const ResourceCaps& caps) {
  OperationResult res;
  res.op = op;
  for (const auto& [k, v] : params.values) {
    switch (v.kind) {
      case ConfigValue::Kind::string: res.params[k] = v.str; break;
      case ConfigValue::Kind::rational: res.params[k] = rat_string(v.rational); break;
      case ConfigValue::Kind::boolean: res.params[k] = v.boolean; break;
      case ConfigValue::Kind::list: res.params[k] = "<list>"; break;
    }
  }
  auto it = handlers().find(op);
  if (it == handlers().end()) throw std::runtime_error("unknown operation: " + op);
  try {
    it->second(params, fixture, caps, res);
  } catch (const OrbitCapExceeded& e) {
    res.status = "truncated";
    res.details["truncation_marker"] = e.what();
  } catch (const BallRadiusOverflow& e) {
    res.status = "truncated";
    res.details["truncation_marker"] = e.what();
    res.details["required_bound"] = e.required_bound;
  } catch (const std::runtime_error& e) {
    if (std::string(e.what()).rfind("cap:", 0) == 0) {
      res.status = "truncated";
      res.details["truncation_marker"] = e.what();
    } else {
      res.status = "error";
      res.details["error"] = e.what();
    }
  }
  return res;
}

RunReport run_scenario(const ScenarioConfig& scenario) {
  RunReport report;
  report.fixture = scenario.fixture.name;
  for (const auto& [op, params] : scenario.operations) {
    auto result = run_operation(op, params, scenario.fixture, scenario.caps);
    bool stop = result.status == "fail" || result.status == "error";
    report.operations.push_back(std::move(result));
    if (stop) break;  // certificate disagreement aborts with the witness
  }
  return report;
}

}  // namespace warplab
