#include "warplab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace warplab {

IntMat IntMat::identity(int dim) {
  IntMat m;
  m.dim = dim;
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

IntMat IntMat::elementary(int dim, int i, int j, std::int64_t v) {
  IntMat m = identity(dim);
  m.at(i, j) = v;
  return m;
}

IntMat IntMat::operator*(const IntMat& o) const {
  IntMat r;
  r.dim = dim;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < dim; ++k) s += at(i, k) * o.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

bool IntMat::operator<(const IntMat& o) const {
  if (dim != o.dim) return dim < o.dim;
  return a < o.a;
}

std::int64_t IntMat::det() const {
  if (dim == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
  if (dim == 3)
    return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
           at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
           at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
  throw std::invalid_argument("det: dim must be 2 or 3");
}

std::string IntMat::str() const {
  std::ostringstream out;
  out << "[";
  for (int i = 0; i < dim; ++i) {
    out << (i ? ";" : "") << "[";
    for (int j = 0; j < dim; ++j) out << (j ? "," : "") << at(i, j);
    out << "]";
  }
  out << "]";
  return out.str();
}

IntegerMatrixGens IntegerMatrixGens::elementary(int dim) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("elementary generators: dim must be 2 or 3");
  IntegerMatrixGens gens;
  gens.labels.symbols.push_back("id");
  gens.labels.inverse.push_back(0);
  gens.labels.identity_index = 0;
  gens.matrices.push_back(IntMat::identity(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (i == j) continue;
      int base = static_cast<int>(gens.matrices.size());
      std::string name = "E" + std::to_string(i + 1) + std::to_string(j + 1);
      gens.matrices.push_back(IntMat::elementary(dim, i, j, 1));
      gens.labels.symbols.push_back(name + "(+1)");
      gens.matrices.push_back(IntMat::elementary(dim, i, j, -1));
      gens.labels.symbols.push_back(name + "(-1)");
      gens.labels.inverse.push_back(base + 1);
      gens.labels.inverse.push_back(base);
    }
  gens.validate();
  return gens;
}

void IntegerMatrixGens::validate() const {
  labels.validate();
  if (matrices.size() != static_cast<std::size_t>(labels.size()))
    throw std::invalid_argument("matrix generators: size mismatch");
  for (int s = 0; s < labels.size(); ++s) {
    if (matrices[s].det() != 1)
      throw std::invalid_argument("matrix generators: determinant must be 1");
    IntMat prod = matrices[s] * matrices[labels.inverse[s]];
    if (!(prod == IntMat::identity(prod.dim)))
      throw std::invalid_argument("matrix generators: inverse pairing broken");
  }
}

RationalTorusModel::RationalTorusModel(int dim, std::int64_t q)
    : dim_(dim), q_(q) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("torus: dim must be 1..3");
  if (q < 1) throw std::invalid_argument("torus: denominator must be positive");
  std::int64_t n = 1;
  for (int i = 0; i < dim; ++i) n *= q;
  if (n > 200000) throw std::invalid_argument("torus: too many points");
  n_ = static_cast<int>(n);
}

int RationalTorusModel::index_of(const std::vector<std::int64_t>& tuple) const {
  if (static_cast<int>(tuple.size()) != dim_)
    throw std::invalid_argument("torus: tuple arity mismatch");
  std::int64_t idx = 0;
  for (int i = 0; i < dim_; ++i) {
    std::int64_t k = ((tuple[i] % q_) + q_) % q_;
    idx = idx * q_ + k;
  }
  return static_cast<int>(idx);
}

std::vector<std::int64_t> RationalTorusModel::tuple_of(int idx) const {
  std::vector<std::int64_t> t(dim_);
  std::int64_t v = idx;
  for (int i = dim_ - 1; i >= 0; --i) {
    t[i] = v % q_;
    v /= q_;
  }
  return t;
}

Rat RationalTorusModel::squared_distance(int a, int b) const {
  auto ta = tuple_of(a), tb = tuple_of(b);
  CheckedInt num = 0;
  for (int i = 0; i < dim_; ++i) {
    std::int64_t d = std::abs(ta[i] - tb[i]);
    d = std::min(d, q_ - d);
    num += CheckedInt(d) * d;
  }
  return Rat(num, CheckedInt(q_) * q_);
}

double RationalTorusModel::distance(int a, int b) const {
  return std::sqrt(to_double(squared_distance(a, b)));
}

int RationalTorusModel::apply(const IntMat& m, int idx) const {
  if (m.dim != dim_) throw std::invalid_argument("torus: matrix dim mismatch");
  auto t = tuple_of(idx);
  std::vector<std::int64_t> r(dim_);
  for (int i = 0; i < dim_; ++i) {
    std::int64_t s = 0;
    for (int j = 0; j < dim_; ++j) s += m.at(i, j) * t[j];
    r[i] = s;
  }
  return index_of(r);
}

std::vector<int> RationalTorusModel::permutation(const IntMat& m) const {
  std::vector<int> perm(n_);
  for (int idx = 0; idx < n_; ++idx) perm[idx] = apply(m, idx);
  return perm;
}

void RationalTorusModel::validate_metric(std::size_t exhaustive_cap,
                                         std::uint64_t sample_seed) const {
  auto triangle_ok = [&](int x, int y, int z) {
    // sqrt(A) <= sqrt(B) + sqrt(C) for exact squared values
    Rat A = squared_distance(x, y);
    Rat B = squared_distance(x, z);
    Rat C = squared_distance(z, y);
    Rat gap = A - B - C;
    if (gap <= Rat(0)) return true;
    return gap * gap <= Rat(4) * B * C;
  };
  const std::size_t total = std::size_t(n_) * n_ * n_;
  if (total <= exhaustive_cap) {
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y) {
        if (!(squared_distance(x, y) == squared_distance(y, x)))
          throw std::logic_error("torus metric: asymmetric");
        for (int z = 0; z < n_; ++z)
          if (!triangle_ok(x, y, z))
            throw std::logic_error("torus metric: triangle inequality fails");
      }
  } else {
    std::mt19937_64 rng(sample_seed);
    std::uniform_int_distribution<int> pick(0, n_ - 1);
    for (int it = 0; it < 200000; ++it)
      if (!triangle_ok(pick(rng), pick(rng), pick(rng)))
        throw std::logic_error("torus metric: triangle inequality fails");
  }
}

WarpSystem<double> RationalTorusModel::warp_system(const IntegerMatrixGens& gens,
                                                   double scale,
                                                   double tolerance) const {
  std::vector<double> dist(std::size_t(n_) * n_, 0.0);
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b) {
      double d = distance(a, b);
      dist[std::size_t(a) * n_ + b] = d;
      dist[std::size_t(b) * n_ + a] = d;
    }
  WarpSystem<double> sys;
  sys.space = FiniteMetricSpace<double>(n_, std::move(dist), scale, tolerance);
  sys.gens = gens.labels;
  for (const auto& m : gens.matrices) sys.action.push_back(permutation(m));
  sys.finalize();
  return sys;
}

Orbit orbit(const RationalTorusModel& model, const IntegerMatrixGens& gens,
            int start, std::size_t cap) {
  Orbit orb;
  orb.position.assign(model.num_points(), -1);
  orb.position[start] = 0;
  orb.points.push_back(start);
  std::deque<int> frontier{start};
  while (!frontier.empty()) {
    if (orb.points.size() > cap)
      throw OrbitCapExceeded(cap, frontier.size());
    int u = frontier.front();
    frontier.pop_front();
    for (int s = 0; s < gens.labels.size(); ++s) {
      if (gens.labels.is_identity(s)) continue;
      int v = model.apply(gens.matrices[s], u);
      if (orb.position[v] < 0) {
        orb.position[v] = orb.size();
        orb.points.push_back(v);
        frontier.push_back(v);
      }
    }
  }
  const int k = orb.size();
  orb.action.assign(gens.labels.size(), std::vector<int>(k));
  for (int s = 0; s < gens.labels.size(); ++s)
    for (int p = 0; p < k; ++p)
      orb.action[s][p] = orb.position[model.apply(gens.matrices[s], orb.points[p])];

  orb.word_distance.assign(std::size_t(k) * k, -1);
  for (int src = 0; src < k; ++src) {
    auto* row = &orb.word_distance[std::size_t(src) * k];
    row[src] = 0;
    std::deque<int> q{src};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int s = 0; s < gens.labels.size(); ++s) {
        if (gens.labels.is_identity(s)) continue;
        int v = orb.action[s][u];
        if (row[v] < 0) {
          row[v] = row[u] + 1;
          q.push_back(v);
        }
      }
    }
  }
  return orb;
}

Multigraph Orbit::schreier_graph(const GeneratorSet& gens) const {
  Multigraph g;
  g.num_vertices = size();
  for (int s : gens.inverse_pair_representatives()) {
    const bool involution = gens.inverse[s] == s;
    for (int p = 0; p < size(); ++p) {
      int sp = action[s][p];
      if (involution && sp < p) continue;
      g.add_edge(p, sp);
    }
  }
  return g;
}

StabilizerCertificate stabilizer_congruence_check(
    const IntMat& matrix, const std::vector<std::int64_t>& q, int m) {
  if (static_cast<int>(q.size()) != matrix.dim)
    throw std::invalid_argument("stabilizer check: one q_i per dimension");
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 1)
      throw std::invalid_argument("stabilizer check: q_i must exceed 1");
    for (std::size_t j = i + 1; j < q.size(); ++j)
      if (std::gcd(q[i], q[j]) != 1)
        throw std::invalid_argument("stabilizer check: q_i must be pairwise coprime");
  }
  if (matrix.det() != 1)
    throw std::invalid_argument("stabilizer check: determinant must be 1");

  StabilizerCertificate cert;
  cert.matrix = matrix;
  cert.q = q;
  cert.m = m;

  // direct route: A·x_m - x_m must be an integer vector, x_m = (q_i^{-m})
  auto qpow = [&](std::size_t i) {
    CheckedInt p = 1;
    for (int e = 0; e < m; ++e) p *= q[i];
    return p;
  };
  cert.fixes_direct = true;
  for (int i = 0; i < matrix.dim; ++i) {
    Rat row(0);
    for (int j = 0; j < matrix.dim; ++j)
      row += Rat(CheckedInt(matrix.at(i, j)), qpow(j));
    row -= Rat(CheckedInt(1), qpow(i));
    if (row.denominator() != 1) cert.fixes_direct = false;
  }

  // congruence route
  cert.fixes_congruence = true;
  for (int i = 0; i < matrix.dim; ++i)
    for (int t = 0; t < matrix.dim; ++t) {
      CongruenceEntry e;
      e.i = i;
      e.t = t;
      e.value = matrix.at(i, t);
      e.modulus = to_ll(qpow(t));
      e.expected = (i == t) ? 1 : 0;
      std::int64_t r = ((e.value - e.expected) % e.modulus + e.modulus) % e.modulus;
      e.holds = (r == 0);
      if (!e.holds) cert.fixes_congruence = false;
      cert.congruences.push_back(e);
    }
  cert.agree = (cert.fixes_direct == cert.fixes_congruence);
  return cert;
}

std::vector<std::pair<IntMat, int>> sln_word_ball(int dim, int radius) {
  auto gens = IntegerMatrixGens::elementary(dim);
  std::vector<std::pair<IntMat, int>> ball;
  std::map<IntMat, int> seen;
  IntMat id = IntMat::identity(dim);
  seen[id] = 0;
  ball.emplace_back(id, 0);
  std::size_t begin = 0;
  for (int depth = 1; depth <= radius; ++depth) {
    std::size_t end = ball.size();
    for (std::size_t idx = begin; idx < end; ++idx) {
      for (int s = 0; s < gens.labels.size(); ++s) {
        if (gens.labels.is_identity(s)) continue;
        IntMat next = gens.matrices[s] * ball[idx].first;
        if (seen.emplace(next, depth).second) ball.emplace_back(next, depth);
      }
    }
    begin = end;
  }
  return ball;
}

NestedStabilizerReport nested_stabilizer_check(
    const std::vector<std::int64_t>& q, int m_max, int radius) {
  NestedStabilizerReport report;
  report.q = q;
  report.m_max = m_max;
  report.radius = radius;
  auto ball = sln_word_ball(static_cast<int>(q.size()), radius);
  report.ball_size = ball.size();
  report.routes_agree = true;
  report.nested = true;

  // depth at which the congruences pin every entry of a ball matrix
  std::int64_t max_entry = 1;
  for (const auto& [mat, len] : ball)
    for (int i = 0; i < mat.dim; ++i)
      for (int j = 0; j < mat.dim; ++j)
        max_entry = std::max(max_entry, std::abs(mat.at(i, j)));
  report.m_trivial = 1;
  for (std::int64_t qi : q) {
    std::int64_t p = qi;
    int m = 1;
    while (p <= 2 * max_entry + 1) {
      p *= qi;
      ++m;
    }
    report.m_trivial = std::max(report.m_trivial, m);
  }

  const int m_deep = std::max(m_max, report.m_trivial);
  IntMat id = IntMat::identity(static_cast<int>(q.size()));
  report.trivial_intersection_ok = true;
  for (const auto& [mat, len] : ball) {
    std::vector<bool> fixes(m_deep + 1, false);
    for (int m = 1; m <= m_deep; ++m) {
      auto cert = stabilizer_congruence_check(mat, q, m);
      if (!cert.agree) report.routes_agree = false;
      fixes[m] = cert.fixes_congruence;
    }
    for (int m = 1; m < m_max; ++m)
      if (fixes[m + 1] && !fixes[m]) report.nested = false;
    bool fixes_shallow = true;
    for (int m = 1; m <= m_max; ++m) fixes_shallow = fixes_shallow && fixes[m];
    if (fixes_shallow && !(mat == id)) report.fixers_within_m_max.push_back(mat);
    bool fixes_deep = fixes_shallow;
    for (int m = m_max + 1; m <= m_deep; ++m) fixes_deep = fixes_deep && fixes[m];
    if (fixes_deep && !(mat == id)) report.trivial_intersection_ok = false;
  }
  return report;
}

double orbit_stabilization_scale(const RationalTorusModel& model,
                                 const IntegerMatrixGens& gens, int start) {
  auto orb = orbit(model, gens, start);
  auto sys = model.warp_system(gens, 1.0);
  int n_max = 0;
  for (int v : orb.word_distance) n_max = std::max(n_max, v);
  if (n_max == 0) return 0.0;
  auto delta = delta_table(sys, n_max - 1);
  double s_star = 0.0;
  for (int p = 0; p < orb.size(); ++p)
    for (int p2 = 0; p2 < orb.size(); ++p2) {
      int N = orb.dist(p, p2);
      for (int k = 0; k < N; ++k) {
        double dk = delta.at(k, orb.points[p], orb.points[p2]);
        s_star = std::max(s_star, double(N - k) / dk);
      }
    }
  return s_star;
}

EmbeddedExpanderReport embedded_expander_check(const RationalTorusModel& model,
                                               const IntegerMatrixGens& gens,
                                               int start, double s) {
  EmbeddedExpanderReport report;
  report.orb = orbit(model, gens, start);
  report.orbit_size = report.orb.size();
  report.s = s;
  report.s_star = orbit_stabilization_scale(model, gens, start);
  if (s < report.s_star) throw ScaleBelowThreshold(s, report.s_star);

  auto sys = model.warp_system(gens, 1.0);
  auto d_s = level_metric(sys, s);
  report.isometric_match = true;
  const double tol = sys.space.tolerance();
  for (int p = 0; p < report.orb.size(); ++p)
    for (int p2 = 0; p2 < report.orb.size(); ++p2) {
      double got = d_s.at(report.orb.points[p], report.orb.points[p2]);
      double want = report.orb.dist(p, p2);
      double err = std::abs(got - want);
      report.max_abs_error = std::max(report.max_abs_error, err);
      if (err > tol) report.isometric_match = false;
    }
  return report;
}

RationalTorusModel fix_c_model() { return RationalTorusModel(2, 6); }

int fix_c_start() { return fix_c_model().index_of({3, 2}); }  // (1/2, 1/3)

}  // namespace warplab
