#pragma once

#include <array>
#include <cstdint>

#include "warplab/graph.hpp"
#include "warplab/metric.hpp"
#include "warplab/warp.hpp"

namespace warplab {

/// Square integer matrix, dim 2 or 3.
struct IntMat {
  int dim = 2;
  std::array<std::int64_t, 9> a{};  // row major, first dim*dim entries

  std::int64_t& at(int i, int j) { return a[i * dim + j]; }
  std::int64_t at(int i, int j) const { return a[i * dim + j]; }
  static IntMat identity(int dim);
  static IntMat elementary(int dim, int i, int j, std::int64_t v);
  IntMat operator*(const IntMat& o) const;
  bool operator==(const IntMat& o) const = default;
  bool operator<(const IntMat& o) const;
  std::int64_t det() const;
  std::string str() const;
};

/// Elementary generators E_ij(+-1) of SL_dim(Z) plus the identity, with the
/// inverse pairing.
struct IntegerMatrixGens {
  GeneratorSet labels;
  std::vector<IntMat> matrices;  // aligned with labels

  static IntegerMatrixGens elementary(int dim);
  void validate() const;  // det 1, closed under the declared inverses
};

/// All points (k_1/q, ..., k_dim/q) mod 1 with the quotient l2 metric kept
/// as exact squared rationals.
class RationalTorusModel {
 public:
  RationalTorusModel(int dim, std::int64_t q);

  int dim() const { return dim_; }
  std::int64_t denominator() const { return q_; }
  int num_points() const { return n_; }

  int index_of(const std::vector<std::int64_t>& tuple) const;
  std::vector<std::int64_t> tuple_of(int idx) const;

  /// Exact squared quotient distance: sum of min(|dk|, q-|dk|)^2 / q^2.
  Rat squared_distance(int a, int b) const;
  double distance(int a, int b) const;

  /// Index of A·x mod 1.
  int apply(const IntMat& m, int idx) const;
  std::vector<int> permutation(const IntMat& m) const;

  /// Symmetry and triangle inequality of the underlying metric, verified on
  /// exact squared values: sqrt(A) <= sqrt(B) + sqrt(C) iff A <= B + C or
  /// (A-B-C)^2 <= 4BC. Exhaustive when n^3 <= cap, random-sampled beyond.
  void validate_metric(std::size_t exhaustive_cap = 8'000'000,
                       std::uint64_t sample_seed = 1) const;

  /// Float-mode warp system at the given scale (l2 distances are
  /// irrational, so the torus always runs in float mode).
  WarpSystem<double> warp_system(const IntegerMatrixGens& gens, double scale,
                                 double tolerance = 1e-9) const;

 private:
  int dim_;
  std::int64_t q_;
  int n_;
};

struct OrbitCapExceeded : std::runtime_error {
  OrbitCapExceeded(std::size_t cap, std::size_t frontier)
      : std::runtime_error("orbit exceeds cap " + std::to_string(cap) +
                           " with frontier size " + std::to_string(frontier)),
        frontier_size(frontier) {}
  std::size_t frontier_size;
};

struct Orbit {
  std::vector<int> points;           // model indices, BFS order from start
  std::vector<int> position;         // model index -> orbit position or -1
  std::vector<std::vector<int>> action;  // per generator, orbit permutation
  std::vector<int> word_distance;    // orbit_size x orbit_size, flattened

  int size() const { return static_cast<int>(points.size()); }
  int dist(int i, int j) const { return word_distance[std::size_t(i) * size() + j]; }

  /// Schreier graph of the orbit under generator pairs; feeds spectral.
  Multigraph schreier_graph(const GeneratorSet& gens) const;
};

/// BFS closure of x under the generators; word_distance is the quotient
/// metric of Gamma/Stab(x).
Orbit orbit(const RationalTorusModel& model, const IntegerMatrixGens& gens,
            int start, std::size_t cap = 1 << 20);

struct CongruenceEntry {
  int i = 0, t = 0;
  std::int64_t value = 0;     // a_{i,t}
  std::int64_t modulus = 0;   // q_t^m
  std::int64_t expected = 0;  // 0 off-diagonal, 1 on the diagonal
  bool holds = false;
};

struct StabilizerCertificate {
  IntMat matrix;
  std::vector<std::int64_t> q;
  int m = 1;
  bool fixes_direct = false;      // A·x_m == x_m mod 1, exact rationals
  bool fixes_congruence = false;  // the entrywise congruence system
  bool agree = false;
  std::vector<CongruenceEntry> congruences;
};

/// Both routes evaluated independently: exact fixed-point test and the
/// congruence characterization. Requires pairwise coprime q_i > 1.
StabilizerCertificate stabilizer_congruence_check(
    const IntMat& matrix, const std::vector<std::int64_t>& q, int m);

struct NestedStabilizerReport {
  std::vector<std::int64_t> q;
  int m_max = 0;
  int radius = 0;
  std::size_t ball_size = 0;
  bool routes_agree = false;  // direct vs congruence on every ball element
  bool nested = false;        // Stab(x_{m+1}) subset of Stab(x_m) in the ball

  /// Non-identity ball elements fixing x_1..x_{m_max}; can be nonempty at
  /// finite depth (E21(4) fixes x_1 and x_2 for q = (2,3)).
  std::vector<IntMat> fixers_within_m_max;

  /// Trivial-intersection evidence: fixing x_m for every m up to
  /// m_trivial pins all entries (q_t^m exceeds twice the largest entry),
  /// so any element counted here fixes every x_m. Must contain only the
  /// identity for the chain to intersect trivially.
  int m_trivial = 0;
  bool trivial_intersection_ok = false;
};

NestedStabilizerReport nested_stabilizer_check(
    const std::vector<std::int64_t>& q, int m_max, int radius);

/// Word ball of SL_dim(Z) with elementary generators, as matrices with
/// word lengths, BFS order.
std::vector<std::pair<IntMat, int>> sln_word_ball(int dim, int radius);

struct EmbeddedExpanderReport {
  int orbit_size = 0;
  double s = 0;
  double s_star = 0;
  bool isometric_match = false;  // d_s == orbit word metric within tolerance
  double max_abs_error = 0;
  Orbit orb;
};

struct ScaleBelowThreshold : std::runtime_error {
  ScaleBelowThreshold(double s, double s_star)
      : std::runtime_error("scale " + std::to_string(s) +
                           " is below the stabilization threshold " +
                           std::to_string(s_star)),
        required(s_star) {}
  double required;
};

/// Verifies that the level metric d_s restricted to the orbit equals the
/// quotient word metric (float mode, model tolerance).
EmbeddedExpanderReport embedded_expander_check(const RationalTorusModel& model,
                                               const IntegerMatrixGens& gens,
                                               int start, double s);

/// Largest per-pair stabilization threshold over the orbit.
double orbit_stabilization_scale(const RationalTorusModel& model,
                                 const IntegerMatrixGens& gens, int start);

/// FIX-C: SL2 elementary generators on denominator-6 points.
RationalTorusModel fix_c_model();
int fix_c_start();  // index of (1/2, 1/3)

}  // namespace warplab
