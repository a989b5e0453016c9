#pragma once

#include <memory>

#include "warplab/group.hpp"
#include "warplab/warp.hpp"

namespace warplab {

/// Tower of finite quotients G_1 <- G_2 <- ... <- G_N with connecting
/// epimorphisms compatible with the generator images. Levels are 1-based;
/// level 0 is the trivial group by convention.
class QuotientChain {
 public:
  QuotientChain() = default;

  static QuotientChain cyclic_tower(std::int64_t m, int levels);
  static QuotientChain sl2_tower(std::int64_t m, int levels);
  static QuotientChain from_parts(std::vector<FiniteQuotientGroup> groups,
                                  std::vector<std::vector<int>> connecting);

  int levels() const { return static_cast<int>(groups_.size()); }
  const FiniteQuotientGroup& group(int n) const { return groups_.at(n - 1); }

  /// f_n : G_n -> G_{n-1} as an index map; n in [2, levels].
  const std::vector<int>& connecting_map(int n) const {
    return connecting_.at(n - 2);
  }

  /// pi_n : G_{from} -> G_n composed from connecting maps; n in [1, from].
  std::vector<int> projection(int from, int n) const;

  /// Surjectivity of every f_n, commutation with generator images, and
  /// strictly increasing orders. Throws on violation.
  void validate() const;

 private:
  std::vector<FiniteQuotientGroup> groups_;
  std::vector<std::vector<int>> connecting_;  // connecting_[k] = f_{k+2}
};

struct WeightSequence {
  std::vector<Rat> a;  // a_1 > a_2 > ... > a_N > 0
  bool convention_ok = false;  // a_{n+1} < a_n / diam(G_n) for all n < N
  int first_failing_index = 0;  // 1-based n witnessing a violation, 0 if none

  int size() const { return static_cast<int>(a.size()); }
  void validate_decreasing() const;

  static WeightSequence for_chain(const QuotientChain& chain,
                                  std::vector<Rat> weights);
};

/// Elements of G_N metrized by d(g,g') = a_{n(g,g')} where n(g,g') is the
/// least level whose projections differ; the finite snapshot of the
/// completion along the chain.
class TruncatedCompletion {
 public:
  TruncatedCompletion(QuotientChain chain, WeightSequence weights, int level,
                      bool allow_convention_violation = false);

  const QuotientChain& chain() const { return chain_; }
  const WeightSequence& weights() const { return weights_; }
  int level() const { return level_; }
  int num_points() const;
  const FiniteQuotientGroup& top_group() const { return chain_.group(level_); }

  int project(int g, int n) const;  // pi_n(g); n = 0 collapses to 0
  /// Least n >= 1 with pi_n g != pi_n g'; level+1 when g == g'.
  int first_differing_level(int g, int g2) const;
  Rat point_distance(int g, int g2) const;

  /// delta_n(g,g') = d_{G_n} of the level-n projections; delta_0 = 0.
  int delta(int n, int g, int g2) const;
  int delta_diameter(int n) const;

  /// The (G_N, d) metric space with the left-multiplication action; the
  /// action is isometric.
  WarpSystem<Rat> warp_system(const Rat& scale = Rat(1)) const;

  /// d_s(g,g') = min( min_{1<=n<=N} [delta_{n-1} + s·a_n], delta_N );
  /// exactly equal to the warped metric of the rescaled truncation.
  DistanceMatrix<Rat> slice_metric_closed_form(const Rat& s) const;

 private:
  QuotientChain chain_;
  WeightSequence weights_;
  int level_ = 0;
  std::vector<std::vector<int>> projections_;     // [n-1][g] -> pi_n(g)
  std::vector<std::vector<int>> word_distances_;  // [n-1]: |G_n| x |G_n|
};

/// d_s' = delta_{N_s-1} + min(s·a_{N_s}, delta_{N_s}) where N_s is the
/// largest n with s·a_n >= 1. Requires s·a_1 >= 1.
struct SliceDecomposition {
  Rat s;
  int n_s = 0;
  Rat cap;                       // s·a_{N_s}
  DistanceMatrix<Rat> d_prime;
};

SliceDecomposition slice_decomposition(const TruncatedCompletion& trunc,
                                       const Rat& s);

int largest_scale_index(const TruncatedCompletion& trunc, const Rat& s);

struct BoxSpaceLevel {
  int level = 0;
  int order = 0;
  int diameter = 0;
  Multigraph cayley;
};

/// Per-level word-metric data of the coarse disjoint sum of the G_n.
std::vector<BoxSpaceLevel> box_space(const QuotientChain& chain);

struct SectionScaleReport {
  int n = 0;
  Rat s_n;                    // diam(G_n) / a_n
  bool vacuous = false;       // trivial G_n
  bool certificate_holds = false;  // delta_n <= d_{s(n)} <= delta_n + 1
  Rat max_upper_deviation;    // max over pairs of d_{s(n)} - delta_n
  std::pair<int, int> worst_pair{0, 0};
};

/// Section-scale certificate: delta_n <= d_{s(n)} <= delta_n + 1.
SectionScaleReport section_scale_check(const TruncatedCompletion& trunc, int n);

}  // namespace warplab
