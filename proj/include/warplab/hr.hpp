#pragma once

#include <Eigen/Dense>

#include <optional>

#include "warplab/profinite.hpp"

namespace warplab {

/// Sparse probability vector: (point, mass) sorted by point index.
using ProbVector = std::vector<std::pair<int, Rat>>;

Rat l1_distance(const ProbVector& a, const ProbVector& b);
Rat total_mass(const ProbVector& a);

/// Per-point finitely supported probability vectors over a finite metric
/// domain, with declared (R, epsilon, S) parameters. All arithmetic exact.
struct HRFamily {
  int n = 0;
  std::vector<Rat> metric;  // n x n, flattened
  std::vector<ProbVector> assignment;
  Rat R, epsilon, S;

  const Rat& dist(int i, int j) const { return metric[std::size_t(i) * n + j]; }
  void validate() const;  // nonnegative masses summing to 1
};

struct HRCertificate {
  bool passes = false;
  bool variation_ok = false;
  bool support_ok = false;
  Rat max_variation;  // over pairs with d <= R
  std::pair<int, int> worst_pair{-1, -1};
  Rat max_support_radius;
  int worst_support_point = -1;
};

/// Checks ||a(x) - a(x')||_1 <= epsilon whenever d(x,x') <= R and
/// supp a(x) within the S-ball; failure is a valid certificate with
/// witnesses.
HRCertificate verify_hr(const HRFamily& family);

/// Singleton family on the unwarped scaled space (G_N, s·d):
/// n* is the greatest level with s·a_n >= R and every point maps to the
/// BFS-least representative of its level-n* fiber. Variation is exactly 0
/// on pairs with s·d < R and S = max_g s·d(g, rep(g)) < R.
struct SingletonFamily {
  HRFamily family;  // metric = s·d (unwarped)
  int n_star = 0;
  std::vector<int> representative;  // per point
  Rat claimed_support_bound;        // s·a_{n*+1}, 0 at n* = N, s·a_1 at n* = 0
};

SingletonFamily singleton_hr(const TruncatedCompletion& trunc, const Rat& s,
                             const Rat& R);

// ---------------------------------------------------------------------------
// Cone families (Prop 5.2 construction)

struct SliceFamilyInput {
  int level = 0;  // integer radial level m; family lives on {m} x Y
  std::vector<ProbVector> assignment;
};

struct ConeHRResult {
  // cone sample points are (radius index, base point) pairs
  std::vector<Rat> sample_radii;  // integers 1..r_max plus cutoff midpoints
  int num_base_points = 0;
  int M = 0;  // ceil(R / epsilon)
  Rat slice_S;                // uniform localisation constant of the slices
  Rat support_bound;          // max(M + S, 2M + diam(Y, d_1))
  Rat cone_support_radius;    // observed
  HRFamily family;            // over the flattened samples, cone metric
  bool support_ok = false;
  Rat max_same_level_variation;  // pairs with d_r(y,y') <= R; <= epsilon
  Rat max_radial_variation;      // radial moves k <= R; <= 6 epsilon
  Rat max_combined_variation;    // all pairs with cone distance <= R; <= 7 epsilon
  bool variation_ok = false;

  int sample_index(int radius_idx, int y) const {
    return radius_idx * num_base_points + y;
  }
};

struct MissingSliceFamily : std::runtime_error {
  explicit MissingSliceFamily(int level)
      : std::runtime_error("cone construction: missing slice family at level " +
                           std::to_string(level)),
        level(level) {}
  int level;
};

/// Window-averaged cone family a(r,y) = phi(r)·delta_{(1,y0)} +
/// (1-phi(r))·avg of c_m(y) over the M-window below r, on integer levels
/// plus cutoff midpoints. base is the scale-free warp system of the slice
/// space (level metrics d_r are derived from it).
ConeHRResult cone_hr_from_slice_hr(const WarpSystem<Rat>& base,
                                   const std::vector<SliceFamilyInput>& slices,
                                   const Rat& R, const Rat& epsilon, int r_max);

struct MarginalizedSlice {
  int radius_index = 0;
  std::vector<ProbVector> assignment;  // over the base points
  bool contraction_ok = false;  // ||b(s,y)-b(s,y')||_1 <= ||a(s,y)-a(s,y')||_1
  bool support_ok = false;      // supp b(s,y) within the 2·S_cone ball of d_s
  Rat max_support_radius;
};

/// Sums the cone family over the radial coordinate at one sampled level.
MarginalizedSlice marginalize_cone_hr(const ConeHRResult& cone,
                                      const WarpSystem<Rat>& base,
                                      int radius_index);

// ---------------------------------------------------------------------------
// Induced positive-type group kernels

struct InducedKernelResult {
  std::vector<std::pair<int, int>> ball;  // (element, word length)
  std::vector<double> h;                  // h(gamma) = avg_y k(y, gamma·y)
  double min_gram_eigenvalue = 0;
  bool psd_ok = false;  // min eigenvalue >= -1e-8
  bool controlled_support_checked = false;
  bool controlled_support_ok = false;
};

/// h over a word ball of the group acting on itself by left multiplication,
/// with the Gram PSD certificate [h(gamma^-1 gamma')] and an optional
/// controlled-support echo: when k vanishes beyond displacement N in the
/// supplied slice metric, h must vanish on ball elements displacing
/// further. The ball must be inverse-closed.
InducedKernelResult induced_group_kernel(
    const FiniteQuotientGroup& group, const Eigen::MatrixXd& slice_kernel,
    const std::vector<std::pair<int, int>>& ball, double psd_tol = 1e-8,
    const std::vector<double>* slice_metric = nullptr,
    std::optional<double> support_bound = std::nullopt);

InducedKernelResult induced_group_kernel(
    const FiniteQuotientGroup& group, const Eigen::MatrixXd& slice_kernel,
    int ball_radius, double psd_tol = 1e-8,
    const std::vector<double>* slice_metric = nullptr,
    std::optional<double> support_bound = std::nullopt);

}  // namespace warplab
