#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>

#include "warplab/profinite.hpp"

namespace warplab {

/// Finite-dimensional realization of a Hilbert/l_p-space embedding: one
/// coordinate row per point.
struct PointEmbedding {
  Eigen::MatrixXd vectors;  // rows = points
  double p = 2.0;

  int num_points() const { return static_cast<int>(vectors.rows()); }
  int dim() const { return static_cast<int>(vectors.cols()); }
  double pair_norm(int i, int j) const;
  double point_norm(int i) const;
  double max_point_norm() const;
};

/// Empirical distortion envelopes of an embedding against a metric:
///   rho_minus(r) = min{ ||psi x - psi x'|| : d(x,x') >= r }
///   rho_plus(r)  = max{ ||psi x - psi x'|| : d(x,x') <= r }
/// Both nondecreasing step functions over the distinct distance values.
struct CompressionProfile {
  std::vector<double> breakpoints;  // sorted distinct distances
  std::vector<double> rho_minus;    // min norm over pairs with d >= breakpoint
  std::vector<double> rho_plus;     // max norm over pairs with d <= breakpoint
  double ball_radius = 0;           // max ||psi x||
  bool coarse_on_instance = true;   // false when rho_minus is identically 0
  bool rho_plus_affine = false;     // least-squares residual of rho_plus is 0

  double rho_minus_at(double r) const;  // +inf past the last breakpoint
  double rho_plus_at(double r) const;   // global max past the last breakpoint
};

CompressionProfile compression_profile(const PointEmbedding& emb,
                                       const std::vector<double>& metric, int n);

// ---------------------------------------------------------------------------
// Concave-type envelopes (appendix calculus)

/// Sampled minorant/majorant pair: c(t) = t·min_{a<=s<=t} f(s)/s and
/// C(t) = t·max_{a<=s<=t} F(s)/s on a shared grid. Off-grid evaluation
/// uses the same prefix min/max (grid must start at a).
struct EnvelopePair {
  std::vector<double> grid;  // strictly increasing, grid.front() == a
  std::vector<double> f, F;  // the sampled inputs
  std::vector<double> c, C;  // the envelopes on the grid
  double a = 0, b = 0;

  double c_at(double t) const;
  double C_at(double t) const;
};

/// Requires f, F nondecreasing with f >= b > 0; rejects non-monotone input.
EnvelopePair concave_envelopes(const std::vector<double>& grid,
                               const std::vector<double>& f_samples,
                               const std::vector<double>& F_samples, double a,
                               double b);

// ---------------------------------------------------------------------------
// Product embeddings

struct ProductEmbeddingResult {
  PointEmbedding embedding;  // product points in mixed-radix row order
  std::vector<int> factor_sizes;
  bool bounds_hold = true;   // (b^{p-1} c(d))^{1/p} <= ||.||_p <= C(d), all pairs
  double worst_lower_slack = 0;  // most negative margin seen on the lower bound
  double worst_upper_slack = 0;

  int point_index(const std::vector<int>& coords) const;
};

/// Direct sum of the factor embeddings over the product point set, with the
/// certified bounds verified on every pair. Rejects factors whose minimum
/// positive distance is below a.
ProductEmbeddingResult product_embedding(
    const std::vector<PointEmbedding>& factors,
    const std::vector<std::vector<double>>& factor_metrics, double p, double a,
    double b, const EnvelopePair& envelopes, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Kernels

struct KernelMatrix {
  enum class Kind { positive_type, negative_type, unverified };
  Eigen::MatrixXd values;
  Kind kind = Kind::unverified;
  double tolerance = 1e-9;
};

/// Conditionally-negative test: symmetric, zero diagonal, and
/// lambda^T K lambda <= tol for mean-zero lambda (full check via the
/// centered Gram matrix plus random probes).
bool is_negative_type(const Eigen::MatrixXd& k, double tol,
                      int random_probes = 100, std::uint64_t seed = 11);
bool is_positive_type(const Eigen::MatrixXd& k, double tol);

/// k(x,x') = ||f(x) - f(x')||^2; requires p = 2.
KernelMatrix embedding_to_neg_kernel(const PointEmbedding& emb,
                                     double tol = 1e-9);

struct KernelNotNegativeType : std::runtime_error {
  explicit KernelNotNegativeType(std::vector<double> witness)
      : std::runtime_error("kernel fails the negative-type test"),
        witness_vector(std::move(witness)) {}
  std::vector<double> witness_vector;  // mean-zero lambda with lambda^T K lambda > tol
};

/// Gram factorization G(x,y) = (k(x,x0) + k(y,x0) - k(x,y))/2 with
/// eigenvalue clamping at -1e-9·max|G|; round-trips pair distances within
/// 1e-6 relative.
PointEmbedding neg_kernel_to_embedding(const KernelMatrix& kernel,
                                       int basepoint = 0);

struct BernsteinResult {
  KernelMatrix kernel;         // entrywise l(1 - exp(-k/l))
  double l = 0;
  bool negative_type_ok = false;
  bool ratio_bound_ok = false;  // m_l(k)/min(k,l) in [1 - 1/e, 1] for k > 0
  double min_ratio = 1, max_ratio = 0;
};

BernsteinResult bernstein_truncate(const KernelMatrix& kernel, double l,
                                   double ratio_tol = 1e-12);

// ---------------------------------------------------------------------------
// Cone embedding from slice embeddings (radial convex interpolation)

struct SliceLevelTooLarge : std::runtime_error {
  SliceLevelTooLarge(int level, double norm, double bound)
      : std::runtime_error("slice embedding at level " + std::to_string(level) +
                           " has radius " + std::to_string(norm) +
                           " exceeding the declared bound " +
                           std::to_string(bound)),
        level(level) {}
  int level;
};

struct ConeEmbedding {
  std::vector<double> sample_scales;  // ascending, within [2^n_lo, 2^n_hi]
  int n_lo = 0;                       // slices[k] embeds the 2^(n_lo+k) slice
  int num_slice_points = 0;
  double actual_D = 0;  // max_n max||phi_n|| / 2^n
  PointEmbedding embedding;  // row per (scale, point), radial coord first

  int row(int scale_idx, int point) const {
    return scale_idx * num_slice_points + point;
  }
};

/// Phi(s, y) = s ⊕ theta_s·phi_n(y) ⊕ (1-theta_s)·phi_{n+1}(y) for
/// s in [2^n, 2^{n+1}], assembled on the sampled scales. If claimed_D is
/// given, slices exceeding claimed_D·2^n are rejected with the level.
ConeEmbedding cone_embedding_from_slices(
    const std::vector<PointEmbedding>& slices, int n_lo,
    const std::vector<double>& sample_scales,
    std::optional<double> claimed_D = std::nullopt);

struct ConeEmbeddingCheck {
  bool far_case_ok = true;    // t >= 2s: d/8 <= ||dPhi|| <= (5D+1)·d
  bool near_upper_ok = true;  // s <= t <= 2s: ||dPhi|| <= 3 rho_+(4d) + (12D+1)·d
  bool near_lower_ok = true;  // ||dPhi||^2 - (t-s)^2 >= (1/8)·rho_-(d_s/2)^2
  int pairs_checked = 0;
  double worst_far_margin = 0, worst_upper_margin = 0, worst_lower_margin = 0;
};

/// Verifies the three inequality families on every sampled pair.
/// level_metrics[k] is the flattened slice metric d_{s_k} of the warped
/// system at sample scale s_k; the cone distance between samples is
/// |t - s| + d_min(s,t)(y, y').
ConeEmbeddingCheck check_cone_embedding(
    const ConeEmbedding& cone, const std::vector<std::vector<double>>& level_metrics,
    const std::function<double(double)>& rho_minus,
    const std::function<double(double)>& rho_plus, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Slice embedding from box-space embeddings (scale decomposition + Bernstein)

struct SliceEmbeddingResult {
  PointEmbedding embedding;  // on the truncation points, p = 2
  int n_s = 0;
  double l = 0;              // (s·a_{N_s})^2
  bool below_first_scale = false;
  double roundtrip_error = 0;
};

/// Direct sum of phi_{N_s-1} ∘ pi_{N_s-1} and the Bernstein-recovered
/// embedding of phi_{N_s} ∘ pi_{N_s} with l = (s·a_{N_s})^2. box_embeddings
/// are indexed by chain level (box_embeddings[n-1] embeds G_n).
SliceEmbeddingResult slice_embedding_from_box(
    const TruncatedCompletion& trunc, const Rat& s,
    const std::vector<PointEmbedding>& box_embeddings);

struct SliceEmbeddingCheck {
  bool coarse_bounds_hold = true;
  int pairs_checked = 0;
  double worst_lower_margin = 0, worst_upper_margin = 0;
};

/// Scale-independent control check: for every pair,
///   sqrt(1 - 1/e)·rho_-(max(d_s - 1, 0)/2) <= ||dpsi|| <= sqrt(2)·rho_+(2·d_s),
/// where rho_± are the shared controls of the box embeddings.
SliceEmbeddingCheck check_slice_embedding(
    const SliceEmbeddingResult& result, const std::vector<double>& d_s, int n,
    const std::function<double(double)>& rho_minus,
    const std::function<double(double)>& rho_plus, double tol = 1e-6);

/// Round embedding of a cyclic group: the residue r of m maps to
/// radius-(m/2pi) circle coordinates; word distance k sits between chord
/// and arc, so (2/pi)·r <= ||dphi|| <= r are exact linear controls.
PointEmbedding cycle_embedding(const FiniteQuotientGroup& cyclic);

}  // namespace warplab
