#include "warplab/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace warplab {

double PointEmbedding::pair_norm(int i, int j) const {
  if (p == 2.0) return (vectors.row(i) - vectors.row(j)).norm();
  return std::pow((vectors.row(i) - vectors.row(j))
                      .array()
                      .abs()
                      .pow(p)
                      .sum(),
                  1.0 / p);
}

double PointEmbedding::point_norm(int i) const {
  if (p == 2.0) return vectors.row(i).norm();
  return std::pow(vectors.row(i).array().abs().pow(p).sum(), 1.0 / p);
}

double PointEmbedding::max_point_norm() const {
  double m = 0;
  for (int i = 0; i < num_points(); ++i) m = std::max(m, point_norm(i));
  return m;
}

CompressionProfile compression_profile(const PointEmbedding& emb,
                                       const std::vector<double>& metric,
                                       int n) {
  if (emb.num_points() != n)
    throw std::invalid_argument("compression profile: embedding must cover all points");
  // bucket pair norms by distance value
  std::map<double, std::pair<double, double>> buckets;  // d -> (min, max) norm
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = metric[std::size_t(i) * n + j];
      double norm = emb.pair_norm(i, j);
      auto [it, inserted] = buckets.try_emplace(d, std::pair{norm, norm});
      if (!inserted) {
        it->second.first = std::min(it->second.first, norm);
        it->second.second = std::max(it->second.second, norm);
      }
    }
  CompressionProfile prof;
  prof.ball_radius = emb.max_point_norm();
  for (auto& [d, mm] : buckets) prof.breakpoints.push_back(d);
  const std::size_t k = prof.breakpoints.size();
  prof.rho_minus.resize(k);
  prof.rho_plus.resize(k);
  double running_max = 0;
  std::size_t idx = 0;
  for (auto& [d, mm] : buckets) {
    running_max = std::max(running_max, mm.second);
    prof.rho_plus[idx++] = running_max;
  }
  double running_min = std::numeric_limits<double>::infinity();
  idx = k;
  for (auto it = buckets.rbegin(); it != buckets.rend(); ++it) {
    running_min = std::min(running_min, it->second.first);
    prof.rho_minus[--idx] = running_min;
  }
  prof.coarse_on_instance = !prof.rho_minus.empty() && prof.rho_minus.back() > 0;
  // affineness flag: zero residual of the least-squares line through rho_plus
  if (k >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
      sx += prof.breakpoints[i];
      sy += prof.rho_plus[i];
      sxx += prof.breakpoints[i] * prof.breakpoints[i];
      sxy += prof.breakpoints[i] * prof.rho_plus[i];
    }
    double det = k * sxx - sx * sx;
    if (det != 0) {
      double slope = (k * sxy - sx * sy) / det;
      double intercept = (sy - slope * sx) / k;
      double residual = 0, scale = 1e-12;
      for (std::size_t i = 0; i < k; ++i) {
        double r = prof.rho_plus[i] - (slope * prof.breakpoints[i] + intercept);
        residual = std::max(residual, std::abs(r));
        scale = std::max(scale, std::abs(prof.rho_plus[i]));
      }
      prof.rho_plus_affine = residual <= 1e-9 * scale;
    }
  } else {
    prof.rho_plus_affine = true;
  }
  return prof;
}

double CompressionProfile::rho_minus_at(double r) const {
  // min over pairs with d >= r: value at the first breakpoint >= r
  auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), r);
  if (it == breakpoints.end()) return std::numeric_limits<double>::infinity();
  return rho_minus[it - breakpoints.begin()];
}

double CompressionProfile::rho_plus_at(double r) const {
  // max over pairs with d <= r: value at the last breakpoint <= r
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), r);
  if (it == breakpoints.begin()) return 0.0;
  return rho_plus[it - breakpoints.begin() - 1];
}

EnvelopePair concave_envelopes(const std::vector<double>& grid,
                               const std::vector<double>& f_samples,
                               const std::vector<double>& F_samples, double a,
                               double b) {
  if (grid.empty() || grid.size() != f_samples.size() ||
      grid.size() != F_samples.size())
    throw std::invalid_argument("envelopes: grid/sample size mismatch");
  if (std::abs(grid.front() - a) > 1e-12)
    throw std::invalid_argument("envelopes: grid must start at a");
  if (!(b > 0)) throw std::invalid_argument("envelopes: b must be positive");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("envelopes: grid must strictly increase");
    if (i > 0 && (f_samples[i] < f_samples[i - 1] || F_samples[i] < F_samples[i - 1]))
      throw std::invalid_argument("envelopes: samples must be nondecreasing");
    if (f_samples[i] < b)
      throw std::invalid_argument("envelopes: f must stay above b");
  }
  EnvelopePair env;
  env.grid = grid;
  env.f = f_samples;
  env.F = F_samples;
  env.a = a;
  env.b = b;
  env.c.resize(grid.size());
  env.C.resize(grid.size());
  double m_t = std::numeric_limits<double>::infinity();
  double M_t = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    m_t = std::min(m_t, f_samples[i] / grid[i]);
    M_t = std::max(M_t, F_samples[i] / grid[i]);
    env.c[i] = m_t * grid[i];
    env.C[i] = M_t * grid[i];
  }
  return env;
}

namespace {

double prefix_ratio_at(const std::vector<double>& grid,
                       const std::vector<double>& env_values, double t) {
  // envelope value at grid point <= t, rescaled linearly in t
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  if (it == grid.begin())
    throw std::invalid_argument("envelope evaluated below its domain");
  std::size_t idx = it - grid.begin() - 1;
  return env_values[idx] / grid[idx] * t;
}

}  // namespace

double EnvelopePair::c_at(double t) const { return prefix_ratio_at(grid, c, t); }
double EnvelopePair::C_at(double t) const { return prefix_ratio_at(grid, C, t); }

int ProductEmbeddingResult::point_index(const std::vector<int>& coords) const {
  int idx = 0;
  for (std::size_t i = 0; i < coords.size(); ++i)
    idx = idx * factor_sizes[i] + coords[i];
  return idx;
}

ProductEmbeddingResult product_embedding(
    const std::vector<PointEmbedding>& factors,
    const std::vector<std::vector<double>>& factor_metrics, double p, double a,
    double b, const EnvelopePair& envelopes, double tol) {
  if (factors.empty() || factors.size() != factor_metrics.size())
    throw std::invalid_argument("product embedding: factor count mismatch");
  std::size_t total = 1;
  int total_dim = 0;
  std::vector<int> sizes;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const int n = factors[i].num_points();
    sizes.push_back(n);
    total *= n;
    total_dim += factors[i].dim();
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        double d = factor_metrics[i][std::size_t(x) * n + y];
        if (d < a - tol)
          throw std::invalid_argument(
              "product embedding: factor distance below the minimum a");
      }
  }

  ProductEmbeddingResult out;
  out.factor_sizes = sizes;
  out.embedding.p = p;
  out.embedding.vectors = Eigen::MatrixXd::Zero(total, total_dim);

  std::vector<int> coords(factors.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    int col = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      out.embedding.vectors.block(idx, col, 1, factors[i].dim()) =
          factors[i].vectors.row(coords[i]);
      col += factors[i].dim();
    }
    for (int i = static_cast<int>(factors.size()) - 1; i >= 0; --i) {
      if (++coords[i] < sizes[i]) break;
      coords[i] = 0;
    }
  }

  // verify the certified bounds on all product pairs
  std::vector<int> cx(factors.size()), cy(factors.size());
  for (std::size_t ix = 0; ix < total; ++ix) {
    std::size_t rest = ix;
    for (int i = static_cast<int>(factors.size()) - 1; i >= 0; --i) {
      cx[i] = rest % sizes[i];
      rest /= sizes[i];
    }
    for (std::size_t iy = ix + 1; iy < total; ++iy) {
      rest = iy;
      for (int i = static_cast<int>(factors.size()) - 1; i >= 0; --i) {
        cy[i] = rest % sizes[i];
        rest /= sizes[i];
      }
      double d = 0;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        const int n = sizes[i];
        d += factor_metrics[i][std::size_t(cx[i]) * n + cy[i]];
      }
      double norm = out.embedding.pair_norm(static_cast<int>(ix),
                                            static_cast<int>(iy));
      double lower = std::pow(std::pow(b, p - 1) * envelopes.c_at(d), 1.0 / p);
      double upper = envelopes.C_at(d);
      double lo_margin = norm - lower;
      double up_margin = upper - norm;
      out.worst_lower_slack = std::min(out.worst_lower_slack, lo_margin);
      out.worst_upper_slack = std::min(out.worst_upper_slack, up_margin);
      if (lo_margin < -tol || up_margin < -tol) out.bounds_hold = false;
    }
  }
  return out;
}

bool is_positive_type(const Eigen::MatrixXd& k, double tol) {
  if (k.rows() != k.cols()) return false;
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) >= -tol;
}

namespace {

std::optional<std::vector<double>> negative_type_witness(
    const Eigen::MatrixXd& k, double tol, int random_probes, std::uint64_t seed) {
  const int n = static_cast<int>(k.rows());
  if (k.cols() != n) return std::vector<double>{};
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > tol ||
      k.diagonal().cwiseAbs().maxCoeff() > tol) {
    return std::vector<double>(n, 0.0);
  }
  // centered Gram route: B_ij = (k(i,0) + k(j,0) - k(i,j))/2 PSD on i,j >= 1
  if (n > 1) {
    Eigen::MatrixXd bmat(n - 1, n - 1);
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j)
        bmat(i - 1, j - 1) = (k(i, 0) + k(j, 0) - k(i, j)) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bmat);
    double scale = std::max(1.0, bmat.cwiseAbs().maxCoeff());
    if (es.eigenvalues()(0) < -tol * scale) {
      // convert the offending eigenvector into a mean-zero witness
      Eigen::VectorXd v = es.eigenvectors().col(0);
      std::vector<double> witness(n, 0.0);
      double sum = 0;
      for (int i = 1; i < n; ++i) {
        witness[i] = v(i - 1);
        sum += v(i - 1);
      }
      witness[0] = -sum;
      return witness;
    }
  }
  // random mean-zero probes
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  for (int probe = 0; probe < random_probes; ++probe) {
    Eigen::VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda(i) = gauss(rng);
    lambda.array() -= lambda.mean();
    double q = lambda.dot(k * lambda);
    if (q > tol * scale * lambda.squaredNorm())
      return std::vector<double>(lambda.data(), lambda.data() + n);
  }
  return std::nullopt;
}

}  // namespace

bool is_negative_type(const Eigen::MatrixXd& k, double tol, int random_probes,
                      std::uint64_t seed) {
  return !negative_type_witness(k, tol, random_probes, seed).has_value();
}

KernelMatrix embedding_to_neg_kernel(const PointEmbedding& emb, double tol) {
  if (emb.p != 2.0)
    throw std::invalid_argument("negative-type kernel: requires p = 2");
  const int n = emb.num_points();
  KernelMatrix k;
  k.tolerance = tol;
  k.values = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = emb.pair_norm(i, j);
      k.values(i, j) = k.values(j, i) = d * d;
    }
  if (!is_negative_type(k.values, tol))
    throw std::logic_error("squared-distance kernel failed the negative-type test");
  k.kind = KernelMatrix::Kind::negative_type;
  return k;
}

PointEmbedding neg_kernel_to_embedding(const KernelMatrix& kernel, int basepoint) {
  const auto& k = kernel.values;
  const int n = static_cast<int>(k.rows());
  if (basepoint < 0 || basepoint >= n)
    throw std::invalid_argument("kernel embedding: basepoint out of range");
  if (auto witness = negative_type_witness(k, kernel.tolerance, 100, 11))
    throw KernelNotNegativeType(*witness);

  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) = (k(i, basepoint) + k(j, basepoint) - k(i, j)) / 2.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  double clamp = 1e-9 * std::max(1.0, gram.cwiseAbs().maxCoeff());
  PointEmbedding emb;
  emb.p = 2.0;
  emb.vectors = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < n; ++c) {
    double ev = es.eigenvalues()(c);
    if (ev <= clamp) continue;  // clamp small/negative directions to zero
    emb.vectors.col(c) = es.eigenvectors().col(c) * std::sqrt(ev);
  }
  return emb;
}

BernsteinResult bernstein_truncate(const KernelMatrix& kernel, double l,
                                   double ratio_tol) {
  if (!(l > 0)) throw std::invalid_argument("bernstein: l must be positive");
  if (kernel.kind != KernelMatrix::Kind::negative_type &&
      !is_negative_type(kernel.values, kernel.tolerance))
    throw std::invalid_argument("bernstein: input must be negative-type");

  BernsteinResult out;
  out.l = l;
  out.kernel.tolerance = kernel.tolerance;
  const int n = static_cast<int>(kernel.values.rows());
  out.kernel.values = Eigen::MatrixXd::Zero(n, n);
  out.ratio_bound_ok = true;
  const double lower = 1.0 - std::exp(-1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double k = kernel.values(i, j);
      double m = l * (1.0 - std::exp(-k / l));
      out.kernel.values(i, j) = m;
      if (k > 0) {
        double ratio = m / std::min(k, l);
        out.min_ratio = std::min(out.min_ratio, ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
        if (ratio < lower - ratio_tol || ratio > 1.0 + ratio_tol)
          out.ratio_bound_ok = false;
      }
    }
  out.negative_type_ok = is_negative_type(out.kernel.values, kernel.tolerance);
  out.kernel.kind = out.negative_type_ok ? KernelMatrix::Kind::negative_type
                                         : KernelMatrix::Kind::unverified;
  return out;
}

ConeEmbedding cone_embedding_from_slices(
    const std::vector<PointEmbedding>& slices, int n_lo,
    const std::vector<double>& sample_scales, std::optional<double> claimed_D) {
  if (slices.size() < 2)
    throw std::invalid_argument("cone embedding: need at least two slice levels");
  const int pts = slices[0].num_points();
  int total_dim = 1;
  for (const auto& s : slices) {
    if (s.num_points() != pts)
      throw std::invalid_argument("cone embedding: slice point counts differ");
    total_dim += s.dim();
  }
  ConeEmbedding cone;
  cone.n_lo = n_lo;
  cone.num_slice_points = pts;
  cone.sample_scales = sample_scales;
  for (std::size_t k = 0; k < slices.size(); ++k) {
    double radius = slices[k].max_point_norm();
    double level_scale = std::ldexp(1.0, n_lo + static_cast<int>(k));
    cone.actual_D = std::max(cone.actual_D, radius / level_scale);
    if (claimed_D && radius > *claimed_D * level_scale + 1e-12)
      throw SliceLevelTooLarge(n_lo + static_cast<int>(k), radius,
                               *claimed_D * level_scale);
  }

  const double s_min = std::ldexp(1.0, n_lo);
  const double s_max = std::ldexp(1.0, n_lo + static_cast<int>(slices.size()) - 1);
  cone.embedding.p = 2.0;
  cone.embedding.vectors =
      Eigen::MatrixXd::Zero(sample_scales.size() * pts, total_dim);
  for (std::size_t si = 0; si < sample_scales.size(); ++si) {
    double s = sample_scales[si];
    if (s < s_min - 1e-12 || s > s_max + 1e-12)
      throw std::invalid_argument("cone embedding: sample scale outside slice range");
    int n = n_lo;
    while (std::ldexp(1.0, n + 1) < s - 1e-12) ++n;
    n = std::min(n, n_lo + static_cast<int>(slices.size()) - 2);
    double lo = std::ldexp(1.0, n), hi = std::ldexp(1.0, n + 1);
    double theta = (hi - s) / (hi - lo);
    theta = std::clamp(theta, 0.0, 1.0);

    int col_lo = 1;
    for (int k = 0; k < n - n_lo; ++k) col_lo += slices[k].dim();
    int col_hi = col_lo + slices[n - n_lo].dim();
    for (int y = 0; y < pts; ++y) {
      int r = cone.row(static_cast<int>(si), y);
      cone.embedding.vectors(r, 0) = s;
      cone.embedding.vectors.block(r, col_lo, 1, slices[n - n_lo].dim()) =
          theta * slices[n - n_lo].vectors.row(y);
      cone.embedding.vectors.block(r, col_hi, 1, slices[n - n_lo + 1].dim()) =
          (1.0 - theta) * slices[n - n_lo + 1].vectors.row(y);
    }
  }
  return cone;
}

ConeEmbeddingCheck check_cone_embedding(
    const ConeEmbedding& cone,
    const std::vector<std::vector<double>>& level_metrics,
    const std::function<double(double)>& rho_minus,
    const std::function<double(double)>& rho_plus, double tol) {
  ConeEmbeddingCheck check;
  const int pts = cone.num_slice_points;
  const double D = cone.actual_D;
  const auto& scales = cone.sample_scales;
  if (level_metrics.size() != scales.size())
    throw std::invalid_argument("cone check: one level metric per sample scale");

  for (std::size_t si = 0; si < scales.size(); ++si) {
    for (std::size_t ti = si; ti < scales.size(); ++ti) {
      double s = scales[si], t = scales[ti];
      const auto& d_low = level_metrics[si];  // metric at min(s, t)
      for (int y = 0; y < pts; ++y) {
        for (int y2 = 0; y2 < pts; ++y2) {
          if (si == ti && y2 <= y) continue;
          double d_s_yy = d_low[std::size_t(y) * pts + y2];
          double cone_d = (t - s) + d_s_yy;
          double norm = cone.embedding.pair_norm(cone.row(si, y),
                                                 cone.row(ti, y2));
          ++check.pairs_checked;
          if (t >= 2 * s) {
            double lo = cone_d / 8.0 ;
            double hi = (5.0 * D + 1.0) * cone_d;
            check.worst_far_margin =
                std::min({check.worst_far_margin, norm - lo, hi - norm});
            if (norm < lo - tol || norm > hi + tol) check.far_case_ok = false;
          }
          if (t <= 2 * s) {
            double hi = 3.0 * rho_plus(4.0 * cone_d) + (12.0 * D + 1.0) * cone_d;
            check.worst_upper_margin =
                std::min(check.worst_upper_margin, hi - norm);
            if (norm > hi + tol) check.near_upper_ok = false;
            double rm = rho_minus(d_s_yy / 2.0);
            double lo = rm * rm / 8.0;
            double lhs = norm * norm - (t - s) * (t - s);
            check.worst_lower_margin =
                std::min(check.worst_lower_margin, lhs - lo);
            if (lhs < lo - tol) check.near_lower_ok = false;
          }
        }
      }
    }
  }
  return check;
}

SliceEmbeddingResult slice_embedding_from_box(
    const TruncatedCompletion& trunc, const Rat& s,
    const std::vector<PointEmbedding>& box_embeddings) {
  if (static_cast<int>(box_embeddings.size()) < trunc.level())
    throw std::invalid_argument("slice embedding: one box embedding per level");
  for (int n = 1; n <= trunc.level(); ++n)
    if (box_embeddings[n - 1].num_points() != trunc.chain().group(n).size())
      throw std::invalid_argument("slice embedding: box embedding size mismatch");

  SliceEmbeddingResult out;
  const int pts = trunc.num_points();
  out.n_s = largest_scale_index(trunc, s);
  const int n_s = out.n_s == 0 ? 1 : out.n_s;  // below-first-scale fallback
  out.below_first_scale = out.n_s == 0;
  double sa = to_double(s * trunc.weights().a[n_s - 1]);
  out.l = sa * sa;

  // Bernstein-recovered block from the level-n_s embedding
  PointEmbedding projected;
  projected.p = 2.0;
  const auto& top_emb = box_embeddings[n_s - 1];
  projected.vectors = Eigen::MatrixXd::Zero(pts, top_emb.dim());
  for (int g = 0; g < pts; ++g)
    projected.vectors.row(g) = top_emb.vectors.row(trunc.project(g, n_s));
  auto kernel = embedding_to_neg_kernel(projected);
  auto bern = bernstein_truncate(kernel, out.l);
  if (!bern.negative_type_ok)
    throw std::logic_error("slice embedding: truncated kernel lost negative type");
  auto recovered = neg_kernel_to_embedding(bern.kernel);
  for (int g = 0; g < pts; ++g)
    for (int g2 = 0; g2 < pts; ++g2) {
      double got = recovered.pair_norm(g, g2);
      double want = std::sqrt(bern.kernel.values(g, g2));
      out.roundtrip_error = std::max(out.roundtrip_error, std::abs(got - want));
    }

  int head_dim = 0;
  const PointEmbedding* head = nullptr;
  if (!out.below_first_scale && out.n_s >= 2) {
    head = &box_embeddings[out.n_s - 2];
    head_dim = head->dim();
  }
  out.embedding.p = 2.0;
  out.embedding.vectors =
      Eigen::MatrixXd::Zero(pts, head_dim + recovered.dim());
  for (int g = 0; g < pts; ++g) {
    if (head)
      out.embedding.vectors.block(g, 0, 1, head_dim) =
          head->vectors.row(trunc.project(g, out.n_s - 1));
    out.embedding.vectors.block(g, head_dim, 1, recovered.dim()) =
        recovered.vectors.row(g);
  }
  return out;
}

SliceEmbeddingCheck check_slice_embedding(
    const SliceEmbeddingResult& result, const std::vector<double>& d_s, int n,
    const std::function<double(double)>& rho_minus,
    const std::function<double(double)>& rho_plus, double tol) {
  SliceEmbeddingCheck check;
  const double bern_floor = std::sqrt(1.0 - std::exp(-1.0));
  for (int g = 0; g < n; ++g)
    for (int g2 = g + 1; g2 < n; ++g2) {
      double d = d_s[std::size_t(g) * n + g2];
      double norm = result.embedding.pair_norm(g, g2);
      double lo = bern_floor * rho_minus(std::max(d - 1.0, 0.0) / 2.0);
      double hi = std::sqrt(2.0) * rho_plus(2.0 * d);
      ++check.pairs_checked;
      check.worst_lower_margin = std::min(check.worst_lower_margin, norm - lo);
      check.worst_upper_margin = std::min(check.worst_upper_margin, hi - norm);
      if (norm < lo - tol || norm > hi + tol) check.coarse_bounds_hold = false;
    }
  return check;
}

PointEmbedding cycle_embedding(const FiniteQuotientGroup& cyclic) {
  const int m = cyclic.size();
  PointEmbedding emb;
  emb.p = 2.0;
  emb.vectors = Eigen::MatrixXd::Zero(m, 2);
  const double radius = m / (2.0 * M_PI);
  for (int e = 0; e < m; ++e) {
    double angle = 2.0 * M_PI * double(cyclic.payload(e)[0]) / m;
    emb.vectors(e, 0) = radius * std::cos(angle);
    emb.vectors(e, 1) = radius * std::sin(angle);
  }
  return emb;
}

}  // namespace warplab
