#include "warplab/hr.hpp"

#include <algorithm>
#include <map>

namespace warplab {

Rat l1_distance(const ProbVector& a, const ProbVector& b) {
  Rat sum(0);
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      sum += rat_abs(a[i].second);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      sum += rat_abs(b[j].second);
      ++j;
    } else {
      sum += rat_abs(a[i].second - b[j].second);
      ++i;
      ++j;
    }
  }
  return sum;
}

Rat total_mass(const ProbVector& a) {
  Rat sum(0);
  for (const auto& [idx, mass] : a) sum += mass;
  return sum;
}

void HRFamily::validate() const {
  if (static_cast<int>(assignment.size()) != n)
    throw std::invalid_argument("HR family: one vector per point required");
  for (const auto& vec : assignment) {
    for (std::size_t k = 0; k < vec.size(); ++k) {
      if (vec[k].second < Rat(0))
        throw std::invalid_argument("HR family: negative mass");
      if (k > 0 && vec[k].first <= vec[k - 1].first)
        throw std::invalid_argument("HR family: support must be sorted");
      if (vec[k].first < 0 || vec[k].first >= n)
        throw std::invalid_argument("HR family: support outside the domain");
    }
    if (total_mass(vec) != Rat(1))
      throw std::invalid_argument("HR family: masses must sum to 1");
  }
}

HRCertificate verify_hr(const HRFamily& family) {
  family.validate();
  HRCertificate cert;
  cert.max_variation = Rat(0);
  cert.max_support_radius = Rat(0);
  for (int x = 0; x < family.n; ++x) {
    for (const auto& [y, mass] : family.assignment[x]) {
      if (mass == Rat(0)) continue;
      if (cert.max_support_radius < family.dist(x, y)) {
        cert.max_support_radius = family.dist(x, y);
        cert.worst_support_point = x;
      }
    }
    for (int x2 = x + 1; x2 < family.n; ++x2) {
      if (family.dist(x, x2) > family.R) continue;
      Rat var = l1_distance(family.assignment[x], family.assignment[x2]);
      if (cert.max_variation < var) {
        cert.max_variation = var;
        cert.worst_pair = {x, x2};
      }
    }
  }
  cert.variation_ok = cert.max_variation <= family.epsilon;
  cert.support_ok = cert.max_support_radius <= family.S;
  cert.passes = cert.variation_ok && cert.support_ok;
  return cert;
}

SingletonFamily singleton_hr(const TruncatedCompletion& trunc, const Rat& s,
                             const Rat& R) {
  if (s < Rat(1)) throw std::invalid_argument("singleton family: s must be >= 1");
  if (!(Rat(0) < R)) throw std::invalid_argument("singleton family: R must be positive");
  const int n = trunc.num_points();
  const int level = trunc.level();

  SingletonFamily out;
  out.n_star = 0;
  for (int lv = 1; lv <= level; ++lv)
    if (s * trunc.weights().a[lv - 1] >= R) out.n_star = lv;

  // BFS-least representative per level-n* fiber ("chosen in the same way
  // for all g"); canonical indexing makes this reproducible.
  out.representative.assign(n, 0);
  if (out.n_star > 0) {
    std::map<int, int> fiber_rep;  // projection -> least element index
    for (int g = 0; g < n; ++g) {
      int key = trunc.project(g, out.n_star);
      fiber_rep.try_emplace(key, g);  // g ascending: first hit is least
    }
    for (int g = 0; g < n; ++g)
      out.representative[g] = fiber_rep[trunc.project(g, out.n_star)];
  }

  auto& fam = out.family;
  fam.n = n;
  fam.R = R;
  fam.epsilon = Rat(0);
  fam.metric.assign(std::size_t(n) * n, Rat(0));
  for (int g = 0; g < n; ++g)
    for (int g2 = 0; g2 < n; ++g2)
      fam.metric[std::size_t(g) * n + g2] = s * trunc.point_distance(g, g2);
  fam.assignment.resize(n);
  Rat max_radius(0);
  for (int g = 0; g < n; ++g) {
    fam.assignment[g] = {{out.representative[g], Rat(1)}};
    max_radius = rat_max(max_radius, fam.dist(g, out.representative[g]));
  }
  fam.S = max_radius;

  if (out.n_star >= level)
    out.claimed_support_bound = Rat(0);
  else if (out.n_star == 0)
    out.claimed_support_bound = s * trunc.weights().a[0];  // whole diameter
  else
    out.claimed_support_bound = s * trunc.weights().a[out.n_star];
  return out;
}

namespace {

Rat clamp01(const Rat& v) {
  if (v < Rat(0)) return Rat(0);
  if (Rat(1) < v) return Rat(1);
  return v;
}

ProbVector scale_and_add(const std::vector<std::pair<ProbVector, Rat>>& parts) {
  std::map<int, Rat> acc;
  for (const auto& [vec, coeff] : parts) {
    if (coeff == Rat(0)) continue;
    for (const auto& [idx, mass] : vec) acc[idx] += coeff * mass;
  }
  ProbVector out;
  for (auto& [idx, mass] : acc)
    if (!(mass == Rat(0))) out.emplace_back(idx, mass);
  return out;
}

}  // namespace

ConeHRResult cone_hr_from_slice_hr(const WarpSystem<Rat>& base,
                                   const std::vector<SliceFamilyInput>& slices,
                                   const Rat& R, const Rat& epsilon, int r_max) {
  if (R < Rat(1)) throw std::invalid_argument("cone family: requires R >= 1");
  if (!(Rat(0) < epsilon))
    throw std::invalid_argument("cone family: epsilon must be positive");
  const int ny = base.size();

  std::map<int, const SliceFamilyInput*> by_level;
  for (const auto& s : slices) {
    if (static_cast<int>(s.assignment.size()) != ny)
      throw std::invalid_argument("cone family: slice assignment size mismatch");
    by_level[s.level] = &s;
  }
  for (int m = 1; m <= r_max; ++m)
    if (!by_level.count(m)) throw MissingSliceFamily(m);

  ConeHRResult cone;
  cone.num_base_points = ny;
  cone.M = static_cast<int>(rat_ceil(R / epsilon));
  const int M = cone.M;

  // uniform slice localisation constant, measured against the level metrics
  std::map<Rat, DistanceMatrix<Rat>> level_cache;
  auto level_at = [&](const Rat& r) -> const DistanceMatrix<Rat>& {
    auto it = level_cache.find(r);
    if (it == level_cache.end())
      it = level_cache.emplace(r, level_metric(base, r)).first;
    return it->second;
  };
  cone.slice_S = Rat(0);
  for (int m = 1; m <= r_max; ++m) {
    const auto& dm = level_at(Rat(m));
    const auto& fam = *by_level[m];
    for (int y = 0; y < ny; ++y)
      for (const auto& [z, mass] : fam.assignment[y])
        if (!(mass == Rat(0))) cone.slice_S = rat_max(cone.slice_S, dm.at(y, z));
  }

  // sampled radii: integers plus midpoints through the cutoff region
  for (int m = 1; m <= r_max; ++m) {
    cone.sample_radii.push_back(Rat(m));
    if (m < std::min(2 * M, r_max)) cone.sample_radii.push_back(Rat(2 * m + 1, 2));
  }
  std::sort(cone.sample_radii.begin(), cone.sample_radii.end());
  const int nr = static_cast<int>(cone.sample_radii.size());

  const Rat diam1 = level_at(Rat(1)).values.empty()
                        ? Rat(0)
                        : *std::max_element(level_at(Rat(1)).values.begin(),
                                            level_at(Rat(1)).values.end());
  cone.support_bound = rat_max(Rat(M) + cone.slice_S, Rat(2 * M) + diam1);

  // assemble a(r, y) = phi(r)·delta_{(1,y0)} + (1-phi(r))·window average
  auto& fam = cone.family;
  fam.n = nr * ny;
  fam.R = R;
  fam.epsilon = Rat(7) * epsilon;
  fam.assignment.resize(fam.n);
  const int y0_sample = cone.sample_index(0, 0);  // radius 1 is sample 0
  if (!(cone.sample_radii[0] == Rat(1)))
    throw std::logic_error("cone family: first sample must be radius 1");

  std::map<int, int> integer_sample;  // level -> radius index
  for (int ri = 0; ri < nr; ++ri)
    if (cone.sample_radii[ri].denominator() == 1)
      integer_sample[static_cast<int>(to_ll(cone.sample_radii[ri].numerator()))] = ri;

  for (int ri = 0; ri < nr; ++ri) {
    const Rat& r = cone.sample_radii[ri];
    Rat phi = clamp01(Rat(2) - r / Rat(M));
    long long floor_r = rat_floor(r);
    for (int y = 0; y < ny; ++y) {
      std::vector<std::pair<ProbVector, Rat>> parts;
      if (!(phi == Rat(0)))
        parts.push_back({ProbVector{{y0_sample, Rat(1)}}, phi});
      if (phi < Rat(1)) {
        Rat coeff = (Rat(1) - phi) / Rat(M);
        for (long long m = floor_r - M + 1; m <= floor_r; ++m) {
          if (m < 1 || m > r_max) throw MissingSliceFamily(static_cast<int>(m));
          const auto& cm = by_level[static_cast<int>(m)]->assignment[y];
          ProbVector lifted;
          int msample = integer_sample.at(static_cast<int>(m));
          for (const auto& [z, mass] : cm)
            lifted.emplace_back(cone.sample_index(msample, z), mass);
          std::sort(lifted.begin(), lifted.end());
          parts.push_back({std::move(lifted), coeff});
        }
      }
      fam.assignment[cone.sample_index(ri, y)] = scale_and_add(parts);
    }
  }

  // cone metric on the samples: |t - r| + d_min(r,t)(y, y')
  fam.metric.assign(std::size_t(fam.n) * fam.n, Rat(0));
  for (int ri = 0; ri < nr; ++ri)
    for (int ti = ri; ti < nr; ++ti) {
      const auto& dlow = level_at(cone.sample_radii[ri]);
      Rat radial = cone.sample_radii[ti] - cone.sample_radii[ri];
      for (int y = 0; y < ny; ++y)
        for (int y2 = 0; y2 < ny; ++y2) {
          Rat d = radial + dlow.at(y, y2);
          fam.metric[std::size_t(cone.sample_index(ri, y)) * fam.n +
                     cone.sample_index(ti, y2)] = d;
          fam.metric[std::size_t(cone.sample_index(ti, y2)) * fam.n +
                     cone.sample_index(ri, y)] = d;
        }
    }
  fam.validate();

  // certificates
  cone.cone_support_radius = Rat(0);
  cone.support_ok = true;
  for (int idx = 0; idx < fam.n; ++idx)
    for (const auto& [tgt, mass] : fam.assignment[idx]) {
      if (mass == Rat(0)) continue;
      cone.cone_support_radius =
          rat_max(cone.cone_support_radius, fam.dist(idx, tgt));
    }
  cone.support_ok = cone.cone_support_radius <= cone.support_bound;
  fam.S = cone.cone_support_radius;

  cone.max_same_level_variation = Rat(0);
  cone.max_radial_variation = Rat(0);
  cone.max_combined_variation = Rat(0);
  for (int ri = 0; ri < nr; ++ri) {
    const auto& dr = level_at(cone.sample_radii[ri]);
    for (int y = 0; y < ny; ++y) {
      int idx = cone.sample_index(ri, y);
      // same level
      for (int y2 = y + 1; y2 < ny; ++y2) {
        if (dr.at(y, y2) > R) continue;
        Rat var = l1_distance(fam.assignment[idx],
                              fam.assignment[cone.sample_index(ri, y2)]);
        cone.max_same_level_variation = rat_max(cone.max_same_level_variation, var);
      }
      // radial moves
      for (int ti = ri + 1; ti < nr; ++ti) {
        if (cone.sample_radii[ti] - cone.sample_radii[ri] > R) break;
        Rat var = l1_distance(fam.assignment[idx],
                              fam.assignment[cone.sample_index(ti, y)]);
        cone.max_radial_variation = rat_max(cone.max_radial_variation, var);
      }
      // general pairs within cone distance R
      for (int ti = ri; ti < nr; ++ti)
        for (int y2 = 0; y2 < ny; ++y2) {
          int idx2 = cone.sample_index(ti, y2);
          if (idx2 <= idx || fam.dist(idx, idx2) > R) continue;
          Rat var = l1_distance(fam.assignment[idx], fam.assignment[idx2]);
          cone.max_combined_variation = rat_max(cone.max_combined_variation, var);
        }
    }
  }
  cone.variation_ok = cone.max_same_level_variation <= epsilon &&
                      cone.max_radial_variation <= Rat(6) * epsilon &&
                      cone.max_combined_variation <= Rat(7) * epsilon;
  return cone;
}

MarginalizedSlice marginalize_cone_hr(const ConeHRResult& cone,
                                      const WarpSystem<Rat>& base,
                                      int radius_index) {
  const int ny = cone.num_base_points;
  MarginalizedSlice out;
  out.radius_index = radius_index;
  out.assignment.resize(ny);
  for (int y = 0; y < ny; ++y) {
    std::map<int, Rat> acc;
    for (const auto& [tgt, mass] : cone.family.assignment[cone.sample_index(radius_index, y)])
      acc[tgt % ny] += mass;  // collapse the radial coordinate
    for (auto& [yy, mass] : acc)
      if (!(mass == Rat(0))) out.assignment[y].emplace_back(yy, mass);
  }

  out.contraction_ok = true;
  for (int y = 0; y < ny; ++y)
    for (int y2 = y + 1; y2 < ny; ++y2) {
      Rat marg = l1_distance(out.assignment[y], out.assignment[y2]);
      Rat cone_var = l1_distance(
          cone.family.assignment[cone.sample_index(radius_index, y)],
          cone.family.assignment[cone.sample_index(radius_index, y2)]);
      if (cone_var < marg) out.contraction_ok = false;
    }

  auto d_s = level_metric(base, cone.sample_radii[radius_index]);
  out.max_support_radius = Rat(0);
  for (int y = 0; y < ny; ++y)
    for (const auto& [yy, mass] : out.assignment[y])
      out.max_support_radius = rat_max(out.max_support_radius, d_s.at(y, yy));
  out.support_ok = out.max_support_radius <= Rat(2) * cone.cone_support_radius;
  return out;
}

InducedKernelResult induced_group_kernel(
    const FiniteQuotientGroup& group, const Eigen::MatrixXd& slice_kernel,
    const std::vector<std::pair<int, int>>& ball, double psd_tol,
    const std::vector<double>* slice_metric,
    std::optional<double> support_bound) {
  const int n = group.size();
  if (slice_kernel.rows() != n || slice_kernel.cols() != n)
    throw std::invalid_argument("induced kernel: kernel size must match the group");
  std::vector<char> in_ball(n, 0);
  for (auto [g, len] : ball) in_ball[g] = 1;
  for (auto [g, len] : ball)
    if (!in_ball[group.inverse(g)])
      throw std::invalid_argument("induced kernel: ball must be inverse-closed");

  InducedKernelResult out;
  out.ball = ball;
  out.h.resize(ball.size());
  // gamma acts by left multiplication; uniform measure over all points
  for (std::size_t bi = 0; bi < ball.size(); ++bi) {
    int gamma = ball[bi].first;
    double acc = 0;
    for (int y = 0; y < n; ++y) acc += slice_kernel(y, group.mult(gamma, y));
    out.h[bi] = acc / n;
  }

  const int bsize = static_cast<int>(ball.size());
  std::vector<int> index_of_element(n, -1);
  for (int bi = 0; bi < bsize; ++bi) index_of_element[ball[bi].first] = bi;
  Eigen::MatrixXd gram(bsize, bsize);
  for (int i = 0; i < bsize; ++i) {
    int gi_inv = group.inverse(ball[i].first);
    for (int j = 0; j < bsize; ++j) {
      int prod = group.mult(gi_inv, ball[j].first);
      int at = index_of_element[prod];
      double value;
      if (at >= 0) {
        value = out.h[at];
      } else {
        double acc = 0;
        for (int y = 0; y < n; ++y) acc += slice_kernel(y, group.mult(prod, y));
        value = acc / n;
      }
      gram(i, j) = value;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  out.min_gram_eigenvalue = es.eigenvalues()(0);
  out.psd_ok = out.min_gram_eigenvalue >= -psd_tol;

  if (slice_metric && support_bound) {
    out.controlled_support_checked = true;
    out.controlled_support_ok = true;
    const auto& d = *slice_metric;
    // premise: k vanishes beyond the bound
    bool premise = true;
    for (int y = 0; y < n && premise; ++y)
      for (int y2 = 0; y2 < n; ++y2)
        if (d[std::size_t(y) * n + y2] > *support_bound &&
            std::abs(slice_kernel(y, y2)) > psd_tol) {
          premise = false;
          break;
        }
    if (premise) {
      for (std::size_t bi = 0; bi < ball.size(); ++bi) {
        int gamma = ball[bi].first;
        double displacement = std::numeric_limits<double>::infinity();
        for (int y = 0; y < n; ++y)
          displacement =
              std::min(displacement, d[std::size_t(y) * n + group.mult(gamma, y)]);
        if (displacement > *support_bound && std::abs(out.h[bi]) > psd_tol)
          out.controlled_support_ok = false;
      }
    }
  }
  return out;
}

InducedKernelResult induced_group_kernel(
    const FiniteQuotientGroup& group, const Eigen::MatrixXd& slice_kernel,
    int ball_radius, double psd_tol, const std::vector<double>* slice_metric,
    std::optional<double> support_bound) {
  return induced_group_kernel(group, slice_kernel, group.word_ball(ball_radius),
                              psd_tol, slice_metric, support_bound);
}

}  // namespace warplab
