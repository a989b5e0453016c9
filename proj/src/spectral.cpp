#include "warplab/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace warplab {

namespace {

void require_connected(const Multigraph& g) {
  auto comp = g.components();
  for (std::size_t v = 0; v < comp.size(); ++v)
    if (comp[v] != 0) throw DisconnectedGraph(0, static_cast<int>(v));
}

struct Csr {
  std::vector<int> offsets, targets;
  std::vector<double> inv_sqrt_deg;
  int n = 0;

  explicit Csr(const Multigraph& g) : n(g.num_vertices) {
    auto deg = g.degrees();
    offsets.assign(n + 1, 0);
    for (auto [u, v] : g.edges) {
      offsets[u + 1]++;
      offsets[v + 1]++;
    }
    for (int i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    targets.resize(offsets[n]);
    std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
    for (auto [u, v] : g.edges) {
      targets[cursor[u]++] = v;
      targets[cursor[v]++] = u;
    }
    inv_sqrt_deg.resize(n);
    for (int i = 0; i < n; ++i)
      inv_sqrt_deg[i] = deg[i] > 0 ? 1.0 / std::sqrt(double(deg[i])) : 0.0;
  }

  /// y = (2I - L_norm) x = x + D^{-1/2} A D^{-1/2} x
  void apply_shifted(const std::vector<double>& x, std::vector<double>& y) const {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      double acc = 0;
      for (int k = offsets[i]; k < offsets[i + 1]; ++k) {
        int j = targets[k];
        acc += inv_sqrt_deg[j] * x[j];
      }
      y[i] = x[i] + inv_sqrt_deg[i] * acc;
    }
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

/// Lanczos on B = 2I - L_norm with the known top eigenvector (D^{1/2} 1)
/// deflated; returns (lambda2, residual of the L-eigenpair).
std::pair<double, double> lanczos_gap(const Multigraph& g,
                                      const SpectralOptions& opts) {
  Csr csr(g);
  const int n = csr.n;
  auto deg = g.degrees();
  int max_deg = *std::max_element(deg.begin(), deg.end());

  std::vector<double> perron(n);
  for (int i = 0; i < n; ++i) perron[i] = std::sqrt(double(deg[i]));
  double pn = std::sqrt(dot(perron, perron));
  for (auto& v : perron) v /= pn;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;

  std::vector<double> v(n);
  for (auto& x : v) x = gauss(rng);
  axpy(-dot(v, perron), perron, v);
  double nv = std::sqrt(dot(v, v));
  for (auto& x : v) x /= nv;
  basis.push_back(v);

  std::vector<double> w(n);
  const int kmax = std::min(opts.max_lanczos, n - 1);
  double best_lambda = 0, best_residual = -1;

  for (int k = 0; k < kmax; ++k) {
    csr.apply_shifted(basis[k], w);
    double a = dot(w, basis[k]);
    alpha.push_back(a);
    axpy(-a, basis[k], w);
    if (k > 0) axpy(-beta[k - 1], basis[k - 1], w);
    // full reorthogonalization against the basis and the deflated vector
    axpy(-dot(w, perron), perron, w);
    for (const auto& b : basis) axpy(-dot(w, b), b, w);
    double nb = std::sqrt(dot(w, w));

    const int m = k + 1;
    bool check_now = nb < 1e-14 || m == kmax || (m >= 12 && m % 4 == 0);
    if (check_now) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      int top = m - 1;  // largest Ritz value of B
      double theta = es.eigenvalues()(top);
      std::vector<double> u(n, 0.0);
      for (int i = 0; i < m; ++i) axpy(es.eigenvectors()(i, top), basis[i], u);
      double un = std::sqrt(dot(u, u));
      for (auto& x : u) x /= un;
      std::vector<double> bu(n);
      csr.apply_shifted(u, bu);
      double resid = 0;
      for (int i = 0; i < n; ++i) {
        double r = bu[i] - theta * u[i];
        resid += r * r;
      }
      resid = std::sqrt(resid);
      best_lambda = 2.0 - theta;
      best_residual = resid;
      if (resid <= opts.tolerance * max_deg || nb < 1e-14) break;
    }
    if (nb < 1e-14) break;
    beta.push_back(nb);
    for (auto& x : w) x /= nb;
    basis.push_back(w);
  }
  return {best_lambda, best_residual};
}

}  // namespace

GraphSpectrum spectral_gap(const Multigraph& graph, const SpectralOptions& opts) {
  GraphSpectrum out;
  out.num_vertices = graph.num_vertices;
  auto deg = graph.degrees();
  out.max_degree = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  out.regular =
      !deg.empty() && *std::min_element(deg.begin(), deg.end()) == out.max_degree;

  if (graph.num_vertices <= 1) {
    out.gap_defined = false;  // gap-undefined marker
    return out;
  }
  require_connected(graph);
  out.gap_defined = true;

  if (graph.num_vertices <= opts.dense_limit) {
    out.dense = true;
    const int n = graph.num_vertices;
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
    for (auto [u, v] : graph.edges) {
      if (u == v) {
        adj(u, u) += 2;
      } else {
        adj(u, v) += 1;
        adj(v, u) += 1;
      }
    }
    Eigen::VectorXd inv_sqrt(n);
    for (int i = 0; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(double(deg[i]));
    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n) -
                          inv_sqrt.asDiagonal() * adj * inv_sqrt.asDiagonal();

    if (opts.full_spectrum) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> adj_es(adj,
                                                            Eigen::EigenvaluesOnly);
      out.adjacency_eigenvalues.assign(adj_es.eigenvalues().data(),
                                       adj_es.eigenvalues().data() + n);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> lap_es(
        lap, opts.want_eigenpair ? Eigen::ComputeEigenvectors
                                 : Eigen::EigenvaluesOnly);
    out.laplacian_eigenvalues.assign(lap_es.eigenvalues().data(),
                                     lap_es.eigenvalues().data() + n);
    out.lambda2 = out.laplacian_eigenvalues[1];
    if (opts.want_eigenpair) {
      Eigen::VectorXd v = lap_es.eigenvectors().col(1);
      out.residual = (lap * v - out.lambda2 * v).norm();
    }
  } else {
    auto [lambda2, residual] = lanczos_gap(graph, opts);
    out.lambda2 = lambda2;
    out.residual = residual;
  }
  out.cheeger_lower = out.lambda2 / 2.0;
  out.cheeger_upper = std::sqrt(2.0 * out.lambda2);
  return out;
}

ExpanderFamilyReport expander_family_report(const std::vector<Multigraph>& graphs,
                                            const SpectralOptions& opts) {
  ExpanderFamilyReport report;
  if (graphs.empty()) {
    report.classification = "empty family";
    return report;
  }
  report.min_gap = 2.0;
  report.decreasing_trend = true;
  int first_degree = -1;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    auto spec = spectral_gap(graphs[i], opts);
    ExpanderFamilyRow row;
    row.index = static_cast<int>(i + 1);
    row.order = spec.num_vertices;
    row.max_degree = spec.max_degree;
    row.lambda2 = spec.lambda2;
    row.cheeger_lower = spec.cheeger_lower;
    row.cheeger_upper = spec.cheeger_upper;
    report.rows.push_back(row);
    if (first_degree < 0) first_degree = spec.max_degree;
    if (spec.max_degree != first_degree) report.mixed_degrees = true;
    report.min_gap = std::min(report.min_gap, spec.lambda2);
    if (i > 0 && !(row.lambda2 < report.rows[i - 1].lambda2))
      report.decreasing_trend = false;
  }
  report.classification =
      report.decreasing_trend && report.rows.size() > 1
          ? "gap -> 0 trend over tested range (amenable-type)"
          : "gap bounded below >= " + std::to_string(report.min_gap) +
                " over tested range";
  return report;
}

double exact_cheeger_constant(const Multigraph& graph) {
  const int n = graph.num_vertices;
  if (n < 2 || n > 24)
    throw std::invalid_argument("exact cheeger: 2 <= n <= 24 required");
  require_connected(graph);
  auto deg = graph.degrees();
  long long total_vol = 0;
  for (int d : deg) total_vol += d;

  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t masks = 1u << n;
  for (std::uint32_t mask = 1; mask + 1 < masks; ++mask) {
    long long vol = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) vol += deg[i];
    long long small_vol = std::min(vol, total_vol - vol);
    if (small_vol == 0) continue;
    long long cut = 0;
    for (auto [u, v] : graph.edges)
      if (((mask >> u) & 1u) != ((mask >> v) & 1u)) ++cut;
    best = std::min(best, double(cut) / double(small_vol));
  }
  return best;
}

}  // namespace warplab
