#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "warplab/graph.hpp"

namespace warplab {

struct DisconnectedGraph : std::runtime_error {
  DisconnectedGraph(int u, int v)
      : std::runtime_error("graph is disconnected: vertices " +
                           std::to_string(u) + " and " + std::to_string(v) +
                           " lie in different components"),
        vertex_a(u), vertex_b(v) {}
  int vertex_a, vertex_b;
};

struct SpectralOptions {
  int dense_limit = 2048;     // above this, iterative gap-only mode
  bool want_eigenpair = true; // compute the lambda_2 eigenvector + residual
  bool full_spectrum = true;  // dense mode: adjacency + Laplacian spectra
  double tolerance = 1e-9;    // iterative residual target (times degree)
  int max_lanczos = 600;
  std::uint64_t seed = 7;
};

struct GraphSpectrum {
  std::string graph_id;
  int num_vertices = 0;
  int max_degree = 0;
  bool regular = false;
  bool gap_defined = false;  // false for single-vertex graphs
  bool dense = false;

  std::vector<double> adjacency_eigenvalues;  // sorted, dense mode
  std::vector<double> laplacian_eigenvalues;  // normalized, sorted, dense mode
  double lambda2 = 0;
  double cheeger_lower = 0;  // lambda2 / 2
  double cheeger_upper = 0;  // sqrt(2 lambda2)
  double residual = -1;      // ||L v - lambda2 v||, -1 when no eigenpair
};

/// lambda_2 of the normalized Laplacian, with the full spectrum in dense
/// mode. Throws DisconnectedGraph on disconnected input.
GraphSpectrum spectral_gap(const Multigraph& graph,
                           const SpectralOptions& opts = {});

struct ExpanderFamilyRow {
  int index = 0;
  int order = 0;
  int max_degree = 0;
  double lambda2 = 0;
  double cheeger_lower = 0;
  double cheeger_upper = 0;
};

struct ExpanderFamilyReport {
  std::vector<ExpanderFamilyRow> rows;
  bool mixed_degrees = false;  // normalization is per-graph anyway; noted
  double min_gap = 0;          // the certified constant over the tested range
  bool decreasing_trend = false;  // lambda2 strictly decreasing (amenable-type)
  std::string classification;     // purely observational
};

/// Table of (n, |G_n|, lambda_2, Cheeger bounds) with an observed-range
/// classification; no asymptotic claim.
ExpanderFamilyReport expander_family_report(const std::vector<Multigraph>& graphs,
                                            const SpectralOptions& opts = {});

/// Exact conductance min |E(S, S^c)| / min(vol S, vol S^c) by exhaustive
/// cut enumeration; n <= 24.
double exact_cheeger_constant(const Multigraph& graph);

}  // namespace warplab
