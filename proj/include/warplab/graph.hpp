#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace warplab {

/// Undirected multigraph; parallel edges and self-loops allowed.
struct Multigraph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  void add_edge(int u, int v) { edges.emplace_back(u, v); }

  /// Degree per vertex; a self-loop contributes 2.
  std::vector<int> degrees() const;

  /// Adjacency lists with multiplicity (self-loops listed twice).
  std::vector<std::vector<int>> adjacency() const;

  /// Component id per vertex.
  std::vector<int> components() const;
  bool connected() const;

  /// Plain "u v" edge list, one pair per line. Lines starting with '#'
  /// are ignored; vertex count is 1 + max index unless a "n <N>" header
  /// is present.
  static Multigraph from_edge_list(const std::string& text);
  std::string to_edge_list() const;
};

}  // namespace warplab
