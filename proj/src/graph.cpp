#include "warplab/graph.hpp"

#include <sstream>
#include <stdexcept>

namespace warplab {

std::vector<int> Multigraph::degrees() const {
  std::vector<int> deg(num_vertices, 0);
  for (auto [u, v] : edges) {
    deg[u] += 1;
    deg[v] += 1;  // u == v: self-loop counts 2
  }
  return deg;
}

std::vector<std::vector<int>> Multigraph::adjacency() const {
  std::vector<std::vector<int>> adj(num_vertices);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

std::vector<int> Multigraph::components() const {
  std::vector<int> comp(num_vertices, -1);
  auto adj = adjacency();
  int id = 0;
  std::vector<int> stack;
  for (int s = 0; s < num_vertices; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[u])
        if (comp[v] < 0) {
          comp[v] = id;
          stack.push_back(v);
        }
    }
    ++id;
  }
  return comp;
}

bool Multigraph::connected() const {
  if (num_vertices <= 1) return true;
  auto comp = components();
  for (int c : comp)
    if (c != 0) return false;
  return true;
}

Multigraph Multigraph::from_edge_list(const std::string& text) {
  Multigraph g;
  std::istringstream in(text);
  std::string line;
  int max_vertex = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "n") {
      ls >> g.num_vertices;
      max_vertex = std::max(max_vertex, g.num_vertices - 1);
      continue;
    }
    int u = std::stoi(first), v = 0;
    if (!(ls >> v)) throw std::invalid_argument("edge list: missing endpoint");
    if (u < 0 || v < 0) throw std::invalid_argument("edge list: negative vertex");
    g.add_edge(u, v);
    max_vertex = std::max({max_vertex, u, v});
  }
  g.num_vertices = std::max(g.num_vertices, max_vertex + 1);
  return g;
}

std::string Multigraph::to_edge_list() const {
  std::ostringstream out;
  out << "n " << num_vertices << "\n";
  for (auto [u, v] : edges) out << u << " " << v << "\n";
  return out.str();
}

}  // namespace warplab
