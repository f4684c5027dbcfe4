#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spectral/matrix_core.hpp"

namespace spectral {

/// One undirected edge in canonical orientation u < v, weight > 0.
struct Edge {
  int u;
  int v;
  double w;
};

/// Immutable weighted undirected graph. Edges are canonicalized on
/// construction: oriented u < v, duplicates merged by summing weights,
/// sorted lexicographically. No self-loops, no non-positive weights.
class WeightedGraph {
 public:
  WeightedGraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Combinatorial degree of every vertex.
  std::vector<int> degrees() const;

 private:
  int n_;
  std::vector<Edge> edges_;
};

/// Signed edge-vertex incidence system: row e of B has -1 at the tail
/// (smaller endpoint) and +1 at the head, W holds the edge weights.
struct IncidenceSystem {
  Eigen::MatrixXd b;       // m x n
  Eigen::VectorXd weights; // m
};

/// Parses the edge-list format: first non-comment line is the vertex count,
/// then one `u v w` per line, single spaces, `#` starts a comment line.
/// Errors carry the 1-based line number.
WeightedGraph parse_graph(std::istream& in);
WeightedGraph parse_graph(const std::string& text);
WeightedGraph read_graph_file(const std::string& path);

/// Writes the canonical edge-list form: header line `n`, then `u v w` per
/// edge in canonical order, weights in shortest round-trip decimal.
void write_graph(std::ostream& out, const WeightedGraph& g);
void write_graph_file(const std::string& path, const WeightedGraph& g);
std::string to_edge_list(const WeightedGraph& g);

/// Graph Laplacian L with L(u,u) = sum of incident weights and
/// L(u,v) = -w_uv, so x^T L x = sum_e w_e (x_u - x_v)^2.
SymmetricMatrix laplacian(const WeightedGraph& g);

IncidenceSystem incidence(const WeightedGraph& g);

/// B^T W B accumulated edge by edge in canonical order; matches
/// laplacian(g) exactly because both use the same summation order.
SymmetricMatrix incidence_laplacian(const IncidenceSystem& sys);

/// Breadth-first reachability from vertex 0.
bool is_connected(const WeightedGraph& g);

/// Vertex sets of the connected components, each ascending, ordered by
/// smallest member.
std::vector<std::vector<int>> connected_components(const WeightedGraph& g);

/// Shortest round-trip decimal rendering of a double (the writer format).
std::string format_double(double value);

}  // namespace spectral
