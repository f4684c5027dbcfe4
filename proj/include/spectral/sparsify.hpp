#pragma once

#include <iosfwd>

#include "spectral/barrier_select.hpp"
#include "spectral/graph.hpp"

namespace spectral {

/// Edge vectors of a connected graph, expressed in the eigenbasis of the
/// nonzero Laplacian eigenvalues so that sum_e v_e v_e^T is the identity on
/// an (n-1)-dimensional space. Vector j corresponds to edges()[j] of the
/// source graph; ||v_e||^2 = w_e * R_eff(e).
struct EdgeVectorFamily {
  VectorFamily family;
  Eigen::MatrixXd basis;             // n x (n-1), eigenvectors for the retained eigenvalues
  Eigen::VectorXd basis_eigenvalues; // ascending, all positive
};

/// Builds the family from the whitened incidence columns. Throws
/// DisconnectedError for disconnected input.
EdgeVectorFamily edge_vectors(const WeightedGraph& g);

struct SparsifierResult {
  WeightedGraph sparsifier;
  int kept_edges;
  double lambda_min;      // extreme generalized eigenvalues of (L_H, L_G)
  double lambda_max;      // on the complement of the kernel
  double kappa_measured;  // lambda_max / lambda_min
  double kappa_bound;     // preset guarantee for this d
  SelectionTrace trace;
};

/// Sparsifies a connected graph: keeps at most ceil(d*(n-1)) reweighted
/// edges of G with x^T L_G x <= x^T L_H x <= kappa * x^T L_G x for all x
/// orthogonal to the all-ones vector.
SparsifierResult sparsify_graph(const WeightedGraph& g, double d, Preset preset,
                                const SelectionOptions& options = {});

/// Runs the pipeline on each connected component (dimension n_c - 1) and
/// unions the results. Trace records restart their step count per component;
/// indices refer to positions in g.edges().
SparsifierResult sparsify_graph_per_component(const WeightedGraph& g, double d, Preset preset,
                                              const SelectionOptions& options = {});

/// Machine-readable run record: `key: value` lines in stable order
/// (n, m, kept_edges, d, preset, kappa_bound, kappa_measured).
void write_sparsify_metadata(std::ostream& out, const WeightedGraph& input,
                             const SparsifierResult& result, double d, Preset preset);

}  // namespace spectral
