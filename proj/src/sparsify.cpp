#include "spectral/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace spectral {

namespace {

constexpr double kRankTol = 1e-9;
constexpr double kDropTol = 1e-12;

std::string formatted(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace

EdgeVectorFamily edge_vectors(const WeightedGraph& g) {
  if (!is_connected(g))
    throw DisconnectedError(
        "graph is disconnected; sparsify each connected component separately");
  const int n = g.vertex_count();
  const int m = g.edge_count();
  const int r = n - 1;

  const Spectrum spec = eigh(laplacian(g));
  const double cutoff = kRankTol * spec.eigenvalues[n - 1];
  int kernel_dim = 0;
  while (kernel_dim < n && spec.eigenvalues[kernel_dim] <= cutoff) ++kernel_dim;
  if (kernel_dim != 1)
    throw DegeneracyError("connected graph produced a Laplacian kernel of dimension " +
                          std::to_string(kernel_dim));

  Eigen::MatrixXd basis = spec.eigenvectors.rightCols(r);
  Eigen::VectorXd values = spec.eigenvalues.tail(r);
  const Eigen::VectorXd inv_sqrt = values.cwiseSqrt().cwiseInverse();

  Eigen::MatrixXd columns(r, m);
  for (int j = 0; j < m; ++j) {
    const Edge& e = g.edges()[static_cast<std::size_t>(j)];
    columns.col(j) = std::sqrt(e.w) *
                     (basis.row(e.v) - basis.row(e.u)).transpose().cwiseProduct(inv_sqrt);
    const double norm2 = columns.col(j).squaredNorm();
    if (!(norm2 > 0.0) || norm2 > 1.0 + 1e-9) {
      std::ostringstream msg;
      msg << "edge vector " << j << " has leverage " << norm2 << " outside (0, 1]";
      throw DegeneracyError(msg.str());
    }
  }
  return EdgeVectorFamily{VectorFamily(std::move(columns)), std::move(basis),
                          std::move(values)};
}

SparsifierResult sparsify_graph(const WeightedGraph& g, double d, Preset preset,
                                const SelectionOptions& options) {
  const EdgeVectorFamily fam = edge_vectors(g);
  const int r = fam.family.dimension();
  const BarrierParams params = BarrierParams::for_preset(preset, d, r);
  SelectionResult sel = sparsify_vectors(fam.family, params, options);

  std::vector<Edge> kept;
  Eigen::MatrixXd accumulated = Eigen::MatrixXd::Zero(r, r);
  for (int j = 0; j < fam.family.count(); ++j) {
    const double s = sel.weights[j];
    if (s <= kDropTol) continue;
    const Edge& e = g.edges()[static_cast<std::size_t>(j)];
    kept.push_back({e.u, e.v, e.w * s});
    accumulated.noalias() +=
        (s * fam.family.columns().col(j)) * fam.family.columns().col(j).transpose();
  }

  // Generalized extremes of (L_H, L_G) on the kernel complement; in the
  // reduction basis that is just the spectrum of the kept weighted sum.
  const Spectrum spec = eigh(SymmetricMatrix(accumulated));
  const double lambda_min = spec.eigenvalues[0];
  const double lambda_max = spec.eigenvalues[spec.eigenvalues.size() - 1];

  const int kept_count = static_cast<int>(kept.size());
  return SparsifierResult{WeightedGraph(g.vertex_count(), std::move(kept)),
                          kept_count,
                          lambda_min,
                          lambda_max,
                          lambda_max / lambda_min,
                          condition_bound(d, preset),
                          std::move(sel.trace)};
}

SparsifierResult sparsify_graph_per_component(const WeightedGraph& g, double d, Preset preset,
                                              const SelectionOptions& options) {
  const auto components = connected_components(g);
  if (components.size() == 1) return sparsify_graph(g, d, preset, options);

  std::vector<Edge> kept;
  SelectionTrace trace;
  int kept_count = 0;
  double lambda_min = std::numeric_limits<double>::infinity();
  double lambda_max = -std::numeric_limits<double>::infinity();

  for (const std::vector<int>& comp : components) {
    if (comp.size() < 2) continue;
    std::vector<int> local_id(static_cast<std::size_t>(g.vertex_count()), -1);
    for (std::size_t i = 0; i < comp.size(); ++i)
      local_id[static_cast<std::size_t>(comp[i])] = static_cast<int>(i);

    std::vector<Edge> local_edges;
    std::vector<int> global_index;
    for (int j = 0; j < g.edge_count(); ++j) {
      const Edge& e = g.edges()[static_cast<std::size_t>(j)];
      if (local_id[static_cast<std::size_t>(e.u)] < 0 ||
          local_id[static_cast<std::size_t>(e.v)] < 0)
        continue;
      local_edges.push_back({local_id[static_cast<std::size_t>(e.u)],
                             local_id[static_cast<std::size_t>(e.v)], e.w});
      global_index.push_back(j);
    }

    SparsifierResult part = sparsify_graph(WeightedGraph(static_cast<int>(comp.size()),
                                                         std::move(local_edges)),
                                           d, preset, options);
    for (const Edge& e : part.sparsifier.edges())
      kept.push_back({comp[static_cast<std::size_t>(e.u)],
                      comp[static_cast<std::size_t>(e.v)], e.w});
    for (TraceRecord rec : part.trace) {
      rec.index = global_index[static_cast<std::size_t>(rec.index)];
      trace.push_back(rec);
    }
    kept_count += part.kept_edges;
    lambda_min = std::min(lambda_min, part.lambda_min);
    lambda_max = std::max(lambda_max, part.lambda_max);
  }

  if (kept_count == 0) {
    lambda_min = 1.0;  // no constrained directions at all
    lambda_max = 1.0;
  }
  return SparsifierResult{WeightedGraph(g.vertex_count(), std::move(kept)),
                          kept_count,
                          lambda_min,
                          lambda_max,
                          lambda_max / lambda_min,
                          condition_bound(d, preset),
                          std::move(trace)};
}

void write_sparsify_metadata(std::ostream& out, const WeightedGraph& input,
                             const SparsifierResult& result, double d, Preset preset) {
  out << "n: " << input.vertex_count() << '\n';
  out << "m: " << input.edge_count() << '\n';
  out << "kept_edges: " << result.kept_edges << '\n';
  out << "d: " << formatted(d) << '\n';
  out << "preset: " << preset_name(preset) << '\n';
  out << "kappa_bound: " << formatted(result.kappa_bound) << '\n';
  out << "kappa_measured: " << formatted(result.kappa_measured) << '\n';
}

}  // namespace spectral
