#pragma once

#include <cstdint>
#include <vector>

#include "spectral/graph.hpp"
#include "spectral/matrix_core.hpp"

namespace spectral {

/// Measured spectral approximation quality of a pair of Laplacians:
/// extreme generalized eigenvalues of (L_H, L_G) on the image of L_G, plus
/// seeded random Rayleigh-quotient extremes as an independent probe.
/// kappa_finite is false when L_H is singular on im(L_G), e.g. the
/// candidate sparsifier is disconnected; lambda_min is reported as 0 then.
struct ApproximationReport {
  double lambda_min;
  double lambda_max;
  double kappa;
  bool kappa_finite;
  double sampled_min;
  double sampled_max;
  int samples;
  std::uint64_t seed;
};

ApproximationReport approximation_ratio(const SymmetricMatrix& l_original,
                                        const SymmetricMatrix& l_sparse,
                                        int samples = 500, std::uint64_t seed = 0);

/// Cross-weight concentration check between two disjoint vertex sets of a
/// graph claimed to (1+eps)-approximate the unit complete graph:
/// |w(S,T) - (1+eps/2)|S||T|| must stay within n(eps/2)sqrt(|S||T|).
struct MixingReport {
  std::vector<int> set_s;
  std::vector<int> set_t;
  double cross_weight;
  double expected;
  double bound;
  bool ok;
};

MixingReport mixing_check(const WeightedGraph& h, std::vector<int> set_s,
                          std::vector<int> set_t, double eps);

/// Certified lower bound on any kappa for which `h` kappa-approximates the
/// complete graph, from test vectors around one vertex: +1 at the vertex,
/// +-1/sqrt(degree) on its neighbors, projected orthogonal to all-ones.
struct DegreeBoundReport {
  int vertex;
  int degree;
  double quad_x;         // x^T L_H x
  double quad_y;         // y^T L_H y
  double xstar_norm2;    // squared norm of the projected x
  double ystar_norm2;
  double bound;          // (quad_y/quad_x) * (xstar_norm2/ystar_norm2)
};

DegreeBoundReport degree_lower_bound(const WeightedGraph& h, int vertex);

/// Effective resistance between two vertices of a connected graph,
/// (chi_u - chi_v)^T L^+ (chi_u - chi_v). The calculator form amortizes the
/// pseudoinverse across queries.
class ResistanceCalculator {
 public:
  explicit ResistanceCalculator(const WeightedGraph& g);
  double operator()(int u, int v) const;

 private:
  SymmetricMatrix lplus_;
};

double effective_resistance(const WeightedGraph& g, int u, int v);

}  // namespace spectral
