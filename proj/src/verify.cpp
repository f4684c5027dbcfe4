#include "spectral/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spectral/random.hpp"

namespace spectral {

namespace {

constexpr double kRankTol = 1e-9;

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

ApproximationReport approximation_ratio(const SymmetricMatrix& l_original,
                                        const SymmetricMatrix& l_sparse,
                                        int samples, std::uint64_t seed) {
  if (l_original.order() != l_sparse.order())
    throw std::invalid_argument("Laplacians have mismatched order");
  const Eigen::Index n = l_original.order();

  const Spectrum spec_g = eigh(l_original);
  const double cutoff = kRankTol * spec_g.eigenvalues[n - 1];
  Eigen::Index kernel_dim = 0;
  while (kernel_dim < n && spec_g.eigenvalues[kernel_dim] <= cutoff) ++kernel_dim;
  const Eigen::Index k = n - kernel_dim;
  if (k < 1)
    throw std::invalid_argument("original Laplacian is numerically zero");

  const Eigen::MatrixXd basis = spec_g.eigenvectors.rightCols(k);
  const Eigen::VectorXd values = spec_g.eigenvalues.tail(k);
  const Eigen::VectorXd inv_sqrt = values.cwiseSqrt().cwiseInverse();

  // (L_G^+)^{1/2} L_H (L_G^+)^{1/2}, restricted to im(L_G).
  Eigen::MatrixXd reduced = basis.transpose() * l_sparse.mat() * basis;
  reduced = inv_sqrt.asDiagonal() * reduced * inv_sqrt.asDiagonal();
  const Spectrum spec_r = eigh(SymmetricMatrix(reduced));
  const double lambda_min = spec_r.eigenvalues[0];
  const double lambda_max = spec_r.eigenvalues[k - 1];

  ApproximationReport report;
  report.samples = samples;
  report.seed = seed;
  report.lambda_max = lambda_max;
  report.kappa_finite = lambda_max > 0.0 && lambda_min > kRankTol * lambda_max;
  report.lambda_min = report.kappa_finite ? lambda_min : 0.0;
  report.kappa = report.kappa_finite ? lambda_max / lambda_min
                                     : std::numeric_limits<double>::infinity();

  SplitMix64 rng(seed);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < samples; ++it) {
    Eigen::VectorXd y(k);
    for (Eigen::Index i = 0; i < k; ++i) y[i] = rng.symmetric();
    const Eigen::VectorXd x = basis * y;
    const double num = x.dot(l_sparse.mat() * x);
    const double den = x.dot(l_original.mat() * x);
    const double q = num / den;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  report.sampled_min = lo;
  report.sampled_max = hi;
  return report;
}

MixingReport mixing_check(const WeightedGraph& h, std::vector<int> set_s,
                          std::vector<int> set_t, double eps) {
  set_s = sorted_unique(std::move(set_s));
  set_t = sorted_unique(std::move(set_t));
  if (set_s.empty() || set_t.empty())
    throw std::invalid_argument("mixing check needs nonempty vertex sets");
  const int n = h.vertex_count();
  for (int v : set_s)
    if (v < 0 || v >= n) throw std::invalid_argument("set S contains an invalid vertex");
  for (int v : set_t)
    if (v < 0 || v >= n) throw std::invalid_argument("set T contains an invalid vertex");

  std::vector<char> in_s(static_cast<std::size_t>(n), 0), in_t(static_cast<std::size_t>(n), 0);
  for (int v : set_s) in_s[static_cast<std::size_t>(v)] = 1;
  for (int v : set_t) {
    if (in_s[static_cast<std::size_t>(v)])
      throw std::invalid_argument("sets S and T overlap at vertex " + std::to_string(v));
    in_t[static_cast<std::size_t>(v)] = 1;
  }

  double cross = 0.0;
  for (const Edge& e : h.edges()) {
    const bool su = in_s[static_cast<std::size_t>(e.u)], sv = in_s[static_cast<std::size_t>(e.v)];
    const bool tu = in_t[static_cast<std::size_t>(e.u)], tv = in_t[static_cast<std::size_t>(e.v)];
    if ((su && tv) || (tu && sv)) cross += e.w;
  }

  const double size_product =
      static_cast<double>(set_s.size()) * static_cast<double>(set_t.size());
  MixingReport report;
  report.cross_weight = cross;
  report.expected = (1.0 + eps / 2.0) * size_product;
  report.bound = n * (eps / 2.0) * std::sqrt(size_product);
  report.ok = std::abs(cross - report.expected) <= report.bound;
  report.set_s = std::move(set_s);
  report.set_t = std::move(set_t);
  return report;
}

DegreeBoundReport degree_lower_bound(const WeightedGraph& h, int vertex) {
  const int n = h.vertex_count();
  if (vertex < 0 || vertex >= n) throw std::invalid_argument("vertex out of range");
  std::vector<int> neighbors;
  for (const Edge& e : h.edges()) {
    if (e.u == vertex) neighbors.push_back(e.v);
    if (e.v == vertex) neighbors.push_back(e.u);
  }
  if (neighbors.empty())
    throw std::invalid_argument("vertex " + std::to_string(vertex) + " is isolated");
  const int degree = static_cast<int>(neighbors.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(degree));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  x[vertex] = 1.0;
  y[vertex] = 1.0;
  for (int nbr : neighbors) {
    x[nbr] = scale;
    y[nbr] = -scale;
  }

  double quad_x = 0.0, quad_y = 0.0;
  for (const Edge& e : h.edges()) {
    const double dx = x[e.u] - x[e.v];
    const double dy = y[e.u] - y[e.v];
    quad_x += e.w * dx * dx;
    quad_y += e.w * dy * dy;
  }

  const double xstar = x.squaredNorm() - x.sum() * x.sum() / n;
  const double ystar = y.squaredNorm() - y.sum() * y.sum() / n;

  DegreeBoundReport report;
  report.vertex = vertex;
  report.degree = degree;
  report.quad_x = quad_x;
  report.quad_y = quad_y;
  report.xstar_norm2 = xstar;
  report.ystar_norm2 = ystar;
  report.bound = (quad_y / quad_x) * (xstar / ystar);
  return report;
}

ResistanceCalculator::ResistanceCalculator(const WeightedGraph& g)
    : lplus_(g.vertex_count()) {
  if (!is_connected(g))
    throw DisconnectedError("effective resistance requires a connected graph");
  if (g.vertex_count() < 2)
    throw std::invalid_argument("effective resistance needs at least two vertices");
  lplus_ = pseudo_inverse_power(eigh(laplacian(g)), -1.0, kRankTol);
}

double ResistanceCalculator::operator()(int u, int v) const {
  const Eigen::Index n = lplus_.order();
  if (u < 0 || v < 0 || u >= n || v >= n)
    throw std::invalid_argument("vertex out of range");
  if (u == v) return 0.0;
  return lplus_(u, u) + lplus_(v, v) - 2.0 * lplus_(u, v);
}

double effective_resistance(const WeightedGraph& g, int u, int v) {
  return ResistanceCalculator(g)(u, v);
}

}  // namespace spectral
