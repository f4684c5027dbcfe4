#pragma once

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "spectral/errors.hpp"

namespace spectral {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense symmetric matrix. The upper triangle is mirrored from the lower one
/// on construction and every mutation touches both halves, so
/// entry(i,j) == entry(j,i) holds exactly, not just up to roundoff.
template <typename Scalar>
class SymmetricMatrixT {
 public:
  explicit SymmetricMatrixT(Eigen::Index order)
      : m_(MatrixX<Scalar>::Zero(order, order)) {
    if (order < 1) throw std::invalid_argument("matrix order must be >= 1");
  }

  /// Builds from any square matrix; the strict lower triangle wins.
  explicit SymmetricMatrixT(const MatrixX<Scalar>& m) : m_(m) {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
      throw std::invalid_argument("symmetric matrix must be square, order >= 1");
    m_.template triangularView<Eigen::StrictlyUpper>() =
        m_.transpose().template triangularView<Eigen::StrictlyUpper>();
  }

  static SymmetricMatrixT Identity(Eigen::Index order) {
    return SymmetricMatrixT(MatrixX<Scalar>(MatrixX<Scalar>::Identity(order, order)));
  }

  Eigen::Index order() const { return m_.rows(); }
  const MatrixX<Scalar>& mat() const { return m_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  void set(Eigen::Index i, Eigen::Index j, Scalar value) {
    m_(i, j) = value;
    m_(j, i) = value;
  }
  void add(Eigen::Index i, Eigen::Index j, Scalar value) {
    m_(i, j) += value;
    if (i != j) m_(j, i) = m_(i, j);
  }

  /// A += t * v v^T. Products commute in IEEE arithmetic so the update
  /// preserves exact symmetry.
  void rank_update(const VectorX<Scalar>& v, Scalar t) {
    m_.noalias() += (t * v) * v.transpose();
  }

 private:
  MatrixX<Scalar> m_;
};

using SymmetricMatrix = SymmetricMatrixT<double>;

/// Eigendecomposition of a symmetric matrix: S = U diag(lambda) U^T with
/// ascending eigenvalues and orthonormal columns in U.
template <typename Scalar>
struct SpectrumT {
  VectorX<Scalar> eigenvalues;
  MatrixX<Scalar> eigenvectors;
};

using Spectrum = SpectrumT<double>;

namespace detail {

template <typename Scalar>
Scalar off_diagonal_norm(const MatrixX<Scalar>& a) {
  Scalar sum = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = j + 1; i < a.rows(); ++i) sum += a(i, j) * a(i, j);
  return std::sqrt(Scalar(2) * sum);
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition. Fixed sweep order, convergence when the
/// off-diagonal mass drops below 1e-12 * ||S||_F, capped at 100 sweeps; the
/// result is reproducible bit for bit for identical input bits. Eigenvalues
/// come back ascending and each eigenvector is sign-fixed so its largest
/// component is positive.
template <typename Scalar>
SpectrumT<Scalar> eigh(const SymmetricMatrixT<Scalar>& s) {
  const Eigen::Index n = s.order();
  MatrixX<Scalar> a = s.mat();
  MatrixX<Scalar> u = MatrixX<Scalar>::Identity(n, n);

  const Scalar threshold = Scalar(1e-12) * a.norm();
  constexpr int kMaxSweeps = 100;

  int sweep = 0;
  Scalar off = detail::off_diagonal_norm(a);
  while (off > threshold) {
    if (++sweep > kMaxSweeps) {
      std::ostringstream msg;
      msg << "jacobi eigensolver did not converge: order " << n
          << ", off-diagonal residual " << off;
      throw ConvergenceError(msg.str());
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.transpose());
        a.applyOnTheRight(p, q, rot);
        u.applyOnTheRight(p, q, rot);
      }
    }
    off = detail::off_diagonal_norm(a);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  SpectrumT<Scalar> spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    spec.eigenvalues[k] = a(order[static_cast<std::size_t>(k)],
                            order[static_cast<std::size_t>(k)]);
    spec.eigenvectors.col(k) = u.col(order[static_cast<std::size_t>(k)]);
    Eigen::Index imax = 0;
    spec.eigenvectors.col(k).cwiseAbs().maxCoeff(&imax);
    if (spec.eigenvectors(imax, k) < Scalar(0)) spec.eigenvectors.col(k) = -spec.eigenvectors.col(k);
  }
  return spec;
}

/// Spectral power of the pseudoinverse: sum of lambda_i^exponent u_i u_i^T
/// over eigenvalues above rank_tol * lambda_max. Directions below the cutoff
/// map to zero. Callers use exponent -1 (pseudoinverse) and -1/2.
template <typename Scalar>
SymmetricMatrixT<Scalar> pseudo_inverse_power(const SpectrumT<Scalar>& spec,
                                              Scalar exponent, Scalar rank_tol) {
  if (!(rank_tol > Scalar(0))) throw std::invalid_argument("rank_tol must be positive");
  const Eigen::Index n = spec.eigenvalues.size();
  const Scalar lambda_max = spec.eigenvalues[n - 1];
  const Scalar cutoff = rank_tol * lambda_max;

  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < n; ++i)
    if (spec.eigenvalues[i] > cutoff && spec.eigenvalues[i] > Scalar(0)) kept.push_back(i);
  if (kept.empty())
    throw DegeneracyError("zero matrix has no pseudoinverse power");

  MatrixX<Scalar> acc = MatrixX<Scalar>::Zero(n, n);
  for (Eigen::Index i : kept) {
    const Scalar factor = std::pow(spec.eigenvalues[i], exponent);
    acc.noalias() += (factor * spec.eigenvectors.col(i)) * spec.eigenvectors.col(i).transpose();
  }
  return SymmetricMatrixT<Scalar>(acc);
}

/// Raw rank-one inverse update:
///   (A + t v v^T)^{-1} = A^{-1} - t A^{-1} v v^T A^{-1} / (1 + t v^T A^{-1} v).
/// `a_inv` must be symmetric. Throws when the denominator is within 1e-12 of
/// zero, i.e. the update makes A singular.
template <typename Scalar>
MatrixX<Scalar> sherman_morrison_update(const MatrixX<Scalar>& a_inv,
                                        const VectorX<Scalar>& v, Scalar t) {
  const VectorX<Scalar> w = a_inv * v;
  const Scalar denom = Scalar(1) + t * v.dot(w);
  if (std::abs(denom) < Scalar(1e-12))
    throw SingularUpdateError("rank-one update is singular: 1 + t v^T A^{-1} v ~ 0");
  MatrixX<Scalar> result = a_inv;
  result.noalias() -= (t / denom) * w * w.transpose();
  return result;
}

template <typename Scalar>
SymmetricMatrixT<Scalar> sherman_morrison(const SymmetricMatrixT<Scalar>& a_inv,
                                          const VectorX<Scalar>& v, Scalar t) {
  return SymmetricMatrixT<Scalar>(sherman_morrison_update(a_inv.mat(), v, t));
}

/// Characteristic-polynomial factor for a rank-one update: the value
///   1 - sum_j projections[j] / (x - eigs[j])
/// relates p_{A+vv^T}(x) to p_A(x), with projections[j] = <v, u_j>^2.
/// Its zeros interlace `eigs` when all projections are positive. Used as a
/// test oracle, not on any production path.
template <typename Scalar>
Scalar charpoly_ratio(const VectorX<Scalar>& eigs, const VectorX<Scalar>& projections,
                      Scalar x) {
  if (eigs.size() != projections.size())
    throw std::invalid_argument("eigs and projections must have equal length");
  Scalar sum = 0;
  for (Eigen::Index j = 0; j < eigs.size(); ++j) {
    const Scalar gap = x - eigs[j];
    const Scalar tol = Scalar(1e-12) * std::max(Scalar(1), std::max(std::abs(x), std::abs(eigs[j])));
    if (std::abs(gap) <= tol) {
      std::ostringstream msg;
      msg << "charpoly_ratio evaluated at a pole: x = " << x << " matches eigenvalue " << eigs[j];
      throw PoleError(msg.str());
    }
    sum += projections[j] / gap;
  }
  return Scalar(1) - sum;
}

}  // namespace spectral
