#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstring>

#include "spectral/matrix_core.hpp"
#include "spectral/random.hpp"

using namespace spectral;

namespace {

Eigen::MatrixXd random_symmetric(int n, SplitMix64& rng, double scale = 1.0) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      m(i, j) = scale * rng.symmetric();
      m(j, i) = m(i, j);
    }
  return m;
}

// 2x2 eigenvalues straight from the characteristic polynomial.
std::pair<double, double> eig2_oracle(double a, double b, double c) {
  const double tr = a + c;
  const double det = a * c - b * b;
  const double disc = std::sqrt(tr * tr / 4.0 - det);
  return {tr / 2.0 - disc, tr / 2.0 + disc};
}

}  // namespace

TEST_CASE("eigh handles a 1x1 matrix") {
  SymmetricMatrix s(1);
  s.set(0, 0, 5.0);
  const Spectrum spec = eigh(s);
  CHECK(spec.eigenvalues[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(spec.eigenvectors(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("eigh reproduces the complete-graph spectrum") {
  SymmetricMatrix l(3);
  for (int i = 0; i < 3; ++i) l.set(i, i, 2.0);
  l.set(0, 1, -1.0);
  l.set(0, 2, -1.0);
  l.set(1, 2, -1.0);
  const Spectrum spec = eigh(l);
  CHECK(std::abs(spec.eigenvalues[0]) <= 1e-12);
  CHECK(spec.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(spec.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("eigh matches the 2x2 characteristic polynomial") {
  Eigen::MatrixXd m(2, 2);
  m << 2, -1, -1, 2;
  const Spectrum spec = eigh(SymmetricMatrix(m));
  const auto [lo, hi] = eig2_oracle(2, -1, 2);
  CHECK(spec.eigenvalues[0] == doctest::Approx(lo).epsilon(1e-14));
  CHECK(spec.eigenvalues[1] == doctest::Approx(hi).epsilon(1e-14));
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(3.0));

  SplitMix64 rng(11);
  for (int rep = 0; rep < 25; ++rep) {
    const Eigen::MatrixXd r = random_symmetric(2, rng, 3.0);
    const Spectrum s = eigh(SymmetricMatrix(r));
    const auto [a, b] = eig2_oracle(r(0, 0), r(1, 0), r(1, 1));
    CHECK(s.eigenvalues[0] == doctest::Approx(a).epsilon(1e-12));
    CHECK(s.eigenvalues[1] == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("spectra reconstruct and stay orthonormal up to order 200") {
  SplitMix64 rng(7);
  for (int n : {2, 7, 40, 200}) {
    const Eigen::MatrixXd m = random_symmetric(n, rng, 2.0);
    const Spectrum spec = eigh(SymmetricMatrix(m));
    for (int i = 0; i + 1 < n; ++i) CHECK(spec.eigenvalues[i] <= spec.eigenvalues[i + 1]);

    const Eigen::MatrixXd rebuilt = spec.eigenvectors *
                                    spec.eigenvalues.asDiagonal() *
                                    spec.eigenvectors.transpose();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    CHECK((rebuilt - m).cwiseAbs().maxCoeff() <= 1e-8 * scale);

    const Eigen::MatrixXd gram = spec.eigenvectors.transpose() * spec.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("eigh is deterministic for identical input bits") {
  SplitMix64 rng(3);
  const Eigen::MatrixXd m = random_symmetric(17, rng);
  const Spectrum a = eigh(SymmetricMatrix(m));
  const Spectrum b = eigh(SymmetricMatrix(m));
  CHECK(std::memcmp(a.eigenvalues.data(), b.eigenvalues.data(), sizeof(double) * 17) == 0);
  CHECK(std::memcmp(a.eigenvectors.data(), b.eigenvectors.data(), sizeof(double) * 17 * 17) == 0);
}

TEST_CASE("pseudo inverse powers of the K_2 Laplacian") {
  Eigen::MatrixXd l(2, 2);
  l << 1, -1, -1, 1;
  const SymmetricMatrix s(l);
  const Spectrum spec = eigh(s);

  const SymmetricMatrix inv = pseudo_inverse_power(spec, -1.0, 1e-9);
  CHECK((inv.mat() - l / 4.0).cwiseAbs().maxCoeff() <= 1e-14);

  const SymmetricMatrix inv_sqrt = pseudo_inverse_power(spec, -0.5, 1e-9);
  CHECK((inv_sqrt.mat() - l / (2.0 * std::sqrt(2.0))).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((inv_sqrt.mat() * inv_sqrt.mat() - inv.mat()).cwiseAbs().maxCoeff() <= 1e-12);

  // L L^+ is the projection onto the complement of the all-ones direction.
  Eigen::MatrixXd proj(2, 2);
  proj << 0.5, -0.5, -0.5, 0.5;
  CHECK((l * inv.mat() - proj).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pseudo inverse power of the identity is the identity") {
  const SymmetricMatrix id = SymmetricMatrix::Identity(4);
  const SymmetricMatrix inv = pseudo_inverse_power(eigh(id), -1.0, 1e-9);
  CHECK((inv.mat() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("pseudo inverse power satisfies the Penrose identity on the range") {
  // Singular PSD input: a weighted path Laplacian.
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(5, 5);
  const double w[4] = {1.0, 2.5, 0.3, 4.0};
  for (int i = 0; i < 4; ++i) {
    l(i, i) += w[i];
    l(i + 1, i + 1) += w[i];
    l(i, i + 1) -= w[i];
    l(i + 1, i) -= w[i];
  }
  const SymmetricMatrix s(l);
  const SymmetricMatrix p = pseudo_inverse_power(eigh(s), -1.0, 1e-9);
  CHECK((p.mat() * s.mat() * p.mat() - p.mat()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("pseudo inverse power rejects degenerate input") {
  const Spectrum zero = eigh(SymmetricMatrix(3));
  CHECK_THROWS_AS(pseudo_inverse_power(zero, -1.0, 1e-9), DegeneracyError);
  CHECK_THROWS_AS(pseudo_inverse_power(zero, -1.0, -1.0), std::invalid_argument);
}

TEST_CASE("sherman_morrison base cases") {
  const SymmetricMatrix id = SymmetricMatrix::Identity(2);
  Eigen::VectorXd v(2);
  v << 1, 0;

  const SymmetricMatrix updated = sherman_morrison(id, v, 1.0);
  Eigen::MatrixXd expect(2, 2);
  expect << 0.5, 0, 0, 1;
  CHECK((updated.mat() - expect).cwiseAbs().maxCoeff() <= 1e-15);

  const SymmetricMatrix unchanged = sherman_morrison(id, v, 0.0);
  CHECK((unchanged.mat() - id.mat()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sherman_morrison matches direct inversion") {
  SplitMix64 rng(21);
  Eigen::MatrixXd a = random_symmetric(10, rng);
  a = Eigen::MatrixXd(a * a.transpose()) + 10.0 * Eigen::MatrixXd::Identity(10, 10);
  Eigen::VectorXd v(10);
  for (int i = 0; i < 10; ++i) v[i] = rng.symmetric();

  const SymmetricMatrix a_inv(Eigen::MatrixXd(a.inverse()));
  const SymmetricMatrix updated = sherman_morrison(a_inv, v, 0.7);
  const Eigen::MatrixXd direct =
      (a + 0.7 * v * v.transpose()).inverse();
  CHECK((updated.mat() - direct).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("sherman_morrison chains stay within 1e-6 of direct inversion") {
  SplitMix64 rng(5);
  const int n = 20;
  Eigen::MatrixXd a = 2.0 * Eigen::MatrixXd::Identity(n, n) + 0.05 * random_symmetric(n, rng);
  Eigen::MatrixXd chain = a.inverse();
  for (int step = 0; step < 50; ++step) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.symmetric();
    v.normalize();
    const double t = rng.uniform(0.05, 0.5);
    chain = sherman_morrison_update(chain, v, t);
    a += t * v * v.transpose();
  }
  CHECK((chain - Eigen::MatrixXd(a.inverse())).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("sherman_morrison flags singular updates") {
  const SymmetricMatrix id = SymmetricMatrix::Identity(1);
  Eigen::VectorXd v(1);
  v << 1;
  CHECK_THROWS_AS(sherman_morrison(id, v, -1.0), SingularUpdateError);
}

TEST_CASE("charpoly_ratio closed-form values") {
  Eigen::VectorXd eigs(1), proj(1);
  eigs << 0;
  proj << 1;
  CHECK(charpoly_ratio(eigs, proj, 2.0) == doctest::Approx(0.5).epsilon(1e-15));

  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd spread(3);
  spread << -1, 0, 2;
  CHECK(charpoly_ratio(spread, zeros, 0.7) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(charpoly_ratio(eigs, proj, 1e-15), PoleError);
  Eigen::VectorXd shorter(2);
  CHECK_THROWS_AS(charpoly_ratio(eigs, shorter, 2.0), std::invalid_argument);
}

namespace {

// Bisection on the update factor; it is strictly increasing between poles.
double factor_root(const Eigen::VectorXd& eigs, const Eigen::VectorXd& proj,
                   double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (charpoly_ratio(eigs, proj, mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("charpoly_ratio roots interlace and match the updated spectrum") {
  SplitMix64 rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 3;
    const Eigen::MatrixXd m = random_symmetric(n, rng, 2.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.symmetric() + 0.1;

    const Spectrum spec = eigh(SymmetricMatrix(m));
    Eigen::VectorXd proj(n);
    for (int i = 0; i < n; ++i) {
      const double p = spec.eigenvectors.col(i).dot(v);
      proj[i] = p * p;
    }

    const Eigen::MatrixXd updated = m + v * v.transpose();
    const Spectrum spec_up = eigh(SymmetricMatrix(updated));

    const double pad = 1e-9 * (1.0 + spec.eigenvalues.cwiseAbs().maxCoeff());
    for (int j = 0; j < n; ++j) {
      const double lo = spec.eigenvalues[j] + pad;
      const double hi = j + 1 < n ? spec.eigenvalues[j + 1] - pad
                                  : spec.eigenvalues[n - 1] + v.squaredNorm() + 1.0;
      // sign change brackets exactly one root in each interval
      CHECK(charpoly_ratio(spec.eigenvalues, proj, lo) < 0.0);
      CHECK(charpoly_ratio(spec.eigenvalues, proj, hi) > 0.0);
      const double root = factor_root(spec.eigenvalues, proj, lo, hi);
      CHECK(root == doctest::Approx(spec_up.eigenvalues[j]).epsilon(1e-6));
    }
  }
}

TEST_CASE("matrix core templates instantiate for float") {
  Eigen::MatrixXf m(2, 2);
  m << 2.f, 1.f, 1.f, 2.f;
  const SpectrumT<float> spec = eigh(SymmetricMatrixT<float>(m));
  CHECK(spec.eigenvalues[0] == doctest::Approx(1.f).epsilon(1e-5));
  CHECK(spec.eigenvalues[1] == doctest::Approx(3.f).epsilon(1e-5));
}
