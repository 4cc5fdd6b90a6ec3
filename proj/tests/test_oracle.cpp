#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "rescale/oracle.hpp"

using namespace rescale;

namespace {

using Mat = Eigen::MatrixXcd;

Mat to_eigen(const DensityMatrix& rho) {
  const auto n = static_cast<Eigen::Index>(rho.dim());
  Mat m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = rho(r, c);
  return m;
}

DensityMatrix from_eigen(const Mat& m, std::size_t da, std::size_t db) {
  std::vector<Complex> v(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v[r * m.cols() + c] = m(r, c);
  return {da, db, std::move(v)};
}

Mat random_unitary(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(d, d);
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ();
}

// rho = G G^dagger / tr, G with Gaussian entries: full-rank random state.
DensityMatrix random_state(std::size_t da, std::size_t db, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const auto n = static_cast<Eigen::Index>(da * db);
  Mat a(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) a(r, c) = Complex(g(rng), g(rng));
  Mat rho = a * a.adjoint();
  rho /= rho.trace();
  return from_eigen(rho, da, db);
}

double eigen_log_negativity(const DensityMatrix& rho) {
  const Mat pt = to_eigen(partial_transpose(rho));
  Eigen::SelfAdjointEigenSolver<Mat> es(pt, Eigen::EigenvaluesOnly);
  return std::max(0.0, std::log2(es.eigenvalues().cwiseAbs().sum()));
}

// x (x) y as a state on (A_x A_y) | (B_x B_y): plain Kronecker product in
// (a_x b_x a_y b_y) order followed by an explicit index permutation.
DensityMatrix regrouped_kron(const DensityMatrix& x, const DensityMatrix& y) {
  const std::size_t xa = x.dim_a(), xb = x.dim_b(), ya = y.dim_a(), yb = y.dim_b();
  const std::size_t n = x.dim() * y.dim();
  auto plain = [&](std::size_t r, std::size_t c) {
    return x(r / y.dim(), c / y.dim()) * y(r % y.dim(), c % y.dim());
  };
  // regrouped index (ax, ay, bx, by) -> plain index (ax, bx, ay, by)
  auto to_plain = [&](std::size_t idx) {
    const std::size_t b_multi = idx % (xb * yb), a_multi = idx / (xb * yb);
    const std::size_t ax = a_multi / ya, ay = a_multi % ya;
    const std::size_t bx = b_multi / yb, by = b_multi % yb;
    return (ax * xb + bx) * y.dim() + (ay * yb + by);
  };
  std::vector<Complex> m(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m[r * n + c] = plain(to_plain(r), to_plain(c));
  return {xa * ya, xb * yb, std::move(m)};
}

double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  return worst;
}

}  // namespace

TEST(Jacobi, MatchesEigenOnRandomHermitian) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int n : {1, 2, 5, 16, 40}) {
    Mat a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a(r, c) = Complex(g(rng), g(rng));
    const Mat h = a + a.adjoint();
    std::vector<Complex> flat(n * n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) flat[r * n + c] = h(r, c);
    auto ev = hermitian_eigenvalues(flat, n);
    std::sort(ev.begin(), ev.end());
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(ev[i], es.eigenvalues()(i), 1e-10 * std::max(1.0, std::abs(ev[i])));
  }
}

TEST(Jacobi, SweepCapRaises) {
  std::vector<Complex> m{1.0, 0.5, 0.5, 2.0};
  JacobiOptions opts;
  opts.max_sweeps = 0;
  try {
    hermitian_eigenvalues(m, 2, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EigensolverFailure);
  }
}

TEST(BellDiagonal, PureStateProjector) {
  const auto rho = bell_diagonal_state(1.0);
  EXPECT_TRUE(rho.is_valid());
  // |Psi+> = (|01> + |10>)/sqrt(2)
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<double> psi{0.0, s, s, 0.0};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(std::abs(rho(r, c) - psi[r] * psi[c]), 0.0, 1e-15);
  EXPECT_NEAR(log_negativity(rho), 1.0, 1e-12);
}

TEST(BellDiagonal, SymmetricMixtureIsSeparable) {
  const auto rho = bell_diagonal_state(0.5);
  EXPECT_TRUE(rho.is_valid());
  EXPECT_EQ(log_negativity(rho), 0.0);
  EXPECT_GE(partial_transpose(rho).min_eigenvalue(), -1e-15);
}

TEST(BellDiagonal, ValidAcrossRange) {
  for (double p : {0.0, 0.1, 0.3, 0.77, 1.0}) {
    const auto rho = bell_diagonal_state(p);
    EXPECT_TRUE(rho.is_valid()) << p;
    // LN = log2(1 + |2p - 1|) for this family
    EXPECT_NEAR(log_negativity(rho), std::log2(1.0 + std::abs(2.0 * p - 1.0)), 1e-12);
    EXPECT_NEAR(log_negativity(rho), eigen_log_negativity(rho), 1e-12);
  }
  EXPECT_THROW(bell_diagonal_state(-0.01), Error);
}

TEST(Isotropic, Constructors) {
  const auto me = isotropic_state(2, 1.0);
  EXPECT_TRUE(me.is_valid());
  EXPECT_NEAR(log_negativity(me), 1.0, 1e-12);

  const auto mixed = isotropic_state(3, 1.0 / 9.0);
  EXPECT_TRUE(mixed.is_valid());
  for (double ev : mixed.eigenvalues()) EXPECT_NEAR(ev, 1.0 / 9.0, 1e-14);

  const auto test_state = isotropic_state(3, 0.9);
  EXPECT_TRUE(test_state.is_valid());
  // Partial transpose of an isotropic state has the single negative eigenvalue (1 - dF)/d.
  const double ln = log_negativity(test_state);
  EXPECT_NEAR(ln, eigen_log_negativity(test_state), 1e-12);
  EXPECT_NEAR(ln, std::log2(3.0 * 0.9), 1e-12);

  EXPECT_THROW(isotropic_state(1, 0.5), Error);
  EXPECT_THROW(isotropic_state(3, 1.5), Error);
}

TEST(TensorPower, Basics) {
  const auto rho = bell_diagonal_state(0.3);
  EXPECT_EQ(max_abs_diff(tensor_power(rho, 1), rho), 0.0);
  const auto two = tensor_power(rho, 2);
  EXPECT_EQ(two.dim(), 16u);
  EXPECT_EQ(two.dim_a(), 4u);
  EXPECT_TRUE(two.is_valid());
  const auto three = tensor_power(rho, 3);
  EXPECT_EQ(three.dim(), 64u);
  EXPECT_TRUE(three.is_valid());
  EXPECT_NEAR(three.trace().real(), 1.0, 1e-14);
}

TEST(TensorPower, MatchesRegroupedKronecker) {
  std::mt19937_64 rng(9);
  for (auto [da, db] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 2}}) {
    const auto rho = random_state(da, db, rng);
    const auto two = tensor_power(rho, 2);
    EXPECT_LE(max_abs_diff(two, regrouped_kron(rho, rho)), 1e-15);
    const auto three = tensor_power(rho, 3);
    EXPECT_LE(max_abs_diff(three, regrouped_kron(two, rho)), 1e-15);
  }
}

TEST(TensorPower, DimensionGuard) {
  try {
    tensor_power(isotropic_state(3, 0.9), 4);  // 9^4 = 6561
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionGuard);
  }
}

TEST(PartialTranspose, Involution) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 5; ++i) {
    const auto rho = random_state(2, 3, rng);
    EXPECT_EQ(max_abs_diff(partial_transpose(partial_transpose(rho)), rho), 0.0);
  }
}

TEST(LogNegativity, ProductStatesAreZero) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 5; ++i) {
    const auto a = random_state(2, 1, rng);
    const auto b = random_state(3, 1, rng);
    const auto prod = product_state(a.entries(), 2, b.entries(), 3);
    EXPECT_TRUE(prod.is_valid());
    EXPECT_NEAR(log_negativity(prod), 0.0, 1e-12);
  }
}

TEST(LogNegativity, LocalUnitaryInvariance) {
  std::mt19937_64 rng(14);
  for (auto [da, db] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 3}}) {
    for (int i = 0; i < 5; ++i) {
      const auto rho = random_state(da, db, rng);
      const Mat ua = random_unitary(da, rng), ub = random_unitary(db, rng);
      const auto n = static_cast<Eigen::Index>(da * db);
      Mat u(n, n);
      for (std::size_t a = 0; a < da; ++a)
        for (std::size_t b = 0; b < db; ++b)
          for (std::size_t a2 = 0; a2 < da; ++a2)
            for (std::size_t b2 = 0; b2 < db; ++b2) u(a * db + b, a2 * db + b2) = ua(a, a2) * ub(b, b2);
      const Mat rotated = u * to_eigen(rho) * u.adjoint();
      const auto rho2 = from_eigen(rotated, da, db);
      EXPECT_NEAR(log_negativity(rho2), log_negativity(rho), 1e-10);
    }
  }
}

TEST(LogNegativity, AgreesWithEigenOnRandomStates) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 10; ++i) {
    const auto rho = random_state(2, 2, rng);
    EXPECT_NEAR(log_negativity(rho), eigen_log_negativity(rho), 1e-12);
    EXPECT_NEAR(log_negativity(tensor_power(rho, 2)), eigen_log_negativity(tensor_power(rho, 2)), 1e-10);
  }
}

TEST(AdditivityProbe, BellFamily) {
  const auto probe = additivity_probe(bell_diagonal_state(0.8), 3);
  ASSERT_EQ(probe.values.size(), 3u);
  EXPECT_LE(probe.max_deviation_from_linear, 1e-8);
  EXPECT_NEAR(probe.values[0].second, std::log2(1.6), 1e-12);

  const auto zero = additivity_probe(bell_diagonal_state(0.5), 3);
  for (const auto& [n, v] : zero.values) EXPECT_EQ(v, 0.0) << n;
}

TEST(AdditivityProbe, Isotropic) {
  EXPECT_LE(additivity_probe(isotropic_state(2, 0.9), 2).max_deviation_from_linear, 1e-8);
}

TEST(AdditivityProbe, RandomTwoQubitStates) {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 10; ++i) {
    const auto rho = random_state(2, 2, rng);
    EXPECT_TRUE(rho.is_valid());
    const auto probe = additivity_probe(rho, 3);
    EXPECT_LE(probe.max_deviation_from_linear, 1e-8);
  }
}

TEST(DensityMatrix, ValidationCatchesBadStates) {
  EXPECT_FALSE(DensityMatrix(2, 1, {1.0, 0.0, 0.0, 1.0}).is_valid());           // trace 2
  EXPECT_FALSE(DensityMatrix(2, 1, {0.5, 0.3, 0.1, 0.5}).is_valid());           // not Hermitian
  EXPECT_FALSE(DensityMatrix(2, 1, {1.5, 0.0, 0.0, -0.5}).is_valid());          // negative eigenvalue
  EXPECT_TRUE(DensityMatrix(2, 1, {0.5, 0.5, 0.5, 0.5}).is_valid());
  EXPECT_THROW(DensityMatrix(2, 2, std::vector<Complex>(3)), Error);
}
