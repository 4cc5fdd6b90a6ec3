#pragma once

// Brute-force bipartite density matrices: tensor powers, partial transpose and
// logarithmic negativity. Used as ground truth for additivity at small N.
//
// Basis convention: a state on A (x) B with dims (dA, dB) is indexed by
// i = a*dB + b. Tensor powers regroup all A factors before all B factors, so
// rho^{(x)n} lives on (A1...An) (x) (B1...Bn) with the A multi-index as the
// more significant digit block. The partial transpose always acts on B.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "rescale/error.hpp"
#include "rescale/jacobi.hpp"

namespace rescale {

inline constexpr std::size_t kMaxOracleDimension = 4096;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = -1e-10;

class DensityMatrix {
 public:
  /// Unchecked construction; call validate() or use the named constructors.
  DensityMatrix(std::size_t dim_a, std::size_t dim_b, std::vector<Complex> entries)
      : dim_a_(dim_a), dim_b_(dim_b), entries_(std::move(entries)) {
    if (dim_a == 0 || dim_b == 0) throw Error(ErrorKind::InvalidValue, "dimensions must be positive");
    if (entries_.size() != dim() * dim()) {
      throw Error(ErrorKind::InvalidValue, "entry count does not match (dA*dB)^2");
    }
  }

  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  std::size_t dim() const noexcept { return dim_a_ * dim_b_; }
  const std::vector<Complex>& entries() const noexcept { return entries_; }

  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim() + c]; }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) t += (*this)(i, i);
    return t;
  }

  double hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t c = r; c < dim(); ++c)
        worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return worst;
  }

  std::vector<double> eigenvalues() const { return hermitian_eigenvalues(entries_, dim()); }

  double min_eigenvalue() const {
    const auto ev = eigenvalues();
    return *std::min_element(ev.begin(), ev.end());
  }

  /// Throws InvalidValue unless Hermitian, unit-trace and PSD within tolerance.
  void validate() const {
    if (hermiticity_defect() > kHermitianTol) throw Error(ErrorKind::InvalidValue, "not Hermitian");
    if (std::abs(trace() - Complex(1.0)) > kTraceTol) throw Error(ErrorKind::InvalidValue, "trace != 1");
    if (min_eigenvalue() < kPsdTol) throw Error(ErrorKind::InvalidValue, "not positive semidefinite");
  }

  bool is_valid() const {
    try {
      validate();
      return true;
    } catch (const Error&) {
      return false;
    }
  }

 private:
  std::size_t dim_a_;
  std::size_t dim_b_;
  std::vector<Complex> entries_;
};

/// p |Psi+><Psi+| + (1-p) |Psi-><Psi-|, |Psi+-> = (|01> +- |10>)/sqrt(2).
inline DensityMatrix bell_diagonal_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::OutOfRange, "p must lie in [0, 1]");
  std::vector<Complex> m(16, 0.0);
  // Basis |00>,|01>,|10>,|11>; only the |01>,|10> block is populated.
  m[1 * 4 + 1] = 0.5;
  m[2 * 4 + 2] = 0.5;
  m[1 * 4 + 2] = p - 0.5;
  m[2 * 4 + 1] = p - 0.5;
  return {2, 2, std::move(m)};
}

/// F rho_d + (1-F)/(d^2-1) (1 - rho_d) with rho_d the projector on
/// sum_i |ii>/sqrt(d).
inline DensityMatrix isotropic_state(std::size_t d, double fidelity) {
  if (d < 2) throw Error(ErrorKind::OutOfRange, "isotropic state needs d >= 2");
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw Error(ErrorKind::OutOfRange, "F must lie in [0, 1]");
  const std::size_t n = d * d;
  const double dd = static_cast<double>(d);
  const double noise = (1.0 - fidelity) / (dd * dd - 1.0);
  std::vector<Complex> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = noise;
  // (F - noise) * rho_d, rho_d = (1/d) sum_{ij} |ii><jj|
  const double w = (fidelity - noise) / dd;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m[(i * d + i) * n + (j * d + j)] += w;
  return {d, d, std::move(m)};
}

/// rho_A (x) rho_B as a bipartite state.
inline DensityMatrix product_state(const std::vector<Complex>& rho_a, std::size_t da,
                                   const std::vector<Complex>& rho_b, std::size_t db) {
  const std::size_t n = da * db;
  std::vector<Complex> m(n * n);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t a2 = 0; a2 < da; ++a2)
        for (std::size_t b2 = 0; b2 < db; ++b2)
          m[(a * db + b) * n + (a2 * db + b2)] = rho_a[a * da + a2] * rho_b[b * db + b2];
  return {da, db, std::move(m)};
}

/// n-fold tensor power, regrouped as (A1..An) | (B1..Bn).
inline DensityMatrix tensor_power(const DensityMatrix& rho, unsigned n) {
  if (n == 0) throw Error(ErrorKind::OutOfRange, "tensor power needs n >= 1");
  std::size_t da = 1, db = 1;
  for (unsigned i = 0; i < n; ++i) {
    da *= rho.dim_a();
    db *= rho.dim_b();
    if (da * db > kMaxOracleDimension) {
      throw Error(ErrorKind::DimensionGuard, "tensor power dimension exceeds 4096");
    }
  }
  if (n == 1) return rho;

  const std::size_t big = da * db;
  const std::size_t ra = rho.dim_a(), rb = rho.dim_b();
  // Per big index: the single-copy row index of each factor.
  std::vector<std::size_t> digits(big * n);
  for (std::size_t idx = 0; idx < big; ++idx) {
    std::size_t a_multi = idx / db;
    std::size_t b_multi = idx % db;
    for (unsigned k = n; k-- > 0;) {
      const std::size_t a = a_multi % ra;
      const std::size_t b = b_multi % rb;
      a_multi /= ra;
      b_multi /= rb;
      digits[idx * n + k] = a * rb + b;
    }
  }
  std::vector<Complex> m(big * big);
  for (std::size_t r = 0; r < big; ++r) {
    for (std::size_t c = 0; c < big; ++c) {
      Complex v = 1.0;
      for (unsigned k = 0; k < n && v != Complex(0.0); ++k) v *= rho(digits[r * n + k], digits[c * n + k]);
      m[r * big + c] = v;
    }
  }
  return {da, db, std::move(m)};
}

/// Transpose on subsystem B: <a b|rho|a' b'> -> <a b'|rho|a' b>.
inline DensityMatrix partial_transpose(const DensityMatrix& rho) {
  const std::size_t da = rho.dim_a(), db = rho.dim_b(), n = rho.dim();
  std::vector<Complex> m(n * n);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t a2 = 0; a2 < da; ++a2)
        for (std::size_t b2 = 0; b2 < db; ++b2)
          m[(a * db + b2) * n + (a2 * db + b)] = rho(a * db + b, a2 * db + b2);
  return {da, db, std::move(m)};
}

/// log2 || rho^{T_B} ||_1, clamped at zero.
inline double log_negativity(const DensityMatrix& rho) {
  const auto pt = partial_transpose(rho);
  double trace_norm = 0.0;
  for (double ev : pt.eigenvalues()) trace_norm += std::abs(ev);
  return std::max(0.0, std::log2(trace_norm));
}

struct AdditivityProbe {
  std::vector<std::pair<unsigned, double>> values;  // (n, LN(rho^{(x)n}))
  double max_deviation_from_linear = 0.0;
};

inline AdditivityProbe additivity_probe(const DensityMatrix& rho, unsigned n_max) {
  if (n_max == 0) throw Error(ErrorKind::OutOfRange, "n_max must be positive");
  AdditivityProbe probe;
  double single = 0.0;
  for (unsigned n = 1; n <= n_max; ++n) {
    const double ln = log_negativity(tensor_power(rho, n));
    if (n == 1) single = ln;
    probe.values.emplace_back(n, ln);
    probe.max_deviation_from_linear =
        std::max(probe.max_deviation_from_linear, std::abs(ln - static_cast<double>(n) * single));
  }
  return probe;
}

}  // namespace rescale
