#pragma once

// Cyclic Jacobi eigenvalue iteration for complex Hermitian matrices.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rescale/error.hpp"

namespace rescale {

using Complex = std::complex<double>;

struct JacobiOptions {
  unsigned max_sweeps = 100;
  double off_diagonal_tol = 1e-12;  // relative to max(1, ||A||_F)
};

/// Eigenvalues (unsorted) of the n x n Hermitian matrix stored row-major in `a`.
/// Only the upper triangle's information is trusted; the lower one is mirrored.
inline std::vector<double> hermitian_eigenvalues(std::span<const Complex> a, std::size_t n,
                                                 const JacobiOptions& opts = {}) {
  if (a.size() != n * n) throw Error(ErrorKind::InvalidValue, "matrix size mismatch");
  std::vector<Complex> m(a.begin(), a.end());
  auto at = [&](std::size_t r, std::size_t c) -> Complex& { return m[r * n + c]; };

  double frob = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    at(i, i) = Complex(at(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) at(j, i) = std::conj(at(i, j));
  }
  for (const auto& z : m) frob += std::norm(z);
  const double target = opts.off_diagonal_tol * std::max(1.0, std::sqrt(frob));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(at(i, j));
    return std::sqrt(s);
  };

  for (unsigned sweep = 0;; ++sweep) {
    if (off_norm() <= target) break;
    if (sweep >= opts.max_sweeps) {
      throw Error(ErrorKind::EigensolverFailure,
                  "Jacobi did not converge in " + std::to_string(opts.max_sweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = at(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        // Phase rotation on index q makes a_pq real and positive.
        const Complex w = apq / g;
        const Complex wc = std::conj(w);
        for (std::size_t k = 0; k < n; ++k) {
          at(k, q) *= wc;
          at(q, k) *= w;
        }
        const double app = at(p, p).real();
        const double aqq = at(q, q).real();
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = at(k, p);
          const Complex akq = at(k, q);
          const Complex nkp = c * akp - s * akq;
          const Complex nkq = s * akp + c * akq;
          at(k, p) = nkp;
          at(k, q) = nkq;
          at(p, k) = std::conj(nkp);
          at(q, k) = std::conj(nkq);
        }
        at(p, p) = app - t * g;
        at(q, q) = aqq + t * g;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
      }
    }
  }

  std::vector<double> evals(n);
  for (std::size_t i = 0; i < n; ++i) evals[i] = at(i, i).real();
  return evals;
}

}  // namespace rescale
