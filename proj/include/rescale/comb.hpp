#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "rescale/error.hpp"

namespace rescale {

/// An ordered sum of strictly positive parts. (1,5) and (5,1) are distinct.
using Composition = std::vector<unsigned>;

inline constexpr unsigned kMaxCompositionTotal = 64;
inline constexpr unsigned kMaxBinomialN = 64;
inline constexpr unsigned kMaxFibonacciIndex = 90;

namespace detail {

// C(n, k) without the n guard. Each step keeps the running value integral by
// dividing out the gcd before multiplying, so nothing overflows while the result
// itself fits in 64 bits.
inline std::uint64_t binomial_unguarded(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    std::uint64_t num = n - k + i;
    std::uint64_t den = i;
    const std::uint64_t g = std::gcd(result, den);
    result /= g;
    den /= g;
    result *= num / den;
  }
  return result;
}

inline void compose_into(unsigned remaining, unsigned parts_left, Composition& prefix,
                         std::vector<Composition>& out) {
  if (parts_left == 1) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (unsigned first = 1; first + (parts_left - 1) <= remaining; ++first) {
    prefix.push_back(first);
    compose_into(remaining - first, parts_left - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

/// Exact C(n, k) for n <= 64; zero when k > n.
inline std::uint64_t binomial(unsigned n, unsigned k) {
  if (n > kMaxBinomialN) {
    throw Error(ErrorKind::Overflow, "binomial guard: n=" + std::to_string(n) + " > 64");
  }
  return detail::binomial_unguarded(n, k);
}

/// All compositions of `total` into `parts` positive parts, lexicographically
/// ordered. There are C(total-1, parts-1) of them.
inline std::vector<Composition> compositions(unsigned total, unsigned parts) {
  if (parts < 1 || parts > total || total > kMaxCompositionTotal) {
    throw Error(ErrorKind::OutOfRange, "compositions(" + std::to_string(total) + ", " +
                                           std::to_string(parts) + ") outside 1 <= ell <= j <= 64");
  }
  std::vector<Composition> out;
  if (const auto count = binomial(total - 1, parts - 1); count <= (1u << 20)) {
    out.reserve(count);
  }
  Composition prefix;
  prefix.reserve(parts);
  detail::compose_into(total, parts, prefix, out);
  return out;
}

/// Integer coefficients of the Fibonacci polynomial F_n by ascending power of xi:
/// F_n(xi) = sum_{j=0}^{floor((n-1)/2)} C(n-j-1, j) xi^{n-2j-1}.
inline std::vector<std::int64_t> fibonacci_poly_coeffs(unsigned n) {
  if (n > kMaxFibonacciIndex) {
    throw Error(ErrorKind::OutOfRange, "Fibonacci polynomial index " + std::to_string(n) + " > 90");
  }
  if (n == 0) return {0};
  std::vector<std::int64_t> coeffs(n, 0);
  for (unsigned j = 0; 2 * j <= n - 1; ++j) {
    coeffs[n - 2 * j - 1] = static_cast<std::int64_t>(detail::binomial_unguarded(n - j - 1, j));
  }
  return coeffs;
}

/// F_n(xi), evaluated from the explicit binomial sum.
inline double fibonacci_poly(unsigned n, double xi) {
  const auto coeffs = fibonacci_poly_coeffs(n);
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * xi + static_cast<double>(*it);
  }
  return acc;
}

}  // namespace rescale
