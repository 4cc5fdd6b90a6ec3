#pragma once

// Single-variable scalable measures: E(rho^{(x)N}) = E^(N)(e) with e = E(rho).
// Consistency under regrouping, ratio-chain composition and the Maclaurin
// coefficient recursion.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rescale/comb.hpp"
#include "rescale/error.hpp"
#include "rescale/types.hpp"

namespace rescale {

/// A candidate single-variable measure E^(N)(e) together with the lattice and
/// e-interval [0, e_max) on which it is declared.
struct Measure1SFn {
  std::function<double(CopyCount, double)> eval;
  CopyLattice lattice;
  double e_max = std::numeric_limits<double>::infinity();

  double operator()(CopyCount n, double e) const { return eval(n, e); }
  bool in_domain(double e) const noexcept { return e >= 0.0 && e < e_max; }
};

namespace measures {

inline Measure1SFn additive(CopyLattice lattice = {1, 2}) {
  return {[](CopyCount n, double e) { return static_cast<double>(n) * e; }, lattice};
}

/// lambda^{1-N} e^N; closed under regrouping. Maps [0, lambda) into itself.
inline Measure1SFn multiplicative(double lambda, CopyLattice lattice = {1, 2}) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidValue, "lambda must be positive");
  return {[lambda](CopyCount n, double e) {
            const auto nn = static_cast<double>(n);
            return std::pow(lambda, 1.0 - nn) * std::pow(e, nn);
          },
          lattice, lambda};
}

/// N(N+1)/2 * e. Satisfies E^(1)(e) = e but not the regrouping constraint.
inline Measure1SFn triangular(CopyLattice lattice = {1, 2}) {
  return {[](CopyCount n, double e) {
            const auto nn = static_cast<double>(n);
            return nn * (nn + 1.0) / 2.0 * e;
          },
          lattice};
}

}  // namespace measures

struct ScalabilityPoint {
  CopyCount n = 0;
  CopyCount k = 0;
  double e = 0.0;
};

struct ScalabilityReport {
  double max_violation = 0.0;           // max |E^(N)(e) - E^(N/K)(E^(K)(e))|
  double max_relative_violation = 0.0;  // same, divided by max(|lhs|, |rhs|)
  bool pass = true;
  ScalabilityPoint worst_point;
  std::vector<double> skipped;  // grid points whose inner value left the e-domain
};

inline constexpr double kDefaultScalabilityRelTol = 1e-9;
inline constexpr double kScalabilityAbsFloor = 1e-12;

/// 33 log-spaced points in [1e-6, e_max*(1-1e-9)]; the upper end is 1 when the
/// domain is unbounded.
inline std::vector<double> default_e_grid(double e_max, std::size_t count = 33) {
  const double lo = 1e-6;
  const double hi = std::isfinite(e_max) ? e_max * (1.0 - 1e-9) : 1.0;
  if (!(hi > lo)) throw Error(ErrorKind::DomainError, "e-domain too small for default grid");
  std::vector<double> grid(count);
  const double step = count > 1 ? std::log(hi / lo) / static_cast<double>(count - 1) : 0.0;
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

/// Checks E^(N)(e) == E^(N/K)(E^(K)(e)) on a grid of e values. An empty grid
/// means default_e_grid(f.e_max).
inline ScalabilityReport check_1s(const Measure1SFn& f, CopyCount n, CopyCount k,
                                  std::vector<double> e_grid = {},
                                  double rel_tol = kDefaultScalabilityRelTol) {
  if (e_grid.empty()) e_grid = default_e_grid(f.e_max);
  const auto& lat = f.lattice;
  if (!lat.contains(n) || !lat.contains(k)) {
    throw Error(ErrorKind::DomainError, "N=" + std::to_string(n) + " and K=" + std::to_string(k) +
                                            " must both lie on the lattice");
  }
  if (k == 0 || k >= n || n % k != 0) {
    throw Error(ErrorKind::DomainError,
                "K=" + std::to_string(k) + " must be a proper divisor of N=" + std::to_string(n));
  }
  const CopyCount outer = n / k;

  ScalabilityReport report;
  report.worst_point = {n, k, e_grid.empty() ? 0.0 : e_grid.front()};
  for (double e : e_grid) {
    if (!f.in_domain(e)) {
      throw Error(ErrorKind::DomainError, "grid point e=" + std::to_string(e) +
                                              " lies outside the declared e-domain");
    }
    const double inner = f(k, e);
    if (!f.in_domain(inner)) {
      report.skipped.push_back(e);
      continue;
    }
    const double lhs = f(n, e);
    const double rhs = f(outer, inner);
    const double diff = std::abs(lhs - rhs);
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    const double rel = scale > 0.0 ? diff / scale : 0.0;
    if (diff > std::max(rel_tol * scale, kScalabilityAbsFloor)) report.pass = false;
    if (diff > report.max_violation) {
      report.max_violation = diff;
      report.worst_point = {n, k, e};
    }
    report.max_relative_violation = std::max(report.max_relative_violation, rel);
  }
  return report;
}


/// n-fold composition of the ratio map E^(a): E^(a^n)(e) for a 1-S measure.
/// Intermediate values must stay inside [0, e_max).
inline double compose_chain_1s(const std::function<double(double)>& step, unsigned n, double e,
                               double e_max = std::numeric_limits<double>::infinity()) {
  if (!(e >= 0.0)) throw Error(ErrorKind::DomainEscape, "seed e must be non-negative");
  double v = e;
  for (unsigned stage = 1; stage <= n; ++stage) {
    v = step(v);
    if (!std::isfinite(v) || v < 0.0 || (stage < n && !(v < e_max))) {
      throw Error(ErrorKind::DomainEscape,
                  "value " + std::to_string(v) + " left the e-domain at stage " + std::to_string(stage));
    }
  }
  return v;
}

inline constexpr unsigned kMaxMaclaurinOrder = 16;

/// Truncated Maclaurin coefficients d_1(N), ..., d_J(N) of E^(N)(e).
/// coeffs[0] holds d_1.
struct SeriesPoly1S {
  CopyCount n = 1;
  std::vector<double> coeffs;
  std::optional<double> radius;  // nominal convergence radius, informational

  unsigned order() const noexcept { return static_cast<unsigned>(coeffs.size()); }
  double d(unsigned j) const noexcept { return j >= 1 && j <= coeffs.size() ? coeffs[j - 1] : 0.0; }

  double operator()(double e) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc + *it) * e;
    return acc;
  }

  /// E^(1)(e) = e truncated at order J.
  static SeriesPoly1S identity(unsigned order) {
    SeriesPoly1S s;
    s.n = 1;
    s.coeffs.assign(order, 0.0);
    if (order > 0) s.coeffs[0] = 1.0;
    return s;
  }
};

/// One application of the coefficient recursion
///   d_j(N) = sum_{l=1}^{j} d_l(N/K) sum_{compositions mu of j into l} d_mu1(K)...d_mul(K)
/// with `outer` = d(N/K) and `inner` = d(K).
inline SeriesPoly1S compose_coeffs(const SeriesPoly1S& outer, const SeriesPoly1S& inner,
                                   unsigned order) {
  if (order > kMaxMaclaurinOrder) {
    throw Error(ErrorKind::TruncationError,
                "truncation order " + std::to_string(order) + " exceeds 16");
  }
  SeriesPoly1S out;
  out.n = outer.n * inner.n;
  out.coeffs.assign(order, 0.0);
  for (unsigned j = 1; j <= order; ++j) {
    double dj = 0.0;
    for (unsigned l = 1; l <= j; ++l) {
      const double dl = outer.d(l);
      if (dl == 0.0) continue;
      double pi_sum = 0.0;
      for (const auto& mu : compositions(j, l)) {
        double prod = 1.0;
        for (unsigned part : mu) prod *= inner.d(part);
        pi_sum += prod;
      }
      dj += dl * pi_sum;
    }
    out.coeffs[j - 1] = dj;
  }
  return out;
}

/// Coefficients at N = a^n_target from those of E^(a), iterating the recursion
/// with K = a starting from d_j(1) = delta_{1j}.
inline SeriesPoly1S thm2_coeffs(const SeriesPoly1S& base, unsigned n_target, unsigned order) {
  if (order > kMaxMaclaurinOrder) {
    throw Error(ErrorKind::TruncationError,
                "truncation order " + std::to_string(order) + " exceeds 16");
  }
  SeriesPoly1S acc = SeriesPoly1S::identity(order);
  for (unsigned step = 0; step < n_target; ++step) acc = compose_coeffs(acc, base, order);
  return acc;
}

/// nu = log_a d_1(a), so that d_1(N) = N^nu.
inline double first_order_exponent(double d1_a, CopyCount a) {
  if (!(d1_a > 0.0)) {
    throw Error(ErrorKind::NonPositiveLeadingCoeff, "d_1(a) must be positive");
  }
  if (a < 2) throw Error(ErrorKind::InvalidValue, "ratio a must be >= 2");
  return std::log(d1_a) / std::log(static_cast<double>(a));
}

struct SecondOrderCoeffs {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Closed form for the first two coefficients at N = a^n:
///   d_1(N) = N^nu,  d_2(N) = (N^nu - 1)/(a^nu - 1) * (N/a)^nu * d_2(a).
inline SecondOrderCoeffs second_order_closed_form(double d1_a, double d2_a, CopyCount a,
                                                  CopyCount n) {
  const double nu = first_order_exponent(d1_a, a);
  if (d1_a == 1.0) {
    throw Error(ErrorKind::DegenerateDenominator, "d_1(a) = 1 makes a^nu - 1 vanish");
  }
  lattice_index(CopyLattice{1, a}, n);  // throws NotOnLattice
  const auto nn = static_cast<double>(n);
  const auto aa = static_cast<double>(a);
  const double n_nu = std::pow(nn, nu);
  const double d2 = (n_nu - 1.0) / (std::pow(aa, nu) - 1.0) * std::pow(nn / aa, nu) * d2_a;
  return {n_nu, d2};
}

}  // namespace rescale
