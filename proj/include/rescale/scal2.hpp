#pragma once

// Two-variable scalable measures at first order: E(rho^{(x)b*2^n}) = X_n e + Y_n f
// with e = E(rho^{(x)b}), f = E(rho^{(x)2b}) and E(rho^{(x)4b}) = x e + y f.
// Includes the exactly determined four-knot fit and its uncertainty propagation.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rescale/comb.hpp"
#include "rescale/error.hpp"
#include "rescale/types.hpp"

namespace rescale {

struct XYCoeffs {
  double x_coef = 0.0;  // multiplies e
  double y_coef = 0.0;  // multiplies f
};

/// First-order coefficients at step n (N = b*2^n):
///   X_0 = 1, Y_0 = 0;  X_1 = 0, Y_1 = 1;  X_n = x Y_{n-1},  Y_n = y Y_{n-1} + X_{n-1}.
/// Pure integer-step recurrence; valid for any sign of x.
inline XYCoeffs xy_recurrence(double x, double y, unsigned n) {
  if (n == 0) return {1.0, 0.0};
  XYCoeffs cur{0.0, 1.0};
  for (unsigned step = 2; step <= n; ++step) {
    cur = {x * cur.y_coef, y * cur.y_coef + cur.x_coef};
  }
  return cur;
}

struct FibFormReport {
  bool match = false;
  double max_rel_err = 0.0;
};

inline constexpr double kFibFormTol = 1e-10;

/// Cross-checks the recurrence against the closed form (x > 0 only):
///   X_n = sqrt(x^{n-1}) sqrt(x) F_{n-1}(xi),  Y_n = sqrt(x^{n-1}) F_n(xi),  xi = y / sqrt(x).
inline FibFormReport fib_form_check(double x, double y, unsigned n) {
  if (!(x > 0.0)) {
    throw Error(ErrorKind::NonPositiveX, "Fibonacci form needs x > 0; use xy_recurrence");
  }
  if (n == 0) throw Error(ErrorKind::OutOfRange, "fib_form_check needs n >= 1");
  const double sx = std::sqrt(x);
  const double xi = y / sx;
  const double scale = std::pow(x, 0.5 * static_cast<double>(n - 1));
  const double fib_x = scale * sx * fibonacci_poly(n - 1, xi);
  const double fib_y = scale * fibonacci_poly(n, xi);
  const auto rec = xy_recurrence(x, y, n);

  auto rel = [](double a, double b) {
    const double d = std::abs(a - b);
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0.0 ? d / s : 0.0;
  };
  FibFormReport r;
  r.max_rel_err = std::max(rel(fib_x, rec.x_coef), rel(fib_y, rec.y_coef));
  r.match = r.max_rel_err <= kFibFormTol;
  return r;
}

/// Central finite-difference step per input: h = max(abs_step, rel_step*|v|).
struct FiniteDiffOptions {
  double rel_step = 1e-6;
  double abs_step = 1e-6;

  double step_for(double v) const noexcept { return std::max(abs_step, rel_step * std::abs(v)); }
};

namespace detail {

/// sigma_k = sqrt(sum_i (d out_k / d in_i * sigma_i)^2) for independent inputs.
template <std::size_t In, class Fn>
std::vector<double> propagate(const Fn& fn, const std::array<double, In>& in,
                              const std::array<double, In>& sigma, const FiniteDiffOptions& opts) {
  const std::vector<double> center = fn(in);
  std::vector<double> var(center.size(), 0.0);
  for (std::size_t i = 0; i < In; ++i) {
    if (sigma[i] == 0.0) continue;
    const double h = opts.step_for(in[i]);
    auto plus = in;
    auto minus = in;
    plus[i] += h;
    minus[i] -= h;
    const auto fp = fn(plus);
    const auto fm = fn(minus);
    for (std::size_t k = 0; k < center.size(); ++k) {
      const double deriv = (fp[k] - fm[k]) / (2.0 * h);
      var[k] += deriv * deriv * sigma[i] * sigma[i];
    }
  }
  for (auto& v : var) v = std::sqrt(v);
  return var;
}

struct XY {
  double x;
  double y;
};

inline double fit_denominator(double e, double f, double e4) { return e * e4 - f * f; }

/// x = (E4 - f y)/e, y = (e E8 - f E4)/(e E4 - f^2).
inline XY solve_xy(const std::array<double, 4>& knots) {
  const auto [e, f, e4, e8] = knots;
  const double y = (e * e8 - f * e4) / fit_denominator(e, f, e4);
  const double x = (e4 - f * y) / e;
  return {x, y};
}

inline double predict_total(const std::array<double, 4>& knots, unsigned step) {
  const auto [x, y] = solve_xy(knots);
  const auto c = xy_recurrence(x, y, step);
  return c.x_coef * knots[0] + c.y_coef * knots[1];
}

}  // namespace detail

struct FitResidual {
  CopyCount n = 0;
  double residual = 0.0;  // measured total minus model total
};

/// The fitted first-order model. Keeps the four raw knots because the fitted
/// x, y are correlated through them and every downstream sigma is propagated
/// from the knots.
struct TwoSModel {
  CopyLattice lattice{1, 2};
  UncertainValue e;   // E(b)
  UncertainValue f;   // E(2b)
  UncertainValue e4;  // E(4b)
  UncertainValue e8;  // E(8b)
  UncertainValue x;
  UncertainValue y;
  std::vector<FitResidual> residuals;  // knots beyond the first four

  std::array<double, 4> knot_values() const { return {e.value(), f.value(), e4.value(), e8.value()}; }
  std::array<double, 4> knot_sigmas() const { return {e.sigma(), f.sigma(), e4.sigma(), e8.sigma()}; }
};

/// Exactly determined fit of (x, y) from E(b), E(2b), E(4b), E(8b).
inline TwoSModel fit_2s(const ResourceSeries& series, const FiniteDiffOptions& opts = {}) {
  const auto& lat = series.lattice();
  if (lat.ratio() != 2) {
    throw Error(ErrorKind::DomainError, "two-variable fit needs a lattice with ratio 2");
  }
  const CopyCount b = lat.base();
  TwoSModel m;
  m.lattice = lat;
  m.e = series.at(b);
  m.f = series.at(2 * b);
  m.e4 = series.at(4 * b);
  m.e8 = series.at(8 * b);

  const auto knots = m.knot_values();
  const double e = knots[0], f = knots[1], e4 = knots[2];
  const double den = detail::fit_denominator(e, f, e4);
  const double den_scale = std::max(std::abs(e * e4), f * f);
  if (!(std::abs(den) > 1e-12 * den_scale) || e == 0.0) {
    const double ratio = den_scale > 0.0 ? std::abs(den) / den_scale : 0.0;
    throw Error(ErrorKind::SingularFit,
                "|e*E(4b) - f^2| / max(|e*E(4b)|, f^2) = " + std::to_string(ratio) +
                    (e == 0.0 ? " and e = 0" : "") + "; the four knots do not determine (x, y)");
  }

  const auto xy_fn = [](const std::array<double, 4>& k) {
    const auto s = detail::solve_xy(k);
    return std::vector<double>{s.x, s.y};
  };
  const auto center = detail::solve_xy(knots);
  const auto sig = detail::propagate(xy_fn, knots, m.knot_sigmas(), opts);
  m.x = UncertainValue(center.x, sig[0]);
  m.y = UncertainValue(center.y, sig[1]);

  for (const auto& [n, v] : series.points()) {
    if (n <= 8 * b) continue;
    const auto c = xy_recurrence(center.x, center.y, lattice_index(lat, n));
    m.residuals.push_back({n, v.value() - (c.x_coef * e + c.y_coef * f)});
  }
  return m;
}

struct Prediction {
  CopyCount n = 0;
  UncertainValue total;
  UncertainValue per_copy;
  /// Sigma obtained when x, y, e, f are (incorrectly) treated as independent.
  /// Diagnostic only; larger than `total.sigma()` for correlated fits.
  double sigma_independent_xy = 0.0;
  bool negative = false;  // first-order truncation went below zero
};

/// E(N) = X_n e + Y_n f at N = b*2^n. Sigma comes from the four raw knots.
inline Prediction extrapolate_2s(const TwoSModel& model, CopyCount n,
                                 const FiniteDiffOptions& opts = {}) {
  const unsigned step = lattice_index(model.lattice, n);
  const auto knots = model.knot_values();
  const auto fn = [step](const std::array<double, 4>& k) {
    return std::vector<double>{detail::predict_total(k, step)};
  };
  const double central = detail::predict_total(knots, step);
  const double sigma = detail::propagate(fn, knots, model.knot_sigmas(), opts)[0];

  const std::array<double, 4> params{model.x.value(), model.y.value(), model.e.value(),
                                     model.f.value()};
  const std::array<double, 4> param_sigmas{model.x.sigma(), model.y.sigma(), model.e.sigma(),
                                           model.f.sigma()};
  const auto naive_fn = [step](const std::array<double, 4>& p) {
    const auto c = xy_recurrence(p[0], p[1], step);
    return std::vector<double>{c.x_coef * p[2] + c.y_coef * p[3]};
  };
  const double naive = detail::propagate(naive_fn, params, param_sigmas, opts)[0];

  Prediction p;
  p.n = n;
  p.total = UncertainValue(central, sigma);
  const auto nn = static_cast<double>(n);
  p.per_copy = UncertainValue(central / nn, sigma / nn);
  p.sigma_independent_xy = naive;
  p.negative = central < 0.0;
  return p;
}

struct SuperactivationReport {
  bool additive_at_2 = false;
  bool additive_at_4 = false;
  double gap = 0.0;  // (x + 2y - 4) e
};

inline constexpr double kSuperactivationTol = 1e-9;

/// Additivity can hold at two copies (f = 2e) and still fail at four copies,
/// where E(4) = (x + 2y) e.
inline SuperactivationReport superactivation_check(double e, double f, double x, double y,
                                                   double tol = kSuperactivationTol) {
  SuperactivationReport r;
  const double scale = std::abs(e);
  r.additive_at_2 = std::abs(f - 2.0 * e) <= tol * scale;
  r.additive_at_4 = std::abs((x + 2.0 * y) * e - 4.0 * e) <= tol * scale;
  r.gap = (x + 2.0 * y - 4.0) * e;
  return r;
}

inline SuperactivationReport superactivation_check(const TwoSModel& m,
                                                   double tol = kSuperactivationTol) {
  return superactivation_check(m.e.value(), m.f.value(), m.x.value(), m.y.value(), tol);
}

/// The q maps E^(i_1 a), ..., E^(i_q a) that determine a q-scalable measure on
/// the whole lattice.
struct QSComposer {
  using Component = std::function<double(std::span<const double>)>;

  std::vector<CopyCount> indices;
  std::vector<Component> components;
  CopyCount ratio = 2;

  void validate() const {
    if (indices.empty()) throw Error(ErrorKind::InvalidValue, "composer needs q >= 1");
    if (components.size() != indices.size()) {
      throw Error(ErrorKind::InvalidValue, "one component map per index required");
    }
    if (!std::is_sorted(indices.begin(), indices.end(), std::less_equal<>{}) ||
        std::adjacent_find(indices.begin(), indices.end()) != indices.end() || indices[0] == 0) {
      throw Error(ErrorKind::InvalidValue, "indices must be positive and strictly increasing");
    }
    if (ratio < 2) throw Error(ErrorKind::InvalidValue, "ratio must be >= 2");
  }
};

/// Composer for the first-order two-variable model: (e, f) -> (f, x e + y f).
inline QSComposer linear_2s_composer(double x, double y) {
  QSComposer c;
  c.indices = {1, 2};
  c.components = {[](std::span<const double> v) { return v[1]; },
                  [x, y](std::span<const double> v) { return x * v[0] + y * v[1]; }};
  c.ratio = 2;
  return c;
}

/// Applies the vector map n times. Component j of the result is E^(i_j a^n)(seed).
inline std::vector<double> compose_qs(const QSComposer& composer, std::span<const double> seed,
                                      unsigned n) {
  composer.validate();
  if (seed.size() != composer.indices.size()) {
    throw Error(ErrorKind::InvalidValue, "seed length must equal q");
  }
  if (n == 0) throw Error(ErrorKind::OutOfRange, "compose_qs needs n >= 1");
  std::vector<double> cur(seed.begin(), seed.end());
  std::vector<double> next(cur.size());
  for (unsigned stage = 1; stage <= n; ++stage) {
    for (std::size_t j = 0; j < cur.size(); ++j) {
      next[j] = composer.components[j](cur);
      if (!std::isfinite(next[j]) || next[j] < 0.0) {
        throw Error(ErrorKind::DomainEscape, "component " + std::to_string(j) + " = " +
                                                 std::to_string(next[j]) + " at stage " +
                                                 std::to_string(stage));
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

}  // namespace rescale
