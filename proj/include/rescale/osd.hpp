#pragma once

// One-shot distillable entanglement of Bell-diagonal states in the large-N
// regime, and the two-reference-point form of any F*N + G*sqrt(N) measure.
// All logarithms are base 2 (ebits). The O(log N) term is dropped, so these
// formulas are only meaningful for large copy numbers.

#include <cmath>
#include <numbers>
#include <string>

#include "rescale/error.hpp"
#include "rescale/types.hpp"

namespace rescale {

struct BellDiagonalParams {
  double p = 0.5;        // weight of |Psi+><Psi+|
  double epsilon = 0.5;  // error tolerance

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::OutOfRange, "p must lie in [0, 1]");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
      throw Error(ErrorKind::OutOfRange, "epsilon must lie in (0, 1)");
    }
  }
};

/// h(p) in bits with 0 log 0 = 0.
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::OutOfRange, "p must lie in [0, 1]");
  auto term = [](double q) { return q > 0.0 ? -q * std::log2(q) : 0.0; };
  return term(p) + term(1.0 - p);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Phi^{-1}(q): Acklam's rational approximation followed by Newton steps on
/// erfc-based Phi. Absolute error well below 1e-9 on (0, 1).
inline double inv_normal_cdf(double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::OutOfRange, "q must lie in (0, 1)");

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double z;
  if (q < p_low) {
    const double r = std::sqrt(-2.0 * std::log(q));
    z = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else if (q <= 1.0 - p_low) {
    const double s = q - 0.5;
    const double r = s * s;
    z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * s /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double r = std::sqrt(-2.0 * std::log1p(-q));
    z = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }

  const double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  for (int iter = 0; iter < 3; ++iter) {
    // Work in the tail the value lives in to avoid cancellation in Phi(z) - q.
    const double err = z < 0.0 ? normal_cdf(z) - q : (1.0 - q) - normal_cdf(-z);
    const double pdf = inv_sqrt_2pi * std::exp(-0.5 * z * z);
    if (pdf == 0.0) break;
    z -= err / pdf;
  }
  return z;
}

/// N(1 - h(p)) + sqrt(N p (1-p)) |log2((1-p)/p)| Phi^{-1}(epsilon), without the
/// O(log N) correction.
inline double osd_bell(const BellDiagonalParams& params, CopyCount n) {
  params.validate();
  if (n == 0) throw Error(ErrorKind::OutOfRange, "N must be positive");
  const auto nn = static_cast<double>(n);
  const double p = params.p;
  const double leading = nn * (1.0 - binary_entropy(p));
  if (p == 0.0 || p == 1.0) return leading;
  const double fluct =
      std::sqrt(nn * p * (1.0 - p)) * std::abs(std::log2((1.0 - p) / p)) * inv_normal_cdf(params.epsilon);
  return leading + fluct;
}

/// E(rho^{(x)N}) = F*N + G*sqrt(N).
struct SqrtNMeasure {
  double f_coef = 0.0;
  double g_coef = 0.0;

  double operator()(double n) const { return f_coef * n + g_coef * std::sqrt(n); }

  /// Recovers (F, G) from the values e, f at reference copies L < M.
  static SqrtNMeasure from_references(double l, double m, double e, double f) {
    const double sl = std::sqrt(l), sm = std::sqrt(m);
    return {(sl * f - sm * e) / (m * sl - l * sm), (l * f - m * e) / (l * sm - m * sl)};
  }
};

/// The measure written as a function of its values at two reference copy
/// numbers L < M:
///   E^(N)(e, f) = sqrt(N)/(sqrt(M) - sqrt(L)) * [ (sqrt(M) - sqrt(N))/sqrt(L) e
///                                               + (sqrt(N) - sqrt(L))/sqrt(M) f ].
class SqrtN2EForm {
 public:
  SqrtN2EForm(double l, double m) : l_(l), m_(m) {
    if (!(l > 0.0) || !(m > 0.0)) throw Error(ErrorKind::OutOfRange, "L and M must be positive");
    if (l == m) throw Error(ErrorKind::DegenerateReference, "L and M must differ");
    if (l > m) throw Error(ErrorKind::OutOfRange, "need L < M");
  }

  double l() const noexcept { return l_; }
  double m() const noexcept { return m_; }

  double operator()(double e, double f, double n) const {
    if (n == l_) return e;
    if (n == m_) return f;
    const double sl = std::sqrt(l_), sm = std::sqrt(m_), sn = std::sqrt(n);
    return sn / (sm - sl) * ((sm - sn) / sl * e + (sn - sl) / sm * f);
  }

  /// [(M - sqrt(MN)) e + (sqrt(LN) - L) f] / [sqrt(LM) (sqrt(M/N) - sqrt(L/N))].
  /// Kept as a cross-check; loses precision for large N.
  double ratio_form(double e, double f, double n) const {
    const double num = (m_ - std::sqrt(m_ * n)) * e + (std::sqrt(l_ * n) - l_) * f;
    const double den = std::sqrt(l_ * m_) * (std::sqrt(m_ / n) - std::sqrt(l_ / n));
    return num / den;
  }

 private:
  double l_;
  double m_;
};

inline SqrtN2EForm sqrtn_2e_form(double l, double m) { return {l, m}; }

struct Prop2Report {
  double violation = 0.0;  // relative
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Checks E^(N)(e, f) == E^(N/K)(E^(KL)(e, f), E^(KM)(e, f)) for the two-reference form.
inline Prop2Report verify_prop2(CopyCount l, CopyCount m, CopyCount n, CopyCount k, double e,
                                double f, double rel_tol = 1e-10) {
  if (l == 0 || m == 0 || n == 0 || k == 0) {
    throw Error(ErrorKind::DomainError, "L, M, N, K must be positive");
  }
  if (n % k != 0) {
    throw Error(ErrorKind::DomainError,
                "K=" + std::to_string(k) + " does not divide N=" + std::to_string(n));
  }
  const SqrtN2EForm form(static_cast<double>(l), static_cast<double>(m));
  const auto kd = static_cast<double>(k);
  Prop2Report r;
  r.lhs = form(e, f, static_cast<double>(n));
  const double inner_l = form(e, f, kd * static_cast<double>(l));
  const double inner_m = form(e, f, kd * static_cast<double>(m));
  r.rhs = form(inner_l, inner_m, static_cast<double>(n / k));
  const double diff = std::abs(r.lhs - r.rhs);
  const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.violation = scale > 1e-12 ? diff / scale : diff;
  r.pass = r.violation <= rel_tol;
  return r;
}

/// (M - sqrt(MN)) e + (sqrt(LN) - L) f >= 0: the two-reference form stays
/// non-negative at N.
inline bool osd_positivity(CopyCount l, CopyCount m, CopyCount n, double e, double f) {
  const auto ld = static_cast<double>(l), md = static_cast<double>(m), nd = static_cast<double>(n);
  return (md - std::sqrt(md * nd)) * e + (std::sqrt(ld * nd) - ld) * f >= 0.0;
}

}  // namespace rescale
