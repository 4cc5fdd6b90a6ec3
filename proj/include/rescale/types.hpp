#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "rescale/error.hpp"

namespace rescale {

using CopyCount = std::uint64_t;

/// A measured real with its one-sigma uncertainty. Arithmetic is deliberately
/// not overloaded: propagation only happens inside the fit/extrapolate code.
class UncertainValue {
 public:
  constexpr UncertainValue() = default;

  UncertainValue(double value, double sigma) : value_(value), sigma_(sigma) {
    if (!std::isfinite(value) || !std::isfinite(sigma)) {
      throw Error(ErrorKind::InvalidValue, "uncertain value must be finite");
    }
    if (sigma < 0.0) {
      throw Error(ErrorKind::InvalidValue, "sigma must be non-negative");
    }
  }

  constexpr double value() const noexcept { return value_; }
  constexpr double sigma() const noexcept { return sigma_; }

  friend bool operator==(const UncertainValue&, const UncertainValue&) = default;

 private:
  double value_ = 0.0;
  double sigma_ = 0.0;
};

/// The copy counts {base, base*ratio, base*ratio^2, ...}.
class CopyLattice {
 public:
  CopyLattice(CopyCount base, CopyCount ratio) : base_(base), ratio_(ratio) {
    if (base == 0) throw Error(ErrorKind::InvalidValue, "lattice base must be positive");
    if (ratio < 2) throw Error(ErrorKind::InvalidValue, "lattice ratio must be >= 2");
  }

  CopyCount base() const noexcept { return base_; }
  CopyCount ratio() const noexcept { return ratio_; }

  bool contains(CopyCount n) const noexcept {
    if (n == 0 || n % base_ != 0) return false;
    CopyCount q = n / base_;
    while (q % ratio_ == 0) q /= ratio_;
    return q == 1;
  }

  /// base * ratio^n; throws Overflow when the value does not fit in 64 bits.
  CopyCount at(unsigned n) const {
    CopyCount v = base_;
    for (unsigned i = 0; i < n; ++i) {
      if (v > std::numeric_limits<CopyCount>::max() / ratio_) {
        throw Error(ErrorKind::Overflow, "lattice point exceeds 64-bit range");
      }
      v *= ratio_;
    }
    return v;
  }

  friend bool operator==(const CopyLattice&, const CopyLattice&) = default;

 private:
  CopyCount base_;
  CopyCount ratio_;
};

/// Inverts N = base * ratio^n.
inline unsigned lattice_index(const CopyLattice& lattice, CopyCount n) {
  if (!lattice.contains(n)) {
    throw Error(ErrorKind::NotOnLattice,
                std::to_string(n) + " is not of the form " + std::to_string(lattice.base()) +
                    "*" + std::to_string(lattice.ratio()) + "^n");
  }
  unsigned idx = 0;
  for (CopyCount q = n / lattice.base(); q > 1; q /= lattice.ratio()) ++idx;
  return idx;
}

/// Total resource values E(rho^{(x)N}) on a copy lattice. Values are totals, not
/// per-copy figures.
class ResourceSeries {
 public:
  using Points = std::map<CopyCount, UncertainValue>;

  ResourceSeries(CopyLattice lattice, Points points)
      : lattice_(lattice), points_(std::move(points)) {
    for (const auto& [n, v] : points_) {
      if (!lattice_.contains(n)) {
        throw Error(ErrorKind::NotOnLattice, "series point N=" + std::to_string(n) +
                                                 " is not on the declared lattice");
      }
      if (v.value() < 0.0) {
        throw Error(ErrorKind::InvalidValue,
                    "resource value at N=" + std::to_string(n) + " is negative");
      }
    }
  }

  const CopyLattice& lattice() const noexcept { return lattice_; }
  const Points& points() const noexcept { return points_; }
  bool has(CopyCount n) const { return points_.count(n) != 0; }

  const UncertainValue& at(CopyCount n) const {
    auto it = points_.find(n);
    if (it == points_.end()) {
      throw Error(ErrorKind::MissingPoint, "series has no point at N=" + std::to_string(n));
    }
    return it->second;
  }

 private:
  CopyLattice lattice_;
  Points points_;
};

inline UncertainValue total_from_per_copy(const UncertainValue& per_copy, CopyCount n) {
  const auto scale = static_cast<double>(n);
  return {per_copy.value() * scale, per_copy.sigma() * scale};
}

inline UncertainValue per_copy(const ResourceSeries& series, CopyCount n) {
  const auto& total = series.at(n);
  const auto scale = static_cast<double>(n);
  return {total.value() / scale, total.sigma() / scale};
}

}  // namespace rescale
