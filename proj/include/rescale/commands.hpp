#pragma once

// CLI command bodies. Each returns the "outputs" object of a report and may
// append warnings; the envelope (command echo, digest, versions, optional
// timestamp) is assembled by make_report().

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "rescale/comb.hpp"
#include "rescale/error.hpp"
#include "rescale/oracle.hpp"
#include "rescale/osd.hpp"
#include "rescale/scal1.hpp"
#include "rescale/scal2.hpp"
#include "rescale/series_file.hpp"
#include "rescale/types.hpp"

namespace rescale::cli {

using json = nlohmann::json;

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::InvalidValue, "SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

inline json uncertain_json(const UncertainValue& v) {
  return {{"value", v.value()}, {"sigma", v.sigma()}};
}

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return 3;
    case ErrorKind::SingularFit: return 4;
    case ErrorKind::NotOnLattice: return 5;
    case ErrorKind::DimensionGuard: return 6;
    case ErrorKind::UnknownSelector: return 7;
    default: return 1;
  }
}

struct Context {
  std::string command;
  json arguments = json::object();
  std::string input_bytes;  // raw bytes of any input file, for the digest
  bool deterministic = false;
  std::vector<std::string> warnings;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Keys are emitted in sorted order, so identical inputs give identical bytes.
inline json make_report(const Context& ctx, const json& outputs,
                        const std::optional<Error>& error = std::nullopt) {
  json report;
  report["command"] = ctx.command;
  report["arguments"] = ctx.arguments;
  report["inputs_digest"] = "sha256:" + sha256_hex(ctx.command + "\n" + ctx.arguments.dump() +
                                                   "\n" + ctx.input_bytes);
  report["outputs"] = outputs;
  report["warnings"] = ctx.warnings;
  report["versions"] = {{"rescale", kVersion}, {"report_schema", kReportSchema}};
  if (!ctx.deterministic) report["timestamp"] = utc_timestamp();
  if (error) {
    report["error"] = {{"kind", std::string(to_string(error->kind()))},
                       {"message", error->what()},
                       {"exit_code", exit_code_for(error->kind())}};
  }
  return report;
}

// fit-extrapolate

inline json cmd_fit_extrapolate(Context& ctx, const SeriesFile& file,
                                const std::vector<CopyCount>& targets,
                                const FiniteDiffOptions& fd = {}) {
  const auto series = file.to_series();
  if (series.points().size() < 4) {
    throw Error(ErrorKind::SingularFit, "insufficient knots: need E(b), E(2b), E(4b), E(8b); got " +
                                            std::to_string(series.points().size()));
  }
  const auto model = fit_2s(series, fd);

  json out;
  out["units"] = file.units;
  out["lattice"] = {{"base", file.base}, {"ratio", file.ratio}};
  json knots = json::array();
  for (const auto& [n, v] : series.points()) {
    const auto pc = per_copy(series, n);
    knots.push_back({{"N", n}, {"total", uncertain_json(v)}, {"per_copy", uncertain_json(pc)}});
  }
  out["knots"] = knots;
  out["model"] = {{"x", uncertain_json(model.x)},
                  {"y", uncertain_json(model.y)},
                  {"e", uncertain_json(model.e)},
                  {"f", uncertain_json(model.f)}};
  json residuals = json::array();
  for (const auto& r : model.residuals) residuals.push_back({{"N", r.n}, {"residual", r.residual}});
  out["residuals"] = residuals;

  json preds = json::array();
  for (CopyCount n : targets) {
    const auto p = extrapolate_2s(model, n, fd);
    if (p.negative) {
      ctx.warnings.push_back("predicted total at N=" + std::to_string(n) +
                             " is negative; first-order truncation left its regime");
    }
    preds.push_back({{"N", n},
                     {"total", uncertain_json(p.total)},
                     {"per_copy", uncertain_json(p.per_copy)},
                     {"sigma_independent_xy", p.sigma_independent_xy},
                     {"negative", p.negative}});
  }
  out["predictions"] = preds;

  const auto sa = superactivation_check(model);
  out["superactivation"] = {
      {"additive_at_2", sa.additive_at_2}, {"additive_at_4", sa.additive_at_4}, {"gap", sa.gap}};
  return out;
}

// check-scalable

struct ScalableSelector {
  std::string kind;  // additive | multiplicative | triangular | sqrtn
  double lambda = 2.0;
  CopyCount l = 6;
  CopyCount m = 12;
  CopyCount ratio = 2;
  double e = 1.002;
  double f = 3.696;
};

inline json cmd_check_scalable(Context&, const ScalableSelector& sel, CopyCount n_max,
                               double rel_tol) {
  json out;
  out["selector"] = sel.kind;
  out["n_max"] = n_max;
  out["rel_tol"] = rel_tol;

  if (sel.kind == "sqrtn") {
    if (sel.l >= sel.m) throw Error(ErrorKind::DegenerateReference, "sqrtn needs L < M");
    struct Row {
      CopyCount n, k;
      Prop2Report r;
    };
    std::vector<Row> rows;
    for (CopyCount n = sel.m; n <= n_max; ++n)
      for (CopyCount k = 2; k <= n; ++k)
        if (n % k == 0) rows.push_back({n, k, verify_prop2(sel.l, sel.m, n, k, sel.e, sel.f, rel_tol)});
    const bool pass = std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.r.pass; });
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.r.violation > b.r.violation; });
    json worst = json::array();
    for (std::size_t i = 0; i < rows.size() && i < 10; ++i) {
      worst.push_back({{"N", rows[i].n},
                       {"K", rows[i].k},
                       {"violation", rows[i].r.violation},
                       {"pass", rows[i].r.pass}});
    }
    out["parameters"] = {{"L", sel.l}, {"M", sel.m}, {"e", sel.e}, {"f", sel.f}};
    out["pairs_checked"] = rows.size();
    out["pairs_failed"] = std::count_if(rows.begin(), rows.end(), [](const Row& r) { return !r.r.pass; });
    out["worst"] = worst;
    out["pass"] = pass;
    return out;
  }

  const CopyLattice lattice(1, sel.ratio);
  Measure1SFn f = [&]() -> Measure1SFn {
    if (sel.kind == "additive") return measures::additive(lattice);
    if (sel.kind == "multiplicative") return measures::multiplicative(sel.lambda, lattice);
    if (sel.kind == "triangular") return measures::triangular(lattice);
    throw Error(ErrorKind::UnknownSelector,
                "unknown selector '" + sel.kind + "' (additive | multiplicative | triangular | sqrtn)");
  }();
  if (sel.kind == "multiplicative") out["parameters"] = {{"lambda", sel.lambda}};

  json pairs = json::array();
  bool pass = true;
  double worst = 0.0;
  for (unsigned i = 1;; ++i) {
    const CopyCount n = lattice.at(i);
    if (n > n_max) break;
    for (unsigned j = 1; j < i; ++j) {
      const CopyCount k = lattice.at(j);
      const auto rep = check_1s(f, n, k, {}, rel_tol);
      pass = pass && rep.pass;
      worst = std::max(worst, rep.max_violation);
      pairs.push_back({{"N", n},
                       {"K", k},
                       {"max_violation", rep.max_violation},
                       {"max_relative_violation", rep.max_relative_violation},
                       {"worst_e", rep.worst_point.e},
                       {"skipped", rep.skipped.size()},
                       {"pass", rep.pass}});
    }
  }
  out["pairs"] = pairs;
  out["max_violation"] = worst;
  out["pass"] = pass;
  return out;
}

// oracle

struct OracleState {
  std::string kind;  // bell | isotropic
  double p = 0.8;
  std::size_t d = 3;
  double fidelity = 0.9;
};

inline json cmd_oracle(Context&, const OracleState& st, unsigned n_max) {
  DensityMatrix rho = [&] {
    if (st.kind == "bell") return bell_diagonal_state(st.p);
    if (st.kind == "isotropic") return isotropic_state(st.d, st.fidelity);
    throw Error(ErrorKind::UnknownSelector, "unknown state '" + st.kind + "' (bell | isotropic)");
  }();
  // Fail fast on the guard before any eigensolves.
  {
    std::size_t dim = 1;
    for (unsigned i = 0; i < n_max; ++i) {
      dim *= rho.dim();
      if (dim > kMaxOracleDimension) {
        throw Error(ErrorKind::DimensionGuard, "rho^(x)" + std::to_string(n_max) + " exceeds dimension 4096");
      }
    }
  }

  json out;
  out["state"] = st.kind == "bell" ? json{{"kind", "bell"}, {"p", st.p}}
                                   : json{{"kind", "isotropic"}, {"d", st.d}, {"F", st.fidelity}};
  json rows = json::array();
  double single = 0.0, max_dev = 0.0;
  bool all_valid = true;
  for (unsigned n = 1; n <= n_max; ++n) {
    const auto power = tensor_power(rho, n);
    const double ln = log_negativity(power);
    if (n == 1) single = ln;
    const double linear = static_cast<double>(n) * single;
    const double min_ev = power.min_eigenvalue();
    const bool valid = power.hermiticity_defect() <= kHermitianTol &&
                       std::abs(power.trace() - Complex(1.0)) <= kTraceTol && min_ev >= kPsdTol;
    all_valid = all_valid && valid;
    max_dev = std::max(max_dev, std::abs(ln - linear));
    rows.push_back({{"n", n},
                    {"dimension", power.dim()},
                    {"log_negativity", ln},
                    {"linear", linear},
                    {"deviation", std::abs(ln - linear)},
                    {"min_eigenvalue", min_ev},
                    {"valid_state", valid}});
  }
  out["values"] = rows;
  out["max_deviation_from_linear"] = max_dev;
  out["all_valid"] = all_valid;
  return out;
}

// fib-poly

inline json cmd_fib_poly(Context&, unsigned n, std::optional<double> xi) {
  json out;
  out["n"] = n;
  out["coefficients"] = fibonacci_poly_coeffs(n);
  if (xi) {
    out["xi"] = *xi;
    out["value"] = fibonacci_poly(n, *xi);
  }
  return out;
}

// compose-coeffs

inline json cmd_compose_coeffs(Context&, CopyCount ratio, const std::vector<double>& base_coeffs,
                               unsigned n_target, unsigned order) {
  if (ratio < 2) throw Error(ErrorKind::InvalidValue, "ratio must be >= 2");
  SeriesPoly1S base;
  base.n = ratio;
  base.coeffs = base_coeffs;
  const auto result = thm2_coeffs(base, n_target, order);
  const CopyLattice lattice(1, ratio);

  json out;
  out["ratio"] = ratio;
  out["n_target"] = n_target;
  out["N"] = lattice.at(n_target);
  out["order"] = order;
  out["base_coefficients"] = base_coeffs;
  out["coefficients"] = result.coeffs;
  const double d1 = base.d(1);
  if (d1 > 0.0) {
    out["nu"] = first_order_exponent(d1, ratio);
    if (d1 != 1.0) {
      const auto cf = second_order_closed_form(d1, base.d(2), ratio, lattice.at(n_target));
      out["closed_form"] = {{"d1", cf.d1}, {"d2", cf.d2}};
    }
  }
  return out;
}

}  // namespace rescale::cli
