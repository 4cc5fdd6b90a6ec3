// rescale: command-line front end. Every subcommand writes one JSON report to
// stdout or --output; failures write the same envelope with an "error" object
// and exit non-zero.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rescale/commands.hpp"

namespace {

using rescale::cli::json;

int emit(const json& report, const std::string& output) {
  const std::string text = report.dump(2) + "\n";
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << output << "\n";
      return 1;
    }
    out << text;
  }
  return 0;
}

bool env_deterministic() {
  const char* v = std::getenv("RESCALE_DETERMINISTIC");
  return v != nullptr && std::string(v) == "1";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scalability calculus for quantum resource measures"};
  app.require_subcommand(1);

  std::string output;
  bool deterministic = false;
  app.add_option("-o,--output", output, "Write the JSON report here instead of stdout");
  app.add_flag("--deterministic", deterministic, "Omit the timestamp so reruns are byte-identical");

  // fit-extrapolate
  auto* fit = app.add_subcommand("fit-extrapolate", "Fit (x, y) from four lattice knots and extrapolate");
  std::string input;
  std::vector<rescale::CopyCount> targets;
  double fd_rel_step = 1e-6;
  fit->add_option("input", input, "Series file (.csv or .json)")->required();
  fit->add_option("-t,--target", targets, "Copy counts to predict (repeatable)");
  fit->add_option("--fd-rel-step", fd_rel_step, "Relative finite-difference step")->capture_default_str();

  // check-scalable
  auto* check = app.add_subcommand("check-scalable", "Check the regrouping constraint for a measure family");
  rescale::cli::ScalableSelector sel;
  rescale::CopyCount n_max = 16;
  double rel_tol = 1e-9;
  check->add_option("selector", sel.kind, "additive | multiplicative | triangular | sqrtn")->required();
  check->add_option("--lambda", sel.lambda, "lambda for the multiplicative family")->capture_default_str();
  check->add_option("--L", sel.l, "first reference copy number (sqrtn)")->capture_default_str();
  check->add_option("--M", sel.m, "second reference copy number (sqrtn)")->capture_default_str();
  check->add_option("--e", sel.e, "value at L (sqrtn)")->capture_default_str();
  check->add_option("--f", sel.f, "value at M (sqrtn)")->capture_default_str();
  check->add_option("--ratio", sel.ratio, "lattice ratio for 1-S families")->capture_default_str();
  check->add_option("--n-max", n_max, "largest N to check")->capture_default_str();
  check->add_option("--rel-tol", rel_tol, "relative tolerance")->capture_default_str();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force log-negativity additivity table");
  rescale::cli::OracleState state;
  unsigned oracle_n_max = 3;
  oracle->add_option("state", state.kind, "bell | isotropic")->required();
  oracle->add_option("--p", state.p, "Bell-diagonal weight")->capture_default_str();
  oracle->add_option("--d", state.d, "isotropic local dimension")->capture_default_str();
  oracle->add_option("--F", state.fidelity, "isotropic fidelity")->capture_default_str();
  oracle->add_option("--n-max", oracle_n_max, "largest tensor power")->capture_default_str();

  // fib-poly
  auto* fib = app.add_subcommand("fib-poly", "Print Fibonacci polynomial coefficients");
  unsigned fib_n = 0;
  std::optional<double> fib_xi;
  fib->add_option("n", fib_n, "polynomial index")->required();
  fib->add_option("--xi", fib_xi, "also evaluate at xi");

  // compose-coeffs
  auto* comp = app.add_subcommand("compose-coeffs", "Maclaurin coefficients at N = a^n from those of E^(a)");
  rescale::CopyCount ratio = 2;
  std::vector<double> coeffs;
  unsigned n_target = 1;
  unsigned order = 0;
  comp->add_option("--ratio", ratio, "lattice ratio a")->capture_default_str();
  comp->add_option("--coeffs", coeffs, "d_1(a), d_2(a), ... (comma separated)")->delimiter(',')->required();
  comp->add_option("--n-target", n_target, "number of ratio steps n")->capture_default_str();
  comp->add_option("--order", order, "truncation order J (default: number of coeffs)");

  CLI11_PARSE(app, argc, argv);

  rescale::cli::Context ctx;
  ctx.deterministic = deterministic || env_deterministic();
  json outputs = json::object();
  std::optional<rescale::Error> error;

  try {
    if (fit->parsed()) {
      ctx.command = "fit-extrapolate";
      ctx.arguments = {{"input", input}, {"targets", targets}, {"fd_rel_step", fd_rel_step}};
      ctx.input_bytes = rescale::read_file(input);
      const auto file = rescale::parse_series(input, ctx.input_bytes);
      rescale::FiniteDiffOptions fd;
      fd.rel_step = fd_rel_step;
      outputs = rescale::cli::cmd_fit_extrapolate(ctx, file, targets, fd);
    } else if (check->parsed()) {
      ctx.command = "check-scalable";
      ctx.arguments = {{"selector", sel.kind}, {"lambda", sel.lambda}, {"L", sel.l},
                       {"M", sel.m},           {"e", sel.e},           {"f", sel.f},
                       {"ratio", sel.ratio},   {"n_max", n_max},       {"rel_tol", rel_tol}};
      outputs = rescale::cli::cmd_check_scalable(ctx, sel, n_max, rel_tol);
    } else if (oracle->parsed()) {
      ctx.command = "oracle";
      ctx.arguments = {{"state", state.kind}, {"p", state.p}, {"d", state.d},
                       {"F", state.fidelity}, {"n_max", oracle_n_max}};
      outputs = rescale::cli::cmd_oracle(ctx, state, oracle_n_max);
    } else if (fib->parsed()) {
      ctx.command = "fib-poly";
      ctx.arguments = {{"n", fib_n}};
      if (fib_xi) ctx.arguments["xi"] = *fib_xi;
      outputs = rescale::cli::cmd_fib_poly(ctx, fib_n, fib_xi);
    } else if (comp->parsed()) {
      ctx.command = "compose-coeffs";
      if (order == 0) order = static_cast<unsigned>(coeffs.size());
      ctx.arguments = {{"ratio", ratio}, {"coeffs", coeffs}, {"n_target", n_target}, {"order", order}};
      outputs = rescale::cli::cmd_compose_coeffs(ctx, ratio, coeffs, n_target, order);
    }
  } catch (const rescale::Error& e) {
    error = e;
  }

  const auto report = rescale::cli::make_report(ctx, outputs, error);
  if (const int rc = emit(report, output); rc != 0) return rc;
  return error ? rescale::cli::exit_code_for(error->kind()) : 0;
}
