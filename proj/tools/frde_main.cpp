#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frde/asymptote.hpp"
#include "frde/example_specs.hpp"
#include "frde/expr.hpp"
#include "frde/fracint.hpp"
#include "frde/solver.hpp"
#include "frde/spec_io.hpp"
#include "frde/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdictFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct IntegrateArgs {
  double beta = 0.5;
  std::string rho;
  double alpha = 0.0;
  double t = 1.0;
  int cap = 512;
};

int cmd_integrate(const IntegrateArgs& args) {
  frde::SingularFunction rho =
      frde::SingularFunction::from_rho(frde::parse(args.rho, {"s", "t"}), args.alpha);
  frde::FracIntegralResult r = frde::frac_integral_full(rho, args.beta, args.t, args.cap);
  std::printf("y(%.17g) = %.17g\n", args.t, r.value);
  std::printf("error estimate %.3g, converged %s\n", r.error_estimate,
              r.converged ? "yes" : "no");
  return r.converged ? kExitOk : kExitNumerical;
}

int cmd_solve(const std::string& spec_path, const std::string& out_path) {
  frde::SpecDocument doc = frde::load_spec_file(spec_path);
  frde::ProblemSpec spec = doc.to_problem();
  frde::WeightedTrajectory traj = frde::solve_full(spec);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "cannot open output file: %s\n", out_path.c_str());
    return kExitUsage;
  }
  frde::write_csv(traj, out);

  std::vector<frde::PropertyVerdict> verdicts = frde::verify_solution(spec, traj);
  std::string monotone = "n/a";
  for (const frde::PropertyVerdict& v : verdicts)
    if (v.property == "solution positive and nonincreasing")
      monotone = v.note.empty() ? (v.pass ? "yes" : "no") : "skipped";
  std::printf("nodes %zu, residual %.3g, monotone %s, final x %.17g\n", traj.t.size(),
              traj.residual, monotone.c_str(), traj.x_at(traj.t.size() - 1));
  std::printf("trajectory written to %s\n", out_path.c_str());
  return kExitOk;
}

int cmd_asymptote(const std::string& spec_path, bool with_solve, const std::string& out_path,
                  double max_gap) {
  frde::SpecDocument doc = frde::load_spec_file(spec_path);
  frde::ProblemSpec spec = doc.to_problem();
  frde::AsymptoteReport report = frde::classify(spec);
  if (with_solve) {
    frde::WeightedTrajectory traj = frde::solve_full(spec);
    frde::attach_solver_limit(report, traj);
  }
  const std::string json = frde::report_to_json(report);
  if (out_path.empty()) {
    std::fputs(json.c_str(), stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::fprintf(stderr, "cannot open output file: %s\n", out_path.c_str());
      return kExitUsage;
    }
    out << json;
    std::printf("report written to %s\n", out_path.c_str());
  }
  if (with_solve && report.agreement && *report.agreement > max_gap) return kExitVerdictFailure;
  return kExitOk;
}

int cmd_verify(const std::string& suite) {
  std::vector<frde::PropertyVerdict> verdicts;
  if (suite == "lemmas" || suite == "all") {
    auto v = frde::verify::run_lemma_suite();
    verdicts.insert(verdicts.end(), v.begin(), v.end());
  }
  if (suite == "solver" || suite == "all") {
    auto v = frde::verify::run_solver_suite();
    verdicts.insert(verdicts.end(), v.begin(), v.end());
  }
  bool all_pass = true;
  for (const frde::PropertyVerdict& v : verdicts) {
    std::printf("%-62s %s\n", v.property.c_str(), v.pass ? "PASS" : "FAIL");
    if (!v.pass && !v.witness.empty()) std::printf("    witness: %s\n", v.witness.c_str());
    all_pass = all_pass && v.pass;
  }
  std::printf("%zu checks, %s\n", verdicts.size(), all_pass ? "all passed" : "FAILURES");
  return all_pass ? kExitOk : kExitVerdictFailure;
}

int cmd_reproduce(const std::string& which, double max_gap) {
  std::vector<std::string> ids;
  if (which == "all")
    ids = frde::examples::ids();
  else
    ids.push_back(which);

  // Buffered per example so concurrent runs would still print in order.
  std::vector<std::string> rows(ids.size());
  bool ok = true;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::string& id = ids[i];
    std::ostringstream row;
    frde::SpecDocument doc =
        frde::parse_spec_json(std::string(frde::examples::spec_json(id)));
    frde::ProblemSpec spec = doc.to_problem();
    frde::AsymptoteReport report = frde::classify(spec);
    frde::WeightedTrajectory traj = frde::solve_full(spec);
    frde::attach_solver_limit(report, traj);
    const double gap = report.agreement ? *report.agreement : std::nan("");
    const bool row_ok = report.agreement && gap <= max_gap;
    ok = ok && row_ok;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-4s  thm %-4s  %-26s  %#14.10g  %#14.10g  %8.2e  %s",
                  id.c_str(), report.governing_theorem.c_str(),
                  std::string(frde::examples::reference_limit_label(id)).c_str(),
                  report.predicted_limit,
                  report.extrapolated_solver_limit ? *report.extrapolated_solver_limit
                                                   : std::nan(""),
                  gap, row_ok ? "ok" : "GAP");
    row << buf;
    rows[i] = row.str();
  }
  std::printf("%-4s  %-8s  %-26s  %14s  %14s  %8s\n", "id", "theorem", "reference limit",
              "predicted", "solver", "gap");
  for (const std::string& r : rows) std::printf("%s\n", r.c_str());
  return ok ? kExitOk : kExitVerdictFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Riemann-Liouville fractional differential equation toolkit"};
  app.require_subcommand(1);

  IntegrateArgs iargs;
  CLI::App* integrate = app.add_subcommand(
      "integrate", "Evaluate int_0^t (t-s)^(beta-1) rho(s) ds for rho = s^(-alpha) sigma(s)");
  integrate->add_option("--beta", iargs.beta, "order in (0,1)")->required();
  integrate->add_option("--rho", iargs.rho, "expression for rho in s")->required();
  integrate->add_option("--alpha", iargs.alpha, "declared singularity exponent in [0,1)");
  integrate->add_option("--t", iargs.t, "evaluation point")->required();
  integrate->add_option("--cap", iargs.cap, "quadrature node cap");

  std::string spec_path, out_path = "trajectory.csv";
  CLI::App* solve = app.add_subcommand("solve", "Solve a problem spec and write the trajectory");
  solve->add_option("spec", spec_path, "problem spec JSON file")->required();
  solve->add_option("--out", out_path, "output CSV path");

  std::string aspec_path, areport_path;
  bool asolve = false;
  double max_gap = 0.02;
  CLI::App* asymptote =
      app.add_subcommand("asymptote", "Classify a problem and predict its long-time limit");
  asymptote->add_option("spec", aspec_path, "problem spec JSON file")->required();
  asymptote->add_flag("--solve", asolve, "also solve and cross-check the prediction");
  asymptote->add_option("--out", areport_path, "write the JSON report here instead of stdout");
  asymptote->add_option("--max-gap", max_gap, "largest acceptable prediction/solver gap");

  std::string suite;
  CLI::App* verify = app.add_subcommand("verify", "Run the executable property suites");
  verify->add_option("--suite", suite, "lemmas | solver | all")
      ->required()
      ->check(CLI::IsMember({"lemmas", "solver", "all"}));

  std::string example = "all";
  double rep_gap = 0.02;
  CLI::App* reproduce =
      app.add_subcommand("reproduce", "Re-run the shipped examples and compare limits");
  reproduce->add_option("--example", example, "4.1 .. 4.6 or all")
      ->check(CLI::IsMember({"4.1", "4.2", "4.3", "4.4", "4.5", "4.6", "all"}));
  reproduce->add_option("--max-gap", rep_gap, "largest acceptable prediction/solver gap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (integrate->parsed()) return cmd_integrate(iargs);
    if (solve->parsed()) return cmd_solve(spec_path, out_path);
    if (asymptote->parsed()) return cmd_asymptote(aspec_path, asolve, areport_path, max_gap);
    if (verify->parsed()) return cmd_verify(suite);
    if (reproduce->parsed()) return cmd_reproduce(example, rep_gap);
  } catch (const frde::SolverError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const frde::ParseError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitUsage;
  } catch (const frde::SpecFileError& e) {
    std::fprintf(stderr, "spec file error: %s\n", e.what());
    return kExitUsage;
  } catch (const frde::EvalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
