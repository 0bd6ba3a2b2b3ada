// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "frde/asymptote.hpp"
#include "frde/example_specs.hpp"
#include "frde/fracint.hpp"
#include "frde/solver.hpp"
#include "frde/spec_io.hpp"
#include "frde/special.hpp"
#include "oracles.hpp"

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

// Frozen from the double-double Stirling oracle; re-verified below.
constexpr double kBetaHalfTwoThirds = 2.5871095592297904;  // G(1/2)G(2/3)/G(7/6)
constexpr double kBetaHalfOneThird = 4.2065463159763627;   // G(1/2)G(1/3)/G(5/6)

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
};

int failures = 0;

struct Criterion {
  Criterion(int number, std::string title, double budget_seconds)
      : number_(number),
        title_(std::move(title)),
        budget_(budget_seconds),
        start_(Clock::now()) {}
  void fail(const std::string& why) {
    ok_ = false;
    if (why_.empty()) why_ = why;
  }
  void require(bool condition, const std::string& why) {
    if (!condition) fail(why);
  }
  ~Criterion() {
    const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
    if (budget_ > 0.0 && elapsed > budget_)
      fail("runtime " + std::to_string(elapsed) + " s exceeds the budget");
    std::printf("criterion %d %-4s %-58s (%.2f s)%s%s\n", number_, ok_ ? "PASS" : "FAIL",
                title_.c_str(), elapsed, why_.empty() ? "" : " -- ", why_.c_str());
    std::fflush(stdout);
    if (!ok_) ++failures;
  }
  int number_;
  std::string title_;
  double budget_;
  Clock::time_point start_;
  bool ok_ = true;
  std::string why_;
};

double rel_gap(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

frde::SingularFunction sig(const std::string& sigma, double alpha) {
  return frde::SingularFunction::from_sigma(frde::parse(sigma, {"s"}), alpha);
}

frde::ProblemSpec example_spec(const char* id) {
  return frde::parse_spec_json(std::string(frde::examples::spec_json(id))).to_problem();
}

double log_kernel_closed_form(double t) {
  return 2.0 / std::sqrt(1.0 + t) * std::log(std::sqrt(1.0 + t) + std::sqrt(t));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void criterion_1() {
  Criterion c(1, "closed-form quadrature (power and log kernels)", 1.0);
  // the frozen constant re-verified against the double-double oracle
  const double oracle_value =
      oracle::dd_div(oracle::dd_mul(oracle::gamma_dd(0.5), oracle::gamma_dd(2.0 / 3.0)),
                     oracle::gamma_dd(7.0 / 6.0))
          .to_double();
  c.require(rel_gap(kBetaHalfTwoThirds, oracle_value) < 1e-15, "frozen constant drifted");

  const double got = frde::frac_integral(sig("1", 1.0 / 3.0), 0.5, 1.0);
  c.require(rel_gap(got, kBetaHalfTwoThirds) < 1e-9,
            "power kernel at t=1: got " + fmt(got));

  frde::SingularFunction log_rho = sig("1/(1+s)", 0.0);
  for (double t : {0.1, 1.0, 10.0, 100.0}) {
    const double y = frde::frac_integral(log_rho, 0.5, t);
    const double want = log_kernel_closed_form(t);
    c.require(rel_gap(y, want) < 1e-9, "log kernel at t=" + fmt(t));
  }
}

void criterion_2() {
  Criterion c(2, "resolvent identity across beta and t", 1.0);
  for (double beta : {0.2, 0.5, 0.8}) {
    frde::SingularFunction rho = sig("1", beta);
    const double want = frde::resolvent_constant(beta);
    for (double t : {0.5, 5.0, 500.0}) {
      const double y = frde::frac_integral(rho, beta, t);
      c.require(rel_gap(y, want) < 1e-10,
                "beta=" + fmt(beta) + " t=" + fmt(t) + " gap " + fmt(rel_gap(y, want)));
    }
  }
}

void criterion_3() {
  Criterion c(3, "lemma suite: monotone transfer, tails, inequality", 30.0);
  const std::vector<double> grid = frde::log_grid(1e-3, 1e3, 200);
  SplitMix64 rng(0xacce9701u);
  char buf[96];
  for (int d = 0; d < 10; ++d) {
    const double beta = rng.uniform(0.3, 0.7);
    const double alpha = rng.uniform(beta, 0.92);
    std::snprintf(buf, sizeof(buf), "%.6f+%.6f*exp(-s)", rng.uniform(0.0, 2.0),
                  rng.uniform(0.0, 2.0));
    if (!frde::check_monotone(sig(buf, alpha), beta, grid, frde::Direction::nonincreasing)
             .pass)
      c.fail("nonincreasing draw " + std::to_string(d));
  }
  for (int d = 0; d < 10; ++d) {
    const double beta = rng.uniform(0.3, 0.7);
    const double alpha = rng.uniform(0.05, beta);
    std::snprintf(buf, sizeof(buf), "%.6f+%.6f*(1-exp(-s))", rng.uniform(0.1, 2.0),
                  rng.uniform(0.0, 2.0));
    if (!frde::check_monotone(sig(buf, alpha), beta, grid, frde::Direction::nondecreasing)
             .pass)
      c.fail("nondecreasing draw " + std::to_string(d));
  }

  // bounded tail reproduces pi over the ladder up to 2^40
  std::vector<double> ladder;
  for (int k = 6; k <= 40; ++k) ladder.push_back(std::exp2(static_cast<double>(k)));
  frde::TailLimit tl = tail_limit(sig("1/(1+sqrt(s))", 0.0), 0.5, ladder);
  c.require(std::abs(tl.extrapolated - kPi) <= 1e-3,
            "tail extrapolation " + fmt(tl.extrapolated));
  c.require(tl.verdict.pass, "tail ladder shows no convergence trend");
  for (double t : {1.0, 10.0, 1000.0}) {
    const double y = frde::frac_integral(sig("1/(1+sqrt(s))", 0.0), 0.5, t);
    const double lower = kPi - kBetaHalfOneThird * std::pow(t, -1.0 / 6.0);
    c.require(y >= lower - 1e-9 && y <= kPi + 1e-9, "sandwich at t=" + fmt(t));
  }

  for (int d = 0; d < 20; ++d) {
    const double beta = rng.uniform(0.35, 0.8);
    const double alpha = rng.uniform(0.0, 0.55);
    double p = 1.0 / beta + rng.uniform(0.2, 1.0);
    const double margin = 1.0 - beta - alpha;
    if (margin < 0.0 && p > 0.9 / -margin) p = std::max(1.0 / beta + 0.05, 0.9 / -margin);
    std::snprintf(buf, sizeof(buf), "%.6f+%.6f*exp(-s)", rng.uniform(0.1, 2.0),
                  rng.uniform(0.0, 2.0));
    if (!frde::check_weak_singular_bound(sig(buf, alpha), beta, p, rng.uniform(0.05, 1.0))
             .pass)
      c.fail("weakly singular draw " + std::to_string(d));
  }
}

void criterion_4() {
  Criterion c(4, "turning point of the log-kernel integral", 1.0);
  frde::TurningPoint tp = frde::find_turning_point();
  auto g = [](double t) {
    return std::sqrt(t / (1.0 + t)) * std::log(std::sqrt(1.0 + t) + std::sqrt(t));
  };
  c.require(tp.T0 > 2.0 && tp.T0 < 3.0, "T0 outside (2, 3): " + fmt(tp.T0));
  c.require(std::abs(g(tp.T0) - 1.0) <= 1e-10, "g residual " + fmt(g(tp.T0) - 1.0));
  const double t0_oracle =
      oracle::bisect([&](double t) { return g(t) - 1.0; }, 1.0, 10.0, 1e-12);
  c.require(std::abs(tp.T0 - t0_oracle) < 1e-9, "bisection oracle disagrees");
  for (int i = 0; i + 1 < 200; ++i) {
    const double t0 = 0.05 + (10.0 - 0.05) * i / 199.0;
    const double t1 = 0.05 + (10.0 - 0.05) * (i + 1) / 199.0;
    const double y0 = log_kernel_closed_form(t0);
    const double y1 = log_kernel_closed_form(t1);
    if (t1 <= tp.T0 && !(y1 >= y0 - 1e-12)) c.fail("not increasing before T0");
    if (t0 >= tp.T0 && !(y1 <= y0 + 1e-12)) c.fail("not decreasing after T0");
  }
}

std::vector<frde::WeightedTrajectory> g_trajectories;  // shared with criteria 7 and 8

void criterion_5() {
  Criterion c(5, "solver exactness on power-law forcing", 10.0);
  for (double beta : {0.3, 0.5, 0.7}) {
    for (double gamma_exp : {0.5, 1.0}) {
      frde::ProblemSpec spec;
      spec.beta = beta;
      spec.x0 = 1.0;
      frde::StructuredRhs rhs;
      rhs.l = frde::SingularFunction::from_rho(frde::parse("0", {"t"}), 0.0);
      rhs.phi = frde::parse("0", {"x"});
      char k[64];
      std::snprintf(k, sizeof(k), "t^(%.17g)", gamma_exp - 1.0);
      rhs.k = frde::SingularFunction::from_rho(frde::parse(k, {"t"}), 1.0 - gamma_exp);
      rhs.mu = 0.0;
      spec.rhs = std::move(rhs);
      spec.solver.T0 = 10.0;
      spec.solver.Tmax = 10.0;
      spec.solver.N = 256;
      frde::GradedMesh mesh;
      mesh.T = 10.0;
      mesh.N = 256;
      mesh.grading = spec.effective_grading();
      frde::WeightedTrajectory traj = frde::solve_picard(spec, mesh);
      const double coef = frde::beta_fn(beta, gamma_exp) / frde::gamma(beta);
      for (std::size_t j = 1; j < traj.t.size(); ++j) {
        const double want = spec.x0 + coef * std::pow(traj.t[j], gamma_exp);
        if (rel_gap(traj.w[j], want) >= 1e-8) {
          c.fail("beta=" + fmt(beta) + " gamma=" + fmt(gamma_exp) + " node " +
                 std::to_string(j));
          break;
        }
      }
      g_trajectories.push_back(std::move(traj));
    }
  }
}

struct ExampleRun {
  std::string id;
  frde::AsymptoteReport report;
};

std::vector<ExampleRun> g_runs;

void criterion_6() {
  Criterion c(6, "example reproduction: predicted and solver limits", 300.0);
  const double sqrt_pi = std::sqrt(kPi);
  struct Target {
    const char* id;
    double limit;
  };
  const Target targets[] = {
      {"4.1", (std::sqrt(kPi) + std::sqrt(4.0 + kPi) - 2.0) / 2.0},
      {"4.2", 0.0},
      {"4.3", std::pow(kPi, 0.75)},
      {"4.4", sqrt_pi},
      {"4.5", sqrt_pi},
      {"4.6", -sqrt_pi},
  };

  // independent bisection oracles for the two nontrivial limit equations
  const double root_41 = oracle::bisect(
      [](double x) { return x * (x + 2.0) - std::sqrt(kPi) * (x + 1.0); }, 0.0, 10.0, 1e-12);
  const double root_43 = oracle::bisect(
      [](double x) { return x * x - std::pow(kPi, 1.5); }, 1.0, 10.0, 1e-12);

  for (const Target& target : targets) {
    frde::ProblemSpec spec = example_spec(target.id);
    // this criterion pins the solve horizon at 1e6 for every example, even
    // where the shipped fixture documents a longer one
    spec.solver.Tmax = 1e6;
    frde::AsymptoteReport report = frde::classify(spec);
    c.require(std::abs(report.predicted_limit - target.limit) <=
                  1e-10 * std::max(1.0, std::abs(target.limit)),
              std::string(target.id) + ": predicted " + fmt(report.predicted_limit));
    if (std::string(target.id) == "4.1")
      c.require(std::abs(report.predicted_limit - root_41) <= 1e-10, "4.1 oracle gap");
    if (std::string(target.id) == "4.3")
      c.require(std::abs(report.predicted_limit - root_43) <= 1e-10, "4.3 oracle gap");

    frde::WeightedTrajectory traj = frde::solve_full(spec);
    frde::attach_solver_limit(report, traj);
    if (!report.agreement) {
      c.fail(std::string(target.id) + ": no agreement computed");
    } else if (*report.agreement > 0.02) {
      std::string detail = std::string(target.id) + ": gap " + fmt(*report.agreement) +
                           " at Tmax=1e6 (solver " +
                           fmt(*report.extrapolated_solver_limit) + ")";
      // show what the shipped fixture horizon delivers for context
      frde::ProblemSpec shipped = example_spec(target.id);
      if (shipped.solver.Tmax > 1e6) {
        frde::AsymptoteReport long_report = frde::classify(shipped);
        frde::WeightedTrajectory long_traj = frde::solve_full(shipped);
        frde::attach_solver_limit(long_report, long_traj);
        if (long_report.agreement)
          detail += "; gap " + fmt(*long_report.agreement) + " at the fixture horizon Tmax=" +
                    fmt(shipped.solver.Tmax);
      }
      c.fail(detail);
    }
    g_runs.push_back({target.id, std::move(report)});
    g_trajectories.push_back(std::move(traj));
  }
}

void criterion_7() {
  Criterion c(7, "monotone positive solutions for the first three examples", 0.0);
  // the last six trajectories correspond to examples 4.1 .. 4.6
  const std::size_t base = g_trajectories.size() - 6;
  for (std::size_t e = 0; e < 3; ++e) {
    const frde::WeightedTrajectory& traj = g_trajectories[base + e];
    for (std::size_t j = 1; j < traj.t.size(); ++j) {
      const double x = traj.x_at(j);
      if (!(x > 0.0)) {
        c.fail("example 4." + std::to_string(e + 1) + ": x not positive at node " +
               std::to_string(j));
        break;
      }
      if (j > 1) {
        const double prev = traj.x_at(j - 1);
        if (x > prev + 1e-8 * std::max(1.0, std::abs(prev))) {
          c.fail("example 4." + std::to_string(e + 1) + ": x increases at node " +
                 std::to_string(j));
          break;
        }
      }
    }
  }
}

void criterion_8() {
  Criterion c(8, "residual contract on every accepted trajectory", 0.0);
  for (std::size_t i = 0; i < g_trajectories.size(); ++i) {
    if (!(g_trajectories[i].residual <= 1e-7))
      c.fail("trajectory " + std::to_string(i) + ": residual " +
             fmt(g_trajectories[i].residual));
  }
  c.require(!g_trajectories.empty(), "no trajectories were produced");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("%s\n", failures == 0 ? "acceptance: all criteria passed"
                                    : "acceptance: FAILURES present");
  return failures;
}
