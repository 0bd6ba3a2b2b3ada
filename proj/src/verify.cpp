#include "frde/verify.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>

#include "frde/example_specs.hpp"
#include "frde/expr.hpp"
#include "frde/solver.hpp"
#include "frde/spec_io.hpp"
#include "frde/special.hpp"

namespace frde::verify {
namespace {

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
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
};

PropertyVerdict named(std::string name, bool pass, std::string witness = "",
                      double tolerance = 0.0) {
  PropertyVerdict v;
  v.property = std::move(name);
  v.pass = pass;
  v.witness = std::move(witness);
  v.tolerance = tolerance;
  return v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Expr expr_t(const std::string& source) { return parse(source, {"t"}); }
Expr expr_s(const std::string& source) { return parse(source, {"s"}); }

std::vector<double> dyadic_ladder(int k_lo, int k_hi) {
  std::vector<double> out;
  for (int k = k_lo; k <= k_hi; ++k) out.push_back(std::exp2(static_cast<double>(k)));
  return out;
}

PropertyVerdict monotone_family(Direction direction, int draws) {
  SplitMix64 rng(direction == Direction::nonincreasing ? 0x5eed0001u : 0x5eed0002u);
  const std::vector<double> grid = log_grid(1e-3, 1e3, 160);
  int failures = 0;
  std::string witness;
  for (int d = 0; d < draws; ++d) {
    const double beta = rng.uniform(0.25, 0.8);
    const double c1 = rng.uniform(0.0, 2.0);
    const double c2 = rng.uniform(0.0, 2.0);
    double alpha;
    std::string sigma_src;
    if (direction == Direction::nonincreasing) {
      alpha = rng.uniform(beta, 0.95);  // t^beta rho decays
      sigma_src = fmt(c1) + "+" + fmt(c2) + "*exp(-s)";
    } else {
      alpha = rng.uniform(0.0, beta);  // t^beta rho grows
      sigma_src = fmt(c1) + "+" + fmt(c2) + "*(1-exp(-s))";
    }
    SingularFunction rho = SingularFunction::from_sigma(expr_s(sigma_src), alpha);
    PropertyVerdict v = check_monotone(rho, beta, grid, direction);
    if (!v.pass) {
      ++failures;
      if (witness.empty())
        witness = "draw " + std::to_string(d) + ": " + v.witness;
    }
  }
  std::string name = direction == Direction::nonincreasing
                         ? "monotone transfer, nonincreasing family"
                         : "monotone transfer, nondecreasing family";
  return named(std::move(name), failures == 0, witness, 1e-9);
}

PropertyVerdict weak_singular_draws(int draws) {
  SplitMix64 rng(0x5eed0003u);
  int failures = 0;
  std::string witness;
  for (int d = 0; d < draws; ++d) {
    const double beta = rng.uniform(0.3, 0.8);
    const double alpha = rng.uniform(0.0, 0.6);
    const double c1 = rng.uniform(0.1, 2.0);
    const double c2 = rng.uniform(0.0, 2.0);
    SingularFunction rho =
        SingularFunction::from_sigma(expr_s(fmt(c1) + "+" + fmt(c2) + "*exp(-s)"), alpha);
    // p > 1/beta with p (1 - beta - alpha) > -1 kept away from the edge
    double p = 1.0 / beta + rng.uniform(0.2, 1.5);
    const double margin = 1.0 - beta - alpha;
    if (margin < 0.0 && p > 0.9 / -margin) p = std::max(1.0 / beta + 0.05, 0.9 / -margin);
    const double t = rng.uniform(0.05, 1.0);
    PropertyVerdict v = check_weak_singular_bound(rho, beta, p, t);
    if (!v.pass) {
      ++failures;
      if (witness.empty()) witness = "draw " + std::to_string(d) + ": " + v.witness;
    }
  }
  return named("weakly singular integral inequality over random draws", failures == 0, witness,
               1e-9);
}

double log_kernel_closed_form(double t) {
  return 2.0 / std::sqrt(1.0 + t) * std::log(std::sqrt(1.0 + t) + std::sqrt(t));
}

}  // namespace

std::vector<PropertyVerdict> run_lemma_suite() {
  std::vector<PropertyVerdict> out;
  const double pi = std::numbers::pi;

  out.push_back(monotone_family(Direction::nonincreasing, 20));
  out.push_back(monotone_family(Direction::nondecreasing, 20));

  {
    // power-law weight: closed form B(beta, 1-alpha) t^(beta-alpha)
    bool ok = true;
    std::string witness;
    for (double beta : {0.3, 0.5, 0.7})
      for (double alpha : {0.2, 0.5, 0.8})
        for (double t : {0.25, 1.0, 4.0, 64.0}) {
          SingularFunction rho = SingularFunction::from_sigma(expr_s("1"), alpha);
          const double got = frac_integral(rho, beta, t);
          const double want = beta_fn(beta, 1.0 - alpha) * std::pow(t, beta - alpha);
          if (std::abs(got - want) > 1e-9 * std::abs(want)) {
            ok = false;
            if (witness.empty())
              witness = "beta=" + fmt(beta) + " alpha=" + fmt(alpha) + " t=" + fmt(t);
          }
        }
    out.push_back(named("power-law closed form", ok, witness, 1e-9));
  }

  {
    bool ok = true;
    std::string witness;
    SingularFunction rho = SingularFunction::from_sigma(expr_s("1/(1+s)"), 0.0);
    for (double t : {0.1, 1.0, 10.0, 100.0}) {
      const double got = frac_integral(rho, 0.5, t);
      const double want = log_kernel_closed_form(t);
      if (std::abs(got - want) > 1e-9 * std::abs(want)) {
        ok = false;
        witness = "t=" + fmt(t) + " got " + fmt(got) + " want " + fmt(want);
      }
    }
    out.push_back(named("log-kernel closed form", ok, witness, 1e-9));
  }

  {
    bool ok = true;
    std::string witness;
    for (double beta : {0.2, 0.5, 0.8}) {
      SingularFunction rho = SingularFunction::from_sigma(expr_s("1"), beta);
      for (double t : {0.5, 5.0, 500.0}) {
        const double got = frac_integral(rho, beta, t);
        const double want = resolvent_constant(beta);
        if (std::abs(got - want) > 1e-10 * std::abs(want)) {
          ok = false;
          witness = "beta=" + fmt(beta) + " t=" + fmt(t);
        }
      }
    }
    out.push_back(named("resolvent weight gives a constant integral", ok, witness, 1e-10));
  }

  {
    SingularFunction rho = SingularFunction::from_sigma(expr_s("1/(1+s)"), 0.0);
    TailLimit tl = tail_limit(rho, 0.5, dyadic_ladder(6, 40));
    const bool ok = std::abs(tl.extrapolated) <= 1e-3 && std::abs(tl.predicted) <= 1e-12;
    out.push_back(named("vanishing tail limit", ok,
                        ok ? "" : "extrapolated " + fmt(tl.extrapolated), 1e-3));
  }

  {
    SingularFunction rho = SingularFunction::from_sigma(expr_s("1/(1+sqrt(s))"), 0.0);
    TailLimit tl = tail_limit(rho, 0.5, dyadic_ladder(6, 40));
    bool ok = std::abs(tl.extrapolated - pi) <= 1e-3 && std::abs(tl.predicted - pi) <= 1e-6;
    std::string witness = ok ? "" : "extrapolated " + fmt(tl.extrapolated);
    // pointwise sandwich: pi - B(1/2,1/3) t^(-1/6) <= y(t) <= pi
    const double bound_c = beta_fn(0.5, 1.0 / 3.0);
    for (double t : {1.0, 10.0, 1000.0}) {
      const double y = frac_integral(rho, 0.5, t);
      const double lower = pi - bound_c * std::pow(t, -1.0 / 6.0);
      if (!(y >= lower - 1e-9) || !(y <= pi + 1e-9)) {
        ok = false;
        witness = "sandwich fails at t=" + fmt(t);
      }
    }
    out.push_back(named("bounded-tail limit with sandwich bounds", ok, witness, 1e-3));
  }

  {
    TurningPoint tp = find_turning_point();
    auto g = [](double t) {
      return std::sqrt(t / (1.0 + t)) * std::log(std::sqrt(1.0 + t) + std::sqrt(t));
    };
    bool ok = tp.T0 > 2.0 && tp.T0 < 3.0 && std::abs(g(tp.T0) - 1.0) <= 1e-10 &&
              tp.g_at_one < 1.0;
    std::string witness = ok ? "" : "T0=" + fmt(tp.T0);
    // the closed-form trajectory rises before T0 and falls after
    const int n = 200;
    for (int i = 0; i + 1 < n && ok; ++i) {
      const double t0 = 0.05 + (10.0 - 0.05) * i / (n - 1);
      const double t1 = 0.05 + (10.0 - 0.05) * (i + 1) / (n - 1);
      const double y0 = log_kernel_closed_form(t0);
      const double y1 = log_kernel_closed_form(t1);
      if (t1 <= tp.T0 && y1 < y0 - 1e-12) {
        ok = false;
        witness = "not increasing at t=" + fmt(t0);
      }
      if (t0 >= tp.T0 && y1 > y0 + 1e-12) {
        ok = false;
        witness = "not decreasing at t=" + fmt(t0);
      }
    }
    out.push_back(named("turning point of the log-kernel integral", ok, witness, 1e-10));
  }

  out.push_back(weak_singular_draws(20));

  {
    bool ok = true;
    std::string witness;
    struct Case {
      const char* sigma;
      double alpha;
    } cases[] = {{"1", 1.0 / 3.0}, {"1", 0.0}, {"1", 0.5}};
    for (const Case& c : cases) {
      SingularFunction rho = SingularFunction::from_sigma(expr_s(c.sigma), c.alpha);
      PropertyVerdict v = check_weighted_continuity(rho, 0.5);
      if (!v.pass) {
        ok = false;
        witness = v.witness;
      }
    }
    out.push_back(named("weighted integral continuous at zero", ok, witness, 1e-6));
  }

  return out;
}

std::vector<PropertyVerdict> run_solver_suite() {
  std::vector<PropertyVerdict> out;

  auto forced_spec = [](double beta, double gamma_exp) {
    ProblemSpec spec;
    spec.beta = beta;
    spec.x0 = 1.0;
    StructuredRhs rhs;
    rhs.l = SingularFunction::from_rho(expr_t("0"), 0.0);
    rhs.phi = parse("0", {"x"});
    std::ostringstream k;
    k.precision(17);
    k << "t^(" << gamma_exp - 1.0 << ")";
    rhs.k = SingularFunction::from_rho(expr_t(k.str()), 1.0 - gamma_exp);
    rhs.mu = 0.0;
    spec.rhs = std::move(rhs);
    spec.solver.T0 = 10.0;
    spec.solver.Tmax = 10.0;
    spec.solver.N = 128;
    return spec;
  };

  {
    bool ok = true;
    std::string witness;
    for (double beta : {0.3, 0.5, 0.7})
      for (double gamma_exp : {0.5, 1.0}) {
        ProblemSpec spec = forced_spec(beta, gamma_exp);
        WeightedTrajectory traj = solve_full(spec);
        const double coef = beta_fn(beta, gamma_exp) / gamma(beta);
        for (std::size_t j = 1; j < traj.t.size(); ++j) {
          const double want = spec.x0 + coef * std::pow(traj.t[j], gamma_exp);
          if (std::abs(traj.w[j] - want) > 1e-8 * std::abs(want)) {
            ok = false;
            if (witness.empty())
              witness = "beta=" + fmt(beta) + " gamma=" + fmt(gamma_exp) + " node " +
                        std::to_string(j);
            break;
          }
        }
      }
    out.push_back(named("exactness on power-law forcing", ok, witness, 1e-8));
  }

  {
    ProblemSpec spec = forced_spec(0.5, 1.0);
    std::get<StructuredRhs>(spec.rhs).k = SingularFunction::from_rho(expr_t("0"), 0.0);
    WeightedTrajectory traj = solve_full(spec);
    bool ok = traj.residual == 0.0;
    for (double w : traj.w) ok = ok && w == spec.x0;
    out.push_back(named("zero right-hand side keeps the weighted state constant", ok, "", 0.0));
  }

  {
    // halving the mesh on the known-solution problem moves x(T) by no more
    // than a few times the fine-mesh discretization error
    ProblemSpec spec = forced_spec(0.5, 0.5);
    WeightedTrajectory coarse = solve_full(spec);
    spec.solver.N = 256;
    WeightedTrajectory fine = solve_full(spec);
    const double exact = spec.x0 + beta_fn(0.5, 0.5) / gamma(0.5) * 1.0;  // w(T)/..., T=10
    const double exact_w = spec.x0 + beta_fn(0.5, 0.5) / gamma(0.5) * std::pow(10.0, 0.5);
    (void)exact;
    const double err_fine = std::abs(fine.w.back() - exact_w);
    const double change = std::abs(fine.w.back() - coarse.w.back());
    const bool ok = change <= 5.0 * std::max(err_fine, 1e-12);
    out.push_back(named("mesh refinement consistency", ok,
                        ok ? "" : "change " + fmt(change) + " err " + fmt(err_fine), 0.0));
  }

  {
    SplitMix64 rng(0x5eed0004u);
    bool ok = true;
    std::string witness;
    for (int d = 0; d < 5; ++d) {
      ProblemSpec spec;
      spec.beta = rng.uniform(0.35, 0.75);
      spec.x0 = rng.uniform(0.2, 2.0);
      StructuredRhs rhs;
      const double alpha_l = rng.uniform(0.1, 0.7);
      rhs.l = SingularFunction::from_sigma(expr_s(fmt(rng.uniform(0.1, 1.0))), alpha_l);
      rhs.phi = parse("x/(x+1)", {"x"});
      rhs.k = SingularFunction::from_sigma(expr_s(fmt(rng.uniform(0.0, 1.0))),
                                           rng.uniform(0.0, 0.6));
      rhs.mu = 0.0;
      spec.rhs = std::move(rhs);
      spec.solver.T0 = 5.0;
      spec.solver.Tmax = 5.0;
      spec.solver.N = 96;
      WeightedTrajectory traj = solve_full(spec);
      for (std::size_t j = 1; j < traj.t.size(); ++j)
        if (!(traj.x_at(j) > 0.0)) {
          ok = false;
          witness = "draw " + std::to_string(d) + " node " + std::to_string(j);
        }
    }
    out.push_back(named("positivity for nonnegative structured problems", ok, witness, 0.0));
  }

  SpecDocument ex41 = parse_spec_json(std::string(examples::spec_json("4.1")));
  {
    ProblemSpec spec = ex41.to_problem();
    spec.solver.N = 96;
    spec.solver.Tmax = spec.solver.T0;
    GradedMesh mesh;
    mesh.T = spec.solver.T0;
    mesh.N = spec.solver.N;
    mesh.grading = spec.effective_grading();
    VolterraOperator serial_op(spec, mesh.nodes(), Exec::serial);
    VolterraOperator parallel_op(spec, mesh.nodes(), Exec::parallel);
    std::vector<double> w(mesh.nodes().size(), spec.x0);
    std::vector<double> a = serial_op.apply(w, Exec::serial);
    std::vector<double> b = parallel_op.apply(w, Exec::parallel);
    bool ok = a.size() == b.size();
    for (std::size_t i = 0; ok && i < a.size(); ++i) ok = a[i] == b[i];
    out.push_back(named("serial and parallel operator applications agree bitwise", ok, "", 0.0));
  }

  {
    ProblemSpec spec = ex41.to_problem();
    spec.solver.N = 128;
    spec.solver.Tmax = 1e4;
    WeightedTrajectory traj = solve_full(spec);
    bool ok = traj.residual <= 5e-8;
    std::string witness = ok ? "" : "residual " + fmt(traj.residual);
    for (std::size_t j = 1; ok && j < traj.t.size(); ++j) {
      const double x_prev = traj.x_at(j - 1 == 0 ? 1 : j - 1);
      const double x_here = traj.x_at(j);
      if (j > 1 && x_here > x_prev + 1e-8 * std::max(1.0, std::abs(x_prev))) {
        ok = false;
        witness = "x increases at node " + std::to_string(j);
      }
    }
    out.push_back(named("extension keeps the residual contract and monotone profile", ok,
                        witness, 5e-8));
  }

  return out;
}

}  // namespace frde::verify
