#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frde/fracint.hpp"
#include "frde/solver.hpp"

namespace frde {

struct AsymptoteReport {
  double a = 0.0;  // lim t^beta l(t)
  double b = 0.0;  // lim t^beta k(t)
  std::vector<double> roots;  // nonnegative roots of the limit equation, ascending
  double predicted_limit = std::numeric_limits<double>::quiet_NaN();
  std::string governing_theorem = "none";  // "3.2".."3.8" or "none"
  std::vector<PropertyVerdict> hypothesis_audit;
  std::optional<double> extrapolated_solver_limit;
  std::optional<double> agreement;  // |extrapolated - predicted| / max(1, |predicted|)
  bool shifted_equation_unique = true;
  std::string note;
};

struct TailCoefficient {
  double value = 0.0;
  bool converged = false;
};

// lim t^beta g(t) by sampling t = 2^k, k = 6..40, with Aitken acceleration.
// Throws on a divergent ladder.
TailCoefficient tail_coefficient(const SingularFunction& g, double beta);

// Nonnegative roots of x = C (a phi(x) + b), C = pi / (Gamma(beta) sin(beta pi)):
// scan of 10^4 points up to a growth-bound cap, bisection refinement to ~1e-13.
std::vector<double> solve_limit_equation(const Expr& phi, double a, double b, double beta,
                                         double mu);

struct SelectedLimit {
  double value = 0.0;
  bool shifted_equation_unique = true;  // x = C(a phi(x+x*)+b) - x* has only the root 0
};

SelectedLimit select_limit(std::span<const double> roots, const Expr& phi, double a, double b,
                           double beta, double mu);

// Runs the hypothesis audits in order and picks the governing statement:
// monotone-coefficients route (limit from the scalar limit equation), the
// bounded non-monotone route, the sandwich route (negative forcing allowed),
// or the double-decay route with limit zero.
AsymptoteReport classify(const ProblemSpec& spec);

struct ExtrapolatedLimit {
  double value = 0.0;
  double uncertainty = 0.0;
  bool reliable = false;
};

// Aitken over x at geometric checkpoints of the trajectory tail; requires at
// least three decades between the graded endpoint and the final time and a
// monotone tail, otherwise the result is flagged unreliable.
ExtrapolatedLimit extrapolate_limit(const WeightedTrajectory& traj);

// Fills extrapolated_solver_limit and agreement from a solved trajectory.
void attach_solver_limit(AsymptoteReport& report, const WeightedTrajectory& traj);

// Canonical JSON document, numbers at 17 significant digits.
std::string report_to_json(const AsymptoteReport& report);

}  // namespace frde
