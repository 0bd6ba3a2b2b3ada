#pragma once

#include <span>
#include <string>
#include <vector>

#include "frde/expr.hpp"

namespace frde {

// rho(s) = s^(-alpha) sigma(s) with sigma continuous at 0 and alpha in [0, 1).
// The expression may be given either as the continuous factor sigma or as the
// full function rho; the declared alpha stays authoritative either way.
// Expressions may use the variable name "s" or "t" interchangeably.
struct SingularFunction {
  Expr expr;
  double alpha = 0.0;
  bool expr_is_sigma = true;

  static SingularFunction from_sigma(Expr sigma, double alpha);
  static SingularFunction from_rho(Expr rho, double alpha);

  double rho(double s) const;       // s^(-alpha) sigma(s)
  double sigma_at(double s) const;  // the continuous factor
};

struct PropertyVerdict {
  std::string property;
  bool pass = false;
  double tolerance = 0.0;
  std::string witness;  // filled whenever pass is false
  std::string note;
};

enum class Direction { nonincreasing, nondecreasing };

struct FracIntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

// y(t) = int_0^t (t-s)^(beta-1) rho(s) ds, evaluated as
// t^(beta-alpha) int_0^1 (1-v)^(beta-1) v^(-alpha) sigma(t v) dv.
// Large t is handled by dyadic splitting of [0, t] so the quadrature stays
// accurate out to t ~ 1e12.
FracIntegralResult frac_integral_full(const SingularFunction& rho, double beta, double t,
                                      int n_cap = 512, double rel_tol = 1e-10);
double frac_integral(const SingularFunction& rho, double beta, double t);

// Grid surrogate for the monotonicity transfer: if t^beta rho(t) is monotone
// in `direction` on the grid then y must be too. A grid on which the
// hypothesis fails yields a vacuous pass with a note.
PropertyVerdict check_monotone(const SingularFunction& rho, double beta,
                               std::span<const double> grid, Direction direction);

// Log-spaced default grid for the monotonicity checks.
std::vector<double> log_grid(double lo, double hi, int count);

struct TailLimit {
  double a = 0.0;            // lim t^beta rho(t), Aitken-estimated
  double predicted = 0.0;    // a pi / sin(beta pi)
  double extrapolated = 0.0; // Aitken over y on the ladder
  double agreement = 0.0;    // |extrapolated - predicted| / max(1, |predicted|)
  PropertyVerdict verdict;
};

// Ladder must be geometric with ratio >= 2 and at least 6 points.
TailLimit tail_limit(const SingularFunction& rho, double beta, std::span<const double> ladder);

struct TurningPoint {
  double T0 = 0.0;      // root of g(T0) = 1 in [1, 10]
  double g_at_one = 0.0;
};

// Turning point of int_0^t (t-s)^(-1/2) / (1+s) ds: bisection on
// g(t) = sqrt(t/(1+t)) log(sqrt(1+t) + sqrt(t)).
TurningPoint find_turning_point();

// Weakly singular integral inequality on (0, 1]:
//   t^(1-beta) |y(t)| <= 2^(1/q) t^(beta-1/p) / (q beta - q + 1)^(1/q)
//                        * (int_0^t s^(p(1-beta)) |rho|^p ds)^(1/p).
// A divergent L^p integral flags the verdict as not applicable.
PropertyVerdict check_weak_singular_bound(const SingularFunction& rho, double beta, double p,
                                          double t);

// t^(1-beta) y(t) sampled on a dyadic grid refining toward 0 must stay
// bounded with vanishing successive gaps.
PropertyVerdict check_weighted_continuity(const SingularFunction& rho, double beta);

}  // namespace frde
