#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "frde/expr.hpp"
#include "frde/fracint.hpp"
#include "frde/parallel.hpp"
#include "frde/quadrature.hpp"

namespace frde {

// Bounding envelopes l1 x^mu + k1 <= f <= l x^mu + k used by the sandwich
// classification; all four are expressions in t.
struct Envelopes {
  Expr l, l1, k, k1;
  double mu = 0.0;
  double gamma_exp = 0.0;  // decay exponent with gamma_exp > beta
};

struct StructuredRhs {
  SingularFunction l;  // coefficient of phi(x)
  Expr phi;            // in x
  SingularFunction k;  // forcing term
  double mu = 0.0;     // growth exponent of phi
};

struct GeneralRhs {
  Expr f;  // in (t, x)
  double alpha_l = 0.0;
  double alpha_k = 0.0;
  double mu = 0.0;
};

struct SolverParams {
  double T0 = 10.0;
  double Tmax = 1e6;
  int N = 256;
  double grading = 0.0;  // <= 0 selects max(2, 2/beta)
  double ratio = 1.25;
  double tol = 1e-10;
  int max_iter = 200;
};

// Weighted Cauchy problem: D^beta x = f(t, x) with lim t^(1-beta) x(t) = x0.
struct ProblemSpec {
  double beta = 0.5;
  double x0 = 1.0;
  std::variant<StructuredRhs, GeneralRhs> rhs;
  std::optional<Envelopes> envelopes;
  std::optional<double> gamma_exp;  // tail decay exponent for non-monotone audits
  SolverParams solver;

  bool structured() const { return std::holds_alternative<StructuredRhs>(rhs); }
  const StructuredRhs& structured_rhs() const { return std::get<StructuredRhs>(rhs); }
  const GeneralRhs& general_rhs() const { return std::get<GeneralRhs>(rhs); }

  double f(double t, double x) const;
  // Left singularity exponent of f(t, x(t)) near 0 given the declared
  // exponents: max(alpha_l + mu (1-beta), alpha_k), clamped into [0, 1).
  double delta() const;
  double effective_grading() const;
};

struct WeightedTrajectory {
  double beta = 0.0;
  double x0 = 0.0;
  std::vector<double> t;  // t[0] = 0
  std::vector<double> w;  // w[0] = x0, w(t) = t^(1-beta) x(t)
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::size_t graded_count = 0;  // nodes belonging to the graded section

  double x_at(std::size_t j) const;  // t_j^(beta-1) w_j, j >= 1
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> residual_history = {})
      : std::runtime_error(what), residual_history_(std::move(residual_history)) {}
  const std::vector<double>& residual_history() const noexcept { return residual_history_; }

 private:
  std::vector<double> residual_history_;
};

// Discrete Volterra operator on a fixed node set:
//   (F w)_j = x0 + t_j^(1-beta)/Gamma(beta) * H_j,
// where H_j approximates int_0^{t_j} (t_j - s)^(beta-1) f(s, x(s)) ds by
// product integration: on each panel f is s^(-delta) times the linear
// interpolant of s^delta f(s, x(s)), with panel moments computed by
// Gauss-Jacobi rules. The first panel [0, t_1] is integrated against the
// exact profile x = x0 s^(beta-1) and frozen, since w is continuous at 0.
class VolterraOperator {
 public:
  VolterraOperator(const ProblemSpec& spec, std::vector<double> nodes,
                   Exec exec = Exec::parallel);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }

  void extend(std::span<const double> extra_nodes, Exec exec = Exec::parallel);

  std::vector<double> apply(std::span<const double> w, Exec exec = Exec::parallel) const;
  double residual_sup(std::span<const double> w, Exec exec = Exec::parallel) const;

  // Scalar solve for node j given g-values of nodes < j; appends g_j.
  // Fixed-point iteration with damping, then safeguarded bisection.
  double solve_node(std::size_t j, std::span<const double> g_prefix, double w_init,
                    double tol, int max_iter, double* g_out) const;

  double weighted_g(std::size_t j, double w_j) const;  // t_j^delta f(t_j, x_j)

 private:
  void build_row(std::size_t j);
  double head_integral(std::size_t j) const;
  std::pair<double, double> panel_coefficients(std::size_t i, std::size_t j) const;

  ProblemSpec spec_;
  double beta_, delta_, scale_gamma_;
  std::vector<double> nodes_;
  std::vector<double> pow_bm1_, pow_delta_, prefactor_;
  std::vector<double> head_;               // frozen [0, t_1] contribution per row
  std::vector<std::vector<double>> rows_;  // rows_[j][i-1] multiplies g_i, i = 1..j
};

// Picard iteration from w = x0; switches to damped iteration on stall and to
// a node-by-node forward sweep when the damped iteration also stalls.
WeightedTrajectory solve_picard(const ProblemSpec& spec, const GradedMesh& mesh,
                                double tol = 1e-10, int max_iter = 200,
                                Exec exec = Exec::parallel);

// Appends geometric nodes up to new_T, solving one scalar equation per node
// against the frozen history.
WeightedTrajectory march_extend(const ProblemSpec& spec, const WeightedTrajectory& traj,
                                double new_T, Exec exec = Exec::parallel);

// Mesh from spec.solver, Picard solve on [0, T0], then extension to Tmax.
WeightedTrajectory solve_full(const ProblemSpec& spec, Exec exec = Exec::parallel);

// Hypothesis audit (phi, l, k), monotone-positive conclusion, and the
// Volterra residual contract.
std::vector<PropertyVerdict> verify_solution(const ProblemSpec& spec,
                                             const WeightedTrajectory& traj);

namespace audit {

// phi >= 0 with phi <= M x^mu (M fitted on a coarse grid, margin-checked on
// a fine one); monotonicity of phi is required only when ask_monotone.
PropertyVerdict phi_hypothesis(const StructuredRhs& rhs, bool ask_monotone = true);

// t^beta fn(t) nonnegative and nonincreasing on a log grid.
PropertyVerdict weighted_monotone(const SingularFunction& fn, double beta,
                                  const std::string& name);

// fn evaluates to exactly zero on a probe set.
bool is_zero_function(const SingularFunction& fn);

}  // namespace audit

// CSV with header "t,w,x", one row per node, 17 significant digits.
void write_csv(const WeightedTrajectory& traj, std::ostream& os);

}  // namespace frde
