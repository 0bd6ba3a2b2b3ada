#include "frde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "frde/special.hpp"

namespace frde {
namespace {

constexpr double kDampingTheta = 0.5;

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::string node_label(std::size_t j, double t) {
  std::ostringstream os;
  os.precision(17);
  os << "node " << j << " (t=" << t << ")";
  return os.str();
}

}  // namespace

double ProblemSpec::f(double t, double x) const {
  if (structured()) {
    const auto& s = structured_rhs();
    Bindings bx{{"x", x}};
    return s.l.rho(t) * s.phi.eval(bx) + s.k.rho(t);
  }
  Bindings b{{"t", t}, {"x", x}};
  return general_rhs().f.eval(b);
}

double ProblemSpec::delta() const {
  double alpha_l, alpha_k, mu;
  if (structured()) {
    const auto& s = structured_rhs();
    alpha_l = s.l.alpha;
    alpha_k = s.k.alpha;
    mu = s.mu;
  } else {
    const auto& g = general_rhs();
    alpha_l = g.alpha_l;
    alpha_k = g.alpha_k;
    mu = g.mu;
  }
  const double d = std::max(alpha_l + mu * (1.0 - beta), alpha_k);
  return std::clamp(d, 0.0, 1.0 - 1e-9);
}

double ProblemSpec::effective_grading() const {
  if (solver.grading > 0.0) return solver.grading;
  return std::max(2.0, 2.0 / beta);
}

double WeightedTrajectory::x_at(std::size_t j) const {
  return std::pow(t[j], beta - 1.0) * w[j];
}

// ---------------------------------------------------------------------------
// VolterraOperator

VolterraOperator::VolterraOperator(const ProblemSpec& spec, std::vector<double> nodes, Exec exec)
    : spec_(spec),
      beta_(spec.beta),
      delta_(spec.delta()),
      scale_gamma_(1.0 / gamma(spec.beta)),
      nodes_(std::move(nodes)) {
  if (nodes_.size() < 2 || nodes_.front() != 0.0)
    throw std::invalid_argument("VolterraOperator: nodes must start at t=0");
  const std::size_t m = nodes_.size();
  pow_bm1_.resize(m);
  pow_delta_.resize(m);
  prefactor_.resize(m);
  head_.resize(m);
  rows_.resize(m);
  for (std::size_t j = 1; j < m; ++j) {
    pow_bm1_[j] = std::pow(nodes_[j], beta_ - 1.0);
    pow_delta_[j] = std::pow(nodes_[j], delta_);
    prefactor_[j] = std::pow(nodes_[j], 1.0 - beta_) * scale_gamma_;
  }
  for_each_index(exec, static_cast<std::ptrdiff_t>(m) - 1,
                 [&](std::size_t idx) { build_row(idx + 1); });
}

void VolterraOperator::extend(std::span<const double> extra_nodes, Exec exec) {
  const std::size_t old = nodes_.size();
  for (double t : extra_nodes) {
    if (!(t > nodes_.back()))
      throw std::invalid_argument("VolterraOperator::extend: nodes must increase");
    nodes_.push_back(t);
    pow_bm1_.push_back(std::pow(t, beta_ - 1.0));
    pow_delta_.push_back(std::pow(t, delta_));
    prefactor_.push_back(std::pow(t, 1.0 - beta_) * scale_gamma_);
  }
  head_.resize(nodes_.size());
  rows_.resize(nodes_.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(nodes_.size() - old),
                 [&](std::size_t idx) { build_row(old + idx); });
}

double VolterraOperator::head_integral(std::size_t j) const {
  const double t1 = nodes_[1];
  const double tj = nodes_[j];
  auto f_initial = [&](double s) { return spec_.f(s, spec_.x0 * std::pow(s, beta_ - 1.0)); };
  if (j == 1) {
    // Kernel singular at both ends of [0, t_1]: push the s^(-delta) part of
    // f into the quadrature weight and keep the smoothed factor.
    QuadResult q = integrate_singular(
        [&](double u) { return std::pow(u, delta_) * f_initial(t1 * u); }, beta_ - 1.0,
        -delta_, 512, 1e-12);
    return std::pow(t1, beta_) * q.value;
  }
  // sigma = u^delta f(t1 u) stays bounded at u = 0; the u^(-delta) weight
  // puts the singular measure into the rule, so the plain substitution
  // factor t1 closes the change of variables.
  QuadResult q = integrate_singular(
      [&](double u) {
        return std::pow(tj - t1 * u, beta_ - 1.0) * std::pow(u, delta_) * f_initial(t1 * u);
      },
      0.0, -delta_, 512, 1e-12);
  return t1 * q.value;
}

// C_left and C_right of panel [t_i, t_{i+1}] for row j: integrals of the
// kernel (t_j-s)^(beta-1) s^(-delta) against the two linear hat factors.
std::pair<double, double> VolterraOperator::panel_coefficients(std::size_t i,
                                                               std::size_t j) const {
  const double ti = nodes_[i], tip = nodes_[i + 1], tj = nodes_[j];
  const double width = tip - ti;
  double cl = 0.0, cr = 0.0;
  if (i + 1 == j) {
    // Touching panel: substitute s = t_j - width*wv, kernel weight w^(beta-1).
    const double scale = std::pow(width, beta_);
    QuadResult ql = integrate_singular(
        [&](double wv) { return wv * std::pow(tj - width * wv, -delta_); }, 0.0, beta_ - 1.0,
        512, 1e-12);
    QuadResult qr = integrate_singular(
        [&](double wv) { return (1.0 - wv) * std::pow(tj - width * wv, -delta_); }, 0.0,
        beta_ - 1.0, 512, 1e-12);
    cl = scale * ql.value;
    cr = scale * qr.value;
  } else {
    QuadResult ql = integrate_singular(
        [&](double u) {
          const double s = ti + width * u;
          return std::pow(tj - s, beta_ - 1.0) * std::pow(s, -delta_) * (1.0 - u);
        },
        0.0, 0.0, 512, 1e-12);
    QuadResult qr = integrate_singular(
        [&](double u) {
          const double s = ti + width * u;
          return std::pow(tj - s, beta_ - 1.0) * std::pow(s, -delta_) * u;
        },
        0.0, 0.0, 512, 1e-12);
    cl = width * ql.value;
    cr = width * qr.value;
  }
  return {cl, cr};
}

void VolterraOperator::build_row(std::size_t j) {
  head_[j] = head_integral(j);
  auto& row = rows_[j];
  row.assign(j, 0.0);
  for (std::size_t i = 1; i < j; ++i) {
    const auto [cl, cr] = panel_coefficients(i, j);
    row[i - 1] += cl;
    row[i] += cr;
  }
}

double VolterraOperator::weighted_g(std::size_t j, double w_j) const {
  const double t = nodes_[j];
  const double x = pow_bm1_[j] * w_j;
  try {
    return pow_delta_[j] * spec_.f(t, x);
  } catch (const EvalError& e) {
    throw SolverError(std::string("expression domain error at ") + node_label(j, t) + ": " +
                      e.what());
  }
}

std::vector<double> VolterraOperator::apply(std::span<const double> w, Exec exec) const {
  const std::size_t m = nodes_.size();
  if (w.size() != m) throw std::invalid_argument("VolterraOperator::apply: size mismatch");
  std::vector<double> g(m, 0.0);
  for (std::size_t j = 1; j < m; ++j) g[j] = weighted_g(j, w[j]);

  std::vector<double> out(m, 0.0);
  out[0] = spec_.x0;
  for_each_index(exec, static_cast<std::ptrdiff_t>(m) - 1, [&](std::size_t idx) {
    const std::size_t j = idx + 1;
    double h = head_[j];
    const auto& row = rows_[j];
    for (std::size_t i = 1; i <= j; ++i) h += row[i - 1] * g[i];
    out[j] = spec_.x0 + prefactor_[j] * h;
  });
  return out;
}

double VolterraOperator::residual_sup(std::span<const double> w, Exec exec) const {
  std::vector<double> fw = apply(w, exec);
  return sup_diff(fw, w);
}

double VolterraOperator::solve_node(std::size_t j, std::span<const double> g_prefix,
                                    double w_init, double tol, int max_iter,
                                    double* g_out) const {
  if (j < 1 || g_prefix.size() != j)
    throw std::invalid_argument("VolterraOperator::solve_node: bad prefix");
  double frozen = head_[j];
  const auto& row = rows_[j];
  for (std::size_t i = 1; i < j; ++i) frozen += row[i - 1] * g_prefix[i];
  const double self_coef = j >= 2 ? row[j - 1] : 0.0;

  auto rhs = [&](double wv) {
    return spec_.x0 + prefactor_[j] * (frozen + self_coef * weighted_g(j, wv));
  };

  if (self_coef == 0.0) {
    const double w = rhs(0.0);
    if (g_out) *g_out = weighted_g(j, w);
    return w;
  }

  // Plain fixed point, damped on stall.
  double w = w_init;
  double theta = 1.0;
  double best_delta = std::numeric_limits<double>::infinity();
  int since_improvement = 0;
  for (int it = 0; it < max_iter; ++it) {
    double next;
    try {
      next = theta * rhs(w) + (1.0 - theta) * w;
    } catch (const SolverError&) {
      break;  // iterate left the domain of f; fall through to bisection
    }
    const double delta = std::abs(next - w);
    w = next;
    if (!std::isfinite(w)) break;
    if (delta <= tol * std::max(1.0, std::abs(w))) {
      if (g_out) *g_out = weighted_g(j, w);
      return w;
    }
    if (delta < 0.9 * best_delta) {
      best_delta = delta;
      since_improvement = 0;
    } else if (++since_improvement >= 8) {
      if (theta == 1.0) {
        theta = kDampingTheta;
        since_improvement = 0;
        best_delta = std::numeric_limits<double>::infinity();
      } else {
        break;
      }
    }
  }

  // Safeguarded bisection on psi(w) = w - rhs(w) with an expanding bracket.
  auto psi = [&](double wv) { return wv - rhs(wv); };
  double center = std::isfinite(w) ? w : w_init;
  double radius = std::max(1.0, std::abs(center));
  double lo = center, hi = center;
  double flo = 0.0, fhi = 0.0;
  bool bracketed = false;
  for (int k = 0; k < 64; ++k) {
    lo = center - radius;
    hi = center + radius;
    try {
      flo = psi(lo);
      fhi = psi(hi);
    } catch (const SolverError&) {
      radius *= 0.5;  // domain edge; shrink instead of grow
      if (radius < 1e-12) break;
      continue;
    }
    if (std::isfinite(flo) && std::isfinite(fhi) && flo * fhi <= 0.0) {
      bracketed = true;
      break;
    }
    radius *= 2.0;
  }
  if (!bracketed)
    throw SolverError("scalar iteration diverged at " + node_label(j, nodes_[j]));
  for (int k = 0; k < 200 && hi - lo > tol * std::max(1.0, std::abs(hi)); ++k) {
    const double mid = 0.5 * (lo + hi);
    double fm;
    try {
      fm = psi(mid);
    } catch (const SolverError&) {
      throw SolverError("scalar iteration diverged at " + node_label(j, nodes_[j]));
    }
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  w = 0.5 * (lo + hi);
  if (g_out) *g_out = weighted_g(j, w);
  return w;
}

// ---------------------------------------------------------------------------
// driver routines

namespace {

// Deterministic forward substitution: the discrete system is lower
// triangular in j, so one sweep of scalar solves lands on the fixed point.
void forward_sweep(const VolterraOperator& op, std::vector<double>& w, double tol) {
  const std::size_t m = op.size();
  std::vector<double> g(m, 0.0);
  for (std::size_t j = 1; j < m; ++j) {
    double gj = 0.0;
    w[j] = op.solve_node(j, std::span<const double>(g.data(), j), w[j - 1],
                         std::min(tol, 1e-12), 200, &gj);
    g[j] = gj;
  }
}

std::vector<double> geometric_nodes_between(double from, double to, double ratio) {
  if (!(ratio > 1.0)) throw std::domain_error("extension ratio must exceed 1");
  std::vector<double> out;
  double t = from;
  while (t * ratio < to * (1.0 - 1e-12)) {
    t *= ratio;
    out.push_back(t);
  }
  out.push_back(to);
  return out;
}

}  // namespace

WeightedTrajectory solve_picard(const ProblemSpec& spec, const GradedMesh& mesh, double tol,
                                int max_iter, Exec exec) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_picard: tol must be positive");
  VolterraOperator op(spec, mesh.nodes(), exec);
  const std::size_t m = op.size();

  std::vector<double> w(m, spec.x0);
  std::vector<double> history;
  bool converged = false;
  double theta = 1.0;
  double best_delta = std::numeric_limits<double>::infinity();
  int since_improvement = 0;

  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> next = op.apply(w, exec);
    if (theta != 1.0)
      for (std::size_t i = 0; i < m; ++i) next[i] = theta * next[i] + (1.0 - theta) * w[i];
    const double delta = sup_diff(next, w);
    history.push_back(delta);
    w = std::move(next);
    if (delta <= tol) {
      converged = true;
      break;
    }
    if (delta < 0.9 * best_delta) {
      best_delta = delta;
      since_improvement = 0;
    } else if (++since_improvement >= 10) {
      if (theta == 1.0) {
        theta = kDampingTheta;
        since_improvement = 0;
        best_delta = std::numeric_limits<double>::infinity();
      } else {
        break;  // damped iteration is stalling too
      }
    }
    if (!std::isfinite(delta)) break;
  }

  if (!converged) forward_sweep(op, w, tol);

  WeightedTrajectory traj;
  traj.beta = spec.beta;
  traj.x0 = spec.x0;
  traj.t = op.nodes();
  traj.w = w;
  traj.graded_count = std::min(traj.t.size(), static_cast<std::size_t>(mesh.N) + 1);
  traj.residual = op.residual_sup(w, exec);
  if (!(traj.residual <= 10.0 * tol))
    throw SolverError("Picard iteration failed to reach the residual contract", history);
  return traj;
}

WeightedTrajectory march_extend(const ProblemSpec& spec, const WeightedTrajectory& traj,
                                double new_T, Exec exec) {
  if (!(new_T > traj.t.back()))
    throw std::invalid_argument("march_extend: new endpoint must exceed current endpoint");

  VolterraOperator op(spec, traj.t, exec);
  const std::vector<double> extra =
      geometric_nodes_between(traj.t.back(), new_T, spec.solver.ratio);
  op.extend(extra, exec);

  WeightedTrajectory out = traj;
  out.t = op.nodes();
  out.w.resize(out.t.size());

  std::vector<double> g(out.t.size(), 0.0);
  for (std::size_t j = 1; j < traj.t.size(); ++j) g[j] = op.weighted_g(j, out.w[j]);
  for (std::size_t j = traj.t.size(); j < out.t.size(); ++j) {
    double gj = 0.0;
    out.w[j] = op.solve_node(j, std::span<const double>(g.data(), j), out.w[j - 1],
                             std::min(spec.solver.tol, 1e-12), 200, &gj);
    g[j] = gj;
  }
  out.residual = op.residual_sup(out.w, exec);
  return out;
}

WeightedTrajectory solve_full(const ProblemSpec& spec, Exec exec) {
  GradedMesh mesh;
  mesh.T = spec.solver.T0;
  mesh.N = spec.solver.N;
  mesh.grading = spec.effective_grading();
  WeightedTrajectory traj = solve_picard(spec, mesh, spec.solver.tol, spec.solver.max_iter, exec);
  if (spec.solver.Tmax > spec.solver.T0)
    traj = march_extend(spec, traj, spec.solver.Tmax, exec);
  return traj;
}

// ---------------------------------------------------------------------------
// audits

namespace audit {

PropertyVerdict phi_hypothesis(const StructuredRhs& rhs, bool ask_monotone) {
  PropertyVerdict v;
  v.property = ask_monotone ? "phi nonnegative, nondecreasing, growth-bounded"
                            : "phi nonnegative and growth-bounded";
  v.tolerance = 1e-9;
  std::vector<double> xs;
  xs.push_back(0.0);
  for (double x : log_grid(1e-6, 1e6, 241)) xs.push_back(x);

  std::vector<double> phis(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Bindings b{{"x", xs[i]}};
    phis[i] = rhs.phi.eval(b);
  }
  double scale = 0.0;
  for (double p : phis) scale = std::max(scale, std::abs(p));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (phis[i] < -1e-12 * std::max(1.0, scale)) {
      v.pass = false;
      v.witness = "phi negative at x=" + std::to_string(xs[i]);
      return v;
    }
    if (ask_monotone && i > 0 && phis[i] < phis[i - 1] - v.tolerance * std::max(1.0, scale)) {
      v.pass = false;
      v.witness = "phi decreases at x=" + std::to_string(xs[i]);
      return v;
    }
  }
  // Fit the growth constant on every other point, margin-check on all.
  double m_fit = 0.0;
  for (std::size_t i = 0; i < xs.size(); i += 2) {
    if (xs[i] == 0.0) continue;
    m_fit = std::max(m_fit, phis[i] / std::pow(xs[i], rhs.mu));
  }
  const double m_bound = 1.05 * m_fit + 1e-12;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // pow(0, 0) = 1 keeps constant bounds valid at the origin; mu > 0
    // forces phi(0) = 0
    const double cap = m_bound * std::pow(xs[i], rhs.mu);
    if (phis[i] > cap * (1.0 + v.tolerance) + 1e-12) {
      v.pass = false;
      v.witness = "phi exceeds M x^mu at x=" + std::to_string(xs[i]);
      return v;
    }
  }
  v.pass = true;
  return v;
}

PropertyVerdict weighted_monotone(const SingularFunction& fn, double beta,
                                  const std::string& name) {
  PropertyVerdict v;
  v.property = name + " weighted by t^beta is nonnegative and nonincreasing";
  v.tolerance = 1e-9;
  const std::vector<double> grid = log_grid(1e-6, 1e6, 241);
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    vals[i] = std::pow(grid[i], beta) * fn.rho(grid[i]);
  double scale = 0.0;
  for (double x : vals) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (vals[i] < -1e-12 * std::max(1.0, scale)) {
      v.pass = false;
      v.witness = "negative at t=" + std::to_string(grid[i]);
      return v;
    }
    if (i > 0 && vals[i] > vals[i - 1] + v.tolerance * std::max(1.0, scale)) {
      v.pass = false;
      v.witness = "increases at t=" + std::to_string(grid[i]);
      return v;
    }
  }
  v.pass = true;
  return v;
}

bool is_zero_function(const SingularFunction& fn) {
  for (double t : {1e-6, 0.1, 1.0, 17.0, 1e5})
    if (fn.rho(t) != 0.0) return false;
  return true;
}

}  // namespace audit

std::vector<PropertyVerdict> verify_solution(const ProblemSpec& spec,
                                             const WeightedTrajectory& traj) {
  std::vector<PropertyVerdict> out;
  bool hypotheses_pass = false;

  if (spec.structured()) {
    const auto& rhs = spec.structured_rhs();
    PropertyVerdict vphi = audit::phi_hypothesis(rhs);
    PropertyVerdict vl = audit::weighted_monotone(rhs.l, spec.beta, "l");
    PropertyVerdict vk;
    if (audit::is_zero_function(rhs.k)) {
      vk.property = "k weighted by t^beta is nonnegative and nonincreasing";
      vk.pass = true;
      vk.note = "k vanishes identically";
    } else {
      vk = audit::weighted_monotone(rhs.k, spec.beta, "k");
    }
    hypotheses_pass = vphi.pass && vl.pass && vk.pass;
    out.push_back(std::move(vphi));
    out.push_back(std::move(vl));
    out.push_back(std::move(vk));
  } else {
    PropertyVerdict v;
    v.property = "hypothesis audit";
    v.pass = true;
    v.note = "general right-hand side: monotone hypotheses not applicable";
    out.push_back(std::move(v));
  }

  PropertyVerdict conclusion;
  conclusion.property = "solution positive and nonincreasing";
  conclusion.tolerance = 1e-8;
  if (!hypotheses_pass) {
    conclusion.pass = true;
    conclusion.note = "skipped: hypothesis audit did not pass";
  } else {
    conclusion.pass = true;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < traj.t.size(); ++j) {
      const double x = traj.x_at(j);
      if (!(x > 0.0)) {
        conclusion.pass = false;
        conclusion.witness = "x not positive at " + node_label(j, traj.t[j]);
        break;
      }
      if (x > prev + conclusion.tolerance * std::max(1.0, std::abs(prev))) {
        conclusion.pass = false;
        conclusion.witness = "x increases at " + node_label(j, traj.t[j]);
        break;
      }
      prev = x;
    }
  }
  out.push_back(std::move(conclusion));

  PropertyVerdict residual;
  residual.property = "Volterra residual within contract";
  residual.tolerance = 10.0 * spec.solver.tol;
  residual.pass = traj.residual <= residual.tolerance;
  if (!residual.pass) {
    std::ostringstream os;
    os.precision(17);
    os << "residual " << traj.residual;
    residual.witness = os.str();
  }
  out.push_back(std::move(residual));
  return out;
}

void write_csv(const WeightedTrajectory& traj, std::ostream& os) {
  os << "t,w,x\n";
  char buf[256];
  for (std::size_t j = 0; j < traj.t.size(); ++j) {
    const double x = j == 0 ? std::numeric_limits<double>::infinity() : traj.x_at(j);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", traj.t[j], traj.w[j], x);
    os << buf;
  }
}

}  // namespace frde
