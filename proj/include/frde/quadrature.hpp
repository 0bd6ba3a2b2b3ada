#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace frde {

// Gauss-Jacobi rule on [0, 1] against the weight (1-v)^a v^b, a, b > -1.
// Exact for polynomial sigma of degree <= 2n-1.
struct JacobiRule {
  int n = 0;
  double exponent_a = 0.0;
  double exponent_b = 0.0;
  std::vector<double> nodes;    // strictly increasing, all in (0, 1)
  std::vector<double> weights;  // all positive, sum = B(a+1, b+1)
};

JacobiRule jacobi_rule(int n, double a, double b);

// Shared cache of built rules; rules are immutable and safe to share.
const JacobiRule& jacobi_rule_cached(int n, double a, double b);

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int nodes_used = 0;
  bool converged = false;
};

// int_0^1 (1-v)^a v^b sigma(v) dv with sigma continuous on [0, 1].
// Doubles the node count (8, 16, ..., n_cap) until two successive values
// agree to rel_tol; a run that hits the cap comes back flagged, not thrown.
template <typename Sigma>
QuadResult integrate_singular(Sigma&& sigma, double a, double b, int n_cap = 512,
                              double rel_tol = 1e-10) {
  if (!(a > -1.0) || !(b > -1.0))
    throw std::domain_error("integrate_singular: weight exponents must exceed -1");
  if (n_cap < 8) n_cap = 8;
  QuadResult out;
  double prev = std::nan("");
  for (int n = 8; n <= n_cap; n *= 2) {
    const JacobiRule& rule = jacobi_rule_cached(n, a, b);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * sigma(rule.nodes[i]);
    out.value = sum;
    out.nodes_used = n;
    if (!std::isnan(prev)) {
      out.error_estimate = std::abs(sum - prev);
      if (out.error_estimate <= rel_tol * std::abs(sum) ||
          (sum == 0.0 && out.error_estimate == 0.0)) {
        out.converged = true;
        return out;
      }
    }
    prev = sum;
  }
  return out;  // converged stays false
}

// Mesh graded toward zero, t_j = T (j/N)^grading for j = 0..N, optionally
// extended past T by a geometric tail T q, T q^2, ... (ext_count nodes).
struct GradedMesh {
  double T = 10.0;
  int N = 256;
  double grading = 2.0;
  double ext_ratio = 0.0;
  int ext_count = 0;

  std::vector<double> nodes() const;
};

}  // namespace frde
