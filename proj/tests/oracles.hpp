#pragma once

// Test-only oracles, independent of the library implementation paths:
//  - double-double arithmetic (~32 significant digits)
//  - Gamma via argument shifting + Stirling series at double-double precision
//  - adaptive Simpson quadrature
//  - plain bisection
// Used to compute and re-verify the frozen expected values in the tests.

#include <cmath>
#include <functional>

namespace oracle {

struct dd {
  double hi = 0.0;
  double lo = 0.0;
  dd() = default;
  dd(double h) : hi(h), lo(0.0) {}
  dd(double h, double l) : hi(h), lo(l) {}
  double to_double() const { return hi + lo; }
};

dd dd_add(dd a, dd b);
dd dd_sub(dd a, dd b);
dd dd_mul(dd a, dd b);
dd dd_div(dd a, dd b);
dd dd_neg(dd a);
dd dd_exp(dd x);
dd dd_ln(dd x);

// Gamma and log-Gamma for positive arguments, accurate to ~1e-30 relative.
dd gamma_dd(double x);
dd lgamma_dd(double x);

inline double gamma_value(double x) { return gamma_dd(x).to_double(); }

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12);

// Bisection for g(x) = 0 given a sign-changing bracket.
double bisect(const std::function<double(double)>& g, double lo, double hi,
              double tol = 1e-13);

}  // namespace oracle
