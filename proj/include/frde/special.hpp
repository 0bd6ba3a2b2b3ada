#pragma once

namespace frde {

// Gamma function for positive real arguments.
// Relative error stays below 1e-12 on (0, 50].
double gamma(double x);

// log(Gamma(x)) for x > 0; usable where gamma() would overflow.
double log_gamma(double x);

// Euler beta integral B(a, b) = Gamma(a) Gamma(b) / Gamma(a+b), a, b > 0.
// Evaluation order is symmetric in (a, b).
double beta_fn(double a, double b);

// pi / sin(beta pi) = B(beta, 1-beta) for beta in (0, 1).
double resolvent_constant(double beta);

// Closed form of the convolution moment
//   int_0^t (t-s)^(beta-1) s^(gamma-1) ds = B(beta, gamma) t^(beta+gamma-1)
// for beta in (0, 1), gamma_exp > 0, t > 0.
double power_kernel_integral(double beta, double gamma_exp, double t);

}  // namespace frde
