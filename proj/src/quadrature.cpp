#include "frde/quadrature.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "frde/special.hpp"

namespace frde {
namespace {

// Minimal compensated (double-double) arithmetic for the root polish below.
// Plain double Newton leaves the endpoint-clustered roots with ~1e-14
// absolute error, which the large endpoint weights amplify to ~1e-9 in the
// weight sum at n = 512; evaluating the recurrence in compensated arithmetic
// for the final steps removes that.
struct Dd {
  double hi = 0.0;
  double lo = 0.0;
  Dd() = default;
  Dd(double h) : hi(h) {}
  Dd(double h, double l) : hi(h), lo(l) {}
  double value() const { return hi + lo; }
};

inline void two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  const double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
}

inline void quick_two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  err = b - (s - a);
}

inline void two_prod(double a, double b, double& p, double& err) {
  p = a * b;
  const double split = 134217729.0;  // 2^27 + 1
  const double ta = split * a, tb = split * b;
  const double ahi = ta - (ta - a), alo = a - ahi;
  const double bhi = tb - (tb - b), blo = b - bhi;
  err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
}

Dd dd_add(Dd a, Dd b) {
  double s1, s2, t1, t2;
  two_sum(a.hi, b.hi, s1, s2);
  two_sum(a.lo, b.lo, t1, t2);
  s2 += t1;
  quick_two_sum(s1, s2, s1, s2);
  s2 += t2;
  quick_two_sum(s1, s2, s1, s2);
  return {s1, s2};
}

Dd dd_sub(Dd a, Dd b) { return dd_add(a, Dd{-b.hi, -b.lo}); }

Dd dd_mul(Dd a, Dd b) {
  double p1, p2;
  two_prod(a.hi, b.hi, p1, p2);
  p2 += a.hi * b.lo + a.lo * b.hi;
  quick_two_sum(p1, p2, p1, p2);
  return {p1, p2};
}

Dd dd_div(Dd a, Dd b) {
  const double q1 = a.hi / b.hi;
  Dd r = dd_sub(a, dd_mul(Dd(q1), b));
  const double q2 = r.hi / b.hi;
  r = dd_sub(r, dd_mul(Dd(q2), b));
  const double q3 = r.hi / b.hi;
  double s1, s2;
  quick_two_sum(q1, q2, s1, s2);
  return dd_add(Dd{s1, s2}, Dd(q3));
}

struct JacobiEval {
  Dd value;       // P_n(z)
  Dd value_prev;  // P_{n-1}(z)
  Dd derivative;  // P_n'(z)
};

// Recurrence with the coefficients themselves built in compensated
// arithmetic. Coefficient rounding at double precision perturbs the
// evaluated polynomial with an O(1/(1-z^2)) amplification near the
// endpoints, which caps the endpoint weights at ~1e-11; error-free
// coefficient sums remove that.
JacobiEval evaluate_jacobi(int n, double a, double b, Dd z) {
  const Dd ab = dd_add(Dd(a), Dd(b));
  const Dd a_minus_b = dd_sub(Dd(a), Dd(b));
  const Dd a2_minus_b2 = dd_mul(a_minus_b, dd_add(Dd(a), Dd(b)));
  Dd temp = dd_add(Dd(2.0), ab);
  Dd p1 = dd_mul(Dd(0.5), dd_add(a_minus_b, dd_mul(temp, z)));
  Dd p2{1.0};
  for (int j = 2; j <= n; ++j) {
    const Dd p3 = p2;
    p2 = p1;
    temp = dd_add(Dd(2.0 * j), ab);
    const Dd temp_m2 = dd_sub(temp, Dd(2.0));
    const Dd aa =
        dd_mul(Dd(2.0 * j), dd_mul(dd_add(Dd(static_cast<double>(j)), ab), temp_m2));
    const Dd bb = dd_mul(dd_sub(temp, Dd(1.0)),
                         dd_add(a2_minus_b2, dd_mul(dd_mul(temp, temp_m2), z)));
    const Dd cc = dd_mul(Dd(2.0), dd_mul(dd_add(Dd(j - 1.0), Dd(a)),
                                         dd_mul(dd_add(Dd(j - 1.0), Dd(b)), temp)));
    p1 = dd_div(dd_sub(dd_mul(bb, p2), dd_mul(cc, p3)), aa);
  }
  Dd numerator =
      dd_add(dd_mul(Dd(static_cast<double>(n)),
                    dd_mul(dd_sub(a_minus_b, dd_mul(temp, z)), p1)),
             dd_mul(dd_mul(Dd(2.0), dd_mul(dd_add(Dd(static_cast<double>(n)), Dd(a)),
                                           dd_add(Dd(static_cast<double>(n)), Dd(b)))),
                    p2));
  Dd one_minus_z2 = dd_mul(dd_sub(Dd(1.0), z), dd_add(Dd(1.0), z));
  Dd derivative = dd_div(numerator, dd_mul(temp, one_minus_z2));
  return {p1, p2, derivative};
}

// Roots of P_n^{(a,b)} on [-1, 1] by Newton iteration, largest root first.
// Initial guesses follow the classical recipe (Stroud-style, as in gaujac);
// quadratic extrapolation covers the interior roots. A compensated polish
// finishes each root so the weights come out to near machine precision.
void jacobi_nodes_weights(int n, double a, double b, std::vector<double>& x,
                          std::vector<double>& w) {
  constexpr double kTol = 1e-14;
  constexpr int kMaxNewton = 40;
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double alfbet = a + b;
  // Gamma(a+n) Gamma(b+n) / (Gamma(n+1) Gamma(n+a+b+1)) as a compensated
  // running product; the lgamma route loses ~1e-11 through cancellation of
  // the large logs at n = 512.
  Dd gamma_ratio(beta_fn(a + 1.0, b + 1.0));
  for (int j = 1; j < n; ++j) {
    const Dd num = dd_mul(dd_add(Dd(a), Dd(static_cast<double>(j))),
                          dd_add(Dd(b), Dd(static_cast<double>(j))));
    const Dd den = dd_mul(Dd(j + 1.0), dd_add(dd_add(Dd(a), Dd(b)), Dd(j + 1.0)));
    gamma_ratio = dd_mul(gamma_ratio, dd_div(num, den));
  }
  const Dd weight_prefactor =
      dd_mul(gamma_ratio, Dd((2.0 * n + alfbet) * std::pow(2.0, alfbet)));

  for (int i = 1; i <= n; ++i) {
    double z;
    if (i == 1) {
      const double an = a / n, bn = b / n;
      const double r1 = (1.0 + a) * (2.78 / (4.0 + n * n) + 0.768 * an / n);
      const double r2 = 1.0 + 1.48 * an + 0.96 * bn + 0.452 * an * an + 0.83 * an * bn;
      z = 1.0 - r1 / r2;
    } else if (i == 2) {
      const double r1 = (4.1 + a) / ((1.0 + a) * (1.0 + 0.156 * a));
      const double r2 = 1.0 + 0.06 * (n - 8.0) * (1.0 + 0.12 * a) / n;
      const double r3 = 1.0 + 0.012 * b * (1.0 + 0.25 * std::abs(a)) / n;
      z = x[0] - (1.0 - x[0]) * r1 * r2 * r3;
    } else if (i == 3) {
      const double r1 = (1.67 + 0.28 * a) / (1.0 + 0.37 * a);
      const double r2 = 1.0 + 0.22 * (n - 8.0) / n;
      const double r3 = 1.0 + 8.0 * b / ((6.28 + b) * n * n);
      z = x[1] - (x[0] - x[1]) * r1 * r2 * r3;
    } else if (i == n - 1) {
      const double r1 = (1.0 + 0.235 * b) / (0.766 + 0.119 * b);
      const double r2 = 1.0 / (1.0 + 0.639 * (n - 4.0) / (1.0 + 0.71 * (n - 4.0)));
      const double r3 = 1.0 / (1.0 + 20.0 * a / ((7.5 + a) * n * n));
      z = x[i - 2] + (x[i - 2] - x[i - 3]) * r1 * r2 * r3;
    } else if (i == n) {
      const double r1 = (1.0 + 0.37 * b) / (1.67 + 0.28 * b);
      const double r2 = 1.0 / (1.0 + 0.22 * (n - 8.0) / n);
      const double r3 = 1.0 / (1.0 + 8.0 * a / ((6.28 + a) * n * n));
      z = x[i - 2] + (x[i - 2] - x[i - 3]) * r1 * r2 * r3;
    } else {
      z = 3.0 * x[i - 2] - 3.0 * x[i - 3] + x[i - 4];
    }

    // double-precision Newton to ~1e-14 node residual
    for (int its = 1; its <= kMaxNewton; ++its) {
      double temp = 2.0 + alfbet;
      double p1 = (a - b + temp * z) / 2.0;
      double p2 = 1.0;
      for (int j = 2; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        temp = 2.0 * j + alfbet;
        const double aa = 2.0 * j * (j + alfbet) * (temp - 2.0);
        const double bb = (temp - 1.0) * (a * a - b * b + temp * (temp - 2.0) * z);
        const double cc = 2.0 * (j - 1 + a) * (j - 1 + b) * temp;
        p1 = (bb * p2 - cc * p3) / aa;
      }
      const double pp = (n * (a - b - temp * z) * p1 + 2.0 * (n + a) * (n + b) * p2) /
                        (temp * (1.0 - z * z));
      const double step = p1 / pp;
      z -= step;
      if (std::abs(step) <= kTol) break;
    }

    // compensated Newton polish to ~1e-22 node residual; the double phase
    // can leave clustered near-endpoint roots short of full precision
    Dd zd(z);
    JacobiEval e = evaluate_jacobi(n, a, b, zd);
    for (int its = 0; its < 16; ++its) {
      const Dd step = dd_div(e.value, e.derivative);
      zd = dd_sub(zd, step);
      e = evaluate_jacobi(n, a, b, zd);
      if (std::abs(step.value()) <= 1e-22 * std::max(1.0, std::abs(zd.value()))) break;
    }

    x[i - 1] = zd.value();
    w[i - 1] = dd_div(weight_prefactor, dd_mul(e.derivative, e.value_prev)).value();
  }
}

}  // namespace

JacobiRule jacobi_rule(int n, double a, double b) {
  if (n < 1) throw std::domain_error("jacobi_rule: node count must be >= 1");
  if (!(a > -1.0) || !(b > -1.0))
    throw std::domain_error("jacobi_rule: weight exponents must exceed -1");

  std::vector<double> x, w;
  jacobi_nodes_weights(n, a, b, x, w);

  JacobiRule rule;
  rule.n = n;
  rule.exponent_a = a;
  rule.exponent_b = b;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Map [-1, 1] with weight (1-x)^a (1+x)^b onto [0, 1] with (1-v)^a v^b,
  // reversing to ascending node order.
  const double scale = std::pow(2.0, -(a + b + 1.0));
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (1.0 + x[n - 1 - i]);
    rule.weights[i] = scale * w[n - 1 - i];
  }

  for (int i = 0; i < n; ++i) {
    const bool ordered = i == 0 || rule.nodes[i] > rule.nodes[i - 1];
    if (!(rule.nodes[i] > 0.0) || !(rule.nodes[i] < 1.0) || !ordered ||
        !(rule.weights[i] > 0.0))
      throw std::runtime_error("jacobi_rule: node computation failed to converge");
  }
  return rule;
}

const JacobiRule& jacobi_rule_cached(int n, double a, double b) {
  using Key = std::tuple<int, std::uint64_t, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<JacobiRule>> cache;

  const Key key{n, std::bit_cast<std::uint64_t>(a), std::bit_cast<std::uint64_t>(b)};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto rule = std::make_unique<JacobiRule>(jacobi_rule(n, a, b));
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(rule));
  return *it->second;
}

std::vector<double> GradedMesh::nodes() const {
  if (!(T > 0.0)) throw std::domain_error("GradedMesh: endpoint must be positive");
  if (N < 1) throw std::domain_error("GradedMesh: node count must be >= 1");
  if (!(grading >= 1.0)) throw std::domain_error("GradedMesh: grading exponent must be >= 1");
  if (ext_count > 0 && !(ext_ratio > 1.0))
    throw std::domain_error("GradedMesh: extension ratio must exceed 1");

  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(N) + 1 + static_cast<std::size_t>(std::max(ext_count, 0)));
  for (int j = 0; j <= N; ++j)
    ts.push_back(T * std::pow(static_cast<double>(j) / N, grading));
  double t = T;
  for (int k = 0; k < ext_count; ++k) {
    t *= ext_ratio;
    ts.push_back(t);
  }
  for (std::size_t j = 1; j < ts.size(); ++j)
    if (!(ts[j] > ts[j - 1]))
      throw std::runtime_error("GradedMesh: nodes are not strictly increasing");
  return ts;
}

}  // namespace frde
