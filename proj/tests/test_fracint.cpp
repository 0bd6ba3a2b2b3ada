#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "frde/extrapolation.hpp"
#include "frde/fracint.hpp"
#include "frde/special.hpp"
#include "oracles.hpp"

using frde::check_monotone;
using frde::check_weak_singular_bound;
using frde::check_weighted_continuity;
using frde::Direction;
using frde::find_turning_point;
using frde::frac_integral;
using frde::frac_integral_full;
using frde::log_grid;
using frde::parse;
using frde::PropertyVerdict;
using frde::SingularFunction;
using frde::tail_limit;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

SingularFunction sig(const char* sigma, double alpha) {
  return SingularFunction::from_sigma(parse(sigma, {"s"}), alpha);
}

double log_kernel_closed_form(double t) {
  return 2.0 / std::sqrt(1.0 + t) * std::log(std::sqrt(1.0 + t) + std::sqrt(t));
}

std::vector<double> dyadic_ladder(int lo, int hi) {
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::exp2(static_cast<double>(k)));
  return out;
}

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

// Frozen from the double-double Stirling oracle (see test_special).
constexpr double kBetaHalfTwoThirds = 2.5871095592297904;  // G(1/2)G(2/3)/G(7/6)
constexpr double kBetaHalfOneThird = 4.2065463159763627;   // G(1/2)G(1/3)/G(5/6)

}  // namespace

TEST_CASE("power weight closed form at t=1 matches the gamma-ratio constant") {
  const double got = frac_integral(sig("1", 1.0 / 3.0), 0.5, 1.0);
  CHECK(rel_err(got, kBetaHalfTwoThirds) < 1e-10);
  // the oracle value re-derived each run
  const double want =
      oracle::dd_div(oracle::dd_mul(oracle::gamma_dd(0.5), oracle::gamma_dd(2.0 / 3.0)),
                     oracle::gamma_dd(7.0 / 6.0))
          .to_double();
  CHECK(rel_err(got, want) < 1e-10);

  // t^(1/6) scaling
  for (double t : {0.25, 3.0, 40.0})
    CHECK(rel_err(frac_integral(sig("1", 1.0 / 3.0), 0.5, t),
                  kBetaHalfTwoThirds * std::pow(t, 1.0 / 6.0)) < 1e-9);
}

TEST_CASE("log-kernel closed form across the splitting threshold") {
  SingularFunction rho = sig("1/(1+s)", 0.0);
  for (double t : {0.1, 1.0, 1.9, 2.1, 10.0, 100.0}) {
    CHECK(rel_err(frac_integral(rho, 0.5, t), log_kernel_closed_form(t)) < 1e-9);
  }
  // independent adaptive-Simpson oracle at t = 10 (substituted to remove the
  // endpoint singularity: s = 10 - u^2)
  const double by_simpson = oracle::adaptive_simpson(
      [](double u) { return 2.0 / (1.0 + 10.0 - u * u); }, 0.0, std::sqrt(10.0), 1e-13);
  CHECK(rel_err(frac_integral(rho, 0.5, 10.0), by_simpson) < 1e-9);
}

TEST_CASE("resolvent weight is constant in t") {
  for (double beta : {0.2, 0.5, 0.8}) {
    SingularFunction rho = sig("1", beta);
    for (double t : {0.5, 5.0, 500.0})
      CHECK(rel_err(frac_integral(rho, beta, t), frde::resolvent_constant(beta)) < 1e-10);
  }
}

TEST_CASE("homogeneity: pure power weights") {
  for (double beta : {0.3, 0.5, 0.7})
    for (double alpha : {0.2, 0.5, 0.8})
      for (double t : {0.25, 1.0, 4.0, 64.0}) {
        const double want = frde::beta_fn(beta, 1.0 - alpha) * std::pow(t, beta - alpha);
        CHECK(rel_err(frac_integral(sig("1", alpha), beta, t), want) < 1e-9);
      }
}

TEST_CASE("linearity") {
  // rho1 = s^(-1/2), rho2 = s^(-1/4); the sum carries alpha = 1/2 with
  // sigma = 1 + s^(1/4)
  SingularFunction rho1 = sig("1", 0.5);
  SingularFunction rho2 = sig("1", 0.25);
  SingularFunction combined = sig("1+s^(0.25)", 0.5);
  for (double t : {0.5, 1.0, 8.0}) {
    const double lhs = frac_integral(combined, 0.5, t);
    const double rhs = frac_integral(rho1, 0.5, t) + frac_integral(rho2, 0.5, t);
    CHECK(rel_err(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("non-convergent quadrature is flagged, not thrown") {
  frde::FracIntegralResult r =
      frac_integral_full(sig("abs(s-0.62)", 0.0), 0.5, 1.0, 16, 1e-14);
  CHECK(!r.converged);
  CHECK(std::isfinite(r.value));
}

TEST_CASE("monotone transfer checks") {
  const std::vector<double> grid = log_grid(1e-3, 1e3, 120);

  // increasing weighted form: t^(1/2) s^(-1/3) = t^(1/6)
  PropertyVerdict up = check_monotone(sig("1", 1.0 / 3.0), 0.5, grid, Direction::nondecreasing);
  CHECK(up.pass);
  CHECK(up.note.empty());  // hypothesis held, conclusion checked

  // resolvent weight: constant integral passes both directions
  CHECK(check_monotone(sig("1", 0.5), 0.5, grid, Direction::nonincreasing).pass);
  CHECK(check_monotone(sig("1", 0.5), 0.5, grid, Direction::nondecreasing).pass);

  // log-kernel on (0, 1]: t^(1/2)/(1+t) increases there
  const std::vector<double> unit_grid = log_grid(1e-3, 1.0, 80);
  PropertyVerdict lk =
      check_monotone(sig("1/(1+s)", 0.0), 0.5, unit_grid, Direction::nondecreasing);
  CHECK(lk.pass);
  CHECK(lk.note.empty());

  // hypothesis violated on the full line -> vacuous pass with a note
  PropertyVerdict vac =
      check_monotone(sig("1/(1+s)", 0.0), 0.5, grid, Direction::nondecreasing);
  CHECK(vac.pass);
  CHECK(!vac.note.empty());
}

TEST_CASE("monotone transfer over a random hypothesis-satisfying family") {
  SplitMix64 rng(0x77aa01u);
  const std::vector<double> grid = log_grid(1e-3, 1e3, 100);
  for (int d = 0; d < 10; ++d) {
    const double beta = rng.uniform(0.3, 0.7);
    const double alpha = rng.uniform(beta, 0.9);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.6f+%.6f*exp(-s)", rng.uniform(0.0, 2.0),
                  rng.uniform(0.0, 2.0));
    CHECK(check_monotone(sig(buf, alpha), beta, grid, Direction::nonincreasing).pass);
  }
  for (int d = 0; d < 10; ++d) {
    const double beta = rng.uniform(0.3, 0.7);
    const double alpha = rng.uniform(0.05, beta);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.6f+%.6f*(1-exp(-s))", rng.uniform(0.1, 2.0),
                  rng.uniform(0.0, 2.0));
    CHECK(check_monotone(sig(buf, alpha), beta, grid, Direction::nondecreasing).pass);
  }
}

TEST_CASE("tail limits over the dyadic ladder") {
  const std::vector<double> ladder = dyadic_ladder(6, 40);

  frde::TailLimit a = tail_limit(sig("1/(1+sqrt(s))", 0.0), 0.5, ladder);
  CHECK(a.verdict.pass);
  CHECK(rel_err(a.predicted, kPi) < 1e-6);
  CHECK(std::abs(a.extrapolated - kPi) < 1e-3);

  frde::TailLimit z = tail_limit(sig("1/(1+s)", 0.0), 0.5, ladder);
  CHECK(std::abs(z.predicted) < 1e-10);
  CHECK(std::abs(z.extrapolated) < 1e-3);

  frde::TailLimit c = tail_limit(sig("1", 0.5), 0.5, ladder);
  CHECK(rel_err(c.predicted, kPi) < 1e-12);
  CHECK(rel_err(c.extrapolated, kPi) < 1e-9);

  CHECK_THROWS_AS(tail_limit(sig("1", 0.5), 0.5, std::vector<double>{1.0, 2.0, 4.0}),
                  std::domain_error);
  CHECK_THROWS_AS(
      tail_limit(sig("1", 0.5), 0.5, std::vector<double>{1, 1.5, 2.25, 3.375, 5.0, 7.6}),
      std::domain_error);
}

TEST_CASE("sandwich bounds for the bounded tail") {
  SingularFunction rho = sig("1/(1+sqrt(s))", 0.0);
  for (double t : {1.0, 10.0, 100.0, 1000.0}) {
    const double y = frac_integral(rho, 0.5, t);
    CHECK(y <= kPi + 1e-9);
    CHECK(y >= kPi - kBetaHalfOneThird * std::pow(t, -1.0 / 6.0) - 1e-9);
  }
}

TEST_CASE("turning point") {
  const frde::TurningPoint tp = find_turning_point();
  CHECK(tp.T0 > 2.0);
  CHECK(tp.T0 < 3.0);
  auto g = [](double t) {
    return std::sqrt(t / (1.0 + t)) * std::log(std::sqrt(1.0 + t) + std::sqrt(t));
  };
  CHECK(std::abs(g(tp.T0) - 1.0) <= 1e-10);
  CHECK(tp.g_at_one < 1.0);
  CHECK(rel_err(tp.g_at_one, std::log(1.0 + std::sqrt(2.0)) / std::sqrt(2.0)) < 1e-14);

  // independent bisection oracle agrees
  const double t0_oracle = oracle::bisect([&](double t) { return g(t) - 1.0; }, 1.0, 10.0);
  CHECK(std::abs(tp.T0 - t0_oracle) < 1e-9);

  // closed-form trajectory rises before T0 and falls after it
  for (int i = 0; i + 1 < 100; ++i) {
    const double t0 = 0.05 + (10.0 - 0.05) * i / 99.0;
    const double t1 = 0.05 + (10.0 - 0.05) * (i + 1) / 99.0;
    if (t1 <= tp.T0) CHECK(log_kernel_closed_form(t1) >= log_kernel_closed_form(t0) - 1e-12);
    if (t0 >= tp.T0) CHECK(log_kernel_closed_form(t1) <= log_kernel_closed_form(t0) + 1e-12);
  }
}

TEST_CASE("weakly singular bound") {
  PropertyVerdict v = check_weak_singular_bound(sig("1", 1.0 / 3.0), 0.5, 3.0, 1.0);
  CHECK(v.pass);
  CHECK(v.witness.empty());

  // zero function: 0 <= 0
  CHECK(check_weak_singular_bound(sig("0", 0.0), 0.5, 3.0, 0.7).pass);

  // homogeneity: a scaled function still satisfies the inequality
  CHECK(check_weak_singular_bound(sig("5", 1.0 / 3.0), 0.5, 3.0, 1.0).pass);

  // divergent L^p integral is flagged as skipped, not failed
  PropertyVerdict d = check_weak_singular_bound(sig("1", 0.9), 0.5, 8.0, 1.0);
  CHECK(d.pass);
  CHECK(d.note.find("skipped") != std::string::npos);

  SplitMix64 rng(0x5150u);
  for (int i = 0; i < 10; ++i) {
    const double beta = rng.uniform(0.35, 0.8);
    const double alpha = rng.uniform(0.0, 0.55);
    double p = 1.0 / beta + rng.uniform(0.2, 1.0);
    const double margin = 1.0 - beta - alpha;
    if (margin < 0.0 && p > 0.9 / -margin) p = std::max(1.0 / beta + 0.05, 0.9 / -margin);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.6f+%.6f*exp(-s)", rng.uniform(0.1, 2.0),
                  rng.uniform(0.0, 2.0));
    CHECK(check_weak_singular_bound(sig(buf, alpha), beta, p, rng.uniform(0.05, 1.0)).pass);
  }

  CHECK_THROWS_AS(check_weak_singular_bound(sig("1", 0.3), 0.5, 1.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(check_weak_singular_bound(sig("1", 0.3), 0.5, 3.0, 2.0), std::domain_error);
}

TEST_CASE("weighted continuity toward zero") {
  CHECK(check_weighted_continuity(sig("1", 1.0 / 3.0), 0.5).pass);
  CHECK(check_weighted_continuity(sig("1", 0.0), 0.5).pass);
  CHECK(check_weighted_continuity(sig("1", 0.5), 0.5).pass);
  CHECK(check_weighted_continuity(sig("1/(1+s)", 0.0), 0.3).pass);
}

TEST_CASE("aitken extrapolation utility") {
  // geometric tail: exact after one pass
  std::vector<double> seq;
  for (int k = 0; k < 12; ++k) seq.push_back(3.0 + 2.0 * std::pow(0.5, k));
  frde::AitkenResult r = frde::aitken_extrapolate(seq);
  CHECK(r.usable);
  CHECK(std::abs(r.value - 3.0) < 1e-12);

  // constant sequence short-circuits through the degenerate denominator
  std::vector<double> flat(8, 1.25);
  CHECK(frde::aitken_extrapolate(flat).value == 1.25);

  // two-mode tail: the second pass lands at least as close
  std::vector<double> two;
  for (int k = 0; k < 14; ++k) two.push_back(1.0 + std::pow(0.6, k) + 0.3 * std::pow(0.36, k));
  CHECK(std::abs(frde::aitken_extrapolate_twice(two).value - 1.0) <
        std::abs(frde::aitken_extrapolate(two).value - 1.0) + 1e-15);
}
