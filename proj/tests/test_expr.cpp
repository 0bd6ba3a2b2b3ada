#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "frde/expr.hpp"

using frde::Bindings;
using frde::Expr;
using frde::parse;
using frde::Token;
using frde::TokenKind;
using frde::tokenize;

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
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

// Random AST generator for the round-trip property.
Expr random_expr(SplitMix64& rng, int depth) {
  if (depth <= 0) {
    switch (rng.below(3)) {
      case 0:
        return Expr::constant(std::round(rng.uniform(0.0, 8.0) * 64.0) / 64.0);
      case 1:
        return Expr::variable("t");
      default:
        return Expr::variable("x");
    }
  }
  switch (rng.below(8)) {
    case 0:
      return Expr::negate(random_expr(rng, depth - 1));
    case 1:
      return Expr::binary('+', random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 2:
      return Expr::binary('-', random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 3:
      return Expr::binary('*', random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4:
      return Expr::binary('/', random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5:
      return Expr::binary('^', random_expr(rng, depth - 1),
                          Expr::constant(std::round(rng.uniform(0.0, 3.0) * 4.0) / 4.0));
    case 6: {
      const char* fns[] = {"sqrt", "cbrt", "ln", "exp", "abs", "sin", "cos"};
      std::vector<Expr> args;
      args.push_back(random_expr(rng, depth - 1));
      return Expr::call(fns[rng.below(7)], std::move(args));
    }
    default: {
      std::vector<Expr> args;
      args.push_back(random_expr(rng, depth - 1));
      args.push_back(Expr::constant(std::round(rng.uniform(0.0, 2.0) * 8.0) / 8.0));
      return Expr::call("pow", std::move(args));
    }
  }
}

}  // namespace

TEST_CASE("tokenize splits a signed power") {
  const std::vector<Token> ts = tokenize("t^(-1/2)");
  REQUIRE(ts.size() == 8);
  CHECK(ts[0].kind == TokenKind::identifier);
  CHECK(ts[0].lexeme == "t");
  CHECK(ts[1].kind == TokenKind::op);
  CHECK(ts[1].lexeme == "^");
  CHECK(ts[2].kind == TokenKind::lparen);
  CHECK(ts[3].kind == TokenKind::op);
  CHECK(ts[3].lexeme == "-");
  CHECK(ts[4].kind == TokenKind::number);
  CHECK(ts[4].lexeme == "1");
  CHECK(ts[5].kind == TokenKind::op);
  CHECK(ts[5].lexeme == "/");
  CHECK(ts[6].kind == TokenKind::number);
  CHECK(ts[6].lexeme == "2");
  CHECK(ts[7].kind == TokenKind::rparen);
}

TEST_CASE("tokenize edge cases") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("  \t\n").empty());

  try {
    tokenize("2..5");
    FAIL("expected LexError");
  } catch (const frde::LexError& e) {
    CHECK(e.position() == 1);
  }
  try {
    tokenize("1 + #");
    FAIL("expected LexError");
  } catch (const frde::LexError& e) {
    CHECK(e.position() == 4);
  }
  try {
    tokenize("3e+");
    FAIL("expected LexError");
  } catch (const frde::LexError& e) {
    CHECK(e.position() == 1);
  }

  // positions are nondecreasing and lexemes match the source slices
  const std::string src = "sqrt(pi) * x + 2.5e-1";
  const std::vector<Token> ts = tokenize(src);
  for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i].position >= ts[i - 1].position);
  for (const Token& t : ts)
    CHECK(src.substr(t.position, t.lexeme.size()) == t.lexeme);
}

TEST_CASE("parse structure and precedence") {
  CHECK(parse("(x+1)/(x+2)", {"x"}).str() == "(x+1)/(x+2)");

  const Expr e = parse("sqrt(pi)*x", {"x"});
  CHECK(e.eval({{"x", 2.0}}) == std::sqrt(std::numbers::pi) * 2.0);

  // ^ binds tighter than unary minus, which binds tighter than *
  CHECK(parse("-t^2", {"t"}).eval({{"t", 3.0}}) == -9.0);
  CHECK(parse("2^t^2", {"t"}).eval({{"t", 2.0}}) == 16.0);  // right-associative
  CHECK(parse("-t*2", {"t"}).eval({{"t", 3.0}}) == -6.0);
  CHECK(parse("2*t+1", {"t"}).eval({{"t", 5.0}}) == 11.0);
  CHECK(parse("2*(t+1)", {"t"}).eval({{"t", 5.0}}) == 12.0);
}

TEST_CASE("parse errors carry positions inside the source") {
  CHECK_THROWS_AS(parse("t^-1/2", {"t"}), frde::ParseError);
  CHECK_THROWS_AS(parse("", {"t"}), frde::ParseError);
  CHECK_THROWS_AS(parse("(t+1", {"t"}), frde::ParseError);
  CHECK_THROWS_AS(parse("t+", {"t"}), frde::ParseError);
  CHECK_THROWS_AS(parse("y+1", {"t"}), frde::ParseError);        // unknown identifier
  CHECK_THROWS_AS(parse("foo(t)", {"t"}), frde::ParseError);     // unknown function
  CHECK_THROWS_AS(parse("sqrt(t,1)", {"t"}), frde::ParseError);  // arity
  CHECK_THROWS_AS(parse("pow(t)", {"t"}), frde::ParseError);

  const std::string bad[] = {"t^-1/2", "(t+1", "t+", "y+1", "t )", "1 2"};
  for (const std::string& src : bad) {
    try {
      parse(src, {"t"});
      FAIL("expected ParseError for: ", src);
    } catch (const frde::ParseError& e) {
      CHECK(e.position() <= src.size());
    }
  }
}

TEST_CASE("evaluation") {
  CHECK(parse("t^(-1/2)", {"t"}).eval({{"t", 4.0}}) == 0.5);
  CHECK(parse("cbrt(x)", {"x"}).eval({{"x", -8.0}}) == -2.0);
  CHECK(parse("(t^(-3/4)+t^(-1/2))*(x+1)/(x+2)", {"t", "x"})
            .eval({{"t", 1.0}, {"x", 0.0}}) == 1.0);
  CHECK(parse("abs(0-3)+cos(0)", {}).eval({}) == 4.0);
  CHECK(parse("pow(2, 10)", {}).eval({}) == 1024.0);
}

TEST_CASE("evaluation domain errors carry the offending subexpression") {
  try {
    parse("1/(x-1)", {"x"}).eval({{"x", 1.0}});
    FAIL("expected EvalError");
  } catch (const frde::EvalError& e) {
    CHECK(e.subexpression() == "1/(x-1)");
  }
  CHECK_THROWS_AS(parse("sqrt(0-1)", {}).eval({}), frde::EvalError);
  CHECK_THROWS_AS(parse("ln(0)", {}).eval({}), frde::EvalError);
  CHECK_THROWS_AS(parse("(0-2)^(1/2)", {}).eval({}), frde::EvalError);
  CHECK_THROWS_AS(parse("x", {"x"}).eval({}), frde::EvalError);  // unbound
}

TEST_CASE("round trip: print then parse evaluates bit-for-bit") {
  SplitMix64 rng(0xabcdef12u);
  int evaluated = 0;
  for (int i = 0; i < 500; ++i) {
    Expr original = random_expr(rng, 1 + rng.below(4));
    const std::string printed = original.str();
    Expr reparsed = parse(printed, {"t", "x"});
    CHECK(reparsed.str() == printed);  // printing is a fixed point

    for (int b = 0; b < 10; ++b) {
      Bindings bind{{"t", rng.uniform(0.05, 3.0)}, {"x", rng.uniform(0.05, 3.0)}};
      double lhs = 0.0, rhs = 0.0;
      bool lhs_threw = false, rhs_threw = false;
      try {
        lhs = original.eval(bind);
      } catch (const frde::EvalError&) {
        lhs_threw = true;
      }
      try {
        rhs = reparsed.eval(bind);
      } catch (const frde::EvalError&) {
        rhs_threw = true;
      }
      CHECK(lhs_threw == rhs_threw);
      if (!lhs_threw) {
        const bool same = lhs == rhs || (std::isnan(lhs) && std::isnan(rhs));
        CHECK(same);
        ++evaluated;
      }
    }
  }
  CHECK(evaluated > 2000);  // most draws evaluate cleanly
}
