#include "frde/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <span>

namespace frde {
namespace {

using Node = ExprNode;
using NodePtr = std::shared_ptr<const Node>;

constexpr std::array<std::string_view, 7> kUnaryFunctions = {
    "sqrt", "cbrt", "ln", "exp", "abs", "sin", "cos"};

bool is_unary_function(std::string_view name) {
  for (auto fn : kUnaryFunctions)
    if (fn == name) return true;
  return false;
}

bool is_function(std::string_view name) { return is_unary_function(name) || name == "pow"; }

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

// -------------------------------------------------------------------------
// printing

int precedence(const Node& n) {
  switch (n.kind) {
    case Node::Kind::add:
    case Node::Kind::sub:
      return 10;
    case Node::Kind::mul:
    case Node::Kind::div:
      return 20;
    case Node::Kind::negate:
      return 30;
    case Node::Kind::pow:
      return 40;
    default:
      return 100;
  }
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, std::string& out, bool needs_parens) {
  if (needs_parens) out.push_back('(');
  print_node(child, out);
  if (needs_parens) out.push_back(')');
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::constant:
      out += format_double(n.value);
      return;
    case Node::Kind::variable:
      out += n.name;
      return;
    case Node::Kind::negate:
      out.push_back('-');
      print_child(*n.lhs, out, precedence(*n.lhs) < 30);
      return;
    case Node::Kind::add:
    case Node::Kind::sub: {
      print_child(*n.lhs, out, precedence(*n.lhs) < 10);
      out.push_back(n.kind == Node::Kind::add ? '+' : '-');
      print_child(*n.rhs, out, precedence(*n.rhs) <= 10);
      return;
    }
    case Node::Kind::mul:
    case Node::Kind::div: {
      print_child(*n.lhs, out, precedence(*n.lhs) < 20);
      out.push_back(n.kind == Node::Kind::mul ? '*' : '/');
      print_child(*n.rhs, out, precedence(*n.rhs) <= 20);
      return;
    }
    case Node::Kind::pow: {
      print_child(*n.lhs, out, precedence(*n.lhs) <= 40);
      out.push_back('^');
      print_child(*n.rhs, out, precedence(*n.rhs) < 40);
      return;
    }
    case Node::Kind::call: {
      out += n.name;
      out.push_back('(');
      print_node(*n.lhs, out);
      if (n.rhs) {
        out += ", ";
        print_node(*n.rhs, out);
      }
      out.push_back(')');
      return;
    }
  }
}

std::string node_str(const Node& n) {
  std::string out;
  print_node(n, out);
  return out;
}

// -------------------------------------------------------------------------
// evaluation

double eval_node(const Node& n, const Bindings& bindings) {
  switch (n.kind) {
    case Node::Kind::constant:
      return n.value;
    case Node::Kind::variable: {
      const double* v = bindings.find(n.name);
      if (!v) throw EvalError("unbound variable", n.name);
      return *v;
    }
    case Node::Kind::negate:
      return -eval_node(*n.lhs, bindings);
    case Node::Kind::add:
      return eval_node(*n.lhs, bindings) + eval_node(*n.rhs, bindings);
    case Node::Kind::sub:
      return eval_node(*n.lhs, bindings) - eval_node(*n.rhs, bindings);
    case Node::Kind::mul:
      return eval_node(*n.lhs, bindings) * eval_node(*n.rhs, bindings);
    case Node::Kind::div: {
      const double num = eval_node(*n.lhs, bindings);
      const double den = eval_node(*n.rhs, bindings);
      if (den == 0.0) throw EvalError("division by zero", node_str(n));
      return num / den;
    }
    case Node::Kind::pow: {
      const double base = eval_node(*n.lhs, bindings);
      const double exponent = eval_node(*n.rhs, bindings);
      const double r = std::pow(base, exponent);
      if (std::isnan(r)) throw EvalError("invalid power", node_str(n));
      return r;
    }
    case Node::Kind::call: {
      const double a = eval_node(*n.lhs, bindings);
      if (n.name == "sqrt") {
        if (a < 0.0) throw EvalError("sqrt of negative value", node_str(n));
        return std::sqrt(a);
      }
      if (n.name == "cbrt") return std::cbrt(a);  // real cube root, negatives allowed
      if (n.name == "ln") {
        if (a <= 0.0) throw EvalError("ln of non-positive value", node_str(n));
        return std::log(a);
      }
      if (n.name == "exp") return std::exp(a);
      if (n.name == "abs") return std::abs(a);
      if (n.name == "sin") return std::sin(a);
      if (n.name == "cos") return std::cos(a);
      if (n.name == "pow") {
        const double e = eval_node(*n.rhs, bindings);
        const double r = std::pow(a, e);
        if (std::isnan(r)) throw EvalError("invalid power", node_str(n));
        return r;
      }
      throw EvalError("unknown function", n.name);
    }
  }
  throw EvalError("malformed expression node", "?");
}

// -------------------------------------------------------------------------
// parser

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::size_t source_size,
         const std::vector<std::string>& variables)
      : tokens_(std::move(tokens)), end_pos_(source_size), variables_(variables) {}

  Expr run() {
    if (tokens_.empty()) throw ParseError("empty expression", 0);
    Expr e = parse_expression(0);
    if (!at_end()) throw ParseError("unexpected token '" + peek().lexeme + "'", peek().position);
    return e;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token& peek() const { return tokens_[pos_]; }
  std::size_t here() const { return at_end() ? end_pos_ : peek().position; }
  Token take() { return tokens_[pos_++]; }

  bool is_variable(std::string_view name) const {
    for (const auto& v : variables_)
      if (v == name) return true;
    return false;
  }

  static int left_binding(const Token& t) {
    if (t.kind != TokenKind::op) return -1;
    switch (t.lexeme[0]) {
      case '+':
      case '-':
        return 10;
      case '*':
      case '/':
        return 20;
      case '^':
        return 40;
      default:
        return -1;
    }
  }

  Expr parse_expression(int min_bp) {
    Expr lhs = parse_prefix();
    while (!at_end()) {
      const int bp = left_binding(peek());
      if (bp < 0 || bp < min_bp) break;
      const Token op = take();
      if (op.lexeme[0] == '^') {
        lhs = Expr::binary('^', std::move(lhs), parse_power_operand());
      } else {
        lhs = Expr::binary(op.lexeme[0], std::move(lhs), parse_expression(bp + 1));
      }
    }
    return lhs;
  }

  // Exponent of '^': unsigned operand, chained right-associatively.
  Expr parse_power_operand() {
    if (at_end()) throw ParseError("missing exponent", here());
    if (peek().kind == TokenKind::op && (peek().lexeme == "-" || peek().lexeme == "+"))
      throw ParseError("signed exponent must be parenthesized", peek().position);
    Expr base = parse_primary();
    if (!at_end() && peek().kind == TokenKind::op && peek().lexeme == "^") {
      take();
      return Expr::binary('^', std::move(base), parse_power_operand());
    }
    return base;
  }

  Expr parse_prefix() {
    if (at_end()) throw ParseError("unexpected end of expression", here());
    if (peek().kind == TokenKind::op && peek().lexeme == "-") {
      take();
      return Expr::negate(parse_expression(30));
    }
    return parse_primary();
  }

  Expr parse_primary() {
    if (at_end()) throw ParseError("unexpected end of expression", here());
    Token t = take();
    switch (t.kind) {
      case TokenKind::number: {
        const double v = std::strtod(t.lexeme.c_str(), nullptr);
        return Expr::constant(v);
      }
      case TokenKind::identifier: {
        if (!at_end() && peek().kind == TokenKind::lparen) return parse_call(t);
        if (t.lexeme == "pi") return Expr::constant(std::numbers::pi);
        if (is_variable(t.lexeme)) return Expr::variable(t.lexeme);
        throw ParseError("unknown identifier '" + t.lexeme + "'", t.position);
      }
      case TokenKind::lparen: {
        Expr inner = parse_expression(0);
        expect_rparen(t.position);
        return inner;
      }
      default:
        throw ParseError("unexpected token '" + t.lexeme + "'", t.position);
    }
  }

  Expr parse_call(const Token& name) {
    if (!is_function(name.lexeme))
      throw ParseError("unknown function '" + name.lexeme + "'", name.position);
    const Token open = take();  // '('
    std::vector<Expr> args;
    args.push_back(parse_expression(0));
    while (!at_end() && peek().kind == TokenKind::comma) {
      take();
      args.push_back(parse_expression(0));
    }
    expect_rparen(open.position);
    const std::size_t arity = name.lexeme == "pow" ? 2 : 1;
    if (args.size() != arity)
      throw ParseError("function '" + name.lexeme + "' expects " + std::to_string(arity) +
                           " argument(s)",
                       name.position);
    return Expr::call(name.lexeme, std::move(args));
  }

  void expect_rparen(std::size_t open_pos) {
    if (at_end()) throw ParseError("unbalanced parenthesis", open_pos);
    const Token t = take();
    if (t.kind != TokenKind::rparen)
      throw ParseError("expected ')', found '" + t.lexeme + "'", t.position);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t end_pos_;
  const std::vector<std::string>& variables_;
};

}  // namespace

// ---------------------------------------------------------------------------

double Expr::eval(const Bindings& bindings) const {
  if (!root_) throw EvalError("empty expression", "");
  return eval_node(*root_, bindings);
}

std::string Expr::str() const {
  if (!root_) return "";
  return node_str(*root_);
}

Expr Expr::constant(double v) {
  return Expr(make_node({.kind = Node::Kind::constant, .value = v}));
}

Expr Expr::variable(std::string name) {
  return Expr(make_node({.kind = Node::Kind::variable, .name = std::move(name)}));
}

Expr Expr::negate(Expr e) {
  Node n{.kind = Node::Kind::negate};
  n.lhs = std::move(e.root_);
  return Expr(make_node(std::move(n)));
}

Expr Expr::binary(char op, Expr lhs, Expr rhs) {
  Node n;
  switch (op) {
    case '+': n.kind = Node::Kind::add; break;
    case '-': n.kind = Node::Kind::sub; break;
    case '*': n.kind = Node::Kind::mul; break;
    case '/': n.kind = Node::Kind::div; break;
    case '^': n.kind = Node::Kind::pow; break;
    default: throw std::invalid_argument("Expr::binary: unknown operator");
  }
  n.lhs = std::move(lhs.root_);
  n.rhs = std::move(rhs.root_);
  return Expr(make_node(std::move(n)));
}

Expr Expr::call(std::string fn, std::vector<Expr> args) {
  const std::size_t arity = fn == "pow" ? 2 : 1;
  if (!is_function(fn) || args.size() != arity)
    throw std::invalid_argument("Expr::call: bad function or arity");
  Node n{.kind = Node::Kind::call, .name = std::move(fn)};
  n.lhs = std::move(args[0].root_);
  if (arity == 2) n.rhs = std::move(args[1].root_);
  return Expr(make_node(std::move(n)));
}

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = source.size();
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_ident = [&](char c) { return is_ident_start(c) || is_digit(c); };

  while (i < n) {
    const char c = source[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c)) {
      while (i < n && is_digit(source[i])) ++i;
      if (i < n && source[i] == '.') {
        const std::size_t dot = i;
        ++i;
        if (i >= n || !is_digit(source[i])) throw LexError("malformed number", dot);
        while (i < n && is_digit(source[i])) ++i;
      }
      if (i < n && (source[i] == 'e' || source[i] == 'E')) {
        const std::size_t exp_mark = i;
        ++i;
        if (i < n && (source[i] == '+' || source[i] == '-')) ++i;
        if (i >= n || !is_digit(source[i])) throw LexError("malformed exponent", exp_mark);
        while (i < n && is_digit(source[i])) ++i;
      }
      out.push_back({TokenKind::number, std::string(source.substr(start, i - start)), start});
      continue;
    }
    if (is_ident_start(c)) {
      while (i < n && is_ident(source[i])) ++i;
      out.push_back({TokenKind::identifier, std::string(source.substr(start, i - start)), start});
      continue;
    }
    switch (c) {
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
        out.push_back({TokenKind::op, std::string(1, c), start});
        ++i;
        continue;
      case '(':
        out.push_back({TokenKind::lparen, "(", start});
        ++i;
        continue;
      case ')':
        out.push_back({TokenKind::rparen, ")", start});
        ++i;
        continue;
      case ',':
        out.push_back({TokenKind::comma, ",", start});
        ++i;
        continue;
      default:
        throw LexError(std::string("illegal character '") + c + "'", start);
    }
  }
  return out;
}

Expr parse(std::string_view source, const std::vector<std::string>& variables) {
  Parser parser(tokenize(source), source.size(), variables);
  return parser.run();
}

}  // namespace frde
