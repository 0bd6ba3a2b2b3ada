#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace frde {

enum class TokenKind { number, identifier, op, lparen, rparen, comma };

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t position;  // byte offset into the source
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class LexError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Evaluation failure: carries the offending subexpression in printed form.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, std::string subexpression)
      : std::runtime_error(what + " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

class Bindings {
 public:
  Bindings() = default;
  Bindings(std::initializer_list<std::pair<std::string_view, double>> init) {
    for (const auto& [name, value] : init) set(name, value);
  }
  void set(std::string_view name, double value) {
    for (auto& e : entries_)
      if (e.first == name) {
        e.second = value;
        return;
      }
    entries_.emplace_back(std::string(name), value);
  }
  const double* find(std::string_view name) const noexcept {
    for (const auto& e : entries_)
      if (e.first == name) return &e.second;
    return nullptr;
  }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

struct ExprNode {
  enum class Kind { constant, variable, negate, add, sub, mul, div, pow, call };
  Kind kind;
  double value = 0.0;  // constant
  std::string name;    // variable or function name
  std::shared_ptr<const ExprNode> lhs, rhs;  // rhs doubles as second call argument
};

// Immutable expression tree; cheap to copy, reentrant to evaluate.
class Expr {
 public:
  Expr() = default;

  bool empty() const noexcept { return !root_; }
  double eval(const Bindings& bindings) const;
  std::string str() const;
  const ExprNode* root() const noexcept { return root_.get(); }

  static Expr constant(double v);
  static Expr variable(std::string name);
  static Expr negate(Expr e);
  static Expr binary(char op, Expr lhs, Expr rhs);       // one of + - * / ^
  static Expr call(std::string fn, std::vector<Expr> args);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}
  std::shared_ptr<const ExprNode> root_;
};

// Full token stream, or LexError with the byte offset of the first bad lexeme.
std::vector<Token> tokenize(std::string_view source);

// Grammar: '^' is right-associative and binds tighter than unary minus; a
// signed exponent must be parenthesized ("t^(-1/2)"). Identifiers must be
// declared variables, known functions, or the constant "pi".
Expr parse(std::string_view source, const std::vector<std::string>& variables);

}  // namespace frde
