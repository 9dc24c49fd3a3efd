#pragma once

#include <memory>
#include <string>
#include <vector>

#include "infogeom/embeddings.hpp"

namespace infogeom {

/// Any error raised while reading an embedding expression; carries a 1-based
/// source position.
class ExpressionError : public Error {
 public:
  ExpressionError(const std::string& message, int line, int column);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// Malformed input; `expected` lists the tokens that would have been accepted.
class ParseError : public ExpressionError {
 public:
  ParseError(const std::string& message, int line, int column, std::vector<std::string> expected);
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class UnknownIdentifierError : public ExpressionError {
 public:
  using ExpressionError::ExpressionError;
};

/// Wrong argument count for a function, or fewer components than parameters.
class ArityError : public ExpressionError {
 public:
  using ExpressionError::ExpressionError;
};

/// One parsed scalar expression over the declared parameters.
class Expression {
 public:
  struct Node;

  explicit Expression(std::shared_ptr<const Node> root);
  double evaluate(std::span<const double> params) const;

 private:
  std::shared_ptr<const Node> root_;
};

/// Parses `;`-separated components. Grammar:
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := unary ("^" factor)?
///   unary  := "-"? atom
///   atom   := number | ident | func "(" expr ")" | "(" expr ")"
///   func   := sin | cos | tan | exp | ln | sqrt | sech
/// Note that unary minus binds tighter than "^": "-a^2" is (-a)^2.
std::vector<Expression> parse_expressions(const std::string& source,
                                          const std::vector<std::string>& param_names);

/// Embedding over R^m (m = param_names.size()) whose Jacobian is taken by
/// central differences.
Embedding parse_embedding_expression(const std::string& source,
                                     const std::vector<std::string>& param_names);

}  // namespace infogeom
