#include "infogeom/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace infogeom {

namespace {

std::string located(const std::string& message, int line, int column) {
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": " << message;
  return os.str();
}

std::string join_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += (i + 1 == expected.size()) ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

enum class Func { kSin, kCos, kTan, kExp, kLn, kSqrt, kSech };

const std::vector<std::pair<std::string, Func>>& functions() {
  static const std::vector<std::pair<std::string, Func>> table = {
      {"sin", Func::kSin}, {"cos", Func::kCos}, {"tan", Func::kTan},   {"exp", Func::kExp},
      {"ln", Func::kLn},   {"sqrt", Func::kSqrt}, {"sech", Func::kSech}};
  return table;
}

const Func* find_function(const std::string& name) {
  for (const auto& [n, f] : functions()) {
    if (n == name) return &f;
  }
  return nullptr;
}

enum class Tok { kNumber, kIdent, kPlus, kMinus, kStar, kSlash, kCaret, kLParen, kRParen, kSemi, kComma, kEnd };

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd:
      return "end of input";
    case Tok::kNumber:
      return "number '" + t.text + "'";
    case Tok::kIdent:
      return "identifier '" + t.text + "'";
    default:
      return "'" + t.text + "'";
  }
}

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t{Tok::kEnd, std::string(1, c), 0.0, line, col};
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      t.kind = Tok::kNumber;
      t.text = src.substr(i, j - i);
      if (t.text == ".") {
        throw ParseError(located("malformed number '.'", line, col), line, col, {"number"});
      }
      t.number = std::stod(t.text);
      out.push_back(t);
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::kIdent;
      t.text = src.substr(i, j - i);
      out.push_back(t);
      advance(j - i);
      continue;
    }
    switch (c) {
      case '+': t.kind = Tok::kPlus; break;
      case '-': t.kind = Tok::kMinus; break;
      case '*': t.kind = Tok::kStar; break;
      case '/': t.kind = Tok::kSlash; break;
      case '^': t.kind = Tok::kCaret; break;
      case '(': t.kind = Tok::kLParen; break;
      case ')': t.kind = Tok::kRParen; break;
      case ';': t.kind = Tok::kSemi; break;
      case ',': t.kind = Tok::kComma; break;
      default:
        throw ParseError(located(std::string("unexpected character '") + c + "'", line, col), line,
                         col, {});
    }
    out.push_back(t);
    advance(1);
  }
  out.push_back(Token{Tok::kEnd, "", 0.0, line, col});
  return out;
}

}  // namespace

struct Expression::Node {
  enum class Kind { kNumber, kParam, kNeg, kAdd, kSub, kMul, kDiv, kPow, kCall };
  Kind kind;
  double number = 0.0;
  std::size_t index = 0;
  Func func = Func::kSin;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

double eval(const Node& n, std::span<const double> p) {
  using K = Node::Kind;
  switch (n.kind) {
    case K::kNumber: return n.number;
    case K::kParam: return p[n.index];
    case K::kNeg: return -eval(*n.lhs, p);
    case K::kAdd: return eval(*n.lhs, p) + eval(*n.rhs, p);
    case K::kSub: return eval(*n.lhs, p) - eval(*n.rhs, p);
    case K::kMul: return eval(*n.lhs, p) * eval(*n.rhs, p);
    case K::kDiv: return eval(*n.lhs, p) / eval(*n.rhs, p);
    case K::kPow: return std::pow(eval(*n.lhs, p), eval(*n.rhs, p));
    case K::kCall: {
      const double v = eval(*n.lhs, p);
      switch (n.func) {
        case Func::kSin: return std::sin(v);
        case Func::kCos: return std::cos(v);
        case Func::kTan: return std::tan(v);
        case Func::kExp: return std::exp(v);
        case Func::kLn: return std::log(v);
        case Func::kSqrt: return std::sqrt(v);
        case Func::kSech: return 1.0 / std::cosh(v);
      }
    }
  }
  return 0.0;
}

const std::vector<std::string> kAtomStart = {"number", "identifier", "function", "'-'", "'('"};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::vector<std::string>& params)
      : toks_(std::move(tokens)), params_(params) {}

  std::vector<NodePtr> components() {
    std::vector<NodePtr> out;
    out.push_back(expr());
    while (peek().kind == Tok::kSemi) {
      next();
      out.push_back(expr());
    }
    if (peek().kind != Tok::kEnd) {
      fail({"operator", "';'", "end of input"});
    }
    return out;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::vector<std::string>& expected) const {
    const Token& t = peek();
    throw ParseError(located("expected " + join_expected(expected) + ", found " + describe(t), t.line,
                             t.column),
                     t.line, t.column, expected);
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      const auto kind = next().kind == Tok::kPlus ? Node::Kind::kAdd : Node::Kind::kSub;
      lhs = make(kind, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (peek().kind == Tok::kStar || peek().kind == Tok::kSlash) {
      const auto kind = next().kind == Tok::kStar ? Node::Kind::kMul : Node::Kind::kDiv;
      lhs = make(kind, lhs, factor());
    }
    return lhs;
  }

  NodePtr factor() {
    NodePtr base = unary();
    if (peek().kind == Tok::kCaret) {
      next();
      return make(Node::Kind::kPow, base, factor());
    }
    return base;
  }

  NodePtr unary() {
    if (peek().kind == Tok::kMinus) {
      next();
      return make(Node::Kind::kNeg, atom());
    }
    return atom();
  }

  NodePtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kNumber: {
        next();
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::kNumber;
        n->number = t.number;
        return n;
      }
      case Tok::kLParen: {
        next();
        NodePtr inner = expr();
        if (peek().kind != Tok::kRParen) fail({"operator", "')'"});
        next();
        return inner;
      }
      case Tok::kIdent:
        return identifier();
      default:
        fail(kAtomStart);
    }
  }

  NodePtr identifier() {
    const Token t = next();
    if (const Func* f = find_function(t.text)) {
      if (peek().kind != Tok::kLParen) fail({"'('"});
      next();
      NodePtr arg = expr();
      if (peek().kind == Tok::kComma) {
        throw ArityError(located("function '" + t.text + "' takes exactly 1 argument", peek().line,
                                 peek().column),
                         peek().line, peek().column);
      }
      if (peek().kind != Tok::kRParen) fail({"operator", "')'"});
      next();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::kCall;
      n->func = *f;
      n->lhs = std::move(arg);
      return n;
    }
    if (t.text == "pi") {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::kNumber;
      n->number = std::numbers::pi;
      return n;
    }
    const auto it = std::find(params_.begin(), params_.end(), t.text);
    if (it == params_.end()) {
      throw UnknownIdentifierError(
          located("unknown identifier '" + t.text + "' (not a declared parameter)", t.line, t.column),
          t.line, t.column);
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::kParam;
    n->index = static_cast<std::size_t>(it - params_.begin());
    return n;
  }

  std::vector<Token> toks_;
  const std::vector<std::string>& params_;
  std::size_t pos_ = 0;
};

void check_param_names(const std::vector<std::string>& names) {
  if (names.empty()) throw ArityError("at least one parameter name is required", 1, 1);
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string& n = names[i];
    const bool ident = !n.empty() && (std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_') &&
                       std::all_of(n.begin(), n.end(), [](char c) {
                         return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                       });
    if (!ident) throw ExpressionError("parameter name '" + n + "' is not an identifier", 1, 1);
    if (n == "pi" || find_function(n)) {
      throw ExpressionError("parameter name '" + n + "' is reserved", 1, 1);
    }
    if (std::find(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(i), n) !=
        names.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw ExpressionError("duplicate parameter name '" + n + "'", 1, 1);
    }
  }
}

}  // namespace

ExpressionError::ExpressionError(const std::string& message, int line, int column)
    : Error(message), message_(message), line_(line), column_(column) {}

ParseError::ParseError(const std::string& message, int line, int column,
                       std::vector<std::string> expected)
    : ExpressionError(message, line, column), expected_(std::move(expected)) {}

Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

double Expression::evaluate(std::span<const double> params) const { return eval(*root_, params); }

std::vector<Expression> parse_expressions(const std::string& source,
                                          const std::vector<std::string>& param_names) {
  check_param_names(param_names);
  Parser parser(tokenize(source), param_names);
  std::vector<Expression> out;
  for (auto& node : parser.components()) out.emplace_back(std::move(node));
  return out;
}

Embedding parse_embedding_expression(const std::string& source,
                                     const std::vector<std::string>& param_names) {
  std::vector<Expression> exprs = parse_expressions(source, param_names);
  if (exprs.size() < param_names.size()) {
    throw ArityError(located("embedding has " + std::to_string(exprs.size()) +
                                 " components but " + std::to_string(param_names.size()) +
                                 " parameters; need at least as many components",
                             1, 1),
                     1, 1);
  }
  const std::size_t n = exprs.size();
  auto map = [exprs = std::move(exprs)](const ParamPoint& theta) {
    Eigen::VectorXd h(static_cast<Eigen::Index>(exprs.size()));
    for (std::size_t i = 0; i < exprs.size(); ++i) h(static_cast<Eigen::Index>(i)) = exprs[i].evaluate(theta.coords());
    return h;
  };
  return Embedding("expression", ParametricDomain(param_names.size()), n, map);
}

}  // namespace infogeom
