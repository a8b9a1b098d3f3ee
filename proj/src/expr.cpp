#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "chainrec/maps.hpp"

namespace chainrec {

double Expr::eval(std::span<const double> x) const { return eval_node(root_, x); }

double Expr::eval_node(int id, std::span<const double> x) const {
  const ExprNode& n = nodes_[static_cast<size_t>(id)];
  switch (n.op) {
    case ExprOp::Constant: return n.value;
    case ExprOp::Variable: return x[static_cast<size_t>(n.axis)];
    case ExprOp::Negate:   return -eval_node(n.lhs, x);
    case ExprOp::Sin:      return std::sin(eval_node(n.lhs, x));
    case ExprOp::Cos:      return std::cos(eval_node(n.lhs, x));
    case ExprOp::Add:      return eval_node(n.lhs, x) + eval_node(n.rhs, x);
    case ExprOp::Sub:      return eval_node(n.lhs, x) - eval_node(n.rhs, x);
    case ExprOp::Mul:      return eval_node(n.lhs, x) * eval_node(n.rhs, x);
    case ExprOp::Div:      return eval_node(n.lhs, x) / eval_node(n.rhs, x);
  }
  return 0.0;
}

namespace {
int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Add:
    case ExprOp::Sub: return 1;
    case ExprOp::Mul:
    case ExprOp::Div: return 2;
    case ExprOp::Negate: return 3;
    default: return 4;
  }
}
}  // namespace

void Expr::print_node(int id, std::string& out, int parent_prec, bool right_operand) const {
  const ExprNode& n = nodes_[static_cast<size_t>(id)];
  int prec = precedence(n.op);
  // Parenthesize when binding looser than the context, or equally on the
  // right of a non-associative spot (a - (b + c), a / (b * c)).
  bool parens = prec < parent_prec || (prec == parent_prec && right_operand && prec <= 2);
  char buf[64];
  switch (n.op) {
    case ExprOp::Constant:
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    case ExprOp::Variable:
      out += "x" + std::to_string(n.axis + 1);
      return;
    case ExprOp::Sin:
    case ExprOp::Cos:
      out += (n.op == ExprOp::Sin) ? "sin(" : "cos(";
      print_node(n.lhs, out, 0, false);
      out += ")";
      return;
    case ExprOp::Negate:
      if (parens) out += "(";
      out += "-";
      print_node(n.lhs, out, prec, true);
      if (parens) out += ")";
      return;
    default: break;
  }
  if (parens) out += "(";
  print_node(n.lhs, out, prec, false);
  switch (n.op) {
    case ExprOp::Add: out += " + "; break;
    case ExprOp::Sub: out += " - "; break;
    case ExprOp::Mul: out += " * "; break;
    case ExprOp::Div: out += " / "; break;
    default: break;
  }
  print_node(n.rhs, out, prec, true);
  if (parens) out += ")";
}

std::string Expr::to_string() const {
  std::string out;
  print_node(root_, out, 0, false);
  return out;
}

namespace {

struct Token {
  enum Kind { Number, Ident, Plus, Minus, Star, Slash, LParen, RParen, Semicolon, End } kind;
  std::size_t pos;
  double number = 0.0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }
  const Token& current() const { return tok_; }
  void advance();

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_{};
};

void Lexer::advance() {
  while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  tok_.pos = pos_ + 1;  // positions are 1-based columns
  if (pos_ >= text_.size()) {
    tok_.kind = Token::End;
    return;
  }
  char c = text_[pos_];
  switch (c) {
    case '+': tok_.kind = Token::Plus; ++pos_; return;
    case '-': tok_.kind = Token::Minus; ++pos_; return;
    case '*': tok_.kind = Token::Star; ++pos_; return;
    case '/': tok_.kind = Token::Slash; ++pos_; return;
    case '(': tok_.kind = Token::LParen; ++pos_; return;
    case ')': tok_.kind = Token::RParen; ++pos_; return;
    case ';': tok_.kind = Token::Semicolon; ++pos_; return;
    default: break;
  }
  if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    tok_.number = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", pos_ + 1, "number");
    pos_ += static_cast<std::size_t>(end - begin);
    tok_.kind = Token::Number;
    return;
  }
  if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    tok_.kind = Token::Ident;
    tok_.ident = std::string(text_.substr(start, pos_ - start));
    return;
  }
  throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_ + 1,
                   "operand or operator");
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : lex_(text), dim_(dim) {}

  std::vector<Expr> parse_all() {
    std::vector<Expr> exprs;
    exprs.push_back(parse_one());
    while (lex_.current().kind == Token::Semicolon) {
      lex_.advance();
      exprs.push_back(parse_one());
    }
    if (lex_.current().kind != Token::End)
      throw ParseError("trailing input", lex_.current().pos, "';' or end of input");
    return exprs;
  }

 private:
  Expr parse_one() {
    nodes_.clear();
    int root = parse_sum();
    return Expr(nodes_, root);
  }

  int add_node(ExprNode n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int parse_sum() {
    int lhs = parse_term();
    while (true) {
      Token::Kind k = lex_.current().kind;
      if (k != Token::Plus && k != Token::Minus) return lhs;
      lex_.advance();
      int rhs = parse_term();
      lhs = add_node({k == Token::Plus ? ExprOp::Add : ExprOp::Sub, 0.0, -1, lhs, rhs});
    }
  }

  int parse_term() {
    int lhs = parse_factor();
    while (true) {
      Token::Kind k = lex_.current().kind;
      if (k != Token::Star && k != Token::Slash) return lhs;
      std::size_t op_pos = lex_.current().pos;
      lex_.advance();
      int rhs = parse_factor();
      if (k == Token::Slash) {
        const ExprNode& d = nodes_[static_cast<size_t>(rhs)];
        if (d.op == ExprOp::Constant && d.value == 0.0)
          throw ParseError("division by constant zero", op_pos, "nonzero divisor");
      }
      lhs = add_node({k == Token::Star ? ExprOp::Mul : ExprOp::Div, 0.0, -1, lhs, rhs});
    }
  }

  int parse_factor() {
    if (lex_.current().kind == Token::Minus) {
      lex_.advance();
      int operand = parse_factor();
      return add_node({ExprOp::Negate, 0.0, -1, operand, -1});
    }
    return parse_primary();
  }

  int parse_primary() {
    const Token& tok = lex_.current();
    switch (tok.kind) {
      case Token::Number: {
        double v = tok.number;
        lex_.advance();
        return add_node({ExprOp::Constant, v, -1, -1, -1});
      }
      case Token::LParen: {
        lex_.advance();
        int inner = parse_sum();
        expect(Token::RParen, "')'");
        return inner;
      }
      case Token::Ident: {
        std::string name = tok.ident;
        std::size_t pos = tok.pos;
        lex_.advance();
        if (name == "sin" || name == "cos") {
          expect(Token::LParen, "'('");
          int arg = parse_sum();
          expect(Token::RParen, "')'");
          return add_node({name == "sin" ? ExprOp::Sin : ExprOp::Cos, 0.0, -1, arg, -1});
        }
        if (name.size() >= 2 && name[0] == 'x') {
          bool digits = true;
          for (std::size_t i = 1; i < name.size(); ++i)
            digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
          if (digits) {
            int axis = std::atoi(name.c_str() + 1) - 1;
            if (axis < 0 || axis >= dim_)
              throw ParseError("variable '" + name + "' out of range for dimension " +
                                   std::to_string(dim_),
                               pos, "x1..x" + std::to_string(dim_));
            return add_node({ExprOp::Variable, 0.0, axis, -1, -1});
          }
        }
        throw ParseError("unknown identifier '" + name + "'", pos, "variable or function");
      }
      default:
        throw ParseError("expected operand", tok.pos, "operand");
    }
  }

  void expect(Token::Kind kind, const std::string& what) {
    if (lex_.current().kind != kind)
      throw ParseError("expected " + what, lex_.current().pos, what);
    lex_.advance();
  }

  Lexer lex_;
  int dim_;
  std::vector<ExprNode> nodes_;
};

}  // namespace

std::vector<Expr> parse_expressions(std::string_view text, int dim) {
  Parser parser(text, dim);
  std::vector<Expr> exprs = parser.parse_all();
  if (static_cast<int>(exprs.size()) != dim)
    throw ParseError("expected " + std::to_string(dim) + " expressions, got " +
                         std::to_string(exprs.size()),
                     text.size() + 1, "one expression per output coordinate");
  return exprs;
}

MapSpec parse_map(std::string_view text, const Domain& domain) {
  MapSpec spec;
  spec.kind = MapKind::Custom;
  spec.domain = domain;
  spec.exprs = parse_expressions(text, domain.dim());
  return spec;
}

}  // namespace chainrec
