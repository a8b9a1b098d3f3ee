/* Homeomorphisms of the grid domains: builtin circle/torus maps with known
 * Lipschitz constants and invertibility, plus a small parsed expression DSL
 * for user-supplied maps. */
#ifndef CHAINREC_MAPS_HPP
#define CHAINREC_MAPS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chainrec/geometry.hpp"

namespace chainrec {

enum class ExprOp { Constant, Variable, Negate, Sin, Cos, Add, Sub, Mul, Div };

struct ExprNode {
  ExprOp op = ExprOp::Constant;
  double value = 0.0;  // Constant
  int axis = -1;       // Variable
  int lhs = -1;
  int rhs = -1;
};

/// One output coordinate of a custom map, stored as a flat node arena.
class Expr {
 public:
  Expr() = default;
  Expr(std::vector<ExprNode> nodes, int root) : nodes_(std::move(nodes)), root_(root) {}

  double eval(std::span<const double> x) const;
  std::string to_string() const;
  bool valid() const { return root_ >= 0; }
  const std::vector<ExprNode>& nodes() const { return nodes_; }
  int root() const { return root_; }

 private:
  double eval_node(int id, std::span<const double> x) const;
  void print_node(int id, std::string& out, int parent_prec, bool right_operand) const;

  std::vector<ExprNode> nodes_;
  int root_ = -1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position, std::string expected)
      : std::runtime_error(std::move(message)), position_(position), expected_(std::move(expected)) {}
  /// 1-based column of the offending token (one past the end on truncation).
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

/// Parse one semicolon-separated expression per output coordinate.
/// Variables x1..xd, operators + - * / with the usual precedence,
/// parentheses, sin/cos, numeric literals.  Throws ParseError with the
/// offending position and what was expected there.
std::vector<Expr> parse_expressions(std::string_view text, int dim);

enum class MapKind { Identity, Rotation, NorthSouth, Cat, Custom };

std::string map_kind_name(MapKind k);

struct MapSpec {
  MapKind kind = MapKind::Identity;
  double alpha = 0.0;       // Rotation
  double amplitude = 0.0;   // NorthSouth
  std::vector<Expr> exprs;  // Custom, one per output coordinate
  Domain domain = Domain::unit_circle();
};

/// parse_map builds a Custom MapSpec from DSL text for the given domain.
MapSpec parse_map(std::string_view text, const Domain& domain);

class EvalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** An immutable, evaluable map with its analysis metadata.  eval() is pure
 *  and safe to call from any number of threads. */
class MapInstance {
 public:
  static MapInstance identity(Domain domain);
  static MapInstance rotation(double alpha, Domain domain = Domain::unit_circle());
  // f(theta) = theta + a sin(2 pi theta) mod 1: one attracting fixed point at
  // 1/2, one repelling at 0; requires |2 pi a| < 1 to stay a homeomorphism.
  static MapInstance northsouth(double a, Domain domain = Domain::unit_circle());
  static MapInstance cat();  // (x, y) -> (2x + y, x + y) mod 1
  static MapInstance custom(MapSpec spec);
  static MapInstance from_spec(MapSpec spec);

  Point eval(const Point& p) const;
  bool has_inverse() const { return has_inverse_; }
  Point eval_inverse(const Point& p) const;

  double lipschitz_bound() const { return lipschitz_; }
  bool lipschitz_rigorous() const { return lipschitz_rigorous_; }
  bool preserves_lebesgue() const { return preserves_lebesgue_; }

  const MapSpec& spec() const { return spec_; }
  const Domain& domain() const { return spec_.domain; }

 private:
  explicit MapInstance(MapSpec spec) : spec_(std::move(spec)) {}
  void estimate_lipschitz();

  MapSpec spec_;
  double lipschitz_ = 1.0;
  bool lipschitz_rigorous_ = true;
  bool preserves_lebesgue_ = false;
  bool has_inverse_ = false;
};

}  // namespace chainrec

#endif
