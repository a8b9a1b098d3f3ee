#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "chainrec/maps.hpp"

using namespace chainrec;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Point> random_points(const Domain& dom, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < count; ++i) {
    Point p(dom.dim());
    for (int k = 0; k < dom.dim(); ++k) p[k] = dom.axis(k).lo + u(rng) * dom.axis(k).span();
    pts.push_back(std::move(p));
  }
  return pts;
}

// Random expression trees for the print/parse round trip.  Constants stay
// away from zero so no division-by-zero nodes are generated.
int random_expr(std::mt19937_64& rng, std::vector<ExprNode>& nodes, int dim, int depth) {
  std::uniform_real_distribution<double> c(0.1, 2.5);
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  std::uniform_int_distribution<int> axis(0, dim - 1);
  switch (pick(rng)) {
    case 0:
      nodes.push_back({ExprOp::Constant, c(rng), -1, -1, -1});
      break;
    case 1:
      nodes.push_back({ExprOp::Variable, 0.0, axis(rng), -1, -1});
      break;
    case 2: {
      int a = random_expr(rng, nodes, dim, depth - 1);
      nodes.push_back({ExprOp::Negate, 0.0, -1, a, -1});
      break;
    }
    case 3: {
      int a = random_expr(rng, nodes, dim, depth - 1);
      nodes.push_back({ExprOp::Sin, 0.0, -1, a, -1});
      break;
    }
    case 4: {
      int a = random_expr(rng, nodes, dim, depth - 1);
      nodes.push_back({ExprOp::Cos, 0.0, -1, a, -1});
      break;
    }
    default: {
      ExprOp ops[] = {ExprOp::Add, ExprOp::Sub, ExprOp::Mul, ExprOp::Div};
      ExprOp op = ops[pick(rng) % 4];
      int a = random_expr(rng, nodes, dim, depth - 1);
      int b;
      if (op == ExprOp::Div) {
        // keep denominators constant and nonzero
        nodes.push_back({ExprOp::Constant, c(rng), -1, -1, -1});
        b = static_cast<int>(nodes.size()) - 1;
      } else {
        b = random_expr(rng, nodes, dim, depth - 1);
      }
      nodes.push_back({op, 0.0, -1, a, b});
      break;
    }
  }
  return static_cast<int>(nodes.size()) - 1;
}

}  // namespace

TEST_CASE("custom rotation expression matches the builtin") {
  Domain circle = Domain::unit_circle();
  MapInstance custom = MapInstance::custom(parse_map("x1 + 0.618", circle));
  MapInstance builtin = MapInstance::rotation(0.618);
  for (const Point& p : random_points(circle, 1000, 5)) {
    CHECK(circle.metric(custom.eval(p), builtin.eval(p)) < 1e-12);
  }
}

TEST_CASE("truncated input reports position and expectation") {
  Domain circle = Domain::unit_circle();
  try {
    parse_map("x1 +", circle);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
    CHECK(e.expected() == std::string("operand"));
  }
}

TEST_CASE("sine expression evaluates per hand computation") {
  Domain circle = Domain::unit_circle();
  MapInstance m = MapInstance::custom(parse_map("x1 + 0.1 * sin(6.283185307 * x1)", circle));
  double got = m.eval({0.25})[0];
  CHECK(got == doctest::Approx(0.35).epsilon(1e-9));
}

TEST_CASE("parser error paths") {
  Domain circle = Domain::unit_circle();
  Domain torus = Domain::unit_torus(2);
  CHECK_THROWS_AS(parse_map("x1; x1", circle), ParseError);       // arity high
  CHECK_THROWS_AS(parse_map("x1", torus), ParseError);            // arity low
  CHECK_THROWS_AS(parse_map("x3 + 1", torus), ParseError);        // variable out of range
  CHECK_THROWS_AS(parse_map("y1 + 2", circle), ParseError);       // unknown identifier
  CHECK_THROWS_AS(parse_map("x1 / 0", circle), ParseError);       // constant-zero divisor
  CHECK_THROWS_AS(parse_map("x1 + + 2", circle), ParseError);     // operand expected
  CHECK_THROWS_AS(parse_map("sin x1", circle), ParseError);       // function needs parens
  CHECK_THROWS_AS(parse_map("(x1 + 2", circle), ParseError);      // unbalanced
  CHECK_THROWS_AS(parse_map("x1 + 2) * 3", circle), ParseError);  // trailing input
  CHECK_NOTHROW(parse_map("x1 / 0.5", circle));
  CHECK_NOTHROW(parse_map("-x1 + (2 - 0.5) * cos(x1)", circle));
}

TEST_CASE("print then reparse evaluates identically") {
  Domain torus = Domain::unit_torus(2);
  std::mt19937_64 rng(99);
  auto pts = random_points(torus, 100, 17);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<ExprNode> nodes;
    int root = random_expr(rng, nodes, 2, 4);
    Expr original(nodes, root);
    std::string text = original.to_string();
    CAPTURE(text);
    std::vector<Expr> reparsed = parse_expressions(text, 2);
    REQUIRE(reparsed.size() == 1);
    for (const Point& p : pts) {
      double a = original.eval(p);
      double b = reparsed[0].eval(p);
      if (std::isnan(a)) {
        CHECK(std::isnan(b));
      } else {
        CHECK(a == b);
      }
    }
  }
}

TEST_CASE("builtin evaluations") {
  MapInstance id = MapInstance::identity(Domain::unit_torus(2));
  Point p{0.3, 0.8};
  CHECK(id.eval(p) == p);

  MapInstance rot = MapInstance::rotation(0.25);
  CHECK(rot.eval({0.9})[0] == doctest::Approx(0.15).epsilon(1e-12));

  MapInstance cat = MapInstance::cat();
  Point q = cat.eval({0.2, 0.3});
  CHECK(q[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(q[1] == doctest::Approx(0.5).epsilon(1e-12));

  MapInstance ns = MapInstance::northsouth(0.1);
  CHECK(ns.eval({0.0})[0] == doctest::Approx(0.0).epsilon(1e-15));  // fixed point
  CHECK(ns.eval({0.5})[0] == doctest::Approx(0.5).epsilon(1e-12));  // fixed point
  CHECK(ns.eval({0.25})[0] == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("forward then inverse returns the start for every builtin") {
  std::vector<MapInstance> maps;
  maps.push_back(MapInstance::identity(Domain::unit_circle()));
  maps.push_back(MapInstance::rotation(0.618034));
  maps.push_back(MapInstance::northsouth(0.1));
  maps.push_back(MapInstance::cat());
  for (const MapInstance& m : maps) {
    REQUIRE(m.has_inverse());
    const Domain& dom = m.domain();
    for (const Point& p : random_points(dom, 1000, 23)) {
      Point back = m.eval_inverse(m.eval(p));
      CHECK(dom.metric(back, p) < 1e-9);
    }
  }
}

TEST_CASE("lipschitz bounds") {
  CHECK(MapInstance::rotation(0.618).lipschitz_bound() == 1.0);
  CHECK(MapInstance::rotation(0.618).lipschitz_rigorous());

  MapInstance ns = MapInstance::northsouth(0.1);
  CHECK(ns.lipschitz_bound() == doctest::Approx(1.0 + 0.2 * std::numbers::pi).epsilon(1e-12));

  MapInstance cat = MapInstance::cat();
  CHECK(cat.lipschitz_bound() == doctest::Approx(2.618034).epsilon(1e-6));

  // Sampled estimate for custom maps: above the true constant, flagged.
  MapInstance custom = MapInstance::custom(parse_map("x1 + 0.618", Domain::unit_circle()));
  CHECK(!custom.lipschitz_rigorous());
  CHECK(custom.lipschitz_bound() >= 1.0);
  CHECK(custom.lipschitz_bound() <= 2.0);  // 1.5 * (1 + sampling noise)

  MapInstance wavy =
      MapInstance::custom(parse_map("x1 + 0.1 * sin(6.283185307179586 * x1)", Domain::unit_circle()));
  CHECK(wavy.lipschitz_bound() >= 1.0 + 0.2 * std::numbers::pi);  // 1.5x margin over |f'|max
}

TEST_CASE("domain validation for builtins") {
  CHECK_THROWS_AS(MapInstance::rotation(0.1, Domain::unit_torus(2)), std::invalid_argument);
  CHECK_THROWS_AS(MapInstance::rotation(0.1, Domain::unit_box(1)), std::invalid_argument);
  CHECK_THROWS_AS(MapInstance::northsouth(0.2), std::invalid_argument);  // 2*pi*a >= 1
  CHECK_NOTHROW(MapInstance::northsouth(0.159));
  CHECK(MapInstance::cat().domain().dim() == 2);
}

TEST_CASE("measure-preservation flags") {
  CHECK(MapInstance::identity(Domain::unit_circle()).preserves_lebesgue());
  CHECK(MapInstance::rotation(0.5).preserves_lebesgue());
  CHECK(MapInstance::cat().preserves_lebesgue());
  CHECK(!MapInstance::northsouth(0.1).preserves_lebesgue());
  CHECK(!MapInstance::custom(parse_map("x1 + 0.5", Domain::unit_circle())).preserves_lebesgue());
}

TEST_CASE("non-finite custom evaluation is an error") {
  Domain box = Domain::unit_box(1);
  MapInstance m = MapInstance::custom(parse_map("x1 / (x1 - 0.5)", box));
  CHECK_THROWS_AS(m.eval({0.5}), EvalError);
  CHECK_NOTHROW(m.eval({0.25}));
}

TEST_CASE("northsouth periodic reduction") {
  MapInstance ns = MapInstance::northsouth(0.15);
  // near 1.0 the displacement is negative: reduction must land in [0, 1)
  double y = ns.eval({0.999})[0];
  CHECK(y >= 0.0);
  CHECK(y < 1.0);
  double z = ns.eval({0.001})[0];
  CHECK(z == doctest::Approx(0.001 + 0.15 * std::sin(kTwoPi * 0.001)).epsilon(1e-12));
}
