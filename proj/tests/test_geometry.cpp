#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "chainrec/geometry.hpp"
#include "oracle.hpp"

using namespace chainrec;

namespace {

Grid circle_grid(std::int64_t n) { return Grid(Domain::unit_circle(), {n}); }

Domain mixed_domain() {
  // One periodic axis, one plain interval, non-unit spans.
  return Domain({{0.0, 2.0, true}, {-1.0, 1.0, false}});
}

}  // namespace

TEST_CASE("metric wraps the shorter arc on a circle") {
  Domain circle = Domain::unit_circle();
  CHECK(circle.metric({0.1}, {0.9}) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(circle.metric({0.37}, {0.37}) == 0.0);
  CHECK(circle.metric({0.0}, {1.0}) == 0.0);  // identified endpoints
}

TEST_CASE("metric on the torus combines per-axis wrap minima") {
  Domain torus = Domain::unit_torus(2);
  double d = torus.metric({0.95, 0.1}, {0.05, 0.2});
  CHECK(d == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
}

TEST_CASE("metric rejects dimension mismatches") {
  Domain torus = Domain::unit_torus(2);
  CHECK_THROWS_AS(torus.metric({0.1}, {0.2, 0.3}), std::invalid_argument);
}

TEST_CASE("metric is symmetric and satisfies the triangle inequality") {
  Domain dom = mixed_domain();
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto sample = [&] {
    return Point{u(rng) * 2.0, -1.0 + 2.0 * u(rng)};
  };
  for (int i = 0; i < 1000; ++i) {
    Point p = sample(), q = sample(), r = sample();
    double pq = dom.metric(p, q), qp = dom.metric(q, p);
    CHECK(pq == qp);
    CHECK(dom.metric(p, r) <= pq + dom.metric(q, r) + 1e-12);
    // cross-check against shift-minimization on each axis
    double a0 = oracle::axis_wrap_distance(p[0], q[0], 2.0);
    double a1 = std::abs(p[1] - q[1]);
    CHECK(pq == doctest::Approx(std::sqrt(a0 * a0 + a1 * a1)).epsilon(1e-12));
  }
}

TEST_CASE("cell_of picks the unique half-open cell") {
  Grid g = circle_grid(4);
  CHECK(g.cell_of({0.0}) == 0);
  CHECK(g.cell_of({0.999}) == 3);
  CHECK(g.cell_of({1.0}) == 0);   // wraps
  CHECK(g.cell_of({-0.25}) == 3); // reduces first

  Grid torus(Domain::unit_torus(2), {8, 8});
  CellIndex c = torus.cell_of({0.51, 0.26});
  auto coords = torus.cell_coords(c);
  CHECK(coords[0] == 4);
  CHECK(coords[1] == 2);
}

TEST_CASE("cell_of rejects points off a non-periodic axis but accepts the endpoint") {
  Grid g(Domain::unit_box(1), {10});
  CHECK_THROWS_AS(g.cell_of({1.5}), std::out_of_range);
  CHECK_THROWS_AS(g.cell_of({-0.1}), std::out_of_range);
  CHECK(g.cell_of({1.0}) == 9);  // hi belongs to the last cell
}

TEST_CASE("cell centers") {
  Grid g = circle_grid(4);
  CHECK(g.cell_center(0)[0] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(g.cell_center(3)[0] == doctest::Approx(0.875).epsilon(1e-15));

  Grid torus(Domain::unit_torus(2), {8, 8});
  std::int64_t coords[] = {4, 2};
  Point p = torus.cell_center(torus.cell_from_coords(coords));
  CHECK(p[0] == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.3125).epsilon(1e-15));
}

TEST_CASE("cell_of inverts cell_center on every cell") {
  for (const Grid& g : {circle_grid(4), circle_grid(17), Grid(mixed_domain(), {6, 9}),
                        Grid(Domain::unit_torus(2), {8, 8})}) {
    for (CellIndex c = 0; c < g.num_cells(); ++c) CHECK(g.cell_of(g.cell_center(c)) == c);
  }
}

TEST_CASE("cell_diameter is the norm of the cell widths") {
  CHECK(circle_grid(4).cell_diameter() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(circle_grid(1024).cell_diameter() == doctest::Approx(1.0 / 1024).epsilon(1e-15));
  Grid square(Domain::unit_box(2), {10, 10});
  CHECK(square.cell_diameter() == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
}

TEST_CASE("ball_cells on the circle: wrap-around window") {
  Grid g = circle_grid(8);
  // [-0.13, 0.13] mod 1 clips cells 1 and 6 symmetrically (both boxes sit
  // 0.125 away) besides covering 7 and 0.
  auto cells = g.ball_cells({0.0}, 0.13);
  CHECK(cells == std::vector<CellIndex>{0, 1, 6, 7});
  auto tight = g.ball_cells({0.0}, 0.12);
  CHECK(tight == std::vector<CellIndex>{0, 7});
}

TEST_CASE("ball_cells degenerate radii") {
  Grid g = circle_grid(8);
  // around a cell center, smaller than the distance to any other box
  auto tiny = g.ball_cells(g.cell_center(3), 0.01);
  CHECK(tiny == std::vector<CellIndex>{3});
  // half the circle covers everything
  auto all = g.ball_cells({0.3}, 0.5);
  CHECK(static_cast<CellIndex>(all.size()) == g.num_cells());
  CHECK_THROWS_AS(g.ball_cells({0.3}, 0.0), std::invalid_argument);
}

TEST_CASE("ball_cells always contains the cell of the query point") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Grid g(Domain::unit_torus(2), {8, 8});
  for (int i = 0; i < 200; ++i) {
    Point p{u(rng), u(rng)};
    double r = 0.001 + 0.3 * u(rng);
    auto cells = g.ball_cells(p, r);
    CellIndex home = g.cell_of(p);
    CHECK(std::binary_search(cells.begin(), cells.end(), home));
    CHECK(std::is_sorted(cells.begin(), cells.end()));
  }
}

TEST_CASE("ball_cells matches the per-cell box-distance oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Grid g(mixed_domain(), {7, 5});
  const Domain& dom = g.domain();
  for (int trial = 0; trial < 100; ++trial) {
    Point p{2.0 * u(rng), -1.0 + 2.0 * u(rng)};
    double r = 0.05 + 0.8 * u(rng);
    std::set<CellIndex> expected;
    for (CellIndex c = 0; c < g.num_cells(); ++c) {
      auto coords = g.cell_coords(c);
      double sum = 0.0;
      for (int k = 0; k < g.dim(); ++k) {
        double lo = dom.axis(k).lo + static_cast<double>(coords[k]) * g.cell_width(k);
        double d = dom.axis_distance_to_interval(k, p[k], lo, lo + g.cell_width(k));
        sum += d * d;
      }
      if (std::sqrt(sum) <= r) expected.insert(c);
    }
    auto got = g.ball_cells(p, r);
    CHECK(std::set<CellIndex>(got.begin(), got.end()) == expected);
  }
}

TEST_CASE("cells_with_center_in_ball matches a direct metric scan") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Grid g = circle_grid(64);
  for (int trial = 0; trial < 100; ++trial) {
    Point p{u(rng)};
    double r = 0.01 + 0.4 * u(rng);
    std::set<CellIndex> expected;
    for (CellIndex c = 0; c < g.num_cells(); ++c)
      if (g.domain().metric(p, g.cell_center(c)) < r) expected.insert(c);
    auto got = g.cells_with_center_in_ball(p, r);
    CHECK(std::set<CellIndex>(got.begin(), got.end()) == expected);
  }
}

TEST_CASE("balls of one cell diameter around all centers cover the grid") {
  for (const Grid& g : {circle_grid(12), Grid(Domain::unit_torus(2), {6, 6})}) {
    CellSet covered(g.num_cells());
    for (CellIndex c = 0; c < g.num_cells(); ++c)
      for (CellIndex v : g.ball_cells(g.cell_center(c), g.cell_diameter())) covered.set(v);
    CHECK(covered.is_all());
  }
}

TEST_CASE("CellSet algebra") {
  CellSet a(130), b(130);
  a.set(0);
  a.set(64);
  a.set(129);
  b.set(64);
  CHECK(a.count() == 3);
  CHECK(b.is_subset_of(a));
  CHECK(!a.is_subset_of(b));
  CHECK(a.intersects(b));
  CellSet c = a;
  c.subtract(b);
  CHECK(c.to_vector() == std::vector<CellIndex>{0, 129});
  CHECK(a.complement().count() == 127);
  CHECK(CellSet::all(130).is_all());
  CellSet d = a;
  d &= b;
  CHECK(d.to_vector() == std::vector<CellIndex>{64});
  d |= c;
  CHECK(d == a);
}
