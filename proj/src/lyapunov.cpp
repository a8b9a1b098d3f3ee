#include "chainrec/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace chainrec {

Rational Rational::reduced(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("Rational: denominator must be positive");
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

bool Rational::operator<(const Rational& o) const {
  // Denominators are powers of 3 well below overflow range.
  return num * o.den < o.num * den;
}

bool has_cantor_digits(const Rational& value, int digits) {
  if (value.num < 0 || value.num > value.den) return false;
  std::int64_t cur = value.num % value.den;  // value 1 would be all-2 digits
  if (value.num == value.den) return false;  // 1 is not reachable with k digits then zeros
  for (int i = 0; i < digits; ++i) {
    cur *= 3;
    std::int64_t digit = cur / value.den;
    cur %= value.den;
    if (digit != 0 && digit != 2) return false;
  }
  return cur == 0;  // nothing but zeros past digit k
}

std::vector<double> pair_g0(const Grid& grid, const AttractorPair& pair) {
  if (pair.attractor.empty() || pair.repeller.empty())
    throw std::invalid_argument("pair_g0: attractor and repeller must be nonempty");
  const Domain& dom = grid.domain();
  const CellIndex n = grid.num_cells();
  std::vector<Point> a_centers, r_centers;
  pair.attractor.for_each([&](CellIndex c) { a_centers.push_back(grid.cell_center(c)); });
  pair.repeller.for_each([&](CellIndex c) { r_centers.push_back(grid.cell_center(c)); });
  std::vector<double> g0(n);
  for (CellIndex c = 0; c < n; ++c) {
    if (pair.attractor.test(c)) {
      g0[c] = 0.0;
      continue;
    }
    if (pair.repeller.test(c)) {
      g0[c] = 1.0;
      continue;
    }
    Point center = grid.cell_center(c);
    double da = std::numeric_limits<double>::infinity();
    for (const Point& q : a_centers) da = std::min(da, dom.metric(center, q));
    double dr = std::numeric_limits<double>::infinity();
    for (const Point& q : r_centers) dr = std::min(dr, dom.metric(center, q));
    g0[c] = da / (da + dr);
  }
  return g0;
}

PairFunction pair_lyapunov(const TransitionGraph& g, const MorsePartition& p,
                           const AttractorPair& pair, const Grid& grid) {
  if (pair.trivial || pair.attractor.empty() || pair.attractor.is_all())
    throw std::invalid_argument("pair_lyapunov: pair must be non-trivial");
  for (int mid = 0; mid < p.num_morse_nodes(); ++mid) {
    const auto& cells = p.morse_cells(mid);
    size_t in_a = 0, in_r = 0;
    for (CellIndex c : cells) {
      in_a += pair.attractor.test(c) ? 1 : 0;
      in_r += pair.repeller.test(c) ? 1 : 0;
    }
    bool intact = (in_a == cells.size() && in_r == 0) || (in_r == cells.size() && in_a == 0) ||
                  (in_a == 0 && in_r == 0);
    if (!intact)
      throw std::invalid_argument("pair_lyapunov: pair splits a chain transitive component");
  }

  std::vector<double> g0 = pair_g0(grid, pair);

  // g1 per SCC: max of g0 over the SCC and everything after it.  Constant on
  // each SCC because reach sets coincide there.
  const int m = p.num_sccs();
  std::vector<double> g1(m, 0.0);
  for (int i = m - 1; i >= 0; --i) {
    int s = p.scc_topo_order[i];
    double best = 0.0;
    for (CellIndex c : p.scc_cells[s]) best = std::max(best, g0[c]);
    for (int t : p.scc_successors[s]) best = std::max(best, g1[t]);
    g1[s] = best;
  }

  PairFunction f;
  f.values.assign(g.num_cells(), 0.0);
  // Sinks first, so a transient cell's successors are already final.
  for (int i = m - 1; i >= 0; --i) {
    int s = p.scc_topo_order[i];
    for (CellIndex c : p.scc_cells[s]) {
      if (pair.attractor.test(c)) {
        f.values[c] = 0.0;
      } else if (pair.repeller.test(c)) {
        f.values[c] = 1.0;
      } else if (p.scc_has_cycle[s]) {
        f.values[c] = g1[s];
      } else {
        double succ_best = 0.0;
        for (CellIndex v : g.successors(c)) succ_best = std::max(succ_best, f.values[v]);
        f.values[c] = 0.5 * (g1[s] + succ_best);
      }
    }
  }
  return f;
}

CompleteLyapunov complete_lyapunov(const TransitionGraph& g, const MorsePartition& p,
                                   const AttractorFamily& family, const Grid& grid,
                                   const SeparationReport& separation) {
  if (!separation.all_separated || !separation.nodes_intact)
    throw std::invalid_argument(
        "complete_lyapunov: family does not separate all component pairs; "
        "values would not distinguish components");

  CompleteLyapunov L;
  std::vector<const AttractorPair*> coded = family.nontrivial();
  const int k = static_cast<int>(coded.size());
  if (k > 62)
    throw std::invalid_argument("complete_lyapunov: more than 62 coded pairs unsupported");
  L.num_pairs = k;

  std::vector<PairFunction> functions;
  functions.reserve(coded.size());
  for (int n = 0; n < k; ++n) {
    functions.push_back(pair_lyapunov(g, p, *coded[n], grid));
    functions.back().pair_index = n + 1;
  }

  std::int64_t den = 1;
  for (int n = 0; n < k; ++n) den *= 3;

  const int node_count = p.num_morse_nodes();
  L.node_digits.assign(node_count, 0);
  L.node_values.reserve(node_count);
  for (int mid = 0; mid < node_count; ++mid) {
    CellIndex probe = p.morse_cells(mid).front();
    std::int64_t num = 0;
    std::int64_t weight = den;
    for (int n = 0; n < k; ++n) {
      weight /= 3;
      bool in_attractor = coded[n]->attractor.test(probe);
      if (!in_attractor) {
        if (!coded[n]->repeller.test(probe))
          throw std::logic_error("complete_lyapunov: Morse node outside both sets of a pair");
        L.node_digits[mid] |= std::uint64_t{1} << n;
        num += 2 * weight;
      }
    }
    L.node_values.push_back(Rational::reduced(num, den));
  }

  L.critical_values = L.node_values;
  std::sort(L.critical_values.begin(), L.critical_values.end());
  L.critical_values.erase(std::unique(L.critical_values.begin(), L.critical_values.end()),
                          L.critical_values.end());

  // eta keeps the transient correction strictly below one ternary digit.
  L.eta = 1.0 / (3.0 * static_cast<double>(den));

  // One float route for everybody: on recurrent cells every g_n is exactly
  // its digit, so equal digit vectors give bit-identical sums.
  const CellIndex cells = g.num_cells();
  L.values.assign(cells, 0.0);
  for (CellIndex c = 0; c < cells; ++c) {
    double sum = 0.0;
    double scale = 1.0;
    for (int n = 0; n < k; ++n) {
      scale /= 3.0;
      sum += 2.0 * functions[n].values[c] * scale;
    }
    L.values[c] = sum;
  }
  const int total_sccs = p.num_sccs();
  p.transient.for_each([&](CellIndex c) {
    int pos = p.scc_topo_pos[p.scc_of_cell[c]];
    double h = static_cast<double>(total_sccs - pos) / static_cast<double>(total_sccs);
    L.values[c] += L.eta * h;
  });
  return L;
}

CompleteCheckReport verify_complete(const TransitionGraph& g, const MorsePartition& p,
                                    const CompleteLyapunov& L, const Grid* grid) {
  CompleteCheckReport report;

  report.strict_decrease = true;
  for (CellIndex c = 0; c < g.num_cells() && report.strict_decrease; ++c) {
    if (!p.transient.test(c)) continue;
    for (CellIndex v : g.successors(c)) {
      if (!(L.values[v] < L.values[c])) {
        report.strict_decrease = false;
        report.decrease_witness = {c, v};
        break;
      }
    }
  }

  report.component_values = true;
  for (int mid = 0; mid < p.num_morse_nodes() && report.component_values; ++mid) {
    const auto& cells = p.morse_cells(mid);
    for (CellIndex c : cells) {
      if (L.values[c] != L.values[cells.front()]) {
        report.component_values = false;
        report.component_witness = {cells.front(), c};
        break;
      }
    }
  }
  for (int a = 0; a < p.num_morse_nodes() && report.component_values; ++a) {
    for (int b = a + 1; b < p.num_morse_nodes(); ++b) {
      bool same_digits = L.node_digits[a] == L.node_digits[b];
      bool same_value = !(L.node_values[a] < L.node_values[b]) &&
                        !(L.node_values[b] < L.node_values[a]);
      if (same_digits || same_value) {
        report.component_values = false;
        report.component_witness = {p.morse_cells(a).front(), p.morse_cells(b).front()};
        break;
      }
    }
  }

  report.cantor_digits = true;
  for (const Rational& value : L.critical_values) {
    if (!has_cantor_digits(value, L.num_pairs)) {
      report.cantor_digits = false;
      report.digit_witness = value;
      break;
    }
  }

  if (grid != nullptr) {
    double worst = 0.0;
    const int d = grid->dim();
    for (CellIndex c = 0; c < grid->num_cells(); ++c) {
      auto coords = grid->cell_coords(c);
      for (int k = 0; k < d; ++k) {
        std::int64_t n = grid->subdivisions(k);
        std::int64_t up = coords[k] + 1;
        if (up >= n) {
          if (!grid->domain().axis(k).periodic) continue;
          up = 0;
        }
        auto neighbor = coords;
        neighbor[k] = up;
        CellIndex other = grid->cell_from_coords(neighbor);
        worst = std::max(worst, std::fabs(L.values[c] - L.values[other]));
      }
    }
    report.max_neighbor_gap = worst;
  }
  return report;
}

}  // namespace chainrec
