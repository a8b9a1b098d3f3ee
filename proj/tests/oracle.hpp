/* Brute-force reference implementations for the test suite.  Deliberately
 * naive and structured differently from the library (per-vertex DFS instead
 * of Tarjan, degree pruning instead of reach/co-reach) so the two routes can
 * disagree when one is wrong. */
#ifndef CHAINREC_TESTS_ORACLE_HPP
#define CHAINREC_TESTS_ORACLE_HPP

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "chainrec/transition_graph.hpp"

namespace oracle {

using Adjacency = std::vector<std::vector<chainrec::CellIndex>>;

inline Adjacency adjacency_of(const chainrec::TransitionGraph& g) {
  Adjacency adj(g.num_cells());
  for (chainrec::CellIndex c = 0; c < g.num_cells(); ++c) {
    auto s = g.successors(c);
    adj[c].assign(s.begin(), s.end());
  }
  return adj;
}

/// Plain DFS over paths of length >= 1.
inline std::set<chainrec::CellIndex> reachable(const Adjacency& adj, chainrec::CellIndex from) {
  std::set<chainrec::CellIndex> seen;
  std::vector<chainrec::CellIndex> stack(adj[from].begin(), adj[from].end());
  while (!stack.empty()) {
    chainrec::CellIndex u = stack.back();
    stack.pop_back();
    if (!seen.insert(u).second) continue;
    for (chainrec::CellIndex v : adj[u]) stack.push_back(v);
  }
  return seen;
}

inline bool has_path(const Adjacency& adj, chainrec::CellIndex from, chainrec::CellIndex to) {
  return reachable(adj, from).count(to) > 0;
}

/// A cell is recurrent iff it can come back to itself.
inline std::set<chainrec::CellIndex> recurrent_cells(const Adjacency& adj) {
  std::set<chainrec::CellIndex> out;
  for (chainrec::CellIndex c = 0; c < static_cast<chainrec::CellIndex>(adj.size()); ++c)
    if (has_path(adj, c, c)) out.insert(c);
  return out;
}

/// Mutual-reachability classes of the recurrent cells.
inline std::vector<std::set<chainrec::CellIndex>> chain_components(const Adjacency& adj) {
  std::set<chainrec::CellIndex> rec = recurrent_cells(adj);
  std::vector<std::set<chainrec::CellIndex>> classes;
  std::set<chainrec::CellIndex> assigned;
  for (chainrec::CellIndex c : rec) {
    if (assigned.count(c)) continue;
    std::set<chainrec::CellIndex> cls{c};
    auto from_c = reachable(adj, c);
    for (chainrec::CellIndex d : rec)
      if (d != c && from_c.count(d) && has_path(adj, d, c)) cls.insert(d);
    for (chainrec::CellIndex d : cls) assigned.insert(d);
    classes.push_back(std::move(cls));
  }
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
  return classes;
}

/// Maximal invariant set of the complement of `avoid`: repeatedly strip
/// vertices without a successor or without a predecessor inside the
/// remainder.  What survives is exactly the union of bi-infinite paths.
inline std::set<chainrec::CellIndex> max_invariant(const Adjacency& adj,
                                                   const std::set<chainrec::CellIndex>& avoid) {
  std::set<chainrec::CellIndex> alive;
  for (chainrec::CellIndex c = 0; c < static_cast<chainrec::CellIndex>(adj.size()); ++c)
    if (!avoid.count(c)) alive.insert(c);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = alive.begin(); it != alive.end();) {
      chainrec::CellIndex c = *it;
      bool has_succ = false;
      for (chainrec::CellIndex v : adj[c]) has_succ = has_succ || alive.count(v);
      bool has_pred = false;
      for (chainrec::CellIndex u : alive)
        for (chainrec::CellIndex v : adj[u]) has_pred = has_pred || (v == c && alive.count(u));
      if (!has_succ || !has_pred) {
        it = alive.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return alive;
}

inline std::set<chainrec::CellIndex> cellset_to_set(const chainrec::CellSet& s) {
  std::set<chainrec::CellIndex> out;
  s.for_each([&](chainrec::CellIndex c) { out.insert(c); });
  return out;
}

/// Seeded random digraph with out-degree 1..3 per vertex.
inline Adjacency random_graph(std::mt19937_64& rng, int min_cells = 8, int max_cells = 50) {
  std::uniform_int_distribution<int> size_dist(min_cells, max_cells);
  int n = size_dist(rng);
  std::uniform_int_distribution<int> deg_dist(1, 3);
  std::uniform_int_distribution<int> target_dist(0, n - 1);
  Adjacency adj(n);
  for (int c = 0; c < n; ++c) {
    int deg = deg_dist(rng);
    for (int e = 0; e < deg; ++e) adj[c].push_back(target_dist(rng));
    std::sort(adj[c].begin(), adj[c].end());
    adj[c].erase(std::unique(adj[c].begin(), adj[c].end()), adj[c].end());
  }
  return adj;
}

inline chainrec::TransitionGraph graph_of(Adjacency adj) {
  return chainrec::TransitionGraph(std::move(adj), 1.0, chainrec::EdgeMode::Center);
}

/// Distance on one axis by explicit shift minimization (independent of the
/// library's wrap arithmetic).
inline double axis_wrap_distance(double a, double b, double span) {
  double best = std::abs(a - b);
  for (int shift = -2; shift <= 2; ++shift)
    best = std::min(best, std::abs(a - b + shift * span));
  return best;
}

}  // namespace oracle

#endif
