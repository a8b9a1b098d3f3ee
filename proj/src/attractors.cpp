#include "chainrec/attractors.hpp"

#include "scc_internal.hpp"

#include <algorithm>

namespace chainrec {

int AttractorFamily::num_nontrivial() const {
  int k = 0;
  for (const auto& pr : pairs) k += pr.trivial ? 0 : 1;
  return k;
}

std::vector<const AttractorPair*> AttractorFamily::nontrivial() const {
  std::vector<const AttractorPair*> out;
  for (const auto& pr : pairs)
    if (!pr.trivial) out.push_back(&pr);
  return out;
}

namespace {

CellSet forward_closure(const TransitionGraph& g, const std::vector<CellIndex>& starts) {
  CellSet seen(g.num_cells());
  std::vector<CellIndex> stack;
  for (CellIndex c : starts) {
    if (!seen.test(c)) {
      seen.set(c);
      stack.push_back(c);
    }
  }
  while (!stack.empty()) {
    CellIndex u = stack.back();
    stack.pop_back();
    for (CellIndex v : g.successors(u)) {
      if (!seen.test(v)) {
        seen.set(v);
        stack.push_back(v);
      }
    }
  }
  return seen;
}

// Closure of `starts` inside the complement of `avoid`, along g's edges.
CellSet restricted_closure(const TransitionGraph& g, const CellSet& starts, const CellSet& avoid) {
  CellSet seen(g.num_cells());
  std::vector<CellIndex> stack;
  starts.for_each([&](CellIndex c) {
    seen.set(c);
    stack.push_back(c);
  });
  while (!stack.empty()) {
    CellIndex u = stack.back();
    stack.pop_back();
    for (CellIndex v : g.successors(u)) {
      if (!avoid.test(v) && !seen.test(v)) {
        seen.set(v);
        stack.push_back(v);
      }
    }
  }
  return seen;
}

// Cells of X \ avoid lying in a cycle-bearing SCC of the restricted graph.
CellSet restricted_cycle_cells(const TransitionGraph& g, const CellSet& avoid) {
  const CellIndex n = g.num_cells();
  auto [scc, count] = detail::tarjan_sccs(
      n, [&](CellIndex v) { return avoid.test(v); },
      [&](CellIndex v, auto&& visit) {
        for (CellIndex w : g.successors(v))
          if (!avoid.test(w)) visit(w);
      });
  std::vector<char> has_cycle(count, 0);
  for (CellIndex u = 0; u < n; ++u) {
    if (avoid.test(u)) continue;
    for (CellIndex v : g.successors(u))
      if (!avoid.test(v) && scc[v] == scc[u]) has_cycle[scc[u]] = 1;
  }
  CellSet cells(n);
  for (CellIndex u = 0; u < n; ++u)
    if (!avoid.test(u) && has_cycle[scc[u]]) cells.set(u);
  return cells;
}

/// Shares the transpose and the per-node reachability across many pair
/// constructions (the full lattice builds up to 2^cap of them).
struct PairBuilder {
  const TransitionGraph& g;
  const MorsePartition& p;
  TransitionGraph gt;
  std::vector<std::vector<int>> node_reach;  // per Morse node, sorted, incl. self

  PairBuilder(const TransitionGraph& graph, const MorsePartition& part)
      : g(graph), p(part), gt(graph.transpose()) {
    node_reach.reserve(p.num_morse_nodes());
    for (int mid = 0; mid < p.num_morse_nodes(); ++mid)
      node_reach.push_back(p.reachable_morse_nodes(p.morse_nodes[mid]));
  }

  bool downset_closed(const std::vector<int>& downset) const {
    for (int mid : downset)
      for (int other : node_reach[mid])
        if (!std::binary_search(downset.begin(), downset.end(), other)) return false;
    return true;
  }

  AttractorPair build(std::vector<int> downset) const {
    std::sort(downset.begin(), downset.end());
    downset.erase(std::unique(downset.begin(), downset.end()), downset.end());
    for (int mid : downset)
      if (mid < 0 || mid >= p.num_morse_nodes())
        throw std::invalid_argument("attractor_from_downset: bad Morse node id " +
                                    std::to_string(mid));
    if (!downset_closed(downset))
      throw std::invalid_argument(
          "attractor_from_downset: downset is not closed under reachability");

    std::vector<CellIndex> seeds;
    for (int mid : downset) {
      const auto& cells = p.morse_cells(mid);
      seeds.insert(seeds.end(), cells.begin(), cells.end());
    }
    AttractorPair pair;
    pair.downset = std::move(downset);
    pair.attractor = forward_closure(g, seeds);

    CellSet core = restricted_cycle_cells(g, pair.attractor);
    CellSet fwd = restricted_closure(g, core, pair.attractor);
    CellSet bwd = restricted_closure(gt, core, pair.attractor);
    fwd &= bwd;
    pair.repeller = std::move(fwd);

    pair.trivial = pair.attractor.empty() || pair.attractor.is_all();
    return pair;
  }
};

void sort_and_dedup(std::vector<AttractorPair>& pairs) {
  auto key_less = [](const AttractorPair& a, const AttractorPair& b) {
    CellIndex ca = a.attractor.count(), cb = b.attractor.count();
    if (ca != cb) return ca < cb;
    auto va = a.attractor.to_vector(), vb = b.attractor.to_vector();
    return va < vb;  // lexicographic on ascending cells: min cell first
  };
  std::sort(pairs.begin(), pairs.end(), key_less);
  pairs.erase(std::unique(pairs.begin(), pairs.end(),
                          [](const AttractorPair& a, const AttractorPair& b) {
                            return a.attractor == b.attractor;
                          }),
              pairs.end());
}

}  // namespace

AttractorPair attractor_from_downset(const TransitionGraph& g, const MorsePartition& p,
                                     std::vector<int> downset) {
  return PairBuilder(g, p).build(std::move(downset));
}

AttractorFamily canonical_family(const TransitionGraph& g, const MorsePartition& p) {
  PairBuilder builder(g, p);
  AttractorFamily family;
  family.canonical = true;
  for (int mid = 0; mid < p.num_morse_nodes(); ++mid) {
    AttractorPair pair = builder.build(builder.node_reach[mid]);
    if (!pair.trivial) family.pairs.push_back(std::move(pair));
  }
  sort_and_dedup(family.pairs);
  return family;
}

AttractorFamily full_lattice(const TransitionGraph& g, const MorsePartition& p, int cap) {
  const int k = p.num_morse_nodes();
  if (k > cap) throw LatticeCapError(k, cap);
  PairBuilder builder(g, p);
  std::vector<std::uint64_t> reach_mask(k, 0);
  for (int mid = 0; mid < k; ++mid)
    for (int other : builder.node_reach[mid]) reach_mask[mid] |= std::uint64_t{1} << other;

  AttractorFamily family;
  family.canonical = false;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    bool closed = true;
    for (int mid = 0; mid < k && closed; ++mid)
      if (mask & (std::uint64_t{1} << mid)) closed = (reach_mask[mid] & ~mask) == 0;
    if (!closed) continue;
    std::vector<int> downset;
    for (int mid = 0; mid < k; ++mid)
      if (mask & (std::uint64_t{1} << mid)) downset.push_back(mid);
    family.pairs.push_back(builder.build(std::move(downset)));
  }
  sort_and_dedup(family.pairs);
  return family;
}

IntersectionIdentityReport verify_intersection_identity(const TransitionGraph& g,
                                                        const MorsePartition& p,
                                                        const AttractorFamily& family) {
  IntersectionIdentityReport report;
  CellSet right = CellSet::all(g.num_cells());
  for (const auto& pair : family.pairs) {
    CellSet both = pair.attractor;
    both |= pair.repeller;
    right &= both;
  }
  const CellSet& left = p.recurrent;
  report.recurrent_count = left.count();
  report.intersection_count = right.count();
  report.lower_inclusion = left.is_subset_of(right);
  report.holds = report.lower_inclusion && right.is_subset_of(left);
  CellSet extra = right;
  extra.subtract(left);
  report.extra_cells = extra.to_vector();
  CellSet missing = left;
  missing.subtract(right);
  report.missing_cells = missing.to_vector();
  return report;
}

SeparationReport verify_separation(const TransitionGraph&, const MorsePartition& p,
                                   const AttractorFamily& family) {
  SeparationReport report;
  const int k = p.num_morse_nodes();

  // side[pair][node]: +1 node inside A, -1 inside A*, 0 outside both,
  // 2 split across sets (breaks the pair invariant).
  std::vector<std::vector<int>> side(family.pairs.size(), std::vector<int>(k, 0));
  report.nodes_intact = true;
  for (size_t i = 0; i < family.pairs.size(); ++i) {
    const auto& pair = family.pairs[i];
    for (int mid = 0; mid < k; ++mid) {
      const auto& cells = p.morse_cells(mid);
      size_t in_a = 0, in_r = 0;
      for (CellIndex c : cells) {
        in_a += pair.attractor.test(c) ? 1 : 0;
        in_r += pair.repeller.test(c) ? 1 : 0;
      }
      if (in_a == cells.size() && in_r == 0)
        side[i][mid] = 1;
      else if (in_r == cells.size() && in_a == 0)
        side[i][mid] = -1;
      else if (in_a == 0 && in_r == 0)
        side[i][mid] = 0;
      else {
        side[i][mid] = 2;
        report.nodes_intact = false;
      }
    }
  }

  report.all_separated = true;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      SeparationReport::Entry entry;
      entry.node_a = a;
      entry.node_b = b;
      for (size_t i = 0; i < family.pairs.size(); ++i) {
        int sa = side[i][a], sb = side[i][b];
        if ((sa == 1 && sb == -1) || (sa == -1 && sb == 1)) {
          entry.separating_pair = static_cast<int>(i);
          break;
        }
      }
      if (entry.separating_pair < 0) report.all_separated = false;
      report.entries.push_back(entry);
    }
  }
  return report;
}

}  // namespace chainrec
