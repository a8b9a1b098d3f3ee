/* Iterative Tarjan over an implicit graph, shared by the full-graph
 * decomposition and the restricted (attractor-complement) decomposition. */
#ifndef CHAINREC_SCC_INTERNAL_HPP
#define CHAINREC_SCC_INTERNAL_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "chainrec/geometry.hpp"

namespace chainrec::detail {

/// SuccFn: void(CellIndex v, auto&& visit) enumerating v's successors in a
/// fixed order.  SkipFn: bool(CellIndex) marking vertices outside the
/// subgraph (their scc id stays -1).  Returns (scc id per cell, scc count);
/// ids follow Tarjan completion order; renumber for canonical output.
template <typename SkipFn, typename SuccFn>
std::pair<std::vector<int>, int> tarjan_sccs(CellIndex n, SkipFn&& skip, SuccFn&& for_succ) {
  std::vector<int> index(n, -1), lowlink(n, 0), scc(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<CellIndex> stack;
  std::vector<CellIndex> children;  // child segments of the active DFS path
  struct Frame {
    CellIndex v;
    size_t child_begin, child_end, next_child;
  };
  std::vector<Frame> frames;
  int next_index = 0, scc_count = 0;

  auto push_vertex = [&](CellIndex v) {
    size_t begin = children.size();
    for_succ(v, [&](CellIndex w) { children.push_back(w); });
    frames.push_back({v, begin, children.size(), begin});
    index[v] = lowlink[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = 1;
  };

  for (CellIndex root = 0; root < n; ++root) {
    if (skip(root) || index[root] != -1) continue;
    push_vertex(root);
    while (!frames.empty()) {
      Frame& fr = frames.back();
      CellIndex v = fr.v;
      bool descended = false;
      while (fr.next_child < fr.child_end) {
        CellIndex w = children[fr.next_child++];
        if (skip(w)) continue;
        if (index[w] == -1) {
          push_vertex(w);  // may reallocate `children`; fr is re-fetched below
          descended = true;
          break;
        }
        if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
      }
      if (descended) continue;
      Frame done = frames.back();
      if (lowlink[v] == index[v]) {
        while (true) {
          CellIndex w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          scc[w] = scc_count;
          if (w == v) break;
        }
        ++scc_count;
      }
      children.resize(done.child_begin);
      frames.pop_back();
      if (!frames.empty()) {
        Frame& parent = frames.back();
        lowlink[parent.v] = std::min(lowlink[parent.v], lowlink[v]);
      }
    }
  }
  return {std::move(scc), scc_count};
}

}  // namespace chainrec::detail

#endif
