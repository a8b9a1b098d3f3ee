#include "chainrec/transition_graph.hpp"

#include "scc_internal.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <thread>

namespace chainrec {

std::string edge_mode_name(EdgeMode m) { return m == EdgeMode::Center ? "center" : "outer"; }

TransitionGraph::TransitionGraph(std::vector<std::vector<CellIndex>> adjacency, double epsilon,
                                 EdgeMode mode)
    : num_cells_(static_cast<CellIndex>(adjacency.size())), epsilon_(epsilon), mode_(mode) {
  offsets_.resize(adjacency.size() + 1, 0);
  std::int64_t total = 0;
  for (size_t i = 0; i < adjacency.size(); ++i) {
    auto& succ = adjacency[i];
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    total += static_cast<std::int64_t>(succ.size());
    offsets_[i + 1] = total;
  }
  targets_.reserve(total);
  for (const auto& succ : adjacency) targets_.insert(targets_.end(), succ.begin(), succ.end());
}

bool TransitionGraph::has_edge(CellIndex from, CellIndex to) const {
  auto s = successors(from);
  return std::binary_search(s.begin(), s.end(), to);
}

TransitionGraph TransitionGraph::transpose() const {
  TransitionGraph t;
  t.num_cells_ = num_cells_;
  t.epsilon_ = epsilon_;
  t.mode_ = mode_;
  t.offsets_.assign(num_cells_ + 1, 0);
  for (CellIndex v : targets_) ++t.offsets_[v + 1];
  for (size_t i = 1; i < t.offsets_.size(); ++i) t.offsets_[i] += t.offsets_[i - 1];
  t.targets_.resize(targets_.size());
  std::vector<std::int64_t> cursor(t.offsets_.begin(), t.offsets_.end() - 1);
  // Visiting sources in ascending order fills each bucket in ascending order.
  for (CellIndex u = 0; u < num_cells_; ++u)
    for (CellIndex v : successors(u)) t.targets_[cursor[v]++] = u;
  return t;
}

namespace {

void parallel_cells(CellIndex n, int threads, const std::function<void(CellIndex, CellIndex)>& run) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = std::clamp(hw, 1, 16);
  if (threads > n) threads = n > 0 ? n : 1;
  if (threads == 1 || n < 256) {
    run(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  CellIndex chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    CellIndex lo = t * chunk;
    CellIndex hi = std::min<CellIndex>(lo + chunk, n);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        run(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

TransitionGraph build_graph(const Grid& grid, const MapInstance& map, double epsilon,
                            EdgeMode mode, int threads) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("build_graph: epsilon must be positive");
  if (map.domain().dim() != grid.dim())
    throw std::invalid_argument("build_graph: map and grid dimensions differ");
  const CellIndex n = grid.num_cells();
  std::vector<std::vector<CellIndex>> adjacency(n);
  const double outer_radius =
      epsilon + (map.lipschitz_bound() + 1.0) * 0.5 * grid.cell_diameter();
  parallel_cells(n, threads, [&](CellIndex lo, CellIndex hi) {
    std::vector<CellIndex> buf;
    for (CellIndex c = lo; c < hi; ++c) {
      Point image = map.eval(grid.cell_center(c));
      if (mode == EdgeMode::Center)
        grid.cells_with_center_in_ball(image, epsilon, buf);
      else
        grid.ball_cells(image, outer_radius, buf);
      adjacency[c] = buf;
    }
  });
  if (mode == EdgeMode::Center) {
    for (CellIndex c = 0; c < n; ++c)
      if (adjacency[c].empty())
        throw std::runtime_error(
            "build_graph: cell " + std::to_string(c) + " has no successors; epsilon " +
            std::to_string(epsilon) +
            " is below the grid resolution (no cell center within epsilon of the image point)");
  }
  return TransitionGraph(std::move(adjacency), epsilon, mode);
}

CellSet reachable(const TransitionGraph& g, CellIndex from) {
  if (from < 0 || from >= g.num_cells()) throw std::out_of_range("reachable: bad cell");
  CellSet seen(g.num_cells());
  std::vector<CellIndex> stack;
  for (CellIndex v : g.successors(from)) {
    if (!seen.test(v)) {
      seen.set(v);
      stack.push_back(v);
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

MorsePartition morse_partition(const TransitionGraph& g) {
  const CellIndex n = g.num_cells();
  auto [scc_raw, m] = detail::tarjan_sccs(
      n, [](CellIndex) { return false; },
      [&](CellIndex v, auto&& visit) {
        for (CellIndex w : g.successors(v)) visit(w);
      });

  // Canonical ids: SCCs numbered by their smallest cell.
  std::vector<CellIndex> min_cell(m, n);
  for (CellIndex c = 0; c < n; ++c) min_cell[scc_raw[c]] = std::min(min_cell[scc_raw[c]], c);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return min_cell[a] < min_cell[b]; });
  std::vector<int> renumber(m);
  for (int i = 0; i < m; ++i) renumber[order[i]] = i;

  MorsePartition p;
  p.num_cells = n;
  p.scc_of_cell.resize(n);
  p.scc_cells.assign(m, {});
  for (CellIndex c = 0; c < n; ++c) {
    int s = renumber[scc_raw[c]];
    p.scc_of_cell[c] = s;
    p.scc_cells[s].push_back(c);
  }

  p.scc_has_cycle.assign(m, 0);
  p.scc_successors.assign(m, {});
  for (CellIndex c = 0; c < n; ++c) {
    int s = p.scc_of_cell[c];
    for (CellIndex v : g.successors(c)) {
      int t = p.scc_of_cell[v];
      if (t == s)
        p.scc_has_cycle[s] = 1;  // intra-SCC edge: size >= 2 or a self-loop
      else
        p.scc_successors[s].push_back(t);
    }
  }
  for (auto& succ : p.scc_successors) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }

  // Kahn with a min-heap: deterministic topo order, sources first.
  std::vector<int> indegree(m, 0);
  for (const auto& succ : p.scc_successors)
    for (int t : succ) ++indegree[t];
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int s = 0; s < m; ++s)
    if (indegree[s] == 0) ready.push(s);
  p.scc_topo_order.reserve(m);
  while (!ready.empty()) {
    int s = ready.top();
    ready.pop();
    p.scc_topo_order.push_back(s);
    for (int t : p.scc_successors[s])
      if (--indegree[t] == 0) ready.push(t);
  }
  if (static_cast<int>(p.scc_topo_order.size()) != m)
    throw std::logic_error("morse_partition: condensation is not acyclic");
  p.scc_topo_pos.assign(m, 0);
  for (int i = 0; i < m; ++i) p.scc_topo_pos[p.scc_topo_order[i]] = i;

  p.morse_id_of_scc.assign(m, -1);
  p.recurrent = CellSet(n);
  for (int s = 0; s < m; ++s) {
    if (!p.scc_has_cycle[s]) continue;
    p.morse_id_of_scc[s] = static_cast<int>(p.morse_nodes.size());
    p.morse_nodes.push_back(s);  // ascending SCC id == ascending min cell
    for (CellIndex c : p.scc_cells[s]) p.recurrent.set(c);
  }
  p.transient = p.recurrent.complement();
  return p;
}

std::vector<int> MorsePartition::reachable_sccs(int scc) const {
  std::vector<char> seen(num_sccs(), 0);
  std::vector<int> stack{scc};
  seen[scc] = 1;
  std::vector<int> out;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    out.push_back(s);
    for (int t : scc_successors[s]) {
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> MorsePartition::reachable_morse_nodes(int scc) const {
  std::vector<int> nodes;
  for (int s : reachable_sccs(scc)) {
    int mid = morse_id_of_scc[s];
    if (mid >= 0) nodes.push_back(mid);
  }
  return nodes;  // reachable_sccs is sorted and ids ascend together
}

CellSet chain_recurrent_cells(const TransitionGraph& g) { return morse_partition(g).recurrent; }

std::vector<int> omega_nodes(const TransitionGraph& g, const MorsePartition& p, CellIndex c) {
  if (c < 0 || c >= g.num_cells()) throw std::out_of_range("omega_nodes: bad cell");
  return p.reachable_morse_nodes(p.scc_of_cell[c]);
}

std::vector<std::pair<int, int>> morse_reachability_edges(const MorsePartition& p) {
  const int k = p.num_morse_nodes();
  std::vector<std::vector<char>> reach(k, std::vector<char>(k, 0));
  for (int a = 0; a < k; ++a)
    for (int b : p.reachable_morse_nodes(p.morse_nodes[a]))
      if (b != a) reach[a][b] = 1;
  // Transitive reduction of the Morse order: drop edges with a stopover.
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (!reach[a][b]) continue;
      bool shortcut = false;
      for (int mid = 0; mid < k && !shortcut; ++mid)
        shortcut = mid != a && mid != b && reach[a][mid] && reach[mid][b];
      if (!shortcut) edges.emplace_back(a, b);
    }
  }
  return edges;
}

void write_edge_csv(const TransitionGraph& g, std::ostream& os) {
  os << "src,dst\n";
  for (CellIndex c = 0; c < g.num_cells(); ++c)
    for (CellIndex v : g.successors(c)) os << c << ',' << v << '\n';
}

void write_condensation_dot(const MorsePartition& p, std::ostream& os) {
  os << "digraph morse {\n  rankdir=TB;\n  node [shape=box];\n";
  for (int mid = 0; mid < p.num_morse_nodes(); ++mid)
    os << "  m" << mid << " [label=\"M" << mid << "\\n"
       << p.morse_cells(mid).size() << " cells\"];\n";
  for (auto [a, b] : morse_reachability_edges(p)) os << "  m" << a << " -> m" << b << ";\n";
  os << "}\n";
}

}  // namespace chainrec
