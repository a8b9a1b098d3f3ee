/* The eps-chain transition digraph over grid cells: construction (center and
 * Lipschitz-fattened outer edge rules), reachability, the chain recurrent
 * set, and its partition into chain transitive components (Morse nodes). */
#ifndef CHAINREC_TRANSITION_GRAPH_HPP
#define CHAINREC_TRANSITION_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "chainrec/geometry.hpp"
#include "chainrec/maps.hpp"

namespace chainrec {

enum class EdgeMode { Center, Outer };

std::string edge_mode_name(EdgeMode m);

/** Immutable digraph over cells in CSR form.  Successor lists are sorted
 *  and duplicate-free, so identical inputs give bit-identical graphs no
 *  matter how construction was scheduled. */
class TransitionGraph {
 public:
  TransitionGraph(std::vector<std::vector<CellIndex>> adjacency, double epsilon, EdgeMode mode);

  CellIndex num_cells() const { return num_cells_; }
  std::int64_t num_edges() const { return static_cast<std::int64_t>(targets_.size()); }
  double epsilon() const { return epsilon_; }
  EdgeMode mode() const { return mode_; }

  std::span<const CellIndex> successors(CellIndex c) const {
    return {targets_.data() + offsets_[static_cast<size_t>(c)],
            targets_.data() + offsets_[static_cast<size_t>(c) + 1]};
  }
  bool has_edge(CellIndex from, CellIndex to) const;
  bool has_self_loop(CellIndex c) const { return has_edge(c, c); }

  /// Edge set reversed; epsilon/mode metadata carried over.
  TransitionGraph transpose() const;

 private:
  TransitionGraph() = default;

  CellIndex num_cells_ = 0;
  std::vector<std::int64_t> offsets_;
  std::vector<CellIndex> targets_;
  double epsilon_ = 0.0;
  EdgeMode mode_ = EdgeMode::Center;
};

/** Build the transition graph for one map at one resolution.
 *
 *  Center mode: edge c -> c' iff metric(f(center(c)), center(c')) < eps;
 *  the eps-chain relation restricted to the finite subsystem of centers.
 *  Outer mode: edge c -> c' iff the closed box of c' meets the closed ball
 *  of radius eps + L*diam/2 + diam/2 around f(center(c)); this over-covers
 *  every true eps-step from any point of c into any point of c'.
 *
 *  Per-cell successor lists are computed independently (optionally in
 *  parallel); the result never depends on the thread count.  Throws if
 *  eps <= 0, or if center mode leaves a cell with no successors (eps below
 *  the grid resolution), since all downstream structure assumes out-degree
 *  at least one.
 */
TransitionGraph build_graph(const Grid& grid, const MapInstance& map, double epsilon,
                            EdgeMode mode, int threads = 0);

/// Cells reachable from `from` by a path of length >= 1 (`from` itself is
/// included exactly when it lies on a cycle).
CellSet reachable(const TransitionGraph& g, CellIndex from);

/// Cells lying on some cycle: the union of the cycle-bearing SCCs.
CellSet chain_recurrent_cells(const TransitionGraph& g);

/** SCC decomposition with the condensation order.  SCC ids are renumbered
 *  by smallest contained cell, so the partition is canonical.  Morse nodes
 *  are the cycle-bearing SCCs (size >= 2, or a singleton with a self-loop),
 *  again ordered by smallest cell. */
struct MorsePartition {
  CellIndex num_cells = 0;
  std::vector<int> scc_of_cell;
  std::vector<std::vector<CellIndex>> scc_cells;     // ascending within each SCC
  std::vector<char> scc_has_cycle;
  std::vector<std::vector<int>> scc_successors;      // condensation DAG, sorted
  std::vector<int> scc_topo_order;                   // sources first, sinks last
  std::vector<int> scc_topo_pos;                     // inverse permutation
  std::vector<int> morse_nodes;                      // SCC ids
  std::vector<int> morse_id_of_scc;                  // -1 for transient SCCs
  CellSet recurrent;
  CellSet transient;

  int num_sccs() const { return static_cast<int>(scc_cells.size()); }
  int num_morse_nodes() const { return static_cast<int>(morse_nodes.size()); }
  /// Morse node id of a cell, -1 if the cell is transient.
  int morse_node_of(CellIndex c) const { return morse_id_of_scc[static_cast<size_t>(scc_of_cell[static_cast<size_t>(c)])]; }
  const std::vector<CellIndex>& morse_cells(int morse_id) const {
    return scc_cells[static_cast<size_t>(morse_nodes[static_cast<size_t>(morse_id)])];
  }

  /// SCC ids reachable from `scc` in the condensation, including itself.
  std::vector<int> reachable_sccs(int scc) const;
  /// Morse node ids reachable from `scc` (via reachable_sccs), sorted.
  std::vector<int> reachable_morse_nodes(int scc) const;
};

MorsePartition morse_partition(const TransitionGraph& g);

/// Morse nodes intersecting reachable(g, c) together with c's own node when
/// c is recurrent: the combinatorial omega-limit of the cell.
std::vector<int> omega_nodes(const TransitionGraph& g, const MorsePartition& p, CellIndex c);

/// Reachability edges between Morse nodes, transitively reduced; this is the
/// Morse graph drawn by the DOT export.
std::vector<std::pair<int, int>> morse_reachability_edges(const MorsePartition& p);

/// Flat "src,dst" edge list, one edge per line.
void write_edge_csv(const TransitionGraph& g, std::ostream& os);

/// Condensation restricted to Morse nodes, nodes labeled id + cell count.
void write_condensation_dot(const MorsePartition& p, std::ostream& os);

}  // namespace chainrec

#endif
