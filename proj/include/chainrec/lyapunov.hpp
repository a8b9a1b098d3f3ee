/* Per-pair Lyapunov functions and the complete Lyapunov function with
 * Cantor-coded critical values: each non-trivial attractor-repeller pair
 * contributes one ternary digit, recurrent cells receive exact rationals
 * over a power of three, transient cells a strictly decreasing blend. */
#ifndef CHAINREC_LYAPUNOV_HPP
#define CHAINREC_LYAPUNOV_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "chainrec/attractors.hpp"
#include "chainrec/transition_graph.hpp"

namespace chainrec {

/// Exact nonnegative rational; the denominators here are powers of three.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational reduced(std::int64_t num, std::int64_t den);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const;
};

/// First `digits` base-3 digits all 0 or 2 and nothing after them: membership
/// in the depth-`digits` approximation of the Cantor middle-third set.
/// Exact integer arithmetic.
bool has_cantor_digits(const Rational& value, int digits);

/** Values in [0,1] per cell: 0 exactly on the pair's attractor, 1 exactly on
 *  its repeller, non-increasing along every edge. */
struct PairFunction {
  std::vector<double> values;
  int pair_index = 0;  // 1-based digit position within the family coding
};

/// g0(c) = d(c,A) / (d(c,A) + d(c,A*)), distances between cell centers.
std::vector<double> pair_g0(const Grid& grid, const AttractorPair& pair);

/** The per-pair Lyapunov function: g1 = running max of g0 over everything
 *  reachable, clamped to 0/1 on A/A*, elsewhere the exact fixpoint of
 *  g = (g1 + max successor g)/2 evaluated in reverse topological order
 *  (constant g1 on cycle-bearing components).  Throws on trivial pairs and
 *  on pairs that split a chain transitive component. */
PairFunction pair_lyapunov(const TransitionGraph& g, const MorsePartition& p,
                           const AttractorPair& pair, const Grid& grid);

struct CompleteLyapunov {
  std::vector<double> values;                 // per cell
  int num_pairs = 0;                          // k, the coded non-trivial pairs
  double eta = 0.0;                           // transient correction weight 3^-(k+1)
  std::vector<std::uint64_t> node_digits;     // per Morse node, bit n-1 = digit of pair n
  std::vector<Rational> node_values;          // per Morse node, exact
  std::vector<Rational> critical_values;      // sorted, unique
};

/** Assemble the complete Lyapunov function from a family whose separation
 *  has been verified (refuses otherwise: without separation, distinct
 *  components could share a value). */
CompleteLyapunov complete_lyapunov(const TransitionGraph& g, const MorsePartition& p,
                                   const AttractorFamily& family, const Grid& grid,
                                   const SeparationReport& separation);

/** The three defining conditions, checked exhaustively:
 *  1. strictly decreasing across every edge leaving a transient cell;
 *  2. recurrent values equal iff same Morse node (exact digit comparison);
 *  3. every critical value Cantor-coded in its first k ternary digits
 *     (exact integer digit extraction).
 *  max_neighbor_gap is a smoke metric (largest value jump between
 *  grid-adjacent cells), reported but never asserted. */
struct CompleteCheckReport {
  bool strict_decrease = false;
  std::optional<std::pair<CellIndex, CellIndex>> decrease_witness;
  bool component_values = false;
  std::optional<std::pair<CellIndex, CellIndex>> component_witness;
  bool cantor_digits = false;
  std::optional<Rational> digit_witness;
  double max_neighbor_gap = 0.0;

  bool all() const { return strict_decrease && component_values && cantor_digits; }
};

CompleteCheckReport verify_complete(const TransitionGraph& g, const MorsePartition& p,
                                    const CompleteLyapunov& L, const Grid* grid = nullptr);

}  // namespace chainrec

#endif
