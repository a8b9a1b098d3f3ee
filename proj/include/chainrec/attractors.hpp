/* Combinatorial attractors and dual repellers over a transition graph:
 * out-closed forward closures of Morse-node downsets paired with the maximal
 * invariant set of the complement, the canonical per-node family, the full
 * downset lattice, and the structural checks used by the acceptance suite. */
#ifndef CHAINREC_ATTRACTORS_HPP
#define CHAINREC_ATTRACTORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "chainrec/transition_graph.hpp"

namespace chainrec {

struct AttractorPair {
  CellSet attractor;        // out-closed: successors of members are members
  CellSet repeller;         // maximal invariant set avoiding the attractor
  std::vector<int> downset; // generating Morse node ids, sorted
  bool trivial = false;     // attractor is empty or everything
};

/** A deterministic, deduplicated list of attractor-repeller pairs, sorted by
 *  (attractor size, smallest attractor cell).  The positions of the
 *  non-trivial pairs define the digit order of the Lyapunov coding. */
struct AttractorFamily {
  std::vector<AttractorPair> pairs;
  bool canonical = false;

  int num_nontrivial() const;
  std::vector<const AttractorPair*> nontrivial() const;  // in pairs order
};

/** A = forward closure of the downset's Morse cells; A* = cells of the
 *  complement lying on a bi-infinite path avoiding A.  The downset must be
 *  closed under Morse-level reachability. */
AttractorPair attractor_from_downset(const TransitionGraph& g, const MorsePartition& p,
                                     std::vector<int> downset);

/// One pair per Morse node (its reachability down-closure), trivial pairs
/// dropped, deduplicated.
AttractorFamily canonical_family(const TransitionGraph& g, const MorsePartition& p);

class LatticeCapError : public std::runtime_error {
 public:
  LatticeCapError(int morse_count, int cap)
      : std::runtime_error("full_lattice: " + std::to_string(morse_count) +
                           " Morse nodes exceed the cap of " + std::to_string(cap)),
        morse_count_(morse_count), cap_(cap) {}
  int morse_count() const { return morse_count_; }
  int cap() const { return cap_; }

 private:
  int morse_count_;
  int cap_;
};

/// Every reachability-closed downset of the Morse order, trivial pairs
/// included but flagged.  Throws LatticeCapError above `cap` Morse nodes.
AttractorFamily full_lattice(const TransitionGraph& g, const MorsePartition& p, int cap = 15);

/** Checks whether the chain recurrent set equals the intersection of
 *  A union A* over the family.  The lower inclusion (recurrent set inside
 *  the intersection) holds for any family; equality is the claim tested,
 *  and it requires the full lattice. */
struct IntersectionIdentityReport {
  bool holds = false;
  bool lower_inclusion = false;
  CellIndex recurrent_count = 0;
  CellIndex intersection_count = 0;
  std::vector<CellIndex> extra_cells;    // in the intersection, not recurrent
  std::vector<CellIndex> missing_cells;  // recurrent, not in the intersection
};
IntersectionIdentityReport verify_intersection_identity(const TransitionGraph& g,
                                                        const MorsePartition& p,
                                                        const AttractorFamily& family);

/** For every pair of distinct Morse nodes, finds a family member putting one
 *  node in the attractor and the other in the repeller. */
struct SeparationReport {
  struct Entry {
    int node_a = -1, node_b = -1;
    int separating_pair = -1;  // index into family.pairs, -1 if none found
  };
  std::vector<Entry> entries;
  bool all_separated = false;
  // Every Morse node sits wholly inside A or wholly inside A* for every
  // family member (so no node is ever separated from itself).
  bool nodes_intact = false;
};
SeparationReport verify_separation(const TransitionGraph& g, const MorsePartition& p,
                                   const AttractorFamily& family);

}  // namespace chainrec

#endif
