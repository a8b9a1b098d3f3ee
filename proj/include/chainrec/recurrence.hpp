/* Statistical return-time harness for measure-preserving maps, and the
 * strong-connectivity check for transition graphs. */
#ifndef CHAINREC_RECURRENCE_HPP
#define CHAINREC_RECURRENCE_HPP

#include <cstdint>
#include <vector>

#include "chainrec/maps.hpp"
#include "chainrec/transition_graph.hpp"

namespace chainrec {

struct ReturnHistogramBucket {
  std::int64_t lo = 0;  // first iteration in the bucket
  std::int64_t hi = 0;  // last iteration in the bucket, inclusive
  std::int64_t count = 0;
};

struct RecurrenceReport {
  std::int64_t n_points = 0;
  std::int64_t n_iters = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double returned_fraction = 0.0;
  std::vector<ReturnHistogramBucket> histogram;  // doubling buckets over first-return times
  // Set when the map is not flagged Lebesgue-preserving: the almost-sure
  // return guarantee does not apply, the numbers are purely empirical.
  bool hypothesis_warning = false;
};

/** Samples n_points uniformly (seeded, reproducible), iterates each forward
 *  up to n_iters steps, and records the first return within delta of the
 *  start.  Orbits run independently (optionally in parallel); the merge
 *  order is fixed by point index, so reports are bit-identical for a given
 *  seed regardless of thread count. */
RecurrenceReport simulate_returns(const MapInstance& map, std::int64_t n_points,
                                  std::int64_t n_iters, double delta, std::uint64_t seed,
                                  int threads = 0);

struct ConnectivityReport {
  bool strongly_connected = false;
  // On failure: a pair with no path witness_from -> witness_to.
  CellIndex witness_from = -1;
  CellIndex witness_to = -1;
};

ConnectivityReport connectivity_check(const TransitionGraph& g);

void write_histogram_csv(const RecurrenceReport& report, std::ostream& os);

}  // namespace chainrec

#endif
