#include "chainrec/recurrence.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

namespace chainrec {

RecurrenceReport simulate_returns(const MapInstance& map, std::int64_t n_points,
                                  std::int64_t n_iters, double delta, std::uint64_t seed,
                                  int threads) {
  if (n_points <= 0 || n_iters <= 0) throw std::invalid_argument("simulate_returns: counts must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("simulate_returns: delta must be positive");
  const Domain& dom = map.domain();

  RecurrenceReport report;
  report.n_points = n_points;
  report.n_iters = n_iters;
  report.delta = delta;
  report.seed = seed;
  report.hypothesis_warning = !map.preserves_lebesgue();

  // All starting points drawn from one stream up front, so the sample does
  // not depend on how orbits are scheduled afterwards.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> starts(n_points);
  for (auto& p : starts) {
    p.resize(dom.dim());
    for (int k = 0; k < dom.dim(); ++k)
      p[k] = dom.axis(k).lo + unit(rng) * dom.axis(k).span();
  }

  std::vector<std::int64_t> first_return(n_points, -1);
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = std::clamp(hw, 1, 16);
  threads = static_cast<int>(std::min<std::int64_t>(threads, n_points));

  auto run = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      Point x = starts[i];
      for (std::int64_t it = 1; it <= n_iters; ++it) {
        x = map.eval(x);
        if (dom.metric(x, starts[i]) < delta) {
          first_return[i] = it;
          break;
        }
      }
    }
  };
  if (threads <= 1) {
    run(0, n_points);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    std::int64_t chunk = (n_points + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(lo + chunk, n_points);
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

  // Doubling buckets [1,1], [2,3], [4,7], ... merged in point order.
  std::vector<ReturnHistogramBucket> buckets;
  for (std::int64_t lo = 1; lo <= n_iters; lo *= 2)
    buckets.push_back({lo, std::min(2 * lo - 1, n_iters), 0});
  std::int64_t returned = 0;
  for (std::int64_t i = 0; i < n_points; ++i) {
    std::int64_t t = first_return[i];
    if (t < 0) continue;
    ++returned;
    size_t b = 0;
    while (buckets[b].hi < t) ++b;
    ++buckets[b].count;
  }
  report.returned_fraction = static_cast<double>(returned) / static_cast<double>(n_points);
  report.histogram = std::move(buckets);
  return report;
}

ConnectivityReport connectivity_check(const TransitionGraph& g) {
  ConnectivityReport report;
  const CellIndex n = g.num_cells();
  if (n == 0) {
    report.strongly_connected = true;
    return report;
  }
  // Forward cover from cell 0, then backward cover: both full iff strongly
  // connected, and a missing cell is one half of a witness pair.
  CellSet fwd = reachable(g, 0);
  fwd.set(0);
  if (fwd.count() != n) {
    CellSet gap = fwd.complement();
    report.strongly_connected = false;
    report.witness_from = 0;
    report.witness_to = gap.to_vector().front();
    return report;
  }
  TransitionGraph gt = g.transpose();
  CellSet bwd = reachable(gt, 0);
  bwd.set(0);
  if (bwd.count() != n) {
    CellSet gap = bwd.complement();
    report.strongly_connected = false;
    report.witness_from = gap.to_vector().front();  // cannot reach cell 0
    report.witness_to = 0;
    return report;
  }
  report.strongly_connected = true;
  return report;
}

void write_histogram_csv(const RecurrenceReport& report, std::ostream& os) {
  os << "bucket_lo,bucket_hi,count\n";
  for (const auto& b : report.histogram) os << b.lo << ',' << b.hi << ',' << b.count << '\n';
}

}  // namespace chainrec
