/* Orchestration behind the CLI: reproducible run configuration, the full
 * analyze pipeline (graph -> Morse partition -> attractor family -> complete
 * Lyapunov -> checks), the recurrence harness, and the epsilon sweep, with
 * machine-readable outputs. */
#ifndef CHAINREC_ANALYSIS_HPP
#define CHAINREC_ANALYSIS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainrec/attractors.hpp"
#include "chainrec/lyapunov.hpp"
#include "chainrec/recurrence.hpp"

#include "json.hpp"

namespace chainrec {

enum class FamilyChoice { Canonical, Full };

struct RunConfig {
  std::string map_name = "identity";  // builtin name or a DSL expression list
  double alpha = 0.0;                 // rotation angle
  double amplitude = 0.1;             // northsouth amplitude
  std::vector<std::int64_t> grid;     // per-axis subdivisions (single value broadcasts)
  double epsilon = 0.0;
  EdgeMode mode = EdgeMode::Center;
  FamilyChoice family = FamilyChoice::Canonical;
  int cap = 15;
  std::string out_dir = ".";
  std::vector<std::string> formats = {"json", "csv", "dot"};
  std::uint64_t seed = 0;
  std::int64_t points = 1000;
  std::int64_t iters = 1000;
  double delta = 0.05;
  bool connectivity = false;
  double min_return_fraction = 0.0;
  int threads = 0;
  bool emit_timings = false;

  bool wants(const std::string& format) const;
};

/// Builds the MapInstance (and its natural domain) a config names.
/// Builtins fix their domains; custom expressions and the identity run on
/// the fully periodic unit box with one axis per grid entry.
MapInstance make_map(const RunConfig& config);
Grid make_grid(const RunConfig& config, const Domain& domain);

struct AnalysisBundle {
  std::vector<std::int64_t> grid_subdivisions;
  CellIndex cell_count = 0;
  std::int64_t edge_count = 0;
  double epsilon = 0.0;
  std::string mode;
  std::string map_description;
  double lipschitz = 0.0;
  bool lipschitz_rigorous = true;

  int morse_node_count = 0;
  std::vector<std::int64_t> morse_node_sizes;
  std::vector<CellIndex> morse_node_min_cells;
  CellIndex transient_count = 0;
  std::vector<std::pair<int, int>> condensation_edges;  // Morse-level, reduced

  std::string family_kind;
  struct PairSummary {
    int index = 0;  // 1-based position in the family
    std::vector<int> downset;
    CellIndex attractor_size = 0;
    CellIndex repeller_size = 0;
    bool trivial = false;
  };
  std::vector<PairSummary> attractor_pairs;

  int lyapunov_pairs = 0;
  double eta = 0.0;
  std::vector<Rational> critical_values;

  bool separation_ok = false;
  bool check_strict_decrease = false;
  bool check_component_values = false;
  bool check_cantor_digits = false;
  double max_neighbor_gap = 0.0;
  std::optional<bool> intersection_identity;  // present when the full lattice ran
  bool all_checks_hold = false;

  std::map<std::string, double> timings_ms;

  nlohmann::ordered_json to_json(bool include_timings) const;
};

/** build_graph -> morse_partition -> family -> complete_lyapunov ->
 *  verify_complete (+ the intersection identity when family = full).
 *  Writes bundle.json, lyapunov.csv, condensation.dot (and edges.csv for
 *  graphs up to 10^4 cells) into config.out_dir per config.formats. */
AnalysisBundle cmd_analyze(const RunConfig& config);

/// simulate_returns and/or connectivity_check; writes recurrence.json and
/// histogram.csv.  The report threshold (min_return_fraction) decides the
/// CLI exit status, not this function.
struct RecurrenceOutcome {
  std::optional<RecurrenceReport> returns;
  std::optional<ConnectivityReport> connectivity;
};
RecurrenceOutcome cmd_recurrence(const RunConfig& config);

struct SweepRow {
  double epsilon = 0.0;
  std::int64_t edge_count = 0;
  CellIndex recurrent_count = 0;
  int morse_node_count = 0;
};
struct SweepResult {
  std::vector<SweepRow> rows;
  bool monotone = true;  // edge and recurrent counts non-decreasing
};

/// One row per epsilon (ascending required); writes sweep.csv.
SweepResult cmd_sweep(const RunConfig& config, const std::vector<double>& epsilons);

void write_lyapunov_csv(const MorsePartition& p, const CompleteLyapunov& L, std::ostream& os);

}  // namespace chainrec

#endif
