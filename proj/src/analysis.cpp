#include "chainrec/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace chainrec {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream os(path, std::ios::binary);  // fixed newlines on every platform
  if (!os) throw std::runtime_error("cannot open output file " + path.string());
  return os;
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

MapInstance make_map(const RunConfig& config) {
  if (config.map_name == "rotation") return MapInstance::rotation(config.alpha);
  if (config.map_name == "northsouth") return MapInstance::northsouth(config.amplitude);
  if (config.map_name == "cat") return MapInstance::cat();
  if (config.map_name == "identity") {
    int dim = config.grid.empty() ? 1 : static_cast<int>(config.grid.size());
    return MapInstance::identity(Domain::unit_torus(dim));
  }
  // Anything else is DSL text; the dimension is the expression count.
  int dim = 1 + static_cast<int>(std::count(config.map_name.begin(), config.map_name.end(), ';'));
  return MapInstance::custom(parse_map(config.map_name, Domain::unit_torus(dim)));
}

Grid make_grid(const RunConfig& config, const Domain& domain) {
  if (config.grid.empty()) throw std::invalid_argument("grid subdivisions are required");
  std::vector<std::int64_t> subdiv = config.grid;
  if (static_cast<int>(subdiv.size()) == 1 && domain.dim() > 1)
    subdiv.assign(domain.dim(), subdiv[0]);
  if (static_cast<int>(subdiv.size()) != domain.dim())
    throw std::invalid_argument("grid axis count does not match the map dimension");
  for (std::int64_t n : subdiv)
    if (n < 2) throw std::invalid_argument("grid requires at least 2 subdivisions per axis");
  return Grid(domain, std::move(subdiv));
}

nlohmann::ordered_json AnalysisBundle::to_json(bool include_timings) const {
  nlohmann::ordered_json j;
  j["grid"] = {{"subdivisions", grid_subdivisions}, {"cells", cell_count}};
  j["epsilon"] = epsilon;
  j["mode"] = mode;
  j["map"] = {{"description", map_description},
              {"lipschitz", lipschitz},
              {"lipschitz_rigorous", lipschitz_rigorous}};
  j["edges"] = edge_count;
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (size_t i = 0; i < morse_node_sizes.size(); ++i)
    nodes.push_back({{"id", i}, {"cells", morse_node_sizes[i]}, {"min_cell", morse_node_min_cells[i]}});
  j["morse_nodes"] = std::move(nodes);
  j["transient_cells"] = transient_count;
  nlohmann::ordered_json cedges = nlohmann::ordered_json::array();
  for (auto [a, b] : condensation_edges) cedges.push_back({a, b});
  j["condensation_edges"] = std::move(cedges);
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& pr : attractor_pairs)
    pairs.push_back({{"index", pr.index},
                     {"downset", pr.downset},
                     {"attractor_size", pr.attractor_size},
                     {"repeller_size", pr.repeller_size},
                     {"trivial", pr.trivial}});
  j["attractors"] = {{"family", family_kind}, {"pairs", std::move(pairs)}};
  nlohmann::ordered_json crit = nlohmann::ordered_json::array();
  for (const Rational& r : critical_values)
    crit.push_back({{"num", r.num}, {"den", r.den}, {"value", r.to_double()}});
  j["lyapunov"] = {{"num_pairs", lyapunov_pairs},
                   {"eta", eta},
                   {"critical_values", std::move(crit)},
                   {"max_neighbor_gap", max_neighbor_gap}};
  nlohmann::ordered_json checks;
  checks["separation"] = separation_ok;
  checks["strict_decrease"] = check_strict_decrease;
  checks["component_values"] = check_component_values;
  checks["cantor_digits"] = check_cantor_digits;
  if (intersection_identity.has_value())
    checks["intersection_identity"] = *intersection_identity;
  else
    checks["intersection_identity"] = nullptr;
  checks["all_hold"] = all_checks_hold;
  j["checks"] = std::move(checks);
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  if (include_timings)
    for (const auto& [stage, ms] : timings_ms) timings[stage] = ms;
  j["timings"] = std::move(timings);
  return j;
}

void write_lyapunov_csv(const MorsePartition& p, const CompleteLyapunov& L, std::ostream& os) {
  os << "cell,value,recurrent,morse_node\n";
  for (CellIndex c = 0; c < p.num_cells; ++c) {
    int node = p.morse_node_of(c);
    os << c << ',' << format_double(L.values[c]) << ',' << (node >= 0 ? 1 : 0) << ',' << node
       << '\n';
  }
}

AnalysisBundle cmd_analyze(const RunConfig& config) {
  AnalysisBundle bundle;
  MapInstance map = make_map(config);
  Grid grid = make_grid(config, map.domain());

  auto t0 = Clock::now();
  TransitionGraph graph = build_graph(grid, map, config.epsilon, config.mode, config.threads);
  bundle.timings_ms["build_graph"] = ms_since(t0);

  t0 = Clock::now();
  MorsePartition partition = morse_partition(graph);
  bundle.timings_ms["morse_partition"] = ms_since(t0);

  t0 = Clock::now();
  AttractorFamily family = config.family == FamilyChoice::Canonical
                               ? canonical_family(graph, partition)
                               : full_lattice(graph, partition, config.cap);
  bundle.timings_ms["family"] = ms_since(t0);

  t0 = Clock::now();
  SeparationReport separation = verify_separation(graph, partition, family);
  CompleteLyapunov lyapunov = complete_lyapunov(graph, partition, family, grid, separation);
  bundle.timings_ms["lyapunov"] = ms_since(t0);

  t0 = Clock::now();
  CompleteCheckReport checks = verify_complete(graph, partition, lyapunov, &grid);
  std::optional<IntersectionIdentityReport> identity;
  if (config.family == FamilyChoice::Full)
    identity = verify_intersection_identity(graph, partition, family);
  bundle.timings_ms["verify"] = ms_since(t0);

  bundle.grid_subdivisions.clear();
  for (int k = 0; k < grid.dim(); ++k) bundle.grid_subdivisions.push_back(grid.subdivisions(k));
  bundle.cell_count = grid.num_cells();
  bundle.edge_count = graph.num_edges();
  bundle.epsilon = config.epsilon;
  bundle.mode = edge_mode_name(config.mode);
  bundle.map_description = map_kind_name(map.spec().kind);
  if (map.spec().kind == MapKind::Rotation)
    bundle.map_description += "(" + format_double(map.spec().alpha) + ")";
  if (map.spec().kind == MapKind::NorthSouth)
    bundle.map_description += "(" + format_double(map.spec().amplitude) + ")";
  bundle.lipschitz = map.lipschitz_bound();
  bundle.lipschitz_rigorous = map.lipschitz_rigorous();

  bundle.morse_node_count = partition.num_morse_nodes();
  for (int mid = 0; mid < partition.num_morse_nodes(); ++mid) {
    bundle.morse_node_sizes.push_back(static_cast<std::int64_t>(partition.morse_cells(mid).size()));
    bundle.morse_node_min_cells.push_back(partition.morse_cells(mid).front());
  }
  bundle.transient_count = partition.transient.count();
  bundle.condensation_edges = morse_reachability_edges(partition);

  bundle.family_kind = family.canonical ? "canonical" : "full";
  for (size_t i = 0; i < family.pairs.size(); ++i) {
    const auto& pr = family.pairs[i];
    bundle.attractor_pairs.push_back({static_cast<int>(i) + 1, pr.downset,
                                      pr.attractor.count(), pr.repeller.count(), pr.trivial});
  }

  bundle.lyapunov_pairs = lyapunov.num_pairs;
  bundle.eta = lyapunov.eta;
  bundle.critical_values = lyapunov.critical_values;

  bundle.separation_ok = separation.all_separated && separation.nodes_intact;
  bundle.check_strict_decrease = checks.strict_decrease;
  bundle.check_component_values = checks.component_values;
  bundle.check_cantor_digits = checks.cantor_digits;
  bundle.max_neighbor_gap = checks.max_neighbor_gap;
  if (identity.has_value()) bundle.intersection_identity = identity->holds;
  bundle.all_checks_hold = bundle.separation_ok && checks.all() &&
                           (!identity.has_value() || identity->holds);

  // Internal consistency of the summary counts.
  std::int64_t covered = bundle.transient_count;
  for (auto s : bundle.morse_node_sizes) covered += s;
  if (covered != bundle.cell_count)
    throw std::logic_error("cmd_analyze: Morse node sizes plus transients do not cover the grid");

  if (config.wants("json")) {
    auto os = open_output(config.out_dir, "bundle.json");
    os << bundle.to_json(config.emit_timings).dump(2) << '\n';
  }
  if (config.wants("csv")) {
    auto os = open_output(config.out_dir, "lyapunov.csv");
    write_lyapunov_csv(partition, lyapunov, os);
    if (grid.num_cells() <= 10000) {  // raw cell graphs are unusable at scale
      auto edges = open_output(config.out_dir, "edges.csv");
      write_edge_csv(graph, edges);
    }
  }
  if (config.wants("dot")) {
    auto os = open_output(config.out_dir, "condensation.dot");
    write_condensation_dot(partition, os);
  }
  return bundle;
}

RecurrenceOutcome cmd_recurrence(const RunConfig& config) {
  RecurrenceOutcome outcome;
  MapInstance map = make_map(config);
  if (config.connectivity) {
    Grid grid = make_grid(config, map.domain());
    TransitionGraph graph = build_graph(grid, map, config.epsilon, config.mode, config.threads);
    outcome.connectivity = connectivity_check(graph);
  } else {
    outcome.returns =
        simulate_returns(map, config.points, config.iters, config.delta, config.seed, config.threads);
  }

  if (config.wants("json")) {
    nlohmann::ordered_json j;
    j["map"] = map_kind_name(map.spec().kind);
    if (outcome.returns.has_value()) {
      const RecurrenceReport& r = *outcome.returns;
      nlohmann::ordered_json hist = nlohmann::ordered_json::array();
      for (const auto& b : r.histogram)
        hist.push_back({{"bucket_lo", b.lo}, {"bucket_hi", b.hi}, {"count", b.count}});
      j["returns"] = {{"n_points", r.n_points},
                      {"n_iters", r.n_iters},
                      {"delta", r.delta},
                      {"seed", r.seed},
                      {"returned_fraction", r.returned_fraction},
                      {"hypothesis_warning", r.hypothesis_warning},
                      {"histogram", std::move(hist)}};
    }
    if (outcome.connectivity.has_value()) {
      const ConnectivityReport& c = *outcome.connectivity;
      j["connectivity"] = {{"strongly_connected", c.strongly_connected},
                           {"witness_from", c.witness_from},
                           {"witness_to", c.witness_to}};
    }
    auto os = open_output(config.out_dir, "recurrence.json");
    os << j.dump(2) << '\n';
  }
  if (config.wants("csv") && outcome.returns.has_value()) {
    auto os = open_output(config.out_dir, "histogram.csv");
    write_histogram_csv(*outcome.returns, os);
  }
  return outcome;
}

SweepResult cmd_sweep(const RunConfig& config, const std::vector<double>& epsilons) {
  if (epsilons.empty()) throw std::invalid_argument("cmd_sweep: at least one epsilon required");
  if (!std::is_sorted(epsilons.begin(), epsilons.end()))
    throw std::invalid_argument("cmd_sweep: epsilons must be ascending");
  MapInstance map = make_map(config);
  Grid grid = make_grid(config, map.domain());

  SweepResult result;
  for (double eps : epsilons) {
    TransitionGraph graph = build_graph(grid, map, eps, config.mode, config.threads);
    MorsePartition partition = morse_partition(graph);
    result.rows.push_back(
        {eps, graph.num_edges(), partition.recurrent.count(), partition.num_morse_nodes()});
  }
  for (size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].edge_count < result.rows[i - 1].edge_count ||
        result.rows[i].recurrent_count < result.rows[i - 1].recurrent_count)
      result.monotone = false;
  }

  if (config.wants("csv")) {
    auto os = open_output(config.out_dir, "sweep.csv");
    os << "epsilon,edges,recurrent_cells,morse_nodes\n";
    for (const auto& row : result.rows)
      os << format_double(row.epsilon) << ',' << row.edge_count << ',' << row.recurrent_count
         << ',' << row.morse_node_count << '\n';
  }
  return result;
}

}  // namespace chainrec
