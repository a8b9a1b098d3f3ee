/* chainrec: chain-recurrence analysis of homeomorphisms on gridded boxes.
 *
 * Subcommands:
 *   analyze     build the transition graph, Morse partition, attractor
 *               lattice and complete Lyapunov function, verify, write files
 *   recurrence  statistical return-time harness / strong connectivity
 *   sweep       re-run graph construction over ascending epsilons
 *
 * Exit codes: 0 ok, 1 verification/threshold failure, 2 map parse error,
 * 3 Morse node count above the lattice cap.
 */
#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chainrec/analysis.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitParse = 2;
constexpr int kExitCap = 3;

void add_common_flags(CLI::App* cmd, chainrec::RunConfig& config) {
  cmd->add_option("--map", config.map_name,
                  "Builtin map (identity, rotation, northsouth, cat) or semicolon-separated "
                  "expressions in x1..xd");
  cmd->add_option("--alpha", config.alpha, "Rotation angle");
  cmd->add_option("--a", config.amplitude, "northsouth amplitude (|2*pi*a| < 1)");
  cmd->add_option("--grid", config.grid, "Subdivisions per axis (single value broadcasts)")
      ->delimiter(',');
  cmd->add_option("--epsilon", config.epsilon, "Chain step tolerance");
  cmd->add_option("--mode", config.mode, "Edge rule: center or outer")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, chainrec::EdgeMode>{{"center", chainrec::EdgeMode::Center},
                                                    {"outer", chainrec::EdgeMode::Outer}}));
  cmd->add_option("--out", config.out_dir, "Output directory");
  cmd->add_option("--format", config.formats, "Output formats: json,csv,dot")->delimiter(',');
  cmd->add_option("--seed", config.seed, "RNG seed");
  cmd->add_option("--threads", config.threads, "Worker threads (0 = auto)");
  cmd->set_config("--config", "", "Read key=value defaults (flags take precedence)");
}

int run(int argc, char** argv) {
  CLI::App app{"chain-recurrence analysis on gridded compact boxes"};
  app.require_subcommand(1);

  chainrec::RunConfig config;
  std::vector<double> epsilons;

  CLI::App* analyze = app.add_subcommand("analyze", "Full pipeline with verification");
  add_common_flags(analyze, config);
  analyze->add_option("--family", config.family, "Attractor family: canonical or full")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, chainrec::FamilyChoice>{{"canonical", chainrec::FamilyChoice::Canonical},
                                                        {"full", chainrec::FamilyChoice::Full}}));
  analyze->add_option("--cap", config.cap, "Morse node cap for the full lattice");
  analyze->add_flag("--timings", config.emit_timings,
                    "Include wall-clock timings in bundle.json (not byte-reproducible)");

  CLI::App* recurrence = app.add_subcommand("recurrence", "Return statistics / connectivity");
  add_common_flags(recurrence, config);
  recurrence->add_option("--points", config.points, "Sample points");
  recurrence->add_option("--iters", config.iters, "Iterations per orbit");
  recurrence->add_option("--delta", config.delta, "Return distance");
  recurrence->add_flag("--connectivity", config.connectivity,
                       "Check strong connectivity of the transition graph instead");
  recurrence->add_option("--min-return-fraction", config.min_return_fraction,
                         "Exit 1 when returned_fraction falls below this");

  CLI::App* sweep = app.add_subcommand("sweep", "Edge/recurrence counts over ascending epsilons");
  add_common_flags(sweep, config);
  sweep->add_option("--epsilons", epsilons, "Ascending epsilon list")->delimiter(',')->required();

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) {
    chainrec::AnalysisBundle bundle = chainrec::cmd_analyze(config);
    std::fprintf(stderr, "cells=%d edges=%lld morse_nodes=%d transients=%d\n",
                 static_cast<int>(bundle.cell_count),
                 static_cast<long long>(bundle.edge_count), bundle.morse_node_count,
                 static_cast<int>(bundle.transient_count));
    for (const auto& [stage, ms] : bundle.timings_ms)
      std::fprintf(stderr, "time %s: %.1f ms\n", stage.c_str(), ms);
    if (!bundle.all_checks_hold) {
      std::fprintf(stderr, "verification failed: see checks in bundle.json\n");
      return kExitVerification;
    }
    return kExitOk;
  }

  if (recurrence->parsed()) {
    chainrec::RecurrenceOutcome outcome = chainrec::cmd_recurrence(config);
    if (outcome.returns.has_value()) {
      std::fprintf(stderr, "returned_fraction=%.6f (n=%lld, iters=%lld, delta=%g)\n",
                   outcome.returns->returned_fraction,
                   static_cast<long long>(outcome.returns->n_points),
                   static_cast<long long>(outcome.returns->n_iters), outcome.returns->delta);
      if (outcome.returns->hypothesis_warning)
        std::fprintf(stderr,
                     "warning: map is not flagged measure-preserving; "
                     "no return guarantee applies\n");
      if (outcome.returns->returned_fraction < config.min_return_fraction)
        return kExitVerification;
    }
    if (outcome.connectivity.has_value()) {
      if (outcome.connectivity->strongly_connected) {
        std::fprintf(stderr, "strongly_connected=true\n");
      } else {
        std::fprintf(stderr, "strongly_connected=false witness=(%d,%d)\n",
                     static_cast<int>(outcome.connectivity->witness_from),
                     static_cast<int>(outcome.connectivity->witness_to));
        return kExitVerification;
      }
    }
    return kExitOk;
  }

  chainrec::SweepResult result = chainrec::cmd_sweep(config, epsilons);
  for (const auto& row : result.rows)
    std::fprintf(stderr, "eps=%.9g edges=%lld recurrent=%d morse=%d\n", row.epsilon,
                 static_cast<long long>(row.edge_count), static_cast<int>(row.recurrent_count),
                 row.morse_node_count);
  if (!result.monotone) {
    std::fprintf(stderr, "internal consistency failure: counts decreased along the sweep\n");
    return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const chainrec::ParseError& e) {
    std::fprintf(stderr, "map parse error at position %zu: %s (expected %s)\n", e.position(),
                 e.what(), e.expected().c_str());
    return kExitParse;
  } catch (const chainrec::LatticeCapError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitCap;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitVerification;
  }
}
