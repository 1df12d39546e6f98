#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "dcm/data.hpp"
#include "dcm/init.hpp"
#include "dcm/residual.hpp"
#include "dcm/stats.hpp"

namespace dcm {

enum class SearchStatus { Converged, CycleOverlap, Degenerate, IterationLimit };

std::string_view to_string(SearchStatus status);

struct TraceEntry {
  Index set_size = 0;
  Index selected = 0;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::Degenerate;
  VariableSet final_set;  // empty iff degenerate
  Index iterations = 0;
  std::vector<TraceEntry> trace;
  TestReport report;  // against final_set, or the last set tested if degenerate
  bool small_sample = false;
};

/// Iterates A <- test_step(A).selected until A is a fixed point (converged),
/// the selection has fewer than two members (degenerate), or max_iter steps
/// have run. When the selection returns to the set before last, the search
/// restarts once from the intersection of the two oscillating sets; a second
/// such oscillation ends the search with that intersection (cycle_overlap).
SearchOutcome dcm_search(const StandardizedCondition& cond1,
                         const StandardizedCondition& cond2, const VariableSet& initial,
                         double alpha, Index max_iter = 100);

/// The iteration and termination rules of dcm_search with the test step
/// supplied by the caller.
using StepFunction = std::function<StepResult(const VariableSet&)>;
SearchOutcome run_search_loop(const StepFunction& step, const VariableSet& initial,
                              Index max_iter);

struct MineConfig {
  double alpha = 0.05;
  InitConfig init;
  Index max_iter = 100;
  Index max_cliques = 10;
  Index init_retries = 3;  // fresh initializations before giving up
};

struct ResidualizationRecord {
  FactorModel cond1;
  FactorModel cond2;
  VariableSet dropped;  // removed from later searches (original indexing)
};

struct MiningRun {
  std::vector<SearchOutcome> cliques;  // non-degenerate, in discovery order
  std::vector<ResidualizationRecord> residualizations;  // one per clique
  MineConfig config;
  Index initializations = 0;
  bool small_sample = false;
};

/// Repeats greedy_init -> dcm_search, residualizing both conditions on each
/// clique found. Stops after max_cliques cliques, or once init_retries
/// consecutive fresh initializations all degenerate. All sets and reports in
/// the result use the input's variable indexing.
MiningRun mine(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
               const MineConfig& config);

}  // namespace dcm
