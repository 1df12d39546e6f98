#include "dcm/search.hpp"

#include <algorithm>
#include <numeric>

#include "dcm/error.hpp"
#include "dcm/parallel.hpp"

namespace dcm {

std::string_view to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::Converged: return "converged";
    case SearchStatus::CycleOverlap: return "cycle_overlap";
    case SearchStatus::Degenerate: return "degenerate";
    case SearchStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

SearchOutcome run_search_loop(const StepFunction& test, const VariableSet& initial,
                              Index max_iter) {
  if (initial.empty()) throw ValidationError("initial set is empty");
  if (max_iter == 0) throw ValidationError("max_iter must be positive");

  SearchOutcome out;
  VariableSet current = initial;
  VariableSet previous;
  int cycles = 0;

  while (true) {
    if (out.iterations >= max_iter) {
      out.status = SearchStatus::IterationLimit;
      out.final_set = current;
      break;
    }
    StepResult step = test(current);
    ++out.iterations;
    out.small_sample = out.small_sample || step.small_sample;
    out.trace.push_back({current.size(), step.selected.size()});
    out.report = std::move(step.report);
    VariableSet next = std::move(step.selected);

    // A single variable cannot form a clique.
    if (next.size() <= 1) {
      out.status = SearchStatus::Degenerate;
      break;
    }
    if (next == current) {
      out.status = SearchStatus::Converged;
      out.final_set = std::move(current);
      break;
    }
    if (!previous.empty() && next == previous) {
      ++cycles;
      VariableSet overlap = set_intersection(current, next);
      if (overlap.size() <= 1) {
        out.status = SearchStatus::Degenerate;
        break;
      }
      if (cycles >= 2) {
        out.status = SearchStatus::CycleOverlap;
        out.report = test(overlap).report;
        out.final_set = std::move(overlap);
        break;
      }
      previous = std::move(current);
      current = std::move(overlap);
      continue;
    }
    previous = std::move(current);
    current = std::move(next);
  }
  return out;
}

SearchOutcome dcm_search(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
                         const VariableSet& initial, double alpha, Index max_iter) {
  return run_search_loop(
      [&](const VariableSet& A) { return test_step(cond1, cond2, A, alpha); }, initial, max_iter);
}

namespace {

VariableSet to_original(const VariableSet& s, const std::vector<Index>& active) {
  std::vector<Index> out;
  out.reserve(s.size());
  for (Index i : s) out.push_back(active[i]);
  return VariableSet(std::move(out));
}

// Re-express an outcome computed on the active columns in input indexing.
// Variables no longer active report delta 0, sigma0 1 and p-value 0.5.
void remap(SearchOutcome& outcome, const std::vector<Index>& active, Index p) {
  outcome.final_set = to_original(outcome.final_set, active);
  TestReport& rep = outcome.report;
  rep.set_tested = to_original(rep.set_tested, active);
  if (active.size() == p) return;
  std::vector<double> delta(p, 0.0), sig(p, 1.0), pv(p, 0.5);
  for (Index t = 0; t < active.size(); ++t) {
    delta[active[t]] = rep.delta[t];
    sig[active[t]] = rep.sigma0[t];
    pv[active[t]] = rep.pvalues[t];
  }
  rep.delta = std::move(delta);
  rep.sigma0 = std::move(sig);
  rep.pvalues = std::move(pv);
}

}  // namespace

MiningRun mine(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
               const MineConfig& config) {
  if (cond1.p() != cond2.p()) throw ValidationError("conditions have different variable counts");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (config.init_retries == 0) throw ValidationError("init_retries must be positive");

  MiningRun run;
  run.config = config;
  const Index p = cond1.p();
  std::vector<Index> active(p);
  std::iota(active.begin(), active.end(), Index{0});
  StandardizedCondition work1 = cond1;
  StandardizedCondition work2 = cond2;

  while (run.cliques.size() < config.max_cliques) {
    bool found = false;
    for (Index retry = 0; retry < config.init_retries && !found; ++retry) {
      if (active.size() < 2) break;
      InitConfig init = config.init;
      init.init_size = std::min(init.init_size, static_cast<Index>(active.size()));
      init.rng_seed = derive_seed(config.init.rng_seed, run.initializations++);

      const VariableSet start = greedy_init(work1, work2, init);
      SearchOutcome outcome = dcm_search(work1, work2, start, config.alpha, config.max_iter);
      run.small_sample = run.small_sample || outcome.small_sample;
      if (outcome.status == SearchStatus::Degenerate) continue;

      const VariableSet local = outcome.final_set;
      remap(outcome, active, p);
      const bool repeat = std::any_of(run.cliques.begin(), run.cliques.end(), [&](const auto& c) {
        return is_subset(outcome.final_set, c.final_set);
      });
      if (repeat) continue;

      ResidualizationRecord record;
      record.cond1 = estimate_loadings(work1, local);
      record.cond2 = estimate_loadings(work2, local);
      Residualized r1 = residualize(work1, local, record.cond1);
      Residualized r2 = residualize(work2, local, record.cond2);
      work1 = std::move(r1.condition);
      work2 = std::move(r2.condition);

      const VariableSet gone(
          [&] {
            std::vector<Index> v(r1.dropped.begin(), r1.dropped.end());
            v.insert(v.end(), r2.dropped.begin(), r2.dropped.end());
            return v;
          }());
      record.dropped = to_original(gone, active);
      if (!gone.empty()) {
        std::vector<Index> keep_local;
        std::vector<Index> keep_original;
        for (Index t = 0; t < active.size(); ++t) {
          if (gone.contains(t)) continue;
          keep_local.push_back(t);
          keep_original.push_back(active[t]);
        }
        work1 = subset_columns(work1, keep_local);
        work2 = subset_columns(work2, keep_local);
        active = std::move(keep_original);
      }

      run.cliques.push_back(std::move(outcome));
      run.residualizations.push_back(std::move(record));
      found = true;
    }
    if (!found) break;
  }
  return run;
}

}  // namespace dcm
