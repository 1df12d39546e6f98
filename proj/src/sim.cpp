#include "dcm/sim.hpp"

#include <cmath>
#include <random>

#include "dcm/error.hpp"
#include "dcm/parallel.hpp"

namespace dcm {

std::string_view to_string(Background background) {
  return background == Background::Positive ? "positive" : "uncorrelated";
}

std::optional<Background> parse_background(std::string_view text) {
  if (text == "uncorrelated") return Background::Uncorrelated;
  if (text == "positive") return Background::Positive;
  return std::nullopt;
}

void SimulationSpec::validate() const {
  if (k < 2) throw ValidationError("clique size k must be at least 2");
  if (k > p) throw ValidationError("clique size k exceeds p");
  if (n1 < kMinSamples || n2 < kMinSamples) {
    throw ValidationError("sample sizes must be at least 4");
  }
  if (!(rho1 >= 0.0 && rho1 < 1.0) || !(rho2 >= 0.0 && rho2 < 1.0)) {
    throw ValidationError("rho1 and rho2 must lie in [0, 1)");
  }
  if (rho1 + boost() >= 1.0 || rho2 + boost() >= 1.0) {
    throw ValidationError("block correlation plus background boost must stay below 1");
  }
  if (replicates == 0) throw ValidationError("replicates must be positive");
}

namespace {

DataMatrix draw_condition(Index n, Index p, Index k, double rho, double boost,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double global = std::sqrt(boost);
  const double block = std::sqrt(rho);
  const double noise_in = std::sqrt(1.0 - boost - rho);
  const double noise_out = std::sqrt(1.0 - boost);

  DataMatrix out;
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Index l = 0; l < n; ++l) {
    const double g = normal(rng);
    const double z = normal(rng);
    for (Index j = 0; j < p; ++j) {
      const double e = normal(rng);
      out.values(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) =
          j < k ? global * g + block * z + noise_in * e : global * g + noise_out * e;
    }
  }
  out.variable_names.reserve(p);
  for (Index j = 0; j < p; ++j) out.variable_names.push_back("v" + std::to_string(j + 1));
  return out;
}

}  // namespace

SimulatedData gen_gaussian(const SimulationSpec& spec) {
  spec.validate();
  return {draw_condition(spec.n1, spec.p, spec.k, spec.rho1, spec.boost(),
                         derive_seed(spec.rng_seed, 1)),
          draw_condition(spec.n2, spec.p, spec.k, spec.rho2, spec.boost(),
                         derive_seed(spec.rng_seed, 2)),
          VariableSet::range(0, spec.k)};
}

RecoveryMetrics recovery(const VariableSet& selected, const VariableSet& truth) {
  if (truth.empty()) throw ValidationError("ground truth set is empty");
  RecoveryMetrics m;
  m.selected_size = selected.size();
  const auto false_pos = set_difference(selected, truth).size();
  const auto missed = set_difference(truth, selected).size();
  m.fpr = selected.empty() ? 0.0
                           : static_cast<double>(false_pos) / static_cast<double>(selected.size());
  m.fnr = static_cast<double>(missed) / static_cast<double>(truth.size());
  return m;
}

StudyTable run_study(const StudyConfig& config) {
  StudyTable table;
  MineConfig mine_config = config.mine;
  mine_config.max_cliques = 1;
  const Index reps = config.base.replicates;

  for (Background background : config.backgrounds) {
    for (const GridCell& cell : config.grid) {
      SimulationSpec spec = config.base;
      spec.background = background;
      spec.rho1 = cell.rho1;
      spec.rho2 = cell.rho2;
      spec.validate();

      std::vector<RecoveryMetrics> dcm(reps), fish(reps);
      std::vector<SearchStatus> status(reps, SearchStatus::Degenerate);
      std::vector<char> violation(reps, 0);

#pragma omp parallel for schedule(dynamic)
      for (Index r = 0; r < reps; ++r) {
        SimulationSpec trial = spec;
        trial.rng_seed = derive_seed(spec.rng_seed, r);
        const SimulatedData data = gen_gaussian(trial);
        const StandardizedCondition c1 = standardize(data.cond1);
        const StandardizedCondition c2 = standardize(data.cond2);

        MineConfig mc = mine_config;
        mc.init.rng_seed = derive_seed(trial.rng_seed, 3);
        const MiningRun run = mine(c1, c2, mc);
        VariableSet found;
        if (!run.cliques.empty()) {
          found = run.cliques.front().final_set;
          status[r] = run.cliques.front().status;
          if (status[r] == SearchStatus::Converged) {
            violation[r] = test_step(c1, c2, found, mc.alpha).selected != found;
          }
        }
        dcm[r] = recovery(found, data.truth);
        if (config.with_fish) fish[r] = recovery(fish_baseline(c1, c2, spec.k), data.truth);
      }

      auto summarize = [&](std::string method, const std::vector<RecoveryMetrics>& metrics) {
        StudyRow row;
        row.method = std::move(method);
        row.background = background;
        row.rho1 = cell.rho1;
        row.rho2 = cell.rho2;
        row.replicates = reps;
        for (const auto& m : metrics) {
          row.mean_fpr += m.fpr;
          row.mean_fnr += m.fnr;
          row.mean_selected_size += static_cast<double>(m.selected_size);
        }
        row.mean_fpr /= static_cast<double>(reps);
        row.mean_fnr /= static_cast<double>(reps);
        row.mean_selected_size /= static_cast<double>(reps);
        return row;
      };

      StudyRow dcm_row = summarize("DCM", dcm);
      for (Index r = 0; r < reps; ++r) {
        switch (status[r]) {
          case SearchStatus::Converged: ++dcm_row.converged; break;
          case SearchStatus::CycleOverlap: ++dcm_row.cycle_overlap; break;
          case SearchStatus::Degenerate: ++dcm_row.degenerate; break;
          case SearchStatus::IterationLimit: ++dcm_row.iteration_limit; break;
        }
        dcm_row.fixed_point_violations += violation[r] ? 1 : 0;
      }
      table.rows.push_back(std::move(dcm_row));
      if (config.with_fish) table.rows.push_back(summarize("FISH", fish));
    }
  }
  return table;
}

}  // namespace dcm
