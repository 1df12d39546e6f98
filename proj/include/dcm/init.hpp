#pragma once

#include <cstdint>
#include <vector>

#include "dcm/data.hpp"

namespace dcm {

struct InitConfig {
  Index init_size = 50;
  Index max_swaps = 0;  // 0 means 10 * init_size
  std::uint64_t rng_seed = 0;
  Index restarts = 3;

  Index swap_budget() const { return max_swaps > 0 ? max_swaps : 10 * init_size; }
};

/// Path of one greedy climb, for inspection and tests.
struct InitTrace {
  VariableSet start;
  VariableSet result;
  std::vector<double> scores;  // score before the first swap, then after each
  Index swaps = 0;
  bool hit_swap_limit = false;
};

/// 0.5 * log((1 + r) / (1 - r)) with r clamped to [-1 + 1e-12, 1 - 1e-12].
double fisher_z(double r);

/// sum over ordered pairs i != j in A of
///   sqrt(n1 - 3) z(r1_ij) - sqrt(n2 - 3) z(r2_ij).
/// Correlations are computed on demand; O(|A|^2 n).
double score(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
             const VariableSet& A);

/// One greedy swap climb from `start`. Each step applies the single swap
/// (a in A out, r outside in) with the largest strict score gain; ties go to
/// the lowest (a, r). Stops at a local maximum or after max_swaps swaps.
InitTrace greedy_climb(const StandardizedCondition& cond1,
                       const StandardizedCondition& cond2, const VariableSet& start,
                       Index max_swaps);

/// Best terminal set over `restarts` climbs from seeded random starts.
VariableSet greedy_init(const StandardizedCondition& cond1,
                        const StandardizedCondition& cond2, const InitConfig& config);

/// Uniformly random size-k subset of [0, p).
VariableSet random_subset(Index p, Index k, std::uint64_t seed);

}  // namespace dcm
