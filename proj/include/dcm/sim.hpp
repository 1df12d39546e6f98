#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcm/data.hpp"
#include "dcm/search.hpp"

namespace dcm {

enum class Background { Uncorrelated, Positive };

std::string_view to_string(Background background);
std::optional<Background> parse_background(std::string_view text);

/// Planted-clique design: variables [0, k) share correlation rho1 in
/// condition 1 and rho2 in condition 2; everything else is independent.
/// The positive background adds rho1 / 3 to every off-diagonal entry in both
/// conditions.
struct SimulationSpec {
  Index p = 500;
  Index k = 50;
  Index n1 = 100;
  Index n2 = 100;
  double rho1 = 0.5;
  double rho2 = 0.0;
  Background background = Background::Uncorrelated;
  std::uint64_t rng_seed = 1;
  Index replicates = 20;

  /// Throws ValidationError when the implied correlation matrices are
  /// not valid.
  void validate() const;
  double boost() const { return background == Background::Positive ? rho1 / 3.0 : 0.0; }
};

struct SimulatedData {
  DataMatrix cond1;
  DataMatrix cond2;
  VariableSet truth;
};

/// Draws both conditions with the factor construction
///   x_j = sqrt(b) g + sqrt(rho) z [j < k] + sqrt(1 - b - rho [j < k]) e_j,
/// which has exactly the target correlations and costs O(n p).
SimulatedData gen_gaussian(const SimulationSpec& spec);

struct RecoveryMetrics {
  double fpr = 0;  // |B \ A| / |B|, 0 when B is empty
  double fnr = 0;  // |A \ B| / |A|
  Index selected_size = 0;
};

RecoveryMetrics recovery(const VariableSet& selected, const VariableSet& truth);

/// Largest p accepted by fish_baseline (it stores a p x p matrix).
inline constexpr Index kFishMaxVariables = 5000;

/// Row-major p x p dissimilarity 1 - (D - min) / (max - min) built from the
/// weighted Fisher difference matrix D (zero diagonal); min and max range
/// over off-diagonal entries. Diagonal is 0.
std::vector<double> fish_dissimilarity(const StandardizedCondition& cond1,
                                       const StandardizedCondition& cond2);

struct Merge {
  Index left = 0;   // cluster ids: 0..p-1 are leaves, p + m is merge m
  Index right = 0;
  double height = 0;
  Index size = 0;
};

/// Average-linkage agglomerative clustering of a row-major dissimilarity
/// matrix. Merges are returned in order of formation (non-decreasing
/// height); ties go to the lowest-index pair.
std::vector<Merge> average_linkage(std::vector<double> dissimilarity, Index p);

/// Members of the first cluster met, walking the dendrogram bottom-up, that
/// has size <= target_size and cannot grow further without exceeding it.
/// Returns every variable when target_size >= p.
VariableSet fish_baseline(const StandardizedCondition& cond1,
                          const StandardizedCondition& cond2, Index target_size);

struct GridCell {
  double rho1 = 0;
  double rho2 = 0;
};

struct StudyConfig {
  std::vector<GridCell> grid;
  std::vector<Background> backgrounds{Background::Uncorrelated};
  SimulationSpec base;  // p, k, n1, n2, seed and replicates
  MineConfig mine;      // max_cliques is forced to 1
  bool with_fish = true;
};

struct StudyRow {
  std::string method;
  Background background = Background::Uncorrelated;
  double rho1 = 0;
  double rho2 = 0;
  Index replicates = 0;
  double mean_fpr = 0;
  double mean_fnr = 0;
  double mean_selected_size = 0;
  // DCM only: outcome counts and fixed-point violations among converged runs.
  Index converged = 0;
  Index cycle_overlap = 0;
  Index degenerate = 0;
  Index iteration_limit = 0;
  Index fixed_point_violations = 0;
};

struct StudyTable {
  std::vector<StudyRow> rows;
};

/// Runs `replicates` seeded trials per (background, cell). Replicate r of
/// every cell uses data seed derive_seed(base.rng_seed, r), so results do not
/// depend on scheduling.
StudyTable run_study(const StudyConfig& config);

}  // namespace dcm
