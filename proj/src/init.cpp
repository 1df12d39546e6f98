#include "dcm/init.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dcm/error.hpp"
#include "dcm/parallel.hpp"

namespace dcm {

double fisher_z(double r) {
  constexpr double kEdge = 1.0 - 1e-12;
  r = std::clamp(r, -kEdge, kEdge);
  return 0.5 * std::log((1.0 + r) / (1.0 - r));
}

namespace {

double dof_weight(Index n) { return std::sqrt(static_cast<double>(n) - 3.0); }

void check_conditions(const StandardizedCondition& cond1, const StandardizedCondition& cond2) {
  if (cond1.p() != cond2.p()) throw ValidationError("conditions have different variable counts");
  if (cond1.n() < kMinSamples || cond2.n() < kMinSamples) {
    throw ValidationError("each condition needs at least 4 samples");
  }
}

// Weighted Fisher differences between every variable and variable b; the
// entry for b itself is zeroed (diagonal excluded from the score).
void fill_column(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
                 Index b, double w1, double w2, Eigen::Ref<Eigen::VectorXd> out) {
  const auto col = static_cast<Eigen::Index>(b);
  const Eigen::VectorXd r1 = cond1.matrix().transpose() * cond1.matrix().col(col);
  const Eigen::VectorXd r2 = cond2.matrix().transpose() * cond2.matrix().col(col);
  for (Eigen::Index v = 0; v < out.size(); ++v) {
    out[v] = w1 * fisher_z(r1[v]) - w2 * fisher_z(r2[v]);
  }
  out[col] = 0.0;
}

}  // namespace

double score(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
             const VariableSet& A) {
  check_conditions(cond1, cond2);
  A.validate(cond1.p());
  const double w1 = dof_weight(cond1.n());
  const double w2 = dof_weight(cond2.n());
  double total = 0.0;
  for (Index a = 0; a < A.size(); ++a) {
    for (Index b = a + 1; b < A.size(); ++b) {
      total += w1 * fisher_z(cond1.correlation(A[a], A[b])) -
               w2 * fisher_z(cond2.correlation(A[a], A[b]));
    }
  }
  return 2.0 * total;
}

VariableSet random_subset(Index p, Index k, std::uint64_t seed) {
  if (k > p) throw ValidationError("subset larger than population");
  std::mt19937_64 rng(seed);
  std::vector<Index> pool(p);
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index t = 0; t < k; ++t) {
    std::uniform_int_distribution<Index> pick(t, p - 1);
    std::swap(pool[t], pool[pick(rng)]);
  }
  pool.resize(k);
  return VariableSet(std::move(pool));
}

InitTrace greedy_climb(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
                       const VariableSet& start, Index max_swaps) {
  check_conditions(cond1, cond2);
  start.validate(cond1.p());
  if (start.size() < 2) throw ValidationError("initial set needs at least 2 variables");

  const auto p = static_cast<Eigen::Index>(cond1.p());
  const auto k = static_cast<Eigen::Index>(start.size());
  const double w1 = dof_weight(cond1.n());
  const double w2 = dof_weight(cond2.n());

  std::vector<Index> members(start.begin(), start.end());  // slot -> variable
  std::vector<char> in_set(static_cast<std::size_t>(p), 0);
  for (Index v : members) in_set[v] = 1;

  // G(v, s): weighted Fisher difference between v and the member in slot s.
  // row_sum(v) is then the score contribution of v against the current set.
  Eigen::MatrixXd G(p, k);
  for (Eigen::Index s = 0; s < k; ++s) {
    fill_column(cond1, cond2, members[static_cast<std::size_t>(s)], w1, w2, G.col(s));
  }
  Eigen::VectorXd row_sum = G.rowwise().sum();
  auto current_score = [&] {
    double total = 0.0;
    for (Index v : members) total += row_sum[static_cast<Eigen::Index>(v)];
    return total;
  };

  InitTrace trace;
  trace.start = start;
  trace.scores.push_back(current_score());

  std::vector<Eigen::Index> slot_order(static_cast<std::size_t>(k));
  while (trace.swaps < max_swaps) {
    std::iota(slot_order.begin(), slot_order.end(), Eigen::Index{0});
    std::sort(slot_order.begin(), slot_order.end(), [&](Eigen::Index x, Eigen::Index y) {
      return members[static_cast<std::size_t>(x)] < members[static_cast<std::size_t>(y)];
    });

    // Swapping a for r changes the score by 2 (s(r) - s(a) - g(r, a)).
    const double tolerance = 1e-9 * (1.0 + std::abs(trace.scores.back()));
    double best_gain = tolerance;
    Eigen::Index best_slot = -1;
    Eigen::Index best_r = -1;
    for (Eigen::Index slot : slot_order) {
      const double s_out = row_sum[static_cast<Eigen::Index>(members[static_cast<std::size_t>(slot)])];
      const auto g = G.col(slot);
      for (Eigen::Index r = 0; r < p; ++r) {
        if (in_set[static_cast<std::size_t>(r)]) continue;
        const double gain = 2.0 * (row_sum[r] - s_out - g[r]);
        if (gain > best_gain) {
          best_gain = gain;
          best_slot = slot;
          best_r = r;
        }
      }
    }
    if (best_slot < 0) break;

    const Index out = members[static_cast<std::size_t>(best_slot)];
    in_set[out] = 0;
    in_set[static_cast<std::size_t>(best_r)] = 1;
    members[static_cast<std::size_t>(best_slot)] = static_cast<Index>(best_r);
    fill_column(cond1, cond2, static_cast<Index>(best_r), w1, w2, G.col(best_slot));
    row_sum = G.rowwise().sum();
    trace.scores.push_back(current_score());
    ++trace.swaps;
  }
  trace.hit_swap_limit = trace.swaps >= max_swaps;
  trace.result = VariableSet(std::move(members));
  return trace;
}

VariableSet greedy_init(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
                        const InitConfig& config) {
  check_conditions(cond1, cond2);
  const Index p = cond1.p();
  if (config.init_size < 2) throw ValidationError("init_size must be at least 2");
  if (config.init_size > p) throw ValidationError("init_size exceeds variable count");
  if (config.restarts == 0) throw ValidationError("restarts must be positive");
  if (config.init_size == p) return VariableSet::range(0, p);

  VariableSet best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (Index r = 0; r < config.restarts; ++r) {
    const auto start = random_subset(p, config.init_size, derive_seed(config.rng_seed, r));
    auto trace = greedy_climb(cond1, cond2, start, config.swap_budget());
    if (trace.scores.back() > best_score) {
      best_score = trace.scores.back();
      best = std::move(trace.result);
    }
  }
  return best;
}

}  // namespace dcm
