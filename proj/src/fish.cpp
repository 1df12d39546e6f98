#include <algorithm>
#include <cmath>
#include <limits>

#include "dcm/error.hpp"
#include "dcm/init.hpp"
#include "dcm/sim.hpp"

namespace dcm {

std::vector<double> fish_dissimilarity(const StandardizedCondition& cond1,
                                       const StandardizedCondition& cond2) {
  const Index p = cond1.p();
  if (cond2.p() != p) throw ValidationError("conditions have different variable counts");
  if (p > kFishMaxVariables) {
    throw ValidationError("FISH baseline needs a p x p matrix; p = " + std::to_string(p) +
                          " exceeds " + std::to_string(kFishMaxVariables));
  }
  const double w1 = std::sqrt(static_cast<double>(cond1.n()) - 3.0);
  const double w2 = std::sqrt(static_cast<double>(cond2.n()) - 3.0);

  // GEMM output is not bit-symmetric; fill the upper triangle and mirror.
  std::vector<double> d(p * p, 0.0);
  {
    const Eigen::MatrixXd r1 = cond1.matrix().transpose() * cond1.matrix();
    const Eigen::MatrixXd r2 = cond2.matrix().transpose() * cond2.matrix();
    for (Index i = 0; i < p; ++i)
      for (Index j = i + 1; j < p; ++j) {
        const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
        d[i * p + j] = d[j * p + i] = w1 * fisher_z(r1(a, b)) - w2 * fisher_z(r2(a, b));
      }
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index i = 0; i < p; ++i) {
    d[i * p + i] = 0.0;
    for (Index j = 0; j < p; ++j) {
      if (i == j) continue;
      lo = std::min(lo, d[i * p + j]);
      hi = std::max(hi, d[i * p + j]);
    }
  }
  const double range = hi - lo;
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      if (i == j) continue;
      // Largest differential correlation maps to dissimilarity 0.
      d[i * p + j] = range > 0.0 ? 1.0 - (d[i * p + j] - lo) / range : 1.0;
    }
  }
  return d;
}

std::vector<Merge> average_linkage(std::vector<double> dist, Index p) {
  if (dist.size() != p * p) throw ValidationError("dissimilarity matrix has wrong size");
  std::vector<Merge> merges;
  if (p < 2) return merges;
  merges.reserve(p - 1);

  std::vector<char> active(p, 1);
  std::vector<Index> size(p, 1), id(p), nn(p, 0);
  std::vector<double> nn_dist(p, 0.0);
  for (Index i = 0; i < p; ++i) id[i] = i;

  auto refresh = [&](Index i) {
    nn_dist[i] = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < p; ++j) {
      if (j == i || !active[j]) continue;
      if (dist[i * p + j] < nn_dist[i]) {
        nn_dist[i] = dist[i * p + j];
        nn[i] = j;
      }
    }
  };
  for (Index i = 0; i < p; ++i) refresh(i);

  for (Index step = 0; step + 1 < p; ++step) {
    Index best = p;
    for (Index i = 0; i < p; ++i) {
      if (active[i] && (best == p || nn_dist[i] < nn_dist[best])) best = i;
    }
    const Index a = std::min(best, nn[best]);
    const Index b = std::max(best, nn[best]);
    const double height = nn_dist[best];

    const Index sa = size[a], sb = size[b];
    merges.push_back({std::min(id[a], id[b]), std::max(id[a], id[b]), height, sa + sb});

    active[b] = 0;
    for (Index k = 0; k < p; ++k) {
      if (!active[k] || k == a) continue;
      const double merged =
          (static_cast<double>(sa) * dist[a * p + k] + static_cast<double>(sb) * dist[b * p + k]) /
          static_cast<double>(sa + sb);
      dist[a * p + k] = merged;
      dist[k * p + a] = merged;
    }
    size[a] = sa + sb;
    id[a] = p + step;

    refresh(a);
    for (Index k = 0; k < p; ++k) {
      if (!active[k] || k == a) continue;
      if (nn[k] == a || nn[k] == b) {
        refresh(k);
      } else if (dist[k * p + a] < nn_dist[k] ||
                 (dist[k * p + a] == nn_dist[k] && a < nn[k])) {
        nn[k] = a;
        nn_dist[k] = dist[k * p + a];
      }
    }
  }
  return merges;
}

VariableSet fish_baseline(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
                          Index target_size) {
  const Index p = cond1.p();
  if (p > kFishMaxVariables) {
    throw ValidationError("FISH baseline is limited to p <= " + std::to_string(kFishMaxVariables));
  }
  if (target_size == 0) throw ValidationError("target_size must be positive");
  if (target_size >= p) return VariableSet::range(0, p);

  const auto merges = average_linkage(fish_dissimilarity(cond1, cond2), p);
  auto cluster_size = [&](Index cid) { return cid < p ? Index{1} : merges[cid - p].size; };

  // The first merge that overshoots the target joins two maximal clusters;
  // keep the larger (the earlier-formed one on a tie).
  Index chosen = 0;
  for (const Merge& m : merges) {
    if (m.size <= target_size) continue;
    chosen = cluster_size(m.right) > cluster_size(m.left) ? m.right : m.left;
    break;
  }

  std::vector<Index> members;
  std::vector<Index> stack{chosen};
  while (!stack.empty()) {
    const Index cid = stack.back();
    stack.pop_back();
    if (cid < p) {
      members.push_back(cid);
    } else {
      stack.push_back(merges[cid - p].left);
      stack.push_back(merges[cid - p].right);
    }
  }
  return VariableSet(std::move(members));
}

}  // namespace dcm
