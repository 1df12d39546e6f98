#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "dcm/error.hpp"
#include "dcm/sim.hpp"
#include "fixtures.hpp"

using namespace dcm;

namespace {

double mean_corr(const StandardizedCondition& c, Index lo1, Index hi1, Index lo2, Index hi2) {
  double total = 0;
  Index count = 0;
  for (Index i = lo1; i < hi1; ++i)
    for (Index j = lo2; j < hi2; ++j)
      if (i != j) {
        total += c.correlation(i, j);
        ++count;
      }
  return total / static_cast<double>(count);
}

// Naive average linkage: average of the original dissimilarities between
// member lists, recomputed from scratch every step.
struct NaiveMerge {
  std::set<Index> members;
  double height;
};

std::vector<NaiveMerge> naive_linkage(const std::vector<double>& d, Index p) {
  std::vector<std::vector<Index>> clusters;
  for (Index i = 0; i < p; ++i) clusters.push_back({i});
  std::vector<NaiveMerge> out;
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double s = 0;
        for (Index i : clusters[a])
          for (Index j : clusters[b]) s += d[i * p + j];
        s /= static_cast<double>(clusters[a].size() * clusters[b].size());
        if (s < best) {
          best = s;
          ba = a;
          bb = b;
        }
      }
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
    out.push_back({{clusters[ba].begin(), clusters[ba].end()}, best});
  }
  return out;
}

std::set<Index> leaves(const std::vector<Merge>& merges, Index p, Index cid) {
  if (cid < p) return {cid};
  auto l = leaves(merges, p, merges[cid - p].left);
  const auto r = leaves(merges, p, merges[cid - p].right);
  l.insert(r.begin(), r.end());
  return l;
}

}  // namespace

TEST_CASE("gen_gaussian: shapes, names and truth") {
  SimulationSpec spec;
  spec.p = 30;
  spec.k = 5;
  spec.n1 = 20;
  spec.n2 = 25;
  const auto data = gen_gaussian(spec);
  CHECK(data.cond1.n() == 20);
  CHECK(data.cond2.n() == 25);
  CHECK(data.cond1.p() == 30);
  CHECK(data.cond1.variable_names.front() == "v1");
  CHECK(data.cond2.variable_names.back() == "v30");
  CHECK(data.truth == VariableSet::range(0, 5));
  const auto again = gen_gaussian(spec);
  CHECK(again.cond1.values == data.cond1.values);
  spec.rng_seed = 2;
  CHECK(gen_gaussian(spec).cond1.values != data.cond1.values);
}

TEST_CASE("gen_gaussian: sample correlations approach the design") {
  SimulationSpec spec;
  spec.p = 60;
  spec.k = 20;
  spec.n1 = spec.n2 = 2000;
  spec.rho1 = 0.5;
  spec.rho2 = 0.0;
  const auto data = gen_gaussian(spec);
  const auto c1 = standardize(data.cond1), c2 = standardize(data.cond2);
  CHECK(std::abs(mean_corr(c1, 0, 20, 0, 20) - 0.5) <= 0.03);
  CHECK(std::abs(mean_corr(c2, 0, 20, 0, 20)) <= 0.03);
  CHECK(std::abs(mean_corr(c1, 0, 20, 20, 60)) <= 0.03);

  spec.background = Background::Positive;
  const auto pos = gen_gaussian(spec);
  const auto p1 = standardize(pos.cond1), p2 = standardize(pos.cond2);
  const double b = 0.5 / 3;
  CHECK(std::abs(mean_corr(p1, 0, 20, 0, 20) - (0.5 + b)) <= 0.03);
  CHECK(std::abs(mean_corr(p1, 20, 60, 20, 60) - b) <= 0.03);
  CHECK(std::abs(mean_corr(p2, 0, 20, 0, 20) - b) <= 0.03);
  CHECK(std::abs(mean_corr(p2, 0, 20, 20, 60) - b) <= 0.03);
}

TEST_CASE("gen_gaussian: every entry converges at large n") {
  SimulationSpec spec;
  spec.p = 20;
  spec.k = 8;
  spec.n1 = spec.n2 = 5000;
  spec.rho1 = 0.6;
  spec.rho2 = 0.2;
  spec.background = Background::Positive;
  const auto data = gen_gaussian(spec);
  const auto c1 = standardize(data.cond1), c2 = standardize(data.cond2);
  const double b = spec.boost();
  double worst = 0;
  for (Index i = 0; i < 20; ++i)
    for (Index j = 0; j < 20; ++j) {
      if (i == j) continue;
      const bool in = i < 8 && j < 8;
      worst = std::max(worst, std::abs(c1.correlation(i, j) - (b + (in ? 0.6 : 0))));
      worst = std::max(worst, std::abs(c2.correlation(i, j) - (b + (in ? 0.2 : 0))));
    }
  CHECK(worst <= 0.05);
}

TEST_CASE("SimulationSpec validation") {
  SimulationSpec spec;
  CHECK_NOTHROW(spec.validate());
  spec.k = spec.p + 1;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = {};
  spec.rho1 = 1.0;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = {};
  spec.rho1 = 0.9;
  spec.background = Background::Positive;  // 0.9 + 0.3 > 1
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = {};
  spec.n1 = 3;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  CHECK(parse_background("positive") == Background::Positive);
  CHECK(parse_background("uncorrelated") == Background::Uncorrelated);
  CHECK_FALSE(parse_background("other").has_value());
}

TEST_CASE("recovery metrics") {
  const VariableSet truth = VariableSet::range(0, 100);
  auto m = recovery(truth, truth);
  CHECK(m.fpr == 0);
  CHECK(m.fnr == 0);
  m = recovery(VariableSet::range(100, 200), truth);
  CHECK(m.fpr == 1);
  CHECK(m.fnr == 1);
  std::vector<Index> mixed;
  for (Index i = 0; i < 80; ++i) mixed.push_back(i);
  for (Index i = 500; i < 520; ++i) mixed.push_back(i);
  m = recovery(VariableSet(mixed), truth);
  CHECK(m.fpr == doctest::Approx(0.2));
  CHECK(m.fnr == doctest::Approx(0.2));
  CHECK(m.selected_size == 100);
  m = recovery({}, truth);
  CHECK(m.fpr == 0);
  CHECK(m.fnr == 1);
  CHECK_THROWS_AS(recovery(truth, {}), ValidationError);
}

TEST_CASE("average_linkage matches a naive implementation") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Index p = 6 + seed * 2;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> d(p * p, 0.0);
    for (Index i = 0; i < p; ++i)
      for (Index j = i + 1; j < p; ++j) d[i * p + j] = d[j * p + i] = U(rng);
    const auto fast = average_linkage(d, p);
    const auto slow = naive_linkage(d, p);
    REQUIRE(fast.size() == p - 1);
    for (std::size_t m = 0; m < fast.size(); ++m) {
      CHECK(fast[m].height == doctest::Approx(slow[m].height).epsilon(1e-12));
      CHECK(fast[m].size == slow[m].members.size());
      CHECK(leaves(fast, p, p + m) == slow[m].members);
      if (m > 0) CHECK(fast[m].height >= fast[m - 1].height - 1e-12);
    }
  }
  CHECK(average_linkage({0.0}, 1).empty());
  CHECK_THROWS_AS(average_linkage({0.0, 1.0}, 3), ValidationError);
}

TEST_CASE("fish_dissimilarity: range and extremes") {
  const auto c1 = fixtures::std_block(60, 15, 5, 0.7, 300);
  const auto c2 = fixtures::std_normal(60, 15, 301);
  const auto d = fish_dissimilarity(c1, c2);
  double lo = 1, hi = 0;
  for (Index i = 0; i < 15; ++i)
    for (Index j = 0; j < 15; ++j) {
      CHECK(d[i * 15 + j] == d[j * 15 + i]);
      if (i == j) {
        CHECK(d[i * 15 + j] == 0);
      } else {
        lo = std::min(lo, d[i * 15 + j]);
        hi = std::max(hi, d[i * 15 + j]);
      }
    }
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(1.0));
  // Identical conditions: zero range, every pair at distance 1.
  const auto same = fish_dissimilarity(c1, c1);
  CHECK(same[1] == 1.0);
}

TEST_CASE("fish_baseline: edge cases and strong signal") {
  const auto c1 = fixtures::std_block(100, 200, 40, 0.8, 310);
  const auto c2 = fixtures::std_normal(100, 200, 311);
  CHECK(fish_baseline(c1, c2, 200) == VariableSet::range(0, 200));
  CHECK(fish_baseline(c1, c2, 500) == VariableSet::range(0, 200));
  CHECK_THROWS_AS(fish_baseline(c1, c2, 0), ValidationError);
  const auto found = fish_baseline(c1, c2, 40);
  CHECK(found.size() <= 40);
  CHECK(recovery(found, VariableSet::range(0, 40)).fnr <= 0.3);

  const auto wide = fixtures::std_normal(5, kFishMaxVariables + 1, 312);
  CHECK_THROWS_AS(fish_baseline(wide, wide, 10), ValidationError);
}

TEST_CASE("run_study: empty grid and reproducibility") {
  StudyConfig cfg;
  cfg.base.p = 100;
  cfg.base.k = 15;
  cfg.base.n1 = cfg.base.n2 = 60;
  cfg.base.replicates = 3;
  cfg.mine.init.init_size = 15;
  CHECK(run_study(cfg).rows.empty());

  cfg.grid = {{0.5, 0.0}, {0.0, 0.0}};
  cfg.backgrounds = {Background::Uncorrelated, Background::Positive};
  const auto a = run_study(cfg);
  const auto b = run_study(cfg);
  REQUIRE(a.rows.size() == 8);  // 2 backgrounds x 2 cells x 2 methods
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].method == b.rows[i].method);
    CHECK(a.rows[i].mean_fpr == b.rows[i].mean_fpr);
    CHECK(a.rows[i].mean_fnr == b.rows[i].mean_fnr);
    CHECK(a.rows[i].mean_selected_size == b.rows[i].mean_selected_size);
  }
  for (const auto& row : a.rows) {
    CHECK(row.replicates == 3);
    if (row.method == "DCM") {
      CHECK(row.converged + row.cycle_overlap + row.degenerate + row.iteration_limit == 3);
    }
  }
  cfg.with_fish = false;
  CHECK(run_study(cfg).rows.size() == 4);
}
