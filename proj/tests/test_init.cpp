#include <doctest.h>

#include <cmath>
#include <random>

#include "dcm/error.hpp"
#include "dcm/init.hpp"
#include "dcm/stats.hpp"
#include "fixtures.hpp"

using namespace dcm;

TEST_CASE("fisher_z") {
  CHECK(fisher_z(0.0) == 0.0);
  CHECK(fisher_z(0.5) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
  CHECK(fisher_z(0.5) == doctest::Approx(0.5493).epsilon(1e-4));
  std::mt19937 rng(30);
  for (int t = 0; t < 100; ++t) {
    const double r = std::uniform_real_distribution<>(-1, 1)(rng);
    CHECK(fisher_z(-r) == doctest::Approx(-fisher_z(r)).epsilon(1e-14));
  }
  CHECK(std::isfinite(fisher_z(1.0)));
  CHECK(std::isfinite(fisher_z(-1.0)));
  CHECK(fisher_z(1.0) > 13.0);
}

TEST_CASE("score: identical conditions cancel") {
  const auto c = fixtures::std_normal(30, 20, 31);
  CHECK(score(c, c, fixtures::random_set(20, 7, 1)) == 0.0);
}

TEST_CASE("score: two-variable set is twice the single-pair term") {
  const auto c1 = fixtures::std_normal(30, 5, 32);
  const auto c2 = fixtures::std_normal(50, 5, 33);
  const double pair = std::sqrt(27.0) * 0.5 * std::log((1 + c1.correlation(1, 3)) / (1 - c1.correlation(1, 3))) -
                      std::sqrt(47.0) * 0.5 * std::log((1 + c2.correlation(1, 3)) / (1 - c2.correlation(1, 3)));
  CHECK(score(c1, c2, {1, 3}) == doctest::Approx(2 * pair).epsilon(1e-13));
}

TEST_CASE("score prefers the planted block over random sets") {
  int wins = 0;
  const int seeds = 30;
  for (int s = 0; s < seeds; ++s) {
    const auto c1 = fixtures::std_block(200, 100, 10, 0.9, 1000 + s);
    const auto c2 = fixtures::std_normal(200, 100, 1100 + s);
    wins += score(c1, c2, VariableSet::range(0, 10)) > score(c1, c2, fixtures::random_set(100, 10, s));
  }
  CHECK(wins >= 0.99 * seeds);
}

TEST_CASE("greedy_climb: strict improvement, fixed cardinality, consistent scores") {
  const auto c1 = fixtures::std_block(60, 150, 20, 0.6, 34);
  const auto c2 = fixtures::std_normal(60, 150, 35);
  const auto start = random_subset(150, 15, 36);
  const auto trace = greedy_climb(c1, c2, start, 200);
  REQUIRE(trace.scores.size() == trace.swaps + 1);
  CHECK(trace.swaps > 0);
  for (std::size_t t = 1; t < trace.scores.size(); ++t) CHECK(trace.scores[t] > trace.scores[t - 1]);
  CHECK(trace.result.size() == 15);
  CHECK(trace.start == start);
  CHECK(trace.scores.front() == doctest::Approx(score(c1, c2, start)).epsilon(1e-10));
  CHECK(trace.scores.back() == doctest::Approx(score(c1, c2, trace.result)).epsilon(1e-10));
  CHECK_FALSE(trace.hit_swap_limit);
}

TEST_CASE("greedy_climb ends at a local maximum of the brute-force score") {
  const auto c1 = fixtures::std_block(40, 30, 8, 0.5, 37);
  const auto c2 = fixtures::std_normal(40, 30, 38);
  const auto trace = greedy_climb(c1, c2, random_subset(30, 6, 39), 1000);
  const double best = score(c1, c2, trace.result);
  for (Index a : trace.result) {
    for (Index r = 0; r < 30; ++r) {
      if (trace.result.contains(r)) continue;
      std::vector<Index> v;
      for (Index x : trace.result)
        if (x != a) v.push_back(x);
      v.push_back(r);
      CHECK(score(c1, c2, VariableSet(v)) <= best + 1e-9 * (1 + std::abs(best)));
    }
  }
}

TEST_CASE("greedy_climb respects the swap budget") {
  const auto c1 = fixtures::std_block(60, 150, 20, 0.6, 40);
  const auto c2 = fixtures::std_normal(60, 150, 41);
  const auto trace = greedy_climb(c1, c2, random_subset(150, 15, 42), 3);
  CHECK(trace.swaps == 3);
  CHECK(trace.hit_swap_limit);
}

TEST_CASE("greedy_init with init_size = p returns every variable") {
  const auto c = fixtures::std_normal(20, 12, 43);
  InitConfig cfg;
  cfg.init_size = 12;
  CHECK(greedy_init(c, c, cfg) == VariableSet::range(0, 12));
  cfg.init_size = 13;
  CHECK_THROWS_AS(greedy_init(c, c, cfg), ValidationError);
  cfg.init_size = 1;
  CHECK_THROWS_AS(greedy_init(c, c, cfg), ValidationError);
}

TEST_CASE("greedy_init is deterministic for a seed") {
  const auto c1 = fixtures::std_block(50, 120, 15, 0.5, 44);
  const auto c2 = fixtures::std_normal(50, 120, 45);
  InitConfig cfg;
  cfg.init_size = 10;
  cfg.rng_seed = 99;
  CHECK(greedy_init(c1, c2, cfg) == greedy_init(c1, c2, cfg));
}

TEST_CASE("greedy_init finds the planted clique") {
  // k = init_size = 50, rho1 = 0.8, rho2 = 0, p = 200, n = 100.
  double overlap = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const auto c1 = fixtures::std_block(100, 200, 50, 0.8, 1200 + s);
    const auto c2 = fixtures::std_normal(100, 200, 1300 + s);
    InitConfig cfg;
    cfg.init_size = 50;
    cfg.rng_seed = static_cast<std::uint64_t>(s);
    const auto found = greedy_init(c1, c2, cfg);
    CHECK(found.size() == 50);
    overlap += static_cast<double>(set_intersection(found, VariableSet::range(0, 50)).size()) / 50.0;
  }
  CHECK(overlap / seeds >= 0.8);
}

TEST_CASE("greedy_init on equal conditions leads to an empty test selection") {
  int empty = 0;
  const int runs = 20;
  double mean_score = 0;
  for (int s = 0; s < runs; ++s) {
    const auto c = fixtures::std_normal(100, 200, 1400 + s);
    InitConfig cfg;
    cfg.init_size = 20;
    cfg.rng_seed = static_cast<std::uint64_t>(s);
    const auto found = greedy_init(c, c, cfg);
    mean_score += score(c, c, found);
    empty += test_step(c, c, found, 0.05).selected.empty();
  }
  CHECK(mean_score == 0.0);
  CHECK(empty >= 0.95 * runs);
}
