#include "doctest.h"

#include "support/fixtures.hpp"
#include "tpo/constraints.hpp"
#include "tpo/gen.hpp"
#include "tpo/monitor.hpp"

using namespace tpo;
using namespace fixtures;

TEST_CASE("random_dag basics") {
  auto one = random_dag(1, 0.5, 1);
  CHECK(one.size() == 1);
  CHECK(one.reduced_edges().empty());

  auto chain = random_dag(6, 1.0, 3);
  std::vector<PartialOrder::Edge> path;
  for (EventId i = 0; i + 1 < 6; ++i) path.emplace_back(i, i + 1);
  CHECK(chain.reduced_edges() == path);

  CHECK_THROWS_AS(random_dag(0, 0.5, 1), InputError);
  CHECK_THROWS_AS(random_dag(3, 1.5, 1), InputError);
}

TEST_CASE("random_dag is deterministic and reduced") {
  auto a = random_dag(50, 0.2, 1337);
  auto b = random_dag(50, 0.2, 1337);
  CHECK(a == b);
  CHECK(a.reduced_edges() == b.reduced_edges());
  // Reduction oracle: an edge is covering iff no third event sits between.
  std::size_t covering = 0;
  for (EventId i = 0; i < 50; ++i) {
    for (EventId j = 0; j < 50; ++j) {
      if (!a.precedes(i, j)) continue;
      bool between = false;
      for (EventId k = 0; k < 50 && !between; ++k) between = a.precedes(i, k) && a.precedes(k, j);
      if (!between) ++covering;
    }
  }
  CHECK(covering == a.reduced_edges().size());
  CHECK_FALSE(random_dag(50, 0.2, 1338) == a);
}

TEST_CASE("generated TPOs are race-free and feasible") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 1 + seed % 15;
    auto order = random_dag(n, 0.3, seed);
    BoundOptions opt;
    opt.clock_budget = 1 + seed % 4;
    opt.max_constant = 10;
    opt.seed = seed;
    auto tpo = random_bounds(order, opt);
    CHECK(check_race_free(tpo).race_free);
    CHECK_FALSE(find_negative_cycle(tpo_to_constraints(tpo)));
    for (EventId ev = 0; ev < n; ++ev) {
      for (const auto& g : tpo.guard(ev).conjuncts) {
        CHECK(g.constant == std::floor(g.constant));
        CHECK(g.constant <= 10);
      }
    }
    CHECK(random_bounds(order, opt) == tpo);
  }
}

TEST_CASE("chain with one clock never dead-ends") {
  auto order = PartialOrder::from_edges(3, {{0, 1}, {1, 2}});
  BoundOptions opt;
  opt.clock_budget = 1;
  opt.guard_probability = 1.0;
  auto tpo = random_bounds(order, opt);
  TraceSampler sampler(tpo);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 10000; ++k) REQUIRE(check_trace(tpo, sampler.sample(rng)).compatible());
}

TEST_CASE("windshield samples are compatible") {
  auto tpo = windshield_tpo();
  for (std::uint64_t seed = 0; seed < 500; ++seed) CHECK(check_trace(tpo, sample_trace(tpo, seed)).compatible());
  SamplerOptions normal;
  normal.distribution = DelayDistribution::kTruncatedNormal;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    CHECK(check_trace(tpo, sample_trace(tpo, seed, normal)).compatible());
  }
  CHECK(sample_trace(tpo, 9) == sample_trace(tpo, 9));
}

TEST_CASE("degenerate guard pins the timestamp") {
  auto order = PartialOrder::from_edges(2, {{0, 1}});
  std::vector<Guard> guards(2);
  guards[0].conjuncts = {{0, Relation::kGe, 2.5}, {0, Relation::kLe, 2.5}};
  guards[1].conjuncts = {{1, Relation::kGe, 4}, {1, Relation::kLe, 4}};
  Tpo tpo(order, 2, guards, {{1}, {}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = sample_trace(tpo, seed).times(2);
    CHECK(t[0] == 2.5);
    CHECK(t[1] == 6.5);
  }
}

TEST_CASE("sampler rejects infeasible TPOs") {
  auto order = PartialOrder::from_edges(2, {{0, 1}});
  std::vector<Guard> guards(2);
  guards[0].conjuncts = {{0, Relation::kGe, 5}};
  guards[1].conjuncts = {{0, Relation::kLe, 3}};
  Tpo tpo(order, 1, guards, {{}, {}});
  CHECK_THROWS_AS(TraceSampler{tpo}, PreconditionError);
}

TEST_CASE("benchmark traces are compatible with the ground truth") {
  BenchmarkOptions opt;
  opt.events = 30;
  opt.traces = 300;
  auto b = generate_benchmark(opt);
  for (const auto& t : b.traces) REQUIRE(check_trace(b.truth, t).compatible());
  auto again = generate_benchmark(opt);
  CHECK(again.truth == b.truth);
  CHECK(again.traces == b.traces);
}
