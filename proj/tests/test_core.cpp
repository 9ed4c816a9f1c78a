#include "doctest.h"

#include "support/fixtures.hpp"
#include "tpo/core.hpp"

using namespace tpo;
using namespace fixtures;

TEST_CASE("advance") {
  CHECK(advance(ClockValuation({0.0, 0.0}), 0.0).values() == std::vector<double>{0.0, 0.0});
  CHECK(advance(ClockValuation({1.5, 3.0}), 2.0).values() == std::vector<double>{3.5, 5.0});
  CHECK(advance(ClockValuation({0.0, 7.0}), 0.25).values() == std::vector<double>{0.25, 7.25});
  CHECK_THROWS_AS(advance(ClockValuation(2), -1.0), InputError);
}

TEST_CASE("reset") {
  CHECK(reset(ClockValuation({3.5, 5.0}), {0}).values() == std::vector<double>{0.0, 5.0});
  CHECK(reset(ClockValuation({3.5, 5.0}), {}).values() == std::vector<double>{3.5, 5.0});
  CHECK(reset(ClockValuation({1.0, 2.0, 3.0}), {0, 1, 2}).values() == std::vector<double>{0.0, 0.0, 0.0});
  CHECK_THROWS_AS(reset(ClockValuation(2), {2}), InputError);
}

TEST_CASE("alphabet") {
  Alphabet a({"x", "y"});
  CHECK(a.id("y") == 1);
  CHECK_FALSE(a.find("z"));
  CHECK_THROWS_AS(a.id("z"), InputError);
  CHECK_THROWS_AS(Alphabet({"x", "x"}), InputError);
  CHECK(Alphabet::numbered(3).label(2) == "e3");
}

TEST_CASE("trace validation") {
  CHECK_NOTHROW(trace_of({{1, 0}, {2, 0}, {3, 1}}).validate(3));
  CHECK_THROWS_AS(trace_of({{1, 0}, {1, 1}, {3, 1}}).validate(3), InputError);
  CHECK_THROWS_AS(trace_of({{1, 2}, {2, 1}, {3, 3}}).validate(3), InputError);
  CHECK_THROWS_AS(trace_of({{1, -1}, {2, 1}, {3, 3}}).validate(3), InputError);
  CHECK_THROWS_AS(trace_of({{1, 0}, {2, 1}}).validate(3), InputError);
  auto t = TimedTrace::from_times({2.0, 1.0, 1.0}, {0, 2, 1});
  CHECK(t == trace_of({{3, 1.0}, {2, 1.0}, {1, 2.0}}));
}

TEST_CASE("tpo validation") {
  auto order = PartialOrder::from_edges(2, {{0, 1}});
  std::vector<Guard> guards(2);
  guards[1].conjuncts = {{1, Relation::kLe, 3}};
  CHECK_THROWS_AS(Tpo(order, 1, guards, {{}, {}}), InputError);
  guards[1].conjuncts = {{0, Relation::kLe, -3}};
  CHECK_THROWS_AS(Tpo(order, 1, guards, {{}, {}}), InputError);
  CHECK_THROWS_AS(Tpo(order, 1, std::vector<Guard>(2), {{3}, {}}), InputError);
}

TEST_CASE("race freedom") {
  CHECK(check_race_free(windshield_tpo()).race_free);

  // Three unordered events that all guard and reset c1.
  std::vector<Guard> guards(3);
  for (auto& g : guards) g.conjuncts = {{0, Relation::kLe, 1}};
  Tpo racy(PartialOrder(3), 1, guards, {{0}, {0}, {0}});
  auto rc = check_race_free(racy);
  CHECK_FALSE(rc.race_free);
  REQUIRE(rc.witness);
  CHECK(*rc.witness == RaceWitness{0, e(1), e(2)});
  CHECK_FALSE(check_race_free(racy, RaceMode::kResetOrdered).race_free);

  CHECK(check_race_free(Tpo(PartialOrder(4))).race_free);

  // Parallel readers of one clock: racy in the strict sense only.
  auto order = PartialOrder::from_edges(3, {{0, 1}, {0, 2}});
  std::vector<Guard> readers(3);
  readers[1].conjuncts = {{0, Relation::kLe, 4}};
  readers[2].conjuncts = {{0, Relation::kGe, 1}};
  Tpo fork(order, 1, readers, {{0}, {}, {}});
  CHECK_FALSE(check_race_free(fork).race_free);
  CHECK(check_race_free(fork, RaceMode::kResetOrdered).race_free);
  auto sys = tpo_to_constraints(fork);
  CHECK(sys.sorted_bounds() == std::vector<Bound>{{0, 1, Relation::kLe, 4},
                                                  {0, 1, Relation::kGe, 0},
                                                  {0, 2, Relation::kGe, 0},
                                                  {0, 2, Relation::kGe, 1}});
}

TEST_CASE("race check is deterministic") {
  std::vector<Guard> guards(3);
  for (auto& g : guards) g.conjuncts = {{0, Relation::kLe, 1}};
  Tpo racy(PartialOrder(3), 1, guards, {{0}, {0}, {0}});
  for (int k = 0; k < 5; ++k) CHECK(check_race_free(racy).witness == check_race_free(racy).witness);
}

TEST_CASE("translation of the windshield TPO") {
  auto sys = tpo_to_constraints(windshield_tpo());
  DifferenceConstraintSystem expected(6);
  expected.add(Bound{e(1), e(4), Relation::kLe, 5});
  expected.add(Bound{e(2), e(5), Relation::kLe, 40});
  expected.add(Bound{e(1), e(6), Relation::kLe, 100});
  expected.add(Bound{e(5), e(6), Relation::kGe, 30});
  expected = expected.with_order(windshield_order());
  CHECK(sys.sorted_bounds() == expected.sorted_bounds());
}

TEST_CASE("translation: no guards, never-reset clock") {
  auto order = PartialOrder::from_edges(3, {{0, 1}, {1, 2}});
  CHECK(tpo_to_constraints(Tpo(order)).sorted_bounds() ==
        DifferenceConstraintSystem(3).with_order(order).sorted_bounds());

  std::vector<Guard> guards(3);
  guards[e(3)].conjuncts = {{0, Relation::kLe, 7}};
  Tpo t(order, 1, guards, {{}, {}, {}});
  auto sys = tpo_to_constraints(t);
  CHECK(sys.bounds().front() == Bound{kOrigin, e(3), Relation::kLe, 7});
}

TEST_CASE("translation rejects races") {
  std::vector<Guard> guards(2);
  guards[0].conjuncts = {{0, Relation::kLe, 1}};
  Tpo racy(PartialOrder(2), 1, guards, {{}, {0}});
  CHECK_THROWS_AS(tpo_to_constraints(racy), PreconditionError);
}
