#include "doctest.h"

#include <random>

#include "support/fixtures.hpp"
#include "tpo/monitor.hpp"

using namespace tpo;
using namespace fixtures;

namespace {

// Direct reading of the windshield timing table.
bool windshield_constraints(const std::vector<double>& t) {
  const bool order = t[0] <= t[1] && t[1] <= t[2] && t[2] <= t[4] && t[0] <= t[3] && t[3] <= t[4] && t[4] <= t[5];
  return order && t[4] - t[1] <= 40 && t[5] - t[4] >= 30 && t[3] - t[0] <= 5 && t[5] - t[0] <= 100;
}

}  // namespace

TEST_CASE("windshield trace is compatible") {
  auto tpo = windshield_tpo();
  auto trace = trace_of({{1, 0}, {2, 3}, {4, 4}, {3, 20}, {5, 35}, {6, 70}});
  CHECK(check_trace(tpo, trace).compatible());

  auto late = trace_of({{1, 0}, {2, 3}, {4, 6}, {3, 20}, {5, 35}, {6, 70}});
  auto r = check_trace(tpo, late);
  REQUIRE_FALSE(r.compatible());
  CHECK(r.violation->kind == ViolationKind::kGuardViolation);
  CHECK(r.violation->at_event == e(4));
  CHECK(*r.violation->conjunct == GuardConjunct{0, Relation::kLe, 5});
  CHECK(r.violation->clock_value == 6.0);
}

TEST_CASE("first event at zero with trivial guard") {
  auto tpo = windshield_tpo();
  auto s0 = MonitorState::initial(tpo);
  auto r = step(s0, tpo, e(1), 0.0);
  REQUIRE(std::holds_alternative<MonitorState>(r));
  const auto& s1 = std::get<MonitorState>(r);
  CHECK(s1.last_time == 0.0);
  CHECK(s1.valuation().values() == std::vector<double>{0.0, 0.0});
}

TEST_CASE("structural violations") {
  auto tpo = windshield_tpo();
  auto r = check_trace(tpo, trace_of({{2, 0}, {1, 1}, {3, 2}, {4, 3}, {5, 4}, {6, 40}}));
  REQUIRE(r.violation);
  CHECK(r.violation->kind == ViolationKind::kOrderViolation);
  CHECK(*r.violation->edge == PartialOrder::Edge{e(1), e(2)});

  r = check_trace(tpo, trace_of({{1, 5}, {2, 3}}));
  CHECK(r.violation->kind == ViolationKind::kTimeRegression);

  r = check_trace(tpo, trace_of({{1, 0}, {1, 1}}));
  CHECK(r.violation->kind == ViolationKind::kDuplicateEvent);

  r = check_trace(tpo, trace_of({{1, 0}, {2, 1}}));
  CHECK(r.violation->kind == ViolationKind::kIncompleteRun);
  CHECK(r.violation->at_event == e(3));

  Tpo single(PartialOrder(1));
  CHECK(check_trace(single, trace_of({{1, 12.5}})).compatible());
}

TEST_CASE("guard is checked before resets") {
  // e2 guards and resets c; the guard must see the pre-reset value.
  auto order = PartialOrder::from_edges(2, {{0, 1}});
  std::vector<Guard> guards(2);
  guards[1].conjuncts = {{0, Relation::kGe, 2}};
  Tpo tpo(order, 1, guards, {{0}, {0}});
  CHECK(check_trace(tpo, trace_of({{1, 1}, {2, 3}})).compatible());
  CHECK_FALSE(check_trace(tpo, trace_of({{1, 1}, {2, 2.5}})).compatible());
}

TEST_CASE("step does not modify its input") {
  auto tpo = windshield_tpo();
  auto s = MonitorState::initial(tpo);
  auto copy = s;
  (void)step(s, tpo, e(1), 1.0);
  (void)step(s, tpo, e(2), 1.0);
  CHECK(s == copy);
}

TEST_CASE("monitor agrees with the windshield constraints on random traces") {
  auto tpo = windshield_tpo();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> gap(0.0, 40.0);
  int accepted = 0;
  for (int k = 0; k < 2000; ++k) {
    // Random linearization of the fixed DAG: e1, {e2<e3} || e4, e5, e6.
    std::vector<double> t(6);
    t[0] = gap(rng) / 8;
    t[1] = t[0] + gap(rng) / 4;
    t[2] = t[1] + gap(rng) / 2;
    t[3] = t[0] + gap(rng) / 6;
    t[4] = std::max(t[2], t[3]) + gap(rng) / 2;
    t[5] = t[4] + gap(rng) + 10;
    auto trace = TimedTrace::from_times(t, {0, 1, 2, 3, 4, 5});
    const bool ok = check_trace(tpo, trace).compatible();
    CHECK(ok == windshield_constraints(t));
    accepted += ok;
  }
  CHECK(accepted > 100);
  CHECK(accepted < 1900);
}

TEST_CASE("streaming monitor halts at the first violation") {
  auto tpo = windshield_tpo();
  Monitor m(tpo);
  CHECK_FALSE(m.feed(e(1), 0));
  CHECK_FALSE(m.feed(e(4), 2));
  CHECK_FALSE(m.complete());
  auto v = m.feed(e(3), 3);
  REQUIRE(v);
  CHECK(v->kind == ViolationKind::kOrderViolation);
  CHECK(m.halted());
  CHECK(m.feed(e(2), 4) == v);
  CHECK(m.finish() == v);

  Monitor prefix(tpo);
  prefix.feed(e(1), 0);
  CHECK(prefix.finish()->kind == ViolationKind::kIncompleteRun);
}

TEST_CASE("check_trace_all collects guard failures") {
  auto tpo = windshield_tpo();
  auto trace = trace_of({{1, 0}, {2, 3}, {4, 6}, {3, 20}, {5, 50}, {6, 60}});
  auto all = check_trace_all(tpo, trace);
  REQUIRE(all.size() == 3);
  CHECK(all[0].at_event == e(4));
  CHECK(all[1].at_event == e(5));
  CHECK(all[2].at_event == e(6));
  CHECK(all[0] == *check_trace(tpo, trace).violation);
}
