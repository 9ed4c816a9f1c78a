#pragma once

#include "tpo/core.hpp"

namespace fixtures {

using namespace tpo;

constexpr EventId e(int k) { return static_cast<EventId>(k - 1); }

inline PartialOrder windshield_order() {
  return PartialOrder::from_edges(
      6, {{e(1), e(2)}, {e(2), e(3)}, {e(3), e(5)}, {e(4), e(5)}, {e(5), e(6)}, {e(1), e(4)}});
}

// Two clocks: c1 (id 0) reset at e1, c2 (id 1) reset at e2 and e5.
inline Tpo windshield_tpo() {
  std::vector<Guard> guards(6);
  guards[e(4)].conjuncts = {{0, Relation::kLe, 5}};
  guards[e(5)].conjuncts = {{1, Relation::kLe, 40}};
  guards[e(6)].conjuncts = {{0, Relation::kLe, 100}, {1, Relation::kGe, 30}};
  std::vector<std::vector<ClockId>> resets(6);
  resets[e(1)] = {0};
  resets[e(2)] = {1};
  resets[e(5)] = {1};
  return Tpo(windshield_order(), 2, std::move(guards), std::move(resets));
}

inline DifferenceConstraintSystem windshield_raw() {
  DifferenceConstraintSystem sys(6);
  sys.add_interval(e(1), e(3), 10, kInfinity);
  sys.add_interval(e(1), e(5), 0, 15);
  sys.add_interval(e(3), e(5), 0, 5);
  sys.add_interval(e(5), e(6), 0, 8);
  sys.add_interval(e(4), e(5), 5, kInfinity);
  sys.add_interval(e(4), e(6), 4, 10);
  return sys;
}

inline TimedTrace trace_of(std::vector<std::pair<int, double>> items) {
  TimedTrace t;
  for (auto [k, time] : items) t.entries.push_back({e(k), time});
  return t;
}

}  // namespace fixtures
