#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tpo/constraints.hpp"
#include "tpo/core.hpp"
#include "tpo/synthesis.hpp"

namespace tpo {

enum class InfinityPolicy : std::uint8_t {
  kKeepFinite,
  /// Absolute upper bounds that sit at the largest timestamp of the whole log
  /// become +inf (the data cannot tell a deadline from the end of recording).
  kDropUpperIfAtDataMax,
};

struct MiningConfig {
  Heuristic heuristic = Heuristic::kNearest;
  std::uint64_t seed = 1337;
  /// Each mined interval grows by inflation * width on both sides.
  double inflation = 0.0;
  InfinityPolicy infinity_policy = InfinityPolicy::kKeepFinite;
  double tolerance = 1e-9;

  /// Throws InputError on a negative inflation or non-positive tolerance.
  void validate() const;
};

/// e_i ≺ e_j iff e_i comes before e_j in every trace (log position, so equal
/// timestamps follow the log). Throws InputError on an empty set or a trace
/// that is not a valid run over n events.
PartialOrder identify_partial_order(const std::vector<TimedTrace>& traces, std::size_t n);

/// Absolute interval per event and difference interval per ordered pair,
/// taken as the min/max over the traces, then widened per the config.
DifferenceConstraintSystem extract_bounds(const std::vector<TimedTrace>& traces, const PartialOrder& order,
                                          const MiningConfig& config = {});

struct MiningReport {
  PartialOrder order;
  DifferenceConstraintSystem raw;
  EliminationResult elimination;
  SynthesisResult synthesis;
  double seconds_order = 0.0;
  double seconds_bounds = 0.0;
  double seconds_elimination = 0.0;
  double seconds_synthesis = 0.0;

  const Tpo& tpo() const { return synthesis.tpo; }
  double seconds_total() const { return seconds_order + seconds_bounds + seconds_elimination + seconds_synthesis; }
};

/// Full pipeline: order, bounds, elimination, allocation, coloring, assembly.
MiningReport mine(const std::vector<TimedTrace>& traces, std::size_t n, const MiningConfig& config = {});

inline Tpo mine_tpo(const std::vector<TimedTrace>& traces, std::size_t n, const MiningConfig& config = {}) {
  return mine(traces, n, config).tpo();
}

// Per-event occurrence counts of an interleaved log of k products:
// k * x + y = b with 0 <= y < k.
struct EventCountVector {
  std::vector<std::size_t> x;
  std::vector<std::size_t> y;
  std::vector<std::size_t> b;
  std::size_t k = 1;
};

struct LabeledEntry {
  std::string label;
  double time = 0.0;
};

struct SplitResult {
  EventCountVector counts;
  /// Event labels of the split traces. An event with x_e > 1 occurs x_e
  /// times per trace; its r-th occurrence is relabeled "label#r".
  Alphabet alphabet;
  std::vector<TimedTrace> traces;
  /// The y_e trailing occurrences of each event, in log order.
  std::vector<LabeledEntry> leftover;
};

/// Greedily deals the occurrences of each event, in timestamp order, x_e at a
/// time to traces 1..k. `log` must be sorted by time. Throws InputError if
/// k == 0, the log is unsorted, or some event occurs fewer than k times.
SplitResult split_log(const Alphabet& alphabet, const std::vector<LabeledEntry>& log, std::size_t k);

}  // namespace tpo
