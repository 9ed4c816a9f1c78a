#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tpo/constraints.hpp"
#include "tpo/partial_order.hpp"
#include "tpo/types.hpp"

namespace tpo {

// Event labels with dense ids 0..n-1.
class Alphabet {
 public:
  Alphabet() = default;
  /// Throws InputError on duplicate or empty labels.
  explicit Alphabet(std::vector<std::string> labels);

  /// Alphabet e1..en.
  static Alphabet numbered(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(EventId e) const { return labels_.at(e); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<EventId> find(const std::string& label) const;
  /// Throws InputError for an unknown label.
  EventId id(const std::string& label) const;

  /// Appends a label if new; returns its id.
  EventId intern(const std::string& label);

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, EventId> index_;
};

struct TraceEntry {
  EventId event = 0;
  double time = 0.0;
  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

// One run of the workflow in log order. Equal timestamps are allowed; their
// order in the sequence is the tie-break.
struct TimedTrace {
  std::vector<TraceEntry> entries;

  std::size_t size() const { return entries.size(); }

  /// Throws InputError unless the trace is a permutation of 0..n-1 with
  /// finite, non-negative, non-decreasing timestamps.
  void validate(std::size_t n) const;

  /// t_e indexed by event; requires a valid trace.
  std::vector<double> times(std::size_t n) const;

  /// Sequence sorted by timestamp, ties broken by `tie_rank[event]`.
  static TimedTrace from_times(const std::vector<double>& times, const std::vector<std::size_t>& tie_rank);

  friend bool operator==(const TimedTrace&, const TimedTrace&) = default;
};

struct GuardConjunct {
  ClockId clock = 0;
  Relation relation = Relation::kLe;
  double constant = 0.0;

  bool holds(double value) const { return relation == Relation::kLe ? value <= constant : value >= constant; }

  friend bool operator==(const GuardConjunct&, const GuardConjunct&) = default;
  friend auto operator<=>(const GuardConjunct&, const GuardConjunct&) = default;
};

/// Conjunction of clock bounds; empty means true.
struct Guard {
  std::vector<GuardConjunct> conjuncts;

  bool trivial() const { return conjuncts.empty(); }
  bool mentions(ClockId c) const;

  friend bool operator==(const Guard&, const Guard&) = default;
};

std::string format_guard(const Guard& g);

// Timed partial order: a DAG over events, m clocks, a guard per event and a
// reset set per event.
class Tpo {
 public:
  Tpo() = default;
  /// Throws InputError when a guard or reset names a clock >= clocks, a guard
  /// constant is negative or not finite, or the maps have the wrong length.
  Tpo(PartialOrder order, std::size_t clocks, std::vector<Guard> guards, std::vector<std::vector<ClockId>> resets);

  /// Order only; no clocks.
  explicit Tpo(PartialOrder order);

  std::size_t size() const { return order_.size(); }
  std::size_t clocks() const { return clocks_; }
  const PartialOrder& order() const { return order_; }
  const Guard& guard(EventId e) const { return guards_[e]; }
  const std::vector<Guard>& guards() const { return guards_; }
  const std::vector<ClockId>& resets(EventId e) const { return resets_[e]; }
  const std::vector<std::vector<ClockId>>& reset_map() const { return resets_; }

  /// Events whose guard mentions `c` or that reset `c`.
  std::vector<EventId> dependents(ClockId c) const;

  friend bool operator==(const Tpo&, const Tpo&) = default;

 private:
  PartialOrder order_;
  std::size_t clocks_ = 0;
  std::vector<Guard> guards_;
  std::vector<std::vector<ClockId>> resets_;
};

// Clock values, all non-negative.
class ClockValuation {
 public:
  ClockValuation() = default;
  /// All clocks at 0.
  explicit ClockValuation(std::size_t clocks) : values_(clocks, 0.0) {}
  /// Throws InputError on a negative or NaN value.
  explicit ClockValuation(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](ClockId c) const { return values_.at(c); }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const ClockValuation&, const ClockValuation&) = default;

 private:
  std::vector<double> values_;
};

/// ν ⊕ δ. Throws InputError if delta is negative or NaN.
ClockValuation advance(const ClockValuation& v, double delta);

/// reset(ν, subset). Throws InputError for a clock out of range.
ClockValuation reset(const ClockValuation& v, const std::vector<ClockId>& subset);

struct RaceWitness {
  ClockId clock = 0;
  EventId first = 0;   // smaller id of the pair
  EventId second = 0;
  friend bool operator==(const RaceWitness&, const RaceWitness&) = default;
};

struct RaceCheck {
  bool race_free = true;
  std::optional<RaceWitness> witness;
};

enum class RaceMode : std::uint8_t {
  /// Any two distinct events dependent on the same clock must be ordered.
  kStrict,
  /// Only pairs where at least one event resets the clock must be ordered;
  /// events that merely read a clock may run in parallel. This is what the
  /// constraint translation needs: every read sees a unique latest reset.
  kResetOrdered,
};

/// Reports the first offending (clock, pair) in ascending (clock, first,
/// second) order.
RaceCheck check_race_free(const Tpo& tpo, RaceMode mode = RaceMode::kStrict);

/// Difference constraints admitting exactly the compatible traces: one bound
/// per guard conjunct (relative to the latest preceding reset of its clock,
/// or absolute if none) plus the order constraints. Throws PreconditionError
/// unless the TPO passes the reset-ordered race check.
DifferenceConstraintSystem tpo_to_constraints(const Tpo& tpo);

}  // namespace tpo
