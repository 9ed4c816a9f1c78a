#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tpo/core.hpp"

namespace tpo {

// Run state after a prefix of a trace. Clocks are kept as the time of their
// last reset (0 for never reset) so that a guard compares now - anchor, the
// same difference the constraint view uses, without accumulated rounding.
struct MonitorState {
  std::vector<double> anchors;
  double last_time = 0.0;
  Bitset seen;

  /// Fresh state for `tpo`: t^(0) = 0, all clocks 0, nothing seen.
  static MonitorState initial(const Tpo& tpo);

  /// ν_j: clock values at last_time.
  ClockValuation valuation() const;

  std::size_t seen_count() const { return seen.count(); }

  friend bool operator==(const MonitorState&, const MonitorState&) = default;
};

enum class ViolationKind : std::uint8_t {
  kOrderViolation,
  kGuardViolation,
  kTimeRegression,
  kDuplicateEvent,
  kIncompleteRun,
};

const char* to_string(ViolationKind k);

struct Violation {
  ViolationKind kind = ViolationKind::kOrderViolation;
  /// Offending event; for kIncompleteRun the smallest missing event.
  EventId at_event = 0;
  /// Index in the trace (number of events accepted before it).
  std::size_t position = 0;
  double time = 0.0;
  /// kGuardViolation: the failed conjunct and the clock value it saw.
  std::optional<GuardConjunct> conjunct;
  double clock_value = 0.0;
  /// kOrderViolation: the covering edge whose source had not occurred.
  std::optional<PartialOrder::Edge> edge;
  /// kTimeRegression: previous timestamp.
  double previous_time = 0.0;

  /// One-line description using `labels` when given.
  std::string describe(const std::vector<std::string>& labels = {}) const;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using StepResult = std::variant<MonitorState, Violation>;

/// One monitor transition. Checks, in order: time regression, duplicate,
/// missing predecessor, guard (on ν ⊕ Δt, before resets). Never modifies
/// `state`. Throws InputError for an event id outside the alphabet.
StepResult step(const MonitorState& state, const Tpo& tpo, EventId event, double time);

struct CheckResult {
  std::optional<Violation> violation;
  bool compatible() const { return !violation; }
};

/// Folds step over the trace and requires every event to occur.
CheckResult check_trace(const Tpo& tpo, const TimedTrace& trace);

/// Diagnostic variant: keeps going past guard failures (the state advances
/// as if the guard held) and stops at the first structural violation.
std::vector<Violation> check_trace_all(const Tpo& tpo, const TimedTrace& trace);

// Event-at-a-time monitor. Halts at the first violation; later feeds return
// that same violation.
class Monitor {
 public:
  explicit Monitor(const Tpo& tpo) : tpo_(&tpo), state_(MonitorState::initial(tpo)) {}

  /// Consumes one event. Returns the violation if this or an earlier event
  /// failed.
  std::optional<Violation> feed(EventId event, double time);

  /// End of input: IncompleteRun if some event never occurred.
  std::optional<Violation> finish() const;

  bool halted() const { return violation_.has_value(); }
  const std::optional<Violation>& violation() const { return violation_; }
  const MonitorState& state() const { return state_; }
  /// Every event seen and no violation.
  bool complete() const { return !violation_ && state_.seen_count() == tpo_->size(); }

 private:
  const Tpo* tpo_;
  MonitorState state_;
  std::optional<Violation> violation_;
};

}  // namespace tpo
