#include "tpo/monitor.hpp"

#include <sstream>

namespace tpo {

namespace {

std::string name_of(EventId e, const std::vector<std::string>& labels) {
  if (e < labels.size()) return labels[e];
  return "e" + std::to_string(e + 1);
}

}  // namespace

MonitorState MonitorState::initial(const Tpo& tpo) {
  MonitorState s;
  s.anchors.assign(tpo.clocks(), 0.0);
  s.seen.resize(tpo.size());
  return s;
}

ClockValuation MonitorState::valuation() const {
  std::vector<double> v(anchors.size());
  for (std::size_t c = 0; c < anchors.size(); ++c) v[c] = last_time - anchors[c];
  return ClockValuation(std::move(v));
}

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::kOrderViolation: return "OrderViolation";
    case ViolationKind::kGuardViolation: return "GuardViolation";
    case ViolationKind::kTimeRegression: return "TimeRegression";
    case ViolationKind::kDuplicateEvent: return "DuplicateEvent";
    case ViolationKind::kIncompleteRun: return "IncompleteRun";
  }
  return "?";
}

std::string Violation::describe(const std::vector<std::string>& labels) const {
  std::ostringstream os;
  os << to_string(kind) << " at " << name_of(at_event, labels);
  switch (kind) {
    case ViolationKind::kOrderViolation:
      if (edge) os << ": requires " << name_of(edge->first, labels) << " before " << name_of(edge->second, labels);
      break;
    case ViolationKind::kGuardViolation:
      os << " (t=" << time << "): c" << conjunct->clock << " = " << clock_value << " violates c" << conjunct->clock
         << ' ' << to_string(conjunct->relation) << ' ' << conjunct->constant;
      break;
    case ViolationKind::kTimeRegression:
      os << ": t=" << time << " < previous " << previous_time;
      break;
    case ViolationKind::kDuplicateEvent:
      os << " (position " << position << ")";
      break;
    case ViolationKind::kIncompleteRun:
      os << ": event never occurred";
      break;
  }
  return os.str();
}

namespace {

// Conditions 1-2 of a transition: everything except the guard.
std::optional<Violation> structural_check(const MonitorState& state, const Tpo& tpo, EventId event, double time) {
  if (event >= tpo.size()) throw InputError("event id " + std::to_string(event) + " outside the alphabet");
  Violation v;
  v.at_event = event;
  v.position = state.seen_count();
  v.time = time;
  if (!(time >= state.last_time)) {
    v.kind = ViolationKind::kTimeRegression;
    v.previous_time = state.last_time;
    return v;
  }
  if (state.seen.test(event)) {
    v.kind = ViolationKind::kDuplicateEvent;
    return v;
  }
  if (!tpo.order().ancestors(event).is_subset_of(state.seen)) {
    v.kind = ViolationKind::kOrderViolation;
    // Some direct predecessor must be missing: seen events had all their
    // ancestors seen already.
    for (EventId p : tpo.order().predecessors(event)) {
      if (!state.seen.test(p)) {
        v.edge = PartialOrder::Edge{p, event};
        break;
      }
    }
    return v;
  }
  return std::nullopt;
}

std::optional<Violation> guard_check(const MonitorState& state, const Tpo& tpo, EventId event, double time) {
  for (const auto& g : tpo.guard(event).conjuncts) {
    const double value = time - state.anchors[g.clock];
    if (!g.holds(value)) {
      Violation v;
      v.kind = ViolationKind::kGuardViolation;
      v.at_event = event;
      v.position = state.seen_count();
      v.time = time;
      v.conjunct = g;
      v.clock_value = value;
      return v;
    }
  }
  return std::nullopt;
}

MonitorState advance_state(const MonitorState& state, const Tpo& tpo, EventId event, double time) {
  MonitorState next = state;
  for (ClockId c : tpo.resets(event)) next.anchors[c] = time;
  next.last_time = time;
  next.seen.set(event);
  return next;
}

std::optional<Violation> missing_event(const MonitorState& state, std::size_t n) {
  if (state.seen_count() == n) return std::nullopt;
  Violation v;
  v.kind = ViolationKind::kIncompleteRun;
  v.position = state.seen_count();
  v.time = state.last_time;
  for (EventId e = 0; e < n; ++e) {
    if (!state.seen.test(e)) {
      v.at_event = e;
      break;
    }
  }
  return v;
}

}  // namespace

StepResult step(const MonitorState& state, const Tpo& tpo, EventId event, double time) {
  if (auto v = structural_check(state, tpo, event, time)) return *v;
  if (auto v = guard_check(state, tpo, event, time)) return *v;
  return advance_state(state, tpo, event, time);
}

CheckResult check_trace(const Tpo& tpo, const TimedTrace& trace) {
  MonitorState state = MonitorState::initial(tpo);
  for (const auto& [event, time] : trace.entries) {
    auto r = step(state, tpo, event, time);
    if (auto* v = std::get_if<Violation>(&r)) return {*v};
    state = std::move(std::get<MonitorState>(r));
  }
  return {missing_event(state, tpo.size())};
}

std::vector<Violation> check_trace_all(const Tpo& tpo, const TimedTrace& trace) {
  std::vector<Violation> out;
  MonitorState state = MonitorState::initial(tpo);
  for (const auto& [event, time] : trace.entries) {
    if (auto v = structural_check(state, tpo, event, time)) {
      out.push_back(*v);
      return out;
    }
    if (auto v = guard_check(state, tpo, event, time)) out.push_back(*v);
    state = advance_state(state, tpo, event, time);
  }
  if (auto v = missing_event(state, tpo.size())) out.push_back(*v);
  return out;
}

std::optional<Violation> Monitor::feed(EventId event, double time) {
  if (violation_) return violation_;
  auto r = step(state_, *tpo_, event, time);
  if (auto* v = std::get_if<Violation>(&r)) {
    violation_ = *v;
    return violation_;
  }
  state_ = std::move(std::get<MonitorState>(r));
  return std::nullopt;
}

std::optional<Violation> Monitor::finish() const {
  if (violation_) return violation_;
  return missing_event(state_, tpo_->size());
}

}  // namespace tpo
