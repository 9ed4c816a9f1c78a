#include "tpo/core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tpo {

Alphabet::Alphabet(std::vector<std::string> labels) {
  for (auto& l : labels) {
    if (l.empty()) throw InputError("empty event label");
    if (find(l)) throw InputError("duplicate event label '" + l + "'");
    intern(l);
  }
}

Alphabet Alphabet::numbered(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i + 1));
  return Alphabet(std::move(labels));
}

std::optional<EventId> Alphabet::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EventId Alphabet::id(const std::string& label) const {
  if (auto e = find(label)) return *e;
  throw InputError("unknown event label '" + label + "'");
}

EventId Alphabet::intern(const std::string& label) {
  if (auto e = find(label)) return *e;
  const auto e = static_cast<EventId>(labels_.size());
  labels_.push_back(label);
  index_.emplace(label, e);
  return e;
}

void TimedTrace::validate(std::size_t n) const {
  if (entries.size() != n) {
    throw InputError("trace has " + std::to_string(entries.size()) + " entries, alphabet has " +
                     std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  double last = 0.0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& [e, t] = entries[k];
    if (e >= n) throw InputError("event id " + std::to_string(e) + " out of range");
    if (seen[e]) throw InputError("event id " + std::to_string(e) + " occurs twice");
    seen[e] = true;
    if (!std::isfinite(t) || t < 0.0) throw InputError("bad timestamp at position " + std::to_string(k));
    if (t < last) throw InputError("timestamps decrease at position " + std::to_string(k));
    last = t;
  }
}

std::vector<double> TimedTrace::times(std::size_t n) const {
  std::vector<double> t(n, 0.0);
  for (const auto& entry : entries) t.at(entry.event) = entry.time;
  return t;
}

TimedTrace TimedTrace::from_times(const std::vector<double>& times, const std::vector<std::size_t>& tie_rank) {
  std::vector<EventId> ids(times.size());
  std::iota(ids.begin(), ids.end(), EventId{0});
  std::sort(ids.begin(), ids.end(), [&](EventId a, EventId b) {
    if (times[a] != times[b]) return times[a] < times[b];
    return tie_rank[a] < tie_rank[b];
  });
  TimedTrace trace;
  trace.entries.reserve(ids.size());
  for (EventId e : ids) trace.entries.push_back({e, times[e]});
  return trace;
}

bool Guard::mentions(ClockId c) const {
  return std::any_of(conjuncts.begin(), conjuncts.end(), [c](const GuardConjunct& g) { return g.clock == c; });
}

std::string format_guard(const Guard& g) {
  if (g.trivial()) return "true";
  std::ostringstream os;
  for (std::size_t k = 0; k < g.conjuncts.size(); ++k) {
    if (k) os << " && ";
    const auto& c = g.conjuncts[k];
    os << 'c' << c.clock << ' ' << to_string(c.relation) << ' ' << c.constant;
  }
  return os.str();
}

Tpo::Tpo(PartialOrder order, std::size_t clocks, std::vector<Guard> guards,
         std::vector<std::vector<ClockId>> resets)
    : order_(std::move(order)), clocks_(clocks), guards_(std::move(guards)), resets_(std::move(resets)) {
  const std::size_t n = order_.size();
  if (guards_.size() != n) throw InputError("guard map size does not match event count");
  if (resets_.size() != n) throw InputError("reset map size does not match event count");
  for (std::size_t e = 0; e < n; ++e) {
    for (const auto& c : guards_[e].conjuncts) {
      if (c.clock >= clocks_) throw InputError("guard of event " + std::to_string(e) + " uses unknown clock");
      if (!std::isfinite(c.constant) || c.constant < 0.0) {
        throw InputError("guard constant at event " + std::to_string(e) + " must be finite and >= 0");
      }
    }
    auto& r = resets_[e];
    for (ClockId c : r) {
      if (c >= clocks_) throw InputError("reset of event " + std::to_string(e) + " uses unknown clock");
    }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
}

Tpo::Tpo(PartialOrder order)
    : order_(std::move(order)), guards_(order_.size()), resets_(order_.size()) {}

std::vector<EventId> Tpo::dependents(ClockId c) const {
  std::vector<EventId> out;
  for (EventId e = 0; e < size(); ++e) {
    if (guards_[e].mentions(c) || std::binary_search(resets_[e].begin(), resets_[e].end(), c)) out.push_back(e);
  }
  return out;
}

ClockValuation::ClockValuation(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0)) throw InputError("clock values must be non-negative");
  }
}

ClockValuation advance(const ClockValuation& v, double delta) {
  if (!(delta >= 0.0)) throw InputError("delay must be non-negative");
  std::vector<double> out = v.values();
  for (double& x : out) x += delta;
  return ClockValuation(std::move(out));
}

ClockValuation reset(const ClockValuation& v, const std::vector<ClockId>& subset) {
  std::vector<double> out = v.values();
  for (ClockId c : subset) {
    if (c >= out.size()) throw InputError("reset of unknown clock " + std::to_string(c));
    out[c] = 0.0;
  }
  return ClockValuation(std::move(out));
}

RaceCheck check_race_free(const Tpo& tpo, RaceMode mode) {
  const auto& order = tpo.order();
  for (ClockId c = 0; c < tpo.clocks(); ++c) {
    const auto deps = tpo.dependents(c);
    for (std::size_t a = 0; a < deps.size(); ++a) {
      for (std::size_t b = a + 1; b < deps.size(); ++b) {
        const EventId x = deps[a], y = deps[b];
        if (order.comparable(x, y)) continue;
        if (mode == RaceMode::kResetOrdered) {
          const auto& rx = tpo.resets(x);
          const auto& ry = tpo.resets(y);
          if (!std::binary_search(rx.begin(), rx.end(), c) && !std::binary_search(ry.begin(), ry.end(), c)) {
            continue;
          }
        }
        return {false, RaceWitness{c, x, y}};
      }
    }
  }
  return {};
}

DifferenceConstraintSystem tpo_to_constraints(const Tpo& tpo) {
  if (const auto rc = check_race_free(tpo, RaceMode::kResetOrdered); !rc.race_free) {
    const auto& w = *rc.witness;
    throw PreconditionError("TPO has a clock race on clock " + std::to_string(w.clock) + " between events " +
                            std::to_string(w.first) + " and " + std::to_string(w.second));
  }
  const auto& order = tpo.order();
  const std::size_t n = tpo.size();

  std::vector<std::vector<EventId>> resetters(tpo.clocks());
  for (EventId e = 0; e < n; ++e) {
    for (ClockId c : tpo.resets(e)) resetters[c].push_back(e);
  }

  DifferenceConstraintSystem sys(n);
  for (EventId e = 0; e < n; ++e) {
    for (const auto& g : tpo.guard(e).conjuncts) {
      std::vector<EventId> before;
      for (EventId k : resetters[g.clock]) {
        if (order.precedes(k, e)) before.push_back(k);
      }
      EventId from = kOrigin;
      if (!before.empty()) {
        const auto top = order.maximal(before);
        // Resetters of one clock are pairwise ordered, so the maximum is unique.
        assert(top.size() == 1);
        from = top.front();
      }
      sys.add(Bound{from, e, g.relation, g.constant});
    }
  }
  return sys.with_order(order);
}

}  // namespace tpo
