#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tpo/constraints.hpp"
#include "tpo/core.hpp"

namespace tpo::io {

/// Malformed file content. `where` names the line or trace that failed.
class ParseError : public InputError {
 public:
  ParseError(std::string where, const std::string& what)
      : InputError(where + ": " + what), where_(std::move(where)), message_(what) {}
  const std::string& where() const { return where_; }
  const std::string& message() const { return message_; }

 private:
  std::string where_;
  std::string message_;
};

struct TraceLog {
  Alphabet alphabet;
  std::vector<TimedTrace> traces;

  friend bool operator==(const TraceLog&, const TraceLog&) = default;
};

enum class Validation : std::uint8_t {
  /// Every trace must be a permutation of the alphabet with non-decreasing
  /// timestamps.
  kStrict,
  /// Labels must resolve and timestamps must be finite and >= 0; order,
  /// duplicates and missing events are left for the monitor to report.
  kLenient,
};

// Line-delimited JSON: a header line {"alphabet": [...]} followed by one
// {"events": [[label, time], ...]} object per trace. Blank lines are skipped.
TraceLog read_trace_log(std::istream& in, Validation validation = Validation::kStrict);
void write_trace_log(std::ostream& out, const TraceLog& log);

/// CSV with a header naming trace_id, event and timestamp (any column order).
/// Traces appear in order of first occurrence; the alphabet is the set of
/// labels in order of first occurrence.
TraceLog read_trace_log_csv(std::istream& in, Validation validation = Validation::kStrict);
void write_trace_log_csv(std::ostream& out, const TraceLog& log);

/// Dispatches on the extension: ".csv" is CSV, anything else JSONL.
TraceLog load_trace_log(const std::string& path, Validation validation = Validation::kStrict);
void save_trace_log(const std::string& path, const TraceLog& log);

struct TpoDocument {
  Alphabet alphabet;
  Tpo tpo;

  friend bool operator==(const TpoDocument&, const TpoDocument&) = default;
};

std::string tpo_to_json(const TpoDocument& doc);
TpoDocument tpo_from_json(const std::string& text);
TpoDocument load_tpo(const std::string& path);

/// Graphviz rendering: one node per event carrying its guard and resets, one
/// edge per covering pair.
std::string tpo_to_dot(const TpoDocument& doc);

struct ConstraintDocument {
  Alphabet alphabet;
  DifferenceConstraintSystem system;
  std::optional<PartialOrder> order;
};

// {"events": [...], "constraints": [...], "order": [[a, b], ...]?}
// A constraint is {"from", "to", "relation", "constant"} or
// {"from", "to", "lower", "upper"}; "from" is null or absent for an absolute
// bound and infinite constants are the string "inf".
std::string constraints_to_json(const ConstraintDocument& doc);
ConstraintDocument constraints_from_json(const std::string& text);
ConstraintDocument load_constraints(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tpo::io
