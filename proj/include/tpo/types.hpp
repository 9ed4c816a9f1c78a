#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace tpo {

/// Dense index of an event in its alphabet.
using EventId = std::uint32_t;

/// Index of a clock, 0..m-1.
using ClockId = std::uint32_t;

/// Fictitious initial event e_0, pinned at time 0 and preceding every event.
inline constexpr EventId kOrigin = std::numeric_limits<EventId>::max();

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation : std::uint8_t { kLe = 0, kGe = 1 };

inline const char* to_string(Relation rel) { return rel == Relation::kLe ? "<=" : ">="; }

/// Malformed arguments or input data.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tpo
