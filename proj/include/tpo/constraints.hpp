#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpo/partial_order.hpp"
#include "tpo/types.hpp"
#include "tpo/zone.hpp"

namespace tpo {

// One inequality t_to - t_from ⋈ constant. An absolute bound t_to ⋈ a uses
// from = kOrigin (t_0 = 0).
struct Bound {
  EventId from = kOrigin;
  EventId to = 0;
  Relation relation = Relation::kLe;
  double constant = 0.0;

  bool absolute() const { return from == kOrigin; }

  /// Lower bounds of 0 and infinite upper bounds are implied by the order.
  bool trivial() const {
    return relation == Relation::kGe ? constant <= 0.0 : constant == kInfinity;
  }

  friend bool operator==(const Bound&, const Bound&) = default;
};

/// Lexicographic (from, to, relation, constant) with kOrigin ordered first.
bool bound_less(const Bound& a, const Bound& b);

/// "t_e5 - t_e3 <= 5" style rendering; absolute bounds omit the subtrahend.
std::string format_bound(const Bound& b, const std::vector<std::string>& labels = {});

// Conjunction of difference bounds over events 0..n-1 plus the pinned origin.
// Every time variable is implicitly non-negative.
class DifferenceConstraintSystem {
 public:
  DifferenceConstraintSystem() = default;
  explicit DifferenceConstraintSystem(std::size_t n) : n_(n) {}
  DifferenceConstraintSystem(std::size_t n, std::vector<Bound> bounds);

  std::size_t size() const { return n_; }
  const std::vector<Bound>& bounds() const { return bounds_; }
  bool empty() const { return bounds_.empty(); }

  /// Throws InputError on out-of-range ids, self differences, NaN constants or
  /// negative lower bounds.
  void add(const Bound& b);

  /// Adds lo <= t_to - t_from <= hi as two bounds; hi may be kInfinity.
  void add_interval(EventId from, EventId to, double lo, double hi);

  /// Conjoins the order constraints: t_j - t_i >= 0 for every covering edge of `order`.
  DifferenceConstraintSystem with_order(const PartialOrder& order) const;

  /// Bounds sorted with bound_less; useful for comparisons.
  std::vector<Bound> sorted_bounds() const;

  /// True iff every non-absolute bound respects `order` (from ≺ to).
  bool respects(const PartialOrder& order) const;

 private:
  std::size_t n_ = 0;
  std::vector<Bound> bounds_;
};

struct OptimizeResult {
  enum class Status : std::uint8_t { kOptimal, kUnbounded, kInfeasible };
  Status status = Status::kOptimal;
  /// Optimum, or ±kInfinity when unbounded, NaN when infeasible.
  double value = 0.0;

  bool feasible() const { return status != Status::kInfeasible; }
};

enum class Sense : std::uint8_t { kMax, kMin };

/// Optimum of t_j - t_i over the system (i may be kOrigin). Infeasibility is
/// reported in the result, not thrown.
OptimizeResult optimize(const DifferenceConstraintSystem& sys, EventId i, EventId j, Sense sense);

/// Thrown when a system that must be feasible is not. `cycle` lists the bounds
/// of one negative cycle in the constraint graph.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::vector<Bound> cycle)
      : std::runtime_error(what), cycle_(std::move(cycle)) {}
  const std::vector<Bound>& cycle() const { return cycle_; }

 private:
  std::vector<Bound> cycle_;
};

/// Returns a negative cycle witness if the system is empty, nullopt otherwise.
std::optional<std::vector<Bound>> find_negative_cycle(const DifferenceConstraintSystem& sys);

enum class Heuristic : std::uint8_t { kNearest, kDistant, kRandom, kSound };

const char* to_string(Heuristic h);
/// Parses "nearest", "distant", "random" or "sound" (case-insensitive).
Heuristic parse_heuristic(const std::string& name);

struct EliminationOptions {
  Heuristic heuristic = Heuristic::kNearest;
  std::uint64_t seed = 1337;
  /// A bound is redundant when the optimum satisfies it within this slack.
  double tolerance = 1e-9;
};

struct EliminationResult {
  DifferenceConstraintSystem kept;
  std::vector<Bound> removed_trivial;
  std::vector<Bound> removed_redundant;
  /// Number of redundancy tests (one optimization problem each).
  std::size_t tests = 0;
};

/// Drops trivial bounds, then greedily removes every bound implied by the
/// remaining bounds together with the order constraints of `order`, visiting
/// bounds in the order chosen by the heuristic. `kept` plus the order
/// constraints describes the same polyhedron as `sys` plus the order
/// constraints. Throws InfeasibleError if the input is empty.
EliminationResult eliminate_redundancy(const DifferenceConstraintSystem& sys, const PartialOrder& order,
                                       const EliminationOptions& options = {});

/// Mutual entailment: every bound of `a` is implied by `b` and vice versa.
bool equivalent(const DifferenceConstraintSystem& a, const DifferenceConstraintSystem& b,
                double tolerance = 1e-9);

/// Same, with the order constraints of `order` conjoined to both sides.
bool equivalent(const DifferenceConstraintSystem& a, const DifferenceConstraintSystem& b,
                const PartialOrder& order, double tolerance = 1e-9);

/// Canonical DBM of the system over (t_0, t_1, ..., t_n), non-negativity
/// included; upper(i + 1, j + 1) is max(t_j - t_i). Empty iff infeasible.
Zone closure(const DifferenceConstraintSystem& sys);

/// Checks whether timestamps `times` (indexed by event) satisfy every bound
/// and non-negativity, with exact comparisons.
bool satisfies(const DifferenceConstraintSystem& sys, const std::vector<double>& times);

}  // namespace tpo
