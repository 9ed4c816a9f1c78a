#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tpo/types.hpp"

namespace tpo {

// Difference-bound matrix over variables x_0..x_{d-1}, where x_0 is the zero
// reference. upper(i, j) bounds x_j - x_i from above (kInfinity when
// unconstrained). Used both for clock zones and for event-time closures.
class Zone {
 public:
  Zone() = default;

  /// Unconstrained zone of the given dimension (reference included).
  explicit Zone(std::size_t dimension);

  /// All variables equal to the reference (every clock at 0).
  static Zone origin(std::size_t dimension);

  std::size_t dimension() const { return dim_; }

  double upper(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }
  /// Greatest lower bound of x_j - x_i.
  double lower(std::size_t i, std::size_t j) const { return -upper(j, i); }

  /// Intersects with x_j - x_i <= c. Keeps the zone canonical if it was.
  void constrain(std::size_t i, std::size_t j, double c);

  /// Floyd-Warshall tightening; idempotent.
  void canonicalize();

  bool is_canonical() const { return canonical_; }

  /// Valid on canonical zones.
  bool is_empty() const;

  /// Delay: drop upper bounds of every variable relative to the reference.
  void up();

  /// x_k := 0.
  void reset(std::size_t k);

  /// Smallest zone containing both (elementwise max of canonical forms).
  Zone convex_union(const Zone& other) const;

  /// Exact membership test; values[0] is ignored and taken as 0.
  bool contains(std::span<const double> values) const;

  friend bool operator==(const Zone& a, const Zone& b) { return a.dim_ == b.dim_ && a.m_ == b.m_; }

 private:
  double& at(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }

  std::size_t dim_ = 0;
  std::vector<double> m_;
  bool canonical_ = true;
};

}  // namespace tpo
