#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <utility>
#include <vector>

#include "tpo/types.hpp"

namespace tpo {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

// Strict partial order over events 0..n-1, stored as its full transitive
// closure (ancestor/descendant bitsets) plus the covering edges of its
// transitive reduction. Immutable after construction.
class PartialOrder {
 public:
  using Edge = std::pair<EventId, EventId>;

  PartialOrder() = default;

  /// Empty order (all events incomparable).
  explicit PartialOrder(std::size_t n);

  /// Closure of the given edges. Throws InputError on a cycle, a self loop or
  /// an out-of-range endpoint.
  static PartialOrder from_edges(std::size_t n, const std::vector<Edge>& edges);

  /// `before[j]` holds every i with i ≺ j. The relation must already be a
  /// strict partial order; transitivity is verified.
  static PartialOrder from_predecessor_sets(std::vector<Bitset> before);

  std::size_t size() const { return n_; }

  /// e_i ≺ e_j. kOrigin precedes every event.
  bool precedes(EventId i, EventId j) const;

  /// e_i ⪯ e_j.
  bool precedes_or_equal(EventId i, EventId j) const { return i == j || precedes(i, j); }

  bool comparable(EventId i, EventId j) const { return precedes(i, j) || precedes(j, i); }

  /// |{k : e_i ≺ e_k ≺ e_j}|. For i = kOrigin this counts the ancestors of j.
  std::size_t intermediate_count(EventId i, EventId j) const;

  const Bitset& ancestors(EventId e) const { return ancestors_[e]; }
  const Bitset& descendants(EventId e) const { return descendants_[e]; }

  /// Covering edges (transitive reduction), sorted.
  const std::vector<Edge>& reduced_edges() const { return reduced_; }

  /// Direct successors in the reduction.
  const std::vector<EventId>& successors(EventId e) const { return succ_[e]; }
  const std::vector<EventId>& predecessors(EventId e) const { return pred_[e]; }

  /// Deterministic topological order (smallest available index first).
  const std::vector<EventId>& topological_order() const { return topo_; }

  /// Maximal elements of `events` under ≺, in ascending index order.
  std::vector<EventId> maximal(const std::vector<EventId>& events) const;

  std::size_t relation_size() const;

  friend bool operator==(const PartialOrder& a, const PartialOrder& b) {
    return a.n_ == b.n_ && a.descendants_ == b.descendants_;
  }

 private:
  void build_from_closure();

  std::size_t n_ = 0;
  std::vector<Bitset> descendants_;
  std::vector<Bitset> ancestors_;
  std::vector<Edge> reduced_;
  std::vector<std::vector<EventId>> succ_;
  std::vector<std::vector<EventId>> pred_;
  std::vector<EventId> topo_;
};

}  // namespace tpo
