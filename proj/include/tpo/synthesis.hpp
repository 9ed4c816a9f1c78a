#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tpo/constraints.hpp"
#include "tpo/core.hpp"

namespace tpo {

// Candidate clock c_i: reset at source e_i (never, for the origin) and read
// by the guards at the targets of its bounds.
struct ClockCandidate {
  EventId source = kOrigin;
  std::vector<Bound> bounds;
  /// E_i, ascending.
  std::vector<EventId> targets;
  /// Maximal elements of E_i; a single element is L(i).
  std::vector<EventId> latest;

  EventId latest_event() const { return latest.front(); }
};

// Conflict graph over candidate clocks. Vertices are ordered with the origin's
// clock first, then by source id.
struct ClockAllocationGraph {
  using Edge = std::pair<std::size_t, std::size_t>;

  std::vector<ClockCandidate> vertices;
  /// (u, v) with u < v, sorted.
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> adjacency;
  /// Sources whose targets have no unique latest element.
  std::vector<std::string> warnings;

  std::size_t size() const { return vertices.size(); }
  std::size_t degree(std::size_t v) const { return adjacency[v].size(); }
  std::size_t max_degree() const;
  bool adjacent(std::size_t u, std::size_t v) const;
  /// Vertex of the clock allocated for `source`, or size() if none.
  std::size_t vertex_of(EventId source) const;
};

/// One candidate per source with bounds; conflict edge between c_i and c_j
/// unless the last use of one precedes-or-equals the other's source. When
/// E_i has several maximal elements all of them count as last uses.
/// Throws PreconditionError if a difference bound does not respect `order`.
ClockAllocationGraph allocate_clocks(const DifferenceConstraintSystem& sys, const PartialOrder& order);

struct Coloring {
  /// Color per vertex; colors are numbered by their smallest vertex.
  std::vector<std::size_t> color;
  std::size_t colors = 0;
};

/// Greedy coloring, vertices by descending degree then index.
Coloring color(const ClockAllocationGraph& g);

/// No edge joins two vertices of the same color.
bool is_proper(const ClockAllocationGraph& g, const Coloring& c);

/// One physical clock per color, reset at each source of its class and
/// guarding each target with the bound's constant. Throws PreconditionError
/// if the coloring is not proper.
Tpo assemble_tpo(const ClockAllocationGraph& g, const Coloring& coloring, const PartialOrder& order);

struct SynthesisResult {
  ClockAllocationGraph graph;
  Coloring coloring;
  Tpo tpo;
};

/// allocate_clocks, color, assemble_tpo.
SynthesisResult synthesize(const DifferenceConstraintSystem& sys, const PartialOrder& order);

}  // namespace tpo
