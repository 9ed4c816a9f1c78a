#include "tpo/synthesis.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace tpo {

std::size_t ClockAllocationGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto& adj : adjacency) d = std::max(d, adj.size());
  return d;
}

bool ClockAllocationGraph::adjacent(std::size_t u, std::size_t v) const {
  const auto& adj = adjacency[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::size_t ClockAllocationGraph::vertex_of(EventId source) const {
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (vertices[v].source == source) return v;
  }
  return vertices.size();
}

ClockAllocationGraph allocate_clocks(const DifferenceConstraintSystem& sys, const PartialOrder& order) {
  if (order.size() != sys.size()) throw InputError("order size does not match constraint system");
  if (!sys.respects(order)) throw PreconditionError("constraint system has a difference bound against the order");

  // Origin sorts first because kOrigin maps before every event here.
  std::map<std::size_t, ClockCandidate> by_source;
  for (const Bound& b : sys.bounds()) {
    if (b.trivial()) continue;
    const std::size_t key = b.absolute() ? 0 : static_cast<std::size_t>(b.from) + 1;
    auto& cand = by_source[key];
    cand.source = b.from;
    cand.bounds.push_back(b);
    cand.targets.push_back(b.to);
  }

  ClockAllocationGraph g;
  for (auto& [key, cand] : by_source) {
    std::sort(cand.targets.begin(), cand.targets.end());
    cand.targets.erase(std::unique(cand.targets.begin(), cand.targets.end()), cand.targets.end());
    cand.latest = order.maximal(cand.targets);
    if (cand.latest.size() > 1) {
      std::string msg = "clock of source ";
      msg += cand.source == kOrigin ? std::string("origin") : std::to_string(cand.source);
      msg += ": guarded events have " + std::to_string(cand.latest.size()) +
             " maximal elements; all are treated as last uses";
      g.warnings.push_back(std::move(msg));
    }
    g.vertices.push_back(std::move(cand));
  }

  // c_i is free for reuse at e_j when every last use of c_i is at or before e_j.
  auto done_before = [&](const ClockCandidate& a, const ClockCandidate& b) {
    if (b.source == kOrigin) return false;
    return std::all_of(a.latest.begin(), a.latest.end(),
                       [&](EventId m) { return order.precedes_or_equal(m, b.source); });
  };

  const std::size_t n = g.vertices.size();
  g.adjacency.assign(n, {});
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (!done_before(g.vertices[u], g.vertices[v]) && !done_before(g.vertices[v], g.vertices[u])) {
        g.edges.emplace_back(u, v);
        g.adjacency[u].push_back(v);
        g.adjacency[v].push_back(u);
      }
    }
  }
  return g;
}

Coloring color(const ClockAllocationGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> visit(n);
  std::iota(visit.begin(), visit.end(), 0);
  std::stable_sort(visit.begin(), visit.end(), [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> raw(n, kNone);
  std::vector<char> used;
  for (std::size_t v : visit) {
    used.assign(g.degree(v) + 1, 0);
    for (std::size_t w : g.adjacency[v]) {
      if (raw[w] != kNone && raw[w] < used.size()) used[raw[w]] = 1;
    }
    std::size_t c = 0;
    while (used[c]) ++c;
    raw[v] = c;
  }

  // Renumber by first appearance in vertex order.
  Coloring out;
  out.color.assign(n, 0);
  std::vector<std::size_t> rename;
  for (std::size_t v = 0; v < n; ++v) {
    if (raw[v] >= rename.size()) rename.resize(raw[v] + 1, kNone);
    if (rename[raw[v]] == kNone) rename[raw[v]] = out.colors++;
    out.color[v] = rename[raw[v]];
  }
  return out;
}

bool is_proper(const ClockAllocationGraph& g, const Coloring& c) {
  if (c.color.size() != g.size()) return false;
  return std::none_of(g.edges.begin(), g.edges.end(),
                      [&](const auto& e) { return c.color[e.first] == c.color[e.second]; });
}

Tpo assemble_tpo(const ClockAllocationGraph& g, const Coloring& coloring, const PartialOrder& order) {
  if (!is_proper(g, coloring)) throw PreconditionError("coloring merges conflicting clocks");
  const std::size_t n = order.size();
  std::vector<Guard> guards(n);
  std::vector<std::vector<ClockId>> resets(n);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& cand = g.vertices[v];
    const auto clock = static_cast<ClockId>(coloring.color[v]);
    if (cand.source != kOrigin) resets[cand.source].push_back(clock);
    for (const Bound& b : cand.bounds) {
      guards[b.to].conjuncts.push_back(GuardConjunct{clock, b.relation, b.constant});
    }
  }
  for (auto& guard : guards) {
    auto& cs = guard.conjuncts;
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  }
  return Tpo(order, coloring.colors, std::move(guards), std::move(resets));
}

SynthesisResult synthesize(const DifferenceConstraintSystem& sys, const PartialOrder& order) {
  SynthesisResult r;
  r.graph = allocate_clocks(sys, order);
  r.coloring = color(r.graph);
  r.tpo = assemble_tpo(r.graph, r.coloring, order);
  return r;
}

}  // namespace tpo
