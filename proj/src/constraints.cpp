#include "tpo/constraints.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <tuple>

#include "tpo/zone.hpp"

namespace tpo {
namespace {

// Constraint-graph node of an event; the origin is node 0.
std::size_t node_of(EventId e) { return e == kOrigin ? 0 : static_cast<std::size_t>(e) + 1; }
EventId event_of(std::size_t node) { return node == 0 ? kOrigin : static_cast<EventId>(node - 1); }

// Bound as an arc a -> b of weight w meaning t_b - t_a <= w.
struct Arc {
  std::size_t from;
  std::size_t to;
  double weight;
};

Arc arc_of(const Bound& b) {
  if (b.relation == Relation::kLe) return {node_of(b.from), node_of(b.to), b.constant};
  return {node_of(b.to), node_of(b.from), -b.constant};
}

// Inverse of arc_of for the implicit non-negativity arcs (t_0 - t_e <= 0).
Bound nonnegativity_bound(std::size_t node) { return Bound{kOrigin, event_of(node), Relation::kGe, 0.0}; }

struct Graph {
  std::size_t nodes = 0;
  std::vector<Arc> arcs;
  // Source bound of each arc; nullopt for implicit non-negativity arcs.
  std::vector<std::optional<Bound>> origin;
};

Graph build_graph(const DifferenceConstraintSystem& sys) {
  Graph g;
  g.nodes = sys.size() + 1;
  for (const Bound& b : sys.bounds()) {
    if (b.relation == Relation::kLe && b.constant == kInfinity) continue;
    g.arcs.push_back(arc_of(b));
    g.origin.emplace_back(b);
  }
  for (std::size_t v = 1; v < g.nodes; ++v) {
    g.arcs.push_back({v, 0, 0.0});
    g.origin.emplace_back(std::nullopt);
  }
  return g;
}

// Bellman-Ford from a virtual source connected to every node. Returns the
// arcs of a negative cycle, if any.
std::optional<std::vector<std::size_t>> negative_cycle_arcs(const Graph& g) {
  std::vector<double> dist(g.nodes, 0.0);
  std::vector<std::ptrdiff_t> pred(g.nodes, -1);
  std::ptrdiff_t last_relaxed = -1;
  for (std::size_t round = 0; round < g.nodes; ++round) {
    last_relaxed = -1;
    for (std::size_t k = 0; k < g.arcs.size(); ++k) {
      const Arc& a = g.arcs[k];
      if (dist[a.from] + a.weight < dist[a.to]) {
        dist[a.to] = dist[a.from] + a.weight;
        pred[a.to] = static_cast<std::ptrdiff_t>(k);
        last_relaxed = static_cast<std::ptrdiff_t>(a.to);
      }
    }
    if (last_relaxed < 0) return std::nullopt;
  }
  // Walk back far enough to be inside the cycle, then collect it.
  std::size_t v = static_cast<std::size_t>(last_relaxed);
  for (std::size_t step = 0; step < g.nodes; ++step) v = g.arcs[static_cast<std::size_t>(pred[v])].from;
  std::vector<std::size_t> cycle;
  std::size_t u = v;
  do {
    const auto k = static_cast<std::size_t>(pred[u]);
    cycle.push_back(k);
    u = g.arcs[k].from;
  } while (u != v);
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

// Single-source shortest paths (Bellman-Ford); the graph must be feasible.
std::vector<double> shortest_from(const Graph& g, std::size_t source) {
  std::vector<double> dist(g.nodes, kInfinity);
  dist[source] = 0.0;
  for (std::size_t round = 0; round < g.nodes; ++round) {
    bool changed = false;
    for (const Arc& a : g.arcs) {
      if (dist[a.from] == kInfinity) continue;
      if (dist[a.from] + a.weight < dist[a.to]) {
        dist[a.to] = dist[a.from] + a.weight;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

bool entails(const Zone& z, const Bound& b, double tolerance) {
  if (z.is_empty()) return true;
  const Arc a = arc_of(b);
  return z.upper(a.from, a.to) <= a.weight + tolerance;
}

}  // namespace

Zone closure(const DifferenceConstraintSystem& sys) {
  const std::size_t dim = sys.size() + 1;
  Zone z(dim);
  z.canonicalize();
  // Non-negativity: t_0 - t_e <= 0.
  for (std::size_t v = 1; v < dim; ++v) z.constrain(v, 0, 0.0);
  for (const Bound& b : sys.bounds()) {
    const Arc a = arc_of(b);
    z.constrain(a.from, a.to, a.weight);
  }
  return z;
}

bool bound_less(const Bound& a, const Bound& b) {
  return std::make_tuple(node_of(a.from), node_of(a.to), a.relation, a.constant) <
         std::make_tuple(node_of(b.from), node_of(b.to), b.relation, b.constant);
}

std::string format_bound(const Bound& b, const std::vector<std::string>& labels) {
  auto name = [&](EventId e) {
    if (e < labels.size()) return "t_" + labels[e];
    return "t_" + std::to_string(e + 1);
  };
  std::ostringstream os;
  os << name(b.to);
  if (!b.absolute()) os << " - " << name(b.from);
  os << ' ' << to_string(b.relation) << ' ';
  if (b.constant == kInfinity) {
    os << "inf";
  } else {
    os << b.constant;
  }
  return os.str();
}

DifferenceConstraintSystem::DifferenceConstraintSystem(std::size_t n, std::vector<Bound> bounds) : n_(n) {
  bounds_.reserve(bounds.size());
  for (const Bound& b : bounds) add(b);
}

void DifferenceConstraintSystem::add(const Bound& b) {
  if (b.to >= n_) throw InputError("bound target " + std::to_string(b.to) + " out of range");
  if (b.from != kOrigin && b.from >= n_) throw InputError("bound source " + std::to_string(b.from) + " out of range");
  if (b.from == b.to) throw InputError("bound relates event " + std::to_string(b.to) + " to itself");
  if (std::isnan(b.constant)) throw InputError("bound constant is NaN");
  if (b.relation == Relation::kGe && b.constant < 0.0) {
    throw InputError("lower bound must be non-negative: " + format_bound(b));
  }
  if (b.relation == Relation::kGe && b.constant == kInfinity) {
    throw InputError("lower bound must be finite: " + format_bound(b));
  }
  bounds_.push_back(b);
}

void DifferenceConstraintSystem::add_interval(EventId from, EventId to, double lo, double hi) {
  add(Bound{from, to, Relation::kGe, lo});
  add(Bound{from, to, Relation::kLe, hi});
}

DifferenceConstraintSystem DifferenceConstraintSystem::with_order(const PartialOrder& order) const {
  if (order.size() != n_) throw InputError("order size does not match constraint system");
  DifferenceConstraintSystem out = *this;
  for (const auto& [i, j] : order.reduced_edges()) out.add(Bound{i, j, Relation::kGe, 0.0});
  return out;
}

std::vector<Bound> DifferenceConstraintSystem::sorted_bounds() const {
  std::vector<Bound> out = bounds_;
  std::sort(out.begin(), out.end(), bound_less);
  return out;
}

bool DifferenceConstraintSystem::respects(const PartialOrder& order) const {
  return std::all_of(bounds_.begin(), bounds_.end(),
                     [&](const Bound& b) { return b.absolute() || order.precedes(b.from, b.to); });
}

std::optional<std::vector<Bound>> find_negative_cycle(const DifferenceConstraintSystem& sys) {
  const Graph g = build_graph(sys);
  auto arcs = negative_cycle_arcs(g);
  if (!arcs) return std::nullopt;
  std::vector<Bound> cycle;
  for (std::size_t k : *arcs) {
    cycle.push_back(g.origin[k] ? *g.origin[k] : nonnegativity_bound(g.arcs[k].from));
  }
  return cycle;
}

OptimizeResult optimize(const DifferenceConstraintSystem& sys, EventId i, EventId j, Sense sense) {
  if (j >= sys.size() || (i != kOrigin && i >= sys.size())) throw InputError("optimize: event index out of range");
  const Graph g = build_graph(sys);
  if (negative_cycle_arcs(g)) return {OptimizeResult::Status::kInfeasible, std::nan("")};
  if (i == j) return {OptimizeResult::Status::kOptimal, 0.0};
  if (sense == Sense::kMax) {
    const double d = shortest_from(g, node_of(i))[node_of(j)];
    if (d == kInfinity) return {OptimizeResult::Status::kUnbounded, kInfinity};
    return {OptimizeResult::Status::kOptimal, d};
  }
  const double d = shortest_from(g, node_of(j))[node_of(i)];
  if (d == kInfinity) return {OptimizeResult::Status::kUnbounded, -kInfinity};
  return {OptimizeResult::Status::kOptimal, d == 0.0 ? 0.0 : -d};
}

const char* to_string(Heuristic h) {
  switch (h) {
    case Heuristic::kNearest: return "nearest";
    case Heuristic::kDistant: return "distant";
    case Heuristic::kRandom: return "random";
    case Heuristic::kSound: return "sound";
  }
  return "?";
}

Heuristic parse_heuristic(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "nearest") return Heuristic::kNearest;
  if (lower == "distant") return Heuristic::kDistant;
  if (lower == "random") return Heuristic::kRandom;
  if (lower == "sound") return Heuristic::kSound;
  throw InputError("unknown heuristic '" + name + "' (expected nearest, distant, random or sound)");
}

namespace {

// Redundancy tester over a dense constraint graph. Arcs of the current bound
// set can be switched off and on; order constraints and non-negativity arcs are permanent.
class RedundancyEngine {
 public:
  RedundancyEngine(std::size_t nodes, const std::vector<Arc>& permanent, const std::vector<Arc>& arcs,
                   double tolerance)
      : v_(nodes), tol_(tolerance), arcs_(arcs), active_(arcs.size(), true),
        permanent_(nodes * nodes, kInfinity), weight_(nodes * nodes, kInfinity), pair_arcs_(nodes * nodes) {
    for (std::size_t x = 0; x < v_; ++x) permanent_[x * v_ + x] = 0.0;
    for (const Arc& a : permanent) {
      double& w = permanent_[a.from * v_ + a.to];
      w = std::min(w, a.weight);
    }
    weight_ = permanent_;
    for (std::size_t k = 0; k < arcs_.size(); ++k) {
      const Arc& a = arcs_[k];
      pair_arcs_[a.from * v_ + a.to].push_back(static_cast<std::uint32_t>(k));
      double& w = weight_[a.from * v_ + a.to];
      w = std::min(w, a.weight);
    }
    refresh_closure();
  }

  bool feasible() const { return feasible_; }

  void deactivate(std::size_t k) {
    active_[k] = false;
    recompute_pair(arcs_[k].from, arcs_[k].to);
  }

  void activate(std::size_t k) {
    active_[k] = true;
    double& w = weight_[arcs_[k].from * v_ + arcs_[k].to];
    w = std::min(w, arcs_[k].weight);
  }

  // Removal is permanent; the closure becomes a looser lower bound.
  void remove(std::size_t k) {
    if (active_[k]) deactivate(k);
    ++removed_since_refresh_;
  }

  // Whether arc k (currently inactive) is implied by the active arcs.
  bool implied(std::size_t k) {
    const Arc& arc = arcs_[k];
    const std::size_t a = arc.from;
    const std::size_t b = arc.to;
    const double limit = arc.weight + tol_;
    const double* row = &weight_[a * v_];

    if (row[b] <= limit) return true;

    // Every alternative path leaves a on some arc a -> c and then needs at
    // least closure_(c, b), which can only have grown since it was computed.
    double lower = kInfinity;
    for (std::size_t c = 0; c < v_; ++c) {
      if (c == a || row[c] == kInfinity) continue;
      lower = std::min(lower, row[c] + (c == b ? 0.0 : closure_[c * v_ + b]));
    }
    if (lower > limit) return false;

    for (std::size_t c = 0; c < v_; ++c) {
      if (c == a || c == b || row[c] == kInfinity) continue;
      if (row[c] + weight_[c * v_ + b] <= limit) return true;
    }

    const bool result = bounded_shortest_path(a, b, limit);
    if (!result) ++wasted_searches_;
    return result;
  }

  // Recomputes the closure once enough searches were wasted on a stale one.
  // Call only while every temporarily deactivated arc is active again.
  void maybe_refresh() {
    if (removed_since_refresh_ > 0 && wasted_searches_ >= std::max<std::size_t>(8, v_ / 2)) refresh_closure();
  }

 private:
  void recompute_pair(std::size_t a, std::size_t b) {
    double w = permanent_[a * v_ + b];
    for (std::uint32_t k : pair_arcs_[a * v_ + b]) {
      if (active_[k]) w = std::min(w, arcs_[k].weight);
    }
    weight_[a * v_ + b] = w;
  }

  void refresh_closure() {
    closure_ = weight_;
    for (std::size_t k = 0; k < v_; ++k) {
      for (std::size_t i = 0; i < v_; ++i) {
        const double ik = closure_[i * v_ + k];
        if (ik == kInfinity) continue;
        double* row = &closure_[i * v_];
        const double* krow = &closure_[k * v_];
        for (std::size_t j = 0; j < v_; ++j) {
          const double via = ik + krow[j];
          if (via < row[j]) row[j] = via;
        }
      }
    }
    feasible_ = true;
    for (std::size_t x = 0; x < v_; ++x) {
      if (closure_[x * v_ + x] < 0.0) feasible_ = false;
    }
    if (feasible_ && potential_.empty()) {
      // Virtual-source distances: a feasible schedule, valid for every subset
      // of the initial arcs.
      potential_.assign(v_, 0.0);
      for (std::size_t y = 0; y < v_; ++y) {
        for (std::size_t x = 0; x < v_; ++x) potential_[x] = std::min(potential_[x], closure_[y * v_ + x]);
      }
    }
    removed_since_refresh_ = 0;
    wasted_searches_ = 0;
  }

  // Dijkstra on reduced weights; true iff dist(a, b) <= limit.
  bool bounded_shortest_path(std::size_t a, std::size_t b, double limit) {
    const double reduced_limit = limit + potential_[a] - potential_[b];
    dist_.assign(v_, kInfinity);
    done_.assign(v_, 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist_[a] = 0.0;
    heap.emplace(0.0, a);
    while (!heap.empty()) {
      auto [d, x] = heap.top();
      heap.pop();
      if (done_[x]) continue;
      if (d > reduced_limit) return false;
      if (x == b) return true;
      done_[x] = 1;
      const double* row = &weight_[x * v_];
      for (std::size_t y = 0; y < v_; ++y) {
        if (done_[y] || row[y] == kInfinity || y == x) continue;
        const double reduced = std::max(0.0, row[y] + potential_[x] - potential_[y]);
        const double nd = d + reduced;
        if (nd < dist_[y] && nd <= reduced_limit) {
          dist_[y] = nd;
          heap.emplace(nd, y);
        }
      }
    }
    return false;
  }

  std::size_t v_;
  double tol_;
  std::vector<Arc> arcs_;
  std::vector<char> active_;
  std::vector<double> permanent_;
  std::vector<double> weight_;
  std::vector<std::vector<std::uint32_t>> pair_arcs_;
  std::vector<double> closure_;
  std::vector<double> potential_;
  std::vector<double> dist_;
  std::vector<char> done_;
  bool feasible_ = true;
  std::size_t removed_since_refresh_ = 0;
  std::size_t wasted_searches_ = 0;
};

}  // namespace

EliminationResult eliminate_redundancy(const DifferenceConstraintSystem& sys, const PartialOrder& order,
                                       const EliminationOptions& options) {
  if (order.size() != sys.size()) throw InputError("order size does not match constraint system");
  if (!(options.tolerance > 0.0)) throw InputError("elimination tolerance must be positive");
  if (!sys.respects(order)) throw PreconditionError("constraint system has a difference bound against the order");

  EliminationResult result;
  result.kept = DifferenceConstraintSystem(sys.size());

  std::vector<Bound> candidates;
  for (const Bound& b : sys.bounds()) {
    if (b.trivial()) {
      result.removed_trivial.push_back(b);
    } else {
      candidates.push_back(b);
    }
  }
  std::sort(candidates.begin(), candidates.end(), bound_less);

  std::vector<Arc> permanent;
  for (const auto& [i, j] : order.reduced_edges()) permanent.push_back(arc_of(Bound{i, j, Relation::kGe, 0.0}));
  for (std::size_t v = 1; v <= sys.size(); ++v) permanent.push_back({v, 0, 0.0});
  std::vector<Arc> arcs;
  arcs.reserve(candidates.size());
  for (const Bound& b : candidates) arcs.push_back(arc_of(b));

  RedundancyEngine engine(sys.size() + 1, permanent, arcs, options.tolerance);
  if (!engine.feasible()) {
    auto cycle = find_negative_cycle(sys.with_order(order));
    throw InfeasibleError("constraint system is infeasible", cycle.value_or(std::vector<Bound>{}));
  }

  std::vector<char> keep(candidates.size(), 1);

  auto test_single = [&](std::size_t k) {
    engine.maybe_refresh();
    engine.deactivate(k);
    ++result.tests;
    if (engine.implied(k)) {
      engine.remove(k);
      keep[k] = 0;
    } else {
      engine.activate(k);
    }
  };

  std::vector<std::size_t> visit(candidates.size());
  std::iota(visit.begin(), visit.end(), 0);

  switch (options.heuristic) {
    case Heuristic::kNearest:
    case Heuristic::kDistant: {
      std::vector<std::size_t> key(candidates.size());
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        key[k] = order.intermediate_count(candidates[k].from, candidates[k].to);
      }
      const bool ascending = options.heuristic == Heuristic::kNearest;
      std::stable_sort(visit.begin(), visit.end(), [&](std::size_t x, std::size_t y) {
        return ascending ? key[x] < key[y] : key[x] > key[y];
      });
      for (std::size_t k : visit) test_single(k);
      break;
    }
    case Heuristic::kRandom: {
      std::mt19937_64 rng(options.seed);
      std::shuffle(visit.begin(), visit.end(), rng);
      for (std::size_t k : visit) test_single(k);
      break;
    }
    case Heuristic::kSound: {
      // Sources from the last event backwards; the origin goes last.
      std::vector<EventId> sources(order.topological_order().rbegin(), order.topological_order().rend());
      sources.push_back(kOrigin);
      std::vector<std::vector<std::size_t>> by_source(sys.size() + 1);
      for (std::size_t k = 0; k < candidates.size(); ++k) by_source[node_of(candidates[k].from)].push_back(k);
      for (EventId source : sources) {
        const auto& group = by_source[node_of(source)];
        if (group.empty()) continue;
        engine.maybe_refresh();
        for (std::size_t k : group) engine.deactivate(k);
        bool all_implied = true;
        for (std::size_t k : group) {
          ++result.tests;
          if (!engine.implied(k)) {
            all_implied = false;
            break;
          }
        }
        for (std::size_t k : group) {
          if (all_implied) {
            engine.remove(k);
            keep[k] = 0;
          } else {
            engine.activate(k);
          }
        }
      }
      break;
    }
  }

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (keep[k]) {
      result.kept.add(candidates[k]);
    } else {
      result.removed_redundant.push_back(candidates[k]);
    }
  }
  return result;
}

bool equivalent(const DifferenceConstraintSystem& a, const DifferenceConstraintSystem& b, double tolerance) {
  if (a.size() != b.size()) return false;
  const Zone za = closure(a);
  const Zone zb = closure(b);
  auto covered = [&](const DifferenceConstraintSystem& sys, const Zone& z) {
    return std::all_of(sys.bounds().begin(), sys.bounds().end(),
                       [&](const Bound& bound) { return entails(z, bound, tolerance); });
  };
  return covered(a, zb) && covered(b, za);
}

bool equivalent(const DifferenceConstraintSystem& a, const DifferenceConstraintSystem& b, const PartialOrder& order,
                double tolerance) {
  return equivalent(a.with_order(order), b.with_order(order), tolerance);
}

bool satisfies(const DifferenceConstraintSystem& sys, const std::vector<double>& times) {
  if (times.size() != sys.size()) throw InputError("timestamp vector has wrong length");
  if (std::any_of(times.begin(), times.end(), [](double t) { return !(t >= 0.0); })) return false;
  for (const Bound& b : sys.bounds()) {
    const double diff = b.absolute() ? times[b.to] : times[b.to] - times[b.from];
    if (b.relation == Relation::kLe ? !(diff <= b.constant) : !(diff >= b.constant)) return false;
  }
  return true;
}

}  // namespace tpo
