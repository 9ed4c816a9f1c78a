#include "tpo/gen.hpp"

#include <algorithm>
#include <cmath>

#include "tpo/constraints.hpp"

namespace tpo {

namespace {

std::size_t node(EventId e) { return static_cast<std::size_t>(e) + 1; }

// Random maximal path: a random minimal event, then random covering
// successors until a maximal one.
std::vector<EventId> random_path(const PartialOrder& order, std::mt19937_64& rng) {
  std::vector<EventId> roots;
  for (EventId e = 0; e < order.size(); ++e) {
    if (order.predecessors(e).empty()) roots.push_back(e);
  }
  std::vector<EventId> path{roots[rng() % roots.size()]};
  while (!order.successors(path.back()).empty()) {
    const auto& next = order.successors(path.back());
    path.push_back(next[rng() % next.size()]);
  }
  return path;
}

int uniform_int(int lo, int hi, std::mt19937_64& rng) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

PartialOrder random_dag(std::size_t n, double density, std::uint64_t seed) {
  if (n == 0) throw InputError("a DAG needs at least one event");
  if (!(density >= 0.0 && density <= 1.0)) throw InputError("density must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<PartialOrder::Edge> edges;
  for (EventId i = 0; i < n; ++i) {
    for (EventId j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.emplace_back(i, j);
    }
  }
  return PartialOrder::from_edges(n, edges);
}

Tpo random_bounds(const PartialOrder& order, const BoundOptions& options) {
  if (options.clock_budget == 0) throw InputError("clock budget must be at least 1");
  if (options.max_constant < 0) throw InputError("max constant must be non-negative");
  const std::size_t n = order.size();
  std::mt19937_64 rng(options.seed);
  std::bernoulli_distribution guard_coin(options.guard_probability);
  std::bernoulli_distribution reset_coin(0.5);

  // Current feasible region of the event times.
  Zone zone = closure(DifferenceConstraintSystem(n).with_order(order));

  std::vector<Guard> guards(n);
  std::vector<std::vector<ClockId>> resets(n);

  // Bounds on t_e - t_anchor (anchor node 0 is the origin).
  auto add_guard = [&](ClockId clock, std::size_t anchor, EventId e) {
    const std::size_t target = node(e);
    const int low_z = static_cast<int>(std::ceil(zone.lower(anchor, target)));
    const double up_z = zone.upper(anchor, target);
    const int cap = options.max_constant;
    const int high = up_z == kInfinity ? cap : std::min(cap, static_cast<int>(std::floor(up_z)));
    const int kind = uniform_int(0, 2, rng);  // lower, upper or both
    int floor_for_upper = low_z;
    if (kind != 1 && low_z <= high) {
      const int l = uniform_int(low_z, high, rng);
      guards[e].conjuncts.push_back({clock, Relation::kGe, static_cast<double>(l)});
      zone.constrain(target, anchor, -l);
      floor_for_upper = l;
    }
    if (kind != 0 && floor_for_upper <= cap) {
      const int u = uniform_int(floor_for_upper, cap, rng);
      guards[e].conjuncts.push_back({clock, Relation::kLe, static_cast<double>(u)});
      zone.constrain(anchor, target, u);
    }
  };

  for (ClockId c = 0; c < options.clock_budget; ++c) {
    const auto path = random_path(order, rng);
    if (c == 0) {
      for (EventId e : path) {
        if (guard_coin(rng)) add_guard(c, 0, e);
      }
      continue;
    }
    std::size_t anchor = node(path.front());
    resets[path.front()].push_back(c);
    for (std::size_t k = 1; k < path.size(); ++k) {
      if (guard_coin(rng)) add_guard(c, anchor, path[k]);
      if (k + 1 < path.size() && reset_coin(rng)) {
        anchor = node(path[k]);
        resets[path[k]].push_back(c);
      }
    }
  }
  for (auto& g : guards) std::sort(g.conjuncts.begin(), g.conjuncts.end());
  return Tpo(order, options.clock_budget, std::move(guards), std::move(resets));
}

TraceSampler::TraceSampler(const Tpo& tpo, SamplerOptions options)
    : order_(tpo.order()), options_(options), closure_(tpo::closure(tpo_to_constraints(tpo))) {
  if (closure_.is_empty()) throw PreconditionError("TPO admits no compatible trace");
  if (!(options_.max_delay >= 0.0) || !(options_.quantum >= 0.0)) throw InputError("bad sampler options");
}

double TraceSampler::draw(double lo, double hi, std::mt19937_64& rng) const {
  if (hi == kInfinity) hi = lo + options_.max_delay;
  if (!(lo < hi)) return lo;
  double v;
  if (options_.distribution == DelayDistribution::kUniform) {
    v = std::uniform_real_distribution<double>(lo, hi)(rng);
  } else {
    std::normal_distribution<double> normal((lo + hi) / 2, (hi - lo) / 6);
    do {
      v = normal(rng);
    } while (v < lo || v > hi);
  }
  const double q = options_.quantum;
  if (q > 0.0) {
    const double a = std::ceil(lo / q), b = std::floor(hi / q);
    if (a > b) return lo;
    v = std::clamp(std::round(v / q), a, b) * q;
  }
  return std::clamp(v, lo, hi);
}

TimedTrace TraceSampler::sample(std::mt19937_64& rng) const {
  const std::size_t n = order_.size();
  std::vector<double> lo(n), hi(n), times(n, 0.0);
  for (EventId y = 0; y < n; ++y) {
    hi[y] = closure_.upper(0, node(y));
    lo[y] = closure_.lower(0, node(y));
  }
  std::vector<std::size_t> pending(n);
  for (EventId e = 0; e < n; ++e) pending[e] = order_.predecessors(e).size();
  std::vector<EventId> ready;
  for (EventId e = 0; e < n; ++e) {
    if (pending[e] == 0) ready.push_back(e);
  }
  std::vector<std::size_t> rank(n);
  std::vector<char> fixed(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t pick = rng() % ready.size();
    const EventId x = ready[pick];
    ready[pick] = ready.back();
    ready.pop_back();

    const double v = draw(lo[x], hi[x], rng);
    times[x] = v;
    rank[x] = pos;
    fixed[x] = 1;
    for (EventId y = 0; y < n; ++y) {
      if (fixed[y]) continue;
      hi[y] = std::min(hi[y], v + closure_.upper(node(x), node(y)));
      lo[y] = std::max(lo[y], v - closure_.upper(node(y), node(x)));
    }
    for (EventId s : order_.successors(x)) {
      if (--pending[s] == 0) ready.push_back(s);
    }
  }
  return TimedTrace::from_times(times, rank);
}

TimedTrace sample_trace(const Tpo& tpo, std::uint64_t seed, const SamplerOptions& options) {
  std::mt19937_64 rng(seed);
  return TraceSampler(tpo, options).sample(rng);
}

Benchmark generate_benchmark(const BenchmarkOptions& options) {
  Benchmark b;
  const auto order = random_dag(options.events, options.density, options.seed);
  BoundOptions bounds = options.bounds;
  bounds.seed = options.seed + 1;
  b.truth = random_bounds(order, bounds);
  TraceSampler sampler(b.truth, options.sampler);
  std::mt19937_64 rng(options.seed + 2);
  b.traces.reserve(options.traces);
  for (std::size_t k = 0; k < options.traces; ++k) b.traces.push_back(sampler.sample(rng));
  return b;
}

}  // namespace tpo
