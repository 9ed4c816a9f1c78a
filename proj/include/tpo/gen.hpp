#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "tpo/core.hpp"
#include "tpo/zone.hpp"

namespace tpo {

/// Random DAG over n events: each pair i < j gets an edge with probability
/// `density`, so event ids are already topologically sorted. Throws
/// InputError if n == 0 or density is outside [0, 1].
PartialOrder random_dag(std::size_t n, double density, std::uint64_t seed);

struct BoundOptions {
  /// Number of clocks m. Clock 0 is never reset; the others are reset along
  /// random paths of the DAG.
  std::size_t clock_budget = 3;
  /// Integer constants are drawn from [0, max_constant].
  int max_constant = 20;
  /// Chance that a path event gets a guard on the path's clock.
  double guard_probability = 0.7;
  std::uint64_t seed = 1337;
};

/// Random guards and resets on `order`, kept satisfiable by tightening a
/// DBM over event times as each bound is added: every new lower bound lies
/// inside the current projection and every upper bound is at least the
/// lower one. Each clock is used along a single path, so the result is
/// race-free. Throws InputError if clock_budget == 0.
Tpo random_bounds(const PartialOrder& order, const BoundOptions& options = {});

enum class DelayDistribution : std::uint8_t { kUniform, kTruncatedNormal };

struct SamplerOptions {
  DelayDistribution distribution = DelayDistribution::kUniform;
  /// Width used when an event has no upper bound.
  double max_delay = 20.0;
  /// Timestamps are multiples of this (0 = unquantized). A power of two
  /// keeps all bound arithmetic exact for integer or dyadic constants.
  double quantum = 1.0 / 1024.0;
};

// Draws compatible traces of a TPO. Events are fixed one at a time along a
// random linearization, each inside the window left by the events fixed so
// far; the window is read off the closure of the TPO's constraints, which
// makes every window non-empty.
class TraceSampler {
 public:
  /// Throws PreconditionError if the TPO has a clock race or no compatible
  /// trace.
  explicit TraceSampler(const Tpo& tpo, SamplerOptions options = {});

  TimedTrace sample(std::mt19937_64& rng) const;

  const Zone& closure() const { return closure_; }

 private:
  double draw(double lo, double hi, std::mt19937_64& rng) const;

  PartialOrder order_;
  SamplerOptions options_;
  Zone closure_;
};

/// One trace from a fresh generator seeded with `seed`.
TimedTrace sample_trace(const Tpo& tpo, std::uint64_t seed, const SamplerOptions& options = {});

struct Benchmark {
  Tpo truth;
  std::vector<TimedTrace> traces;
};

struct BenchmarkOptions {
  std::size_t events = 10;
  double density = 0.2;
  BoundOptions bounds;
  std::size_t traces = 1000;
  SamplerOptions sampler;
  std::uint64_t seed = 1337;
};

/// DAG from seed, bounds from seed + 1, traces from seed + 2.
Benchmark generate_benchmark(const BenchmarkOptions& options);

}  // namespace tpo
