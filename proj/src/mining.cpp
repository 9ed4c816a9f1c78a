#include "tpo/mining.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace tpo {

namespace {

double since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void validate_traces(const std::vector<TimedTrace>& traces, std::size_t n) {
  if (traces.empty()) throw InputError("no traces to mine");
  for (std::size_t k = 0; k < traces.size(); ++k) {
    try {
      traces[k].validate(n);
    } catch (const InputError& err) {
      throw InputError("trace " + std::to_string(k) + ": " + err.what());
    }
  }
}

// Widened [lo, hi]; lower end stays >= 0.
std::pair<double, double> inflate(double lo, double hi, double inflation) {
  if (inflation == 0.0) return {lo, hi};
  const double pad = inflation * (hi - lo);
  return {std::max(0.0, lo - pad), hi + pad};
}

}  // namespace

void MiningConfig::validate() const {
  if (!(inflation >= 0.0) || !std::isfinite(inflation)) throw InputError("inflation must be a finite value >= 0");
  if (!(tolerance > 0.0)) throw InputError("tolerance must be positive");
}

PartialOrder identify_partial_order(const std::vector<TimedTrace>& traces, std::size_t n) {
  validate_traces(traces, n);
  std::vector<Bitset> before(n, Bitset(n));
  for (auto& b : before) b.set();
  Bitset prefix(n);
  for (const auto& trace : traces) {
    prefix.reset();
    for (const auto& entry : trace.entries) {
      before[entry.event] &= prefix;
      prefix.set(entry.event);
    }
  }
  return PartialOrder::from_predecessor_sets(std::move(before));
}

DifferenceConstraintSystem extract_bounds(const std::vector<TimedTrace>& traces, const PartialOrder& order,
                                          const MiningConfig& config) {
  config.validate();
  const std::size_t n = order.size();
  validate_traces(traces, n);

  std::vector<double> abs_lo(n, kInfinity), abs_hi(n, -kInfinity);
  // Pairs i ≺ j, grouped by j for a cache-friendly inner loop.
  std::vector<std::vector<EventId>> preds(n);
  for (EventId j = 0; j < n; ++j) {
    const Bitset& anc = order.ancestors(j);
    for (auto i = anc.find_first(); i != Bitset::npos; i = anc.find_next(i)) preds[j].push_back(static_cast<EventId>(i));
  }
  std::vector<std::vector<double>> lo(n), hi(n);
  for (EventId j = 0; j < n; ++j) {
    lo[j].assign(preds[j].size(), kInfinity);
    hi[j].assign(preds[j].size(), -kInfinity);
  }

  double data_max = 0.0;
  std::vector<double> t(n);
  for (const auto& trace : traces) {
    for (const auto& entry : trace.entries) t[entry.event] = entry.time;
    for (EventId j = 0; j < n; ++j) {
      abs_lo[j] = std::min(abs_lo[j], t[j]);
      abs_hi[j] = std::max(abs_hi[j], t[j]);
      data_max = std::max(data_max, t[j]);
      const auto& pj = preds[j];
      double* l = lo[j].data();
      double* h = hi[j].data();
      for (std::size_t k = 0; k < pj.size(); ++k) {
        const double d = t[j] - t[pj[k]];
        l[k] = std::min(l[k], d);
        h[k] = std::max(h[k], d);
      }
    }
  }

  DifferenceConstraintSystem sys(n);
  for (EventId j = 0; j < n; ++j) {
    auto [a, b] = inflate(abs_lo[j], abs_hi[j], config.inflation);
    if (config.infinity_policy == InfinityPolicy::kDropUpperIfAtDataMax && abs_hi[j] == data_max) b = kInfinity;
    sys.add_interval(kOrigin, j, a, b);
  }
  for (EventId j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < preds[j].size(); ++k) {
      auto [a, b] = inflate(lo[j][k], hi[j][k], config.inflation);
      sys.add_interval(preds[j][k], j, a, b);
    }
  }
  return sys;
}

MiningReport mine(const std::vector<TimedTrace>& traces, std::size_t n, const MiningConfig& config) {
  config.validate();
  MiningReport report;
  auto start = std::chrono::steady_clock::now();
  report.order = identify_partial_order(traces, n);
  report.seconds_order = since(start);

  start = std::chrono::steady_clock::now();
  report.raw = extract_bounds(traces, report.order, config);
  report.seconds_bounds = since(start);

  start = std::chrono::steady_clock::now();
  report.elimination = eliminate_redundancy(report.raw, report.order, {config.heuristic, config.seed, config.tolerance});
  report.seconds_elimination = since(start);

  start = std::chrono::steady_clock::now();
  report.synthesis = synthesize(report.elimination.kept, report.order);
  report.seconds_synthesis = since(start);
  return report;
}

SplitResult split_log(const Alphabet& alphabet, const std::vector<LabeledEntry>& log, std::size_t k) {
  if (k == 0) throw InputError("k must be at least 1");
  const std::size_t n = alphabet.size();
  std::vector<std::vector<std::size_t>> occurrences(n);
  for (std::size_t p = 0; p < log.size(); ++p) {
    if (p > 0 && log[p].time < log[p - 1].time) {
      throw InputError("log is not sorted by time at entry " + std::to_string(p));
    }
    if (!std::isfinite(log[p].time) || log[p].time < 0.0) throw InputError("bad timestamp at entry " + std::to_string(p));
    occurrences[alphabet.id(log[p].label)].push_back(p);
  }

  SplitResult out;
  auto& c = out.counts;
  c.k = k;
  c.b.resize(n);
  c.x.resize(n);
  c.y.resize(n);
  for (EventId e = 0; e < n; ++e) {
    c.b[e] = occurrences[e].size();
    if (c.b[e] < k) {
      throw InputError("event '" + alphabet.label(e) + "' occurs " + std::to_string(c.b[e]) +
                       " times, fewer than k = " + std::to_string(k));
    }
    c.x[e] = c.b[e] / k;
    c.y[e] = c.b[e] % k;
  }

  // Expanded alphabet: one label per (event, occurrence within a trace).
  std::vector<std::vector<EventId>> expanded(n);
  for (EventId e = 0; e < n; ++e) {
    for (std::size_t r = 0; r < c.x[e]; ++r) {
      const std::string label = c.x[e] == 1 ? alphabet.label(e) : alphabet.label(e) + "#" + std::to_string(r + 1);
      if (out.alphabet.find(label)) throw InputError("relabeled event '" + label + "' clashes with an existing label");
      expanded[e].push_back(out.alphabet.intern(label));
    }
  }

  // owner[p] = trace receiving log entry p, or k for leftovers.
  std::vector<std::size_t> owner(log.size(), k);
  std::vector<EventId> relabel(log.size(), 0);
  for (EventId e = 0; e < n; ++e) {
    const auto& occ = occurrences[e];
    for (std::size_t q = 0; q < k * c.x[e]; ++q) {
      owner[occ[q]] = q / c.x[e];
      relabel[occ[q]] = expanded[e][q % c.x[e]];
    }
  }

  out.traces.resize(k);
  for (std::size_t p = 0; p < log.size(); ++p) {
    if (owner[p] == k) {
      out.leftover.push_back(log[p]);
    } else {
      out.traces[owner[p]].entries.push_back({relabel[p], log[p].time});
    }
  }
  return out;
}

}  // namespace tpo
