#include "tpo/partial_order.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>

namespace tpo {

PartialOrder::PartialOrder(std::size_t n) : n_(n), descendants_(n, Bitset(n)) { build_from_closure(); }

PartialOrder PartialOrder::from_edges(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<EventId>> succ(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& [from, to] : edges) {
    if (from >= n || to >= n) {
      throw InputError("order edge (" + std::to_string(from) + ", " + std::to_string(to) + ") out of range");
    }
    if (from == to) throw InputError("order edge is a self loop at event " + std::to_string(from));
    succ[from].push_back(to);
    ++indegree[to];
  }

  std::vector<EventId> topo;
  topo.reserve(n);
  std::vector<EventId> ready;
  for (EventId e = 0; e < n; ++e) {
    if (indegree[e] == 0) ready.push_back(e);
  }
  while (!ready.empty()) {
    EventId u = ready.back();
    ready.pop_back();
    topo.push_back(u);
    for (EventId v : succ[u]) {
      if (--indegree[v] == 0) ready.push_back(v);
    }
  }
  if (topo.size() != n) throw InputError("order edges contain a cycle");

  PartialOrder po;
  po.n_ = n;
  po.descendants_.assign(n, Bitset(n));
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    Bitset& d = po.descendants_[*it];
    for (EventId v : succ[*it]) {
      d.set(v);
      d |= po.descendants_[v];
    }
  }
  po.build_from_closure();
  return po;
}

PartialOrder PartialOrder::from_predecessor_sets(std::vector<Bitset> before) {
  const std::size_t n = before.size();
  for (EventId j = 0; j < n; ++j) {
    if (before[j].size() != n) throw InputError("predecessor set has wrong width");
    if (before[j].test(j)) throw InputError("relation is not irreflexive at event " + std::to_string(j));
    for (auto i = before[j].find_first(); i != Bitset::npos; i = before[j].find_next(i)) {
      if (!before[i].is_subset_of(before[j])) {
        throw InputError("relation is not transitive through event " + std::to_string(i));
      }
    }
  }
  PartialOrder po;
  po.n_ = n;
  po.descendants_.assign(n, Bitset(n));
  for (EventId j = 0; j < n; ++j) {
    for (auto i = before[j].find_first(); i != Bitset::npos; i = before[j].find_next(i)) {
      po.descendants_[i].set(j);
    }
  }
  po.build_from_closure();
  return po;
}

void PartialOrder::build_from_closure() {
  ancestors_.assign(n_, Bitset(n_));
  for (EventId i = 0; i < n_; ++i) {
    const Bitset& d = descendants_[i];
    for (auto j = d.find_first(); j != Bitset::npos; j = d.find_next(j)) ancestors_[j].set(i);
  }

  succ_.assign(n_, {});
  pred_.assign(n_, {});
  reduced_.clear();
  for (EventId u = 0; u < n_; ++u) {
    const Bitset& d = descendants_[u];
    Bitset covered(n_);
    for (auto w = d.find_first(); w != Bitset::npos; w = d.find_next(w)) covered |= descendants_[w];
    Bitset cover = d - covered;
    for (auto v = cover.find_first(); v != Bitset::npos; v = cover.find_next(v)) {
      succ_[u].push_back(static_cast<EventId>(v));
      pred_[v].push_back(u);
      reduced_.emplace_back(u, static_cast<EventId>(v));
    }
  }

  topo_.clear();
  topo_.reserve(n_);
  std::vector<std::size_t> indegree(n_);
  std::priority_queue<EventId, std::vector<EventId>, std::greater<>> ready;
  for (EventId e = 0; e < n_; ++e) {
    indegree[e] = pred_[e].size();
    if (indegree[e] == 0) ready.push(e);
  }
  while (!ready.empty()) {
    EventId u = ready.top();
    ready.pop();
    topo_.push_back(u);
    for (EventId v : succ_[u]) {
      if (--indegree[v] == 0) ready.push(v);
    }
  }
}

bool PartialOrder::precedes(EventId i, EventId j) const {
  if (j == kOrigin) return false;
  if (i == kOrigin) return true;
  return descendants_[i].test(j);
}

std::size_t PartialOrder::intermediate_count(EventId i, EventId j) const {
  if (i == kOrigin) return ancestors_[j].count();
  return (descendants_[i] & ancestors_[j]).count();
}

std::vector<EventId> PartialOrder::maximal(const std::vector<EventId>& events) const {
  std::vector<EventId> sorted = events;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<EventId> result;
  for (EventId e : sorted) {
    bool dominated = std::any_of(sorted.begin(), sorted.end(), [&](EventId f) { return precedes(e, f); });
    if (!dominated) result.push_back(e);
  }
  return result;
}

std::size_t PartialOrder::relation_size() const {
  std::size_t total = 0;
  for (const auto& d : descendants_) total += d.count();
  return total;
}

}  // namespace tpo
