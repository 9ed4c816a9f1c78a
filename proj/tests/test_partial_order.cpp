#include "doctest.h"

#include <random>

#include "tpo/partial_order.hpp"

using namespace tpo;

namespace {

// Reachability by plain DFS over the edge list.
std::vector<std::vector<bool>> dfs_closure(std::size_t n, const std::vector<PartialOrder::Edge>& edges) {
  std::vector<std::vector<EventId>> adj(n);
  for (auto [u, v] : edges) adj[u].push_back(v);
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<EventId> stack(adj[s].begin(), adj[s].end());
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      if (reach[s][v]) continue;
      reach[s][v] = true;
      for (auto w : adj[v]) stack.push_back(w);
    }
  }
  return reach;
}

std::vector<PartialOrder::Edge> random_forward_edges(std::size_t n, double p, std::mt19937_64& rng) {
  // Random permutation decides the hidden topological order.
  std::vector<EventId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<EventId>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution coin(p);
  std::vector<PartialOrder::Edge> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (coin(rng)) edges.emplace_back(perm[a], perm[b]);
    }
  }
  return edges;
}

}  // namespace

TEST_CASE("closure of a chain") {
  auto po = PartialOrder::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(po.precedes(0, 3));
  CHECK_FALSE(po.precedes(3, 0));
  CHECK_FALSE(po.precedes(1, 1));
  CHECK(po.intermediate_count(0, 3) == 2);
  CHECK(po.intermediate_count(kOrigin, 3) == 3);
  CHECK(po.relation_size() == 6);
  CHECK(po.reduced_edges() == std::vector<PartialOrder::Edge>{{0, 1}, {1, 2}, {2, 3}});
}

TEST_CASE("transitive edges are dropped from the reduction") {
  auto po = PartialOrder::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(po.reduced_edges() == std::vector<PartialOrder::Edge>{{0, 1}, {1, 2}});
  CHECK(po.successors(0) == std::vector<EventId>{1});
}

TEST_CASE("cycles and bad edges are rejected") {
  CHECK_THROWS_AS(PartialOrder::from_edges(2, {{0, 1}, {1, 0}}), InputError);
  CHECK_THROWS_AS(PartialOrder::from_edges(2, {{0, 0}}), InputError);
  CHECK_THROWS_AS(PartialOrder::from_edges(2, {{0, 5}}), InputError);
}

TEST_CASE("origin precedes everything") {
  PartialOrder po(3);
  for (EventId e = 0; e < 3; ++e) CHECK(po.precedes(kOrigin, e));
  CHECK_FALSE(po.comparable(0, 1));
}

TEST_CASE("predecessor sets must be transitive") {
  std::vector<Bitset> before(3, Bitset(3));
  before[1].set(0);
  before[2].set(1);
  CHECK_THROWS_AS(PartialOrder::from_predecessor_sets(before), InputError);
  before[2].set(0);
  auto po = PartialOrder::from_predecessor_sets(before);
  CHECK(po.precedes(0, 2));
}

TEST_CASE("maximal elements") {
  auto po = PartialOrder::from_edges(4, {{0, 1}, {0, 2}});
  CHECK(po.maximal({0, 1, 2}) == std::vector<EventId>{1, 2});
  CHECK(po.maximal({0, 3}) == std::vector<EventId>{0, 3});
}

TEST_CASE("reachability agrees with DFS closure on random DAGs") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 1 + rng() % 12;
    const double p = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
    const auto edges = random_forward_edges(n, p, rng);
    const auto po = PartialOrder::from_edges(n, edges);
    const auto reach = dfs_closure(n, edges);
    for (EventId i = 0; i < n; ++i) {
      for (EventId j = 0; j < n; ++j) REQUIRE(po.precedes(i, j) == reach[i][j]);
    }
    // The reduction spans the same relation and is minimal.
    const auto& red = po.reduced_edges();
    const auto reach_red = dfs_closure(n, red);
    CHECK(reach_red == reach);
    for (auto [u, v] : red) {
      std::vector<PartialOrder::Edge> without;
      for (auto e : red) {
        if (e != PartialOrder::Edge{u, v}) without.push_back(e);
      }
      CHECK_FALSE(dfs_closure(n, without)[u][v]);
    }
    // Topological order respects the relation.
    const auto& topo = po.topological_order();
    std::vector<std::size_t> pos(n);
    for (std::size_t k = 0; k < n; ++k) pos[topo[k]] = k;
    for (auto [u, v] : edges) CHECK(pos[u] < pos[v]);
  }
}
