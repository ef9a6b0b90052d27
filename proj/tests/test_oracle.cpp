#include <doctest.h>

#include <bit>
#include <cmath>

#include "imfs/errors.hpp"
#include "imfs/oracle.hpp"
#include "support.hpp"

using namespace imfs;

namespace {

Graph edge_graph(Model model, double p) {
  const WeightedEdge e[] = {{0, 1, p}};
  return Graph::from_weighted_edges(2, model, e);
}

Graph star_out(int leaves, double p) {
  std::vector<WeightedEdge> e;
  for (int i = 1; i <= leaves; ++i) e.push_back({0, i, p});
  return Graph::from_weighted_edges(leaves + 1, Model::IC, e);
}

}  // namespace

TEST_CASE("exact_ap examples") {
  const Graph isolated(3, Model::IC);
  CHECK(exact_ap(isolated, SeedDistribution({0.1, 0.3, 0.5}), 1) == doctest::Approx(0.3));

  const Graph ic = edge_graph(Model::IC, 0.5);
  const SeedDistribution d({0.5, 0.0});
  CHECK(exact_ap(ic, d, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(exact_ap_given(ic, d, 1, 0, false) == 0.0);
  CHECK(exact_ap_given(ic, d, 1, 0, true) == doctest::Approx(0.5));

  const Graph lt = edge_graph(Model::LT, 0.4);
  const SeedDistribution dl({0.5, 0.2});
  CHECK(std::abs(exact_ap(lt, dl, 1) - 0.36) < 1e-15);
  CHECK(std::abs(exact_ap_given(lt, dl, 1, 0, false) - 0.2) < 1e-15);

  CHECK_THROWS_AS(exact_ap_given(ic, d, 1, 1, false), std::invalid_argument);
}

TEST_CASE("exact_ap agrees with seed-set enumeration") {
  Rng rng = stream_rng(7, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const Model model = trial % 2 ? Model::LT : Model::IC;
    const int n = 2 + trial % 6;
    const Graph g = testing::random_instance(rng, n, 0.5, 0.05, 1.0, model);
    const SeedDistribution d = testing::random_seeds(rng, n, 0.0, 1.0);
    const OneStepMarginals m = exact_marginals(g, d);
    for (int v = 0; v < n; ++v) {
      CHECK(std::abs(exact_ap(g, d, v) - testing::naive_ap(g, d, v)) < 1e-12);
      CHECK(std::abs(m.ap[v] - testing::naive_ap(g, d, v)) < 1e-12);
      for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        for (bool seeded : {false, true}) {
          CHECK(std::abs(exact_ap_given(g, d, v, u, seeded) -
                         testing::naive_ap(g, d, v, u, seeded)) < 1e-12);
        }
        if (d.q[u] < 1.0) {
          CHECK(m.defined(u, v));
          CHECK(std::abs(m.ap_given_not(u, v) - testing::naive_ap(g, d, v, u, false)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("exact_sigma examples") {
  const Graph g = edge_graph(Model::IC, 0.5);
  CHECK(exact_sigma(g, {0, 1}) == 2.0);
  CHECK(exact_sigma(g, {0}) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(exact_sigma(g, {}) == 0.0);

  const WeightedEdge path[] = {{0, 1, 1.0}, {1, 2, 1.0}};
  CHECK(exact_sigma(Graph::from_weighted_edges(3, Model::LT, path), {0}) == 3.0);

  Rng rng = stream_rng(8, 0);
  const Graph r = testing::random_instance(rng, 7, 0.5, 0.1, 0.9, Model::IC, 16);
  CHECK(exact_sigma(r, {0, 1, 2, 3, 4, 5, 6}) == 7.0);
}

TEST_CASE("exact_sigma agrees with naive world enumeration") {
  Rng rng = stream_rng(9, 0);
  for (int trial = 0; trial < 80; ++trial) {
    const Model model = trial % 2 ? Model::LT : Model::IC;
    const int n = 3 + trial % 5;
    const Graph g = testing::random_instance(rng, n, 0.4, 0.1, 1.0, model, 12);
    NodeSet seeds;
    for (int v = 0; v < n; ++v) {
      if (uniform01(rng) < 0.3) seeds.push_back(v);
    }
    const double exact = exact_sigma(g, seeds);
    CHECK(std::abs(exact - testing::naive_sigma(g, seeds)) < 1e-9);
    CHECK(exact >= static_cast<double>(seeds.size()) - 1e-12);
    CHECK(exact <= n + 1e-12);
  }
}

TEST_CASE("live-edge worlds") {
  Rng rng = stream_rng(10, 0);
  const Graph g = testing::random_instance(rng, 6, 0.6, 0.1, 0.9, Model::LT);
  double mass = 0.0;
  for_each_live_edge_world(g, [&](double w, std::span<const std::uint64_t> reach) {
    mass += w;
    for (int u = 0; u < 6; ++u) CHECK((reach[u] >> u & 1) == 1);
  });
  CHECK(std::abs(mass - 1.0) < 1e-12);

  CHECK(is_lt_live_edge_graph({{{0, 2}, {1, 3}}}, 4));
  CHECK_FALSE(is_lt_live_edge_graph({{{0, 2}, {1, 2}}}, 4));
}

TEST_CASE("p = 1 edges are not enumerated") {
  // 30 certain edges plus 2 random ones stays far below the IC world cap.
  std::vector<WeightedEdge> e;
  for (int i = 0; i + 1 < 31; ++i) e.push_back({i, i + 1, 1.0});
  e.push_back({0, 31, 0.5});
  e.push_back({31, 32, 0.5});
  const Graph g = Graph::from_weighted_edges(33, Model::IC, e);
  CHECK(exact_sigma(g, {0}) == doctest::Approx(31 + 0.5 + 0.25));
}

TEST_CASE("instance caps raise InstanceTooLarge") {
  const Graph dense = random_graph(10, 1.0, {0.1, 0.9}, Model::IC, 1);
  CHECK_THROWS_AS(exact_sigma(dense, {0}), InstanceTooLarge);
  OracleLimits tight;
  tight.max_lt_worlds = 10;
  const Graph lt = random_graph(6, 1.0, {0.1, 0.9}, Model::LT, 1);
  CHECK_THROWS_AS(exact_sigma(lt, {0}, tight), InstanceTooLarge);
  OracleLimits few_sets;
  few_sets.max_seed_sets = 5;
  CHECK_THROWS_AS(exact_optimal_seeds(star_out(5, 1.0), 2, few_sets), InstanceTooLarge);
  CHECK_THROWS_AS(exact_sigma(Graph(65, Model::IC), {0}), InstanceTooLarge);
}

TEST_CASE("exact_optimal_seeds") {
  const Graph star = star_out(4, 1.0);
  const OptimalSeeds one = exact_optimal_seeds(star, 1);
  CHECK(one.seeds == NodeSet{0});
  CHECK(one.spread == 5.0);
  const OptimalSeeds all = exact_optimal_seeds(star, 5);
  CHECK(all.seeds == NodeSet{0, 1, 2, 3, 4});
  CHECK(all.spread == 5.0);
  // Empty graph: every pair ties, the lexicographically first wins.
  CHECK(exact_optimal_seeds(Graph(4, Model::IC), 2).seeds == NodeSet{0, 1});

  Rng rng = stream_rng(11, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = testing::random_instance(rng, 8, 0.25, 0.1, 0.9, Model::IC, 12);
    const OptimalSeeds best = exact_optimal_seeds(g, 2);
    double top = -1.0;
    NodeSet arg;
    for (int a = 0; a < 8; ++a) {
      for (int b = a + 1; b < 8; ++b) {
        const double s = testing::naive_sigma(g, {a, b});
        if (s > top + 1e-9) {
          top = s;
          arg = {a, b};
        }
      }
    }
    CHECK(std::abs(best.spread - top) < 1e-9);
    CHECK(best.seeds == arg);
  }
}

TEST_CASE("forced in-edges") {
  Rng rng = stream_rng(12, 0);
  const Graph g = testing::random_instance(rng, 6, 0.4, 0.1, 0.9, Model::IC, 14);
  CHECK(exact_sigma_with_forced_in_edges(g, {}, {0, 3}) == doctest::Approx(exact_sigma(g, {0, 3})));

  // R = V: every edge is live, so the spread is the reachable set size.
  const WeightedEdge e[] = {{0, 1, 0.2}, {1, 2, 0.3}, {0, 3, 0.1}, {4, 0, 0.5}};
  const Graph chain = Graph::from_weighted_edges(5, Model::IC, e);
  CHECK(exact_sigma_with_forced_in_edges(chain, {0, 1, 2, 3, 4}, {0}) == doctest::Approx(4.0));
  CHECK(force_in_edges(chain, {2}).param(1, 2) == 1.0);
  CHECK(force_in_edges(chain, {2}).param(0, 2) == 0.0);
  CHECK_THROWS_AS(force_in_edges(chain.with_model(Model::LT), {2}), ModelMismatch);

  for (int trial = 0; trial < 40; ++trial) {
    const Graph r = testing::random_instance(rng, 6, 0.4, 0.1, 0.9, Model::IC, 14);
    const NodeSet forced = from_mask(rng() & 63);
    const NodeSet seeds = from_mask(rng() & 63);
    NodeSet both = seeds;
    both.insert(both.end(), forced.begin(), forced.end());
    std::sort(both.begin(), both.end());
    both.erase(std::unique(both.begin(), both.end()), both.end());
    CHECK(exact_sigma(r, both) >= exact_sigma_with_forced_in_edges(r, forced, seeds) - 1e-9);
  }
}

TEST_CASE("all-subset table is monotone and submodular") {
  Rng rng = stream_rng(13, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const Model model = trial % 2 ? Model::LT : Model::IC;
    const Graph g = testing::random_instance(rng, 6, 0.4, 0.1, 0.9, model, 14);
    const auto sigma = exact_sigma_all_subsets(g);
    CHECK(sigma[0] == 0.0);
    for (std::uint64_t s = 0; s < 64; ++s) {
      if (trial == 0 && s % 9 == 0) CHECK(std::abs(sigma[s] - exact_sigma(g, from_mask(s))) < 1e-12);
      for (int x = 0; x < 6; ++x) {
        if (s >> x & 1) continue;
        const std::uint64_t sx = s | (std::uint64_t{1} << x);
        CHECK(sigma[sx] >= sigma[s] - 1e-9);
        for (int y = 0; y < 6; ++y) {
          if (y == x || (s >> y & 1)) continue;
          const std::uint64_t t = s | (std::uint64_t{1} << y);
          CHECK(sigma[sx] - sigma[s] >= sigma[t | (std::uint64_t{1} << x)] - sigma[t] - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("mask helpers") {
  CHECK(to_mask({0, 3, 5}) == 0b101001);
  CHECK(from_mask(0b101001) == NodeSet{0, 3, 5});
}
