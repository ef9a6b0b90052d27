#include <doctest.h>

#include <cmath>

#include "imfs/cascade.hpp"
#include "imfs/diffusion.hpp"
#include "imfs/errors.hpp"
#include "imfs/graph_io.hpp"
#include "imfs/oracle.hpp"
#include "support.hpp"

using namespace imfs;

namespace {

Graph single_edge(Model model, double p) {
  const WeightedEdge e[] = {{0, 1, p}};
  return Graph::from_weighted_edges(2, model, e);
}

void check_invariants(const Cascade& c, int n) {
  CHECK(c.stable_at() <= std::max(n - 1, 0));
  NodeSet prev = c.active_at(0);
  for (int step = 1; step < n; ++step) {
    const NodeSet cur = c.active_at(step);
    CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    if (step > c.stable_at()) CHECK(cur == prev);
    prev = cur;
  }
}

}  // namespace

TEST_CASE("cascade construction") {
  const Cascade c(4, {{2}, {0, 3}, {}, {}});
  CHECK(c.stable_at() == 1);
  CHECK(c.seeds() == NodeSet{2});
  CHECK(c.active_at(1) == NodeSet{0, 2, 3});
  CHECK(c.active_at(3) == NodeSet{0, 2, 3});
  CHECK(c.new_at(3).empty());
  CHECK(c.final_size() == 3);
  CHECK_THROWS(Cascade(3, {{0}, {0}}));
  CHECK_THROWS(Cascade(3, {{0}, {}, {1}}));
  CHECK_THROWS(Cascade(3, {{5}}));
  CHECK(Cascade(3, {}).final_size() == 0);
}

TEST_CASE("cascade line round trip") {
  const Cascade c(5, {{1, 4}, {2}, {0}});
  const std::string line = cascade_line(c);
  CHECK(line == "{\"steps\": [[1, 4], [2], [0]], \"stable_at\": 2}");
  CHECK(parse_cascade_line(line, 5) == c);
  CHECK(parse_cascade_line("{\"steps\": [[]], \"stable_at\": 0}", 5).final_size() == 0);
  CHECK_THROWS(parse_cascade_line("{\"steps\": [[1], [1]], \"stable_at\": 1}", 5));
  CHECK_THROWS(parse_cascade_line("{\"steps\": [[1], [2]], \"stable_at\": 0}", 5));
}

TEST_CASE("sample_seed_set") {
  Rng rng = stream_rng(1, 0);
  CHECK(sample_seed_set(SeedDistribution::uniform(6, 0.0), rng).empty());
  CHECK(sample_seed_set(SeedDistribution::uniform(6, 1.0), rng) == NodeSet{0, 1, 2, 3, 4, 5});
  const int draws = 100000;
  std::vector<int> hits(10, 0);
  const SeedDistribution half = SeedDistribution::uniform(10, 0.5);
  for (int i = 0; i < draws; ++i) {
    for (NodeId v : sample_seed_set(half, rng)) ++hits[v];
  }
  for (int h : hits) CHECK(std::abs(h / double(draws) - 0.5) <= 0.01);
}

TEST_CASE("simulate_ic") {
  Rng rng = stream_rng(2, 0);
  const Graph path = single_edge(Model::IC, 1.0);
  CHECK(simulate_ic(path, {}, rng).final_size() == 0);
  const Cascade c = simulate_ic(path, {0}, rng);
  CHECK(c.active_at(1) == NodeSet{0, 1});
  CHECK(c.stable_at() == 1);

  const Graph half = single_edge(Model::IC, 0.5);
  int hits = 0;
  const int runs = 100000;
  for (int i = 0; i < runs; ++i) hits += simulate_ic(half, {0}, rng).final_size() == 2;
  CHECK(std::abs(hits / double(runs) - 0.5) <= 0.01);

  CHECK_THROWS_AS(simulate_ic(single_edge(Model::LT, 0.5), {0}, rng), ModelMismatch);
}

TEST_CASE("simulate_ic gives each newly active node one attempt") {
  // 0 -> 1 -> 2 and 0 -> 2, all p = 1: node 2 joins at step 1, not 2.
  const WeightedEdge e[] = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  Rng rng = stream_rng(3, 0);
  const Cascade c = simulate_ic(Graph::from_weighted_edges(3, Model::IC, e), {0}, rng);
  CHECK(c.active_at(1) == NodeSet{0, 1, 2});
  CHECK(c.stable_at() == 1);
}

TEST_CASE("simulate_lt") {
  Rng rng = stream_rng(4, 0);
  const Graph full = single_edge(Model::LT, 1.0);
  CHECK(simulate_lt(full, {}, rng).final_size() == 0);
  for (int i = 0; i < 1000; ++i) CHECK(simulate_lt(full, {0}, rng).active_at(1) == NodeSet{0, 1});

  const Graph g = single_edge(Model::LT, 0.4);
  int hits = 0;
  const int runs = 100000;
  for (int i = 0; i < runs; ++i) hits += simulate_lt(g, {0}, rng).final_size() == 2;
  CHECK(std::abs(hits / double(runs) - 0.4) <= 0.01);

  CHECK_THROWS_AS(simulate_lt(single_edge(Model::IC, 0.5), {0}, rng), ModelMismatch);
}

TEST_CASE("simulate_lt accumulates weight across steps") {
  // 0 -> 2 (0.5) at step 1 and 1 -> 2 (0.5) after 0 -> 1 (1.0) at step 2:
  // node 2 always ends active, possibly at step 2.
  const WeightedEdge e[] = {{0, 1, 1.0}, {0, 2, 0.5}, {1, 2, 0.5}};
  const Graph g = Graph::from_weighted_edges(3, Model::LT, e);
  Rng rng = stream_rng(5, 0);
  int late = 0;
  for (int i = 0; i < 2000; ++i) {
    const Cascade c = simulate_lt(g, {0}, rng);
    CHECK(c.final_size() == 3);
    late += c.active_at(1).size() == 2;
  }
  CHECK(late > 800);
  CHECK(late < 1200);
}

TEST_CASE("generate_dataset") {
  const Graph g = random_graph(6, 0.4, {}, Model::IC, 5);
  const SeedDistribution d = SeedDistribution::uniform(6, 0.2);
  const CascadeDataset data = generate_dataset(g, d, 3, 11);
  CHECK(data.t() == 3);
  CHECK(data.header.graph_digest == graph_digest(g));
  CHECK(data.header.seed_dist_digest == seed_distribution_digest(d));
  CHECK(data.header.rng_seed == 11);
  CHECK_THROWS(generate_dataset(g, d, 0, 11));
  CHECK_THROWS(generate_dataset(g, SeedDistribution::uniform(5, 0.2), 3, 11));

  const CascadeDataset big = generate_dataset(g, d, 500, 11, 1);
  CHECK(serialize_dataset(big) == serialize_dataset(generate_dataset(g, d, 500, 11, 1)));
  CHECK(serialize_dataset(big) == serialize_dataset(generate_dataset(g, d, 500, 11, 4)));
  CHECK(big.cascades[123] == generate_cascade(g, d, 11, 123));
  for (const auto& c : big.cascades) check_invariants(c, 6);
}

TEST_CASE("generate_dataset seeds each cascade afresh") {
  const CascadeDataset data =
      generate_dataset(single_edge(Model::IC, 0.5), SeedDistribution({0.5, 0.0}), 10000, 8);
  int seeded = 0;
  for (const auto& c : data.cascades) seeded += c.seeds() == NodeSet{0};
  CHECK(std::abs(seeded / 10000.0 - 0.5) <= 0.02);
}

TEST_CASE("dataset file round trip and streaming") {
  testing::TempDir dir;
  const Graph g = random_graph(5, 0.5, {}, Model::LT, 2);
  const CascadeDataset data = generate_dataset(g, SeedDistribution::uniform(5, 0.3), 50, 3);
  save_dataset(data, dir.path() / "d.jsonl");
  const CascadeDataset back = load_dataset(dir.path() / "d.jsonl");
  CHECK(back.header == data.header);
  CHECK(back.cascades == data.cascades);

  DatasetReader reader(dir.path() / "d.jsonl");
  Cascade c;
  std::size_t i = 0;
  while (reader.next(c)) CHECK(c == data.cascades[i++]);
  CHECK(i == 50);

  // Header count disagreeing with the body is an error.
  std::string text = serialize_dataset(data);
  text.erase(text.rfind('{'));
  write_file(dir.path() / "short.jsonl", text);
  CHECK_THROWS(load_dataset(dir.path() / "short.jsonl"));
}

TEST_CASE("IC one-step marginals match the exact ap") {
  Rng rng = stream_rng(100, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = testing::random_instance(rng, 5, 0.5, 0.1, 0.9, Model::IC);
    const SeedDistribution d = testing::random_seeds(rng, 5, 0.1, 0.6);
    const std::size_t t = 40000;
    const CascadeDataset data = generate_dataset(g, d, t, 1000 + trial);
    for (int v = 0; v < 5; ++v) {
      std::size_t hits = 0;
      for (const auto& c : data.cascades) {
        const NodeSet s1 = c.active_at(1);
        hits += std::binary_search(s1.begin(), s1.end(), v);
      }
      const double ap = exact_ap(g, d, v);
      const double se = std::sqrt(ap * (1 - ap) / t);
      CHECK(std::abs(hits / double(t) - ap) <= 3 * se + 1e-12);
    }
  }
}

TEST_CASE("LT final spread matches live-edge enumeration") {
  Rng rng = stream_rng(200, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = testing::random_instance(rng, 6, 0.4, 0.2, 0.8, Model::LT);
    const NodeSet seeds = {static_cast<NodeId>(trial % 6)};
    const double exact = exact_sigma(g, seeds);
    const int runs = 40000;
    double sum = 0.0, sq = 0.0;
    Rng sim = stream_rng(300, trial);
    for (int i = 0; i < runs; ++i) {
      const double s = static_cast<double>(simulate_lt(g, seeds, sim).final_size());
      sum += s;
      sq += s * s;
    }
    const double mean = sum / runs;
    const double se = std::sqrt((sq / runs - mean * mean) / runs);
    CHECK(std::abs(mean - exact) <= 3 * se + 1e-12);
  }
}
