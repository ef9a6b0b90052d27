#include "imfs/diffusion.hpp"

#include <algorithm>
#include <stdexcept>

#include "imfs/errors.hpp"
#include "imfs/graph_io.hpp"
#include "imfs/parallel.hpp"

namespace imfs {

namespace {

void check_seeds(const Graph& graph, const NodeSet& seeds) {
  for (NodeId s : seeds) {
    if (s < 0 || s >= graph.n()) {
      throw std::invalid_argument("seed " + std::to_string(s) + " out of range");
    }
  }
}

// Shared bookkeeping: the flat cascade being built plus the active flags.
struct CascadeBuilder {
  explicit CascadeBuilder(int n) : active(static_cast<std::size_t>(n), 0) {}

  void start(const NodeSet& seeds) {
    for (NodeId s : seeds) {
      if (!active[s]) {
        active[s] = 1;
        nodes.push_back(s);
      }
    }
    std::sort(nodes.begin(), nodes.end());
    ends.push_back(static_cast<std::uint32_t>(nodes.size()));
  }

  // Closes the current step; false when nothing new was activated.
  bool close_step(std::size_t step_begin) {
    if (nodes.size() == step_begin) return false;
    std::sort(nodes.begin() + static_cast<std::ptrdiff_t>(step_begin), nodes.end());
    ends.push_back(static_cast<std::uint32_t>(nodes.size()));
    return true;
  }

  std::vector<char> active;
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> ends;
};

}  // namespace

NodeSet sample_seed_set(const SeedDistribution& dist, Rng& rng) {
  NodeSet seeds;
  for (NodeId u = 0; u < dist.n(); ++u) {
    if (bernoulli(rng, dist.q[u])) seeds.push_back(u);
  }
  return seeds;
}

Cascade simulate_ic(const Graph& graph, const NodeSet& seeds, Rng& rng) {
  if (graph.model() != Model::IC) throw ModelMismatch("simulate_ic needs an IC graph");
  check_seeds(graph, seeds);
  CascadeBuilder b(graph.n());
  b.start(seeds);
  std::size_t frontier_begin = 0;
  while (true) {
    const std::size_t frontier_end = b.nodes.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      const NodeId u = b.nodes[i];
      for (NodeId v : graph.out_neighbors(u)) {
        if (b.active[v]) continue;
        if (bernoulli(rng, graph.param(u, v))) {
          b.active[v] = 1;
          b.nodes.push_back(v);
        }
      }
    }
    if (!b.close_step(frontier_end)) break;
    frontier_begin = frontier_end;
  }
  return Cascade::from_flat(graph.n(), std::move(b.nodes), std::move(b.ends));
}

Cascade simulate_lt(const Graph& graph, const NodeSet& seeds, Rng& rng) {
  if (graph.model() != Model::LT) throw ModelMismatch("simulate_lt needs an LT graph");
  check_seeds(graph, seeds);
  const int n = graph.n();
  std::vector<double> threshold(static_cast<std::size_t>(n));
  for (double& r : threshold) r = 1.0 - uniform01(rng);  // (0, 1]
  std::vector<double> weight_in(static_cast<std::size_t>(n), 0.0);
  CascadeBuilder b(n);
  b.start(seeds);
  std::size_t frontier_begin = 0;
  std::vector<NodeId> touched;
  while (true) {
    const std::size_t frontier_end = b.nodes.size();
    touched.clear();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      const NodeId u = b.nodes[i];
      for (NodeId v : graph.out_neighbors(u)) {
        if (b.active[v]) continue;
        weight_in[v] += graph.param(u, v);
        touched.push_back(v);
      }
    }
    // Decisions use S_{τ-1} only: nodes joining now do not count until τ+1.
    for (NodeId v : touched) {
      if (!b.active[v] && weight_in[v] >= threshold[v]) {
        b.active[v] = 1;
        b.nodes.push_back(v);
      }
    }
    if (!b.close_step(frontier_end)) break;
    frontier_begin = frontier_end;
  }
  return Cascade::from_flat(n, std::move(b.nodes), std::move(b.ends));
}

Cascade simulate(const Graph& graph, const NodeSet& seeds, Rng& rng) {
  return graph.model() == Model::IC ? simulate_ic(graph, seeds, rng)
                                    : simulate_lt(graph, seeds, rng);
}

Cascade generate_cascade(const Graph& graph, const SeedDistribution& dist,
                         std::uint64_t rng_seed, std::uint64_t index) {
  Rng rng = stream_rng(rng_seed, index);
  const NodeSet seeds = sample_seed_set(dist, rng);
  return simulate(graph, seeds, rng);
}

CascadeDataset generate_dataset(const Graph& graph, const SeedDistribution& dist,
                                std::size_t t, std::uint64_t rng_seed, int threads) {
  if (t == 0) throw std::invalid_argument("a dataset needs at least one cascade");
  if (dist.n() != graph.n()) {
    throw std::invalid_argument("seed distribution size differs from node count");
  }
  CascadeDataset dataset;
  dataset.header.graph_digest = graph_digest(graph);
  dataset.header.seed_dist_digest = seed_distribution_digest(dist);
  dataset.header.model = graph.model();
  dataset.header.rng_seed = rng_seed;
  dataset.header.t = t;
  dataset.header.n = graph.n();
  dataset.cascades.resize(t);
  parallel_chunks(t, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      dataset.cascades[i] = generate_cascade(graph, dist, rng_seed, i);
    }
  });
  return dataset;
}

}  // namespace imfs
