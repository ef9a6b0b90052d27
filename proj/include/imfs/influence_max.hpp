#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "imfs/graph.hpp"
#include "imfs/oracle.hpp"

namespace imfs {

struct SpreadEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t num_simulations = 0;
};

// Monte-Carlo mean of |Φ(S)| over `num_sims` diffusions, simulation i using
// stream_rng(rng_seed, i).
SpreadEstimate estimate_sigma(const Graph& graph, const NodeSet& seeds, std::size_t num_sims,
                              std::uint64_t rng_seed, int threads = 0);

struct SeedSet {
  NodeSet nodes;
  int budget_k = 0;
  friend bool operator==(const SeedSet&, const SeedSet&) = default;
};

// A fixed pool of sampled live-edge graphs. IC keeps each edge
// independently with probability p_uv; LT keeps at most one incoming edge per
// node, (u, v) with probability w_uv. World i uses stream_rng(rng_seed, i).
class LiveEdgeWorlds {
 public:
  LiveEdgeWorlds(const Graph& graph, std::size_t count, std::uint64_t rng_seed,
                 int threads = 0);

  std::size_t size() const { return count_; }
  int n() const { return n_; }
  std::span<const NodeId> out(std::size_t world, NodeId u) const;
  LiveEdgeGraph world(std::size_t index) const;

  // Mean number of nodes reachable from `seeds` over the pool.
  double spread(const NodeSet& seeds) const;

 private:
  int n_ = 0;
  std::size_t count_ = 0;
  // World w's out-lists: targets_[w] indexed by offsets_[w * (n + 1) + u].
  std::vector<std::uint32_t> offsets_;
  std::vector<std::vector<NodeId>> targets_;
};

struct GreedyResult {
  SeedSet seeds;
  std::vector<double> marginal_gains;  // in selection order
  double estimated_spread = 0.0;
  std::size_t gain_evaluations = 0;
};

// Lazy (CELF) greedy over a shared pool of `num_sims` live-edge worlds.
// Gains are exact on the pool, so lazy evaluation picks the same set as
// plain greedy; ties go to the smallest node index. Selects min(k, n) nodes.
// Throws std::invalid_argument unless 1 <= k <= n.
GreedyResult greedy_im(const Graph& graph, int k, std::size_t num_sims,
                       std::uint64_t rng_seed, int threads = 0);

constexpr std::size_t kDefaultNumSims = 10000;

// The black-box influence-maximization routine the IMS pipelines call.
using ImAlgorithm = std::function<SeedSet(const Graph& graph, int k)>;

ImAlgorithm make_greedy_algorithm(std::size_t num_sims = kDefaultNumSims,
                                  std::uint64_t rng_seed = 0, int threads = 0);

}  // namespace imfs
