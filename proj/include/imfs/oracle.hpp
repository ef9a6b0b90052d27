#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "imfs/graph.hpp"
#include "imfs/one_step.hpp"

namespace imfs {

// Hard caps for brute-force enumeration. Exceeding one throws
// InstanceTooLarge.
struct OracleLimits {
  int max_nodes = 64;                  // reach sets are 64-bit masks
  int max_ic_random_edges = 22;        // IC worlds = 2^(edges with 0 < p < 1)
  double max_lt_worlds = 4e6;          // LT worlds = prod_v (|N(v)| + 1)
  double max_seed_sets = 2e6;          // C(n, k) for exact_optimal_seeds
};

// A realized live-edge graph. Under LT every node keeps at most one
// incoming edge.
struct LiveEdgeGraph {
  std::vector<Edge> edges;
};

bool is_lt_live_edge_graph(const LiveEdgeGraph& live, int n);

// Closed forms for the one-step activation probability:
//   IC: 1 - (1 - q_v) prod_{u ∈ N(v)} (1 - q_u p_uv)
//   LT: q_v + (1 - q_v) sum_{u ∈ N(v)} q_u w_uv
double exact_ap(const Graph& graph, const SeedDistribution& dist, NodeId v);

// Same with u's seed state fixed. Throws std::invalid_argument if u == v.
double exact_ap_given(const Graph& graph, const SeedDistribution& dist, NodeId v,
                      NodeId u, bool u_seeded);

/// q, ap(v) and ap(v | ū) for every pair: what cascades estimate as t → ∞.
OneStepMarginals exact_marginals(const Graph& graph, const SeedDistribution& dist);

// Calls visit(weight, reach) once per live-edge world with nonzero
// probability; reach[u] is the bitmask of nodes reachable from u.
using WorldVisitor = std::function<void(double, std::span<const std::uint64_t>)>;
void for_each_live_edge_world(const Graph& graph, const WorldVisitor& visit,
                              const OracleLimits& limits = {});

double exact_sigma(const Graph& graph, const NodeSet& seeds,
                   const OracleLimits& limits = {});

// Spreads of several seed sets from one enumeration.
std::vector<double> exact_sigma_many(const Graph& graph,
                                     std::span<const NodeSet> seed_sets,
                                     const OracleLimits& limits = {});

// sigma(S) for every subset S of V, indexed by bitmask (n <= 20).
std::vector<double> exact_sigma_all_subsets(const Graph& graph,
                                            const OracleLimits& limits = {});

struct OptimalSeeds {
  NodeSet seeds;
  double spread = 0.0;
};

// Exhaustive search over all sets of size min(k, n); ties go to the
// lexicographically smallest set.
OptimalSeeds exact_optimal_seeds(const Graph& graph, int k,
                                 const OracleLimits& limits = {});

// IC graph whose existing edges into `forced` nodes all get probability 1.
Graph force_in_edges(const Graph& graph, const NodeSet& forced);

double exact_sigma_with_forced_in_edges(const Graph& graph, const NodeSet& forced,
                                        const NodeSet& seeds,
                                        const OracleLimits& limits = {});

std::uint64_t to_mask(const NodeSet& nodes);
NodeSet from_mask(std::uint64_t mask);

}  // namespace imfs
