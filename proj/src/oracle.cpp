#include "imfs/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "imfs/errors.hpp"

namespace imfs {

namespace {

void check_node(const Graph& graph, NodeId v) {
  if (v < 0 || v >= graph.n()) {
    throw std::invalid_argument("node " + std::to_string(v) + " out of range");
  }
}

void check_dist(const Graph& graph, const SeedDistribution& dist) {
  if (dist.n() != graph.n()) {
    throw std::invalid_argument("seed distribution size differs from node count");
  }
}

// One-step activation of v given that v is not a seed, with u's factor
// optionally replaced: u_state < 0 leaves u random, 0 forces ū, 1 forces u.
double activation_from_neighbors(const Graph& graph, const SeedDistribution& dist,
                                 NodeId v, NodeId u, int u_state) {
  auto seed_prob = [&](NodeId w) {
    if (w == u && u_state >= 0) return static_cast<double>(u_state);
    return dist.q[w];
  };
  if (graph.model() == Model::IC) {
    double stay_inactive = 1.0;
    for (NodeId w : graph.in_neighbors(v)) {
      stay_inactive *= 1.0 - seed_prob(w) * graph.param(w, v);
    }
    return 1.0 - stay_inactive;
  }
  double total = 0.0;
  for (NodeId w : graph.in_neighbors(v)) total += seed_prob(w) * graph.param(w, v);
  return std::min(total, 1.0);
}

// Reachability closure of every node over the live out-adjacency masks.
void close_reach(std::span<const std::uint64_t> out_live, std::span<std::uint64_t> reach) {
  const std::size_t n = out_live.size();
  for (std::size_t u = 0; u < n; ++u) {
    std::uint64_t seen = std::uint64_t{1} << u;
    std::uint64_t frontier = seen;
    while (frontier) {
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f; f &= f - 1) {
        next |= out_live[static_cast<std::size_t>(std::countr_zero(f))];
      }
      frontier = next & ~seen;
      seen |= next;
    }
    reach[u] = seen;
  }
}

void enumerate_ic(const Graph& graph, const WorldVisitor& visit,
                  const OracleLimits& limits) {
  const int n = graph.n();
  std::vector<std::uint64_t> fixed_out(static_cast<std::size_t>(n), 0);
  std::vector<Edge> random_edges;
  std::vector<double> probs;
  for (const Edge& e : graph.edges()) {
    const double p = graph.param(e.from, e.to);
    if (p >= 1.0) {
      fixed_out[e.from] |= std::uint64_t{1} << e.to;
    } else if (p > 0.0) {
      random_edges.push_back(e);
      probs.push_back(p);
    }
  }
  const int m = static_cast<int>(random_edges.size());
  if (m > limits.max_ic_random_edges) {
    throw InstanceTooLarge("IC oracle: " + std::to_string(m) +
                           " probabilistic edges exceed the cap of " +
                           std::to_string(limits.max_ic_random_edges));
  }
  // World weight = low-half table * high-half table.
  const int low_bits = m / 2;
  const int high_bits = m - low_bits;
  auto weight_table = [&](int offset, int bits) {
    std::vector<double> table(std::size_t{1} << bits, 1.0);
    for (std::size_t mask = 0; mask < table.size(); ++mask) {
      double w = 1.0;
      for (int b = 0; b < bits; ++b) {
        const double p = probs[static_cast<std::size_t>(offset + b)];
        w *= (mask >> b & 1U) ? p : 1.0 - p;
      }
      table[mask] = w;
    }
    return table;
  };
  const auto low = weight_table(0, low_bits);
  const auto high = weight_table(low_bits, high_bits);
  std::vector<std::uint64_t> out_live(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> reach(static_cast<std::size_t>(n));
  const std::uint64_t worlds = std::uint64_t{1} << m;
  const std::uint64_t low_mask = (std::uint64_t{1} << low_bits) - 1;
  for (std::uint64_t world = 0; world < worlds; ++world) {
    const double weight = low[world & low_mask] * high[world >> low_bits];
    if (weight == 0.0) continue;
    std::copy(fixed_out.begin(), fixed_out.end(), out_live.begin());
    for (int b = 0; b < m; ++b) {
      if (world >> b & 1U) {
        out_live[random_edges[b].from] |= std::uint64_t{1} << random_edges[b].to;
      }
    }
    close_reach(out_live, reach);
    visit(weight, reach);
  }
}

void enumerate_lt(const Graph& graph, const WorldVisitor& visit,
                  const OracleLimits& limits) {
  const int n = graph.n();
  // choices[v]: (source, probability) with source -1 for "no live in-edge".
  std::vector<std::vector<std::pair<NodeId, double>>> choices(static_cast<std::size_t>(n));
  double worlds = 1.0;
  for (NodeId v = 0; v < n; ++v) {
    double total = 0.0;
    for (NodeId u : graph.in_neighbors(v)) {
      const double w = graph.param(u, v);
      total += w;
      if (w > 0.0) choices[v].push_back({u, w});
    }
    const double none = std::max(0.0, 1.0 - total);
    if (none > 0.0) choices[v].push_back({-1, none});
    worlds *= static_cast<double>(choices[v].size());
  }
  if (worlds > limits.max_lt_worlds) {
    std::ostringstream os;
    os << "LT oracle: " << worlds << " live-edge worlds exceed the cap of "
       << limits.max_lt_worlds;
    throw InstanceTooLarge(os.str());
  }
  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> out_live(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> reach(static_cast<std::size_t>(n));
  while (true) {
    double weight = 1.0;
    std::fill(out_live.begin(), out_live.end(), 0);
    for (NodeId v = 0; v < n; ++v) {
      const auto& [src, p] = choices[v][digit[v]];
      weight *= p;
      if (src >= 0) out_live[src] |= std::uint64_t{1} << v;
    }
    close_reach(out_live, reach);
    visit(weight, reach);
    int pos = 0;
    while (pos < n && ++digit[pos] == choices[pos].size()) {
      digit[pos] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
}

}  // namespace

bool is_lt_live_edge_graph(const LiveEdgeGraph& live, int n) {
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (const Edge& e : live.edges) {
    if (++indegree[e.to] > 1) return false;
  }
  return true;
}

double exact_ap(const Graph& graph, const SeedDistribution& dist, NodeId v) {
  check_dist(graph, dist);
  check_node(graph, v);
  const double qv = dist.q[v];
  return qv + (1.0 - qv) * activation_from_neighbors(graph, dist, v, -1, -1);
}

double exact_ap_given(const Graph& graph, const SeedDistribution& dist, NodeId v,
                      NodeId u, bool u_seeded) {
  check_dist(graph, dist);
  check_node(graph, v);
  check_node(graph, u);
  if (u == v) throw std::invalid_argument("conditional activation needs u != v");
  const double qv = dist.q[v];
  return qv + (1.0 - qv) * activation_from_neighbors(graph, dist, v, u, u_seeded ? 1 : 0);
}

OneStepMarginals exact_marginals(const Graph& graph, const SeedDistribution& dist) {
  check_dist(graph, dist);
  const int n = graph.n();
  OneStepMarginals m;
  m.n = n;
  m.q = dist.q;
  m.ap.resize(static_cast<std::size_t>(n));
  m.ap_not.assign(static_cast<std::size_t>(n) * n, 0.0);
  m.ap_not_defined.assign(static_cast<std::size_t>(n) * n, 0);
  for (NodeId v = 0; v < n; ++v) m.ap[v] = exact_ap(graph, dist, v);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u == v) continue;
      const std::size_t idx = static_cast<std::size_t>(u) * n + v;
      m.ap_not[idx] = exact_ap_given(graph, dist, v, u, false);
      m.ap_not_defined[idx] = dist.q[u] < 1.0 ? 1 : 0;
    }
  }
  return m;
}

void for_each_live_edge_world(const Graph& graph, const WorldVisitor& visit,
                              const OracleLimits& limits) {
  if (graph.n() > std::min(limits.max_nodes, 64)) {
    throw InstanceTooLarge("oracle supports at most " +
                           std::to_string(std::min(limits.max_nodes, 64)) + " nodes");
  }
  if (graph.model() == Model::IC) {
    enumerate_ic(graph, visit, limits);
  } else {
    enumerate_lt(graph, visit, limits);
  }
}

std::uint64_t to_mask(const NodeSet& nodes) {
  std::uint64_t mask = 0;
  for (NodeId v : nodes) {
    if (v < 0 || v >= 64) throw std::invalid_argument("node outside mask range");
    mask |= std::uint64_t{1} << v;
  }
  return mask;
}

NodeSet from_mask(std::uint64_t mask) {
  NodeSet out;
  for (; mask; mask &= mask - 1) out.push_back(std::countr_zero(mask));
  return out;
}

std::vector<double> exact_sigma_many(const Graph& graph,
                                     std::span<const NodeSet> seed_sets,
                                     const OracleLimits& limits) {
  std::vector<std::vector<NodeId>> members;
  for (const NodeSet& s : seed_sets) {
    for (NodeId v : s) check_node(graph, v);
    NodeSet sorted = s;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    members.push_back(std::move(sorted));
  }
  std::vector<double> sigma(seed_sets.size(), 0.0);
  for_each_live_edge_world(
      graph,
      [&](double weight, std::span<const std::uint64_t> reach) {
        for (std::size_t i = 0; i < members.size(); ++i) {
          std::uint64_t reached = 0;
          for (NodeId s : members[i]) reached |= reach[s];
          sigma[i] += weight * (std::popcount(reached) - static_cast<int>(members[i].size()));
        }
      },
      limits);
  // Seeds are counted once, exactly; only the nodes they reach are weighted.
  for (std::size_t i = 0; i < members.size(); ++i) sigma[i] += static_cast<double>(members[i].size());
  return sigma;
}

double exact_sigma(const Graph& graph, const NodeSet& seeds, const OracleLimits& limits) {
  const NodeSet sets[] = {seeds};
  return exact_sigma_many(graph, sets, limits).front();
}

std::vector<double> exact_sigma_all_subsets(const Graph& graph,
                                            const OracleLimits& limits) {
  const int n = graph.n();
  if (n > 20) throw InstanceTooLarge("all-subset oracle supports at most 20 nodes");
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<double> sigma(subsets, 0.0);
  std::vector<std::uint64_t> reached(subsets, 0);
  for_each_live_edge_world(
      graph,
      [&](double weight, std::span<const std::uint64_t> reach) {
        for (std::size_t s = 1; s < subsets; ++s) {
          const int low = std::countr_zero(s);
          reached[s] = reached[s & (s - 1)] | reach[static_cast<std::size_t>(low)];
          sigma[s] += weight * (std::popcount(reached[s]) - std::popcount(s));
        }
      },
      limits);
  for (std::size_t s = 1; s < subsets; ++s) sigma[s] += std::popcount(s);
  return sigma;
}

OptimalSeeds exact_optimal_seeds(const Graph& graph, int k, const OracleLimits& limits) {
  const int n = graph.n();
  if (k < 0) throw std::invalid_argument("negative seed budget");
  const int size = std::min(k, n);
  double count = 1.0;
  for (int i = 0; i < size; ++i) count = count * (n - i) / (i + 1);
  if (count > limits.max_seed_sets) {
    throw InstanceTooLarge("exhaustive search over too many seed sets");
  }
  // Lexicographic enumeration of size-`size` subsets.
  std::vector<NodeSet> sets;
  NodeSet current(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) current[i] = i;
  while (true) {
    sets.push_back(current);
    int i = size - 1;
    while (i >= 0 && current[i] == n - size + i) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < size; ++j) current[j] = current[j - 1] + 1;
  }
  const auto sigma = exact_sigma_many(graph, sets, limits);
  const double best = *std::max_element(sigma.begin(), sigma.end());
  // Summation order differs between sets, so compare with a small slack.
  const double slack = 1e-12 * std::max(1.0, best);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sigma[i] >= best - slack) return {sets[i], sigma[i]};
  }
  return {sets.front(), sigma.front()};
}

Graph force_in_edges(const Graph& graph, const NodeSet& forced) {
  if (graph.model() != Model::IC) {
    throw ModelMismatch("forcing in-edges to probability 1 is defined for IC graphs");
  }
  std::vector<double> params = graph.param_matrix();
  const int n = graph.n();
  for (NodeId v : forced) {
    check_node(graph, v);
    for (NodeId u : graph.in_neighbors(v)) params[static_cast<std::size_t>(u) * n + v] = 1.0;
  }
  return graph.with_params(std::move(params));
}

double exact_sigma_with_forced_in_edges(const Graph& graph, const NodeSet& forced,
                                        const NodeSet& seeds, const OracleLimits& limits) {
  return exact_sigma(force_in_edges(graph, forced), seeds, limits);
}

}  // namespace imfs
