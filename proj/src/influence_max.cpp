#include "imfs/influence_max.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "imfs/diffusion.hpp"
#include "imfs/parallel.hpp"
#include "imfs/rng.hpp"

namespace imfs {

SpreadEstimate estimate_sigma(const Graph& graph, const NodeSet& seeds, std::size_t num_sims,
                              std::uint64_t rng_seed, int threads) {
  if (num_sims == 0) throw std::invalid_argument("num_sims must be positive");
  std::vector<double> sizes(num_sims);
  parallel_chunks(num_sims, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = stream_rng(rng_seed, i);
      sizes[i] = static_cast<double>(simulate(graph, seeds, rng).final_size());
    }
  });
  double sum = 0.0;
  for (double s : sizes) sum += s;
  const double mean = sum / static_cast<double>(num_sims);
  double sq = 0.0;
  for (double s : sizes) sq += (s - mean) * (s - mean);
  SpreadEstimate est;
  est.mean = mean;
  est.num_simulations = num_sims;
  est.std_error =
      num_sims > 1 ? std::sqrt(sq / static_cast<double>(num_sims - 1) / static_cast<double>(num_sims))
                   : 0.0;
  return est;
}

LiveEdgeWorlds::LiveEdgeWorlds(const Graph& graph, std::size_t count, std::uint64_t rng_seed,
                               int threads)
    : n_(graph.n()),
      count_(count),
      offsets_(count * (static_cast<std::size_t>(graph.n()) + 1), 0),
      targets_(count) {
  const int n = n_;
  parallel_chunks(count, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::vector<NodeId>> out(static_cast<std::size_t>(n));
    for (std::size_t w = begin; w < end; ++w) {
      Rng rng = stream_rng(rng_seed, w);
      for (auto& list : out) list.clear();
      if (graph.model() == Model::IC) {
        for (const Edge& e : graph.edges()) {
          if (bernoulli(rng, graph.param(e.from, e.to))) out[e.from].push_back(e.to);
        }
      } else {
        for (NodeId v = 0; v < n; ++v) {
          const auto in = graph.in_neighbors(v);
          if (in.empty()) continue;
          const double r = uniform01(rng);
          double cumulative = 0.0;
          for (NodeId u : in) {
            cumulative += graph.param(u, v);
            if (r < cumulative) {
              out[u].push_back(v);
              break;
            }
          }
        }
      }
      std::uint32_t* off = offsets_.data() + w * (static_cast<std::size_t>(n) + 1);
      auto& flat = targets_[w];
      for (int u = 0; u < n; ++u) {
        off[u] = static_cast<std::uint32_t>(flat.size());
        flat.insert(flat.end(), out[u].begin(), out[u].end());
      }
      off[n] = static_cast<std::uint32_t>(flat.size());
    }
  });
}

std::span<const NodeId> LiveEdgeWorlds::out(std::size_t world, NodeId u) const {
  const std::uint32_t* off = offsets_.data() + world * (static_cast<std::size_t>(n_) + 1);
  return {targets_[world].data() + off[u], off[u + 1] - off[u]};
}

LiveEdgeGraph LiveEdgeWorlds::world(std::size_t index) const {
  LiveEdgeGraph live;
  for (NodeId u = 0; u < n_; ++u) {
    for (NodeId v : out(index, u)) live.edges.push_back({u, v});
  }
  std::sort(live.edges.begin(), live.edges.end());
  return live;
}

namespace {

// Coverage state of the greedy: which nodes each world already reaches.
class Coverage {
 public:
  explicit Coverage(const LiveEdgeWorlds& worlds)
      : worlds_(worlds), covered_(worlds.size() * static_cast<std::size_t>(worlds.n()), 0) {}

  // Newly reached nodes in worlds [begin, end) if `source` were added.
  std::uint64_t gain(NodeId source, std::size_t begin, std::size_t end,
                     std::vector<char>& seen, std::vector<NodeId>& stack) const {
    std::uint64_t total = 0;
    for (std::size_t w = begin; w < end; ++w) total += walk(w, source, seen, stack);
    return total;
  }

  void commit(NodeId source) {
    const std::size_t n = static_cast<std::size_t>(worlds_.n());
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack;
    for (std::size_t w = 0; w < worlds_.size(); ++w) {
      walk(w, source, seen, stack);
      for (NodeId u : stack) covered_[w * n + u] = 1;
    }
  }

 private:
  // Uncovered nodes reachable from `source` in world w, left in `stack`.
  std::uint64_t walk(std::size_t w, NodeId source, std::vector<char>& seen,
                     std::vector<NodeId>& stack) const {
    const char* covered = covered_.data() + w * static_cast<std::size_t>(worlds_.n());
    stack.clear();
    if (covered[source]) return 0;
    stack.push_back(source);
    seen[source] = 1;
    for (std::size_t head = 0; head < stack.size(); ++head) {
      for (NodeId v : worlds_.out(w, stack[head])) {
        if (!seen[v] && !covered[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    for (NodeId u : stack) seen[u] = 0;
    return stack.size();
  }

  const LiveEdgeWorlds& worlds_;
  std::vector<char> covered_;
};

}  // namespace

double LiveEdgeWorlds::spread(const NodeSet& seeds) const {
  if (count_ == 0) return 0.0;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<NodeId> queue;
  std::uint64_t total = 0;
  for (std::size_t w = 0; w < count_; ++w) {
    queue.clear();
    for (NodeId s : seeds) {
      if (!seen[s]) {
        seen[s] = 1;
        queue.push_back(s);
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeId v : out(w, queue[head])) {
        if (!seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
    total += queue.size();
    for (NodeId u : queue) seen[u] = 0;
  }
  return static_cast<double>(total) / static_cast<double>(count_);
}

GreedyResult greedy_im(const Graph& graph, int k, std::size_t num_sims,
                       std::uint64_t rng_seed, int threads) {
  const int n = graph.n();
  if (k < 1 || k > n) throw std::invalid_argument("seed budget k must lie in [1, n]");
  if (num_sims == 0) throw std::invalid_argument("num_sims must be positive");
  if (threads <= 0) threads = default_thread_count();

  const LiveEdgeWorlds worlds(graph, num_sims, rng_seed, threads);
  Coverage coverage(worlds);
  GreedyResult result;
  result.seeds.budget_k = k;

  const std::size_t shards =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(threads), num_sims));
  const std::size_t chunk = (num_sims + shards - 1) / shards;
  auto evaluate = [&](NodeId x) {
    std::vector<std::uint64_t> partial(shards, 0);
    parallel_chunks(shards, threads, [&](std::size_t s0, std::size_t s1) {
      std::vector<char> seen(static_cast<std::size_t>(n), 0);
      std::vector<NodeId> stack;
      for (std::size_t s = s0; s < s1; ++s) {
        const std::size_t lo = s * chunk;
        const std::size_t hi = std::min(num_sims, lo + chunk);
        partial[s] = coverage.gain(x, lo, hi, seen, stack);
      }
    });
    ++result.gain_evaluations;
    std::uint64_t total = 0;
    for (auto p : partial) total += p;
    return total;
  };

  struct Entry {
    std::uint64_t gain;
    NodeId node;
    int round;
  };
  // Highest gain first, then smallest node index.
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.node > b.node;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (NodeId v = 0; v < n; ++v) heap.push({evaluate(v), v, 0});

  std::uint64_t covered_total = 0;
  int round = 0;
  while (static_cast<int>(result.seeds.nodes.size()) < k && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.round != round) {
      top.gain = evaluate(top.node);
      top.round = round;
      heap.push(top);
      continue;
    }
    coverage.commit(top.node);
    covered_total += top.gain;
    result.seeds.nodes.push_back(top.node);
    result.marginal_gains.push_back(static_cast<double>(top.gain) /
                                    static_cast<double>(num_sims));
    ++round;
  }
  result.estimated_spread = static_cast<double>(covered_total) / static_cast<double>(num_sims);
  std::sort(result.seeds.nodes.begin(), result.seeds.nodes.end());
  return result;
}

ImAlgorithm make_greedy_algorithm(std::size_t num_sims, std::uint64_t rng_seed, int threads) {
  return [=](const Graph& graph, int k) {
    return greedy_im(graph, k, num_sims, rng_seed, threads).seeds;
  };
}

}  // namespace imfs
