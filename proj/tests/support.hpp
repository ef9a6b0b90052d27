#pragma once

// Reference implementations used only by the tests. They follow the model
// definitions as directly as possible (explicit seed-set and live-edge
// enumeration, plain BFS) and share no code with the library's oracle.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <unistd.h>

#include "imfs/graph.hpp"
#include "imfs/rng.hpp"

namespace testing {

using imfs::Graph;
using imfs::Model;
using imfs::NodeId;
using imfs::NodeSet;
using imfs::SeedDistribution;

inline std::vector<NodeId> bfs(int n, const std::vector<std::vector<NodeId>>& out,
                               const NodeSet& seeds) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> order;
  for (NodeId s : seeds) {
    if (!seen[s]) {
      seen[s] = 1;
      order.push_back(s);
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (NodeId v : out[order[i]]) {
      if (!seen[v]) {
        seen[v] = 1;
        order.push_back(v);
      }
    }
  }
  return order;
}

// Calls visit(probability, out-lists) for every live-edge world.
inline void naive_worlds(const Graph& g,
                         const std::function<void(double, const std::vector<std::vector<NodeId>>&)>& visit) {
  const int n = g.n();
  if (g.model() == Model::IC) {
    const auto& edges = g.edges();
    const std::size_t m = edges.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      double w = 1.0;
      std::vector<std::vector<NodeId>> out(static_cast<std::size_t>(n));
      for (std::size_t i = 0; i < m; ++i) {
        const double p = g.param(edges[i].from, edges[i].to);
        if (mask >> i & 1) {
          w *= p;
          out[edges[i].from].push_back(edges[i].to);
        } else {
          w *= 1.0 - p;
        }
      }
      if (w > 0.0) visit(w, out);
    }
    return;
  }
  // LT: node v keeps in-edge choice[v] (or none when choice[v] == |N(v)|).
  std::vector<std::size_t> choice(static_cast<std::size_t>(n), 0);
  std::function<void(int, double)> rec = [&](int v, double w) {
    if (w <= 0.0) return;
    if (v == n) {
      std::vector<std::vector<NodeId>> out(static_cast<std::size_t>(n));
      for (int x = 0; x < n; ++x) {
        const auto in = g.in_neighbors(x);
        if (choice[x] < in.size()) out[in[choice[x]]].push_back(x);
      }
      visit(w, out);
      return;
    }
    const auto in = g.in_neighbors(v);
    double rest = 1.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double p = g.param(in[i], v);
      rest -= p;
      choice[v] = i;
      rec(v + 1, w * p);
    }
    choice[v] = in.size();
    rec(v + 1, w * std::max(0.0, rest));
  };
  rec(0, 1.0);
}

inline double naive_sigma(const Graph& g, const NodeSet& seeds) {
  double total = 0.0;
  naive_worlds(g, [&](double w, const auto& out) {
    total += w * static_cast<double>(bfs(g.n(), out, seeds).size());
  });
  return total;
}

// Pr[v ∈ S_1] by enumerating every seed set, optionally with u's seed state
// fixed.
inline double naive_ap(const Graph& g, const SeedDistribution& d, NodeId v, int fixed_u = -1,
                       bool fixed_seeded = false) {
  const int n = g.n();
  double total = 0.0;
  double mass = 0.0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    double w = 1.0;
    for (int x = 0; x < n; ++x) {
      const bool in = s >> x & 1;
      if (x == fixed_u) {
        if (in != fixed_seeded) {
          w = 0.0;
          break;
        }
        continue;
      }
      w *= in ? d.q[x] : 1.0 - d.q[x];
    }
    if (w == 0.0) continue;
    mass += w;
    double active;
    if (s >> v & 1) {
      active = 1.0;
    } else if (g.model() == Model::IC) {
      double miss = 1.0;
      for (int u = 0; u < n; ++u) {
        if (s >> u & 1) miss *= 1.0 - g.param(u, v);
      }
      active = 1.0 - miss;
    } else {
      double sum = 0.0;
      for (int u = 0; u < n; ++u) {
        if (s >> u & 1) sum += g.param(u, v);
      }
      active = std::min(1.0, sum);
    }
    total += w * active;
  }
  return total / mass;
}

// Graph with every ordered pair kept with probability `density` and
// parameters in [lo, hi]; at most `max_edges` edges.
inline Graph random_instance(imfs::Rng& rng, int n, double density, double lo, double hi,
                             Model model, std::size_t max_edges = 1000) {
  std::vector<double> params(static_cast<std::size_t>(n) * n, 0.0);
  std::size_t edges = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v || edges >= max_edges) continue;
      if (imfs::uniform01(rng) < density) {
        params[static_cast<std::size_t>(u) * n + v] = lo + (hi - lo) * imfs::uniform01(rng);
        ++edges;
      }
    }
  }
  if (model == Model::LT) {
    for (int v = 0; v < n; ++v) {
      double sum = 0.0;
      for (int u = 0; u < n; ++u) sum += params[static_cast<std::size_t>(u) * n + v];
      if (sum > 1.0) {
        for (int u = 0; u < n; ++u) params[static_cast<std::size_t>(u) * n + v] /= sum;
      }
    }
  }
  return Graph::from_matrix(n, model, std::move(params));
}

inline SeedDistribution random_seeds(imfs::Rng& rng, int n, double lo, double hi) {
  std::vector<double> q(static_cast<std::size_t>(n));
  for (auto& x : q) x = lo + (hi - lo) * imfs::uniform01(rng);
  return SeedDistribution(std::move(q));
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("imfs_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
