#include "imfs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "imfs/rng.hpp"

namespace imfs {

namespace {

constexpr double kNormalizationTolerance = 1e-12;

void check_node(int n, NodeId v, const char* what) {
  if (v < 0 || v >= n) {
    std::ostringstream os;
    os << what << " node " << v << " out of range [0, " << n << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

std::string to_string(Model model) {
  return model == Model::IC ? "ic" : "lt";
}

Model parse_model(const std::string& text) {
  if (text == "ic" || text == "IC") return Model::IC;
  if (text == "lt" || text == "LT") return Model::LT;
  throw std::invalid_argument("unknown diffusion model '" + text + "'");
}

Graph::Graph(int n, Model model)
    : n_(n), model_(model), params_(static_cast<std::size_t>(n) * n, 0.0) {
  if (n < 0) throw std::invalid_argument("negative node count");
  build_adjacency();
}

Graph::Graph(int n, Model model, std::vector<Edge> edges,
             std::vector<double> params)
    : n_(n), model_(model), edges_(std::move(edges)), params_(std::move(params)) {
  if (n < 0) throw std::invalid_argument("negative node count");
  if (params_.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("parameter matrix must have n*n entries");
  }
  for (const Edge& e : edges_) {
    check_node(n, e.from, "edge source");
    check_node(n, e.to, "edge target");
    if (e.from == e.to) {
      throw std::invalid_argument("self-loop at node " + std::to_string(e.from));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("duplicate edge");
  }
  build_adjacency();
}

Graph Graph::from_weighted_edges(int n, Model model,
                                 std::span<const WeightedEdge> edges) {
  std::vector<Edge> plain;
  plain.reserve(edges.size());
  std::vector<double> params(static_cast<std::size_t>(n) * n, 0.0);
  for (const WeightedEdge& e : edges) {
    check_node(n, e.from, "edge source");
    check_node(n, e.to, "edge target");
    if (!(e.param > 0.0 && e.param <= 1.0)) {
      std::ostringstream os;
      os << "parameter of edge (" << e.from << ", " << e.to << ") = " << e.param
         << " outside (0, 1]";
      throw std::invalid_argument(os.str());
    }
    plain.push_back({e.from, e.to});
    if (e.from != e.to) params[static_cast<std::size_t>(e.from) * n + e.to] = e.param;
  }
  return Graph(n, model, std::move(plain), std::move(params));
}

Graph Graph::from_matrix(int n, Model model, std::vector<double> params) {
  if (params.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("parameter matrix must have n*n entries");
  }
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      double& p = params[static_cast<std::size_t>(u) * n + v];
      if (u == v) {
        p = 0.0;
      } else if (p != 0.0) {
        edges.push_back({u, v});
      }
    }
  }
  return Graph(n, model, std::move(edges), std::move(params));
}

void Graph::build_adjacency() {
  in_offsets_.assign(n_ + 1, 0);
  out_offsets_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    ++in_offsets_[e.to + 1];
    ++out_offsets_[e.from + 1];
  }
  for (int i = 0; i < n_; ++i) {
    in_offsets_[i + 1] += in_offsets_[i];
    out_offsets_[i + 1] += out_offsets_[i];
  }
  in_adj_.assign(edges_.size(), 0);
  out_adj_.assign(edges_.size(), 0);
  std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  std::vector<std::size_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  // edges_ is sorted by (from, to), so both adjacency lists come out sorted.
  for (const Edge& e : edges_) {
    in_adj_[in_fill[e.to]++] = e.from;
    out_adj_[out_fill[e.from]++] = e.to;
  }
}

std::span<const NodeId> Graph::in_neighbors(NodeId v) const {
  return {in_adj_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
}

std::span<const NodeId> Graph::out_neighbors(NodeId u) const {
  return {out_adj_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
}

std::vector<WeightedEdge> Graph::weighted_edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(edges_.size());
  for (const Edge& e : edges_) out.push_back({e.from, e.to, param(e.from, e.to)});
  return out;
}

Graph Graph::with_params(std::vector<double> params) const {
  return from_matrix(n_, model_, std::move(params));
}

Graph Graph::with_model(Model model) const {
  Graph copy = *this;
  copy.model_ = model;
  return copy;
}

std::vector<std::string> validate(const Graph& graph) {
  std::vector<std::string> problems;
  const int n = graph.n();
  std::vector<char> is_edge(static_cast<std::size_t>(n) * n, 0);
  for (const Edge& e : graph.edges()) {
    is_edge[static_cast<std::size_t>(e.from) * n + e.to] = 1;
  }
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      const double p = graph.param(u, v);
      const bool edge = is_edge[static_cast<std::size_t>(u) * n + v] != 0;
      std::ostringstream os;
      if (!(p >= 0.0 && p <= 1.0)) {
        os << "param[" << u << "][" << v << "] = " << p << " outside [0, 1]";
      } else if (edge && p == 0.0) {
        os << "edge (" << u << ", " << v << ") has zero parameter";
      } else if (!edge && p != 0.0) {
        os << "param[" << u << "][" << v << "] = " << p
           << " but (" << u << ", " << v << ") is not an edge";
      }
      if (!os.str().empty()) problems.push_back(os.str());
    }
  }
  if (graph.model() == Model::LT) {
    for (NodeId v = 0; v < n; ++v) {
      double total = 0.0;
      for (NodeId u : graph.in_neighbors(v)) total += graph.param(u, v);
      if (total > 1.0 + kNormalizationTolerance) {
        std::ostringstream os;
        os << "normalization at " << v << ": incoming weights sum to " << total;
        problems.push_back(os.str());
      }
    }
  }
  return problems;
}

int max_in_degree(const Graph& graph) {
  std::size_t best = 0;
  for (NodeId v = 0; v < graph.n(); ++v) {
    best = std::max(best, graph.in_neighbors(v).size());
  }
  return static_cast<int>(best);
}

Graph random_graph(int n, double density, ParamRange range, Model model,
                   std::uint64_t rng_seed) {
  if (n < 0) throw std::invalid_argument("negative node count");
  if (!(density >= 0.0 && density <= 1.0)) {
    throw std::invalid_argument("edge density must lie in [0, 1]");
  }
  if (!(range.lo > 0.0 && range.lo <= range.hi && range.hi <= 1.0)) {
    throw std::invalid_argument("parameter range must satisfy 0 < lo <= hi <= 1");
  }
  Rng rng = stream_rng(rng_seed, 0);
  std::vector<double> params(static_cast<std::size_t>(n) * n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u == v) continue;
      // Both draws happen for every pair so the parameters of retained edges
      // do not depend on which other pairs were kept.
      const bool keep = uniform01(rng) < density;
      const double p = range.lo + (range.hi - range.lo) * uniform01(rng);
      if (keep) params[static_cast<std::size_t>(u) * n + v] = p;
    }
  }
  if (model == Model::LT) {
    for (NodeId v = 0; v < n; ++v) {
      double total = 0.0;
      for (NodeId u = 0; u < n; ++u) total += params[static_cast<std::size_t>(u) * n + v];
      if (total <= 1.0) continue;
      for (NodeId u = 0; u < n; ++u) params[static_cast<std::size_t>(u) * n + v] /= total;
    }
  }
  return Graph::from_matrix(n, model, std::move(params));
}

SeedDistribution::SeedDistribution(std::vector<double> probs) : q(std::move(probs)) {
  for (std::size_t u = 0; u < q.size(); ++u) {
    if (!(q[u] >= 0.0 && q[u] <= 1.0)) {
      std::ostringstream os;
      os << "seed probability q[" << u << "] = " << q[u] << " outside [0, 1]";
      throw std::invalid_argument(os.str());
    }
  }
}

SeedDistribution SeedDistribution::uniform(int n, double prob) {
  return SeedDistribution(std::vector<double>(static_cast<std::size_t>(n), prob));
}

SeedDistribution SeedDistribution::random(int n, double lo, double hi,
                                          std::uint64_t rng_seed) {
  if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
    throw std::invalid_argument("seed probability range must satisfy 0 <= lo <= hi <= 1");
  }
  Rng rng = stream_rng(rng_seed, 1);
  std::vector<double> q(static_cast<std::size_t>(n));
  for (double& x : q) x = lo + (hi - lo) * uniform01(rng);
  return SeedDistribution(std::move(q));
}

double SeedDistribution::expected_size() const {
  double total = 0.0;
  for (double x : q) total += x;
  return total;
}

std::vector<std::string> AssumptionParams::violations(int n) const {
  std::vector<std::string> out;
  auto require = [&](bool ok, const char* message) {
    if (!ok) out.emplace_back(message);
  };
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  require(gamma > 0.0 && gamma <= 0.5, "gamma must lie in (0, 1/2]");
  require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
  require(c > 0.0, "c must be positive");
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(k >= 1, "k must be positive");
  require(kappa > 0.0 && kappa <= 1.0, "kappa must lie in (0, 1]");
  if (n > 0) require(k <= n, "k must not exceed the node count");
  return out;
}

}  // namespace imfs
