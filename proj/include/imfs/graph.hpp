#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace imfs {

using NodeId = std::int32_t;

/// Sorted, duplicate-free list of node indices.
using NodeSet = std::vector<NodeId>;

enum class Model { IC, LT };

std::string to_string(Model model);
Model parse_model(const std::string& text);

struct Edge {
  NodeId from;
  NodeId to;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct WeightedEdge {
  NodeId from;
  NodeId to;
  double param;
  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// Directed graph with one parameter per ordered pair: the activation
// probability p_uv under IC, the weight w_uv under LT. Nodes are 0..n-1.
//
// The parameter matrix is dense (row = source, column = target). The edge
// list and the matrix are held separately so that inconsistent inputs can be
// represented and reported by validate(); graphs built through
// from_weighted_edges() or from_matrix() are consistent by construction.
// Immutable after construction.
class Graph {
 public:
  Graph() = default;
  Graph(int n, Model model);

  // Raw parts. Rejects self-loops, out-of-range endpoints, duplicate edges
  // and a matrix of the wrong size; anything else is left to validate().
  Graph(int n, Model model, std::vector<Edge> edges, std::vector<double> params);

  // Throws std::invalid_argument on self-loops, duplicates, or a parameter
  // outside (0, 1].
  static Graph from_weighted_edges(int n, Model model,
                                   std::span<const WeightedEdge> edges);

  // Edges are the nonzero off-diagonal entries of the n*n matrix.
  static Graph from_matrix(int n, Model model, std::vector<double> params);

  int n() const { return n_; }
  Model model() const { return model_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }

  double param(NodeId from, NodeId to) const {
    return params_[static_cast<std::size_t>(from) * n_ + to];
  }
  const std::vector<double>& param_matrix() const { return params_; }

  std::span<const NodeId> in_neighbors(NodeId v) const;
  std::span<const NodeId> out_neighbors(NodeId u) const;

  std::vector<WeightedEdge> weighted_edges() const;

  // Same node count and model, new parameters; edges follow the matrix.
  Graph with_params(std::vector<double> params) const;
  Graph with_model(Model model) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.model_ == b.model_ && a.edges_ == b.edges_ &&
           a.params_ == b.params_;
  }

 private:
  void build_adjacency();

  int n_ = 0;
  Model model_ = Model::IC;
  std::vector<Edge> edges_;
  std::vector<double> params_;
  std::vector<std::size_t> in_offsets_, out_offsets_;
  std::vector<NodeId> in_adj_, out_adj_;
};

/// Empty iff every graph invariant holds; otherwise one line per violation.
std::vector<std::string> validate(const Graph& graph);

int max_in_degree(const Graph& graph);

struct ParamRange {
  double lo = 0.1;
  double hi = 1.0;
};

// Each ordered pair is kept with probability `density`; parameters are
// uniform in `range`. For LT every node whose incoming weights exceed 1 has
// them scaled down to sum to 1.
Graph random_graph(int n, double density, ParamRange range, Model model,
                   std::uint64_t rng_seed);

/// Product seed distribution: node u is a seed independently with q[u].
struct SeedDistribution {
  std::vector<double> q;

  SeedDistribution() = default;
  explicit SeedDistribution(std::vector<double> probs);

  static SeedDistribution uniform(int n, double prob);
  static SeedDistribution random(int n, double lo, double hi,
                                 std::uint64_t rng_seed);

  int n() const { return static_cast<int>(q.size()); }
  double expected_size() const;

  friend bool operator==(const SeedDistribution&,
                         const SeedDistribution&) = default;
};

// Parameters of the three data assumptions and of the accuracy targets.
struct AssumptionParams {
  double alpha = 0.1;    // (0, 1]
  double gamma = 0.1;    // (0, 1/2]
  double beta = 0.3;     // (0, 1)
  double c = 1.0;        // > 0
  double epsilon = 0.1;  // (0, 1)
  double delta = 0.1;    // (0, 1)
  int k = 1;             // >= 1
  double kappa = 1.0 - 0.36787944117144233;  // (0, 1]

  // Human-readable range violations; `n` > 0 also checks k <= n.
  std::vector<std::string> violations(int n = 0) const;
};

}  // namespace imfs
