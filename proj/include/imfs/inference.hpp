#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "imfs/cascade.hpp"
#include "imfs/graph.hpp"
#include "imfs/one_step.hpp"

namespace imfs {

// Counts over the first two steps of each cascade:
//   t_u[u]      u ∈ S_0
//   t_v[v]      v ∈ S_1
//   t_u_v[u][v] u ∈ S_0 and v ∈ S_1
// The complementary counts t_ū and t^v_ū follow by subtraction. Merging two
// shards is plain addition.
class OneStepStats {
 public:
  OneStepStats() = default;
  explicit OneStepStats(int n);

  void add(const Cascade& cascade);
  void merge(const OneStepStats& other);

  int n() const { return n_; }
  std::uint64_t t() const { return t_; }
  std::uint64_t t_u(int u) const { return seeded_[u]; }
  std::uint64_t t_ubar(int u) const { return t_ - seeded_[u]; }
  std::uint64_t t_v(int v) const { return active1_[v]; }
  std::uint64_t t_ubar_v(int u, int v) const {
    return active1_[v] - seeded_active1_[static_cast<std::size_t>(u) * n_ + v];
  }

  double q_hat(int u) const;
  double ap_hat(int v) const;
  /// NaN when t_ū = 0.
  double ap_hat_given_not(int u, int v) const;

  OneStepMarginals marginals() const;

  friend bool operator==(const OneStepStats&, const OneStepStats&) = default;

 private:
  int n_ = 0;
  std::uint64_t t_ = 0;
  std::vector<std::uint64_t> seeded_;
  std::vector<std::uint64_t> active1_;
  std::vector<std::uint64_t> seeded_active1_;
};

// Single pass over cascades [begin, end); shards merge in index order, so
// the result does not depend on `threads`.
OneStepStats collect_stats(const CascadeDataset& dataset, std::size_t begin = 0,
                           std::size_t end = std::numeric_limits<std::size_t>::max(),
                           int threads = 0);

/// Streams a dataset file; memory is O(n^2).
OneStepStats collect_stats_from_file(const std::filesystem::path& path,
                                     DatasetHeader* header = nullptr);

enum class EstimateFlag : std::uint8_t {
  OK,
  CLAMPED_LOW,
  CLAMPED_HIGH,
  UNDEFINED_DENOMINATOR,
};

std::string to_string(EstimateFlag flag);
EstimateFlag parse_estimate_flag(const std::string& text);

// Estimated parameter for every ordered pair u != v (the diagonal stays 0
// with flag OK).
struct EstimationReport {
  Model model = Model::IC;
  int n = 0;
  std::vector<double> param_hat;
  std::vector<EstimateFlag> flags;
  std::optional<OneStepStats> stats;  // absent for exact (population) input
  double target_accuracy = 0.0;

  double param(int u, int v) const { return param_hat[static_cast<std::size_t>(u) * n + v]; }
  EstimateFlag flag(int u, int v) const { return flags[static_cast<std::size_t>(u) * n + v]; }
  std::size_t count(EstimateFlag flag) const;

  /// Graph on the pairs with nonzero estimates.
  Graph surrogate() const;
};

// p̂_uv = (âp(v) - âp(v|ū)) / (q̂_u (1 - âp(v|ū))), clamped to [0, 1].
// Zero with UNDEFINED_DENOMINATOR when q̂_u = 0, t_ū = 0 or âp(v|ū) >= 1.
EstimationReport estimate_edge_probabilities_ic(const OneStepMarginals& m,
                                                double target_accuracy = 0.0);
EstimationReport estimate_edge_probabilities_ic(const OneStepStats& stats,
                                                double target_accuracy = 0.0);

// ŵ_uv = (âp(v) - âp(v|ū)) / (q̂_u (1 - q̂_v)), clamped to [0, 1].
// Zero with UNDEFINED_DENOMINATOR when q̂_u = 0, q̂_v = 1 or t_ū = 0.
EstimationReport estimate_edge_weights_lt(const OneStepMarginals& m,
                                          double target_accuracy = 0.0);
EstimationReport estimate_edge_weights_lt(const OneStepStats& stats,
                                          double target_accuracy = 0.0);

// Pairs with p̂_uv > beta / 2. Throws std::invalid_argument unless the
// report's target accuracy is at most beta / 2.
std::vector<Edge> recover_structure(const EstimationReport& report, double beta);

struct RescaledWeights {
  std::vector<double> weights;        // n*n, ŵ / (1 + epsilon/2)
  std::vector<NodeId> unnormalized;   // nodes whose incoming sum exceeds 1
  bool normalized() const { return unnormalized.empty(); }
};

// Divides every LT estimate by (1 + epsilon/2) and reports any node whose
// rescaled incoming weights (over all candidate sources) still sum past 1.
RescaledWeights rescale_lt(const EstimationReport& report, double epsilon);

enum class AssumptionKind { A1_IC, A2_IC, A3_LT };

struct NodeAssumptionCheck {
  NodeId node = 0;
  double q_hat = 0.0;
  double ap_hat = 0.0;
  bool seed_rate_ok = true;   // gamma <= q_u <= 1 - gamma, within slack
  bool activation_ok = true;  // ap(v) <= 1 - alpha, within slack (A1 only)
};

struct AssumptionReport {
  AssumptionKind which = AssumptionKind::A1_IC;
  bool passed = true;
  std::vector<NodeAssumptionCheck> nodes;
  double expected_seed_count = 0.0;  // sum of q̂_u
  bool seed_count_ok = true;         // sum q_u <= c k, within slack (A2 only)
  // Most permissive parameters the data supports, slack included.
  double feasible_alpha = 0.0;
  double feasible_gamma = 0.0;
  double min_c = 0.0;
  std::vector<std::string> failures;
};

// Each condition is tested against the empirical q̂ and âp, allowing three
// standard errors of slack in the assumption's favor.
AssumptionReport check_assumptions(const OneStepStats& stats,
                                   const AssumptionParams& params,
                                   AssumptionKind which);

}  // namespace imfs
