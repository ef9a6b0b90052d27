#include "imfs/inference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "imfs/errors.hpp"
#include "imfs/parallel.hpp"

namespace imfs {

namespace {

constexpr double kNormalizationTolerance = 1e-12;
constexpr double kSlackStandardErrors = 3.0;

// Applies `raw_estimate(u, v)` to every off-diagonal pair, clamping to
// [0, 1]; `defined(u, v)` false yields 0 with UNDEFINED_DENOMINATOR.
template <typename Defined, typename Raw>
EstimationReport fill_report(Model model, int n, double target_accuracy,
                             Defined&& defined, Raw&& raw_estimate) {
  EstimationReport report;
  report.model = model;
  report.n = n;
  report.target_accuracy = target_accuracy;
  report.param_hat.assign(static_cast<std::size_t>(n) * n, 0.0);
  report.flags.assign(static_cast<std::size_t>(n) * n, EstimateFlag::OK);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      const std::size_t idx = static_cast<std::size_t>(u) * n + v;
      if (!defined(u, v)) {
        report.flags[idx] = EstimateFlag::UNDEFINED_DENOMINATOR;
        continue;
      }
      const double raw = raw_estimate(u, v);
      if (raw < 0.0) {
        report.flags[idx] = EstimateFlag::CLAMPED_LOW;
      } else if (raw > 1.0) {
        report.param_hat[idx] = 1.0;
        report.flags[idx] = EstimateFlag::CLAMPED_HIGH;
      } else {
        report.param_hat[idx] = raw;
      }
    }
  }
  return report;
}

}  // namespace

OneStepStats::OneStepStats(int n)
    : n_(n),
      seeded_(static_cast<std::size_t>(n), 0),
      active1_(static_cast<std::size_t>(n), 0),
      seeded_active1_(static_cast<std::size_t>(n) * n, 0) {}

void OneStepStats::add(const Cascade& cascade) {
  if (cascade.n() != n_) throw std::invalid_argument("cascade node count mismatch");
  ++t_;
  const auto seeds = cascade.new_at(0);
  const auto step1 = cascade.new_at(1);
  for (NodeId u : seeds) ++seeded_[u];
  for (NodeId v : seeds) ++active1_[v];
  for (NodeId v : step1) ++active1_[v];
  for (NodeId u : seeds) {
    std::uint64_t* row = seeded_active1_.data() + static_cast<std::size_t>(u) * n_;
    for (NodeId v : seeds) ++row[v];
    for (NodeId v : step1) ++row[v];
  }
}

void OneStepStats::merge(const OneStepStats& other) {
  if (other.n_ != n_) throw std::invalid_argument("cannot merge stats of different sizes");
  t_ += other.t_;
  for (std::size_t i = 0; i < seeded_.size(); ++i) {
    seeded_[i] += other.seeded_[i];
    active1_[i] += other.active1_[i];
  }
  for (std::size_t i = 0; i < seeded_active1_.size(); ++i) {
    seeded_active1_[i] += other.seeded_active1_[i];
  }
}

double OneStepStats::q_hat(int u) const {
  return t_ == 0 ? 0.0 : static_cast<double>(seeded_[u]) / static_cast<double>(t_);
}

double OneStepStats::ap_hat(int v) const {
  return t_ == 0 ? 0.0 : static_cast<double>(active1_[v]) / static_cast<double>(t_);
}

double OneStepStats::ap_hat_given_not(int u, int v) const {
  const std::uint64_t denom = t_ubar(u);
  if (denom == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(t_ubar_v(u, v)) / static_cast<double>(denom);
}

OneStepMarginals OneStepStats::marginals() const {
  OneStepMarginals m;
  m.n = n_;
  m.q.resize(static_cast<std::size_t>(n_));
  m.ap.resize(static_cast<std::size_t>(n_));
  m.ap_not.assign(static_cast<std::size_t>(n_) * n_, 0.0);
  m.ap_not_defined.assign(static_cast<std::size_t>(n_) * n_, 0);
  for (int u = 0; u < n_; ++u) {
    m.q[u] = q_hat(u);
    m.ap[u] = ap_hat(u);
  }
  for (int u = 0; u < n_; ++u) {
    if (t_ubar(u) == 0) continue;
    for (int v = 0; v < n_; ++v) {
      const std::size_t idx = static_cast<std::size_t>(u) * n_ + v;
      m.ap_not[idx] = ap_hat_given_not(u, v);
      m.ap_not_defined[idx] = 1;
    }
  }
  return m;
}

OneStepStats collect_stats(const CascadeDataset& dataset, std::size_t begin,
                           std::size_t end, int threads) {
  end = std::min(end, dataset.t());
  if (begin > end) throw std::invalid_argument("empty or inverted cascade range");
  const std::size_t count = end - begin;
  if (threads <= 0) threads = default_thread_count();
  const std::size_t shards =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(threads), count));
  std::vector<OneStepStats> partial(shards, OneStepStats(dataset.n()));
  const std::size_t chunk = (count + shards - 1) / std::max<std::size_t>(shards, 1);
  parallel_chunks(shards, threads, [&](std::size_t s0, std::size_t s1) {
    for (std::size_t s = s0; s < s1; ++s) {
      const std::size_t lo = begin + s * chunk;
      const std::size_t hi = std::min(end, lo + chunk);
      for (std::size_t i = lo; i < hi; ++i) partial[s].add(dataset.cascades[i]);
    }
  });
  OneStepStats total(dataset.n());
  for (const auto& p : partial) total.merge(p);
  return total;
}

OneStepStats collect_stats_from_file(const std::filesystem::path& path,
                                     DatasetHeader* header) {
  DatasetReader reader(path);
  if (header) *header = reader.header();
  OneStepStats stats(reader.header().n);
  Cascade c;
  while (reader.next(c)) stats.add(c);
  return stats;
}

std::string to_string(EstimateFlag flag) {
  switch (flag) {
    case EstimateFlag::OK: return "OK";
    case EstimateFlag::CLAMPED_LOW: return "CLAMPED_LOW";
    case EstimateFlag::CLAMPED_HIGH: return "CLAMPED_HIGH";
    case EstimateFlag::UNDEFINED_DENOMINATOR: return "UNDEFINED_DENOMINATOR";
  }
  return "?";
}

EstimateFlag parse_estimate_flag(const std::string& text) {
  for (EstimateFlag f : {EstimateFlag::OK, EstimateFlag::CLAMPED_LOW,
                         EstimateFlag::CLAMPED_HIGH, EstimateFlag::UNDEFINED_DENOMINATOR}) {
    if (to_string(f) == text) return f;
  }
  throw std::invalid_argument("unknown estimate flag '" + text + "'");
}

std::size_t EstimationReport::count(EstimateFlag flag) const {
  std::size_t total = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && this->flag(u, v) == flag) ++total;
    }
  }
  return total;
}

Graph EstimationReport::surrogate() const {
  return Graph::from_matrix(n, model, param_hat);
}

EstimationReport estimate_edge_probabilities_ic(const OneStepMarginals& m,
                                                double target_accuracy) {
  return fill_report(
      Model::IC, m.n, target_accuracy,
      [&](int u, int v) {
        return m.q[u] > 0.0 && m.defined(u, v) && m.ap_given_not(u, v) < 1.0;
      },
      [&](int u, int v) {
        const double cond = m.ap_given_not(u, v);
        return (m.ap[v] - cond) / (m.q[u] * (1.0 - cond));
      });
}

EstimationReport estimate_edge_probabilities_ic(const OneStepStats& stats,
                                                double target_accuracy) {
  auto report = estimate_edge_probabilities_ic(stats.marginals(), target_accuracy);
  report.stats = stats;
  return report;
}

EstimationReport estimate_edge_weights_lt(const OneStepMarginals& m,
                                          double target_accuracy) {
  return fill_report(
      Model::LT, m.n, target_accuracy,
      [&](int u, int v) { return m.q[u] > 0.0 && m.q[v] < 1.0 && m.defined(u, v); },
      [&](int u, int v) {
        return (m.ap[v] - m.ap_given_not(u, v)) / (m.q[u] * (1.0 - m.q[v]));
      });
}

EstimationReport estimate_edge_weights_lt(const OneStepStats& stats,
                                          double target_accuracy) {
  auto report = estimate_edge_weights_lt(stats.marginals(), target_accuracy);
  report.stats = stats;
  return report;
}

std::vector<Edge> recover_structure(const EstimationReport& report, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(report.target_accuracy <= beta / 2.0)) {
    std::ostringstream os;
    os << "structure recovery needs estimation accuracy <= beta/2 = " << beta / 2.0
       << ", report targets " << report.target_accuracy;
    throw std::invalid_argument(os.str());
  }
  std::vector<Edge> edges;
  for (int u = 0; u < report.n; ++u) {
    for (int v = 0; v < report.n; ++v) {
      if (u != v && report.param(u, v) > beta / 2.0) edges.push_back({u, v});
    }
  }
  return edges;
}

RescaledWeights rescale_lt(const EstimationReport& report, double epsilon) {
  if (report.model != Model::LT) throw ModelMismatch("rescaling applies to LT weight estimates");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  RescaledWeights out;
  out.weights = report.param_hat;
  const double scale = 1.0 + epsilon / 2.0;
  for (double& w : out.weights) w /= scale;
  const int n = report.n;
  for (int v = 0; v < n; ++v) {
    double total = 0.0;
    for (int u = 0; u < n; ++u) total += out.weights[static_cast<std::size_t>(u) * n + v];
    if (total > 1.0 + kNormalizationTolerance) out.unnormalized.push_back(v);
  }
  return out;
}

AssumptionReport check_assumptions(const OneStepStats& stats, const AssumptionParams& params,
                                   AssumptionKind which) {
  AssumptionReport report;
  report.which = which;
  const int n = stats.n();
  const double t = static_cast<double>(std::max<std::uint64_t>(stats.t(), 1));
  auto std_error = [t](double p) { return std::sqrt(std::max(0.0, p * (1.0 - p)) / t); };

  double alpha = 1.0;
  double gamma = 0.5;
  double variance_sum = 0.0;
  for (int u = 0; u < n; ++u) {
    NodeAssumptionCheck node;
    node.node = u;
    node.q_hat = stats.q_hat(u);
    node.ap_hat = stats.ap_hat(u);
    const double q_slack = kSlackStandardErrors * std_error(node.q_hat);
    const double ap_slack = kSlackStandardErrors * std_error(node.ap_hat);
    node.seed_rate_ok = node.q_hat + q_slack >= params.gamma &&
                        node.q_hat - q_slack <= 1.0 - params.gamma;
    if (which == AssumptionKind::A1_IC) {
      node.activation_ok = node.ap_hat - ap_slack <= 1.0 - params.alpha;
      alpha = std::min(alpha, 1.0 - node.ap_hat + ap_slack);
    }
    gamma = std::min(gamma, std::min(node.q_hat, 1.0 - node.q_hat) + q_slack);
    report.expected_seed_count += node.q_hat;
    variance_sum += node.q_hat * (1.0 - node.q_hat);
    if (!node.seed_rate_ok) {
      report.failures.push_back("seed rate of node " + std::to_string(u) +
                                " outside [gamma, 1 - gamma]");
    }
    if (!node.activation_ok) {
      report.failures.push_back("one-step activation of node " + std::to_string(u) +
                                " exceeds 1 - alpha");
    }
    report.nodes.push_back(node);
  }
  report.feasible_alpha = std::clamp(alpha, 0.0, 1.0);
  report.feasible_gamma = std::clamp(gamma, 0.0, 0.5);
  const double sum_slack = kSlackStandardErrors * std::sqrt(variance_sum / t);
  report.min_c = std::max(0.0, report.expected_seed_count - sum_slack) / std::max(params.k, 1);
  if (which == AssumptionKind::A2_IC) {
    report.seed_count_ok =
        report.expected_seed_count - sum_slack <= params.c * static_cast<double>(params.k);
    if (!report.seed_count_ok) {
      report.failures.push_back("expected seed-set size exceeds c * k");
    }
  }
  report.passed = report.failures.empty();
  return report;
}

}  // namespace imfs
