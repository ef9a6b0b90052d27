#include "imfs/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "imfs/errors.hpp"
#include "imfs/graph_io.hpp"
#include "imfs/rng.hpp"
#include "imfs/sample_size.hpp"

namespace imfs {

namespace {

void check_common(const CascadeDataset& dataset, Model model, int k, const char* name) {
  if (dataset.model() != model) {
    throw ModelMismatch(std::string(name) + " needs a " + to_string(model) + " dataset, got " +
                        to_string(dataset.model()));
  }
  if (dataset.t() == 0) throw std::invalid_argument("dataset holds no cascades");
  if (k < 1 || k > dataset.n()) throw std::invalid_argument("k must lie in [1, n]");
}

void check_epsilon(double epsilon, double upper) {
  if (!(epsilon > 0.0 && epsilon < upper)) {
    std::ostringstream os;
    os << "epsilon must lie in (0, " << upper << ")";
    throw std::invalid_argument(os.str());
  }
}

// Counts flags over pairs whose target is in `targets` (all nodes if empty
// and `all` is set).
void record_flags(const EstimationReport& report, const std::vector<char>& estimated_target,
                  ImsDiagnostics& diag) {
  for (int u = 0; u < report.n; ++u) {
    for (int v = 0; v < report.n; ++v) {
      if (u == v || !estimated_target[v]) continue;
      switch (report.flag(u, v)) {
        case EstimateFlag::UNDEFINED_DENOMINATOR: ++diag.undefined_pairs; break;
        case EstimateFlag::CLAMPED_LOW: ++diag.clamped_low_pairs; break;
        case EstimateFlag::CLAMPED_HIGH: ++diag.clamped_high_pairs; break;
        case EstimateFlag::OK: break;
      }
    }
  }
}

void check_degeneracy(const ImsDiagnostics& diag, std::size_t estimated_pairs,
                      const PipelineOptions& options) {
  if (estimated_pairs == 0) return;
  const double fraction =
      static_cast<double>(diag.undefined_pairs) / static_cast<double>(estimated_pairs);
  if (fraction > options.max_undefined_fraction) {
    std::ostringstream os;
    os << diag.undefined_pairs << " of " << estimated_pairs
       << " estimated pairs have an undefined denominator (limit "
       << options.max_undefined_fraction << ")";
    throw PipelineError("estimator degenerate", os.str());
  }
}

void set_ratio(ImsDiagnostics& diag, double theoretical, std::size_t t) {
  diag.theoretical_t = theoretical;
  diag.t_ratio = theoretical > 0.0 ? static_cast<double>(t) / theoretical : 0.0;
}

NodeSet sorted_unique(NodeSet nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

ImsResult finish(Pipeline pipeline, Graph surrogate, NodeSet chosen, int k,
                 ImsDiagnostics diag) {
  ImsResult result;
  result.pipeline = pipeline;
  result.chosen.nodes = sorted_unique(std::move(chosen));
  result.chosen.budget_k = k;
  result.surrogate_graph_digest = graph_digest(surrogate);
  result.surrogate = std::move(surrogate);
  result.diagnostics = std::move(diag);
  return result;
}

// Shared first half of the two partitioned pipelines: V1/V2 split, the
// surrogate Ĝ, and T2.
struct PartitionedSurrogate {
  Graph surrogate;
  ImsDiagnostics diag;
};

PartitionedSurrogate build_partitioned_surrogate(const CascadeDataset& dataset, int k,
                                                 double epsilon, double delta,
                                                 std::size_t t_prime,
                                                 const PipelineOptions& options) {
  const int n = dataset.n();
  const std::size_t t = dataset.t();
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (t_prime < 1 || t_prime >= t) {
    throw std::invalid_argument("t_prime must lie in [1, t)");
  }
  PartitionedSurrogate out;
  ImsDiagnostics& diag = out.diag;
  diag.t_prime = t_prime;
  diag.ap_threshold = 1.0 - delta / (4.0 * n);
  diag.implied_alpha = delta / (6.0 * n);
  diag.accuracy_target = epsilon * k / (2.0 * std::pow(static_cast<double>(n), 3));
  diag.cascades_for_estimation = t - t_prime;

  const OneStepStats head = collect_stats(dataset, 0, t_prime);
  std::vector<char> in_v2(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    if (head.ap_hat(v) >= *diag.ap_threshold) {
      in_v2[v] = 1;
      diag.v2.push_back(v);
    }
  }
  diag.v1_size = static_cast<std::size_t>(n) - diag.v2.size();

  const OneStepStats tail = collect_stats(dataset, t_prime, t);
  const EstimationReport report = estimate_edge_probabilities_ic(tail, diag.accuracy_target);
  std::vector<char> in_v1(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) in_v1[v] = in_v2[v] ? 0 : 1;
  record_flags(report, in_v1, diag);
  check_degeneracy(diag, *diag.v1_size * static_cast<std::size_t>(n - 1), options);

  std::vector<double> params = report.param_hat;
  for (int v : diag.v2) {
    for (int u = 0; u < n; ++u) {
      if (u != v) params[static_cast<std::size_t>(u) * n + v] = 1.0;
    }
  }
  out.surrogate = Graph::from_matrix(n, Model::IC, std::move(params));
  diag.t2 = dataset.cascades.front().seeds();

  AssumptionParams assumed;
  assumed.epsilon = epsilon;
  assumed.delta = delta;
  assumed.k = k;
  assumed.gamma = std::max(
      check_assumptions(tail, assumed, AssumptionKind::A2_IC).feasible_gamma, 1e-12);
  set_ratio(diag, sample_size_formula(SampleSizeTask::ImsIcA2, assumed, n, 0).bound, t);
  return out;
}

}  // namespace

std::string to_string(Pipeline pipeline) {
  switch (pipeline) {
    case Pipeline::IC_A1: return "ic-a1";
    case Pipeline::IC_A2: return "ic-a2";
    case Pipeline::IC_A2_EPS: return "ic-a2-eps";
    case Pipeline::LT: return "lt";
  }
  return "?";
}

Pipeline parse_pipeline(const std::string& text) {
  for (auto p : {Pipeline::IC_A1, Pipeline::IC_A2, Pipeline::IC_A2_EPS, Pipeline::LT}) {
    if (to_string(p) == text) return p;
  }
  throw std::invalid_argument("unknown pipeline '" + text + "'");
}

ImsResult ims_ic_a1(const CascadeDataset& dataset, int k, double epsilon,
                    const ImAlgorithm& algorithm, const PipelineOptions& options) {
  check_common(dataset, Model::IC, k, "ims_ic_a1");
  check_epsilon(epsilon, 1.0);
  const int n = dataset.n();
  ImsDiagnostics diag;
  diag.accuracy_target = epsilon * k / (2.0 * std::pow(static_cast<double>(n), 3));
  diag.cascades_for_estimation = dataset.t();

  const OneStepStats stats = collect_stats(dataset);
  const EstimationReport report = estimate_edge_probabilities_ic(stats, diag.accuracy_target);
  record_flags(report, std::vector<char>(static_cast<std::size_t>(n), 1), diag);
  check_degeneracy(diag, static_cast<std::size_t>(n) * (n - 1), options);

  AssumptionParams assumed;
  assumed.epsilon = epsilon;
  assumed.delta = options.delta;
  assumed.k = k;
  const auto checked = check_assumptions(stats, assumed, AssumptionKind::A1_IC);
  assumed.alpha = std::max(checked.feasible_alpha, 1e-12);
  assumed.gamma = std::max(checked.feasible_gamma, 1e-12);
  set_ratio(diag, sample_size_formula(SampleSizeTask::ImsIcA1, assumed, n, 0).bound,
            dataset.t());

  Graph surrogate = report.surrogate();
  NodeSet chosen = algorithm(surrogate, k).nodes;
  return finish(Pipeline::IC_A1, std::move(surrogate), std::move(chosen), k, std::move(diag));
}

ImsResult ims_ic_a2(const CascadeDataset& dataset, int k, double epsilon, double delta,
                    std::size_t t_prime, const ImAlgorithm& algorithm,
                    std::uint64_t rng_seed, const PipelineOptions& options) {
  check_common(dataset, Model::IC, k, "ims_ic_a2");
  check_epsilon(epsilon, 1.0);
  auto [surrogate, diag] =
      build_partitioned_surrogate(dataset, k, epsilon, delta, t_prime, options);

  diag.t1_budget = k;
  diag.t1 = sorted_unique(algorithm(surrogate, k).nodes);
  Rng rng = stream_rng(rng_seed, 0);
  const bool pick_t1 = bernoulli(rng, 0.5);
  diag.branch = pick_t1 ? "T1" : "T2";
  NodeSet chosen = pick_t1 ? diag.t1 : diag.t2;
  if (static_cast<int>(chosen.size()) > k) {
    // Partial Fisher-Yates: the first k entries become a uniform k-subset.
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_below(rng, chosen.size() - i));
      std::swap(chosen[i], chosen[j]);
    }
    chosen.resize(static_cast<std::size_t>(k));
    diag.subsampled = true;
  }
  return finish(Pipeline::IC_A2, std::move(surrogate), std::move(chosen), k, std::move(diag));
}

ImsResult ims_ic_a2_eps(const CascadeDataset& dataset, int k, double epsilon, double delta,
                        std::size_t t_prime, const ImAlgorithm& algorithm,
                        const PipelineOptions& options) {
  check_common(dataset, Model::IC, k, "ims_ic_a2_eps");
  check_epsilon(epsilon, 1.0 / 3.0);
  auto [surrogate, diag] =
      build_partitioned_surrogate(dataset, k, epsilon, delta, t_prime, options);

  const int budget = static_cast<int>(std::floor((1.0 - 2.0 * epsilon) * k));
  diag.t1_budget = budget;
  if (budget > 0) diag.t1 = sorted_unique(algorithm(surrogate, budget).nodes);
  NodeSet chosen = diag.t1;
  chosen.insert(chosen.end(), diag.t2.begin(), diag.t2.end());
  chosen = sorted_unique(std::move(chosen));
  diag.within_budget = static_cast<int>(chosen.size()) <= k;
  return finish(Pipeline::IC_A2_EPS, std::move(surrogate), std::move(chosen), k,
                std::move(diag));
}

ImsResult ims_lt(const CascadeDataset& dataset, int k, double epsilon,
                 const ImAlgorithm& algorithm, const PipelineOptions& options) {
  check_common(dataset, Model::LT, k, "ims_lt");
  check_epsilon(epsilon, 1.0);
  const int n = dataset.n();
  const int degree = options.max_in_degree < 0 ? n - 1 : options.max_in_degree;
  if (degree < 1 || degree > n - 1) {
    throw std::invalid_argument("max in-degree bound must lie in [1, n-1]");
  }
  ImsDiagnostics diag;
  diag.max_in_degree_bound = degree;
  diag.accuracy_target =
      epsilon * k / (2.0 * degree * std::pow(static_cast<double>(n), 3));
  diag.cascades_for_estimation = dataset.t();
  diag.rescale_factor = 1.0 / (1.0 + epsilon / 2.0);

  const OneStepStats stats = collect_stats(dataset);
  const EstimationReport report = estimate_edge_weights_lt(stats, diag.accuracy_target);
  record_flags(report, std::vector<char>(static_cast<std::size_t>(n), 1), diag);
  check_degeneracy(diag, static_cast<std::size_t>(n) * (n - 1), options);

  const RescaledWeights rescaled = rescale_lt(report, epsilon);
  if (!rescaled.normalized()) {
    std::ostringstream os;
    os << "incoming rescaled weights exceed 1 at nodes";
    for (NodeId v : rescaled.unnormalized) os << ' ' << v;
    throw PipelineError("normalization check failed after rescaling", os.str());
  }

  AssumptionParams assumed;
  assumed.epsilon = epsilon;
  assumed.delta = options.delta;
  assumed.k = k;
  assumed.gamma = std::max(
      check_assumptions(stats, assumed, AssumptionKind::A3_LT).feasible_gamma, 1e-12);
  set_ratio(diag, sample_size_formula(SampleSizeTask::ImsLt, assumed, n, degree).bound,
            dataset.t());

  Graph surrogate = Graph::from_matrix(n, Model::LT, rescaled.weights);
  NodeSet chosen = algorithm(surrogate, k).nodes;
  return finish(Pipeline::LT, std::move(surrogate), std::move(chosen), k, std::move(diag));
}

}  // namespace imfs
