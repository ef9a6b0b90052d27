#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imfs/cascade.hpp"
#include "imfs/graph.hpp"
#include "imfs/influence_max.hpp"
#include "imfs/inference.hpp"

namespace imfs {

// Influence maximization from samples: learn a surrogate graph from the
// cascades, then run a black-box IM algorithm on it.

enum class Pipeline { IC_A1, IC_A2, IC_A2_EPS, LT };

std::string to_string(Pipeline pipeline);
Pipeline parse_pipeline(const std::string& text);

struct PipelineOptions {
  // Fail when more than this fraction of the estimated pairs is
  // UNDEFINED_DENOMINATOR.
  double max_undefined_fraction = 0.5;
  // Failure probability used only for the reported theoretical sample size
  // (the A2 pipelines take their own delta).
  double delta = 0.1;
  // Upper bound on the true maximum in-degree for IMS-LT; < 0 means n - 1.
  int max_in_degree = -1;
};

struct ImsDiagnostics {
  double accuracy_target = 0.0;
  std::size_t cascades_for_estimation = 0;
  std::size_t undefined_pairs = 0;
  std::size_t clamped_low_pairs = 0;
  std::size_t clamped_high_pairs = 0;
  // Sample size the guarantee asks for, using the assumption parameters the
  // data supports, and t divided by it.
  double theoretical_t = 0.0;
  double t_ratio = 0.0;

  // Partitioned pipelines.
  std::optional<std::size_t> t_prime;
  std::optional<double> ap_threshold;
  NodeSet v2;                        // nodes with âp(v) >= threshold
  std::optional<std::size_t> v1_size;
  std::optional<double> implied_alpha;
  NodeSet t1;                        // A(Ĝ, budget)
  NodeSet t2;                        // seed set of the first cascade
  std::optional<int> t1_budget;
  std::optional<std::string> branch;  // "T1" or "T2" (IC_A2)
  bool subsampled = false;
  std::optional<bool> within_budget;  // |S^A| <= k (IC_A2_EPS)

  // IMS-LT.
  std::optional<int> max_in_degree_bound;
  std::optional<double> rescale_factor;
};

struct ImsResult {
  Pipeline pipeline = Pipeline::IC_A1;
  SeedSet chosen;
  Graph surrogate;
  std::string surrogate_graph_digest;
  ImsDiagnostics diagnostics;
};

// Estimates every p_uv to accuracy εk/(2n^3) and returns A(Ĝ, k).
ImsResult ims_ic_a1(const CascadeDataset& dataset, int k, double epsilon,
                    const ImAlgorithm& algorithm, const PipelineOptions& options = {});

// Splits nodes by âp(v) on the first t_prime cascades: V2 = {âp(v) >=
// 1 - δ/(4n)} gets every incoming probability forced to 1, V1's incoming
// probabilities are estimated from the remaining cascades. A fair coin
// (stream_rng(rng_seed, 0)) picks T1 = A(Ĝ, k) or T2 = S_{1,0}; a T2 larger
// than k is replaced by a uniform k-subset.
ImsResult ims_ic_a2(const CascadeDataset& dataset, int k, double epsilon, double delta,
                    std::size_t t_prime, const ImAlgorithm& algorithm,
                    std::uint64_t rng_seed, const PipelineOptions& options = {});

// As ims_ic_a2 up to Ĝ, then returns A(Ĝ, floor((1-2ε)k)) ∪ S_{1,0}.
// Requires ε ∈ (0, 1/3).
ImsResult ims_ic_a2_eps(const CascadeDataset& dataset, int k, double epsilon,
                        double delta, std::size_t t_prime,
                        const ImAlgorithm& algorithm,
                        const PipelineOptions& options = {});

// Estimates w to accuracy εk/(2Dn^3), rescales by 1/(1+ε/2) and returns
// A(G', k). Throws PipelineError naming the nodes if the rescaled weights
// are not normalized.
ImsResult ims_lt(const CascadeDataset& dataset, int k, double epsilon,
                 const ImAlgorithm& algorithm, const PipelineOptions& options = {});

}  // namespace imfs
