#pragma once

#include <cstdint>
#include <string>

#include "imfs/graph.hpp"

namespace imfs {

enum class SampleSizeTask {
  IcEstimation,    // p̂ within epsilon
  IcStructure,     // Ê recovered with threshold beta
  ImsIcA1,         // IMS-IC under the ap(v) <= 1 - alpha assumption
  ImsIcA2,         // IMS-IC under sum q_u <= c k (also the c = epsilon variant)
  LtEstimation,    // ŵ within epsilon
  LtRescaled,      // ŵ within epsilon / (2D), then rescaled
  ImsLt,           // IMS-LT
};

std::string to_string(SampleSizeTask task);
SampleSizeTask parse_sample_size_task(const std::string& text);

struct SampleSizeResult {
  double bound = 0.0;       // value of the formula before rounding
  std::uint64_t t = 0;      // ceil(bound), saturating
  double eta = 0.0;         // per-quantity accuracy the bound is built on
  double accuracy = 0.0;    // parameter accuracy the task needs
  std::uint64_t t_prime = 0;  // cascades reserved for âp(v) (ImsIcA2 only)
};

// Unchecked formula evaluation; any positive inputs are accepted.
SampleSizeResult sample_size_formula(SampleSizeTask task, const AssumptionParams& params,
                                     int n, int max_in_degree);

// Validates `params` (and n, D) first; throws std::invalid_argument.
SampleSizeResult sample_size(SampleSizeTask task, const AssumptionParams& params, int n,
                             int max_in_degree);

}  // namespace imfs
