#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imfs/graph.hpp"
#include "imfs/oracle.hpp"

namespace imfs {

struct ParameterError {
  double max_abs = 0.0;
  double l1 = 0.0;
};

// Over every ordered pair u != v; non-edges count as parameter 0.
ParameterError parameter_error(const Graph& truth, const std::vector<double>& estimate);

struct StructureScore {
  double precision = 1.0;  // 1 when nothing was recovered
  double recall = 1.0;     // 1 when the true graph has no edges
};

StructureScore structure_score(const std::vector<Edge>& truth, std::vector<Edge> recovered);

struct MetricsRecord {
  std::size_t trial = 0;
  std::optional<double> max_abs_error;
  std::optional<double> l1_error;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> sigma_chosen;
  bool sigma_chosen_exact = false;
  std::optional<double> sigma_optimal;
  std::optional<double> ratio;
  std::optional<double> wall_time_s;
  std::string note;
};

inline constexpr const char* kMetricsSchema = "# imfs-metrics v1";

// Fills the spread columns: σ(chosen) exactly when enumeration fits in
// `limits`, otherwise from `fallback_sims` Monte-Carlo runs; σ(S*) and the
// ratio only when the optimum is exactly computable.
void fill_spread_metrics(MetricsRecord& record, const Graph& truth, const NodeSet& chosen,
                         int k, const OracleLimits& limits, std::size_t fallback_sims,
                         std::uint64_t rng_seed);

// Schema comment line, column header, one row per record; empty cells for
// absent values.
std::string metrics_csv(const std::vector<MetricsRecord>& records);

// Quantiles (min, 10%, median, 90%, max) and mean of each numeric column.
std::string metrics_summary(const std::vector<MetricsRecord>& records);

}  // namespace imfs
