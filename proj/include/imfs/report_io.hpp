#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "imfs/graph.hpp"
#include "imfs/inference.hpp"
#include "imfs/pipelines.hpp"

namespace imfs {

// {"model", "n", "target_accuracy", "param_hat": n×n, "flags": n×n,
//  "flag_counts", "stats": {"t", "q_hat", "ap_hat"}}
std::string estimation_report_to_json(const EstimationReport& report);
// Counts are not restored; `stats` stays empty.
EstimationReport estimation_report_from_json(std::string_view text);

// u,v,param_hat,flag for every ordered pair u != v.
std::string estimation_report_to_csv(const EstimationReport& report);

// from,to per line after a header.
std::string edges_to_csv(const std::vector<Edge>& edges);
std::vector<Edge> edges_from_csv(std::string_view text);

std::string ims_result_to_json(const ImsResult& result);
ImsResult ims_result_from_json(std::string_view text);

}  // namespace imfs
