#include "imfs/report_io.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "imfs/graph_io.hpp"

namespace imfs {

using nlohmann::json;

namespace {

json node_list(const NodeSet& nodes) {
  json out = json::array();
  for (NodeId v : nodes) out.push_back(v);
  return out;
}

NodeSet read_nodes(const json& j) {
  NodeSet out;
  for (const auto& v : j) out.push_back(v.get<NodeId>());
  return out;
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& value) {
  if (value) j[key] = *value;
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

std::string estimation_report_to_json(const EstimationReport& report) {
  const int n = report.n;
  json j;
  j["model"] = to_string(report.model);
  j["n"] = n;
  j["target_accuracy"] = report.target_accuracy;
  json params = json::array();
  json flags = json::array();
  for (int u = 0; u < n; ++u) {
    json prow = json::array();
    json frow = json::array();
    for (int v = 0; v < n; ++v) {
      prow.push_back(report.param(u, v));
      frow.push_back(to_string(report.flag(u, v)));
    }
    params.push_back(std::move(prow));
    flags.push_back(std::move(frow));
  }
  j["param_hat"] = std::move(params);
  j["flags"] = std::move(flags);
  json counts = json::object();
  for (auto f : {EstimateFlag::OK, EstimateFlag::CLAMPED_LOW, EstimateFlag::CLAMPED_HIGH,
                 EstimateFlag::UNDEFINED_DENOMINATOR}) {
    std::size_t c = 0;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u != v && report.flag(u, v) == f) ++c;
      }
    }
    counts[to_string(f)] = c;
  }
  j["flag_counts"] = std::move(counts);
  if (report.stats) {
    json stats;
    stats["t"] = report.stats->t();
    json q = json::array();
    json ap = json::array();
    for (int v = 0; v < n; ++v) {
      q.push_back(report.stats->q_hat(v));
      ap.push_back(report.stats->ap_hat(v));
    }
    stats["q_hat"] = std::move(q);
    stats["ap_hat"] = std::move(ap);
    j["stats"] = std::move(stats);
  }
  return j.dump(1) + "\n";
}

EstimationReport estimation_report_from_json(std::string_view text) {
  const json j = json::parse(text);
  EstimationReport report;
  report.model = parse_model(j.at("model").get<std::string>());
  report.n = j.at("n").get<int>();
  report.target_accuracy = j.at("target_accuracy").get<double>();
  const int n = report.n;
  if (n < 0) throw std::invalid_argument("report: negative n");
  const auto& params = j.at("param_hat");
  const auto& flags = j.at("flags");
  if (params.size() != static_cast<std::size_t>(n) || flags.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("report: matrix size does not match n");
  }
  report.param_hat.reserve(static_cast<std::size_t>(n) * n);
  report.flags.reserve(static_cast<std::size_t>(n) * n);
  for (int u = 0; u < n; ++u) {
    if (params[u].size() != static_cast<std::size_t>(n) ||
        flags[u].size() != static_cast<std::size_t>(n)) {
      throw std::invalid_argument("report: matrix size does not match n");
    }
    for (int v = 0; v < n; ++v) {
      report.param_hat.push_back(params[u][v].get<double>());
      report.flags.push_back(parse_estimate_flag(flags[u][v].get<std::string>()));
    }
  }
  return report;
}

std::string estimation_report_to_csv(const EstimationReport& report) {
  std::ostringstream os;
  os << "u,v,param_hat,flag\n";
  for (int u = 0; u < report.n; ++u) {
    for (int v = 0; v < report.n; ++v) {
      if (u == v) continue;
      os << u << ',' << v << ',' << format_double(report.param(u, v)) << ','
         << to_string(report.flag(u, v)) << '\n';
    }
  }
  return os.str();
}

std::string edges_to_csv(const std::vector<Edge>& edges) {
  std::ostringstream os;
  os << "from,to\n";
  for (const Edge& e : edges) os << e.from << ',' << e.to << '\n';
  return os.str();
}

std::vector<Edge> edges_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Edge> edges;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("from", 0) == 0) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("edge list: bad line '" + line + "'");
    edges.push_back({static_cast<NodeId>(std::stoi(line.substr(0, comma))),
                     static_cast<NodeId>(std::stoi(line.substr(comma + 1)))});
  }
  return edges;
}

std::string ims_result_to_json(const ImsResult& result) {
  const ImsDiagnostics& d = result.diagnostics;
  json diag;
  diag["accuracy_target"] = d.accuracy_target;
  diag["cascades_for_estimation"] = d.cascades_for_estimation;
  diag["undefined_pairs"] = d.undefined_pairs;
  diag["clamped_low_pairs"] = d.clamped_low_pairs;
  diag["clamped_high_pairs"] = d.clamped_high_pairs;
  diag["theoretical_t"] = d.theoretical_t;
  diag["t_ratio"] = d.t_ratio;
  put_optional(diag, "t_prime", d.t_prime);
  put_optional(diag, "ap_threshold", d.ap_threshold);
  if (d.v1_size) {
    diag["v1_size"] = *d.v1_size;
    diag["v2"] = node_list(d.v2);
    diag["v2_size"] = d.v2.size();
  }
  put_optional(diag, "implied_alpha", d.implied_alpha);
  if (d.t1_budget) {
    diag["t1_budget"] = *d.t1_budget;
    diag["t1"] = node_list(d.t1);
    diag["t2"] = node_list(d.t2);
    diag["t2_size"] = d.t2.size();
  }
  put_optional(diag, "branch", d.branch);
  diag["subsampled"] = d.subsampled;
  put_optional(diag, "within_budget", d.within_budget);
  put_optional(diag, "max_in_degree_bound", d.max_in_degree_bound);
  put_optional(diag, "rescale_factor", d.rescale_factor);

  json j;
  j["pipeline"] = to_string(result.pipeline);
  j["k"] = result.chosen.budget_k;
  j["chosen"] = node_list(result.chosen.nodes);
  j["surrogate_graph_digest"] = result.surrogate_graph_digest;
  j["diagnostics"] = std::move(diag);
  j["surrogate"] = json::parse(graph_to_json(result.surrogate));
  return j.dump(1) + "\n";
}

ImsResult ims_result_from_json(std::string_view text) {
  const json j = json::parse(text);
  ImsResult result;
  result.pipeline = parse_pipeline(j.at("pipeline").get<std::string>());
  result.chosen.budget_k = j.at("k").get<int>();
  result.chosen.nodes = read_nodes(j.at("chosen"));
  result.surrogate_graph_digest = j.at("surrogate_graph_digest").get<std::string>();
  result.surrogate = graph_from_json(j.at("surrogate").dump());

  const json& diag = j.at("diagnostics");
  ImsDiagnostics& d = result.diagnostics;
  d.accuracy_target = diag.at("accuracy_target").get<double>();
  d.cascades_for_estimation = diag.at("cascades_for_estimation").get<std::size_t>();
  d.undefined_pairs = diag.at("undefined_pairs").get<std::size_t>();
  d.clamped_low_pairs = diag.at("clamped_low_pairs").get<std::size_t>();
  d.clamped_high_pairs = diag.at("clamped_high_pairs").get<std::size_t>();
  d.theoretical_t = diag.at("theoretical_t").get<double>();
  d.t_ratio = diag.at("t_ratio").get<double>();
  d.t_prime = get_optional<std::size_t>(diag, "t_prime");
  d.ap_threshold = get_optional<double>(diag, "ap_threshold");
  d.v1_size = get_optional<std::size_t>(diag, "v1_size");
  if (diag.contains("v2")) d.v2 = read_nodes(diag.at("v2"));
  d.implied_alpha = get_optional<double>(diag, "implied_alpha");
  d.t1_budget = get_optional<int>(diag, "t1_budget");
  if (diag.contains("t1")) d.t1 = read_nodes(diag.at("t1"));
  if (diag.contains("t2")) d.t2 = read_nodes(diag.at("t2"));
  d.branch = get_optional<std::string>(diag, "branch");
  d.subsampled = diag.at("subsampled").get<bool>();
  d.within_budget = get_optional<bool>(diag, "within_budget");
  d.max_in_degree_bound = get_optional<int>(diag, "max_in_degree_bound");
  d.rescale_factor = get_optional<double>(diag, "rescale_factor");
  return result;
}

}  // namespace imfs
