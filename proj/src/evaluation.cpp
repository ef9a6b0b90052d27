#include "imfs/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "imfs/errors.hpp"
#include "imfs/graph_io.hpp"
#include "imfs/influence_max.hpp"

namespace imfs {

ParameterError parameter_error(const Graph& truth, const std::vector<double>& estimate) {
  const int n = truth.n();
  if (estimate.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("estimate matrix does not match the graph size");
  }
  ParameterError err;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      const double d = std::abs(truth.param(u, v) - estimate[static_cast<std::size_t>(u) * n + v]);
      err.max_abs = std::max(err.max_abs, d);
      err.l1 += d;
    }
  }
  return err;
}

StructureScore structure_score(const std::vector<Edge>& truth, std::vector<Edge> recovered) {
  std::vector<Edge> real = truth;
  std::sort(real.begin(), real.end());
  std::sort(recovered.begin(), recovered.end());
  recovered.erase(std::unique(recovered.begin(), recovered.end()), recovered.end());
  std::vector<Edge> common;
  std::set_intersection(real.begin(), real.end(), recovered.begin(), recovered.end(),
                        std::back_inserter(common));
  StructureScore s;
  if (!recovered.empty()) s.precision = static_cast<double>(common.size()) / recovered.size();
  if (!real.empty()) s.recall = static_cast<double>(common.size()) / real.size();
  return s;
}

void fill_spread_metrics(MetricsRecord& record, const Graph& truth, const NodeSet& chosen,
                         int k, const OracleLimits& limits, std::size_t fallback_sims,
                         std::uint64_t rng_seed) {
  try {
    record.sigma_chosen = exact_sigma(truth, chosen, limits);
    record.sigma_chosen_exact = true;
  } catch (const InstanceTooLarge&) {
    record.sigma_chosen = estimate_sigma(truth, chosen, fallback_sims, rng_seed).mean;
    record.sigma_chosen_exact = false;
  }
  try {
    record.sigma_optimal = exact_optimal_seeds(truth, k, limits).spread;
  } catch (const InstanceTooLarge& e) {
    if (!record.note.empty()) record.note += "; ";
    record.note += std::string("optimum not computed: ") + e.what();
    return;
  }
  if (record.sigma_chosen_exact && *record.sigma_optimal > 0.0) {
    record.ratio = *record.sigma_chosen / *record.sigma_optimal;
  }
}

namespace {

std::string cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Column {
  const char* name;
  std::optional<double> MetricsRecord::*field;
};

constexpr Column kColumns[] = {
    {"max_abs_error", &MetricsRecord::max_abs_error},
    {"l1_error", &MetricsRecord::l1_error},
    {"precision", &MetricsRecord::precision},
    {"recall", &MetricsRecord::recall},
    {"sigma_chosen", &MetricsRecord::sigma_chosen},
    {"sigma_optimal", &MetricsRecord::sigma_optimal},
    {"ratio", &MetricsRecord::ratio},
    {"wall_time_s", &MetricsRecord::wall_time_s},
};

double quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string metrics_csv(const std::vector<MetricsRecord>& records) {
  std::ostringstream os;
  os << kMetricsSchema << '\n' << "trial";
  for (const auto& c : kColumns) os << ',' << c.name;
  os << ",sigma_chosen_exact,note\n";
  for (const auto& r : records) {
    os << r.trial;
    for (const auto& c : kColumns) os << ',' << cell(r.*c.field);
    os << ',' << (r.sigma_chosen ? (r.sigma_chosen_exact ? "1" : "0") : "") << ','
       << csv_escape(r.note) << '\n';
  }
  return os.str();
}

std::string metrics_summary(const std::vector<MetricsRecord>& records) {
  std::ostringstream os;
  os << kMetricsSchema << " summary\n"
     << "column,count,mean,min,q10,median,q90,max\n";
  for (const auto& c : kColumns) {
    std::vector<double> values;
    for (const auto& r : records) {
      if (r.*c.field) values.push_back(*(r.*c.field));
    }
    os << c.name << ',' << values.size();
    if (values.empty()) {
      os << ",,,,,,\n";
      continue;
    }
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    os << ',' << format_double(sum / static_cast<double>(values.size()));
    for (double p : {0.0, 0.1, 0.5, 0.9, 1.0}) os << ',' << format_double(quantile(values, p));
    os << '\n';
  }
  return os.str();
}

}  // namespace imfs
