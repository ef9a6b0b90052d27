#include "imfs/graph_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace imfs {

using nlohmann::json;

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string graph_to_json(const Graph& graph) {
  std::string out = "{\"n\": " + std::to_string(graph.n()) + ", \"model\": \"" +
                    to_string(graph.model()) + "\", \"edges\": [";
  bool first = true;
  for (const WeightedEdge& e : graph.weighted_edges()) {
    if (!first) out += ", ";
    first = false;
    out += "[" + std::to_string(e.from) + ", " + std::to_string(e.to) + ", " +
           format_double(e.param) + "]";
  }
  out += "]}\n";
  return out;
}

Graph graph_from_json(std::string_view text) {
  const json doc = json::parse(text);
  const int n = doc.at("n").get<int>();
  const Model model = parse_model(doc.at("model").get<std::string>());
  std::vector<WeightedEdge> edges;
  for (const json& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 3) {
      throw std::invalid_argument("graph edge entries must be [u, v, param]");
    }
    edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>(), e[2].get<double>()});
  }
  return Graph::from_weighted_edges(n, model, edges);
}

std::string seed_distribution_to_json(const SeedDistribution& dist) {
  std::string out = "{\"q\": [";
  for (std::size_t i = 0; i < dist.q.size(); ++i) {
    if (i) out += ", ";
    out += format_double(dist.q[i]);
  }
  out += "]}\n";
  return out;
}

SeedDistribution seed_distribution_from_json(std::string_view text) {
  const json doc = json::parse(text);
  return SeedDistribution(doc.at("q").get<std::vector<double>>());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void save_graph(const Graph& graph, const std::filesystem::path& path) {
  write_file(path, graph_to_json(graph));
}

Graph load_graph(const std::filesystem::path& path) {
  return graph_from_json(read_file(path));
}

void save_seed_distribution(const SeedDistribution& dist,
                            const std::filesystem::path& path) {
  write_file(path, seed_distribution_to_json(dist));
}

SeedDistribution load_seed_distribution(const std::filesystem::path& path) {
  return seed_distribution_from_json(read_file(path));
}

std::string digest_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string graph_digest(const Graph& graph) {
  return digest_hex(graph_to_json(graph));
}

std::string seed_distribution_digest(const SeedDistribution& dist) {
  return digest_hex(seed_distribution_to_json(dist));
}

}  // namespace imfs
