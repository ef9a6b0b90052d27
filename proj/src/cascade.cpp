#include "imfs/cascade.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "imfs/graph_io.hpp"

namespace imfs {

using nlohmann::json;

Cascade::Cascade(int n, const std::vector<NodeSet>& deltas) : n_(n) {
  std::size_t last = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!deltas[i].empty()) last = i;
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  ends_.clear();
  for (std::size_t step = 0; step <= last && step < deltas.size(); ++step) {
    if (step > 0 && deltas[step].empty()) {
      throw std::invalid_argument("cascade activates nodes after stabilizing");
    }
    NodeSet sorted = deltas[step];
    std::sort(sorted.begin(), sorted.end());
    for (NodeId v : sorted) {
      if (v < 0 || v >= n) {
        throw std::invalid_argument("cascade node " + std::to_string(v) + " out of range");
      }
      if (seen[v]) {
        throw std::invalid_argument("cascade activates node " + std::to_string(v) + " twice");
      }
      seen[v] = 1;
      nodes_.push_back(v);
    }
    ends_.push_back(static_cast<std::uint32_t>(nodes_.size()));
  }
  if (ends_.empty()) ends_.push_back(0);
  if (static_cast<int>(ends_.size()) > std::max(n, 1)) {
    throw std::invalid_argument("cascade longer than n steps");
  }
}

Cascade Cascade::from_flat(int n, std::vector<NodeId> nodes,
                           std::vector<std::uint32_t> ends) {
  if (ends.empty() || ends.back() != nodes.size()) {
    throw std::invalid_argument("malformed flat cascade");
  }
  Cascade c;
  c.n_ = n;
  c.nodes_ = std::move(nodes);
  c.ends_ = std::move(ends);
  return c;
}

std::span<const NodeId> Cascade::new_at(int step) const {
  if (step < 0 || step > stable_at()) return {};
  const std::uint32_t begin = step == 0 ? 0 : ends_[step - 1];
  return {nodes_.data() + begin, ends_[step] - begin};
}

NodeSet Cascade::active_at(int step) const {
  if (step < 0) throw std::out_of_range("negative cascade step");
  const int clamped = std::min(step, stable_at());
  NodeSet out(nodes_.begin(), nodes_.begin() + ends_[clamped]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeSet> Cascade::deltas() const {
  std::vector<NodeSet> out;
  for (int s = 0; s <= stable_at(); ++s) {
    auto span = new_at(s);
    out.emplace_back(span.begin(), span.end());
  }
  return out;
}

std::string dataset_header_line(const DatasetHeader& h) {
  std::ostringstream os;
  os << "{\"graph_digest\": \"" << h.graph_digest << "\", \"seed_dist_digest\": \""
     << h.seed_dist_digest << "\", \"model\": \"" << to_string(h.model)
     << "\", \"rng_seed\": " << h.rng_seed << ", \"t\": " << h.t << ", \"n\": " << h.n
     << "}";
  return os.str();
}

std::string cascade_line(const Cascade& cascade) {
  std::string out = "{\"steps\": [";
  for (int s = 0; s <= cascade.stable_at(); ++s) {
    if (s) out += ", ";
    out += '[';
    bool first = true;
    for (NodeId v : cascade.new_at(s)) {
      if (!first) out += ", ";
      first = false;
      out += std::to_string(v);
    }
    out += ']';
  }
  out += "], \"stable_at\": " + std::to_string(cascade.stable_at()) + "}";
  return out;
}

DatasetHeader parse_dataset_header(const std::string& line) {
  const json doc = json::parse(line);
  DatasetHeader h;
  h.graph_digest = doc.at("graph_digest").get<std::string>();
  h.seed_dist_digest = doc.at("seed_dist_digest").get<std::string>();
  h.model = parse_model(doc.at("model").get<std::string>());
  h.rng_seed = doc.at("rng_seed").get<std::uint64_t>();
  h.t = doc.at("t").get<std::size_t>();
  h.n = doc.at("n").get<int>();
  return h;
}

Cascade parse_cascade_line(const std::string& line, int n) {
  const json doc = json::parse(line);
  auto deltas = doc.at("steps").get<std::vector<NodeSet>>();
  Cascade cascade(n, deltas);
  if (doc.contains("stable_at") && doc["stable_at"].get<int>() != cascade.stable_at()) {
    throw std::invalid_argument("cascade stable_at disagrees with its steps");
  }
  return cascade;
}

std::string serialize_dataset(const CascadeDataset& dataset) {
  std::string out = dataset_header_line(dataset.header);
  out += '\n';
  for (const Cascade& c : dataset.cascades) {
    out += cascade_line(c);
    out += '\n';
  }
  return out;
}

void save_dataset(const CascadeDataset& dataset, const std::filesystem::path& path) {
  write_file(path, serialize_dataset(dataset));
}

CascadeDataset load_dataset(const std::filesystem::path& path) {
  DatasetReader reader(path);
  CascadeDataset dataset;
  dataset.header = reader.header();
  dataset.cascades.reserve(dataset.header.t);
  Cascade c;
  while (reader.next(c)) dataset.cascades.push_back(std::move(c));
  return dataset;
}

DatasetReader::DatasetReader(const std::filesystem::path& path) : in_(path) {
  if (!in_) throw std::runtime_error("cannot open dataset " + path.string());
  if (!std::getline(in_, line_)) {
    throw std::runtime_error("dataset " + path.string() + " has no header");
  }
  header_ = parse_dataset_header(line_);
}

bool DatasetReader::next(Cascade& out) {
  while (std::getline(in_, line_)) {
    if (line_.empty()) continue;
    out = parse_cascade_line(line_, header_.n);
    ++read_;
    return true;
  }
  if (read_ != header_.t) {
    throw std::runtime_error("dataset header promises " + std::to_string(header_.t) +
                             " cascades, file holds " + std::to_string(read_));
  }
  return false;
}

}  // namespace imfs
