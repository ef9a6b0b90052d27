#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "imfs/graph.hpp"

namespace imfs {

// One observed diffusion run S_0 ⊆ S_1 ⊆ ... ⊆ S_{n-1}.
//
// Stored as the nodes newly activated at each step up to the last step that
// changed anything (`stable_at`); every later S_τ equals S_{stable_at}.
class Cascade {
 public:
  Cascade() = default;

  // `deltas[τ]` holds the nodes first active at step τ. Trailing empty steps
  // are dropped. Throws std::invalid_argument when a node is out of range or
  // repeated, or when a nonempty step follows an empty one.
  Cascade(int n, const std::vector<NodeSet>& deltas);

  // Flat form used by the simulators: `nodes` lists each step's new nodes
  // (sorted within the step), `ends[τ]` is one past step τ's last entry.
  // Only the shape is checked.
  static Cascade from_flat(int n, std::vector<NodeId> nodes,
                           std::vector<std::uint32_t> ends);

  int n() const { return n_; }
  int stable_at() const { return static_cast<int>(ends_.size()) - 1; }

  /// Nodes first active at `step`; empty past stable_at().
  std::span<const NodeId> new_at(int step) const;

  /// Cumulative active set S_step, sorted.
  NodeSet active_at(int step) const;
  NodeSet seeds() const { return active_at(0); }
  NodeSet final_set() const { return active_at(stable_at()); }
  std::size_t final_size() const { return nodes_.size(); }

  /// Per-step deltas, as stored.
  std::vector<NodeSet> deltas() const;

  friend bool operator==(const Cascade&, const Cascade&) = default;

 private:
  int n_ = 0;
  std::vector<NodeId> nodes_;
  std::vector<std::uint32_t> ends_{0};
};

struct DatasetHeader {
  std::string graph_digest;
  std::string seed_dist_digest;
  Model model = Model::IC;
  std::uint64_t rng_seed = 0;
  std::size_t t = 0;
  int n = 0;
  friend bool operator==(const DatasetHeader&, const DatasetHeader&) = default;
};

struct CascadeDataset {
  DatasetHeader header;
  std::vector<Cascade> cascades;

  std::size_t t() const { return cascades.size(); }
  int n() const { return header.n; }
  Model model() const { return header.model; }
};

// Line-oriented file: a JSON header line, then one
// {"steps": [[...], ...], "stable_at": τ} line per cascade.
std::string dataset_header_line(const DatasetHeader& header);
std::string cascade_line(const Cascade& cascade);
DatasetHeader parse_dataset_header(const std::string& line);
Cascade parse_cascade_line(const std::string& line, int n);

std::string serialize_dataset(const CascadeDataset& dataset);
void save_dataset(const CascadeDataset& dataset, const std::filesystem::path& path);
CascadeDataset load_dataset(const std::filesystem::path& path);

// Streams cascades from a dataset file without holding them all.
class DatasetReader {
 public:
  explicit DatasetReader(const std::filesystem::path& path);
  const DatasetHeader& header() const { return header_; }
  bool next(Cascade& out);

 private:
  std::ifstream in_;
  DatasetHeader header_;
  std::string line_;
  std::size_t read_ = 0;
};

}  // namespace imfs
