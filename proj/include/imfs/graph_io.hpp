#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "imfs/graph.hpp"

namespace imfs {

// {"n": .., "model": "ic"|"lt", "edges": [[u, v, param], ...]} with params
// printed to 17 significant digits, so a load reproduces them bit-exactly.
std::string graph_to_json(const Graph& graph);
Graph graph_from_json(std::string_view text);

// {"q": [...]}
std::string seed_distribution_to_json(const SeedDistribution& dist);
SeedDistribution seed_distribution_from_json(std::string_view text);

void save_graph(const Graph& graph, const std::filesystem::path& path);
Graph load_graph(const std::filesystem::path& path);
void save_seed_distribution(const SeedDistribution& dist,
                            const std::filesystem::path& path);
SeedDistribution load_seed_distribution(const std::filesystem::path& path);

/// 64-bit FNV-1a of `bytes`, as 16 lowercase hex digits.
std::string digest_hex(std::string_view bytes);
std::string graph_digest(const Graph& graph);
std::string seed_distribution_digest(const SeedDistribution& dist);

/// Shortest-to-parse exact decimal form: printf("%.17g").
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace imfs
