#pragma once

#include <cstdint>

#include "imfs/cascade.hpp"
#include "imfs/graph.hpp"
#include "imfs/rng.hpp"

namespace imfs {

NodeSet sample_seed_set(const SeedDistribution& dist, Rng& rng);

// Independent cascade: each node activated at step τ-1 gets one chance to
// activate each inactive out-neighbor v at step τ, with probability p_uv.
Cascade simulate_ic(const Graph& graph, const NodeSet& seeds, Rng& rng);

// Linear threshold: thresholds r_v ~ U(0, 1] are drawn once per run; an
// inactive node joins S_τ when the weight from S_{τ-1} reaches r_v.
Cascade simulate_lt(const Graph& graph, const NodeSet& seeds, Rng& rng);

/// Dispatches on graph.model().
Cascade simulate(const Graph& graph, const NodeSet& seeds, Rng& rng);

// Cascade `index` of a dataset seeded with `rng_seed`: a fresh seed-set draw
// and a diffusion, both from stream_rng(rng_seed, index).
Cascade generate_cascade(const Graph& graph, const SeedDistribution& dist,
                         std::uint64_t rng_seed, std::uint64_t index);

// `t` i.i.d. cascades. Content does not depend on `threads` (0 = default).
CascadeDataset generate_dataset(const Graph& graph, const SeedDistribution& dist,
                                std::size_t t, std::uint64_t rng_seed,
                                int threads = 0);

}  // namespace imfs
