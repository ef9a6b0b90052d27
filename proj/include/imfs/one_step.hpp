#pragma once

#include <cstddef>
#include <vector>

namespace imfs {

// Seed rates and one-step activation probabilities, either estimated from
// cascades or computed exactly from a known graph.
//
//   q[u]          Pr[u ∈ S_0]
//   ap[v]         Pr[v ∈ S_1]
//   ap_not[u*n+v] Pr[v ∈ S_1 | u ∉ S_0]
//   ap_not_defined[u*n+v] is false when the conditioning event was never
//   observed (u seeded in every cascade).
struct OneStepMarginals {
  int n = 0;
  std::vector<double> q;
  std::vector<double> ap;
  std::vector<double> ap_not;
  std::vector<char> ap_not_defined;

  double ap_given_not(int u, int v) const {
    return ap_not[static_cast<std::size_t>(u) * n + v];
  }
  bool defined(int u, int v) const {
    return ap_not_defined[static_cast<std::size_t>(u) * n + v] != 0;
  }
};

}  // namespace imfs
