#include <doctest.h>

#include <cmath>
#include <numeric>

#include "imfs/diffusion.hpp"
#include "imfs/inference.hpp"
#include "imfs/oracle.hpp"
#include "imfs/report_io.hpp"
#include "support.hpp"

using namespace imfs;

namespace {

CascadeDataset make_dataset(int n, Model model, const std::vector<std::vector<NodeSet>>& runs) {
  CascadeDataset data;
  data.header.n = n;
  data.header.model = model;
  for (const auto& deltas : runs) data.cascades.emplace_back(n, deltas);
  data.header.t = data.cascades.size();
  return data;
}

OneStepMarginals single_edge_marginals(double q_u, double ap_v, double ap_v_not_u, double q_v) {
  OneStepMarginals m;
  m.n = 2;
  m.q = {q_u, q_v};
  m.ap = {q_u, ap_v};
  m.ap_not = {0.0, ap_v_not_u, q_u, 0.0};
  m.ap_not_defined = {1, 1, 1, 1};
  return m;
}

double max_error(const Graph& g, const EstimationReport& r) {
  double worst = 0.0;
  for (int u = 0; u < g.n(); ++u) {
    for (int v = 0; v < g.n(); ++v) {
      if (u != v) worst = std::max(worst, std::abs(r.param(u, v) - g.param(u, v)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("collect_stats counting") {
  const CascadeDataset data = make_dataset(3, Model::IC,
                                           {{{0}, {1}}, {{0, 2}}, {{0}, {1, 2}}, {{0, 1}}});
  const OneStepStats s = collect_stats(data);
  CHECK(s.t() == 4);
  CHECK(s.q_hat(0) == 1.0);
  CHECK(s.t_ubar(0) == 0);
  CHECK(std::isnan(s.ap_hat_given_not(0, 1)));
  CHECK(s.ap_hat(1) == 0.75);
  CHECK(s.t_ubar_v(2, 1) == 3);
  CHECK(s.ap_hat_given_not(2, 1) == 1.0);
  for (int u = 0; u < 3; ++u) {
    CHECK(s.t_u(u) + s.t_ubar(u) == s.t());
    for (int v = 0; v < 3; ++v) {
      if (u != v) CHECK(s.t_ubar_v(u, v) <= std::min(s.t_ubar(u), s.t_v(v)));
    }
  }
  const EstimationReport r = estimate_edge_probabilities_ic(s);
  CHECK(r.flag(0, 1) == EstimateFlag::UNDEFINED_DENOMINATOR);
  CHECK(r.param(0, 1) == 0.0);
}

TEST_CASE("collect_stats sharding, streaming and concentration") {
  testing::TempDir dir;
  const Graph g = random_graph(6, 0.4, {}, Model::IC, 4);
  const SeedDistribution d = SeedDistribution::random(6, 0.1, 0.6, 4);
  const std::size_t t = 20000;
  const CascadeDataset data = generate_dataset(g, d, t, 17);
  const OneStepStats one = collect_stats(data, 0, t, 1);
  CHECK(one == collect_stats(data, 0, t, 5));
  save_dataset(data, dir.path() / "d.jsonl");
  DatasetHeader header;
  CHECK(collect_stats_from_file(dir.path() / "d.jsonl", &header) == one);
  CHECK(header == data.header);

  OneStepStats halves = collect_stats(data, 0, t / 2);
  halves.merge(collect_stats(data, t / 2, t));
  CHECK(halves == one);

  for (int u = 0; u < 6; ++u) {
    const double se = std::sqrt(d.q[u] * (1 - d.q[u]) / t);
    CHECK(std::abs(one.q_hat(u) - d.q[u]) <= 3 * se);
  }
}

TEST_CASE("IC estimator closed form") {
  const EstimationReport r = estimate_edge_probabilities_ic(single_edge_marginals(0.5, 0.25, 0.0, 0.0));
  CHECK(r.param(0, 1) == 0.5);
  CHECK(r.flag(0, 1) == EstimateFlag::OK);
  CHECK(r.param(0, 0) == 0.0);

  const EstimationReport zero =
      estimate_edge_probabilities_ic(single_edge_marginals(0.5, 0.3, 0.3, 0.3));
  CHECK(zero.param(0, 1) == 0.0);
  CHECK(zero.flag(0, 1) == EstimateFlag::OK);

  CHECK(estimate_edge_probabilities_ic(single_edge_marginals(0.5, 0.2, 0.3, 0.3)).flag(0, 1) ==
        EstimateFlag::CLAMPED_LOW);
  const EstimationReport high =
      estimate_edge_probabilities_ic(single_edge_marginals(0.2, 0.9, 0.1, 0.0));
  CHECK(high.flag(0, 1) == EstimateFlag::CLAMPED_HIGH);
  CHECK(high.param(0, 1) == 1.0);
  CHECK(estimate_edge_probabilities_ic(single_edge_marginals(0.0, 0.2, 0.2, 0.0)).flag(0, 1) ==
        EstimateFlag::UNDEFINED_DENOMINATOR);
  CHECK(estimate_edge_probabilities_ic(single_edge_marginals(0.5, 1.0, 1.0, 0.0)).flag(0, 1) ==
        EstimateFlag::UNDEFINED_DENOMINATOR);
}

TEST_CASE("LT estimator closed form") {
  const EstimationReport r = estimate_edge_weights_lt(single_edge_marginals(0.5, 0.36, 0.2, 0.2));
  CHECK(std::abs(r.param(0, 1) - 0.4) < 1e-15);
  CHECK(estimate_edge_weights_lt(single_edge_marginals(0.5, 0.3, 0.3, 0.2)).param(0, 1) == 0.0);
  CHECK(estimate_edge_weights_lt(single_edge_marginals(0.5, 1.0, 1.0, 1.0)).flag(0, 1) ==
        EstimateFlag::UNDEFINED_DENOMINATOR);
}

TEST_CASE("estimators are exact at the population limit") {
  Rng rng = stream_rng(21, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const Model model = trial % 2 ? Model::LT : Model::IC;
    const int n = 2 + trial % 7;
    const Graph g = testing::random_instance(rng, n, 0.5, 0.05, 1.0, model);
    const SeedDistribution d = testing::random_seeds(rng, n, 0.1, 0.9);
    const OneStepMarginals m = exact_marginals(g, d);
    const EstimationReport r = model == Model::IC ? estimate_edge_probabilities_ic(m)
                                                  : estimate_edge_weights_lt(m);
    CHECK(max_error(g, r) <= 1e-9);
  }
}

TEST_CASE("estimators are equivariant under relabeling") {
  Rng rng = stream_rng(22, 0);
  for (Model model : {Model::IC, Model::LT}) {
    const int n = 6;
    const Graph g = testing::random_instance(rng, n, 0.5, 0.1, 0.9, model);
    const SeedDistribution d = testing::random_seeds(rng, n, 0.2, 0.5);
    const CascadeDataset data = generate_dataset(g, d, 3000, 5);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    std::swap(perm[1], perm[3]);
    CascadeDataset moved = data;
    for (auto& c : moved.cascades) {
      auto deltas = c.deltas();
      for (auto& step : deltas) {
        for (auto& v : step) v = perm[v];
        std::sort(step.begin(), step.end());
      }
      c = Cascade(n, deltas);
    }
    auto estimate = [&](const CascadeDataset& ds) {
      const OneStepStats s = collect_stats(ds);
      return model == Model::IC ? estimate_edge_probabilities_ic(s) : estimate_edge_weights_lt(s);
    };
    const EstimationReport a = estimate(data);
    const EstimationReport b = estimate(moved);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        CHECK(a.param(u, v) == b.param(perm[u], perm[v]));
        CHECK(a.flag(u, v) == b.flag(perm[u], perm[v]));
      }
    }
    CHECK(estimate(data).flags == a.flags);
  }
}

TEST_CASE("recover_structure") {
  EstimationReport r = estimate_edge_probabilities_ic(single_edge_marginals(0.5, 0.3, 0.3, 0.3));
  CHECK(recover_structure(r, 0.3).empty());
  r.param_hat[1] = 0.3;
  CHECK(recover_structure(r, 0.3) == std::vector<Edge>{{0, 1}});
  r.param_hat[1] = 0.15;
  CHECK(recover_structure(r, 0.3).empty());
  r.target_accuracy = 0.2;
  CHECK_THROWS_AS(recover_structure(r, 0.3), std::invalid_argument);
}

TEST_CASE("structure recovery is sound under bounded error") {
  Rng rng = stream_rng(23, 0);
  const double beta = 0.3;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 6;
    const Graph g = testing::random_instance(rng, n, 0.4, 0.01, 1.0, Model::IC);
    const OneStepMarginals m = exact_marginals(g, SeedDistribution::uniform(n, 0.3));
    EstimationReport r = estimate_edge_probabilities_ic(m, beta / 2);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        const double noise = (2 * uniform01(rng) - 1) * beta / 2;
        r.param_hat[u * n + v] = std::clamp(g.param(u, v) + noise, 0.0, 1.0);
      }
    }
    const auto found = recover_structure(r, beta);
    for (const Edge& e : found) CHECK(g.param(e.from, e.to) > 0.0);
    for (const Edge& e : g.edges()) {
      if (g.param(e.from, e.to) > beta) {
        CHECK(std::find(found.begin(), found.end(), e) != found.end());
      }
    }
  }
}

TEST_CASE("rescale_lt") {
  EstimationReport r = estimate_edge_weights_lt(single_edge_marginals(0.5, 0.3, 0.3, 0.2));
  const RescaledWeights zero = rescale_lt(r, 0.5);
  for (double w : zero.weights) CHECK(w == 0.0);
  CHECK(zero.normalized());
  r.param_hat[1] = 0.505;
  CHECK(std::abs(rescale_lt(r, 0.02).weights[1] - 0.5) < 1e-15);
  r.param_hat[1] = 1.0;
  r.param_hat[2] = 1.0;
  CHECK(rescale_lt(r, 0.1).normalized());

  Rng rng = stream_rng(24, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = testing::random_instance(rng, 5, 0.6, 0.1, 1.0, Model::LT);
    const double eps = 0.05 + 0.9 * uniform01(rng);
    const auto m = exact_marginals(g, testing::random_seeds(rng, 5, 0.2, 0.8));
    const RescaledWeights w = rescale_lt(estimate_edge_weights_lt(m), eps);
    CHECK(w.normalized());
    for (int u = 0; u < 5; ++u) {
      for (int v = 0; v < 5; ++v) CHECK(std::abs(w.weights[u * 5 + v] - g.param(u, v)) <= eps);
    }
  }
}

TEST_CASE("rescale_lt flags nodes that stay above 1") {
  OneStepMarginals m = single_edge_marginals(0.5, 0.36, 0.2, 0.2);
  EstimationReport r = estimate_edge_weights_lt(m);
  r.n = 3;
  r.param_hat = {0, 0, 0.7, 0, 0, 0.7, 0, 0, 0};
  r.flags.assign(9, EstimateFlag::OK);
  const RescaledWeights w = rescale_lt(r, 0.1);
  CHECK(w.unnormalized == std::vector<NodeId>{2});
}

TEST_CASE("check_assumptions") {
  const int n = 4;
  const Graph empty(n, Model::IC);
  AssumptionParams p;
  p.gamma = 0.3;
  const CascadeDataset half = generate_dataset(empty, SeedDistribution::uniform(n, 0.5), 4000, 1);
  const AssumptionReport a3 = check_assumptions(collect_stats(half), p, AssumptionKind::A3_LT);
  CHECK(a3.passed);
  CHECK(a3.feasible_gamma >= 0.45);

  const WeightedEdge e[] = {{0, 1, 1.0}};
  const CascadeDataset sure =
      generate_dataset(Graph::from_weighted_edges(2, Model::IC, e), SeedDistribution({1.0, 0.3}),
                       500, 2);
  p.alpha = 0.1;
  const AssumptionReport a1 = check_assumptions(collect_stats(sure), p, AssumptionKind::A1_IC);
  CHECK_FALSE(a1.passed);
  CHECK_FALSE(a1.nodes[1].activation_ok);
  CHECK_FALSE(a1.nodes[0].seed_rate_ok);

  // Graph where every ap(v) <= 0.8.
  const WeightedEdge chain[] = {{0, 1, 0.3}, {1, 2, 0.3}, {2, 3, 0.3}};
  const Graph g = Graph::from_weighted_edges(n, Model::IC, chain);
  const SeedDistribution d = SeedDistribution::uniform(n, 0.3);
  double worst = 0.0;
  for (int v = 0; v < n; ++v) worst = std::max(worst, exact_ap(g, d, v));
  const double true_alpha = 1.0 - worst;
  const std::size_t t = 20000;
  const auto stats = collect_stats(generate_dataset(g, d, t, 3));
  p.alpha = true_alpha;
  const AssumptionReport r = check_assumptions(stats, p, AssumptionKind::A1_IC);
  CHECK(r.passed);
  CHECK(r.feasible_alpha >= true_alpha - 3 * std::sqrt(0.25 / t));

  p.k = 1;
  p.c = 0.5;
  const AssumptionReport a2 = check_assumptions(stats, p, AssumptionKind::A2_IC);
  CHECK_FALSE(a2.seed_count_ok);
  CHECK(a2.min_c == doctest::Approx(1.2).epsilon(0.05));
}

TEST_CASE("report serialization") {
  const Graph g = random_graph(5, 0.5, {}, Model::LT, 6);
  const auto stats = collect_stats(generate_dataset(g, SeedDistribution::uniform(5, 0.3), 500, 1));
  const EstimationReport r = estimate_edge_weights_lt(stats, 0.05);
  const EstimationReport back = estimation_report_from_json(estimation_report_to_json(r));
  CHECK(back.param_hat == r.param_hat);
  CHECK(back.flags == r.flags);
  CHECK(back.model == Model::LT);
  CHECK(back.target_accuracy == 0.05);
  const std::string csv = estimation_report_to_csv(r);
  CHECK(csv.rfind("u,v,param_hat,flag\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 5 * 4);

  const std::vector<Edge> edges = {{0, 1}, {3, 2}};
  CHECK(edges_from_csv(edges_to_csv(edges)) == edges);
  CHECK(parse_estimate_flag(to_string(EstimateFlag::CLAMPED_HIGH)) == EstimateFlag::CLAMPED_HIGH);
}
