#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "imfs/cascade.hpp"
#include "imfs/diffusion.hpp"
#include "imfs/errors.hpp"
#include "imfs/evaluation.hpp"
#include "imfs/graph.hpp"
#include "imfs/graph_io.hpp"
#include "imfs/inference.hpp"
#include "imfs/influence_max.hpp"
#include "imfs/oracle.hpp"
#include "imfs/parallel.hpp"
#include "imfs/pipelines.hpp"
#include "imfs/report_io.hpp"
#include "imfs/rng.hpp"
#include "imfs/sample_size.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace imfs::cli {

namespace {

constexpr std::uint64_t kMaxGeneratedCascades = 100'000'000;

// Independent 64-bit seed for sub-task `index` of purpose `salt`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t salt) {
  return stream_rng(splitmix64(seed ^ (salt * 0x9e3779b97f4a7c15ULL)), index)();
}

NodeSet parse_nodes(const std::string& text, int n) {
  NodeSet out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const int v = std::stoi(item);
    if (v < 0 || v >= n) throw std::invalid_argument("node " + item + " out of range");
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string nodes_text(const NodeSet& nodes) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(nodes[i]);
  }
  return out;
}

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) {
    throw std::invalid_argument(std::string(what) + " '" + path + "' does not exist");
  }
}

// Assumption parameters shared by several subcommands.
struct ParamFlags {
  double alpha = AssumptionParams{}.alpha;
  double gamma = AssumptionParams{}.gamma;
  double beta = AssumptionParams{}.beta;
  double c = AssumptionParams{}.c;
  double epsilon = AssumptionParams{}.epsilon;
  double delta = AssumptionParams{}.delta;
  int k = AssumptionParams{}.k;
  std::vector<std::pair<CLI::Option*, double*>> real;
  CLI::Option* k_opt = nullptr;

  void add(CLI::App* app) {
    real = {{app->add_option("--alpha", alpha, "ap(v) <= 1 - alpha"), &alpha},
            {app->add_option("--gamma", gamma, "gamma <= q_u <= 1 - gamma"), &gamma},
            {app->add_option("--beta", beta, "minimum edge probability"), &beta},
            {app->add_option("--c", c, "sum q_u <= c k"), &c},
            {app->add_option("--epsilon", epsilon, "accuracy"), &epsilon},
            {app->add_option("--delta", delta, "failure probability"), &delta}};
    k_opt = app->add_option("--k", k, "seed budget");
  }

  // Flags given on the command line win over `base`.
  AssumptionParams merge(AssumptionParams base) const {
    double* fields[] = {&base.alpha, &base.gamma, &base.beta, &base.c, &base.epsilon, &base.delta};
    for (std::size_t i = 0; i < real.size(); ++i) {
      if (real[i].first->count() > 0) *fields[i] = *real[i].second;
    }
    if (k_opt->count() > 0) base.k = k;
    return base;
  }
};

AssumptionParams params_from_json(const json& j) {
  AssumptionParams p;
  p.alpha = j.value("alpha", p.alpha);
  p.gamma = j.value("gamma", p.gamma);
  p.beta = j.value("beta", p.beta);
  p.c = j.value("c", p.c);
  p.epsilon = j.value("epsilon", p.epsilon);
  p.delta = j.value("delta", p.delta);
  p.k = j.value("k", p.k);
  return p;
}

// Graph, seed distribution and sampling setup of an experiment: a JSON file
// with every field overridable by a flag.
struct ExperimentConfig {
  std::optional<std::string> graph_file;
  int n = 0;
  double density = 0.3;
  double param_lo = 0.1;
  double param_hi = 1.0;
  std::optional<std::string> seeds_file;
  std::optional<double> q;
  std::optional<double> q_lo;
  std::optional<double> q_hi;
  std::optional<Model> model;
  std::uint64_t t = 0;
  std::optional<std::uint64_t> rng_seed;
  std::string out_dir;
  std::optional<std::string> t_from;
  std::string pipeline;
  int trials = 1;
  int max_in_degree = -1;
  AssumptionParams params;
};

ExperimentConfig load_config(const std::string& path) {
  require_file(path, "config file");
  const json j = json::parse(read_file(path));
  ExperimentConfig cfg;
  if (j.contains("graph")) {
    const json& g = j.at("graph");
    if (g.contains("file")) cfg.graph_file = g.at("file").get<std::string>();
    cfg.n = g.value("n", cfg.n);
    cfg.density = g.value("density", cfg.density);
    cfg.param_lo = g.value("param_lo", cfg.param_lo);
    cfg.param_hi = g.value("param_hi", cfg.param_hi);
  }
  if (j.contains("seed_distribution")) {
    const json& s = j.at("seed_distribution");
    if (s.contains("file")) cfg.seeds_file = s.at("file").get<std::string>();
    if (s.contains("q")) cfg.q = s.at("q").get<double>();
    if (s.contains("q_lo")) cfg.q_lo = s.at("q_lo").get<double>();
    if (s.contains("q_hi")) cfg.q_hi = s.at("q_hi").get<double>();
  }
  if (j.contains("model")) cfg.model = parse_model(j.at("model").get<std::string>());
  cfg.t = j.value("t", cfg.t);
  if (j.contains("rng_seed")) cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  if (j.contains("t_from")) cfg.t_from = j.at("t_from").get<std::string>();
  cfg.pipeline = j.value("pipeline", cfg.pipeline);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.max_in_degree = j.value("max_in_degree", cfg.max_in_degree);
  if (j.contains("params")) cfg.params = params_from_json(j.at("params"));
  return cfg;
}

// Command-line side of ExperimentConfig.
struct ConfigFlags {
  std::string config;
  std::string graph_file, seeds_file, model, out_dir, t_from, pipeline;
  int n = 0, trials = 1, max_in_degree = -1;
  double density = 0, param_lo = 0, param_hi = 0, q = 0, q_lo = 0, q_hi = 0;
  std::uint64_t t = 0, rng_seed = 0;
  std::map<std::string, CLI::Option*> opts;
  ParamFlags params;

  void add(CLI::App* app) {
    app->add_option("--config", config, "experiment config (JSON)");
    opts["graph"] = app->add_option("--graph", graph_file, "graph file");
    opts["n"] = app->add_option("--n", n, "nodes of a generated graph");
    opts["density"] = app->add_option("--density", density, "edge density of a generated graph");
    opts["param-lo"] = app->add_option("--param-lo", param_lo, "lowest generated edge parameter");
    opts["param-hi"] = app->add_option("--param-hi", param_hi, "highest generated edge parameter");
    opts["seeds"] = app->add_option("--seeds", seeds_file, "seed distribution file");
    opts["q"] = app->add_option("--q", q, "uniform seed probability");
    opts["q-lo"] = app->add_option("--q-lo", q_lo, "random seed probabilities, low end");
    opts["q-hi"] = app->add_option("--q-hi", q_hi, "random seed probabilities, high end");
    opts["model"] = app->add_option("--model", model, "ic or lt");
    opts["t"] = app->add_option("--t", t, "number of cascades");
    opts["t-from"] = app->add_option("--t-from", t_from, "take t from a sample-size task");
    opts["rng-seed"] = app->add_option("--rng-seed", rng_seed, "RNG seed");
    opts["out-dir"] = app->add_option("--out-dir", out_dir, "output directory");
    opts["trials"] = app->add_option("--trials", trials, "number of trials");
    opts["max-in-degree"] =
        app->add_option("--max-in-degree", max_in_degree, "bound D on the in-degree");
    params.add(app);
  }

  bool given(const std::string& name) const { return opts.at(name)->count() > 0; }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config(config);
    if (given("graph")) cfg.graph_file = graph_file;
    if (given("n")) cfg.n = n;
    if (given("density")) cfg.density = density;
    if (given("param-lo")) cfg.param_lo = param_lo;
    if (given("param-hi")) cfg.param_hi = param_hi;
    if (given("seeds")) {
      cfg.seeds_file = seeds_file;
      cfg.q.reset();
      cfg.q_lo.reset();
      cfg.q_hi.reset();
    }
    if (given("q")) {
      cfg.q = q;
      cfg.seeds_file.reset();
    }
    if (given("q-lo")) cfg.q_lo = q_lo;
    if (given("q-hi")) cfg.q_hi = q_hi;
    if (given("model")) cfg.model = parse_model(model);
    if (given("t")) cfg.t = t;
    if (given("t-from")) cfg.t_from = t_from;
    if (given("rng-seed")) cfg.rng_seed = rng_seed;
    if (given("out-dir")) cfg.out_dir = out_dir;
    if (given("trials")) cfg.trials = trials;
    if (given("max-in-degree")) cfg.max_in_degree = max_in_degree;
    cfg.params = params.merge(cfg.params);
    if (!cfg.rng_seed) throw std::invalid_argument("rng_seed is required");
    if (cfg.graph_file) require_file(*cfg.graph_file, "graph file");
    if (cfg.seeds_file) require_file(*cfg.seeds_file, "seed distribution file");
    return cfg;
  }
};

Graph build_graph(const ExperimentConfig& cfg) {
  if (cfg.graph_file) {
    Graph g = load_graph(*cfg.graph_file);
    if (cfg.model && *cfg.model != g.model()) {
      throw ModelMismatch("graph file holds a " + to_string(g.model()) + " graph but model " +
                          to_string(*cfg.model) + " was requested");
    }
    return g;
  }
  if (cfg.n <= 0) throw std::invalid_argument("need a graph file or a positive n");
  if (!cfg.model) throw std::invalid_argument("need a model for a generated graph");
  return random_graph(cfg.n, cfg.density, {cfg.param_lo, cfg.param_hi}, *cfg.model,
                      derive_seed(*cfg.rng_seed, 0, 1));
}

SeedDistribution build_seed_distribution(const ExperimentConfig& cfg, int n) {
  SeedDistribution dist;
  if (cfg.seeds_file) {
    dist = load_seed_distribution(*cfg.seeds_file);
  } else if (cfg.q) {
    dist = SeedDistribution::uniform(n, *cfg.q);
  } else if (cfg.q_lo && cfg.q_hi) {
    dist = SeedDistribution::random(n, *cfg.q_lo, *cfg.q_hi, derive_seed(*cfg.rng_seed, 0, 2));
  } else {
    throw std::invalid_argument("need a seed distribution (file, q, or q_lo and q_hi)");
  }
  if (dist.n() != n) throw std::invalid_argument("seed distribution size does not match the graph");
  return dist;
}

std::uint64_t resolve_t(const ExperimentConfig& cfg, const Graph& graph) {
  std::uint64_t t = cfg.t;
  if (cfg.t_from) {
    const int degree = cfg.max_in_degree < 0 ? max_in_degree(graph) : cfg.max_in_degree;
    const auto r = sample_size(parse_sample_size_task(*cfg.t_from), cfg.params, graph.n(), degree);
    t = r.t;
  }
  if (t == 0) throw std::invalid_argument("t must be positive");
  if (t > kMaxGeneratedCascades) {
    throw std::invalid_argument("t = " + std::to_string(t) + " exceeds the generation cap of " +
                                std::to_string(kMaxGeneratedCascades));
  }
  return t;
}

fs::path output_dir(const std::string& dir) {
  if (dir.empty()) throw std::invalid_argument("an output directory is required");
  fs::create_directories(dir);
  return fs::path(dir);
}

// ---- generate ------------------------------------------------------------

struct GenerateCmd {
  ConfigFlags flags;
  int threads = 0;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("generate", "sample a graph, seed distribution and cascades");
    flags.add(sub);
    sub->add_option("--threads", threads, "worker threads (default: IMFS_THREADS or all cores)");
  }

  void run(std::ostream& out) const {
    const ExperimentConfig cfg = flags.resolve();
    const Graph graph = build_graph(cfg);
    const SeedDistribution dist = build_seed_distribution(cfg, graph.n());
    const std::uint64_t t = resolve_t(cfg, graph);
    const fs::path dir = output_dir(cfg.out_dir);
    const CascadeDataset data = generate_dataset(graph, dist, t, *cfg.rng_seed, threads);
    save_graph(graph, dir / "graph.json");
    save_seed_distribution(dist, dir / "seeds.json");
    const std::string text = serialize_dataset(data);
    write_file(dir / "dataset.jsonl", text);
    out << "graph_digest " << data.header.graph_digest << '\n'
        << "seed_dist_digest " << data.header.seed_dist_digest << '\n'
        << "dataset_digest " << digest_hex(text) << '\n'
        << "t " << t << '\n';
  }
};

// ---- infer / recover -----------------------------------------------------

struct InferCmd {
  std::string dataset, model, out_dir, graph;
  double accuracy = 0.0;
  std::optional<double> beta;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("infer", "estimate edge parameters from a cascade dataset");
    sub->add_option("--dataset", dataset, "dataset file")->required();
    sub->add_option("--model", model, "ic or lt")->required();
    sub->add_option("--accuracy", accuracy, "target accuracy recorded in the report");
    sub->add_option("--beta", beta, "also recover edges with p > beta/2 (IC)");
    sub->add_option("--out-dir", out_dir, "output directory")->required();
    sub->add_option("--graph", graph, "true graph: report the estimation error");
  }

  void run(std::ostream& /*out*/, std::ostream& err) const {
    require_file(dataset, "dataset");
    const Model wanted = parse_model(model);
    DatasetHeader header;
    const OneStepStats stats = collect_stats_from_file(dataset, &header);
    if (header.model != wanted) {
      throw ModelMismatch("dataset was generated under " + to_string(header.model) +
                          " but --model is " + to_string(wanted));
    }
    const EstimationReport report = wanted == Model::IC
                                        ? estimate_edge_probabilities_ic(stats, accuracy)
                                        : estimate_edge_weights_lt(stats, accuracy);
    const fs::path dir = output_dir(out_dir);
    write_file(dir / "report.json", estimation_report_to_json(report));
    write_file(dir / "report.csv", estimation_report_to_csv(report));
    if (beta) write_file(dir / "edges.csv", edges_to_csv(recover_structure(report, *beta)));
    for (auto f : {EstimateFlag::CLAMPED_LOW, EstimateFlag::CLAMPED_HIGH,
                   EstimateFlag::UNDEFINED_DENOMINATOR}) {
      if (const auto c = report.count(f)) err << to_string(f) << ": " << c << " pairs\n";
    }
    if (!graph.empty()) {
      require_file(graph, "graph file");
      const auto e = parameter_error(load_graph(graph), report.param_hat);
      err << "max_abs_error " << format_double(e.max_abs) << '\n';
    }
  }
};

struct RecoverCmd {
  std::string report, out;
  double beta = 0.0;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("recover", "threshold an estimation report into an edge list");
    sub->add_option("--report", report, "report.json from infer")->required();
    sub->add_option("--beta", beta, "edges with p > beta/2 are kept")->required();
    sub->add_option("--out", out, "edge list CSV")->required();
  }

  void run() const {
    require_file(report, "report");
    const EstimationReport r = estimation_report_from_json(read_file(report));
    write_file(out, edges_to_csv(recover_structure(r, beta)));
  }
};

// ---- ims -----------------------------------------------------------------

struct ImsCmd {
  ConfigFlags flags;
  std::string dataset, pipeline;
  std::optional<std::uint64_t> t_prime;
  std::size_t num_sims = kDefaultNumSims;
  double max_undefined = PipelineOptions{}.max_undefined_fraction;
  bool record_time = false;
  int threads = 0;
  CLI::Option* pipeline_opt = nullptr;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("ims", "choose seeds from cascades with an IMS pipeline");
    flags.add(sub);
    sub->add_option("--dataset", dataset, "dataset file (single run)");
    pipeline_opt = sub->add_option("--pipeline", pipeline, "ic-a1, ic-a2, ic-a2-eps or lt");
    sub->add_option("--t-prime", t_prime, "cascades used for the ap split (default t/2)");
    sub->add_option("--num-sims", num_sims, "live-edge worlds for the greedy");
    sub->add_option("--max-undefined-fraction", max_undefined,
                    "fail when more pairs than this are undefined");
    sub->add_flag("--record-time", record_time, "add wall time to the metrics");
    sub->add_option("--threads", threads, "worker threads");
  }

  ImsResult run_one(const CascadeDataset& data, Pipeline which, const ExperimentConfig& cfg,
                    std::uint64_t seed, int inner_threads) const {
    PipelineOptions opts;
    opts.max_undefined_fraction = max_undefined;
    opts.delta = cfg.params.delta;
    opts.max_in_degree = cfg.max_in_degree;
    const ImAlgorithm algo = make_greedy_algorithm(num_sims, derive_seed(seed, 0, 3), inner_threads);
    const AssumptionParams& p = cfg.params;
    const std::uint64_t tp = t_prime ? *t_prime : data.t() / 2;
    switch (which) {
      case Pipeline::IC_A1: return ims_ic_a1(data, p.k, p.epsilon, algo, opts);
      case Pipeline::IC_A2:
        return ims_ic_a2(data, p.k, p.epsilon, p.delta, tp, algo, derive_seed(seed, 0, 4), opts);
      case Pipeline::IC_A2_EPS: return ims_ic_a2_eps(data, p.k, p.epsilon, p.delta, tp, algo, opts);
      case Pipeline::LT: return ims_lt(data, p.k, p.epsilon, algo, opts);
    }
    throw std::logic_error("unknown pipeline");
  }

  void run(std::ostream& out, std::ostream& err) const {
    ExperimentConfig cfg = flags.resolve();
    if (pipeline_opt->count() > 0) cfg.pipeline = pipeline;
    if (cfg.pipeline.empty()) throw std::invalid_argument("--pipeline is required");
    const Pipeline which = parse_pipeline(cfg.pipeline);
    const fs::path dir = output_dir(cfg.out_dir);

    if (!dataset.empty()) {
      require_file(dataset, "dataset");
      const CascadeDataset data = load_dataset(dataset);
      const ImsResult result = run_one(data, which, cfg, *cfg.rng_seed, threads);
      write_file(dir / "ims_result.json", ims_result_to_json(result));
      out << "chosen " << nodes_text(result.chosen.nodes) << '\n';
      return;
    }

    // Repeated experiment: a fresh dataset per trial from the true graph.
    if (cfg.trials < 1) throw std::invalid_argument("trials must be positive");
    const Graph graph = build_graph(cfg);
    const SeedDistribution dist = build_seed_distribution(cfg, graph.n());
    const std::uint64_t t = resolve_t(cfg, graph);
    const auto trials = static_cast<std::size_t>(cfg.trials);
    std::vector<MetricsRecord> records(trials);
    std::vector<std::string> results(trials);
    std::vector<std::string> failures(trials);
    const int outer = threads > 0 ? threads : default_thread_count();
    const int inner = trials > 1 ? 1 : threads;
    parallel_chunks(trials, outer, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const auto start = std::chrono::steady_clock::now();
        MetricsRecord& rec = records[i];
        rec.trial = i;
        try {
          const CascadeDataset data =
              generate_dataset(graph, dist, t, derive_seed(*cfg.rng_seed, i, 5), inner);
          const ImsResult result = run_one(data, which, cfg, derive_seed(*cfg.rng_seed, i, 6), inner);
          results[i] = ims_result_to_json(result);
          const auto e = parameter_error(graph, result.surrogate.param_matrix());
          rec.max_abs_error = e.max_abs;
          rec.l1_error = e.l1;
          fill_spread_metrics(rec, graph, result.chosen.nodes, cfg.params.k, {}, kDefaultNumSims,
                              derive_seed(*cfg.rng_seed, i, 7));
        } catch (const PipelineError& e) {
          failures[i] = std::string(e.what()) + ": " + e.diagnostics();
          rec.note = failures[i];
        } catch (const std::exception& e) {
          failures[i] = e.what();
          rec.note = failures[i];
        }
        if (record_time) {
          rec.wall_time_s =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
      }
    });
    for (std::size_t i = 0; i < trials; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "trial_%03zu.json", i);
      if (!results[i].empty()) write_file(dir / name, results[i]);
      if (!failures[i].empty()) err << "trial " << i << ": " << failures[i] << '\n';
    }
    write_file(dir / "metrics.csv", metrics_csv(records));
    write_file(dir / "metrics_summary.csv", metrics_summary(records));
    std::size_t failed = 0;
    for (const auto& f : failures) failed += f.empty() ? 0 : 1;
    out << "trials " << trials << " failed " << failed << '\n';
    if (failed == trials) throw std::runtime_error("every trial failed");
  }
};

// ---- oracle --------------------------------------------------------------

struct OracleCmd {
  std::string graph, seeds, set, forced;
  std::optional<int> node, given;
  bool given_seeded = false;
  int k = 1;
  CLI::App* ap = nullptr;
  CLI::App* sigma = nullptr;
  CLI::App* optimal = nullptr;
  CLI::App* forced_cmd = nullptr;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("oracle", "exact quantities by enumeration");
    sub->require_subcommand(1);
    sub->add_option("--graph", graph, "graph file")->required();
    ap = sub->add_subcommand("ap", "one-step activation probabilities");
    ap->add_option("--seeds", seeds, "seed distribution file")->required();
    ap->add_option("--node", node, "only this node");
    ap->add_option("--given", given, "condition on this node's seed state");
    ap->add_flag("--given-seeded", given_seeded, "condition on the node being a seed");
    sigma = sub->add_subcommand("sigma", "expected spread of a seed set");
    sigma->add_option("--set", set, "comma-separated seed nodes")->required();
    optimal = sub->add_subcommand("optimal", "best seed set of size k");
    optimal->add_option("--k", k, "seed budget")->required();
    forced_cmd = sub->add_subcommand("forced", "spread with in-edges of some nodes set to 1");
    forced_cmd->add_option("--forced", forced, "nodes whose in-edges are forced")->required();
    forced_cmd->add_option("--set", set, "comma-separated seed nodes")->required();
  }

  void run(std::ostream& out) const {
    require_file(graph, "graph file");
    const Graph g = load_graph(graph);
    if (ap->parsed()) {
      require_file(seeds, "seed distribution file");
      const SeedDistribution dist = load_seed_distribution(seeds);
      if (dist.n() != g.n()) throw std::invalid_argument("seed distribution size does not match");
      for (int v = 0; v < g.n(); ++v) {
        if (node && *node != v) continue;
        if (given && *given == v) continue;
        const double value = given ? exact_ap_given(g, dist, v, *given, given_seeded)
                                   : exact_ap(g, dist, v);
        out << v << ' ' << format_double(value) << '\n';
      }
    } else if (sigma->parsed()) {
      out << format_double(exact_sigma(g, parse_nodes(set, g.n()))) << '\n';
    } else if (optimal->parsed()) {
      const OptimalSeeds best = exact_optimal_seeds(g, k);
      out << "seeds " << nodes_text(best.seeds) << '\n'
          << "spread " << format_double(best.spread) << '\n';
    } else if (forced_cmd->parsed()) {
      out << format_double(exact_sigma_with_forced_in_edges(g, parse_nodes(forced, g.n()),
                                                            parse_nodes(set, g.n())))
          << '\n';
    }
  }
};

// ---- evaluate ------------------------------------------------------------

struct EvaluateCmd {
  std::string graph, report, out, summary;
  std::vector<std::string> ims;
  std::optional<double> beta;
  int k = 0;
  std::size_t num_sims = kDefaultNumSims;
  std::uint64_t rng_seed = 0;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("evaluate", "score reports and IMS results against a true graph");
    sub->add_option("--graph", graph, "true graph file")->required();
    sub->add_option("--report", report, "report.json from infer");
    sub->add_option("--beta", beta, "structure threshold for precision/recall");
    sub->add_option("--ims", ims, "IMS result files, one row each");
    sub->add_option("--k", k, "budget for the optimum (default: each result's k)");
    sub->add_option("--num-sims", num_sims, "simulations when exact spread is infeasible");
    sub->add_option("--rng-seed", rng_seed, "seed for simulated spreads")->required();
    sub->add_option("--out", out, "metrics CSV")->required();
    sub->add_option("--summary", summary, "summary CSV");
  }

  void run(std::ostream& err) const {
    require_file(graph, "graph file");
    if (report.empty() && ims.empty()) throw std::invalid_argument("need --report or --ims");
    const Graph truth = load_graph(graph);
    std::optional<EstimationReport> est;
    if (!report.empty()) {
      require_file(report, "report");
      est = estimation_report_from_json(read_file(report));
      if (est->n != truth.n()) throw std::invalid_argument("report size does not match the graph");
    }
    auto score_report = [&](MetricsRecord& rec) {
      if (!est) return;
      const auto e = parameter_error(truth, est->param_hat);
      rec.max_abs_error = e.max_abs;
      rec.l1_error = e.l1;
      if (beta) {
        const auto s = structure_score(truth.edges(), recover_structure(*est, *beta));
        rec.precision = s.precision;
        rec.recall = s.recall;
      }
    };
    std::vector<MetricsRecord> records;
    if (ims.empty()) {
      records.emplace_back();
      score_report(records.back());
    }
    for (std::size_t i = 0; i < ims.size(); ++i) {
      require_file(ims[i], "IMS result");
      const ImsResult result = ims_result_from_json(read_file(ims[i]));
      MetricsRecord rec;
      rec.trial = i;
      if (est) {
        score_report(rec);
      } else if (result.surrogate.n() == truth.n()) {
        const auto e = parameter_error(truth, result.surrogate.param_matrix());
        rec.max_abs_error = e.max_abs;
        rec.l1_error = e.l1;
      }
      fill_spread_metrics(rec, truth, result.chosen.nodes, k > 0 ? k : result.chosen.budget_k, {},
                          num_sims, derive_seed(rng_seed, i, 7));
      if (!rec.sigma_optimal) err << "trial " << i << ": " << rec.note << '\n';
      records.push_back(std::move(rec));
    }
    write_file(out, metrics_csv(records));
    if (!summary.empty()) write_file(summary, metrics_summary(records));
  }
};

// ---- sample-size ---------------------------------------------------------

struct SampleSizeCmd {
  std::string task, out;
  int n = 0;
  int degree = 0;
  ParamFlags params;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("sample-size", "number of cascades a guarantee asks for");
    sub->add_option("--task", task,
                    "ic-estimation, ic-structure, ims-ic-a1, ims-ic-a2, lt-estimation, "
                    "lt-rescaled or ims-lt")
        ->required();
    sub->add_option("--n", n, "number of nodes")->required();
    sub->add_option("--max-in-degree", degree, "bound D on the in-degree");
    sub->add_option("--out", out, "also write the JSON here");
    params.add(sub);
  }

  void run(std::ostream& os) const {
    const SampleSizeTask which = parse_sample_size_task(task);
    const SampleSizeResult r = sample_size(which, params.merge({}), n, degree);
    json j;
    j["task"] = to_string(which);
    j["bound"] = r.bound;
    j["t"] = r.t;
    j["eta"] = r.eta;
    j["accuracy"] = r.accuracy;
    if (which == SampleSizeTask::ImsIcA2) j["t_prime"] = r.t_prime;
    const std::string text = j.dump(1) + "\n";
    os << text;
    if (!out.empty()) write_file(out, text);
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Influence cascades: simulation, network inference and influence maximization "
               "from samples"};
  app.name(args.empty() ? "imfs" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  GenerateCmd generate;
  InferCmd infer;
  RecoverCmd recover;
  ImsCmd ims;
  OracleCmd oracle;
  EvaluateCmd evaluate;
  SampleSizeCmd sample;
  generate.add(app);
  infer.add(app);
  recover.add(app);
  ims.add(app);
  oracle.add(app);
  evaluate.add(app);
  sample.add(app);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "generate") generate.run(out);
    else if (name == "infer") infer.run(out, err);
    else if (name == "recover") recover.run();
    else if (name == "ims") ims.run(out, err);
    else if (name == "oracle") oracle.run(out);
    else if (name == "evaluate") evaluate.run(err);
    else if (name == "sample-size") sample.run(out);
  } catch (const PipelineError& e) {
    err << "error: " << e.what() << "\n  " << e.diagnostics() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace imfs::cli
