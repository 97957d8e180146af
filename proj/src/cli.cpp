#include "geomlab/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include <CLI11.hpp>

#include "geomlab/count.hpp"
#include "geomlab/embed.hpp"
#include "geomlab/error.hpp"
#include "geomlab/parallel.hpp"

namespace geomlab {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Writes `text` either to config.out/<name> or, without an output
// directory, to the stream.
void emit(const ExperimentConfig& config, const std::string& name, const std::string& text,
          std::ostream& out) {
  if (config.out.empty()) {
    out << text;
    return;
  }
  std::filesystem::create_directories(config.out);
  const auto path = std::filesystem::path(config.out) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << text;
  out << path.string() << '\n';
}

NormedSpace make_space(const ExperimentConfig& config) {
  return NormedSpace::from_label(config.space, config.d);
}

Graph load_or_generate_graph(const ExperimentConfig& config, const RandomStream& root) {
  if (!config.graph_file.empty()) return parse_edge_list(read_file(config.graph_file));
  RandomStream rng = root.split("graph");
  return random_regular_graph(config.n, config.delta, rng, config.params.max_retries * 1000);
}

Json with_config(const ExperimentConfig& config, Json body) {
  Json j;
  j["schema"] = kSchema;
  j["config"] = config_to_json(config);
  for (auto it = body.begin(); it != body.end(); ++it)
    if (it.key() != "schema") j[it.key()] = it.value();
  return j;
}

void run_gen(const ExperimentConfig& config, std::ostream& out) {
  const RandomStream root(config.seed);
  if (config.model == "gnm") {
    RandomStream rng = root.split("graph");
    emit(config, "graph.edges", to_edge_list(random_gnm_graph(config.n, config.m, rng)), out);
  } else if (config.model == "regular") {
    emit(config, "graph.edges", to_edge_list(load_or_generate_graph(config, root)), out);
  } else {
    throw PreconditionError("unknown model '" + config.model + "' (regular|gnm)");
  }
}

void run_embed(const ExperimentConfig& config, std::ostream& out) {
  const RandomStream root(config.seed);
  const Graph g = load_or_generate_graph(config, root);
  Json doc;
  if (config.method == "landmark") {
    RandomStream rng = root.split("landmarks");
    const auto emb = landmark_embedding(g, config.d, rng);
    doc = landmark_to_json(emb);
    const auto report = embedding_report(NormedSpace::linf(config.d), emb.tuple(), g);
    doc["success"] = report.success;
    doc["edge_violations"] = report.edge_violations;
    doc["nonedge_violations"] = report.nonedge_violations;
  } else if (config.method == "stress") {
    RandomStream rng = root.split("stress");
    StressSchedule schedule;
    schedule.restarts = config.restarts;
    doc = attempt_to_json(stress_embed(g, make_space(config), config.iters, rng, schedule));
  } else {
    throw PreconditionError("unknown method '" + config.method + "' (landmark|stress)");
  }
  emit(config, "embedding.json", dump(with_config(config, doc)), out);
}

void run_check(const ExperimentConfig& config, std::ostream& out) {
  if (config.tuple_file.empty()) throw PreconditionError("check: --tuple is required");
  const PointTuple x = tuple_from_json(read_json(config.tuple_file));
  const NormedSpace space = NormedSpace::from_label(config.space, x.dim());
  Json doc;
  const auto domain = check_domain(space, x, config.delta, config.params.D);
  doc["in_domain"] = domain.ok();
  doc["domain_reason"] = to_string(domain.reason);
  doc["domain_index"] = domain.index ? Json(*domain.index) : Json(nullptr);
  doc["domain_radius"] = domain.radius;
  if (!config.graph_file.empty()) {
    const Graph g = parse_edge_list(read_file(config.graph_file));
    const auto iso = check_geometric_isomorphism(space, x, g);
    doc["isomorphic"] = iso.isomorphic;
    if (iso.violation) {
      doc["violation"] = {{"i", iso.violation->first},
                          {"j", iso.violation->second},
                          {"edge", iso.violation_is_edge},
                          {"distance", iso.violation_distance}};
    }
  }
  emit(config, "check.json", dump(with_config(config, doc)), out);
}

void run_certify(const ExperimentConfig& config, std::ostream& out) {
  const RandomStream root(config.seed);
  const Graph g = load_or_generate_graph(config, root);
  std::optional<PointTuple> witness;
  if (!config.tuple_file.empty()) witness = tuple_from_json(read_json(config.tuple_file));
  const auto report =
      certify(g, make_space(config), config.c_naor, witness ? &*witness : nullptr, config.p);
  emit(config, "certificate.json", dump(with_config(config, report_to_json(report))), out);
}

PointTuple synthetic_tuple(const ExperimentConfig& config, const NormedSpace& space,
                           const RandomStream& root) {
  RandomStream rng = root.split("synthetic");
  const double radius = config.params.D * std::log(static_cast<double>(config.n));
  return random_sparse_tuple(space, config.n, config.delta, radius, rng);
}

void run_discretize(const ExperimentConfig& config, std::ostream& out) {
  const RandomStream root(config.seed);
  PointTuple x;
  std::string source;
  if (!config.tuple_file.empty()) {
    x = tuple_from_json(read_json(config.tuple_file));
    source = config.tuple_file;
  } else {
    x = synthetic_tuple(config, make_space(config), root);
    source = "synthetic";
  }
  const NormedSpace space = NormedSpace::from_label(config.space, x.dim());
  const auto rec = discretize(space, x, config.delta, config.params, root.split("discretize"));
  const auto audit = check_discretization(space, x, rec);
  Json doc;
  doc["source"] = source;
  doc["record"] = record_to_json(rec);
  doc["audit"] = audit_to_json(audit);
  emit(config, "discretization.json", dump(with_config(config, doc)), out);
}

void run_count(const ExperimentConfig& config, std::ostream& out) {
  Json doc;
  const CountGuard guard;
  if (config.exact) {
    doc = count_to_json(count_regular_result(config.n, config.delta, guard));
  } else {
    doc = count_to_json(count_regular_formula(config.n, config.delta,
                                              constant_mode_from_string(config.mode)));
  }
  if (config.marked) {
    const auto prob = prob_disjoint_exact(config.n, config.delta, *config.marked);
    doc["prob_disjoint"] = rational_to_json(prob);
    if (config.trials > 0) {
      // Monte Carlo estimate: a fixed random marked set, fresh G(n, m) draws.
      const RandomStream root(config.seed);
      const std::uint64_t pairs = config.n * (config.n - 1) / 2;
      RandomStream mark_rng = root.split("marked");
      const Graph marked = random_gnm_graph(config.n, *config.marked, mark_rng);
      std::size_t hits = 0;
      for (std::size_t t = 0; t < config.trials; ++t) {
        RandomStream rng = root.split("gnm", t);
        const Graph g = random_gnm_graph(config.n, config.n * config.delta / 2, rng);
        bool avoid = true;
        for (const auto& e : g.edges())
          if (marked.has_edge(e.u, e.v)) {
            avoid = false;
            break;
          }
        hits += avoid ? 1 : 0;
      }
      doc["monte_carlo"] = {{"trials", config.trials},
                            {"avoided", hits},
                            {"frequency", static_cast<double>(hits) / static_cast<double>(config.trials)},
                            {"pairs", pairs}};
    }
  }
  const auto bound = prob_disjoint_exponent_bound(std::max<std::size_t>(config.n, 2), config.delta,
                                                  config.params.eps);
  doc["exponent_bound"] = {{"explicit", bound.explicit_bound}, {"leading", bound.leading}};
  emit(config, "count.json", dump(with_config(config, doc)), out);
}

void run_audit(const ExperimentConfig& config, std::ostream& out) {
  const RandomStream root(config.seed);
  const NormedSpace space = make_space(config);
  const double logn = std::log(static_cast<double>(config.n));
  Json trail = Json::array();
  auto step = [&](const std::string& name, Json detail) {
    detail["step"] = name;
    trail.push_back(std::move(detail));
  };

  const Graph g = load_or_generate_graph(config, root);
  const auto diam = diameter(g);
  const double diam_bound = config.params.D * logn / 2.0;
  step("graph", {{"n", g.order()},
                 {"edges", g.edge_count()},
                 {"connected", diam.has_value()},
                 {"diameter", diam ? Json(*diam) : Json(nullptr)},
                 {"diameter_bound", diam_bound},
                 {"diameter_within_bound", diam && *diam <= diam_bound}});
  // A geometric embedding translated to x_1 = 0 has every point within
  // diam(G) of the origin and is (1/2, Delta)-sparse, hence lies in the
  // domain whenever diam(G) <= D log n.
  step("domain_reduction",
       {{"radius", config.params.D * logn},
        {"embeddings_lie_in_domain", diam && static_cast<double>(*diam) <= config.params.D * logn}});

  std::optional<PointTuple> witness;
  {
    RandomStream rng = root.split("landmarks");
    const auto emb = landmark_embedding(g, config.d, rng);
    const auto report = embedding_report(NormedSpace::linf(config.d), emb.tuple(), g);
    step("landmark_embedding", {{"space", "linf"},
                                {"d", config.d},
                                {"success", report.success},
                                {"edge_violations", report.edge_violations},
                                {"nonedge_violations", report.nonedge_violations}});
    if (report.success && space.label() == "linf") witness = emb.tuple();
  }
  if (g.order() <= config.stress_limit) {
    RandomStream rng = root.split("stress");
    StressSchedule schedule;
    schedule.restarts = config.restarts;
    const auto attempt = stress_embed(g, space, config.iters, rng, schedule);
    step("stress_embedding", {{"space", space.label()},
                              {"success", attempt.success},
                              {"edge_violations", attempt.edge_violations},
                              {"nonedge_violations", attempt.nonedge_violations},
                              {"restart", attempt.restart}});
    if (attempt.success && !witness) witness = attempt.tuple;
  } else {
    step("stress_embedding", {{"skipped", true}, {"reason", "n above stress limit"},
                              {"stress_limit", config.stress_limit}});
  }

  PointTuple x;
  std::string source = "synthetic";
  if (witness) {
    x = translate_to_origin(*witness);
    source = "witness";
    if (!check_domain(space, x, config.delta, config.params.D).ok()) {
      x = synthetic_tuple(config, space, root);
      source = "synthetic (witness outside domain)";
    }
  } else {
    x = synthetic_tuple(config, space, root);
  }
  const auto rec = discretize(space, x, config.delta, config.params, root.split("discretize"));
  const auto audit = check_discretization(space, x, rec);
  step("discretize", {{"source", source},
                      {"base_size", rec.base_size},
                      {"local_size", rec.local_size},
                      {"touched_local_nets", rec.touched.size()},
                      {"audit", audit_to_json(audit)}});

  const std::uint64_t pairs = static_cast<std::uint64_t>(config.n) * (config.n - 1) / 2;
  const std::uint64_t long_pairs = rec.L.unordered_size();
  const auto prob = prob_disjoint_exact(config.n, config.delta, long_pairs);
  const auto bound = prob_disjoint_exponent_bound(config.n, config.delta, config.params.eps);
  const double short_budget = std::pow(static_cast<double>(config.n), 1.0 + 2.0 * config.params.eps);
  step("long_distances", {{"unordered", long_pairs},
                          {"ordered", rec.L.ordered_size()},
                          {"pairs", pairs},
                          {"short_unordered", pairs - long_pairs},
                          {"short_budget", short_budget},
                          {"within_short_budget", static_cast<double>(pairs - long_pairs) <= short_budget}});
  step("disjointness", {{"probability", rational_to_json(prob)},
                        {"explicit_bound", bound.explicit_bound},
                        {"leading", bound.leading}});

  const bool embedded = witness.has_value();
  std::string verdict;
  if (!audit.ok())
    verdict = "discretization audit failed";
  else if (embedded)
    verdict = "geometric embedding found; discretization audit passed";
  else
    verdict = "no embedding found; discretization audit passed";
  Json doc;
  doc["trail"] = trail;
  doc["regime"] = audit.regime;
  doc["audit_ok"] = audit.ok();
  doc["verdict"] = verdict;
  emit(config, "audit.json", dump(with_config(config, doc)), out);
}

}  // namespace

Json config_to_json(const ExperimentConfig& config) {
  Json j;
  j["seed"] = config.seed;
  j["n"] = config.n;
  j["delta"] = config.delta;
  j["d"] = config.d;
  j["space"] = config.space;
  j["eps"] = config.params.eps;
  j["c0"] = config.params.c0;
  j["D"] = config.params.D;
  j["C_BM"] = config.params.C_BM;
  j["c_main"] = config.params.c_main;
  j["tolerance"] = config.params.tolerance;
  j["max_retries"] = config.params.max_retries;
  j["c_naor"] = config.c_naor;
  j["defaults"] = config.params.is_default();
  return j;
}

void run(const ExperimentConfig& config, const std::string& subcommand, std::ostream& out) {
  set_thread_count(std::max(config.threads, 1U));
  if (subcommand == "gen") return run_gen(config, out);
  if (subcommand == "embed") return run_embed(config, out);
  if (subcommand == "check") return run_check(config, out);
  if (subcommand == "certify") return run_certify(config, out);
  if (subcommand == "discretize") return run_discretize(config, out);
  if (subcommand == "count") return run_count(config, out);
  if (subcommand == "audit") return run_audit(config, out);
  throw PreconditionError("unknown subcommand '" + subcommand + "'");
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  CLI::App app{"geomlab: geometric embeddings of random regular graphs"};
  app.set_config("--config", "", "Flat key = value configuration file");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--seed", config.seed, "Global 64-bit seed");
  app.add_option("--n", config.n, "Number of vertices / points");
  app.add_option("--delta", config.delta, "Degree Delta");
  app.add_option("--d", config.d, "Dimension of the normed space");
  app.add_option("--space", config.space, "Space label: lp:<p> or linf");
  app.add_option("--eps", config.params.eps, "epsilon");
  app.add_option("--c0", config.params.c0, "Fine net constant c0");
  app.add_option("--diam-const", config.params.D, "Diameter constant D");
  app.add_option("--c-bm", config.params.C_BM, "Banach-Mazur constant C_BM");
  app.add_option("--tolerance", config.params.tolerance, "Numerical tolerance");
  app.add_option("--c-naor", config.c_naor, "Constant in the spectral Poincare bound");
  app.add_option("--trials", config.trials, "Monte Carlo trials");
  app.add_option("--out", config.out, "Output directory (default: stdout)");
  app.add_option("--max-retries", config.params.max_retries, "Retry budget for seeds");
  app.add_option("--threads", config.threads, "Worker threads")->check(CLI::Range(1U, 1024U));

  auto* gen = app.add_subcommand("gen", "Generate a random graph as an edge list");
  gen->add_option("--model", config.model, "regular | gnm");
  gen->add_option("--m", config.m, "Edge count for gnm");

  auto* embed = app.add_subcommand("embed", "Embed a graph (landmark or stress)");
  embed->add_option("--method", config.method, "landmark | stress");
  embed->add_option("--graph", config.graph_file, "Edge-list file (default: generate)");
  embed->add_option("--iters", config.iters, "Optimization iterations");
  embed->add_option("--restarts", config.restarts, "Random restarts");

  auto* check = app.add_subcommand("check", "Check geometric isomorphism and domain membership");
  check->add_option("--graph", config.graph_file, "Edge-list file");
  check->add_option("--tuple", config.tuple_file, "Tuple JSON file")->required();

  auto* cert = app.add_subcommand("certify", "Non-embedding certificate");
  cert->add_option("--graph", config.graph_file, "Edge-list file (default: generate)");
  cert->add_option("--tuple", config.tuple_file, "Witness tuple JSON");
  cert->add_option("--p", config.p, "Exponent p >= 1");

  auto* disc = app.add_subcommand("discretize", "Discretize a tuple and audit the record");
  disc->add_option("--tuple", config.tuple_file, "Tuple JSON (default: synthetic domain tuple)");

  auto* count = app.add_subcommand("count", "Count regular graphs and disjointness probabilities");
  count->add_flag("--exact", config.exact, "Exact count");
  count->add_option("--mode", config.mode, "Formula constant: none | shifted | standard");
  count->add_option("--marked", config.marked, "Marked pairs for the disjointness probability");

  auto* audit = app.add_subcommand("audit", "Full pipeline on one instance");
  audit->add_option("--iters", config.iters, "Stress iterations");
  audit->add_option("--restarts", config.restarts, "Stress restarts");
  audit->add_option("--stress-limit", config.stress_limit, "Largest n for the stress search");

  auto report_error = [&](const std::string& kind, const std::string& message, int code) {
    Json j;
    j["schema"] = kSchema;
    j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
    err << dump(j);
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  }

  const auto subs = app.get_subcommands();
  try {
    run(config, subs.front()->get_name(), out);
  } catch (const PreconditionError& e) {
    return report_error("precondition", e.what(), 2);
  } catch (const BudgetExhausted& e) {
    return report_error("budget", e.what(), 3);
  } catch (const std::exception& e) {
    return report_error("error", e.what(), 1);
  }
  return 0;
}

}  // namespace geomlab
