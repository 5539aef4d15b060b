// rigsim: command-line front end.
//
//   rigsim generate  --config model.json [--out dir]
//   rigsim stats     --graph g.txt [--config stats.json]
//   rigsim limits    --config spec.json
//   rigsim balls     --config balls.json
//   rigsim converge  --config plan.json
//   rigsim theorem21 --config plan.json [--pattern K3]
//
// Exit status: 0 success, 1 validation error, 2 runtime abort.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rig/rig.hpp"

namespace fs = std::filesystem;
using namespace rig;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<unsigned> threads;
  std::string format = "csv";
  std::string graph;
  std::string pattern;
};

// Writes `body` to <out>/<name> or to stdout.
void emit(const Options& o, const std::string& name, const std::string& body) {
  if (o.out.empty()) {
    std::cout << body;
    return;
  }
  fs::create_directories(o.out);
  const fs::path p = fs::path(o.out) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw runtime_abort("cannot write " + p.string());
  f << body;
}

json config_or_empty(const Options& o) { return o.config.empty() ? json::object() : read_json_file(o.config); }

std::string rows_text(const Options& o, const std::vector<ConvergenceRow>& rows) {
  std::ostringstream s;
  if (o.format == "json")
    write_json(s, rows);
  else
    write_csv(s, rows);
  return s.str();
}

ExperimentPlan load_plan(const Options& o) {
  require(!o.config.empty(), "--config is required");
  ExperimentPlan plan = ExperimentPlan::from_json(read_json_file(o.config));
  if (o.seed) plan.seed = *o.seed;
  if (o.threads) plan.threads = *o.threads;
  return plan;
}

int cmd_generate(const Options& o) {
  require(!o.config.empty(), "--config is required");
  ModelConfig cfg = parse_model(read_json_file(o.config));
  if (o.seed) cfg.seed = *o.seed;
  const BipartiteMultigraph h = generate(cfg);
  const Graph g = intersection_graph(h);
  std::ostringstream gs, hs;
  write_edge_list(gs, g);
  write_bipartite(hs, h);
  if (o.out.empty()) {
    std::cout << gs.str();
  } else {
    emit(o, "graph.txt", gs.str());
    emit(o, "bipartite.txt", hs.str());
  }
  return 0;
}

int cmd_stats(const Options& o) {
  require(!o.graph.empty(), "--graph is required");
  std::ifstream in(o.graph);
  if (!in) throw validation_error("cannot open graph file '" + o.graph + "'");
  const Graph g = read_edge_list(in);
  const json cfg = config_or_empty(o);
  std::vector<std::string> names = {"alpha", "assort", "moment_1", "moment_2", "pi_0", "pi_1", "pi_2"};
  if (cfg.contains("statistics")) names = detail::get_as<std::vector<std::string>>(cfg["statistics"], "statistics");
  const unsigned threads = o.threads.value_or(1);
  std::vector<StatReport> reports;
  for (const auto& n : names) {
    const Statistic st = Statistic::parse(n);
    require(st.kind != Statistic::ball_dist, "stats: use the balls subcommand for ball distributions");
    reports.push_back(detail::statistic_report(st, g, threads));
  }
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    emit(o, "stats.json", arr.dump(2) + "\n");
  } else {
    std::vector<ConvergenceRow> rows;
    for (const auto& r : reports) {
      ConvergenceRow row;
      row.n1 = g.vertex_count();
      row.statistic = r.name;
      row.empirical = r.value;
      rows.push_back(row);
    }
    emit(o, "stats.csv", rows_text(o, rows));
  }
  return 0;
}

// {"D1": law, "D2": law} or {"model": {...}}, optional "quantities" and
// "samples" for Monte Carlo parts.
int cmd_limits(const Options& o) {
  require(!o.config.empty(), "--config is required");
  const json cfg = read_json_file(o.config);
  LimitSpec spec;
  if (cfg.contains("model")) {
    spec = limit_spec(parse_model(cfg["model"]));
  } else {
    spec = direct_limits(parse_degree_law(detail::field(cfg, "D1", "limits"), "D1"),
                         parse_degree_law(detail::field(cfg, "D2", "limits"), "D2"));
    spec.provenance = "direct(D1=" + spec.D1.describe() + ",D2=" + spec.D2.describe() + ")";
  }
  const bool explicit_list = cfg.contains("quantities");
  std::vector<std::string> names = {"moment_1", "moment_2", "moment_3", "alpha", "assort", "emb(K3)"};
  if (explicit_list) names = detail::get_as<std::vector<std::string>>(cfg["quantities"], "quantities");
  ExperimentPlan plan;
  plan.seed = o.seed.value_or(cfg.value("seed", std::uint64_t{0}));
  plan.threads = o.threads.value_or(1);
  if (cfg.contains("samples")) plan.reference_samples = detail::get_count(cfg["samples"], "samples");
  json out = json::array();
  std::vector<ConvergenceRow> rows;
  for (const auto& n : names) {
    const Statistic st = Statistic::parse(n);
    require(st.kind != Statistic::ball_dist, "limits: ball distributions come from the balls subcommand");
    try {
      const auto lim = detail::scalar_limit(st, spec, plan);
      Estimate e;
      e.value = lim.value;
      e.std_error = lim.stderr_;
      e.exact = lim.stderr_ == 0.0;
      if (!e.exact) e.samples = plan.reference_samples;
      out.push_back(e.to_json(n, spec.provenance));
      ConvergenceRow row;
      row.statistic = n;
      row.empirical = std::nan("");
      row.emp_stderr = std::nan("");
      row.limit = lim.value;
      row.limit_stderr = lim.stderr_;
      rows.push_back(row);
    } catch (const degenerate_limit& e) {
      if (explicit_list) throw;
      out.push_back({{"quantity", n}, {"value", nullptr}, {"stderr", nullptr}, {"exact", true},
                     {"provenance", spec.provenance}, {"error", e.what()}});
    }
  }
  if (o.format == "json") {
    emit(o, "limits.json", out.dump(2) + "\n");
  } else {
    std::ostringstream s;
    s << "n1,statistic,empirical,emp_stderr,limit,limit_stderr,gap,tv\n";
    for (const auto& r : rows)
      s << ',' << r.statistic << ",,," << format_cell(*r.limit) << ',' << format_cell(r.limit_stderr) << ",,\n";
    emit(o, "limits.csv", s.str());
  }
  return 0;
}

// {"graph": path} or {"model": {...}}, plus "r", optional "sample_size",
// optional "reference_samples" (clique-tree reference and TV).
int cmd_balls(const Options& o) {
  require(!o.config.empty(), "--config is required");
  const json cfg = read_json_file(o.config);
  const std::size_t r = detail::get_count(detail::field(cfg, "r", "balls"), "balls.r");
  const std::uint64_t seed = o.seed.value_or(cfg.value("seed", std::uint64_t{0}));
  const unsigned threads = o.threads.value_or(1);
  std::optional<ModelConfig> model;
  Graph g;
  if (cfg.contains("graph")) {
    std::ifstream in(detail::get_as<std::string>(cfg["graph"], "balls.graph"));
    if (!in) throw validation_error("cannot open graph file");
    g = read_edge_list(in);
  } else {
    model = parse_model(detail::field(cfg, "model", "balls"));
    model->seed = seed;
    g = intersection_graph(generate(*model));
  }
  std::optional<std::size_t> sample_size;
  if (cfg.contains("sample_size")) sample_size = detail::get_count(cfg["sample_size"], "balls.sample_size");
  const BallHistogram emp = empirical_ball_dist(g, r, sample_size, mix64(seed, 1), threads);
  json out = {{"r", r}, {"empirical", emp.to_json()}};
  std::optional<double> tv;
  if (cfg.contains("reference_samples")) {
    require(model.has_value(), "balls: a clique-tree reference needs a model");
    ExperimentPlan plan;
    plan.seed = seed;
    plan.threads = threads;
    plan.reference_samples = detail::get_count(cfg["reference_samples"], "balls.reference_samples");
    const auto ref = detail::reference_balls(*model, detail::optional_limit_spec(*model), r, plan);
    tv = tv_distance(emp, ref);
    out["reference"] = ref.to_json();
    out["tv"] = *tv;
  }
  if (o.format == "json") {
    emit(o, "balls.json", out.dump(2) + "\n");
  } else {
    ConvergenceRow row;
    row.n1 = g.vertex_count();
    row.statistic = "ball_dist(" + std::to_string(r) + ")";
    row.empirical = tv.value_or(std::nan(""));
    row.tv = tv;
    if (tv) row.limit = 0.0;
    emit(o, "balls.csv", rows_text(o, {row}));
  }
  return 0;
}

int cmd_converge(const Options& o) {
  const ExperimentPlan plan = load_plan(o);
  emit(o, "converge." + o.format, rows_text(o, run_experiment(plan)));
  return 0;
}

int cmd_theorem21(const Options& o) {
  const ExperimentPlan plan = load_plan(o);
  std::string pattern = o.pattern;
  if (pattern.empty()) pattern = plan.pattern.value_or("");
  require(!pattern.empty(), "theorem21: a pattern is required (--pattern or plan.pattern)");
  emit(o, "theorem21." + o.format, rows_text(o, theorem21_suite(plan, pattern)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random intersection graph simulator"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("--config", o.config, "configuration file (JSON)");
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--out", o.out, "output directory");
    c->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  std::map<std::string, std::function<int(const Options&)>> handlers = {
      {"generate", cmd_generate}, {"stats", cmd_stats},       {"limits", cmd_limits},
      {"balls", cmd_balls},       {"converge", cmd_converge}, {"theorem21", cmd_theorem21}};
  std::map<std::string, std::string> help = {
      {"generate", "sample a graph from a model"},
      {"stats", "statistics of a graph file"},
      {"limits", "closed-form limit report"},
      {"balls", "empirical and clique-tree ball distributions"},
      {"converge", "run an experiment plan"},
      {"theorem21", "moment, count and Sidorenko trajectories for a pattern"}};
  for (const auto& [name, h] : handlers) {
    auto* c = app.add_subcommand(name, help[name]);
    common(c);
    if (name == "stats") c->add_option("--graph", o.graph, "edge-list file");
    if (name == "theorem21") c->add_option("--pattern", o.pattern, "pattern name, e.g. K3 or P3");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  try {
    for (const auto& [name, h] : handlers)
      if (app.got_subcommand(name)) return h(o);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "abort: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
