#pragma once

// Convergence experiments: generate G_n along a size ladder, compute
// statistics, and compare them with their limits.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clique_tree.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "limits.hpp"
#include "parallel.hpp"
#include "stats.hpp"
#include "subgraph.hpp"

namespace rig {

inline constexpr double kDefaultEdgeBudget = 5e7;

// One requested statistic, parsed from its name:
//   alpha, alpha_<k>, assort, r_<k>, pi_<k>, moment_<k>, emb(<pattern>),
//   ball_dist(<r>)
struct Statistic {
  enum Kind { alpha, alpha_k, assort, r_k, pi_k, moment_k, emb, ball_dist } kind = alpha;
  long long k = 0;
  std::optional<Pattern> pattern;
  std::string name;

  static Statistic parse(const std::string& s) {
    static const std::regex indexed(R"((alpha|r|pi|moment)_(\d+))");
    static const std::regex emb_re(R"(emb\(([A-Za-z0-9@]+)\))");
    static const std::regex ball_re(R"(ball_dist\((\d+)\))");
    std::smatch m;
    Statistic st;
    st.name = s;
    if (s == "alpha") {
      st.kind = alpha;
    } else if (s == "assort") {
      st.kind = assort;
    } else if (std::regex_match(s, m, indexed)) {
      st.k = std::stoll(m[2]);
      const std::string base = m[1];
      st.kind = base == "alpha" ? alpha_k : base == "r" ? r_k : base == "pi" ? pi_k : moment_k;
      if (st.kind == alpha_k) require(st.k >= 2, "alpha_k needs k >= 2");
      if (st.kind == r_k || st.kind == moment_k) require(st.k >= 1, s + " needs k >= 1");
    } else if (std::regex_match(s, m, emb_re)) {
      st.kind = emb;
      st.pattern = Pattern::parse(m[1]);
    } else if (std::regex_match(s, m, ball_re)) {
      st.kind = ball_dist;
      st.k = std::stoll(m[1]);
    } else {
      throw validation_error("unknown statistic '" + s + "'");
    }
    return st;
  }
};

struct Perturbation {
  double gamma = 0.5;  // planted clique of size ceil(n1^gamma)
};

struct ExperimentPlan {
  json model;  // model description without n1; needs beta unless configuration
  std::vector<std::size_t> ladder;
  std::vector<std::string> statistics;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  std::optional<Perturbation> perturbation;
  std::size_t reference_samples = 100'000;  // clique-tree and Monte Carlo limit samples
  std::optional<double> gap_threshold;      // default 3 (emp_stderr + limit_stderr)
  double edge_budget = kDefaultEdgeBudget;
  unsigned threads = 1;
  std::optional<std::string> pattern;  // for theorem21_suite

  ModelConfig model_at(std::size_t n1) const { return parse_model(model, n1); }

  void validate() const {
    require(!ladder.empty(), "plan: ladder must not be empty");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      require(ladder[i] >= 1, "plan: ladder sizes must be >= 1");
      if (i) require(ladder[i] > ladder[i - 1], "plan: ladder must be strictly increasing");
    }
    require(replications >= 1, "plan: replications must be >= 1");
    require(reference_samples >= 2, "plan: reference_samples must be >= 2");
    if (perturbation) require(perturbation->gamma > 0.0 && perturbation->gamma < 1.0, "plan: gamma must lie in (0, 1)");
    for (const auto& s : statistics) Statistic::parse(s);
    for (std::size_t n1 : ladder) model_at(n1);
  }

  static ExperimentPlan from_json(const json& j) {
    ExperimentPlan p;
    const std::string where = "plan";
    p.model = detail::field(j, "model", where);
    for (const auto& x : detail::field(j, "ladder", where)) p.ladder.push_back(detail::get_count(x, "plan.ladder"));
    if (j.contains("statistics")) p.statistics = detail::get_as<std::vector<std::string>>(j["statistics"], "plan.statistics");
    if (j.contains("replications")) p.replications = detail::get_count(j["replications"], "plan.replications");
    if (j.contains("seed")) p.seed = detail::get_as<std::uint64_t>(j["seed"], "plan.seed");
    if (j.contains("perturbation") && !j["perturbation"].is_null())
      p.perturbation = Perturbation{detail::get_field<double>(j["perturbation"], "gamma", "plan.perturbation")};
    if (j.contains("reference_samples")) p.reference_samples = detail::get_count(j["reference_samples"], "plan.reference_samples");
    if (j.contains("gap_threshold")) p.gap_threshold = detail::get_as<double>(j["gap_threshold"], "plan.gap_threshold");
    if (j.contains("edge_budget")) p.edge_budget = detail::get_as<double>(j["edge_budget"], "plan.edge_budget");
    if (j.contains("threads")) p.threads = static_cast<unsigned>(detail::get_count(j["threads"], "plan.threads"));
    if (j.contains("pattern")) p.pattern = detail::get_as<std::string>(j["pattern"], "plan.pattern");
    return p;
  }
};

struct ConvergenceRow {
  std::size_t n1 = 0;
  std::string statistic;
  double empirical = 0.0;
  double emp_stderr = 0.0;
  std::optional<double> limit;
  double limit_stderr = 0.0;
  std::optional<double> tv;
  std::optional<bool> converged;

  double gap() const { return limit ? std::abs(empirical - *limit) : std::nan(""); }

  json to_json() const {
    json j = {{"n1", n1}, {"statistic", statistic}, {"empirical", empirical}, {"emp_stderr", emp_stderr}};
    j["limit"] = limit ? json(*limit) : json(nullptr);
    j["limit_stderr"] = limit ? json(limit_stderr) : json(nullptr);
    j["gap"] = limit ? json(gap()) : json(nullptr);
    j["tv"] = tv ? json(*tv) : json(nullptr);
    if (converged) j["converged"] = *converged;
    return j;
  }
};

inline std::string format_cell(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "n1,statistic,empirical,emp_stderr,limit,limit_stderr,gap,tv\n";
  for (const auto& r : rows) {
    os << r.n1 << ',' << r.statistic << ',' << format_cell(r.empirical) << ',' << format_cell(r.emp_stderr) << ','
       << (r.limit ? format_cell(*r.limit) : "") << ',' << (r.limit ? format_cell(r.limit_stderr) : "") << ','
       << format_cell(r.gap()) << ',' << (r.tv ? format_cell(*r.tv) : "") << '\n';
  }
}

inline void write_json(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) arr.push_back(r.to_json());
  os << arr.dump(2) << '\n';
}

namespace detail {

struct Sample {
  Graph g;
  std::optional<Graph> base;  // unperturbed graph when a perturbation is applied
};

inline std::size_t clique_size(std::size_t n, double gamma) {
  return std::min(n, static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), gamma) - 1e-9)));
}

// G_n for (size, replication); generation uses substream (seed, n1, rep),
// the perturbation (seed, n1, rep, 1).
inline Sample sample_graph(const ExperimentPlan& plan, std::size_t n1, std::size_t rep) {
  ModelConfig cfg = plan.model_at(n1);
  Rng rng = Rng::substream(plan.seed, {n1, rep});
  Sample s{intersection_graph(generate(cfg, rng)), std::nullopt};
  if (plan.perturbation) {
    Rng prng = Rng::substream(plan.seed, {n1, rep, 1});
    Graph p = plant_clique(s.g, clique_size(s.g.vertex_count(), plan.perturbation->gamma), prng);
    s.base = std::move(s.g);
    s.g = std::move(p);
  }
  return s;
}

inline void mean_and_stderr(const std::vector<double>& x, double& mean, double& se) {
  double s1 = 0.0, s2 = 0.0;
  for (double v : x) {
    s1 += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(x.size());
  mean = s1 / n;
  se = mean_stderr(s1, s2, n);
}

inline void check_edge_budget(const ExperimentPlan& plan, const LimitSpec& spec) {
  const std::size_t n1 = plan.ladder.back();
  double edges = 0.0;
  try {
    edges = static_cast<double>(n1) * dstar_moment(spec, 1).value / 2.0;
  } catch (const moment_unavailable&) {
    return;
  }
  if (plan.perturbation) {
    const double s = static_cast<double>(clique_size(n1, plan.perturbation->gamma));
    edges += s * (s - 1) / 2;
  }
  if (edges > plan.edge_budget)
    throw validation_error("plan: estimated " + format_number(edges) + " edges at n1 = " + std::to_string(n1) +
                           " exceeds the edge budget " + format_number(plan.edge_budget));
}

inline void assert_sidorenko(const Pattern& H, const Graph& g, const std::string& where) {
  if (!sidorenko_bound(H, g).holds)
    throw runtime_abort(where + ": Sidorenko bound violated, counting is broken");
}

// Limit of a scalar statistic; nullopt for ball distributions.
struct Limit {
  double value = 0.0;
  double stderr_ = 0.0;
};

inline Limit scalar_limit(const Statistic& st, const LimitSpec& spec, const ExperimentPlan& plan) {
  auto from = [](const Estimate& e) { return Limit{e.value, e.std_error}; };
  const std::uint64_t seed = mix64(plan.seed, 0x6c696d6974ULL);
  switch (st.kind) {
    case Statistic::alpha: return from(limit_clustering(spec));
    case Statistic::alpha_k:
      return from(limit_conditional_clustering(spec, st.k, CondMethod::automatic, plan.reference_samples, seed,
                                               plan.threads));
    case Statistic::assort: return from(limit_assortativity(spec));
    case Statistic::r_k:
      return from(limit_conditional_assortativity(spec, st.k, CondMethod::automatic, plan.reference_samples, seed,
                                                  plan.threads));
    case Statistic::pi_k: return from(limit_degree_pmf(spec, st.k, plan.reference_samples, seed, plan.threads));
    case Statistic::moment_k: return from(dstar_moment(spec, static_cast<int>(st.k)));
    case Statistic::emb: {
      if (auto e = limit_emb_density(spec, *st.pattern)) return from(*e);
      const Pattern rooted = st.pattern->rootings().front();
      return from(rooted_emb_expectation_mc(spec, rooted, root_eccentricity(rooted), plan.reference_samples, seed,
                                            plan.threads));
    }
    case Statistic::ball_dist: break;
  }
  throw validation_error("no scalar limit for " + st.name);
}

inline StatReport statistic_report(const Statistic& st, const Graph& g, unsigned threads = 1) {
  switch (st.kind) {
    case Statistic::alpha: return clustering(g, threads);
    case Statistic::alpha_k: return conditional_clustering(g, static_cast<std::size_t>(st.k));
    case Statistic::assort: return assortativity(g);
    case Statistic::r_k: return conditional_assortativity(g, static_cast<std::size_t>(st.k));
    case Statistic::pi_k: {
      require_nonempty(g, "pi_k");
      std::size_t c = 0;
      for (vertex_t v = 0; v < g.vertex_count(); ++v) c += g.degree(v) == static_cast<std::size_t>(st.k);
      return make_report(st.name, c, g.vertex_count());
    }
    case Statistic::moment_k: {
      require_nonempty(g, "moment_k");
      bigint s = 0;
      for (vertex_t v = 0; v < g.vertex_count(); ++v) s += boost::multiprecision::pow(bigint(g.degree(v)), static_cast<unsigned>(st.k));
      return make_report(st.name, s, g.vertex_count());
    }
    case Statistic::emb:
      require_nonempty(g, "emb");
      return make_report(st.name, emb_count(*st.pattern, g, threads), g.vertex_count());
    case Statistic::ball_dist: break;
  }
  throw validation_error("no scalar value for " + st.name);
}

inline double scalar_value(const Statistic& st, const Graph& g, unsigned threads = 1) {
  return statistic_report(st, g, threads).value;
}

// Clique-tree reference law of B_r; for D1 = 0 (no attributes) the limit is
// the isolated vertex.
inline BallHistogram reference_balls(const ModelConfig& cfg, const std::optional<LimitSpec>& spec, std::size_t r,
                                     const ExperimentPlan& plan) {
  const std::uint64_t seed = mix64(plan.seed, 0x62616c6c73ULL + r);
  if (!spec) {
    BallHistogram h;
    h.add(RootedGraph().code(), plan.reference_samples);
    (void)cfg;
    return h;
  }
  return ball_distribution_mc(spec->D1, spec->D2, r, plan.reference_samples, seed, plan.threads);
}

// Limit spec, or nullopt when part 1 has no attributes at all (P = 0).
inline std::optional<LimitSpec> optional_limit_spec(const ModelConfig& cfg) {
  if ((cfg.model == ModelKind::active || cfg.model == ModelKind::passive) && cfg.P && cfg.P->max_value() &&
      *cfg.P->max_value() == 0)
    return std::nullopt;
  return limit_spec(cfg);
}

}  // namespace detail

// Rows per (size, statistic); with a perturbation, additional "<stat>@base"
// rows for the unperturbed graph and, for ball distributions,
// "ball_dist(r)@shift" rows holding the TV between perturbed and unperturbed
// empirical laws. For ball_dist rows the empirical column is the mean TV to
// the clique-tree reference, against limit 0.
inline std::vector<ConvergenceRow> run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  std::vector<Statistic> stats;
  for (const auto& s : plan.statistics) stats.push_back(Statistic::parse(s));
  const ModelConfig cfg0 = plan.model_at(plan.ladder.front());
  const auto spec = detail::optional_limit_spec(cfg0);
  if (spec) detail::check_edge_budget(plan, *spec);

  // limits once, up front
  std::vector<std::optional<detail::Limit>> limits(stats.size());
  std::map<std::size_t, BallHistogram> refs;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (stats[i].kind == Statistic::ball_dist) {
      const auto r = static_cast<std::size_t>(stats[i].k);
      if (!refs.count(r)) refs.emplace(r, detail::reference_balls(cfg0, spec, r, plan));
    } else if (spec) {
      limits[i] = detail::scalar_limit(stats[i], *spec, plan);
    }
  }

  std::vector<ConvergenceRow> rows;
  for (std::size_t n1 : plan.ladder) {
    const std::size_t R = plan.replications;
    const bool perturbed = plan.perturbation.has_value();
    // values[rep][stat] on G (and on base / shift when perturbed)
    std::vector<std::vector<double>> val(R, std::vector<double>(stats.size())), base(R, std::vector<double>(stats.size())),
        shift(R, std::vector<double>(stats.size()));
    const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, plan.threads), R));
    const unsigned inner = std::max(1u, plan.threads / outer);
    parallel_blocks(R, outer, [&](std::size_t b, std::size_t e, unsigned) {
      for (std::size_t rep = b; rep < e; ++rep) {
        const std::string where = "n1=" + std::to_string(n1) + " rep=" + std::to_string(rep);
        try {
          auto smp = detail::sample_graph(plan, n1, rep);
          for (std::size_t i = 0; i < stats.size(); ++i) {
            const auto& st = stats[i];
            if (st.kind == Statistic::emb) {
              detail::assert_sidorenko(*st.pattern, smp.g, where);
              if (smp.base) detail::assert_sidorenko(*st.pattern, *smp.base, where);
            }
            if (st.kind == Statistic::ball_dist) {
              const auto r = static_cast<std::size_t>(st.k);
              const auto h = empirical_ball_dist(smp.g, r, std::nullopt, 0, inner);
              val[rep][i] = tv_distance(h, refs.at(r));
              if (smp.base) {
                const auto hb = empirical_ball_dist(*smp.base, r, std::nullopt, 0, inner);
                base[rep][i] = tv_distance(hb, refs.at(r));
                shift[rep][i] = tv_distance(h, hb);
              }
            } else {
              val[rep][i] = detail::scalar_value(st, smp.g, inner);
              if (smp.base) base[rep][i] = detail::scalar_value(st, *smp.base, inner);
            }
          }
        } catch (const validation_error& e) {
          throw validation_error(where + ": " + e.what());
        } catch (const std::exception& e) {
          throw runtime_abort(where + ": " + e.what());
        }
      }
    });
    auto emit = [&](const Statistic& st, std::size_t i, const std::vector<std::vector<double>>& src,
                    const std::string& name, bool shift_row) {
      std::vector<double> x;
      for (std::size_t rep = 0; rep < R; ++rep) x.push_back(src[rep][i]);
      ConvergenceRow row;
      row.n1 = n1;
      row.statistic = name;
      detail::mean_and_stderr(x, row.empirical, row.emp_stderr);
      if (st.kind == Statistic::ball_dist) {
        row.tv = row.empirical;
        if (!shift_row) row.limit = 0.0;
      } else if (limits[i]) {
        row.limit = limits[i]->value;
        row.limit_stderr = limits[i]->stderr_;
      }
      if (row.limit) {
        const double thr = plan.gap_threshold ? *plan.gap_threshold : 3.0 * (row.emp_stderr + row.limit_stderr);
        row.converged = row.gap() <= thr;
      }
      rows.push_back(row);
    };
    for (std::size_t i = 0; i < stats.size(); ++i) {
      emit(stats[i], i, val, stats[i].name, false);
      if (perturbed) {
        emit(stats[i], i, base, stats[i].name + "@base", false);
        if (stats[i].kind == Statistic::ball_dist) emit(stats[i], i, shift, stats[i].name + "@shift", true);
      }
    }
  }
  return rows;
}

// TV rows for B_r only.
inline std::vector<ConvergenceRow> ball_convergence(ExperimentPlan plan, std::size_t r) {
  plan.statistics = {"ball_dist(" + std::to_string(r) + ")"};
  return run_experiment(plan);
}

// For pattern H on h vertices, per size:
//   moment_<h-1>     E d_n^{h-1} against E (d*)^{h-1}
//   emb(H)           n1^-1 emb(H, G_n) against the closed form, if known
//   emb(H@v)         the same empirical value against the Monte Carlo
//                    E emb'(H', G_T, root), one row per rooting class
//   sidorenko(H)     fraction of replications where the bound holds
inline std::vector<ConvergenceRow> theorem21_suite(ExperimentPlan plan, const std::string& pattern_name) {
  const Pattern H = Pattern::parse(pattern_name);
  require(H.size() <= 4, "theorem21_suite: pattern must have at most 4 vertices");
  const std::string base_name = pattern_name.substr(0, pattern_name.find('@'));
  const int h1 = static_cast<int>(H.size() - 1);
  plan.statistics = {"moment_" + std::to_string(h1), "emb(" + base_name + ")"};
  plan.pattern = pattern_name;
  auto rows = run_experiment(plan);

  plan.validate();
  const ModelConfig cfg0 = plan.model_at(plan.ladder.front());
  const auto spec = detail::optional_limit_spec(cfg0);
  const auto rootings = H.rootings();
  std::vector<Estimate> rooted;
  if (spec) {
    for (std::size_t i = 0; i < rootings.size(); ++i) {
      const auto& Hr = rootings[i];
      rooted.push_back(rooted_emb_expectation_mc(*spec, Hr, root_eccentricity(Hr), plan.reference_samples,
                                                 mix64(plan.seed, 0x726f6f74ULL + i), plan.threads));
    }
  }
  std::vector<ConvergenceRow> out;
  for (std::size_t n1 : plan.ladder) {
    const ConvergenceRow* emb_row = nullptr;
    for (const auto& r : rows)
      if (r.n1 == n1) {
        out.push_back(r);
        if (r.statistic == "emb(" + base_name + ")") emb_row = &r;
      }
    for (std::size_t i = 0; i < rootings.size() && emb_row; ++i) {
      ConvergenceRow row = *emb_row;
      row.statistic = "emb(" + base_name + "@" + std::to_string(*rootings[i].root()) + ")";
      row.limit = rooted[i].value;
      row.limit_stderr = rooted[i].std_error;
      const double thr = plan.gap_threshold ? *plan.gap_threshold : 3.0 * (row.emp_stderr + row.limit_stderr);
      row.converged = row.gap() <= thr;
      out.push_back(row);
    }
    // run_experiment checked the bound on every graph and aborts on a violation
    const std::size_t holds = plan.replications;
    ConvergenceRow s;
    s.n1 = n1;
    s.statistic = "sidorenko(" + base_name + ")";
    s.empirical = static_cast<double>(holds) / static_cast<double>(plan.replications);
    s.limit = 1.0;
    s.converged = holds == plan.replications;
    out.push_back(s);
  }
  return out;
}

}  // namespace rig
