// hybridnet_cli: generate / simulate / meanfield / analyze / compare.
//
// One JSON config drives everything; --seed and --out override the config.
// Every run drops a run_manifest.json next to its outputs.  The manifest is
// the only artifact carrying a timestamp, so reruns with equal seeds produce
// byte-identical data files.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "hybridnet/analysis.hpp"
#include "hybridnet/config.hpp"
#include "hybridnet/generators.hpp"
#include "hybridnet/graph.hpp"
#include "hybridnet/io.hpp"
#include "hybridnet/meanfield.hpp"
#include "hybridnet/propagation.hpp"
#include "hybridnet/rng.hpp"

namespace fs = std::filesystem;
using namespace hybridnet;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  std::optional<std::uint32_t> replicas_override;
  bool quiet = false;
};

struct RunContext {
  std::string command;
  ExperimentConfig cfg;
  std::uint64_t seed = 0;
  fs::path out_dir;
  bool quiet = false;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  fs::path path(const std::string& name) const { return out_dir / name; }

  void note(const fs::path& p) {
    outputs.push_back(fs::relative(p, out_dir).string());
    if (!quiet) std::cout << "wrote " << p.string() << "\n";
  }
};

std::string utc_now_iso8601() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(RunContext& ctx) {
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.t0).count();
  json j{{"tool", "hybridnet_cli"},
         {"version", kVersion},
         {"command", ctx.command},
         {"seed", ctx.seed},
         {"output_dir", ctx.out_dir.string()},
         {"outputs", ctx.outputs},
         {"generated_utc", utc_now_iso8601()},
         {"elapsed_seconds", elapsed}};
  write_text_file(ctx.path("run_manifest.json").string(), j.dump(2) + "\n");
}

RunContext make_context(const std::string& command, const CliOptions& opt) {
  RunContext ctx;
  ctx.command = command;
  ctx.cfg = ExperimentConfig::load(opt.config_path);
  ctx.seed = opt.seed_override.value_or(ctx.cfg.seed);
  ctx.out_dir = opt.out_override.value_or(ctx.cfg.output_dir);
  ctx.quiet = opt.quiet;
  if (opt.replicas_override && ctx.cfg.propagation)
    ctx.cfg.propagation->cfg.replicas = *opt.replicas_override;
  fs::create_directories(ctx.out_dir);
  return ctx;
}

HybridGraph build_graph(const GeneratorConfig& gen, std::uint64_t seed,
                        ConstructionLog* log) {
  GeneratorParams params = gen.params;
  params.rng_seed = seed;
  if (gen.kind == "ws") {
    RngStream rng(derive_seed(seed, "ws"));
    return generate_ws(params.n_total, params.k_ring, params.p_rewire, rng, log);
  }
  if (gen.kind == "ba") {
    RngStream rng(derive_seed(seed, "ba"));
    return generate_ba(params.n_total, params.m_attach, rng, log);
  }
  if (gen.kind == "network_i") return generate_network_i(params, log);
  if (gen.kind == "network_ii") return generate_network_ii(params, log);
  if (gen.kind == "network_iii")
    return generate_network_iii(params, log, gen.plan ? &*gen.plan : nullptr);
  throw ConfigError("generator: unknown kind '" + gen.kind + "'");
}

HybridGraph load_or_build_graph(RunContext& ctx,
                                const std::optional<std::string>& graph_file) {
  if (graph_file) return read_edge_list(*graph_file);
  if (!ctx.cfg.generator)
    throw ConfigError(ctx.command + ": need a 'generator' section or a graph_file");
  return build_graph(*ctx.cfg.generator, ctx.seed, nullptr);
}

int cmd_generate(const CliOptions& opt) {
  RunContext ctx = make_context("generate", opt);
  if (!ctx.cfg.generator) throw ConfigError("generate: missing 'generator' section");
  const GeneratorConfig& gen = *ctx.cfg.generator;
  ConstructionLog log;
  HybridGraph g = build_graph(gen, ctx.seed, gen.construction_log ? &log : nullptr);

  write_edge_list(g, ctx.path("graph.edges").string());
  ctx.note(ctx.path("graph.edges"));
  write_node_metadata(g, ctx.path("nodes.json").string());
  ctx.note(ctx.path("nodes.json"));
  if (gen.construction_log) {
    write_construction_log(log, ctx.path("construction_log.jsonl").string());
    ctx.note(ctx.path("construction_log.jsonl"));
  }
  if (!ctx.quiet)
    std::cout << gen.kind << ": " << g.n() << " nodes, " << g.edge_count()
              << " edges, <k>=" << fmt_num(g.average_degree(DegreeMode::All)) << "\n";
  write_manifest(ctx);
  return 0;
}

int cmd_simulate(const CliOptions& opt) {
  RunContext ctx = make_context("simulate", opt);
  if (!ctx.cfg.propagation) throw ConfigError("simulate: missing 'propagation' section");
  PropagationSection sec = *ctx.cfg.propagation;
  sec.cfg.rng_seed = ctx.seed;

  HybridGraph g = load_or_build_graph(ctx, sec.graph_file);
  if (sec.cfg.delta) {
    RngStream label_rng(derive_seed(ctx.seed, "implicit"));
    g.assign_implicit_edges(*sec.cfg.delta, label_rng);
  }

  SimulationTrace tr = run(g, sec.cfg);
  write_trace_csv(tr, ctx.path("trace.csv").string());
  ctx.note(ctx.path("trace.csv"));
  write_trigger_summary(tr, sec.cfg, ctx.path("triggers.json").string());
  ctx.note(ctx.path("triggers.json"));
  if (sec.cfg.keep_replica_traces) {
    fs::create_directories(ctx.path("replicas"));
    for (std::size_t r = 0; r < tr.replica_traces.size(); ++r) {
      char name[48];
      std::snprintf(name, sizeof name, "replicas/replica_%zu.csv", r);
      write_replica_trace_csv(tr.replica_traces[r], ctx.path(name).string());
      ctx.note(ctx.path(name));
    }
  }
  if (!ctx.quiet) {
    const double i_end = tr.i.back();
    std::cout << "simulate: " << sec.cfg.replicas << " replicas, horizon " << sec.cfg.horizon
              << ", final i=" << fmt_num(i_end) << "\n";
  }
  write_manifest(ctx);
  return 0;
}

int cmd_meanfield(const CliOptions& opt) {
  RunContext ctx = make_context("meanfield", opt);
  if (!ctx.cfg.meanfield) throw ConfigError("meanfield: missing 'meanfield' section");
  const MeanFieldSection& sec = *ctx.cfg.meanfield;

  DegreeDistribution dist = sec.support.build();
  DegreeClassField field = DegreeClassField::uniform_seed(dist, sec.i0);
  MeanFieldCsvWriter writer;
  IntegrateOptions iopt;
  iopt.dt = sec.dt;
  iopt.t_max = sec.t_max;
  iopt.sample_stride = sec.sample_stride;
  iopt.sink = std::ref(writer);
  const IntegrateStats stats = integrate(field, sec.params, iopt);
  write_text_file(ctx.path("meanfield.csv").string(), writer.str());
  ctx.note(ctx.path("meanfield.csv"));

  ThresholdInputs tin;
  tin.full = dist;
  tin.ws_part = sec.support.build_ws_part();
  tin.w = sec.params.w;
  tin.sigma = sec.params.sigma;
  tin.a = sec.support.a;
  tin.m = sec.support.m;
  tin.M = sec.support.M;
  write_threshold_report(threshold(tin), ctx.path("threshold.json").string());
  ctx.note(ctx.path("threshold.json"));

  if (!ctx.quiet)
    std::cout << "meanfield: t_end=" << fmt_num(stats.t_end) << ", steps=" << stats.steps
              << ", final theta=" << fmt_num(theta(field)) << "\n";
  write_manifest(ctx);
  return 0;
}

int cmd_analyze(const CliOptions& opt) {
  RunContext ctx = make_context("analyze", opt);
  if (!ctx.cfg.analyze) throw ConfigError("analyze: missing 'analyze' section");
  const AnalyzeSection& sec = *ctx.cfg.analyze;

  HybridGraph g = load_or_build_graph(ctx, sec.graph_file);
  const DegreeHistogram hist = empirical_distribution(g, DegreeMode::All);
  write_histogram_csv(hist, ctx.path("degree_histogram.csv").string());
  ctx.note(ctx.path("degree_histogram.csv"));

  const auto binned = log_binned(hist, sec.bins_per_decade);
  write_binned_csv(binned, ctx.path("degree_histogram_binned.csv").string());
  ctx.note(ctx.path("degree_histogram_binned.csv"));

  json fit_json{{"k_lo", sec.fit_k_lo}, {"k_hi", sec.fit_k_hi}};
  try {
    const TailFit fit = fit_tail_slope(binned, sec.fit_k_lo, sec.fit_k_hi);
    fit_json["slope"] = fit.slope;
    fit_json["intercept"] = fit.intercept;
    fit_json["points_used"] = fit.points_used;
  } catch (const std::domain_error& e) {
    fit_json["slope"] = nullptr;
    fit_json["note"] = e.what();
  }
  write_text_file(ctx.path("tail_fit.json").string(), fit_json.dump(2) + "\n");
  ctx.note(ctx.path("tail_fit.json"));

  if (ctx.cfg.generator) {
    const GeneratorConfig& gen = *ctx.cfg.generator;
    const GeneratorParams& p = gen.params;
    std::ostringstream out;
    out << "k,p\n";
    const std::uint32_t k_max = hist.max_degree();
    for (std::uint32_t k = 1; k <= k_max; ++k) {
      double val = 0.0;
      if (gen.kind == "ws")
        val = ws_degree_pmf(k, p.k_ring, p.p_rewire, 0.0, p.n_total);
      else if (gen.kind == "ba")
        val = ba_degree_pdf(k, p.m_attach, 0.0);
      else
        val = hybrid_degree_pdf(k, p.k_ring, p.p_rewire, p.a, p.n_total, p.m_attach);
      out << k << ',' << fmt_num(val) << "\n";
    }
    write_text_file(ctx.path("analytic_pmf.csv").string(), out.str());
    ctx.note(ctx.path("analytic_pmf.csv"));
  }

  if (!ctx.quiet)
    std::cout << "analyze: n=" << g.n() << ", k_max=" << hist.max_degree()
              << ", connected=" << (is_connected(g) ? "yes" : "no") << "\n";
  write_manifest(ctx);
  return 0;
}

int cmd_compare(const CliOptions& opt) {
  RunContext ctx = make_context("compare", opt);
  if (!ctx.cfg.compare) throw ConfigError("compare: missing 'compare' section");
  if (!ctx.cfg.propagation)
    throw ConfigError("compare: missing 'propagation' section (simulation settings)");
  const CompareSection& sec = *ctx.cfg.compare;

  const Curve reference = read_curve_csv(sec.external_curve);
  HybridGraph g = load_or_build_graph(ctx, ctx.cfg.propagation->graph_file);
  PropagationConfig base = ctx.cfg.propagation->cfg;
  base.rng_seed = ctx.seed;
  if (base.delta) {
    RngStream label_rng(derive_seed(ctx.seed, "implicit"));
    g.assign_implicit_edges(*base.delta, label_rng);
  }

  json results = json::array();
  double best_rho = -std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t idx = 0; idx < sec.mixtures.size(); ++idx) {
    PropagationConfig cfg = base;
    cfg.mixture = sec.mixtures[idx];
    const SimulationTrace tr = run(g, cfg);
    Curve sim;
    for (std::size_t t = 0; t < tr.i.size(); ++t) {
      sim.t.push_back(static_cast<double>(t));
      sim.v.push_back(tr.i[t]);
    }
    char name[48];
    std::snprintf(name, sizeof name, "compare_trace_%zu.csv", idx);
    write_curve_csv(sim, ctx.path(name).string());
    ctx.note(ctx.path(name));

    const SimilarityReport rep = similarity_resampled(reference, sim);
    const std::string label =
        idx < sec.labels.size() ? sec.labels[idx] : std::string("mixture_") + std::to_string(idx);
    results.push_back(json{{"label", label},
                           {"u", cfg.mixture.u},
                           {"w", cfg.mixture.w},
                           {"q", cfg.mixture.q},
                           {"rho", rep.rho},
                           {"grid_points", rep.grid_points}});
    if (rep.rho > best_rho) {
      best_rho = rep.rho;
      best_idx = idx;
    }
    if (!ctx.quiet)
      std::cout << "compare: " << label << " rho=" << fmt_num(rep.rho) << "\n";
  }
  json j{{"reference", sec.external_curve},
         {"results", results},
         {"best", results[best_idx]["label"]}};
  write_text_file(ctx.path("similarity.json").string(), j.dump(2) + "\n");
  ctx.note(ctx.path("similarity.json"));
  write_manifest(ctx);
  return 0;
}

void add_common(CLI::App* sub, CliOptions& opt) {
  sub->add_option("--config", opt.config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", opt.seed_override, "override the config seed");
  sub->add_option("--out", opt.out_override, "override the output directory");
  sub->add_option("--replicas", opt.replicas_override, "override replica count");
  sub->add_flag("--quiet", opt.quiet, "suppress progress output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid network generation, propagation and analysis toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CliOptions opt;
  int (*handler)(const CliOptions&) = nullptr;
  for (const auto& [name, fn, help] :
       {std::tuple{"generate", &cmd_generate, "build a network and write its edge list"},
        std::tuple{"simulate", &cmd_simulate, "run the propagation model on a network"},
        std::tuple{"meanfield", &cmd_meanfield, "integrate the degree-class rate equations"},
        std::tuple{"analyze", &cmd_analyze, "degree statistics and tail fit for a network"},
        std::tuple{"compare", &cmd_compare, "rank model mixtures against a reference curve"}}) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, opt);
    sub->callback([&handler, fn = fn] { handler = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    return handler(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
