#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridnet/generators.hpp"
#include "hybridnet/io.hpp"
#include "hybridnet/meanfield.hpp"
#include "hybridnet/propagation.hpp"

namespace hybridnet {

/** Experiment configuration: one JSON file, strict keys, sections per command. */

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace cfgdetail {

inline void require_keys(const json& j, const std::string& where,
                         const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + key + "'");
  }
}

template <typename T>
T get_req(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": bad value for '" + key + "'");
  }
}

}  // namespace cfgdetail

struct GeneratorConfig {
  std::string kind;  // ws | ba | network_i | network_ii | network_iii
  GeneratorParams params;
  std::optional<SubnetPlan> plan;
  bool construction_log = false;

  static GeneratorConfig from_json(const json& j) {
    cfgdetail::require_keys(j, "generator",
                            {"kind", "n", "a", "k_ring", "p_rewire", "m_attach",
                             "subnet_plan", "construction_log"});
    GeneratorConfig g;
    g.kind = cfgdetail::get_req<std::string>(j, "generator", "kind");
    const std::set<std::string> kinds{"ws", "ba", "network_i", "network_ii",
                                      "network_iii"};
    if (!kinds.count(g.kind))
      throw ConfigError("generator: unknown kind '" + g.kind + "'");
    g.params.n_total = cfgdetail::get_req<std::uint32_t>(j, "generator", "n");
    g.params.a = cfgdetail::get_or<double>(j, "a", g.params.a);
    g.params.k_ring = cfgdetail::get_or<std::uint32_t>(j, "k_ring", g.params.k_ring);
    g.params.p_rewire = cfgdetail::get_or<double>(j, "p_rewire", g.params.p_rewire);
    g.params.m_attach = cfgdetail::get_or<std::uint32_t>(j, "m_attach", g.params.m_attach);
    g.construction_log = cfgdetail::get_or<bool>(j, "construction_log", false);
    if (j.contains("subnet_plan")) {
      const json& p = j.at("subnet_plan");
      cfgdetail::require_keys(p, "generator.subnet_plan", {"sizes", "kinds"});
      SubnetPlan plan;
      plan.sizes = cfgdetail::get_req<std::vector<std::uint32_t>>(p, "subnet_plan", "sizes");
      for (const auto& k :
           cfgdetail::get_req<std::vector<std::string>>(p, "subnet_plan", "kinds")) {
        if (k == "ws")
          plan.kinds.push_back(SubnetKind::WS);
        else if (k == "ba")
          plan.kinds.push_back(SubnetKind::BA);
        else
          throw ConfigError("subnet_plan: kind must be 'ws' or 'ba'");
      }
      plan.validate();
      g.plan = plan;
    }
    return g;
  }

  json to_json() const {
    json j{{"kind", kind},
           {"n", params.n_total},
           {"a", params.a},
           {"k_ring", params.k_ring},
           {"p_rewire", params.p_rewire},
           {"m_attach", params.m_attach},
           {"construction_log", construction_log}};
    if (plan) {
      json p{{"sizes", plan->sizes}, {"kinds", json::array()}};
      for (const auto k : plan->kinds)
        p["kinds"].push_back(k == SubnetKind::WS ? "ws" : "ba");
      j["subnet_plan"] = p;
    }
    return j;
  }
};

struct PropagationSection {
  PropagationConfig cfg;
  std::optional<std::string> graph_file;

  static PropagationSection from_json(const json& j) {
    cfgdetail::require_keys(
        j, "propagation",
        {"lambda", "beta", "sigma", "mixture", "phi_trigger", "delta", "horizon", "i0",
         "replicas", "freeze_models", "keep_replica_traces", "graph_file"});
    PropagationSection s;
    s.cfg.lambda = cfgdetail::get_or<double>(j, "lambda", s.cfg.lambda);
    s.cfg.beta = cfgdetail::get_or<double>(j, "beta", s.cfg.beta);
    s.cfg.sigma = cfgdetail::get_or<double>(j, "sigma", s.cfg.sigma);
    if (j.contains("mixture")) {
      const json& m = j.at("mixture");
      cfgdetail::require_keys(m, "propagation.mixture", {"u", "w", "q"});
      s.cfg.mixture.u = cfgdetail::get_req<double>(m, "mixture", "u");
      s.cfg.mixture.w = cfgdetail::get_req<double>(m, "mixture", "w");
      s.cfg.mixture.q = cfgdetail::get_req<double>(m, "mixture", "q");
    }
    if (j.contains("phi_trigger"))
      s.cfg.phi_trigger = cfgdetail::get_req<double>(j, "propagation", "phi_trigger");
    if (j.contains("delta"))
      s.cfg.delta = cfgdetail::get_req<std::uint32_t>(j, "propagation", "delta");
    s.cfg.horizon = cfgdetail::get_or<std::uint32_t>(j, "horizon", s.cfg.horizon);
    s.cfg.i0 = cfgdetail::get_or<double>(j, "i0", s.cfg.i0);
    s.cfg.replicas = cfgdetail::get_or<std::uint32_t>(j, "replicas", s.cfg.replicas);
    s.cfg.freeze_models = cfgdetail::get_or<bool>(j, "freeze_models", false);
    s.cfg.keep_replica_traces = cfgdetail::get_or<bool>(j, "keep_replica_traces", false);
    if (j.contains("graph_file"))
      s.graph_file = cfgdetail::get_req<std::string>(j, "propagation", "graph_file");
    return s;
  }

  json to_json() const {
    json j{{"lambda", cfg.lambda},
           {"beta", cfg.beta},
           {"sigma", cfg.sigma},
           {"mixture", {{"u", cfg.mixture.u}, {"w", cfg.mixture.w}, {"q", cfg.mixture.q}}},
           {"horizon", cfg.horizon},
           {"i0", cfg.i0},
           {"replicas", cfg.replicas},
           {"freeze_models", cfg.freeze_models},
           {"keep_replica_traces", cfg.keep_replica_traces}};
    if (cfg.phi_trigger) j["phi_trigger"] = *cfg.phi_trigger;
    if (cfg.delta) j["delta"] = *cfg.delta;
    if (graph_file) j["graph_file"] = *graph_file;
    return j;
  }
};

struct SupportConfig {
  std::string kind = "ba";  // ba | hybrid
  std::uint32_t m = 4;
  std::uint32_t M = 100;
  std::uint32_t K = 4;
  double p = 0.3;
  double a = 0.5;
  double n_ref = 100000;  // network size entering the analytic head

  static SupportConfig from_json(const json& j) {
    cfgdetail::require_keys(j, "meanfield.support", {"kind", "m", "M", "K", "p", "a", "n"});
    SupportConfig s;
    s.kind = cfgdetail::get_or<std::string>(j, "kind", s.kind);
    if (s.kind != "ba" && s.kind != "hybrid")
      throw ConfigError("support: kind must be 'ba' or 'hybrid'");
    s.m = cfgdetail::get_or<std::uint32_t>(j, "m", s.m);
    s.M = cfgdetail::get_or<std::uint32_t>(j, "M", s.M);
    s.K = cfgdetail::get_or<std::uint32_t>(j, "K", s.K);
    s.p = cfgdetail::get_or<double>(j, "p", s.p);
    s.a = cfgdetail::get_or<double>(j, "a", s.a);
    s.n_ref = cfgdetail::get_or<double>(j, "n", s.n_ref);
    return s;
  }

  json to_json() const {
    return json{{"kind", kind}, {"m", m}, {"M", M},
                {"K", K},       {"p", p}, {"a", a},
                {"n", n_ref}};
  }

  DegreeDistribution build() const {
    if (kind == "ba") return DegreeDistribution::ba_like(m, M);
    const std::uint32_t k_min = std::max(1u, K / 2);
    return DegreeDistribution::from_pmf(
        [&](std::uint32_t kk) {
          return hybrid_degree_pdf(kk, K, p, a, n_ref, m, WsRate::Classical);
        },
        k_min, M);
  }

  DegreeDistribution build_ws_part() const {
    const std::uint32_t k_min = std::max(1u, K / 2);
    return DegreeDistribution::from_pmf(
        [&](std::uint32_t kk) {
          return ws_degree_pmf(kk, K, p, a, n_ref, WsRate::Classical);
        },
        k_min, M);
  }
};

struct MeanFieldSection {
  MeanFieldParams params;
  SupportConfig support;
  double dt = 0.01;
  double t_max = 200.0;
  double i0 = 0.01;
  std::uint32_t sample_stride = 100;

  static MeanFieldSection from_json(const json& j) {
    cfgdetail::require_keys(j, "meanfield",
                            {"lambda", "u", "w", "q", "sigma", "support", "dt", "t_max",
                             "i0", "sample_stride"});
    MeanFieldSection s;
    s.params.lambda = cfgdetail::get_or<double>(j, "lambda", s.params.lambda);
    s.params.u = cfgdetail::get_or<double>(j, "u", s.params.u);
    s.params.w = cfgdetail::get_or<double>(j, "w", s.params.w);
    s.params.q = cfgdetail::get_or<double>(j, "q", s.params.q);
    s.params.sigma = cfgdetail::get_or<double>(j, "sigma", s.params.sigma);
    if (j.contains("support")) s.support = SupportConfig::from_json(j.at("support"));
    s.dt = cfgdetail::get_or<double>(j, "dt", s.dt);
    s.t_max = cfgdetail::get_or<double>(j, "t_max", s.t_max);
    s.i0 = cfgdetail::get_or<double>(j, "i0", s.i0);
    s.sample_stride = cfgdetail::get_or<std::uint32_t>(j, "sample_stride", s.sample_stride);
    return s;
  }

  json to_json() const {
    return json{{"lambda", params.lambda},
                {"u", params.u},
                {"w", params.w},
                {"q", params.q},
                {"sigma", params.sigma},
                {"support", support.to_json()},
                {"dt", dt},
                {"t_max", t_max},
                {"i0", i0},
                {"sample_stride", sample_stride}};
  }
};

struct AnalyzeSection {
  std::optional<std::string> graph_file;
  std::uint32_t bins_per_decade = 10;
  double fit_k_lo = std::pow(10.0, 1.2);
  double fit_k_hi = std::pow(10.0, 2.2);

  static AnalyzeSection from_json(const json& j) {
    cfgdetail::require_keys(j, "analyze",
                            {"graph_file", "bins_per_decade", "fit_k_lo", "fit_k_hi"});
    AnalyzeSection s;
    if (j.contains("graph_file"))
      s.graph_file = cfgdetail::get_req<std::string>(j, "analyze", "graph_file");
    s.bins_per_decade = cfgdetail::get_or<std::uint32_t>(j, "bins_per_decade", 10);
    s.fit_k_lo = cfgdetail::get_or<double>(j, "fit_k_lo", s.fit_k_lo);
    s.fit_k_hi = cfgdetail::get_or<double>(j, "fit_k_hi", s.fit_k_hi);
    return s;
  }

  json to_json() const {
    json j{{"bins_per_decade", bins_per_decade},
           {"fit_k_lo", fit_k_lo},
           {"fit_k_hi", fit_k_hi}};
    if (graph_file) j["graph_file"] = *graph_file;
    return j;
  }
};

struct CompareSection {
  std::string external_curve;
  std::vector<Mixture> mixtures;
  std::vector<std::string> labels;

  static CompareSection from_json(const json& j) {
    cfgdetail::require_keys(j, "compare", {"external_curve", "mixtures", "labels"});
    CompareSection s;
    s.external_curve = cfgdetail::get_req<std::string>(j, "compare", "external_curve");
    const json& mixes = j.contains("mixtures") ? j.at("mixtures") : json::array();
    if (!mixes.is_array() || mixes.empty())
      throw ConfigError("compare: 'mixtures' must be a non-empty array");
    for (const json& m : mixes) {
      if (!m.is_array() || m.size() != 3)
        throw ConfigError("compare: each mixture is [u, w, q]");
      Mixture mx{m[0].get<double>(), m[1].get<double>(), m[2].get<double>()};
      mx.validate();
      s.mixtures.push_back(mx);
    }
    if (j.contains("labels")) {
      s.labels = cfgdetail::get_req<std::vector<std::string>>(j, "compare", "labels");
      if (s.labels.size() != s.mixtures.size())
        throw ConfigError("compare: labels must match mixtures");
    }
    return s;
  }

  json to_json() const {
    json j{{"external_curve", external_curve}, {"mixtures", json::array()}};
    for (const auto& m : mixtures) j["mixtures"].push_back({m.u, m.w, m.q});
    if (!labels.empty()) j["labels"] = labels;
    return j;
  }
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  std::optional<GeneratorConfig> generator;
  std::optional<PropagationSection> propagation;
  std::optional<MeanFieldSection> meanfield;
  std::optional<AnalyzeSection> analyze;
  std::optional<CompareSection> compare;

  static ExperimentConfig from_json(const json& j) {
    cfgdetail::require_keys(j, "config",
                            {"seed", "output_dir", "generator", "propagation",
                             "meanfield", "analyze", "compare"});
    ExperimentConfig c;
    c.seed = cfgdetail::get_or<std::uint64_t>(j, "seed", 0);
    c.output_dir = cfgdetail::get_or<std::string>(j, "output_dir", c.output_dir);
    if (j.contains("generator"))
      c.generator = GeneratorConfig::from_json(j.at("generator"));
    if (j.contains("propagation"))
      c.propagation = PropagationSection::from_json(j.at("propagation"));
    if (j.contains("meanfield"))
      c.meanfield = MeanFieldSection::from_json(j.at("meanfield"));
    if (j.contains("analyze")) c.analyze = AnalyzeSection::from_json(j.at("analyze"));
    if (j.contains("compare")) c.compare = CompareSection::from_json(j.at("compare"));
    return c;
  }

  static ExperimentConfig load(const std::string& path) {
    json j;
    try {
      j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return from_json(j);
  }

  json to_json() const {
    json j{{"seed", seed}, {"output_dir", output_dir}};
    if (generator) j["generator"] = generator->to_json();
    if (propagation) j["propagation"] = propagation->to_json();
    if (meanfield) j["meanfield"] = meanfield->to_json();
    if (analyze) j["analyze"] = analyze->to_json();
    if (compare) j["compare"] = compare->to_json();
    return j;
  }
};

}  // namespace hybridnet
