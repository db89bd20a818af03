#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "hybridnet/config.hpp"
#include "hybridnet/generators.hpp"
#include "hybridnet/io.hpp"

using namespace hybridnet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("hybridnet_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("number formatting is compact and stable") {
  REQUIRE(fmt_num(0.1) == "0.1");
  REQUIRE(fmt_num(1.0) == "1");
  REQUIRE(fmt_num(0.03 / 0.265) == "0.11320754717");
  REQUIRE(fmt_num(-2.5e-9) == "-2.5e-09");
}

TEST_CASE("edge lists round-trip with visibility labels") {
  TempDir tmp;
  RngStream rng(21);
  HybridGraph g = generate_ws(40, 4, 0.2, rng);
  g.set_generator_tag(GeneratorTag::NetworkI);
  RngStream label_rng(3);
  g.assign_implicit_edges(2, label_rng);

  write_edge_list(g, tmp.file("g.edges"));
  const HybridGraph h = read_edge_list(tmp.file("g.edges"));

  REQUIRE(h.n() == g.n());
  REQUIRE(h.edge_count() == g.edge_count());
  REQUIRE(h.generator_tag() == GeneratorTag::NetworkI);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    REQUIRE(h.edge(e).u == g.edge(e).u);
    REQUIRE(h.edge(e).v == g.edge(e).v);
    REQUIRE(h.edge(e).visibility == g.edge(e).visibility);
  }
  REQUIRE(h.labels_assigned());
}

TEST_CASE("curves round-trip through csv") {
  TempDir tmp;
  Curve c;
  c.t = {0.0, 1.0, 2.5};
  c.v = {0.5, 0.25, 0.125};
  write_curve_csv(c, tmp.file("c.csv"));
  const Curve d = read_curve_csv(tmp.file("c.csv"));
  REQUIRE(d.t == c.t);
  REQUIRE(d.v == c.v);
  REQUIRE_THROWS(read_curve_csv(tmp.file("missing.csv")));
}

TEST_CASE("trace csv layout") {
  const std::string body = trace_csv({0.9, 0.8}, {0.1, 0.15}, {0.0, 0.05},
                                     {0.0, 0.5}, {0.0, 1.0});
  REQUIRE(body ==
          "t,s,i,r,phi,gamma\n"
          "0,0.9,0.1,0,0,0\n"
          "1,0.8,0.15,0.05,0.5,1\n");
}

TEST_CASE("infinite thresholds serialize as a marker string") {
  REQUIRE(threshold_json_value(std::numeric_limits<double>::infinity()) ==
          json("infinite"));
  REQUIRE(threshold_json_value(0.25) == json(0.25));
}

TEST_CASE("full config round-trips through json") {
  const char* text = R"({
    "seed": 42,
    "output_dir": "out/run1",
    "generator": {
      "kind": "network_iii",
      "n": 1000,
      "a": 0.4,
      "k_ring": 6,
      "p_rewire": 0.25,
      "m_attach": 3,
      "construction_log": true,
      "subnet_plan": {"sizes": [600, 400], "kinds": ["ws", "ba"]}
    },
    "propagation": {
      "lambda": 0.3,
      "beta": 0.2,
      "sigma": 0.1,
      "mixture": {"u": 0.65, "w": 0.05, "q": 0.3},
      "phi_trigger": 0.07,
      "delta": 4,
      "horizon": 80,
      "i0": 0.02,
      "replicas": 10,
      "freeze_models": true,
      "keep_replica_traces": true,
      "graph_file": "g.edges"
    },
    "meanfield": {
      "lambda": 0.4, "u": 0.5, "w": 0.45, "q": 0.05, "sigma": 0.15,
      "support": {"kind": "hybrid", "m": 4, "M": 200, "K": 4, "p": 0.3, "a": 0.5, "n": 100000},
      "dt": 0.005, "t_max": 100.0, "i0": 0.01, "sample_stride": 50
    },
    "analyze": {"graph_file": "g.edges", "bins_per_decade": 12, "fit_k_lo": 10.0, "fit_k_hi": 200.0},
    "compare": {
      "external_curve": "ref.csv",
      "mixtures": [[0.8, 0.05, 0.15], [0.65, 0.05, 0.3]],
      "labels": ["heavy-sis", "balanced"]
    }
  })";
  const ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(text));
  REQUIRE(cfg.seed == 42);
  REQUIRE(cfg.generator->kind == "network_iii");
  REQUIRE(cfg.generator->plan->sizes == std::vector<std::uint32_t>{600, 400});
  REQUIRE(cfg.propagation->cfg.delta == 4u);
  REQUIRE(cfg.propagation->cfg.phi_trigger == 0.07);
  REQUIRE(cfg.meanfield->support.kind == "hybrid");
  REQUIRE(cfg.compare->mixtures.size() == 2);
  REQUIRE(cfg.compare->labels[1] == "balanced");

  // to_json -> from_json is the identity on fully specified configs.
  const json once = cfg.to_json();
  const json twice = ExperimentConfig::from_json(once).to_json();
  REQUIRE(once == twice);
}

TEST_CASE("unknown keys are rejected at every level") {
  const auto reject = [](const char* text) {
    REQUIRE_THROWS_AS(ExperimentConfig::from_json(json::parse(text)), ConfigError);
  };
  reject(R"({"sed": 1})");
  reject(R"({"generator": {"kind": "ws", "n": 10, "pp": 1}})");
  reject(R"({"propagation": {"lambda": 0.1, "mixture": {"u": 1, "w": 0, "q": 0, "x": 2}}})");
  reject(R"({"propagation": {"lambdas": 0.1}})");
  reject(R"({"meanfield": {"support": {"kind": "ba", "mm": 3}}})");
  reject(R"({"analyze": {"bins": 3}})");
  reject(R"({"compare": {"external_curve": "x.csv", "mixtures": [[1,0,0]], "best": 1}})");
}

TEST_CASE("config validation catches structural mistakes") {
  const auto reject = [](const char* text) {
    REQUIRE_THROWS_AS(ExperimentConfig::from_json(json::parse(text)), ConfigError);
  };
  reject(R"({"generator": {"n": 10}})");                      // kind missing
  reject(R"({"generator": {"kind": "er", "n": 10}})");        // unknown kind
  reject(R"({"generator": {"kind": "ws"}})");                 // n missing
  reject(R"({"seed": "abc"})");                               // wrong type
  reject(R"({"compare": {"external_curve": "x", "mixtures": []}})");
  reject(R"({"compare": {"external_curve": "x", "mixtures": [[0.5, 0.5]]}})");
  reject(R"({"compare": {"external_curve": "x", "mixtures": [[1, 0, 0]], "labels": ["a", "b"]}})");
  reject(R"({"generator": {"kind": "ws", "n": 9, "subnet_plan": {"sizes": [9], "kinds": ["er"]}}})");
}

TEST_CASE("config loads from disk and reports parse failures") {
  TempDir tmp;
  write_text_file(tmp.file("ok.json"), R"({"seed": 7, "output_dir": "x"})");
  const ExperimentConfig cfg = ExperimentConfig::load(tmp.file("ok.json"));
  REQUIRE(cfg.seed == 7);
  REQUIRE(cfg.output_dir == "x");

  write_text_file(tmp.file("broken.json"), "{");
  REQUIRE_THROWS_AS(ExperimentConfig::load(tmp.file("broken.json")), ConfigError);
}

TEST_CASE("histogram and binned csv writers") {
  TempDir tmp;
  DegreeHistogram h;
  h.add(2);
  h.add(2);
  h.add(3);
  write_histogram_csv(h, tmp.file("h.csv"));
  const std::string body = read_text_file(tmp.file("h.csv"));
  REQUIRE(body ==
          "k,count,pk\n"
          "2,2,0.666666666667\n"
          "3,1,0.333333333333\n");

  write_binned_csv(log_binned(h, 10), tmp.file("b.csv"));
  const std::string binned = read_text_file(tmp.file("b.csv"));
  REQUIRE(binned.rfind("k_center,count,density\n", 0) == 0);
}

TEST_CASE("node metadata serializes origin and subnet") {
  TempDir tmp;
  GeneratorParams params;
  params.n_total = 200;
  params.a = 0.5;
  params.rng_seed = 33;
  const HybridGraph g = generate_network_ii(params);
  write_node_metadata(g, tmp.file("nodes.json"));
  const json j = json::parse(read_text_file(tmp.file("nodes.json")));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 200);
  REQUIRE(j[0]["origin"] == "ScaleFree");
  REQUIRE(j[0]["subnet"] == 0);
  REQUIRE(j[0]["birth_order"] == 0);
  REQUIRE(j[199]["origin"] == "SmallWorld");
}
