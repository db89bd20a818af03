#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hybridnet/generators.hpp"
#include "hybridnet/propagation.hpp"

using namespace hybridnet;
using Catch::Approx;

namespace {

HybridGraph path3() {
  HybridGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  return g;
}

PropagationConfig base_config() {
  PropagationConfig cfg;
  cfg.lambda = 0.2;
  cfg.beta = 0.1;
  cfg.sigma = 0.15;
  cfg.mixture = {0.8, 0.05, 0.15};
  cfg.horizon = 50;
  cfg.i0 = 0.01;
  cfg.replicas = 4;
  cfg.rng_seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("mixture validation") {
  REQUIRE_NOTHROW((Mixture{0.8, 0.05, 0.15}).validate());
  REQUIRE_THROWS_AS((Mixture{0.8, 0.05, 0.05}).validate(), std::invalid_argument);
  REQUIRE_THROWS_AS((Mixture{-0.1, 0.55, 0.55}).validate(), std::invalid_argument);
}

TEST_CASE("model assignment hits the requested shares") {
  RngStream rng(5);
  const auto models = assign_models(100000, {0.8, 0.05, 0.15}, rng);
  std::uint32_t sis = 0, sirs = 0, sir = 0;
  for (const auto m : models) {
    sis += m == NodeModel::SIS;
    sirs += m == NodeModel::SIRS;
    sir += m == NodeModel::SIR;
  }
  // 3-sigma bands around the expected multinomial counts.
  REQUIRE(std::abs(int(sis) - 80000) < 3 * std::sqrt(100000 * 0.8 * 0.2));
  REQUIRE(std::abs(int(sirs) - 5000) < 3 * std::sqrt(100000 * 0.05 * 0.95));
  REQUIRE(std::abs(int(sir) - 15000) < 3 * std::sqrt(100000 * 0.15 * 0.85));
}

TEST_CASE("popularity index and trigger latch") {
  REQUIRE(blockbuster_phi(0.0, 0) == 0.0);
  REQUIRE_THROWS_AS(blockbuster_phi(0.1, 0), std::domain_error);
  REQUIRE(blockbuster_phi(0.5, 9) == Approx(0.5));          // log10(10) = 1
  REQUIRE(blockbuster_phi(0.3, 99) == Approx(0.15));        // log10(100) = 2

  // Fires only in the first half of the run, then freezes.
  REQUIRE(blockbuster_gamma(0.2, 0.1, 10, 100, false));
  REQUIRE_FALSE(blockbuster_gamma(0.2, 0.1, 51, 100, false));
  REQUIRE(blockbuster_gamma(0.0, 0.1, 51, 100, true));      // latched stays up
  REQUIRE_FALSE(blockbuster_gamma(0.05, 0.1, 10, 100, false));
}

TEST_CASE("fresh infections stay inert within their creation round") {
  const HybridGraph g = path3();
  const std::vector<NodeModel> models(3, NodeModel::SIS);
  std::vector<NodeState> states{NodeState::Spreader, NodeState::Ignorant,
                                NodeState::Ignorant};
  PropagationConfig cfg = base_config();
  cfg.lambda = 1.0;
  cfg.beta = 0.0;

  step(g, models, states, cfg, true, 42, 1);
  REQUIRE(states[0] == NodeState::Spreader);
  REQUIRE(states[1] == NodeState::Spreader);
  REQUIRE(states[2] == NodeState::Ignorant);  // node 1 was not a spreader at round start

  step(g, models, states, cfg, true, 42, 2);
  REQUIRE(states[2] == NodeState::Spreader);
}

TEST_CASE("exit target depends on the node model") {
  HybridGraph g(2);
  g.add_edge(0, 1);
  PropagationConfig cfg = base_config();
  cfg.lambda = 0.0;
  cfg.beta = 1.0;
  cfg.sigma = 1.0;

  std::vector<NodeState> states{NodeState::Spreader, NodeState::Spreader};

  std::vector<NodeModel> models{NodeModel::SIS, NodeModel::SIR};
  step(g, models, states, cfg, true, 1, 1);
  REQUIRE(states[0] == NodeState::Ignorant);  // SIS returns to the susceptible pool
  REQUIRE(states[1] == NodeState::Stifler);   // SIR parks permanently

  // SIR stiflers never revert, SIRS stiflers do.
  states = {NodeState::Stifler, NodeState::Stifler};
  models = {NodeModel::SIRS, NodeModel::SIR};
  step(g, models, states, cfg, true, 1, 2);
  REQUIRE(states[0] == NodeState::Ignorant);
  REQUIRE(states[1] == NodeState::Stifler);
}

TEST_CASE("gamma gates the implicit layer") {
  // Hub 0 with one dominant and one implicit spoke; lambda = 1 makes the
  // round outcome deterministic.
  HybridGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  RngStream rng(8);
  std::vector<NodeState> states{NodeState::Spreader, NodeState::Ignorant,
                                NodeState::Ignorant};
  const std::vector<NodeModel> models(3, NodeModel::SIS);
  PropagationConfig cfg = base_config();
  cfg.lambda = 1.0;
  cfg.beta = 0.0;
  g.set_edge_visibility(1, EdgeVisibility::Implicit);

  auto fresh = states;
  step(g, models, fresh, cfg, false, 7, 1);
  REQUIRE(fresh[1] == NodeState::Spreader);
  REQUIRE(fresh[2] == NodeState::Ignorant);  // implicit edge is closed

  fresh = states;
  step(g, models, fresh, cfg, true, 7, 1);
  REQUIRE(fresh[2] == NodeState::Spreader);  // open once gamma latches
}

TEST_CASE("opening the implicit layer never loses ground for growth-only spread") {
  // Pure SIS without exits: the gamma = 1 trajectory dominates the gamma = 0
  // one pathwise when both consume identical coin flips.
  GeneratorParams params;
  params.n_total = 300;
  params.a = 0.5;
  params.rng_seed = 424;
  HybridGraph g = generate_network_i(params);
  RngStream label_rng(5);
  g.assign_implicit_edges(3, label_rng);

  const std::vector<NodeModel> models(g.n(), NodeModel::SIS);
  PropagationConfig cfg = base_config();
  cfg.lambda = 0.12;
  cfg.beta = 0.0;

  std::vector<NodeState> closed(g.n(), NodeState::Ignorant);
  closed[0] = closed[1] = NodeState::Spreader;
  auto open = closed;
  for (std::uint32_t t = 1; t <= 40; ++t) {
    step(g, models, closed, cfg, false, 1234, t);
    step(g, models, open, cfg, true, 1234, t);
    std::uint32_t n_closed = 0, n_open = 0;
    for (NodeId v = 0; v < g.n(); ++v) {
      n_closed += closed[v] == NodeState::Spreader;
      n_open += open[v] == NodeState::Spreader;
      if (closed[v] == NodeState::Spreader) REQUIRE(open[v] == NodeState::Spreader);
    }
    REQUIRE(n_open >= n_closed);
  }
}

TEST_CASE("run seeds ceil(i0 n) spreaders and conserves population") {
  RngStream rng(3);
  const HybridGraph g = generate_ws(500, 4, 0.2, rng);
  PropagationConfig cfg = base_config();
  const SimulationTrace tr = run(g, cfg);
  REQUIRE(tr.i[0] == Approx(5.0 / 500.0));
  REQUIRE(tr.s[0] == Approx(495.0 / 500.0));
  for (std::size_t t = 0; t < tr.i.size(); ++t)
    REQUIRE(tr.s[t] + tr.i[t] + tr.r[t] == Approx(1.0).margin(1e-12));
}

TEST_CASE("run rejects an empty seed set") {
  RngStream rng(3);
  const HybridGraph g = generate_ws(50, 4, 0.2, rng);
  PropagationConfig cfg = base_config();
  cfg.i0 = 0.01;  // 0.5 expected spreaders
  REQUIRE_THROWS_AS(run(g, cfg), std::invalid_argument);
}

TEST_CASE("runs are reproducible and seed-sensitive") {
  RngStream rng(3);
  const HybridGraph g = generate_ws(400, 4, 0.2, rng);
  PropagationConfig cfg = base_config();
  const SimulationTrace a = run(g, cfg);
  const SimulationTrace b = run(g, cfg);
  REQUIRE(a.i == b.i);
  REQUIRE(a.s == b.s);
  cfg.rng_seed = 100;
  const SimulationTrace c = run(g, cfg);
  REQUIRE(a.i != c.i);
}

TEST_CASE("frozen models remove cross-replica model noise") {
  RngStream rng(3);
  const HybridGraph g = generate_ws(400, 4, 0.2, rng);
  PropagationConfig cfg = base_config();
  cfg.freeze_models = true;
  const SimulationTrace a = run(g, cfg);
  const SimulationTrace b = run(g, cfg);
  REQUIRE(a.i == b.i);
}

TEST_CASE("trigger accounting in the averaged trace") {
  RngStream rng(3);
  const HybridGraph g = generate_ws(300, 6, 0.2, rng);

  PropagationConfig cfg = base_config();
  cfg.lambda = 0.9;
  cfg.beta = 0.0;
  cfg.phi_trigger = 1e-6;  // fires as soon as anything spreads
  cfg.replicas = 3;
  SimulationTrace tr = run(g, cfg);
  REQUIRE(tr.trigger_times.size() == 3);
  for (const auto& t : tr.trigger_times) {
    REQUIRE(t.has_value());
    REQUIRE(*t >= 1);
  }
  REQUIRE(tr.gamma.back() == 1.0);

  cfg.phi_trigger = 100.0;  // unreachable
  tr = run(g, cfg);
  for (const auto& t : tr.trigger_times) REQUIRE_FALSE(t.has_value());
  REQUIRE(tr.gamma.back() == 0.0);
}

TEST_CASE("keep_replica_traces exposes per-replica curves") {
  RngStream rng(3);
  const HybridGraph g = generate_ws(300, 4, 0.2, rng);
  PropagationConfig cfg = base_config();
  cfg.keep_replica_traces = true;
  cfg.replicas = 3;
  const SimulationTrace tr = run(g, cfg);
  REQUIRE(tr.replica_traces.size() == 3);
  double mean_i1 = 0.0;
  for (const auto& rtr : tr.replica_traces) mean_i1 += rtr.i[1];
  REQUIRE(mean_i1 / 3.0 == Approx(tr.i[1]));
}
