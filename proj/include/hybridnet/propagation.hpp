#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hybridnet/graph.hpp"
#include "hybridnet/rng.hpp"

namespace hybridnet {

/**
 * Discrete-round spreading with per-node recovery models and a burst trigger
 * that reveals the implicit edges.
 *
 * States: Ignorant -> Spreader -> (model-dependent).  Per round, synchronously:
 *   1. every Spreader converts each Ignorant neighbor with probability lambda,
 *      over Dominant edges only while gamma = 0, over all edges once gamma = 1;
 *   2. every Spreader exits with probability beta: SIS back to Ignorant,
 *      SIR / SIRS to Stifler;
 *   3. every SIRS Stifler reverts to Ignorant with probability sigma.
 * Nodes infected in a round neither transmit nor exit in that round.
 *
 * The per-event randomness is counter-based (replica key, round, edge/node),
 * so results are independent of traversal order and two runs differing only
 * in gamma share every coin flip.
 */

enum class NodeModel : std::uint8_t { SIS, SIRS, SIR };
enum class NodeState : std::uint8_t { Ignorant, Spreader, Stifler };

struct Mixture {
  double u = 1.0;  // SIS share
  double w = 0.0;  // SIRS share
  double q = 0.0;  // SIR share

  void validate() const {
    if (u < 0 || w < 0 || q < 0 || std::fabs(u + w + q - 1.0) > 1e-9)
      throw std::invalid_argument("mixture shares must be >= 0 and sum to 1");
  }
};

struct PropagationConfig {
  double lambda = 0.1;
  double beta = 0.2;
  double sigma = 0.15;
  Mixture mixture;
  std::optional<double> phi_trigger;   // burst threshold; absent = trigger off
  std::optional<std::uint32_t> delta;  // dominant-degree target (used by callers
                                       // that label edges before running)
  std::uint32_t horizon = 100;
  double i0 = 0.01;
  std::uint32_t replicas = 20;
  std::uint64_t rng_seed = 0;
  bool freeze_models = false;  // one model draw shared by all replicas
  bool keep_replica_traces = false;

  void validate() const {
    mixture.validate();
    if (lambda < 0 || lambda > 1) throw std::invalid_argument("lambda in [0,1]");
    if (beta < 0 || beta > 1) throw std::invalid_argument("beta in [0,1]");
    if (sigma < 0 || sigma > 1) throw std::invalid_argument("sigma in [0,1]");
    if (horizon < 1) throw std::invalid_argument("horizon >= 1");
    if (i0 <= 0 || i0 > 1) throw std::invalid_argument("i0 in (0,1]");
    if (replicas < 1) throw std::invalid_argument("replicas >= 1");
    if (phi_trigger && *phi_trigger <= 0)
      throw std::invalid_argument("phi_trigger must be > 0");
    if (delta && *delta <= 1) throw std::invalid_argument("delta must be > 1");
  }
};

inline std::vector<NodeModel> assign_models(std::uint32_t n, const Mixture& mix,
                                            RngStream& rng) {
  mix.validate();
  std::vector<NodeModel> models(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double x = rng.next_u01();
    models[i] = x < mix.u ? NodeModel::SIS
                          : (x < mix.u + mix.w ? NodeModel::SIRS : NodeModel::SIR);
  }
  return models;
}

// Spreader density rescaled by the logarithmic round clock.
inline double blockbuster_phi(double i_t, std::uint32_t t) {
  if (i_t < 0 || i_t > 1) throw std::invalid_argument("blockbuster_phi: i in [0,1]");
  if (t == 0) {
    if (i_t == 0.0) return 0.0;
    throw std::domain_error("blockbuster_phi: undefined at t = 0 with spreaders present");
  }
  return i_t / std::log10(static_cast<double>(t) + 1.0);
}

// Latches to 1 the first time phi reaches the threshold within the first half
// of the horizon; frozen at its midpoint value afterwards.
inline bool blockbuster_gamma(double phi, double threshold, std::uint32_t t,
                              std::uint32_t horizon, bool gamma_prev) {
  if (2ull * t <= horizon) return gamma_prev || phi >= threshold;
  return gamma_prev;
}

namespace detail {
constexpr std::uint64_t kSaltInfect = 0x1;
constexpr std::uint64_t kSaltExit = 0x2;
constexpr std::uint64_t kSaltRevert = 0x3;
}  // namespace detail

struct StepCounts {
  std::uint32_t infections = 0;
  std::uint32_t exits = 0;
  std::uint32_t reverts = 0;
};

inline StepCounts step(const HybridGraph& g, const std::vector<NodeModel>& models,
                       std::vector<NodeState>& states, const PropagationConfig& cfg,
                       bool gamma, std::uint64_t draw_key, std::uint32_t t) {
  const NodeId n = g.n();
  if (models.size() != n || states.size() != n)
    throw std::invalid_argument("step: models/states size mismatch");
  std::vector<NodeState> next = states;
  StepCounts counts;
  for (NodeId u = 0; u < n; ++u) {
    switch (states[u]) {
      case NodeState::Spreader: {
        for (const auto& a : g.neighbors(u)) {
          if (!gamma && g.edge(a.edge).visibility == EdgeVisibility::Implicit) continue;
          if (states[a.neighbor] != NodeState::Ignorant) continue;
          const std::uint64_t dir = (g.edge(a.edge).u == u) ? 0 : 1;
          if (counter_u01(draw_key, t, 2ull * a.edge + dir, detail::kSaltInfect) <
              cfg.lambda) {
            if (next[a.neighbor] != NodeState::Spreader) ++counts.infections;
            next[a.neighbor] = NodeState::Spreader;
          }
        }
        if (counter_u01(draw_key, t, u, detail::kSaltExit) < cfg.beta) {
          next[u] = models[u] == NodeModel::SIS ? NodeState::Ignorant : NodeState::Stifler;
          ++counts.exits;
        }
        break;
      }
      case NodeState::Stifler: {
        if (models[u] == NodeModel::SIRS &&
            counter_u01(draw_key, t, u, detail::kSaltRevert) < cfg.sigma) {
          next[u] = NodeState::Ignorant;
          ++counts.reverts;
        }
        break;
      }
      case NodeState::Ignorant:
        break;
    }
  }
  states.swap(next);
  return counts;
}

struct ReplicaTrace {
  std::vector<double> s, i, r, phi;
  std::vector<std::uint8_t> gamma;
  std::optional<std::uint32_t> trigger_time;
  std::uint32_t ever_infected = 0;
};

struct SimulationTrace {
  std::vector<double> s, i, r, phi, gamma;  // replica means; gamma = trigger fraction
  std::vector<std::optional<std::uint32_t>> trigger_times;  // one per replica
  std::vector<ReplicaTrace> replica_traces;                 // kept on request
  std::uint32_t horizon = 0;
  std::uint32_t n_nodes = 0;
};

inline ReplicaTrace run_replica(const HybridGraph& g, const PropagationConfig& cfg,
                                const std::vector<NodeModel>* frozen_models,
                                std::uint32_t replica) {
  const NodeId n = g.n();
  const std::uint64_t base = derive_seed(cfg.rng_seed, "replica", replica);
  RngStream rng(base);
  std::vector<NodeModel> models =
      frozen_models ? *frozen_models : assign_models(n, cfg.mixture, rng);

  const double expected = cfg.i0 * static_cast<double>(n);
  if (expected < 1.0)
    throw std::invalid_argument("run: i0 * n < 1, no seed spreaders possible");
  const auto n0 = static_cast<std::uint32_t>(std::ceil(expected - 1e-9));
  std::vector<NodeState> states(n, NodeState::Ignorant);
  std::vector<char> ever(n, 0);
  for (const auto v : rng.sample_distinct(n, n0)) {
    states[v] = NodeState::Spreader;
    ever[v] = 1;
  }

  const std::uint64_t draw_key = derive_seed(base, "rounds");
  const std::uint32_t T = cfg.horizon;
  ReplicaTrace tr;
  tr.s.resize(T + 1);
  tr.i.resize(T + 1);
  tr.r.resize(T + 1);
  tr.phi.resize(T + 1);
  tr.gamma.resize(T + 1);

  auto record = [&](std::uint32_t t) {
    std::uint32_t cs = 0, ci = 0, cr = 0;
    for (const auto st : states) {
      cs += st == NodeState::Ignorant;
      ci += st == NodeState::Spreader;
      cr += st == NodeState::Stifler;
    }
    if (cs + ci + cr != n) throw std::logic_error("run: state count lost");
    tr.s[t] = static_cast<double>(cs) / n;
    tr.i[t] = static_cast<double>(ci) / n;
    tr.r[t] = static_cast<double>(cr) / n;
    return ci;
  };

  record(0);
  tr.phi[0] = 0.0;
  tr.gamma[0] = 0;
  bool gamma = false;
  for (std::uint32_t t = 1; t <= T; ++t) {
    step(g, models, states, cfg, gamma, draw_key, t);
    for (NodeId v = 0; v < n; ++v)
      if (states[v] == NodeState::Spreader) ever[v] = 1;
    record(t);
    tr.phi[t] = blockbuster_phi(tr.i[t], t);
    if (cfg.phi_trigger) {
      const bool next_gamma = blockbuster_gamma(tr.phi[t], *cfg.phi_trigger, t, T, gamma);
      if (next_gamma && !gamma) tr.trigger_time = t;
      gamma = next_gamma;
    }
    tr.gamma[t] = gamma ? 1 : 0;
  }
  for (const auto e : ever) tr.ever_infected += e;
  return tr;
}

inline SimulationTrace run(const HybridGraph& g, const PropagationConfig& cfg) {
  cfg.validate();
  if (cfg.i0 * static_cast<double>(g.n()) < 1.0)
    throw std::invalid_argument("run: i0 * n < 1, no seed spreaders possible");

  std::optional<std::vector<NodeModel>> frozen;
  if (cfg.freeze_models) {
    RngStream mrng(derive_seed(cfg.rng_seed, "models"));
    frozen = assign_models(g.n(), cfg.mixture, mrng);
  }

  const std::uint32_t T = cfg.horizon;
  SimulationTrace out;
  out.horizon = T;
  out.n_nodes = g.n();
  out.s.assign(T + 1, 0.0);
  out.i.assign(T + 1, 0.0);
  out.r.assign(T + 1, 0.0);
  out.phi.assign(T + 1, 0.0);
  out.gamma.assign(T + 1, 0.0);
  out.trigger_times.resize(cfg.replicas);

  for (std::uint32_t rep = 0; rep < cfg.replicas; ++rep) {
    ReplicaTrace tr = run_replica(g, cfg, frozen ? &*frozen : nullptr, rep);
    for (std::uint32_t t = 0; t <= T; ++t) {
      out.s[t] += tr.s[t];
      out.i[t] += tr.i[t];
      out.r[t] += tr.r[t];
      out.phi[t] += tr.phi[t];
      out.gamma[t] += tr.gamma[t];
    }
    out.trigger_times[rep] = tr.trigger_time;
    if (cfg.keep_replica_traces) out.replica_traces.push_back(std::move(tr));
  }
  const double R = cfg.replicas;
  for (std::uint32_t t = 0; t <= T; ++t) {
    out.s[t] /= R;
    out.i[t] /= R;
    out.r[t] /= R;
    out.phi[t] /= R;
    out.gamma[t] /= R;
  }
  return out;
}

}  // namespace hybridnet
