#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridnet/graph.hpp"
#include "hybridnet/rng.hpp"

namespace hybridnet {

struct GeneratorParams {
  std::uint32_t n_total = 0;
  double a = 0.5;            // scale-free node fraction
  std::uint32_t k_ring = 4;  // ring-lattice degree (even)
  double p_rewire = 0.3;
  std::uint32_t m_attach = 4;  // edges added per attached node
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (n_total == 0) throw std::invalid_argument("n_total must be > 0");
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("a must be in [0,1]");
    if (k_ring < 2 || k_ring % 2 != 0)
      throw std::invalid_argument("k_ring must be even and >= 2");
    if (p_rewire < 0.0 || p_rewire > 1.0)
      throw std::invalid_argument("p_rewire must be in [0,1]");
    if (m_attach < 1) throw std::invalid_argument("m_attach must be >= 1");
  }
};

enum class SubnetKind : std::uint8_t { WS, BA };

struct SubnetPlan {
  std::vector<std::uint32_t> sizes;
  std::vector<SubnetKind> kinds;

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (auto x : sizes) s += x;
    return s;
  }
  void validate() const {
    if (sizes.empty() || sizes.size() != kinds.size())
      throw std::invalid_argument("subnet plan: sizes/kinds mismatch or empty");
    for (auto s : sizes)
      if (s == 0) throw std::invalid_argument("subnet plan: zero-size subnet");
  }
};

struct ConstructionEvent {
  std::string step;
  std::string kind;
  long long value = 0;
  std::string note;
};
using ConstructionLog = std::vector<ConstructionEvent>;

inline void log_event(ConstructionLog* log, std::string step, std::string kind,
                      long long value, std::string note = {}) {
  if (log) log->push_back({std::move(step), std::move(kind), value, std::move(note)});
}

namespace detail {

// Ring lattice + random rewiring on node range [first, first+count).
// Each node owns the K/2 clockwise edges it creates; rewiring keeps the owner
// endpoint fixed and redirects the far endpoint to a uniform node of the same
// range (resampled on self-loops/duplicates, capped, then the edge is kept).
inline void build_ws_range(HybridGraph& g, NodeId first, std::uint32_t count,
                           std::uint32_t K, double p, RngStream& rng) {
  if (count <= K) throw std::invalid_argument("ws: need count > K");
  const std::uint32_t half = K / 2;
  std::vector<EdgeId> owned(static_cast<std::size_t>(count) * half);
  for (std::uint32_t j = 1; j <= half; ++j) {
    for (std::uint32_t i = 0; i < count; ++i) {
      const NodeId u = first + i;
      const NodeId v = first + (i + j) % count;
      if (!g.add_edge(u, v)) throw std::logic_error("ws: duplicate ring edge");
      owned[static_cast<std::size_t>(i) * half + (j - 1)] =
          static_cast<EdgeId>(g.edge_count() - 1);
    }
  }
  if (p <= 0.0) return;
  for (std::uint32_t i = 0; i < count; ++i) {
    const NodeId u = first + i;
    for (std::uint32_t j = 0; j < half; ++j) {
      if (!rng.bernoulli(p)) continue;
      const EdgeId id = owned[static_cast<std::size_t>(i) * half + j];
      for (int attempt = 0; attempt < 100; ++attempt) {
        const NodeId t = first + static_cast<NodeId>(rng.uniform_below(count));
        if (t == u || g.has_edge(u, t)) continue;
        g.rewire_edge(id, u, t);
        break;
      }
    }
  }
}

inline void build_complete_range(HybridGraph& g, NodeId first, std::uint32_t count) {
  for (std::uint32_t i = 0; i < count; ++i)
    for (std::uint32_t j = i + 1; j < count; ++j)
      if (!g.add_edge(first + i, first + j))
        throw std::logic_error("complete: duplicate edge");
}

// Growth with degree-proportional attachment on [first, first+count), seeded
// by a 3-node clique.  `endpoints` works as a degree-weighted roulette: each
// edge pushes both ends.  Nodes added before `m` candidates exist attach to
// all existing nodes of the range.
inline void build_ba_range(HybridGraph& g, NodeId first, std::uint32_t count,
                           std::uint32_t m, RngStream& rng) {
  if (count < 3) throw std::invalid_argument("ba: need count >= 3");
  std::vector<NodeId> endpoints;
  endpoints.reserve(static_cast<std::size_t>(count) * m * 2);
  auto push_edge = [&](NodeId u, NodeId v) {
    if (!g.add_edge(u, v)) throw std::logic_error("ba: duplicate edge");
    endpoints.push_back(u);
    endpoints.push_back(v);
  };
  push_edge(first, first + 1);
  push_edge(first, first + 2);
  push_edge(first + 1, first + 2);
  std::vector<NodeId> targets;
  for (std::uint32_t i = 3; i < count; ++i) {
    const NodeId v = first + i;
    const std::uint32_t want = std::min(m, i);
    targets.clear();
    while (targets.size() < want) {
      const NodeId t = endpoints[rng.uniform_below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) != targets.end()) continue;
      targets.push_back(t);
    }
    for (const NodeId t : targets) push_edge(v, t);
  }
}

// Integer composition of `budget` into `parts` pieces, each >= min_size,
// remainder split by uniform cut points.
inline std::vector<std::uint32_t> random_composition(std::uint64_t budget,
                                                     std::uint32_t parts,
                                                     std::uint32_t min_size,
                                                     RngStream& rng) {
  if (parts == 0 || budget < static_cast<std::uint64_t>(parts) * min_size)
    throw std::invalid_argument("random_composition: infeasible");
  const std::uint64_t spare = budget - static_cast<std::uint64_t>(parts) * min_size;
  std::vector<std::uint64_t> cuts;
  cuts.reserve(parts + 1);
  cuts.push_back(0);
  for (std::uint32_t i = 0; i + 1 < parts; ++i)
    cuts.push_back(rng.uniform_below(spare + 1));
  cuts.push_back(spare);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::uint32_t> sizes(parts);
  for (std::uint32_t i = 0; i < parts; ++i)
    sizes[i] = min_size + static_cast<std::uint32_t>(cuts[i + 1] - cuts[i]);
  return sizes;
}

inline std::uint32_t draw_subnet_count(std::uint64_t budget, std::uint32_t min_size,
                                       std::uint64_t cap, RngStream& rng) {
  if (budget < min_size) return 1;  // degenerate, handled by complete-graph path
  std::uint64_t hi = std::min(cap, budget / min_size);
  if (hi < 1) hi = 1;
  return static_cast<std::uint32_t>(rng.uniform_in(1, hi));
}

}  // namespace detail

inline HybridGraph generate_ws(std::uint32_t n, std::uint32_t K, double p,
                               RngStream& rng, ConstructionLog* log = nullptr,
                               GeneratorTag tag = GeneratorTag::PureWS) {
  if (K < 2 || K % 2 != 0) throw std::invalid_argument("ws: K must be even, >= 2");
  if (n <= K) throw std::invalid_argument("ws: need n > K");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("ws: p in [0,1]");
  HybridGraph g(n, tag);
  for (NodeId i = 0; i < n; ++i) g.set_node_meta(i, {NodeOrigin::SmallWorld, {}});
  detail::build_ws_range(g, 0, n, K, p, rng);
  log_event(log, "ws_base", "edges", static_cast<long long>(g.edge_count()));
  return g;
}

enum class BaSeed : std::uint8_t { FullTriangle };

inline HybridGraph generate_ba(std::uint32_t n, std::uint32_t m, RngStream& rng,
                               ConstructionLog* log = nullptr,
                               BaSeed = BaSeed::FullTriangle,
                               GeneratorTag tag = GeneratorTag::PureBA) {
  if (n < 3) throw std::invalid_argument("ba: need n >= 3");
  if (m < 1) throw std::invalid_argument("ba: need m >= 1");
  HybridGraph g(n, tag);
  for (NodeId i = 0; i < n; ++i) g.set_node_meta(i, {NodeOrigin::ScaleFree, {}});
  detail::build_ba_range(g, 0, n, m, rng);
  log_event(log, "ba_growth", "edges", static_cast<long long>(g.edge_count()));
  return g;
}

/**
 * Small-world base of round((1-a)*N) nodes, then a*N preferentially attached
 * nodes.  Attachment weight is accumulated over the growth-phase edges only
 * (the static base is bootstrapped into the roulette through the first
 * model-grown edges), which keeps the attached component scale-free for any a.
 */
inline HybridGraph generate_network_i(const GeneratorParams& params,
                                      ConstructionLog* log = nullptr) {
  params.validate();
  const auto N = params.n_total;
  const auto n_sw = static_cast<std::uint32_t>(std::llround((1.0 - params.a) * N));
  if (n_sw > N) throw std::invalid_argument("network_i: bad node budget");
  const std::uint32_t n_sf = N - n_sw;
  if (n_sw <= params.k_ring)
    throw std::invalid_argument("network_i: small-world budget must exceed k_ring");
  if (n_sw < params.m_attach)
    throw std::invalid_argument("network_i: base smaller than m_attach");
  RngStream rng(derive_seed(params.rng_seed, "network_i"));
  HybridGraph g(N, GeneratorTag::NetworkI);
  for (NodeId i = 0; i < n_sw; ++i) g.set_node_meta(i, {NodeOrigin::SmallWorld, {}});
  for (NodeId i = n_sw; i < N; ++i) g.set_node_meta(i, {NodeOrigin::ScaleFree, {}});
  detail::build_ws_range(g, 0, n_sw, params.k_ring, params.p_rewire, rng);
  log_event(log, "ws_base", "edges", static_cast<long long>(g.edge_count()));

  const std::uint32_t m = params.m_attach;
  std::vector<NodeId> endpoints;
  endpoints.reserve(static_cast<std::size_t>(n_sf) * m * 2);
  std::vector<NodeId> targets;
  for (NodeId v = n_sw; v < N; ++v) {
    targets.clear();
    if (endpoints.empty()) {
      targets = rng.sample_distinct(n_sw, m);
    } else {
      while (targets.size() < m) {
        const NodeId t = endpoints[rng.uniform_below(endpoints.size())];
        if (std::find(targets.begin(), targets.end(), t) != targets.end()) continue;
        targets.push_back(t);
      }
    }
    for (const NodeId t : targets) {
      if (!g.add_edge(v, t)) throw std::logic_error("network_i: duplicate edge");
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  log_event(log, "sf_attach", "edges", static_cast<long long>(n_sf) * m);
  return g;
}

/**
 * Scale-free core of N - round((1-a)*N) nodes plus small-world subnets hanging
 * off it.  The core is subnet 0; each subnet i >= 1 gets xi uniform in
 * [1, ceil(0.1*size)] bridge nodes, each linked to one uniform core node.
 */
inline HybridGraph generate_network_ii(const GeneratorParams& params,
                                       ConstructionLog* log = nullptr,
                                       SubnetPlan* plan_out = nullptr) {
  params.validate();
  const auto N = params.n_total;
  const auto n_sw = static_cast<std::uint32_t>(std::llround((1.0 - params.a) * N));
  const std::uint32_t n_ba = N - n_sw;
  if (n_ba < 3) throw std::invalid_argument("network_ii: core needs >= 3 nodes");
  if (n_sw == 0 && params.a < 1.0)
    throw std::invalid_argument("network_ii: empty small-world budget with a < 1");
  RngStream rng(derive_seed(params.rng_seed, "network_ii"));
  const std::uint32_t K = params.k_ring;

  HybridGraph g(N, GeneratorTag::NetworkII);
  for (NodeId i = 0; i < n_ba; ++i) g.set_node_meta(i, {NodeOrigin::ScaleFree, 0u});
  detail::build_ba_range(g, 0, n_ba, params.m_attach, rng);
  log_event(log, "ba_core", "edges", static_cast<long long>(g.edge_count()));

  SubnetPlan plan;
  if (n_sw > 0) {
    if (n_sw <= K) {
      plan.sizes = {n_sw};
    } else {
      const std::uint64_t cap =
          static_cast<std::uint64_t>(std::ceil(static_cast<double>(n_sw) / (2.0 * K)));
      const auto U = detail::draw_subnet_count(n_sw, K + 1, cap, rng);
      plan.sizes = detail::random_composition(n_sw, U, K + 1, rng);
    }
    plan.kinds.assign(plan.sizes.size(), SubnetKind::WS);
  }

  NodeId first = n_ba;
  long long bridge_edges = 0;
  for (std::size_t s = 0; s < plan.sizes.size(); ++s) {
    const std::uint32_t size = plan.sizes[s];
    const auto subnet_id = static_cast<std::uint32_t>(s + 1);
    for (NodeId i = first; i < first + size; ++i)
      g.set_node_meta(i, {NodeOrigin::SmallWorld, subnet_id});
    const auto before = g.edge_count();
    if (size > K)
      detail::build_ws_range(g, first, size, K, params.p_rewire, rng);
    else
      detail::build_complete_range(g, first, size);
    log_event(log, "ws_subnet", "edges", static_cast<long long>(g.edge_count() - before),
              "subnet " + std::to_string(subnet_id));

    const auto xi_max = static_cast<std::uint32_t>(std::ceil(0.1 * size));
    const auto xi = static_cast<std::uint32_t>(rng.uniform_in(1, std::max(1u, xi_max)));
    const auto locals = rng.sample_distinct(size, xi);
    for (const auto off : locals) {
      const NodeId core = static_cast<NodeId>(rng.uniform_below(n_ba));
      if (g.add_edge(first + off, core)) ++bridge_edges;
    }
    first += size;
  }
  log_event(log, "bridges", "edges", bridge_edges);
  if (plan_out) *plan_out = plan;
  return g;
}

inline SubnetPlan make_subnet_plan_iii(const GeneratorParams& params, RngStream& rng) {
  const auto N = params.n_total;
  const auto n_sw = static_cast<std::uint32_t>(std::llround((1.0 - params.a) * N));
  const std::uint32_t n_ba = N - n_sw;
  const std::uint32_t K = params.k_ring;
  SubnetPlan plan;
  // Few large subnets: matches the intended two-level structure, where hubs
  // grow both inside the scale-free subnets and through subnet-level wiring.
  if (n_sw > 0) {
    std::vector<std::uint32_t> sizes;
    if (n_sw <= K) {
      sizes = {n_sw};
    } else {
      const auto U = detail::draw_subnet_count(n_sw, K + 1, 8, rng);
      sizes = detail::random_composition(n_sw, U, K + 1, rng);
    }
    for (auto s : sizes) {
      plan.sizes.push_back(s);
      plan.kinds.push_back(SubnetKind::WS);
    }
  }
  if (n_ba > 0) {
    std::vector<std::uint32_t> sizes;
    if (n_ba < 4) {
      sizes = {n_ba};
    } else {
      const auto U = detail::draw_subnet_count(n_ba, 4, 8, rng);
      sizes = detail::random_composition(n_ba, U, 4, rng);
    }
    for (auto s : sizes) {
      plan.sizes.push_back(s);
      plan.kinds.push_back(SubnetKind::BA);
    }
  }
  return plan;
}

/**
 * Federation of independently built subnets.  Starting from one uniformly
 * chosen subnet, every other subnet joins the federation through two distinct
 * node-to-node edges into one already-joined subnet; the target subnet is
 * drawn size-proportionally and the endpoint nodes degree-proportionally
 * within their subnets.
 */
inline HybridGraph generate_network_iii(const GeneratorParams& params,
                                        ConstructionLog* log = nullptr,
                                        const SubnetPlan* plan_in = nullptr) {
  params.validate();
  RngStream rng(derive_seed(params.rng_seed, "network_iii"));
  SubnetPlan plan = plan_in ? *plan_in : make_subnet_plan_iii(params, rng);
  plan.validate();
  if (plan.total() != params.n_total)
    throw std::invalid_argument("network_iii: plan sizes must sum to n_total");
  const auto U = static_cast<std::uint32_t>(plan.sizes.size());
  const std::uint32_t K = params.k_ring;

  HybridGraph g(params.n_total, GeneratorTag::NetworkIII);
  std::vector<NodeId> subnet_first(U);
  std::vector<std::vector<NodeId>> endpoints(U);  // degree roulette per subnet
  NodeId first = 0;
  for (std::uint32_t s = 0; s < U; ++s) {
    subnet_first[s] = first;
    const std::uint32_t size = plan.sizes[s];
    const NodeOrigin origin = plan.kinds[s] == SubnetKind::WS ? NodeOrigin::SmallWorld
                                                              : NodeOrigin::ScaleFree;
    for (NodeId i = first; i < first + size; ++i) g.set_node_meta(i, {origin, s});
    const auto before = g.edge_count();
    if (plan.kinds[s] == SubnetKind::WS) {
      if (size > K)
        detail::build_ws_range(g, first, size, K, params.p_rewire, rng);
      else
        detail::build_complete_range(g, first, size);
    } else {
      if (size >= 4)
        detail::build_ba_range(g, first, size, params.m_attach, rng);
      else
        detail::build_complete_range(g, first, size);
    }
    for (EdgeId e = static_cast<EdgeId>(before); e < g.edge_count(); ++e) {
      endpoints[s].push_back(g.edge(e).u);
      endpoints[s].push_back(g.edge(e).v);
    }
    log_event(log, plan.kinds[s] == SubnetKind::WS ? "ws_subnet" : "ba_subnet", "edges",
              static_cast<long long>(g.edge_count() - before),
              "subnet " + std::to_string(s));
    first += size;
  }

  if (U == 1) {
    log_event(log, "super_wiring", "edges", 0);
    return g;
  }

  auto draw_node = [&](std::uint32_t s) -> NodeId {
    if (endpoints[s].empty())
      return subnet_first[s] + static_cast<NodeId>(rng.uniform_below(plan.sizes[s]));
    return endpoints[s][rng.uniform_below(endpoints[s].size())];
  };

  const auto start = static_cast<std::uint32_t>(rng.uniform_below(U));
  std::vector<std::uint32_t> joined{start};
  std::uint64_t joined_size = plan.sizes[start];
  long long wiring_edges = 0;
  for (std::uint32_t s = 0; s < U; ++s) {
    if (s == start) continue;
    std::uint64_t pick = rng.uniform_below(joined_size);
    std::uint32_t target = joined.back();
    for (const auto j : joined) {
      if (pick < plan.sizes[j]) {
        target = j;
        break;
      }
      pick -= plan.sizes[j];
    }
    std::uint32_t made = 0;
    for (int attempt = 0; attempt < 100 && made < 2; ++attempt) {
      const NodeId a = draw_node(s);
      const NodeId b = draw_node(target);
      if (!g.add_edge(a, b)) continue;
      endpoints[s].push_back(a);
      endpoints[target].push_back(b);
      ++made;
      ++wiring_edges;
    }
    if (made < 2)
      throw std::runtime_error("network_iii: could not place two federation edges");
    joined.push_back(s);
    joined_size += plan.sizes[s];
  }
  log_event(log, "super_wiring", "edges", wiring_edges);
  return g;
}

}  // namespace hybridnet
