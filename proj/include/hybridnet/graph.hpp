#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridnet/rng.hpp"

namespace hybridnet {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class NodeOrigin : std::uint8_t { SmallWorld, ScaleFree };

enum class EdgeVisibility : std::uint8_t { Dominant, Implicit };

enum class GeneratorTag : std::uint8_t { NetworkI, NetworkII, NetworkIII, PureWS, PureBA };

enum class DegreeMode : std::uint8_t { All, DominantOnly };

inline const char* to_string(GeneratorTag t) {
  switch (t) {
    case GeneratorTag::NetworkI: return "NetworkI";
    case GeneratorTag::NetworkII: return "NetworkII";
    case GeneratorTag::NetworkIII: return "NetworkIII";
    case GeneratorTag::PureWS: return "PureWS";
    case GeneratorTag::PureBA: return "PureBA";
  }
  throw std::logic_error("unknown GeneratorTag");
}

inline GeneratorTag generator_tag_from_string(const std::string& s) {
  if (s == "NetworkI") return GeneratorTag::NetworkI;
  if (s == "NetworkII") return GeneratorTag::NetworkII;
  if (s == "NetworkIII") return GeneratorTag::NetworkIII;
  if (s == "PureWS") return GeneratorTag::PureWS;
  if (s == "PureBA") return GeneratorTag::PureBA;
  throw std::invalid_argument("unknown generator tag: " + s);
}

inline const char* to_string(NodeOrigin o) {
  return o == NodeOrigin::SmallWorld ? "SmallWorld" : "ScaleFree";
}

struct NodeMeta {
  NodeOrigin origin = NodeOrigin::SmallWorld;
  std::optional<std::uint32_t> subnet;  // only set by the subnet-based builders
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  EdgeVisibility visibility = EdgeVisibility::Dominant;
};

struct AdjEntry {
  NodeId neighbor = 0;
  EdgeId edge = 0;
};

/**
 * Undirected simple graph with per-node origin metadata and a two-level
 * edge visibility attribute (Dominant / Implicit).
 *
 * Node ids are dense [0, n) in creation order; creation order doubles as
 * birth order for the growth-based builders.
 */
class HybridGraph {
 public:
  explicit HybridGraph(NodeId n = 0, GeneratorTag tag = GeneratorTag::PureWS)
      : tag_(tag) {
    resize(n);
  }

  void resize(NodeId n) {
    meta_.resize(n);
    adj_.resize(n);
    dominant_degree_.resize(n, 0);
  }

  NodeId add_node(NodeMeta meta) {
    meta_.push_back(meta);
    adj_.emplace_back();
    dominant_degree_.push_back(0);
    return static_cast<NodeId>(meta_.size() - 1);
  }

  NodeId n() const { return static_cast<NodeId>(meta_.size()); }
  std::size_t edge_count() const { return edges_.size(); }
  GeneratorTag generator_tag() const { return tag_; }
  void set_generator_tag(GeneratorTag t) { tag_ = t; }

  const NodeMeta& node_meta(NodeId i) const { return meta_.at(i); }
  void set_node_meta(NodeId i, NodeMeta m) { meta_.at(i) = m; }

  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<AdjEntry>& neighbors(NodeId i) const { return adj_.at(i); }

  bool has_edge(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    const NodeId other = adj_[u].size() <= adj_[v].size() ? v : u;
    for (const auto& e : a)
      if (e.neighbor == other) return true;
    return false;
  }

  // Returns false on duplicate; throws on self-loop / bad node id.
  bool add_edge(NodeId u, NodeId v) {
    check_node(u);
    check_node(v);
    if (u == v) throw std::invalid_argument("add_edge: self-loop rejected");
    if (has_edge(u, v)) return false;
    const EdgeId id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{u, v, EdgeVisibility::Dominant});
    adj_[u].push_back(AdjEntry{v, id});
    adj_[v].push_back(AdjEntry{u, id});
    ++dominant_degree_[u];
    ++dominant_degree_[v];
    return true;
  }

  // Rewires edge id so that `fixed` stays and the far endpoint becomes
  // `new_target`.  Caller guarantees the new pair is not already present.
  void rewire_edge(EdgeId id, NodeId fixed, NodeId new_target) {
    Edge& e = edges_.at(id);
    if (e.u != fixed && e.v != fixed)
      throw std::invalid_argument("rewire_edge: fixed endpoint not on edge");
    if (new_target == fixed) throw std::invalid_argument("rewire_edge: self-loop");
    if (has_edge(fixed, new_target))
      throw std::invalid_argument("rewire_edge: duplicate edge");
    const NodeId old_far = (e.u == fixed) ? e.v : e.u;
    detach(old_far, id);
    --dominant_degree_[old_far];
    e.u = fixed;
    e.v = new_target;
    for (auto& a : adj_[fixed])
      if (a.edge == id) a.neighbor = new_target;
    adj_[new_target].push_back(AdjEntry{fixed, id});
    ++dominant_degree_[new_target];
  }

  std::uint32_t degree(NodeId i, DegreeMode mode = DegreeMode::All) const {
    check_node(i);
    if (mode == DegreeMode::All) return static_cast<std::uint32_t>(adj_[i].size());
    return dominant_degree_[i];
  }

  double average_degree(DegreeMode mode = DegreeMode::All) const {
    if (n() == 0) throw std::domain_error("average_degree: empty graph");
    if (mode == DegreeMode::All)
      return 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n());
    std::uint64_t sum = 0;
    for (auto d : dominant_degree_) sum += d;
    return static_cast<double>(sum) / static_cast<double>(n());
  }

  std::uint32_t max_degree(DegreeMode mode = DegreeMode::All) const {
    std::uint32_t best = 0;
    for (NodeId i = 0; i < n(); ++i) best = std::max(best, degree(i, mode));
    return best;
  }

  /**
   * Splits edges into Dominant/Implicit.  Every node selects min(degree, delta)
   * of its incident edges uniformly at random; an edge stays Dominant when
   * either endpoint selected it, so per-node dominant degree >= min(degree, delta).
   *
   * Requires delta > 1 and a graph whose edges are all still Dominant.
   * `chosen_per_node` (optional) receives each node's own selection count,
   * for auditing the selection rule.
   */
  void assign_implicit_edges(std::uint32_t delta, RngStream& rng,
                             std::vector<std::uint32_t>* chosen_per_node = nullptr) {
    if (delta <= 1) throw std::invalid_argument("assign_implicit_edges: delta must be > 1");
    if (labels_assigned_)
      throw std::logic_error("assign_implicit_edges: edges already labeled");
    labels_assigned_ = true;
    std::vector<char> keep(edges_.size(), 0);
    if (chosen_per_node) chosen_per_node->assign(n(), 0);
    std::vector<std::uint32_t> idx;
    for (NodeId i = 0; i < n(); ++i) {
      const auto deg = static_cast<std::uint32_t>(adj_[i].size());
      const std::uint32_t take = std::min(deg, delta);
      if (chosen_per_node) (*chosen_per_node)[i] = take;
      if (take == deg) {
        for (const auto& a : adj_[i]) keep[a.edge] = 1;
        continue;
      }
      idx.resize(deg);
      for (std::uint32_t j = 0; j < deg; ++j) idx[j] = j;
      for (std::uint32_t j = 0; j < take; ++j) {
        const auto k = j + static_cast<std::uint32_t>(rng.uniform_below(deg - j));
        std::swap(idx[j], idx[k]);
        keep[adj_[i][idx[j]].edge] = 1;
      }
    }
    std::fill(dominant_degree_.begin(), dominant_degree_.end(), 0);
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      edges_[e].visibility = keep[e] ? EdgeVisibility::Dominant : EdgeVisibility::Implicit;
      if (keep[e]) {
        ++dominant_degree_[edges_[e].u];
        ++dominant_degree_[edges_[e].v];
      }
    }
  }

  bool labels_assigned() const { return labels_assigned_; }

  // Low-level label override (file loading, targeted tests).
  void set_edge_visibility(EdgeId id, EdgeVisibility vis) {
    Edge& e = edges_.at(id);
    if (vis == EdgeVisibility::Implicit) labels_assigned_ = true;
    if (e.visibility == vis) return;
    const int d = (vis == EdgeVisibility::Dominant) ? 1 : -1;
    e.visibility = vis;
    dominant_degree_[e.u] = static_cast<std::uint32_t>(
        static_cast<std::int64_t>(dominant_degree_[e.u]) + d);
    dominant_degree_[e.v] = static_cast<std::uint32_t>(
        static_cast<std::int64_t>(dominant_degree_[e.v]) + d);
  }

 private:
  void check_node(NodeId i) const {
    if (i >= n()) throw std::out_of_range("node id out of range");
  }

  void detach(NodeId node, EdgeId id) {
    auto& a = adj_[node];
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j].edge == id) {
        a[j] = a.back();
        a.pop_back();
        return;
      }
    }
    throw std::logic_error("detach: edge not found in adjacency");
  }

  GeneratorTag tag_;
  bool labels_assigned_ = false;
  std::vector<NodeMeta> meta_;
  std::vector<Edge> edges_;
  std::vector<std::vector<AdjEntry>> adj_;
  std::vector<std::uint32_t> dominant_degree_;
};

inline bool is_connected(const HybridGraph& g) {
  const NodeId n = g.n();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  NodeId visited = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const auto& a : g.neighbors(u)) {
      if (!seen[a.neighbor]) {
        seen[a.neighbor] = 1;
        ++visited;
        stack.push_back(a.neighbor);
      }
    }
  }
  return visited == n;
}

}  // namespace hybridnet
