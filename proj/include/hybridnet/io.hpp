#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridnet/analysis.hpp"
#include "hybridnet/generators.hpp"
#include "hybridnet/graph.hpp"
#include "hybridnet/meanfield.hpp"
#include "hybridnet/propagation.hpp"

namespace hybridnet {

using nlohmann::json;

// Fixed-format float rendering keeps reruns byte-identical.
inline std::string fmt_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/** Graph files. */

inline void write_edge_list(const HybridGraph& g, const std::string& path) {
  std::ostringstream out;
  out << "# nodes=" << g.n() << " generator=" << to_string(g.generator_tag()) << "\n";
  for (const Edge& e : g.edges())
    out << e.u << ' ' << e.v << ' '
        << (e.visibility == EdgeVisibility::Dominant ? 'D' : 'I') << "\n";
  write_text_file(path, out.str());
}

inline HybridGraph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string header;
  std::getline(in, header);
  std::uint32_t n = 0;
  char tag_buf[32] = {0};
  if (std::sscanf(header.c_str(), "# nodes=%u generator=%31s", &n, tag_buf) != 2)
    throw std::runtime_error("bad edge-list header in " + path);
  HybridGraph g(n, generator_tag_from_string(tag_buf));
  std::uint32_t u, v;
  char vis;
  while (in >> u >> v >> vis) {
    if (!g.add_edge(u, v)) throw std::runtime_error("duplicate edge in " + path);
    if (vis == 'I')
      g.set_edge_visibility(static_cast<EdgeId>(g.edge_count() - 1),
                            EdgeVisibility::Implicit);
    else if (vis != 'D')
      throw std::runtime_error("bad visibility flag in " + path);
  }
  return g;
}

inline void write_node_metadata(const HybridGraph& g, const std::string& path) {
  std::ostringstream out;
  out << "[\n";
  for (NodeId i = 0; i < g.n(); ++i) {
    const NodeMeta& m = g.node_meta(i);
    out << "  {\"id\": " << i << ", \"origin\": \"" << to_string(m.origin)
        << "\", \"subnet\": ";
    if (m.subnet)
      out << *m.subnet;
    else
      out << "null";
    out << ", \"birth_order\": " << i << "}";
    out << (i + 1 < g.n() ? ",\n" : "\n");
  }
  out << "]\n";
  write_text_file(path, out.str());
}

inline void write_construction_log(const ConstructionLog& log, const std::string& path) {
  std::ostringstream out;
  for (const auto& ev : log) {
    json j{{"step", ev.step}, {"kind", ev.kind}, {"value", ev.value}};
    if (!ev.note.empty()) j["note"] = ev.note;
    out << j.dump() << "\n";
  }
  write_text_file(path, out.str());
}

/** Simulation outputs. */

inline std::string trace_csv(const std::vector<double>& s, const std::vector<double>& i,
                             const std::vector<double>& r, const std::vector<double>& phi,
                             const std::vector<double>& gamma) {
  std::ostringstream out;
  out << "t,s,i,r,phi,gamma\n";
  for (std::size_t t = 0; t < s.size(); ++t)
    out << t << ',' << fmt_num(s[t]) << ',' << fmt_num(i[t]) << ',' << fmt_num(r[t])
        << ',' << fmt_num(phi[t]) << ',' << fmt_num(gamma[t]) << "\n";
  return out.str();
}

inline void write_trace_csv(const SimulationTrace& tr, const std::string& path) {
  write_text_file(path, trace_csv(tr.s, tr.i, tr.r, tr.phi, tr.gamma));
}

inline void write_replica_trace_csv(const ReplicaTrace& tr, const std::string& path) {
  std::vector<double> gamma(tr.gamma.begin(), tr.gamma.end());
  write_text_file(path, trace_csv(tr.s, tr.i, tr.r, tr.phi, gamma));
}

inline void write_trigger_summary(const SimulationTrace& tr,
                                  const PropagationConfig& cfg,
                                  const std::string& path) {
  json j;
  j["replicas"] = cfg.replicas;
  j["phi_trigger"] = cfg.phi_trigger ? json(*cfg.phi_trigger) : json(nullptr);
  json times = json::array();
  std::uint32_t triggered = 0;
  for (const auto& t : tr.trigger_times) {
    times.push_back(t ? json(*t) : json(nullptr));
    triggered += t.has_value();
  }
  j["trigger_times"] = times;
  j["triggered_fraction"] =
      static_cast<double>(triggered) / static_cast<double>(cfg.replicas);
  write_text_file(path, j.dump(2) + "\n");
}

/** Mean-field outputs. */

class MeanFieldCsvWriter {
 public:
  MeanFieldCsvWriter() { out_ << "t,k,s_k,i_k,r_k,theta\n"; }
  void operator()(double t, const DegreeClassField& f) {
    const double th = theta(f);
    for (std::size_t j = 0; j < f.dist.k.size(); ++j)
      out_ << fmt_num(t) << ',' << fmt_num(f.dist.k[j]) << ',' << fmt_num(f.s[j]) << ','
           << fmt_num(f.i[j]) << ',' << fmt_num(f.r[j]) << ',' << fmt_num(th) << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

inline json threshold_json_value(double x) {
  if (std::isinf(x)) return json("infinite");
  return json(x);
}

inline void write_threshold_report(const ThresholdReport& rep, const std::string& path) {
  json j;
  j["lambda_c_empirical"] = threshold_json_value(rep.lambda_c_empirical);
  j["lambda_c_closedform"] = threshold_json_value(rep.lambda_c_closedform);
  const bool finite = std::isfinite(rep.lambda_c_empirical) &&
                      std::isfinite(rep.lambda_c_closedform) &&
                      rep.lambda_c_closedform != 0.0;
  j["ratio"] = finite ? json(rep.lambda_c_empirical / rep.lambda_c_closedform)
                      : json("infinite");
  j["upsilon"] = rep.upsilon;
  j["psi"] = rep.psi;
  j["k_mean"] = rep.k_mean;
  j["k2_mean"] = rep.k2_mean;
  j["m"] = rep.m;
  j["M"] = rep.M;
  write_text_file(path, j.dump(2) + "\n");
}

/** Histograms and curves. */

inline void write_histogram_csv(const DegreeHistogram& h, const std::string& path) {
  std::ostringstream out;
  out << "k,count,pk\n";
  for (const auto& [k, cnt] : h.counts)
    out << k << ',' << cnt << ',' << fmt_num(h.pmf(k)) << "\n";
  write_text_file(path, out.str());
}

inline void write_binned_csv(const std::vector<LogBinnedPoint>& pts,
                             const std::string& path) {
  std::ostringstream out;
  out << "k_center,count,density\n";
  for (const auto& p : pts)
    out << fmt_num(p.k_center) << ',' << p.count << ',' << fmt_num(p.density) << "\n";
  write_text_file(path, out.str());
}

inline void write_curve_csv(const Curve& c, const std::string& path) {
  std::ostringstream out;
  out << "t,value\n";
  for (std::size_t i = 0; i < c.t.size(); ++i)
    out << fmt_num(c.t[i]) << ',' << fmt_num(c.v[i]) << "\n";
  write_text_file(path, out.str());
}

inline Curve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Curve c;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double t, v;
    if (std::sscanf(line.c_str(), "%lf,%lf", &t, &v) != 2) {
      if (c.t.empty()) continue;  // header
      throw std::runtime_error("bad curve row in " + path + ": " + line);
    }
    c.t.push_back(t);
    c.v.push_back(v);
  }
  c.validate();  // enforces strictly increasing t
  return c;
}

}  // namespace hybridnet
