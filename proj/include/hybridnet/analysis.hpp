#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridnet/graph.hpp"

namespace hybridnet {

/** Degree-law evaluators and empirical comparisons. */

// Poisson pmf, safe for rate 0.
inline double poisson_pmf(std::uint32_t x, double rate) {
  if (rate < 0.0) throw std::invalid_argument("poisson_pmf: negative rate");
  if (rate == 0.0) return x == 0 ? 1.0 : 0.0;
  return std::exp(-rate + x * std::log(rate) - std::lgamma(static_cast<double>(x) + 1.0));
}

inline double binomial_coeff(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::uint32_t i = 0; i < k; ++i)
    c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c;
}

enum class WsRate : std::uint8_t {
  Printed,    // p*K / (2*a*N); degenerates for a*N -> 0, falls back to Classical
  Classical,  // p*K / 2; matches the rewired-edge landing rate of the generator
};

inline double ws_rewire_rate(std::uint32_t K, double p, double a, double n_total,
                             WsRate mode) {
  if (mode == WsRate::Classical) return p * K / 2.0;
  const double an = a * n_total;
  if (an <= 0.0) return p * K / 2.0;  // documented fallback
  return p * K / (2.0 * an);
}

/**
 * Degree pmf of the rewired ring lattice: degree = K/2 kept edges
 * + surviving incoming originals (binomial) + gained rewired edges (Poisson).
 */
inline double ws_degree_pmf(std::uint32_t k, std::uint32_t K, double p, double a,
                            double n_total, WsRate mode = WsRate::Classical) {
  if (K < 2 || K % 2 != 0) throw std::invalid_argument("ws_degree_pmf: K even, >= 2");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("ws_degree_pmf: p in [0,1]");
  const std::uint32_t half = K / 2;
  if (k < half) return 0.0;
  const std::uint32_t d = k - half;
  const double rate = ws_rewire_rate(K, p, a, n_total, mode);
  const std::uint32_t n_max = std::min(d, half);
  double sum = 0.0;
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    const double survive =
        binomial_coeff(half, n) * std::pow(1.0 - p, static_cast<double>(n)) *
        std::pow(p, static_cast<double>(half - n));
    sum += survive * poisson_pmf(d - n, rate);
  }
  return sum;
}

// Continuum degree density of the preferentially grown component.
inline double ba_degree_pdf(double k, std::uint32_t m, double a) {
  if (k <= 0.0) throw std::invalid_argument("ba_degree_pdf: k must be > 0");
  if (m < 1) throw std::invalid_argument("ba_degree_pdf: m >= 1");
  if (k < static_cast<double>(m)) return 0.0;
  return 2.0 * m * m * (1.0 - a) / (k * k * k);
}

// Piecewise hybrid density: small-world pmf below m, plus power-law tail from m up.
inline double hybrid_degree_pdf(std::uint32_t k, std::uint32_t K, double p, double a,
                                double n_total, std::uint32_t m,
                                WsRate mode = WsRate::Classical) {
  if (k < 1) throw std::invalid_argument("hybrid_degree_pdf: k >= 1");
  const double ws = ws_degree_pmf(k, K, p, a, n_total, mode);
  if (k < m) return ws;
  return ws + ba_degree_pdf(static_cast<double>(k), m, a);
}

// Mean degree of the hybrid under the K = m coupling.
inline double hybrid_average_degree(std::uint32_t K) {
  if (K < 2 || K % 2 != 0)
    throw std::invalid_argument("hybrid_average_degree: K even, >= 2");
  return static_cast<double>(K) + static_cast<double>(K / 2);
}

struct DegreeHistogram {
  std::map<std::uint32_t, std::uint64_t> counts;
  std::uint64_t n_nodes = 0;

  void add(std::uint32_t degree) {
    ++counts[degree];
    ++n_nodes;
  }
  double pmf(std::uint32_t k) const {
    if (n_nodes == 0) throw std::domain_error("pmf: empty histogram");
    const auto it = counts.find(k);
    return it == counts.end() ? 0.0
                              : static_cast<double>(it->second) / static_cast<double>(n_nodes);
  }
  std::uint32_t max_degree() const {
    return counts.empty() ? 0 : counts.rbegin()->first;
  }
  // Fraction of nodes with degree < k_below.
  double head_mass(std::uint32_t k_below) const {
    if (n_nodes == 0) throw std::domain_error("head_mass: empty histogram");
    std::uint64_t c = 0;
    for (const auto& [k, cnt] : counts) {
      if (k >= k_below) break;
      c += cnt;
    }
    return static_cast<double>(c) / static_cast<double>(n_nodes);
  }
};

inline DegreeHistogram empirical_distribution(const HybridGraph& g,
                                              DegreeMode mode = DegreeMode::All) {
  DegreeHistogram h;
  for (NodeId i = 0; i < g.n(); ++i) h.add(g.degree(i, mode));
  return h;
}

// 0.5 * sum_k |pmf(k) - q(k)|, with analytic mass beyond the evaluated range
// counted against the empirical zero tail.
inline double total_variation_vs(const DegreeHistogram& h,
                                 const std::function<double(std::uint32_t)>& q,
                                 std::uint32_t eval_max) {
  const std::uint32_t hi = std::max(eval_max, h.max_degree());
  double acc = 0.0;
  double q_mass = 0.0;
  for (std::uint32_t k = 0; k <= hi; ++k) {
    const double qq = q(k);
    q_mass += qq;
    acc += std::fabs(h.pmf(k) - qq);
  }
  acc += std::max(0.0, 1.0 - q_mass);
  return 0.5 * acc;
}

struct LogBinnedPoint {
  double k_center = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
  std::uint64_t count = 0;
  double density = 0.0;  // count / (n_nodes * bin width)
};

inline std::vector<LogBinnedPoint> log_binned(const DegreeHistogram& h,
                                              std::uint32_t bins_per_decade = 10) {
  if (bins_per_decade == 0) throw std::invalid_argument("log_binned: bins_per_decade >= 1");
  if (h.n_nodes == 0) throw std::domain_error("log_binned: empty histogram");
  std::map<long, std::uint64_t> bin_counts;
  for (const auto& [k, cnt] : h.counts) {
    if (k == 0) continue;  // degree 0 has no place on a log axis
    const long b = static_cast<long>(
        std::floor(std::log10(static_cast<double>(k)) * bins_per_decade + 1e-9));
    bin_counts[b] += cnt;
  }
  std::vector<LogBinnedPoint> out;
  out.reserve(bin_counts.size());
  for (const auto& [b, cnt] : bin_counts) {
    LogBinnedPoint pt;
    pt.k_lo = std::pow(10.0, static_cast<double>(b) / bins_per_decade);
    pt.k_hi = std::pow(10.0, static_cast<double>(b + 1) / bins_per_decade);
    pt.k_center = std::pow(10.0, (static_cast<double>(b) + 0.5) / bins_per_decade);
    pt.count = cnt;
    pt.density = static_cast<double>(cnt) /
                 (static_cast<double>(h.n_nodes) * (pt.k_hi - pt.k_lo));
    out.push_back(pt);
  }
  return out;
}

struct TailFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::uint32_t points_used = 0;
};

// Least squares on (log10 k, log10 density) over occupied bins inside [k_lo, k_hi].
inline TailFit fit_tail_slope(const std::vector<LogBinnedPoint>& pts, double k_lo,
                              double k_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::uint32_t n = 0;
  for (const auto& p : pts) {
    if (p.count == 0 || p.density <= 0.0) continue;
    if (p.k_center < k_lo || p.k_center > k_hi) continue;
    const double x = std::log10(p.k_center);
    const double y = std::log10(p.density);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw std::domain_error("fit_tail_slope: fewer than 3 occupied bins in window");
  const double det = n * sxx - sx * sx;
  if (std::fabs(det) < 1e-12) throw std::domain_error("fit_tail_slope: degenerate window");
  TailFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  f.points_used = n;
  return f;
}

/** Curve comparison. */

struct Curve {
  std::vector<double> t;
  std::vector<double> v;

  void validate() const {
    if (t.size() != v.size()) throw std::invalid_argument("curve: t/v size mismatch");
    if (t.size() < 2) throw std::invalid_argument("curve: need >= 2 points");
    for (std::size_t i = 1; i < t.size(); ++i)
      if (t[i] <= t[i - 1]) throw std::invalid_argument("curve: t must strictly increase");
  }
};

inline double interp_at(const Curve& c, double x) {
  if (x <= c.t.front()) return c.v.front();
  if (x >= c.t.back()) return c.v.back();
  const auto it = std::upper_bound(c.t.begin(), c.t.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - c.t.begin());
  const double w = (x - c.t[i - 1]) / (c.t[i] - c.t[i - 1]);
  return c.v[i - 1] + w * (c.v[i] - c.v[i - 1]);
}

inline Curve resample_onto(const Curve& c, const std::vector<double>& grid) {
  Curve out;
  out.t = grid;
  out.v.reserve(grid.size());
  for (const double x : grid) out.v.push_back(interp_at(c, x));
  return out;
}

// Common grid = the coarser curve's samples restricted to the overlap.
inline std::vector<double> common_grid(const Curve& a, const Curve& b) {
  a.validate();
  b.validate();
  const double lo = std::max(a.t.front(), b.t.front());
  const double hi = std::min(a.t.back(), b.t.back());
  if (hi <= lo) throw std::invalid_argument("common_grid: curves do not overlap");
  const Curve& coarse = (a.t.size() <= b.t.size()) ? a : b;
  std::vector<double> grid;
  for (const double x : coarse.t)
    if (x >= lo && x <= hi) grid.push_back(x);
  if (grid.size() < 2) throw std::invalid_argument("common_grid: overlap too small");
  return grid;
}

inline double trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    acc += 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);
  return acc;
}

struct SimilarityReport {
  double rho = 0.0;
  double integral_zeta = 0.0;
  double integral_absdiff = 0.0;
  std::uint32_t grid_points = 0;
};

// rho = (int zeta - int |zeta - candidate|) / int zeta, both on one grid.
// Asymmetric: the first curve is the reference the result is normalized by.
inline SimilarityReport similarity(const Curve& zeta, const Curve& candidate) {
  zeta.validate();
  candidate.validate();
  if (zeta.t != candidate.t)
    throw std::invalid_argument("similarity: curves must share one grid (resample first)");
  SimilarityReport rep;
  rep.grid_points = static_cast<std::uint32_t>(zeta.t.size());
  rep.integral_zeta = trapezoid(zeta.t, zeta.v);
  if (rep.integral_zeta == 0.0)
    throw std::domain_error("similarity: reference curve integrates to zero");
  std::vector<double> absdiff(zeta.t.size());
  for (std::size_t i = 0; i < zeta.t.size(); ++i)
    absdiff[i] = std::fabs(zeta.v[i] - candidate.v[i]);
  rep.integral_absdiff = trapezoid(zeta.t, absdiff);
  rep.rho = (rep.integral_zeta - rep.integral_absdiff) / rep.integral_zeta;
  return rep;
}

inline SimilarityReport similarity_resampled(const Curve& zeta, const Curve& candidate) {
  const auto grid = common_grid(zeta, candidate);
  return similarity(resample_onto(zeta, grid), resample_onto(candidate, grid));
}

}  // namespace hybridnet
