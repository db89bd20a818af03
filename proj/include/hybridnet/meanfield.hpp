#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hybridnet {

/**
 * Degree-class mean-field dynamics.
 *
 * Per degree class k:
 *   ds_k/dt = -lambda k s_k theta + u i_k + w sigma r_k
 *   di_k/dt =  lambda k s_k theta - i_k
 *   dr_k/dt =  (w + q) i_k - w sigma r_k
 * with theta = sum_k k P(k) i_k / <k>, and s_k + i_k + r_k = 1 per class.
 */

struct DegreeDistribution {
  std::vector<double> k;
  std::vector<double> pk;

  void validate() const {
    if (k.empty() || k.size() != pk.size())
      throw std::invalid_argument("degree distribution: empty or size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] <= 0) throw std::invalid_argument("degree distribution: k must be > 0");
      if (pk[i] < 0) throw std::invalid_argument("degree distribution: pk must be >= 0");
      if (i > 0 && k[i] <= k[i - 1])
        throw std::invalid_argument("degree distribution: k must strictly increase");
      sum += pk[i];
    }
    if (std::fabs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("degree distribution: pk must sum to 1");
  }

  void normalize() {
    double sum = 0.0;
    for (const double p : pk) sum += p;
    if (sum <= 0.0) throw std::invalid_argument("degree distribution: zero mass");
    for (double& p : pk) p /= sum;
  }

  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) m += k[i] * pk[i];
    return m;
  }
  double second_moment() const {
    double m = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) m += k[i] * k[i] * pk[i];
    return m;
  }

  // pk ~ k^-3 on integer support [m, M].
  static DegreeDistribution ba_like(std::uint32_t m, std::uint32_t M) {
    if (m < 1 || M <= m) throw std::invalid_argument("ba_like: need 1 <= m < M");
    DegreeDistribution d;
    for (std::uint32_t kk = m; kk <= M; ++kk) {
      d.k.push_back(kk);
      d.pk.push_back(1.0 / (static_cast<double>(kk) * kk * kk));
    }
    d.normalize();
    return d;
  }

  static DegreeDistribution from_pmf(const std::function<double(std::uint32_t)>& pmf,
                                     std::uint32_t k_min, std::uint32_t k_max) {
    if (k_min < 1 || k_max < k_min) throw std::invalid_argument("from_pmf: bad support");
    DegreeDistribution d;
    for (std::uint32_t kk = k_min; kk <= k_max; ++kk) {
      const double p = pmf(kk);
      if (p < 0) throw std::invalid_argument("from_pmf: negative mass");
      d.k.push_back(kk);
      d.pk.push_back(p);
    }
    d.normalize();
    return d;
  }
};

struct MeanFieldParams {
  double lambda = 0.2;
  double u = 0.8;
  double w = 0.05;
  double q = 0.15;
  double sigma = 0.15;

  void validate() const {
    if (u < 0 || w < 0 || q < 0 || std::fabs(u + w + q - 1.0) > 1e-9)
      throw std::invalid_argument("model shares must be >= 0 and sum to 1");
    if (lambda < 0) throw std::invalid_argument("lambda >= 0");
    if (sigma < 0 || sigma > 1) throw std::invalid_argument("sigma in [0,1]");
  }
};

struct DegreeClassField {
  DegreeDistribution dist;
  std::vector<double> s, i, r;

  static DegreeClassField uniform_seed(DegreeDistribution d, double i0) {
    if (i0 < 0 || i0 > 1) throw std::invalid_argument("i0 in [0,1]");
    d.validate();
    DegreeClassField f;
    const std::size_t n = d.k.size();
    f.dist = std::move(d);
    f.s.assign(n, 1.0 - i0);
    f.i.assign(n, i0);
    f.r.assign(n, 0.0);
    return f;
  }

  void validate() const {
    dist.validate();
    const std::size_t n = dist.k.size();
    if (s.size() != n || i.size() != n || r.size() != n)
      throw std::invalid_argument("field: class arrays must match support");
    for (std::size_t j = 0; j < n; ++j) {
      if (s[j] < 0 || s[j] > 1 || i[j] < 0 || i[j] > 1 || r[j] < 0 || r[j] > 1)
        throw std::invalid_argument("field: class fractions must lie in [0,1]");
      if (std::fabs(s[j] + i[j] + r[j] - 1.0) > 1e-9)
        throw std::invalid_argument("field: class fractions must sum to 1");
    }
  }
};

// Degree-weighted spreader exposure.
inline double theta(const DegreeDistribution& dist, const std::vector<double>& i) {
  const double kmean = dist.mean();
  if (kmean <= 0) throw std::domain_error("theta: zero mean degree");
  double acc = 0.0;
  for (std::size_t j = 0; j < dist.k.size(); ++j) acc += dist.k[j] * dist.pk[j] * i[j];
  return acc / kmean;
}

inline double theta(const DegreeClassField& f) { return theta(f.dist, f.i); }

struct Derivs {
  std::vector<double> ds, di, dr;
};

inline void rhs(const DegreeDistribution& dist, const std::vector<double>& s,
                const std::vector<double>& i, const std::vector<double>& r,
                const MeanFieldParams& p, Derivs& out) {
  const double th = theta(dist, i);
  const std::size_t n = dist.k.size();
  out.ds.resize(n);
  out.di.resize(n);
  out.dr.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double infect = p.lambda * dist.k[j] * s[j] * th;
    out.ds[j] = -infect + p.u * i[j] + p.w * p.sigma * r[j];
    out.di[j] = infect - i[j];
    out.dr[j] = (p.w + p.q) * i[j] - p.w * p.sigma * r[j];
  }
}

inline Derivs rhs(const DegreeClassField& f, const MeanFieldParams& p) {
  Derivs d;
  rhs(f.dist, f.s, f.i, f.r, p, d);
  return d;
}

struct IntegrateOptions {
  double dt = 0.01;
  double t_max = 200.0;
  double steady_tol = 0.0;  // > 0: stop when max |di_k| falls below it
  std::uint32_t sample_stride = 0;  // > 0: invoke sink every stride steps
  std::function<void(double, const DegreeClassField&)> sink;
};

struct IntegrateStats {
  double t_end = 0.0;
  std::uint64_t steps = 0;
  std::uint64_t clamp_events = 0;
};

// Classic fixed-step RK4; the exposure term is recomputed inside every stage.
inline IntegrateStats integrate(DegreeClassField& f, const MeanFieldParams& p,
                                const IntegrateOptions& opt) {
  f.validate();
  p.validate();
  if (opt.dt <= 0 || opt.t_max < 0) throw std::invalid_argument("integrate: bad dt/t_max");
  const std::size_t n = f.dist.k.size();
  Derivs k1, k2, k3, k4;
  std::vector<double> s2(n), i2(n), r2(n);
  IntegrateStats stats;
  if (opt.sink && opt.sample_stride > 0) opt.sink(0.0, f);

  auto stage = [&](const Derivs& d, double h) {
    for (std::size_t j = 0; j < n; ++j) {
      s2[j] = f.s[j] + h * d.ds[j];
      i2[j] = f.i[j] + h * d.di[j];
      r2[j] = f.r[j] + h * d.dr[j];
    }
  };

  double t = 0.0;
  while (t < opt.t_max - 1e-12) {
    const double h = std::min(opt.dt, opt.t_max - t);
    rhs(f.dist, f.s, f.i, f.r, p, k1);
    stage(k1, 0.5 * h);
    rhs(f.dist, s2, i2, r2, p, k2);
    stage(k2, 0.5 * h);
    rhs(f.dist, s2, i2, r2, p, k3);
    stage(k3, h);
    rhs(f.dist, s2, i2, r2, p, k4);
    double max_di = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ws = h / 6.0;
      f.s[j] += ws * (k1.ds[j] + 2 * k2.ds[j] + 2 * k3.ds[j] + k4.ds[j]);
      f.i[j] += ws * (k1.di[j] + 2 * k2.di[j] + 2 * k3.di[j] + k4.di[j]);
      f.r[j] += ws * (k1.dr[j] + 2 * k2.dr[j] + 2 * k3.dr[j] + k4.dr[j]);
      max_di = std::max(max_di, std::fabs(k1.di[j]));
    }
    // Conservation is a linear invariant of the scheme; anything beyond
    // roundoff means the step size is unusable.
    for (std::size_t j = 0; j < n; ++j) {
      if (std::fabs(f.s[j] + f.i[j] + f.r[j] - 1.0) > 1e-9)
        throw std::runtime_error("integrate: per-class conservation broken; reduce dt");
      for (double* x : {&f.s[j], &f.i[j], &f.r[j]}) {
        if (*x < -1e-6 || *x > 1.0 + 1e-6)
          throw std::runtime_error("integrate: state left [0,1]; reduce dt");
        if (*x < 0.0) {
          *x = 0.0;
          ++stats.clamp_events;
        } else if (*x > 1.0) {
          *x = 1.0;
          ++stats.clamp_events;
        }
      }
    }
    t += h;
    ++stats.steps;
    if (opt.sink && opt.sample_stride > 0 && stats.steps % opt.sample_stride == 0)
      opt.sink(t, f);
    if (opt.steady_tol > 0 && max_di < opt.steady_tol) break;
  }
  stats.t_end = t;
  return stats;
}

// Closed-form per-class stationary spreader density at a given exposure level.
inline double steady_state_i_k(double k, double th, const MeanFieldParams& p) {
  if (k <= 0) throw std::invalid_argument("steady_state_i_k: k > 0");
  if (th < 0 || th > 1) throw std::invalid_argument("steady_state_i_k: theta in [0,1]");
  const double ws = p.w * p.sigma;
  const double num = p.lambda * ws * k * th;
  const double den = p.lambda * (1.0 - p.u + ws) * k * th + ws;
  if (den == 0.0) return 0.0;
  return num / den;
}

// Self-consistency map whose fixed point gives the stationary exposure.
inline double theta_map(const DegreeDistribution& dist, const MeanFieldParams& p,
                        double th) {
  const double kmean = dist.mean();
  double acc = 0.0;
  for (std::size_t j = 0; j < dist.k.size(); ++j)
    acc += dist.k[j] * dist.pk[j] * steady_state_i_k(dist.k[j], th, p);
  return acc / kmean;
}

// d/dtheta of theta_map at zero for the map as implemented.
inline double theta_map_slope_at_zero(const DegreeDistribution& dist,
                                      const MeanFieldParams& p) {
  return p.lambda * dist.second_moment() / dist.mean();
}

/**
 * Finds theta* in (0,1] with theta_map(theta*) = theta* by damped iteration,
 * falling back to bisection; returns 0 when the map's slope at the origin is
 * <= 1 (only the trivial solution exists).
 */
inline double solve_theta_fixed_point(const DegreeDistribution& dist,
                                      const MeanFieldParams& p, double tol = 1e-10) {
  dist.validate();
  p.validate();
  if (theta_map_slope_at_zero(dist, p) <= 1.0) return 0.0;
  double th = 0.5;
  const double damp = 0.7;
  for (int it = 0; it < 5000; ++it) {
    const double next = (1.0 - damp) * th + damp * theta_map(dist, p, th);
    if (std::fabs(next - th) < tol && std::fabs(theta_map(dist, p, next) - next) < tol)
      return next;
    th = next;
  }
  double lo = 1e-14, hi = 1.0;
  if (theta_map(dist, p, hi) - hi > 0) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (theta_map(dist, p, mid) - mid > 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct ThresholdInputs {
  DegreeDistribution full;     // moments of the whole network
  DegreeDistribution ws_part;  // small-world component, for Upsilon / Psi
  double w = 0.05;
  double sigma = 0.15;
  double a = 0.5;
  double m = 4;
  double M = 100;
};

struct ThresholdReport {
  double lambda_c_empirical = 0.0;   // <k> / (<k^2> w sigma)
  double lambda_c_closedform = 0.0;  // piecewise tail branch
  double upsilon = 0.0;
  double psi = 0.0;
  double k_mean = 0.0;
  double k2_mean = 0.0;
  double m = 0.0;
  double M = 0.0;
};

inline ThresholdReport threshold(const ThresholdInputs& in) {
  in.full.validate();
  in.ws_part.validate();
  if (in.M <= in.m || in.m < 1) throw std::invalid_argument("threshold: need 1 <= m < M");
  if (in.w < 0 || in.sigma < 0) throw std::invalid_argument("threshold: w, sigma >= 0");
  ThresholdReport rep;
  rep.k_mean = in.full.mean();
  rep.k2_mean = in.full.second_moment();
  rep.m = in.m;
  rep.M = in.M;
  const double s1 = in.ws_part.mean();
  const double s2 = in.ws_part.second_moment();
  rep.upsilon = s2 / s1;
  rep.psi = in.m * (1.0 - in.a) / s1;
  const double ws = in.w * in.sigma;
  if (ws <= 0.0) {
    rep.lambda_c_empirical = std::numeric_limits<double>::infinity();
    rep.lambda_c_closedform = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.lambda_c_empirical = rep.k_mean / (rep.k2_mean * ws);
  rep.lambda_c_closedform =
      (1.0 + 2.0 * rep.psi) /
      (ws * (rep.upsilon + 1.0 + 2.0 * rep.psi * std::log(in.M / in.m)));
  return rep;
}

}  // namespace hybridnet
