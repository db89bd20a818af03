#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hybridnet/analysis.hpp"
#include "hybridnet/generators.hpp"

using namespace hybridnet;
using Catch::Approx;

TEST_CASE("poisson pmf behaves at the edges") {
  REQUIRE(poisson_pmf(0, 0.0) == 1.0);
  REQUIRE(poisson_pmf(3, 0.0) == 0.0);
  double sum = 0.0;
  for (std::uint32_t x = 0; x < 60; ++x) sum += poisson_pmf(x, 2.5);
  REQUIRE(sum == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("small-world degree pmf matches hand-computed values") {
  // K=4, p=0.3, lattice-rate convention (p*K/2).
  REQUIRE(ws_degree_pmf(2, 4, 0.3, 0.5, 1000) == Approx(0.04939304724846237).epsilon(1e-12));
  REQUIRE(ws_degree_pmf(4, 4, 0.3, 0.5, 1000) == Approx(0.41610898248649075).epsilon(1e-12));
  REQUIRE(ws_degree_pmf(7, 4, 0.3, 0.5, 1000) == Approx(0.010957748745976877).epsilon(1e-12));
  // Size-scaled rate p*K/(2aN) with a=0.5, N=1000.
  REQUIRE(ws_degree_pmf(2, 4, 0.3, 0.5, 1000, WsRate::Printed) ==
          Approx(0.08989206477408777).epsilon(1e-12));
}

TEST_CASE("small-world degree pmf is a distribution") {
  for (double p : {0.0, 0.1, 0.5, 1.0}) {
    double sum = 0.0;
    for (std::uint32_t k = 0; k < 300; ++k) sum += ws_degree_pmf(k, 6, p, 0.5, 1000);
    REQUIRE(sum == Approx(1.0).epsilon(1e-9));
  }
  REQUIRE(ws_degree_pmf(1, 4, 0.3, 0.5, 1000) == 0.0);  // below K/2
  REQUIRE(ws_degree_pmf(4, 4, 0.0, 0.5, 1000) == 1.0);  // p=0 keeps the lattice
  REQUIRE(ws_degree_pmf(5, 4, 0.0, 0.5, 1000) == 0.0);
}

TEST_CASE("scale-free tail density") {
  REQUIRE(ba_degree_pdf(4, 4, 0.0) == Approx(0.5));
  REQUIRE(ba_degree_pdf(4, 4, 0.5) == Approx(0.25));
  REQUIRE(ba_degree_pdf(3, 4, 0.0) == 0.0);  // below m
  REQUIRE_THROWS_AS(ba_degree_pdf(0, 4, 0.0), std::invalid_argument);
  REQUIRE(hybrid_degree_pdf(4, 4, 0.3, 0.5, 1000, 4) ==
          Approx(ws_degree_pmf(4, 4, 0.3, 0.5, 1000) + 0.25).epsilon(1e-12));
}

TEST_CASE("mean degree identity for the half-and-half mix") {
  REQUIRE(hybrid_average_degree(4) == 6.0);
  REQUIRE(hybrid_average_degree(6) == 9.0);
  REQUIRE_THROWS_AS(hybrid_average_degree(5), std::invalid_argument);
}

TEST_CASE("histogram bookkeeping") {
  DegreeHistogram h;
  for (std::uint32_t k : {2, 2, 2, 5, 5, 9}) h.add(k);
  REQUIRE(h.n_nodes == 6);
  REQUIRE(h.pmf(2) == Approx(0.5));
  REQUIRE(h.pmf(3) == 0.0);
  REQUIRE(h.max_degree() == 9);
  REQUIRE(h.head_mass(5) == Approx(0.5));   // k < 5
  REQUIRE(h.head_mass(10) == Approx(1.0));
}

TEST_CASE("total variation distance against an analytic pmf") {
  DegreeHistogram h;
  for (int i = 0; i < 50; ++i) h.add(4);
  for (int i = 0; i < 50; ++i) h.add(6);
  const auto q = [](std::uint32_t k) { return k == 4 ? 0.5 : (k == 6 ? 0.5 : 0.0); };
  REQUIRE(total_variation_vs(h, q, 100) == Approx(0.0).margin(1e-12));
  const auto r = [](std::uint32_t k) { return k == 10 ? 1.0 : 0.0; };
  REQUIRE(total_variation_vs(h, r, 100) == Approx(1.0).margin(1e-12));
}

TEST_CASE("log binning places degrees and normalizes density") {
  DegreeHistogram h;
  for (int i = 0; i < 3; ++i) h.add(1);
  for (int i = 0; i < 7; ++i) h.add(10);
  const auto pts = log_binned(h, 10);
  REQUIRE(pts.size() == 2);
  REQUIRE(pts[0].k_lo == Approx(1.0));
  REQUIRE(pts[0].k_hi == Approx(std::pow(10.0, 0.1)));
  REQUIRE(pts[0].count == 3);
  REQUIRE(pts[0].density == Approx(3.0 / (10.0 * (std::pow(10.0, 0.1) - 1.0))));
  REQUIRE(pts[1].k_lo == Approx(10.0));
  REQUIRE(pts[1].count == 7);
}

TEST_CASE("tail fit recovers an exact cubic decay") {
  DegreeHistogram h;
  for (std::uint32_t k = 10; k <= 100; ++k) {
    const auto c = static_cast<std::uint64_t>(std::llround(1e9 / (double(k) * k * k)));
    for (std::uint64_t i = 0; i < c; ++i) h.add(k);
  }
  const auto pts = log_binned(h, 10);
  const TailFit fit = fit_tail_slope(pts, 10.0, 100.0);
  REQUIRE(fit.points_used >= 8);
  // Geometric bin centers under a convex decay bias the fit slightly steep.
  REQUIRE(fit.slope == Approx(-3.0).margin(0.1));
  REQUIRE_THROWS_AS(fit_tail_slope(pts, 1000.0, 2000.0), std::domain_error);
}

TEST_CASE("curve validation and interpolation") {
  Curve c;
  c.t = {0.0, 1.0, 2.0};
  c.v = {0.0, 2.0, 6.0};
  c.validate();
  REQUIRE(interp_at(c, 0.5) == Approx(1.0));
  REQUIRE(interp_at(c, 1.75) == Approx(5.0));
  REQUIRE(interp_at(c, 0.0) == 0.0);
  Curve bad;
  bad.t = {0.0, 0.0};
  bad.v = {1.0, 1.0};
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}

namespace {

Curve constant_curve(double t0, double t1, double step, double value) {
  Curve c;
  for (double t = t0; t <= t1 + 1e-12; t += step) {
    c.t.push_back(t);
    c.v.push_back(value);
  }
  return c;
}

}  // namespace

TEST_CASE("similarity identities") {
  const Curve one = constant_curve(0, 10, 1.0, 1.0);
  const Curve half = constant_curve(0, 10, 1.0, 0.5);

  REQUIRE(similarity(one, one).rho == 1.0);  // exact, no tolerance
  REQUIRE(similarity(one, half).rho == Approx(0.5));
  // Asymmetric by construction: relative to the smaller reference the same
  // gap weighs double.
  REQUIRE(similarity(half, one).rho == Approx(0.0).margin(1e-12));

  const Curve zero = constant_curve(0, 10, 1.0, 0.0);
  REQUIRE_THROWS_AS(similarity(zero, one), std::domain_error);
}

TEST_CASE("similarity approaches one as the curves merge") {
  const Curve ref = constant_curve(0, 10, 1.0, 1.0);
  double last = -1.0;
  for (double eps : {0.2, 0.1, 0.01, 0.001}) {
    const Curve c = constant_curve(0, 10, 1.0, 1.0 - eps);
    const double rho = similarity(ref, c).rho;
    REQUIRE(rho == Approx(1.0 - eps));
    REQUIRE(rho > last);
    last = rho;
  }
}

TEST_CASE("similarity across grids resamples onto the coarser one") {
  const Curve coarse = constant_curve(0, 10, 1.0, 1.0);
  const Curve fine = constant_curve(0, 10, 0.25, 1.0);
  const auto rep = similarity_resampled(coarse, fine);
  REQUIRE(rep.rho == Approx(1.0));
  REQUIRE(rep.grid_points == 11);

  // Partial overlap still works off the shared window.
  const Curve shifted = constant_curve(5, 20, 1.0, 0.5);
  const auto rep2 = similarity_resampled(coarse, shifted);
  REQUIRE(rep2.rho == Approx(0.5));
}

TEST_CASE("empirical distribution agrees with graph degrees") {
  RngStream rng(4);
  const HybridGraph g = generate_ws(100, 4, 0.2, rng);
  const DegreeHistogram h = empirical_distribution(g, DegreeMode::All);
  REQUIRE(h.n_nodes == 100);
  double mean = 0.0;
  for (const auto& [k, c] : h.counts) mean += double(k) * double(c);
  REQUIRE(mean / 100.0 == Approx(g.average_degree()));
}
