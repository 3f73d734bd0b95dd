#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <variant>
#include <vector>

#include "doctest.h"
#include "spintop/dynamics.hpp"
#include "spintop/errors.hpp"
#include "spintop/minkowski.hpp"
#include "spintop/sampling.hpp"

using namespace spintop;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Exact surface point in the center-of-momentum frame.
PhasePoint cm_point(double m, double ell) {
  PhasePoint pt;
  pt.p[0] = m;
  pt.k[0] = 1.0;
  pt.k[3] = 1.0;
  pt.pi[1] = 0.5 * m * ell;
  return pt;
}

Observable comp_x(int mu) {
  return [mu](const PhaseDuals& d) { return d.x[mu]; };
}
Observable comp_p(int mu) {
  return [mu](const PhaseDuals& d) { return d.p[mu]; };
}

const Observable kObsKK = [](const PhaseDuals& d) { return dot(d.k, d.k); };
const Observable kObsKPi = [](const PhaseDuals& d) { return dot(d.k, d.pi); };
const Observable kObsPPi = [](const PhaseDuals& d) { return dot(d.p, d.pi); };

}  // namespace

TEST_CASE("gauge evaluation and scaling") {
  const GaugeSpec c = GaugeConst{0.5};
  CHECK(gauge_value(c, 3.7) == 0.5);
  CHECK(gauge_derivative(c, 3.7) == 0.0);

  const GaugeSpec p = GaugePoly{{1.0, 2.0, 3.0}};
  CHECK(gauge_value(p, 2.0) == doctest::Approx(17.0));
  CHECK(gauge_derivative(p, 2.0) == doctest::Approx(14.0));

  const GaugeSpec s = GaugeSinusoid{2.0, 3.0, 0.4, 0.25};
  CHECK(gauge_value(s, 1.1) == doctest::Approx(2.0 * std::sin(3.0 * 1.1 + 0.4) + 0.25));
  CHECK(gauge_derivative(s, 1.1) == doctest::Approx(6.0 * std::cos(3.0 * 1.1 + 0.4)));

  for (const GaugeSpec& g : {c, p, s})
    for (const double tau : {-1.0, 0.0, 0.8, 2.5}) {
      CHECK(gauge_value(scale_gauge(g, 2.5), tau) ==
            doctest::Approx(2.5 * gauge_value(g, tau)).epsilon(1e-14));
      CHECK(gauge_derivative(scale_gauge(g, 2.5), tau) ==
            doctest::Approx(2.5 * gauge_derivative(g, tau)).epsilon(1e-14));
    }
}

TEST_CASE("constraint residuals sit in a fixed order") {
  const double m = 2.0, ell = 0.5;
  const PhasePoint base = cm_point(m, ell);
  for (double r : constraint_residuals(base, m, ell)) CHECK(std::abs(r) < 1e-15);
  CHECK(surface_violation(base, m, ell) < 1e-15);

  PhasePoint a = base;
  a.p[0] = 2.1;  // moves pp - m^2 and k.p - m only
  const auto ra = constraint_residuals(a, m, ell);
  CHECK(ra[0] == doctest::Approx(0.41).epsilon(1e-12));
  CHECK(ra[5] == doctest::Approx(0.1).epsilon(1e-12));
  for (int i : {1, 2, 3, 4}) CHECK(std::abs(ra[i]) < 1e-15);

  PhasePoint b = base;
  b.k[3] = 0.8;  // moves kk only
  const auto rb = constraint_residuals(b, m, ell);
  CHECK(rb[1] == doctest::Approx(0.36).epsilon(1e-12));
  for (int i : {0, 2, 3, 4, 5}) CHECK(std::abs(rb[i]) < 1e-15);

  PhasePoint c = base;
  c.pi[0] = 0.3;  // moves k.pi, pi.pi and p.pi
  const auto rc = constraint_residuals(c, m, ell);
  CHECK(rc[2] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(rc[3] == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(rc[4] == doctest::Approx(0.6).epsilon(1e-12));
  for (int i : {0, 1, 5}) CHECK(std::abs(rc[i]) < 1e-15);
}

TEST_CASE("projection restores the surface without touching p or x") {
  Rng rng(301);
  const double m = 1.3, ell = 0.7;
  for (int n = 0; n < 50; ++n) {
    PhasePoint pt = cm_point(m, ell);
    for (int mu = 0; mu < 4; ++mu) {
      pt.x[mu] = rng.uniform(-1.0, 1.0);
      pt.k[mu] += rng.uniform(-1e-3, 1e-3);
      pt.pi[mu] += rng.uniform(-1e-3, 1e-3);
    }
    const PhasePoint before = pt;
    project_to_surface(&pt, m, ell);
    CHECK(surface_violation(pt, m, ell) < 1e-12);
    for (int mu = 0; mu < 4; ++mu) {
      CHECK(pt.x[mu] == before.x[mu]);
      CHECK(pt.p[mu] == before.p[mu]);
    }
  }
}

TEST_CASE("random surface points are exact and future pointing") {
  Rng rng(307);
  for (int n = 0; n < 200; ++n) {
    const double m = rng.uniform(0.5, 2.0);
    const double ell = rng.uniform(0.5, 2.0);
    const PhasePoint pt = random_surface_point(rng, m, ell);
    CHECK(surface_violation(pt, m, ell) < 1e-12);
    CHECK(pt.k[0] > 0.0);
    CHECK(pt.p[0] > 0.0);
    CHECK(dot(pt.p, pt.p) > 0.0);
  }
  CHECK_THROWS_AS(random_surface_point(rng, -1.0, 1.0), DomainError);
}

TEST_CASE("equations of motion at the worked point") {
  const PhasePoint pt = cm_point(1.0, 1.0);
  const PhaseDerivs d = hamiltonian_rhs(pt, 0.5, 0.5, 1.0, 1.0);
  CHECK(d.xdot[0] == 0.75);
  CHECK(d.xdot[1] == 0.0);
  CHECK(d.xdot[2] == 0.0);
  CHECK(d.xdot[3] == -0.25);
  for (int mu = 0; mu < 4; ++mu) CHECK(d.pdot[mu] == 0.0);
  CHECK(d.kdot[0] == 0.0);
  CHECK(d.kdot[1] == 0.5);
  CHECK(d.kdot[2] == 0.0);
  CHECK(d.kdot[3] == 0.0);
  CHECK(d.pidot[0] == 0.0);
  CHECK(d.pidot[1] == 0.0);
  CHECK(d.pidot[2] == 0.0);
  CHECK(d.pidot[3] == -0.25);

  PhasePoint off = pt;
  off.k[1] += 1e-3;
  CHECK_THROWS_AS(hamiltonian_rhs(off, 0.5, 0.5, 1.0, 1.0), ConsistencyError);
}

TEST_CASE("integrated worked example: clocks, phase identity and period") {
  const PhasePoint pt0 = cm_point(1.0, 1.0);
  const GaugeFunctions g{GaugeConst{0.5}, GaugeConst{0.5}};
  const Trajectory tr = integrate(pt0, g, 1.0, 1.0, Span{0.0, 4.0 * kPi});
  REQUIRE(tr.samples.size() == 201);
  CHECK(tr.samples.front().tau == 0.0);
  CHECK(tr.samples.back().tau == doctest::Approx(4.0 * kPi).epsilon(1e-15));
  CHECK(tr.n_steps > 0);
  CHECK(tr.max_residual < 1e-12);

  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const Sample& s = tr.samples[i];
    const double expect_tau = 4.0 * kPi * static_cast<double>(i) / 200.0;
    CHECK(s.tau == doctest::Approx(expect_tau).epsilon(1e-12));
    // p is a strict constant of motion
    CHECK(s.pt.p[0] == 1.0);
    CHECK(s.pt.p[1] == 0.0);
    CHECK(s.pt.p[2] == 0.0);
    CHECK(s.pt.p[3] == 0.0);
    const double tol = 1e-9 * (1.0 + s.tau);
    CHECK(std::abs(s.t - 0.75 * s.tau) < tol);
    CHECK(std::abs(s.phi + 0.5 * s.tau) < tol);
    CHECK(std::abs(s.phase - 0.5 * s.tau) < tol);
    // phase = m t + (1/2) m l phi as an identity among the quadratures
    CHECK(std::abs(s.phase - (s.t + 0.5 * s.phi)) < 1e-9);
  }
  // k and pi close after one period
  const PhasePoint& end = tr.samples.back().pt;
  for (int mu = 0; mu < 4; ++mu) {
    CHECK(std::abs(end.k[mu] - pt0.k[mu]) < 1e-8);
    CHECK(std::abs(end.pi[mu] - pt0.pi[mu]) < 1e-8);
  }

  const ObservableSeries obs = observables(tr, 1.0, 1.0);
  REQUIRE(obs.rows.size() == tr.samples.size());
  CHECK_FALSE(obs.clock_warning);
  const double psi_expect = std::atanh(1.0 / 3.0);
  for (const ObsSample& row : obs.rows) {
    CHECK(std::abs(row.Psi - psi_expect) < 1e-9);
    CHECK(row.has_rc);
    CHECK(std::abs(row.R_c - 0.5) < 1e-9);
    CHECK(std::abs(row.axis_distance - 0.5) < 1e-9);
  }
}

TEST_CASE("integration is deterministic") {
  Rng rng(311);
  const PhasePoint pt0 = random_surface_point(rng, 1.1, 0.9);
  const GaugeFunctions g{GaugeConst{0.4}, GaugeSinusoid{0.2, 1.0, 0.3, 0.5}};
  const Trajectory a = integrate(pt0, g, 1.1, 0.9, Span{0.0, 5.0});
  const Trajectory b = integrate(pt0, g, 1.1, 0.9, Span{0.0, 5.0});
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.n_steps == b.n_steps);
  CHECK(a.n_rejected == b.n_rejected);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].tau == b.samples[i].tau);
    CHECK(a.samples[i].t == b.samples[i].t);
    CHECK(a.samples[i].phi == b.samples[i].phi);
    CHECK(a.samples[i].phase == b.samples[i].phase);
    for (int mu = 0; mu < 4; ++mu) {
      CHECK(a.samples[i].pt.x[mu] == b.samples[i].pt.x[mu]);
      CHECK(a.samples[i].pt.p[mu] == b.samples[i].pt.p[mu]);
      CHECK(a.samples[i].pt.k[mu] == b.samples[i].pt.k[mu]);
      CHECK(a.samples[i].pt.pi[mu] == b.samples[i].pt.pi[mu]);
    }
  }
}

TEST_CASE("integration input validation") {
  const PhasePoint pt0 = cm_point(1.0, 1.0);
  const GaugeFunctions g{GaugeConst{0.5}, GaugeConst{0.5}};
  CHECK_THROWS_AS(integrate(pt0, g, 1.0, 1.0, Span{1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(integrate(pt0, g, 1.0, 1.0, Span{0.0, 1.0}, Tolerances{}, 0), ConfigError);
  CHECK_THROWS_AS(integrate(pt0, g, 1.0, 1.0, Span{0.0, 1.0}, Tolerances{-1e-10, 1e-12}),
                  ConfigError);
  CHECK_THROWS_AS(integrate(pt0, g, -1.0, 1.0, Span{0.0, 1.0}), ConfigError);
  PhasePoint off = pt0;
  off.pi[2] += 1e-3;
  CHECK_THROWS_AS(integrate(off, g, 1.0, 1.0, Span{0.0, 1.0}), ConsistencyError);
  // an unreachable tolerance exhausts the step control
  CHECK_THROWS_AS(integrate(pt0, g, 1.0, 1.0, Span{0.0, 1.0}, Tolerances{1e-30, 1e-30}),
                  NumericsError);
}

TEST_CASE("reparametrized gauges trace the same worldline") {
  Rng rng(313);
  const PhasePoint pt0 = random_surface_point(rng, 1.0, 1.0);
  const Span span{0.0, 4.0 * kPi};
  const GaugeFunctions base{GaugeConst{0.5}, GaugeConst{0.5}};
  // both gauges scaled by the same positive function of tau
  const GaugeFunctions rep{GaugeSinusoid{0.15, 1.0, 0.0, 0.5},
                           GaugeSinusoid{0.15, 1.0, 0.0, 0.5}};
  const GaugeFunctions other{GaugeConst{0.5}, GaugeConst{0.25}};
  const Trajectory ta = integrate(pt0, base, 1.0, 1.0, span, Tolerances{}, 2000);
  const Trajectory tb = integrate(pt0, rep, 1.0, 1.0, span, Tolerances{}, 2000);
  const Trajectory tc = integrate(pt0, other, 1.0, 1.0, span, Tolerances{}, 2000);
  CHECK(worldline_separation(ta, tb, 1.0, 1.0) < 5e-6);
  CHECK(worldline_separation(ta, tc, 1.0, 1.0) > 1e-3);
}

TEST_CASE("separation rejects unusable clock series") {
  Trajectory a, b;
  auto push = [](Trajectory* tr, double t, double x1) {
    Sample s;
    s.tau = t;
    s.t = t;
    s.pt.p[0] = 1.0;
    s.pt.x[1] = x1;
    tr->samples.push_back(s);
  };
  push(&a, 0.0, 0.0);
  CHECK_THROWS_AS(worldline_separation(a, a, 1.0, 1.0), ConfigError);
  push(&a, 1.0, 0.1);
  push(&b, 2.0, 0.0);
  push(&b, 3.0, 0.2);
  // spans [0,1] and [2,3] share no clock interval
  CHECK_THROWS_AS(worldline_separation(a, b, 1.0, 1.0), ConsistencyError);
  Trajectory z = a;
  push(&z, 0.5, 0.3);  // clock folds back
  push(&z, 2.0, 0.4);
  CHECK_THROWS_AS(worldline_separation(z, z, 1.0, 1.0), ConsistencyError);
}

TEST_CASE("tube members split by gauge yet hug the same axis") {
  Rng rng(317);
  const PhasePoint pt0 = random_surface_point(rng, 1.0, 1.0);
  const Span span{0.0, 4.0 * kPi};
  const std::vector<GaugeFunctions> gauges = {{GaugeConst{0.5}, GaugeConst{0.5}},
                                              {GaugeConst{0.5}, GaugeConst{0.25}}};
  const TubeResult tube = tube_sample(pt0, gauges, 1.0, 1.0, span);
  REQUIRE(tube.members.size() == 2);
  CHECK(tube.members[0].gauge.c_phi == GaugeSpec{GaugeConst{0.5}});
  CHECK(tube.members[1].gauge.c_phi == GaugeSpec{GaugeConst{0.25}});
  CHECK(tube.report.distinct_worldlines);
  CHECK(tube.report.separation_threshold == doctest::Approx(1.01e-7));
  CHECK(tube.report.max_separation > tube.report.separation_threshold);
  CHECK(tube.report.min_separation > tube.report.separation_threshold);
  // every member stays at distance l/2 from the common axis
  CHECK(tube.report.axis_distance_max_dev < 1e-8);
}

TEST_CASE("identical gauges collapse the tube") {
  Rng rng(331);
  const PhasePoint pt0 = random_surface_point(rng, 1.2, 0.8);
  const std::vector<GaugeFunctions> gauges = {{GaugeConst{0.3}, GaugeConst{0.5}},
                                              {GaugeConst{0.3}, GaugeConst{0.5}}};
  const TubeResult tube = tube_sample(pt0, gauges, 1.2, 0.8, Span{0.0, 6.0});
  CHECK_FALSE(tube.report.distinct_worldlines);
  CHECK(tube.report.max_separation == 0.0);
}

TEST_CASE("tube input validation") {
  const PhasePoint pt0 = cm_point(1.0, 1.0);
  CHECK_THROWS_AS(tube_sample(pt0, {}, 1.0, 1.0, Span{0.0, 1.0}), ConfigError);
  const std::vector<GaugeFunctions> mixed = {{GaugeConst{0.5}, GaugeConst{0.5}},
                                             {GaugeConst{0.4}, GaugeConst{0.5}}};
  CHECK_THROWS_AS(tube_sample(pt0, mixed, 1.0, 1.0, Span{0.0, 1.0}), ConfigError);
}

TEST_CASE("light-like preset freezes the laboratory clock") {
  const PhasePoint pt0 = cm_point(1.0, 1.0);
  const ZitterResult zr =
      zitter_preset(pt0, 1.0, 1.0, ZitterPreset::A, GaugeConst{0.5}, Span{0.0, 5.0});
  CHECK(zr.max_abs_xdot2 < 1e-10);
  CHECK(zr.clock_reversal);
  const ObservableSeries obs = observables(zr.traj, 1.0, 1.0);
  CHECK(obs.clock_warning);
  for (const ObsSample& row : obs.rows) CHECK(std::isinf(row.Psi));
}

TEST_CASE("balanced preset keeps a timelike worldline") {
  const PhasePoint pt0 = cm_point(1.0, 1.0);
  const ZitterResult zr =
      zitter_preset(pt0, 1.0, 1.0, ZitterPreset::B, GaugeConst{0.5}, Span{0.0, 5.0});
  CHECK_FALSE(zr.clock_reversal);
  REQUIRE(!zr.xdot2.empty());
  for (double v : zr.xdot2) CHECK(v == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(zr.max_abs_xdot2 == doctest::Approx(0.5).epsilon(1e-8));
  // preset B pins c_t = m^2 l^2 c_phi
  CHECK(zr.traj.gauge.c_t == GaugeSpec{GaugeConst{0.5}});
}

TEST_CASE("canonical brackets of the coordinates") {
  Rng rng(337);
  PhasePoint pt;
  for (int mu = 0; mu < 4; ++mu) {
    pt.x[mu] = rng.uniform(-1.0, 1.0);
    pt.p[mu] = rng.uniform(-1.0, 1.0);
    pt.k[mu] = rng.uniform(-1.0, 1.0);
    pt.pi[mu] = rng.uniform(-1.0, 1.0);
  }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const double expect = (mu == nu) ? (mu == 0 ? 1.0 : -1.0) : 0.0;
      CHECK(poisson_bracket(comp_x(mu), comp_p(nu), pt) == expect);
      CHECK(poisson_bracket(comp_p(nu), comp_x(mu), pt) == -expect);
    }
}

TEST_CASE("the null pair closes on itself everywhere in phase space") {
  Rng rng(347);
  for (int n = 0; n < 100; ++n) {
    PhasePoint pt;
    for (int mu = 0; mu < 4; ++mu) {
      pt.x[mu] = rng.uniform(-2.0, 2.0);
      pt.p[mu] = rng.uniform(-2.0, 2.0);
      pt.k[mu] = rng.uniform(-2.0, 2.0);
      pt.pi[mu] = rng.uniform(-2.0, 2.0);
    }
    const double kk = dot(pt.k, pt.k);
    const double pb = poisson_bracket(kObsKK, kObsKPi, pt);
    CHECK(pb == doctest::Approx(2.0 * kk).epsilon(1e-12).scale(1.0 + std::abs(kk)));
  }
}

TEST_CASE("dirac bracket generates the constrained flow") {
  Rng rng(349);
  const double m = 1.0, ell = 1.0, c_t = 0.4, c_phi = 0.35;
  const PhasePoint pt = random_surface_point(rng, m, ell);
  const Observable ham = [=](const PhaseDuals& d) {
    return c_t * (dot(d.p, d.p) - m * m) +
           c_phi * (m * m * dot(d.pi, d.pi) - 0.5 * ell * ell * m * m * m * dot(d.k, d.p) +
                    0.25 * ell * ell * m * m * m * m * dot(d.k, d.k));
  };
  const PhaseDerivs rhs = hamiltonian_rhs(pt, c_t, c_phi, m, ell);
  auto comp = [](auto pick) {
    return [pick](const PhaseDuals& d) { return pick(d); };
  };
  for (int mu = 0; mu < 4; ++mu) {
    const double dx = dirac_bracket(comp([mu](const PhaseDuals& d) { return d.x[mu]; }), ham, pt, m);
    const double dp = dirac_bracket(comp([mu](const PhaseDuals& d) { return d.p[mu]; }), ham, pt, m);
    const double dk = dirac_bracket(comp([mu](const PhaseDuals& d) { return d.k[mu]; }), ham, pt, m);
    const double dpi =
        dirac_bracket(comp([mu](const PhaseDuals& d) { return d.pi[mu]; }), ham, pt, m);
    CHECK(dx == doctest::Approx(rhs.xdot[mu]).epsilon(1e-12).scale(1.0 + std::abs(rhs.xdot[mu])));
    CHECK(dp == doctest::Approx(rhs.pdot[mu]).epsilon(1e-12).scale(1.0));
    CHECK(dk == doctest::Approx(rhs.kdot[mu]).epsilon(1e-12).scale(1.0 + std::abs(rhs.kdot[mu])));
    CHECK(dpi ==
          doctest::Approx(rhs.pidot[mu]).epsilon(1e-12).scale(1.0 + std::abs(rhs.pidot[mu])));
  }
}

TEST_CASE("dirac bracket annihilates the second-class functions") {
  Rng rng(353);
  const double m = 1.4;
  const PhasePoint pt = random_surface_point(rng, m, 0.8);
  const Observable kp_m = [=](const PhaseDuals& d) { return dot(d.k, d.p) - m; };
  const Observable probe = [](const PhaseDuals& d) {
    return dot(d.x, d.p) + dot(d.k, d.pi) * dot(d.p, d.pi) + d.x[2] * d.k[0];
  };
  for (const Observable& chi : {kObsKK, kObsKPi, kObsPPi, kp_m}) {
    CHECK(std::abs(dirac_bracket(chi, probe, pt, m)) < 1e-12);
    CHECK(std::abs(dirac_bracket(probe, chi, pt, m)) < 1e-12);
  }
  PhasePoint off = pt;
  off.k[2] += 1e-3;
  CHECK_THROWS_AS(dirac_bracket(kObsKK, probe, off, m), ConsistencyError);
}

TEST_CASE("defining conditions are first class in the open algebra") {
  for (int nv : {1, 2}) {
    const FirstClassReport rep = poisson_first_class_check(nv, 404);
    CHECK(rep.max_psi1 == 0.0);
    CHECK(rep.max_psi2 < 1e-12);
  }
  CHECK_THROWS_AS(poisson_first_class_check(3, 404), ConfigError);
}
