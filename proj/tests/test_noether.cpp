#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <variant>
#include <vector>

#include "doctest.h"
#include "spintop/errors.hpp"
#include "spintop/model.hpp"
#include "spintop/noether.hpp"
#include "spintop/sampling.hpp"

using namespace spintop;

namespace {

ModelU quad_model() {
  return ModelU(GenericPoly{{{1.0, 0.0, 0.5}, {0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}}});
}

struct DomainPoint {
  double x, y;
  EulerGaugeState state;
};

DomainPoint sample_point(Rng& rng, const ModelU& m, double ell) {
  const ModelU::Box box = m.sample_box();
  for (;;) {
    double x, y;
    if (box.transformed) {
      const double xi = rng.uniform(box.lo0, box.hi0);
      const double eta = rng.uniform(box.lo1, box.hi1);
      const auto& l = std::get<FundamentalLegendre>(m.spec());
      const OmegaPoint op = legendre_omega(xi, eta, l.epsilon, l.sign);
      if (op.wxi <= 0.05) continue;
      x = op.wxi;
      y = op.weta;
    } else {
      x = rng.uniform(std::max(box.lo0, 0.1), box.hi0);
      y = rng.uniform(box.lo1, box.hi1);
    }
    if (!m.in_domain(x, y)) continue;
    return {x, y, state_with_invariants(rng, y, x * x, ell)};
  }
}

}  // namespace

TEST_CASE("momenta of the constant model: free particle") {
  const ModelU one(GenericPoly{{{1.0}}});
  Rng rng(211);
  for (int n = 0; n < 20; ++n) {
    const EulerGaugeState s = state_with_invariants(rng, 0.3, 0.9, 1.0);
    const CovariantKinematics kin = euler_chart(s);
    const double m = rng.uniform(0.5, 2.0);
    const CanonicalSet cs = canonical_momenta(one, m, 1.0, kin);
    const double i0 = dot(kin.xdot, kin.xdot);
    for (int mu = 0; mu < 4; ++mu) {
      CHECK(cs.p[mu] == doctest::Approx(m * kin.xdot[mu] / std::sqrt(i0)).epsilon(1e-12));
      for (const CanonicalPair& pr : cs.pairs) CHECK(std::abs(pr.pi[mu]) < 1e-12 * m);
    }
  }
}

TEST_CASE("both Casimir routes agree on every family") {
  Rng rng(223);
  const double m = 1.3, ell = 0.8;
  const std::vector<ModelU> models = {quad_model(), ModelU(Rotator{1}),
                                      ModelU(FundamentalDevelopable{0.5, 1}),
                                      ModelU(FundamentalLegendre{1, 1})};
  for (const ModelU& mU : models) {
    for (int n = 0; n < 25; ++n) {
      const DomainPoint pt = sample_point(rng, mU, ell);
      const Jet2 j = mU.eval(pt.x, pt.y);
      const CanonicalSet cs = canonical_momenta(mU, m, ell, euler_chart(pt.state));
      const double cm = casimir_mass(j, pt.x, pt.y);
      const double cj = casimir_spin(j, pt.x, pt.y);
      CHECK(dot(cs.p, cs.p) / (m * m) == doctest::Approx(cm).epsilon(1e-10));
      const double ww = casimir_spin_detsum(cs);
      CHECK(ww == doctest::Approx(-0.25 * m * m * m * m * ell * ell * cj)
                      .epsilon(1e-10)
                      .scale(m * m * m * m * ell * ell));
      if (mU.is_fundamental()) {
        CHECK(cm == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(cj == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("determinant sum equals W.W from the spin tensor") {
  Rng rng(227);
  const ModelU m = quad_model();
  for (int n = 0; n < 25; ++n) {
    const DomainPoint pt = sample_point(rng, m, 1.1);
    const CanonicalSet cs = canonical_momenta(m, 1.0, 1.1, euler_chart(pt.state));
    const SpinData sd = spin_tensor(cs);
    const double ww = dot(sd.W, sd.W);
    CHECK(casimir_spin_detsum(cs) ==
          doctest::Approx(ww).epsilon(1e-10).scale(1.0 + std::abs(ww)));
    // W and both slots of J are orthogonal to p
    const double pscale = 1.0 + std::abs(dot(cs.p, cs.p));
    CHECK(std::abs(dot(sd.W, cs.p)) < 1e-10 * pscale);
    const FourVector jp = contract(sd.J, cs.p);
    for (int mu = 0; mu < 4; ++mu) CHECK(std::abs(jp[mu]) < 1e-10 * pscale);
  }
}

TEST_CASE("Pauli-Lubanski vector of a pure rotation block") {
  FourVector p{};
  p[0] = 1.0;
  FourVector e1{}, e2{};
  e1[1] = 1.0;
  e2[2] = 1.0;
  const Bivector M = wedge(e1, e2);
  const FourVector W = pauli_lubanski(M, p);
  CHECK(W[0] == doctest::Approx(0.0));
  CHECK(W[1] == doctest::Approx(0.0));
  CHECK(W[2] == doctest::Approx(0.0));
  CHECK(W[3] == doctest::Approx(1.0));
  // boost blocks aligned with p carry no angular content
  const FourVector Wb = pauli_lubanski(wedge(p, e1), p);
  for (int mu = 0; mu < 4; ++mu) CHECK(std::abs(Wb[mu]) < 1e-15);
}

TEST_CASE("spin tensor needs a massive momentum") {
  CanonicalSet cs;
  cs.p[0] = 1.0;
  cs.p[3] = 1.0;  // null
  FourVector q{}, pi{};
  q[1] = 1.0;
  pi[2] = 0.3;
  cs.pairs = {{q, pi}};
  CHECK_THROWS_AS(spin_tensor(cs), DegenerateError);
}

TEST_CASE("momenta validate their kinematic input") {
  Rng rng(229);
  const EulerGaugeState s = state_with_invariants(rng, 0.2, 1.0, 1.0);
  CovariantKinematics kin = euler_chart(s);
  CHECK_THROWS_AS(canonical_momenta(quad_model(), -1.0, 1.0, kin), DomainError);
  kin.rates.b_dot[2] += 0.05;
  CHECK_THROWS_AS(canonical_momenta(quad_model(), 1.0, 1.0, kin), ConsistencyError);
}

TEST_CASE("degree-of-freedom bookkeeping") {
  const DofCount a = dof_count(1, 2, 0);
  CHECK(a.lagrangian == 5);
  CHECK(a.hamiltonian == 4);
  CHECK(a.discrepancy == 1);
  const DofCount b = dof_count(1, 2, 0, true);
  CHECK(b.lagrangian == 6);
  CHECK(b.hamiltonian == 6);
  CHECK(b.discrepancy == 0);
  const DofCount c = dof_count(2, 3, 2);
  CHECK(c.lagrangian == 7);
  CHECK(c.hamiltonian == 6);
  CHECK(c.discrepancy == 1);
}

TEST_CASE("the bookkeeping discrepancy is structural, not model specific") {
  for (int nv = 1; nv <= 5; ++nv)
    for (int ni = 1; ni <= 6; ++ni)
      for (int nii = 0; nii <= 4; nii += 2) {
        CHECK(dof_count(nv, ni, nii).discrepancy == 1);
        CHECK(dof_count(nv, ni, nii, true).discrepancy == 0);
      }
}

TEST_CASE("bookkeeping input validation") {
  CHECK_THROWS_AS(dof_count(1, 2, 3), ConfigError);
  CHECK_THROWS_AS(dof_count(-1, 2, 0), ConfigError);
  CHECK_THROWS_AS(dof_count(1, -2, 0), ConfigError);
  CHECK_THROWS_AS(dof_count(1, 0, 0, true), ConfigError);
}
