#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "spintop/errors.hpp"
#include "spintop/sampling.hpp"
#include "spintop/spinor.hpp"

using namespace spintop;

namespace {

Spinor random_spinor(Rng& rng) {
  return Spinor{{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)},
                {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)}};
}

double max_comp_diff(const FourVector& a, const FourVector& b) {
  double r = 0.0;
  for (int i = 0; i < 4; ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace

TEST_CASE("the basis spinor maps to the forward null ray along z") {
  const Spinor u{{1.0, 0.0}, {0.0, 0.0}};
  const FourVector k = k_from_spinor(u);
  CHECK(k[0] == doctest::Approx(1.0));
  CHECK(k[1] == doctest::Approx(0.0));
  CHECK(k[2] == doctest::Approx(0.0));
  CHECK(k[3] == doctest::Approx(1.0));
  const NullTriad t = flag_from_spinor(u);
  CHECK(t.a[0] == 0.0);
  CHECK(t.a[2] == doctest::Approx(1.0));
  CHECK(t.b[1] == doctest::Approx(1.0));
  CHECK(triad_residual(t) < 1e-14);
}

TEST_CASE("bilinear components: k is null and future pointing") {
  Rng rng(101);
  for (int n = 0; n < 1000; ++n) {
    const Spinor u = random_spinor(rng);
    const double n2 = std::norm(u.u0) + std::norm(u.u1);
    if (n2 < 1e-8) continue;
    const FourVector k = k_from_spinor(u);
    CHECK(k[0] == doctest::Approx(n2));
    CHECK(std::abs(dot(k, k)) < 1e-12 * k[0] * k[0]);
    CHECK(k[0] > 0.0);
  }
}

TEST_CASE("flag bivector is null with principal direction k") {
  Rng rng(103);
  for (int n = 0; n < 200; ++n) {
    const Spinor u = random_spinor(rng);
    if (std::norm(u.u0) + std::norm(u.u1) < 1e-4) continue;
    const Bivector F = flag_bivector(u);
    const auto [n2, pseudo] = null_bivector_check(F);
    double scale = 0.0;
    for (double f : F.f) scale = std::max(scale, std::abs(f));
    scale = std::max(scale * scale, 1e-30);
    CHECK(std::abs(n2) < 1e-10 * scale);
    CHECK(std::abs(pseudo) < 1e-10 * scale);
    const FourVector k = k_from_spinor(u);
    const FourVector r = contract(F, k);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(r[i]) < 1e-10 * scale);
  }
}

TEST_CASE("triad constraints hold for random spinors") {
  Rng rng(107);
  for (int n = 0; n < 1000; ++n) {
    const Spinor u = random_spinor(rng);
    if (std::norm(u.u0) + std::norm(u.u1) < 1e-4) continue;
    const NullTriad t = flag_from_spinor(u);
    CHECK(triad_residual(t) < 1e-10);
    CHECK(t.k[0] > 0.0);
    CHECK(t.a[0] == 0.0);
    CHECK(t.b[0] == 0.0);
  }
}

TEST_CASE("u and -u give the identical flag") {
  Rng rng(109);
  for (int n = 0; n < 200; ++n) {
    const Spinor u = random_spinor(rng);
    if (std::norm(u.u0) + std::norm(u.u1) < 1e-4) continue;
    const Spinor mu{-u.u0, -u.u1};
    const NullTriad t1 = flag_from_spinor(u);
    const NullTriad t2 = flag_from_spinor(mu);
    // bilinears are exactly even in u, so this is equality, not approximation
    CHECK(max_comp_diff(t1.k, t2.k) == 0.0);
    CHECK(max_comp_diff(t1.a, t2.a) == 0.0);
    CHECK(max_comp_diff(t1.b, t2.b) == 0.0);
  }
}

TEST_CASE("spinor phase chi rotates the flag plane by 2 chi") {
  Rng rng(113);
  for (int n = 0; n < 200; ++n) {
    const Spinor u = random_spinor(rng);
    if (std::norm(u.u0) + std::norm(u.u1) < 1e-4) continue;
    const double chi = rng.uniform(0.0, 6.283185307179586);
    const std::complex<double> ph = std::polar(1.0, chi);
    const Spinor ru{ph * u.u0, ph * u.u1};
    const NullTriad base = flag_from_spinor(u);
    const NullTriad got = flag_from_spinor(ru);
    const NullTriad want = phase_rotate(base, 2.0 * chi);
    CHECK(max_comp_diff(got.k, want.k) < 1e-10);
    CHECK(max_comp_diff(got.a, want.a) < 1e-10);
    CHECK(max_comp_diff(got.b, want.b) < 1e-10);
  }
}

TEST_CASE("triad gauge moves leave the constraints intact") {
  Rng rng(127);
  for (int n = 0; n < 100; ++n) {
    const Spinor u = random_spinor(rng);
    if (std::norm(u.u0) + std::norm(u.u1) < 1e-4) continue;
    const NullTriad t = flag_from_spinor(u);
    const NullTriad g = gauge_transform(t, rng.uniform(0.1, 3.0), rng.uniform(-1.0, 1.0),
                                        rng.uniform(-1.0, 1.0));
    CHECK(triad_residual(g) < 1e-9);
    const NullTriad r = phase_rotate(t, rng.uniform(0.0, 6.28));
    CHECK(triad_residual(r) < 1e-9);
  }
  const NullTriad t = flag_from_spinor(Spinor{{1.0, 0.0}, {0.5, 0.2}});
  CHECK_THROWS_AS(gauge_transform(t, -1.0, 0.0, 0.0), DomainError);
}

TEST_CASE("degenerate spinor is rejected") {
  CHECK_THROWS_AS(flag_from_spinor(Spinor{{0.0, 0.0}, {0.0, 0.0}}), DegenerateError);
}

TEST_CASE("sphere images: k sits at its spatial direction, families pass through it") {
  const Spinor u{{1.0, 0.0}, {0.0, 0.0}};
  const NullTriad t = flag_from_spinor(u);
  const std::vector<double> lams = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const auto pts = riemann_sphere_data(t, lams);
  bool saw_k = false;
  for (const SpherePoint& p : pts) {
    CHECK(norm3(p.dir) == doctest::Approx(1.0));
    if (p.family == 'k') {
      saw_k = true;
      CHECK(p.dir.z == doctest::Approx(1.0));
    }
  }
  CHECK(saw_k);
}
