#include "spintop/spinor.hpp"

#include <cmath>

#include "spintop/errors.hpp"

namespace spintop {

FourVector k_from_spinor(const Spinor& u) {
  const double n0 = std::norm(u.u0);
  const double n1 = std::norm(u.u1);
  const std::complex<double> m = std::conj(u.u0) * u.u1;
  return {{n0 + n1, 2.0 * m.real(), 2.0 * m.imag(), n0 - n1}};
}

Bivector flag_bivector(const Spinor& u) {
  const std::complex<double> I(0.0, 1.0);
  const std::complex<double> u0sq = u.u0 * u.u0;
  const std::complex<double> u1sq = u.u1 * u.u1;
  // i F^{01} - F^{23} = u0^2 - u1^2
  // i F^{02} - F^{31} = i (u0^2 + u1^2)
  // i F^{03} - F^{12} = -2 u0 u1
  const std::complex<double> G = u0sq - u1sq;
  const std::complex<double> H = I * (u0sq + u1sq);
  const std::complex<double> K = -2.0 * u.u0 * u.u1;
  Bivector F;
  F.f[Bivector::slot(0, 1)] = G.imag();
  F.f[Bivector::slot(2, 3)] = -G.real();
  F.f[Bivector::slot(0, 2)] = H.imag();
  F.f[Bivector::slot(1, 3)] = H.real();  // F^{31} = -Re H
  F.f[Bivector::slot(0, 3)] = K.imag();
  F.f[Bivector::slot(1, 2)] = -K.real();
  return F;
}

NullTriad flag_from_spinor(const Spinor& u, double eps) {
  const FourVector k = k_from_spinor(u);
  if (k[0] < eps) throw DegenerateError("flag_from_spinor: spinor is numerically zero");

  const Bivector F = flag_bivector(u);
  // F = k ^ a with a^0 = 0 gives a^i = F^{0i} / k^0.
  const FourVector a = {{0.0, F.comp(0, 1) / k[0], F.comp(0, 2) / k[0], F.comp(0, 3) / k[0]}};
  const Vec3 n{k[1] / k[0], k[2] / k[0], k[3] / k[0]};
  const Vec3 bs = cross(a.spatial(), n);
  const FourVector b = {{0.0, bs.x, bs.y, bs.z}};
  return {k, a, b};
}

std::pair<double, double> null_bivector_check(const Bivector& F) {
  return {bivector_norm2(F), bivector_pseudo_invariant(F)};
}

double triad_residual(const NullTriad& t) {
  double r = 0.0;
  r = std::max(r, std::abs(dot(t.k, t.k)));
  r = std::max(r, std::abs(dot(t.a, t.k)));
  r = std::max(r, std::abs(dot(t.b, t.k)));
  r = std::max(r, std::abs(dot(t.a, t.b)));
  r = std::max(r, std::abs(dot(t.a, t.a) + 1.0));
  r = std::max(r, std::abs(dot(t.b, t.b) + 1.0));
  return r;
}

NullTriad gauge_transform(const NullTriad& t, double lambda, double mu, double nu) {
  if (!(lambda > 0.0)) throw DomainError("gauge_transform: lambda must be positive");
  return {lambda * t.k, t.a + mu * t.k, t.b + nu * t.k};
}

NullTriad phase_rotate(const NullTriad& t, double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  NullTriad r;
  r.k = t.k;
  r.a = c * t.a + s * t.b;
  r.b = (-s) * t.a + c * t.b;
  return r;
}

namespace {

Vec3 unit_spatial(const FourVector& v) {
  const Vec3 s = v.spatial();
  const double n = norm3(s);
  if (n < 1e-300) throw DegenerateError("riemann_sphere_data: vanishing spatial direction");
  return {s.x / n, s.y / n, s.z / n};
}

}  // namespace

std::vector<SpherePoint> riemann_sphere_data(const NullTriad& t,
                                             const std::vector<double>& lambda_samples) {
  std::vector<SpherePoint> out;
  out.reserve(1 + 2 * lambda_samples.size());
  out.push_back({'k', 0.0, unit_spatial(t.k)});
  for (double lam : lambda_samples) {
    out.push_back({'a', lam, unit_spatial(t.a + lam * t.k)});
    out.push_back({'b', lam, unit_spatial(t.b + lam * t.k)});
  }
  return out;
}

}  // namespace spintop
