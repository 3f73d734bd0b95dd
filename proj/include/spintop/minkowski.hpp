#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "spintop/errors.hpp"

// Flat-spacetime vector and bivector algebra.
//
// Conventions, fixed once for the whole library:
//   metric signature (+,-,-,-), indices 0..3, component storage contravariant;
//   Levi-Civita symbol normalized as eps^{0123} = +1.

namespace spintop {

template <class S>
struct Vec3T {
  S x{}, y{}, z{};
};

using Vec3 = Vec3T<double>;

template <class S>
struct Vec4T {
  std::array<S, 4> c{};

  S& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  const S& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  Vec3T<S> spatial() const { return {c[1], c[2], c[3]}; }
};

using FourVector = Vec4T<double>;

template <class S>
Vec4T<S> operator+(const Vec4T<S>& a, const Vec4T<S>& b) {
  return {{a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2], a.c[3] + b.c[3]}};
}

template <class S>
Vec4T<S> operator-(const Vec4T<S>& a, const Vec4T<S>& b) {
  return {{a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2], a.c[3] - b.c[3]}};
}

template <class S, class F>
auto operator*(const F& s, const Vec4T<S>& a) -> Vec4T<decltype(s * a.c[0])> {
  return {{s * a.c[0], s * a.c[1], s * a.c[2], s * a.c[3]}};
}

/// Minkowski scalar product a.b = a0 b0 - a1 b1 - a2 b2 - a3 b3.
template <class A, class B>
auto dot(const Vec4T<A>& a, const Vec4T<B>& b) -> decltype(a.c[0] * b.c[0]) {
  return a.c[0] * b.c[0] - a.c[1] * b.c[1] - a.c[2] * b.c[2] - a.c[3] * b.c[3];
}

/// Index lowering against diag(+,-,-,-).
template <class S>
Vec4T<S> lower(const Vec4T<S>& a) {
  return {{a.c[0], -a.c[1], -a.c[2], -a.c[3]}};
}

template <class S>
Vec3T<S> operator+(const Vec3T<S>& a, const Vec3T<S>& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}

template <class S>
Vec3T<S> operator-(const Vec3T<S>& a, const Vec3T<S>& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

template <class S, class F>
auto operator*(const F& s, const Vec3T<S>& a) -> Vec3T<decltype(s * a.x)> {
  return {s * a.x, s * a.y, s * a.z};
}

template <class S>
Vec3T<S> cross(const Vec3T<S>& a, const Vec3T<S>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class S>
S dot3(const Vec3T<S>& a, const Vec3T<S>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

/// Permutation sign of (i,j,k,l) relative to (0,1,2,3); 0 on repeats.
constexpr int levi_civita(int i, int j, int k, int l) {
  if (i == j || i == k || i == l || j == k || j == l || k == l) return 0;
  int sign = 1;
  int p[4] = {i, j, k, l};
  for (int m = 0; m < 3; ++m)
    for (int n = m + 1; n < 4; ++n)
      if (p[m] > p[n]) {
        const int t = p[m];
        p[m] = p[n];
        p[n] = t;
        sign = -sign;
      }
  return sign;
}

/// Antisymmetric rank-2 tensor, contravariant components.
/// Storage order: F^{01}, F^{02}, F^{03}, F^{12}, F^{13}, F^{23}.
struct Bivector {
  std::array<double, 6> f{};

  static constexpr int slot(int mu, int nu) {
    // valid only for mu < nu
    constexpr int table[4][4] = {{-1, 0, 1, 2}, {-1, -1, 3, 4}, {-1, -1, -1, 5}, {-1, -1, -1, -1}};
    return table[mu][nu];
  }

  double comp(int mu, int nu) const {
    if (mu == nu) return 0.0;
    return mu < nu ? f[static_cast<std::size_t>(slot(mu, nu))]
                   : -f[static_cast<std::size_t>(slot(nu, mu))];
  }

  /// F_{mu nu}: one sign flip per time index.
  double comp_lower(int mu, int nu) const {
    double s = 1.0;
    if (mu != 0) s = -s;
    if (nu != 0) s = -s;
    return s * comp(mu, nu);
  }
};

inline Bivector operator-(const Bivector& a) {
  Bivector r;
  for (int i = 0; i < 6; ++i) r.f[i] = -a.f[i];
  return r;
}

inline Bivector operator-(const Bivector& a, const Bivector& b) {
  Bivector r;
  for (int i = 0; i < 6; ++i) r.f[i] = a.f[i] - b.f[i];
  return r;
}

inline Bivector operator+(const Bivector& a, const Bivector& b) {
  Bivector r;
  for (int i = 0; i < 6; ++i) r.f[i] = a.f[i] + b.f[i];
  return r;
}

inline Bivector operator*(double s, const Bivector& a) {
  Bivector r;
  for (int i = 0; i < 6; ++i) r.f[i] = s * a.f[i];
  return r;
}

/// (a ^ b)^{mu nu} = a^mu b^nu - a^nu b^mu.
inline Bivector wedge(const FourVector& a, const FourVector& b) {
  Bivector r;
  r.f[0] = a[0] * b[1] - a[1] * b[0];
  r.f[1] = a[0] * b[2] - a[2] * b[0];
  r.f[2] = a[0] * b[3] - a[3] * b[0];
  r.f[3] = a[1] * b[2] - a[2] * b[1];
  r.f[4] = a[1] * b[3] - a[3] * b[1];
  r.f[5] = a[2] * b[3] - a[3] * b[2];
  return r;
}

/// Hodge dual (*F)^{mu nu} = (1/2) eps^{mu nu a b} F_{a b}; satisfies **F = -F.
inline Bivector bivector_dual(const Bivector& F) {
  Bivector r;
  r.f[0] = F.f[5];   // (*F)^{01} =  F_{23} =  F^{23}
  r.f[1] = -F.f[4];  // (*F)^{02} = -F_{13} = -F^{13}
  r.f[2] = F.f[3];   // (*F)^{03} =  F_{12} =  F^{12}
  r.f[3] = -F.f[2];  // (*F)^{12} =  F_{03} = -F^{03}
  r.f[4] = F.f[1];   // (*F)^{13} = -F_{02} =  F^{02}
  r.f[5] = -F.f[0];  // (*F)^{23} =  F_{01} = -F^{01}
  return r;
}

/// F_{mu nu} F^{mu nu}.
inline double bivector_norm2(const Bivector& F) {
  double s = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) s += F.comp_lower(mu, nu) * F.comp(mu, nu);
  return s;
}

/// eps^{a b mu nu} F_{a b} F_{mu nu}.
inline double bivector_pseudo_invariant(const Bivector& F) {
  double s = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          const int e = levi_civita(a, b, mu, nu);
          if (e != 0) s += e * F.comp_lower(a, b) * F.comp_lower(mu, nu);
        }
  return s;
}

/// (F . w)^mu = F^{mu nu} w_nu.
inline FourVector contract(const Bivector& F, const FourVector& w) {
  const FourVector wl = lower(w);
  FourVector r;
  for (int mu = 0; mu < 4; ++mu) {
    double s = 0.0;
    for (int nu = 0; nu < 4; ++nu) s += F.comp(mu, nu) * wl[nu];
    r[mu] = s;
  }
  return r;
}

/// Component of v orthogonal to p: v - p (p.v)/(p.p).
inline FourVector project_orthogonal(const FourVector& v, const FourVector& p,
                                     double eps = 1e-12) {
  const double pp = dot(p, p);
  if (std::abs(pp) < eps)
    throw DegenerateError("project_orthogonal: reference vector is numerically null");
  return v - (dot(p, v) / pp) * p;
}

inline double det4(const std::array<std::array<double, 4>, 4>& m) {
  auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) -
           m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0]) +
           m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0]);
  };
  return m[0][0] * det3(1, 2, 3, 1, 2, 3) - m[0][1] * det3(1, 2, 3, 0, 2, 3) +
         m[0][2] * det3(1, 2, 3, 0, 1, 3) - m[0][3] * det3(1, 2, 3, 0, 1, 2);
}

/// Gram determinant det[v_i . v_j] for (a, b, k, w).
inline double gram_det4(const FourVector& a, const FourVector& b, const FourVector& k,
                        const FourVector& w) {
  const std::array<FourVector, 4> v{a, b, k, w};
  std::array<std::array<double, 4>, 4> g{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i][j] = dot(v[i], v[j]);
  return det4(g);
}

struct Mat4 {
  std::array<std::array<double, 4>, 4> m{};  // acts on contravariant components

  static Mat4 identity() {
    Mat4 r;
    for (int i = 0; i < 4; ++i) r.m[i][i] = 1.0;
    return r;
  }
};

inline FourVector apply(const Mat4& L, const FourVector& v) {
  FourVector r;
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += L.m[i][j] * v[j];
    r[i] = s;
  }
  return r;
}

inline Mat4 operator*(const Mat4& A, const Mat4& B) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += A.m[i][k] * B.m[k][j];
      r.m[i][j] = s;
    }
  return r;
}

/// Pure boost with velocity beta, |beta| < 1.
inline Mat4 lorentz_boost(const Vec3& beta) {
  const double b2 = dot3(beta, beta);
  if (b2 >= 1.0) throw DomainError("lorentz_boost: |beta| must be < 1");
  Mat4 L = Mat4::identity();
  if (b2 == 0.0) return L;
  const double gamma = 1.0 / std::sqrt(1.0 - b2);
  const double k = (gamma - 1.0) / b2;
  const std::array<double, 3> b{beta.x, beta.y, beta.z};
  L.m[0][0] = gamma;
  for (int i = 0; i < 3; ++i) {
    L.m[0][i + 1] = gamma * b[i];
    L.m[i + 1][0] = gamma * b[i];
    for (int j = 0; j < 3; ++j) L.m[i + 1][j + 1] = (i == j ? 1.0 : 0.0) + k * b[i] * b[j];
  }
  return L;
}

/// Spatial rotation about a unit axis by angle (Rodrigues), embedded in 4x4.
inline Mat4 rotation(const Vec3& axis, double angle) {
  const double n = norm3(axis);
  if (n < 1e-300) throw DomainError("rotation: zero axis");
  const double ux = axis.x / n, uy = axis.y / n, uz = axis.z / n;
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  Mat4 L = Mat4::identity();
  L.m[1][1] = c + ux * ux * t;
  L.m[1][2] = ux * uy * t - uz * s;
  L.m[1][3] = ux * uz * t + uy * s;
  L.m[2][1] = uy * ux * t + uz * s;
  L.m[2][2] = c + uy * uy * t;
  L.m[2][3] = uy * uz * t - ux * s;
  L.m[3][1] = uz * ux * t - uy * s;
  L.m[3][2] = uz * uy * t + ux * s;
  L.m[3][3] = c + uz * uz * t;
  return L;
}

}  // namespace spintop
