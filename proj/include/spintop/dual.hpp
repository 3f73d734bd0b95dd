#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>

namespace spintop {

/// Forward-mode dual number carrying N derivative directions.
///
/// Nesting Dual<Dual<double, 2>, 2> yields exact second-order jets; every
/// derivative produced this way is exact up to rounding, never truncated.
template <class T, int N>
struct Dual {
  T v{};
  std::array<T, N> d{};

  Dual() = default;
  Dual(double s) : v(s) {}  // NOLINT: implicit scalar lift, zero gradient

  template <class U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
  Dual(T s) : v(std::move(s)) {}  // NOLINT: lift of the inner scalar

  static Dual seeded(T value, int dir) {
    Dual r(std::move(value));
    r.d[static_cast<std::size_t>(dir)] = T(1.0);
    return r;
  }

  Dual operator-() const {
    Dual r;
    r.v = -v;
    for (int i = 0; i < N; ++i) r.d[i] = -d[i];
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }

  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v * b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }

  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v / b.v;
    const T inv2 = T(1.0) / (b.v * b.v);
    for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * inv2;
    return r;
  }
};

template <class T, int N>
Dual<T, N> sqrt(const Dual<T, N>& a) {
  using std::sqrt;
  Dual<T, N> r;
  r.v = sqrt(a.v);
  const T half_inv = T(0.5) / r.v;
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * half_inv;
  return r;
}

template <class T, int N>
Dual<T, N> sin(const Dual<T, N>& a) {
  using std::cos;
  using std::sin;
  Dual<T, N> r;
  r.v = sin(a.v);
  const T c = cos(a.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * c;
  return r;
}

template <class T, int N>
Dual<T, N> cos(const Dual<T, N>& a) {
  using std::cos;
  using std::sin;
  Dual<T, N> r;
  r.v = cos(a.v);
  const T ms = -sin(a.v);
  for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * ms;
  return r;
}

/// Integer power by repeated multiplication; n >= 0.
template <class T, int N>
Dual<T, N> powi(Dual<T, N> base, int n) {
  Dual<T, N> r(1.0);
  while (n > 0) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

/// Plain-double fallbacks so numeric kernels can be written once and
/// instantiated with double or Dual scalars alike.
inline double powi(double base, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

inline double value_of(double a) { return a; }

template <class T, int N>
double value_of(const Dual<T, N>& a) {
  return value_of(a.v);
}

}  // namespace spintop
