#include "spintop/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "spintop/errors.hpp"

namespace spintop {
namespace {

using D1 = Dual<double, 2>;
using D2 = Dual<D1, 2>;
using D3 = Dual<double, 3>;

// Nested seed: inner gradient and outer direction both set, so one evaluation
// carries the full second-order jet.
D2 seed2(double v, int dir) {
  D2 r(D1::seeded(v, dir));
  r.d[static_cast<std::size_t>(dir)] = D1(1.0);
  return r;
}

Jet2 jet_of(const D2& f) {
  return {f.v.v,
          f.v.d[0],
          f.v.d[1],
          f.d[0].d[0],
          0.5 * (f.d[0].d[1] + f.d[1].d[0]),
          f.d[1].d[1]};
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_pm(int v, const char* what) {
  if (v != 1 && v != -1) throw ConfigError(std::string(what) + " must be +1 or -1");
}

template <class S>
S poly_expr(const std::vector<std::vector<double>>& c, const S& x, const S& y) {
  S acc(0.0);
  for (std::size_t i = c.size(); i-- > 0;) {
    S row(0.0);
    for (std::size_t j = c[i].size(); j-- > 0;) row = row * y + S(c[i][j]);
    acc = acc * x + row;
  }
  return acc;
}

double developable_g(double kappa, double x) {
  const double sk = std::sin(kappa), ck = std::cos(kappa);
  return 1.0 - x * x * sk * sk * 0.25 + x * ck;
}

template <class S>
S developable_expr(double kappa, int sgn, const S& x, const S& y) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const double sk = sin(kappa), ck = cos(kappa);
  const S g = S(1.0) - x * x * (sk * sk * 0.25) + x * ck;
  return static_cast<double>(sgn) * sqrt(g) + y * (0.5 * sk);
}

template <class S>
S rotator_expr(int sgn, const S& x) {
  using std::sqrt;
  return static_cast<double>(sgn) * sqrt(S(1.0) + x);
}

template <class S>
S omega_expr(int eps, int sgn, const S& xi, const S& eta) {
  using std::sqrt;
  const S r = sqrt(xi * xi + eta * eta);
  const S s = sqrt(S(1.0) - S(4.0) * (eta * eta));
  return static_cast<double>(sgn) *
         ((r + static_cast<double>(eps) * (xi * s)) / (S(2.0) * (eta * eta)));
}

// ---- Legendre-branch inversion ---------------------------------------------

constexpr double kXiBoxLo = -0.75, kXiBoxHi = 0.75;
constexpr double kEtaBoxLo = 0.15, kEtaBoxHi = 0.45;
constexpr double kBoxSlack = 1e-6;

struct SeedPoint {
  double xi, eta, wxi, weta;
};

const std::vector<SeedPoint>& legendre_seeds(int eps, int sgn) {
  static const std::array<std::vector<SeedPoint>, 4> cache = [] {
    std::array<std::vector<SeedPoint>, 4> all;
    for (int idx = 0; idx < 4; ++idx) {
      const int e = (idx & 1) ? 1 : -1;
      const int g = (idx & 2) ? 1 : -1;
      constexpr int nxi = 11, neta = 9;
      std::vector<SeedPoint> pts;
      pts.reserve(nxi * neta);
      for (int a = 0; a < nxi; ++a)
        for (int b = 0; b < neta; ++b) {
          const double xi = kXiBoxLo + (kXiBoxHi - kXiBoxLo) * a / (nxi - 1);
          const double eta = kEtaBoxLo + (kEtaBoxHi - kEtaBoxLo) * b / (neta - 1);
          const OmegaPoint w = legendre_omega(xi, eta, e, g);
          pts.push_back({xi, eta, w.wxi, w.weta});
        }
      all[static_cast<std::size_t>(idx)] = std::move(pts);
    }
    return all;
  }();
  return cache[static_cast<std::size_t>((eps > 0 ? 1 : 0) + (sgn > 0 ? 2 : 0))];
}

struct LegendreInversion {
  double xi, eta;
  OmegaJet jet;
};

// Damped Newton on (w_xi, w_eta) = (x, y), iterates clamped to a strip
// slightly wider than the declared box so the jet stays defined throughout.
bool newton_from_seed(int eps, int sgn, double x, double y, double xi0, double eta0,
                      LegendreInversion* out) {
  constexpr double xi_lo = -0.95, xi_hi = 0.95;
  constexpr double eta_lo = 0.02, eta_hi = 0.499;
  const double tol = 1e-12 * (1.0 + std::abs(x) + std::abs(y));
  double xi = xi0, eta = eta0;
  for (int it = 0; it < 60; ++it) {
    const OmegaJet jet = legendre_omega_jet(xi, eta, eps, sgn);
    const double f0 = jet.wxi - x, f1 = jet.weta - y;
    const double fn = std::hypot(f0, f1);
    if (fn <= tol) {
      *out = {xi, eta, jet};
      return true;
    }
    const double det = jet.wxixi * jet.wetaeta - jet.wxieta * jet.wxieta;
    if (std::abs(det) < 1e-300) return false;
    const double dxi = -(jet.wetaeta * f0 - jet.wxieta * f1) / det;
    const double deta = -(jet.wxixi * f1 - jet.wxieta * f0) / det;
    double step = 1.0;
    bool moved = false;
    for (int h = 0; h < 24; ++h) {
      const double nxi = std::clamp(xi + step * dxi, xi_lo, xi_hi);
      const double neta = std::clamp(eta + step * deta, eta_lo, eta_hi);
      const OmegaPoint w = legendre_omega(nxi, neta, eps, sgn);
      if (std::hypot(w.wxi - x, w.weta - y) < fn) {
        xi = nxi;
        eta = neta;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) return false;
  }
  return false;
}

Jet2 eval_legendre(const FundamentalLegendre& l, double x, double y) {
  const std::vector<SeedPoint>& seeds = legendre_seeds(l.epsilon, l.sign);
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const double dx = seeds[i].wxi - x, dy = seeds[i].weta - y;
    order.emplace_back(dx * dx + dy * dy, i);
  }
  std::stable_sort(order.begin(), order.end());
  const std::size_t tries = std::min<std::size_t>(24, order.size());
  for (std::size_t n = 0; n < tries; ++n) {
    const SeedPoint& sp = seeds[order[n].second];
    LegendreInversion sol;
    if (!newton_from_seed(l.epsilon, l.sign, x, y, sp.xi, sp.eta, &sol)) continue;
    if (sol.xi < kXiBoxLo - kBoxSlack || sol.xi > kXiBoxHi + kBoxSlack ||
        sol.eta < kEtaBoxLo - kBoxSlack || sol.eta > kEtaBoxHi + kBoxSlack)
      continue;
    const double det = sol.jet.wxixi * sol.jet.wetaeta - sol.jet.wxieta * sol.jet.wxieta;
    if (std::abs(det) < 1e-12)
      throw NumericsError("legendre inversion: contact transform degenerate at the solution");
    Jet2 j;
    j.u = sol.xi * x + sol.eta * y - sol.jet.w;
    j.ux = sol.xi;
    j.uy = sol.eta;
    j.uxx = sol.jet.wetaeta / det;
    j.uxy = -sol.jet.wxieta / det;
    j.uyy = sol.jet.wxixi / det;
    return j;
  }
  throw DomainError("legendre model: (x, y) outside the image of the declared (xi, eta) box");
}

}  // namespace

// ---- ModelU -----------------------------------------------------------------

ModelU::ModelU(Spec spec) : spec_(std::move(spec)) {
  std::visit(overloaded{
                 [](const GenericPoly& p) {
                   bool any = false;
                   for (const auto& row : p.coeff)
                     for (double c : row) {
                       if (!std::isfinite(c)) throw ConfigError("polynomial coefficients must be finite");
                       any = true;
                     }
                   if (!any) throw ConfigError("polynomial model needs at least one coefficient");
                 },
                 [](const FundamentalLegendre& l) {
                   require_pm(l.epsilon, "legendre epsilon");
                   require_pm(l.sign, "legendre sign");
                 },
                 [](const FundamentalDevelopable& d) {
                   require_pm(d.sign, "developable sign");
                   if (!std::isfinite(d.kappa)) throw ConfigError("developable kappa must be finite");
                 },
                 [](const Rotator& r) { require_pm(r.sign, "rotator sign"); },
             },
             spec_);
}

Jet2 ModelU::eval(double x, double y) const {
  if (!std::isfinite(x) || !std::isfinite(y) || !(x >= 0.0))
    throw DomainError("model eval requires finite (x, y) with x >= 0");
  return std::visit(
      overloaded{
          [&](const GenericPoly& p) { return jet_of(poly_expr<D2>(p.coeff, seed2(x, 0), seed2(y, 1))); },
          [&](const FundamentalLegendre& l) { return eval_legendre(l, x, y); },
          [&](const FundamentalDevelopable& d) {
            if (developable_g(d.kappa, x) < 1e-12)
              throw DomainError("developable model: square-root argument vanishes at this x");
            return jet_of(developable_expr<D2>(d.kappa, d.sign, seed2(x, 0), seed2(y, 1)));
          },
          [&](const Rotator& r) { return jet_of(rotator_expr<D2>(r.sign, seed2(x, 0))); },
      },
      spec_);
}

bool ModelU::in_domain(double x, double y) const {
  if (!std::isfinite(x) || !std::isfinite(y) || !(x >= 0.0)) return false;
  return std::visit(overloaded{
                        [](const GenericPoly&) { return true; },
                        [&](const FundamentalLegendre&) {
                          try {
                            eval(x, y);
                            return true;
                          } catch (const DomainError&) {
                            return false;
                          }
                        },
                        [&](const FundamentalDevelopable& d) { return developable_g(d.kappa, x) >= 1e-12; },
                        [](const Rotator&) { return true; },
                    },
                    spec_);
}

std::string ModelU::family() const {
  return std::visit(overloaded{
                        [](const GenericPoly&) { return std::string("generic-poly"); },
                        [](const FundamentalLegendre&) { return std::string("legendre"); },
                        [](const FundamentalDevelopable&) { return std::string("developable"); },
                        [](const Rotator&) { return std::string("rotator"); },
                    },
                    spec_);
}

ModelU::Box ModelU::sample_box() const {
  return std::visit(overloaded{
                        [](const GenericPoly&) { return Box{0.05, 2.0, -2.0, 2.0, false}; },
                        [](const FundamentalLegendre&) {
                          return Box{kXiBoxLo, kXiBoxHi, kEtaBoxLo, kEtaBoxHi, true};
                        },
                        [](const FundamentalDevelopable& d) {
                          // back off from the g = 0 edge so jets stay well scaled
                          double hi = 2.5;
                          for (double x = 0.05; x <= 2.5; x += 1e-3) {
                            if (developable_g(d.kappa, x) < 0.1) {
                              hi = x - 1e-3;
                              break;
                            }
                          }
                          return Box{0.05, std::max(0.10, hi), -2.0, 2.0, false};
                        },
                        [](const Rotator&) { return Box{0.05, 3.0, -2.0, 2.0, false}; },
                    },
                    spec_);
}

bool ModelU::is_fundamental() const { return !std::holds_alternative<GenericPoly>(spec_); }

// ---- closed-form wrappers -----------------------------------------------------

double casimir_mass(const Jet2& j, double x, double y) {
  return casimir_mass_expr<double>(j.u, j.ux, j.uy, x, y);
}

double casimir_spin(const Jet2& j, double x, double y) {
  return casimir_spin_expr<double>(j.u, j.ux, j.uy, x, y);
}

double e_c(const Jet2& j, double x, double y) { return e_c_expr<double>(j.u, j.ux, j.uy, x, y); }

double closed_form_hessian_factor(const Jet2& j, double x, double y) {
  return hessian_factor_expr<double>(j.u, j.ux, j.uy, j.uxx, j.uxy, j.uyy, x, y);
}

double jacobian_cmcj(const ModelU& m, double x, double y) {
  const Jet2 j = m.eval(x, y);
  const D1 X = D1::seeded(x, 0);
  const D1 Y = D1::seeded(y, 1);
  // inject the exact jet as dual coefficients of u and its gradient
  D1 u;
  u.v = j.u;
  u.d = {j.ux, j.uy};
  D1 ux;
  ux.v = j.ux;
  ux.d = {j.uxx, j.uxy};
  D1 uy;
  uy.v = j.uy;
  uy.d = {j.uxy, j.uyy};
  const D1 cm = casimir_mass_expr<D1>(u, ux, uy, X, Y);
  const D1 cj = casimir_spin_expr<D1>(u, ux, uy, X, Y);
  return cm.d[0] * cj.d[1] - cm.d[1] * cj.d[0];
}

// ---- Legendre closed form -------------------------------------------------------

OmegaPoint legendre_omega(double xi, double eta, int epsilon, int sign) {
  require_pm(epsilon, "legendre epsilon");
  require_pm(sign, "legendre sign");
  const double ae = std::abs(eta);
  if (!std::isfinite(xi) || !(ae > 0.0) || ae > 0.5 * (1.0 + 1e-12))
    throw DomainError("legendre_omega: requires finite xi and 0 < |eta| <= 1/2");
  const double r = std::hypot(xi, eta);
  const double s = std::sqrt(std::max(0.0, 1.0 - 4.0 * eta * eta));
  const double g = static_cast<double>(sign);
  const double e = static_cast<double>(epsilon);
  const double inv2e2 = 1.0 / (2.0 * eta * eta);
  OmegaPoint out;
  out.w = g * (r + e * xi * s) * inv2e2;
  out.wxi = g * (xi / r + e * s) * inv2e2;
  double neta;  // d/d eta of r + e xi s
  if (s == 0.0) {
    if (xi != 0.0)
      throw DomainError("legendre_omega: eta partial diverges at |eta| = 1/2 unless xi = 0");
    neta = eta / r;
  } else {
    neta = eta / r - 4.0 * e * xi * eta / s;
  }
  out.weta = g * (neta * inv2e2 - (r + e * xi * s) / (eta * eta * eta));
  return out;
}

OmegaJet legendre_omega_jet(double xi, double eta, int epsilon, int sign) {
  require_pm(epsilon, "legendre epsilon");
  require_pm(sign, "legendre sign");
  const double ae = std::abs(eta);
  if (!std::isfinite(xi) || !(ae >= 1e-6) || !(ae <= 0.5 - 1e-9))
    throw DomainError("legendre_omega_jet: requires |eta| inside (0, 1/2)");
  const D2 w = omega_expr<D2>(epsilon, sign, seed2(xi, 0), seed2(eta, 1));
  const Jet2 j = jet_of(w);
  return {j.u, j.ux, j.uy, j.uxx, j.uxy, j.uyy};
}

// ---- residual scans ----------------------------------------------------------------

ResidualReport fundamental_residuals(const ModelU& m, int n, std::uint64_t seed) {
  if (!m.is_fundamental())
    throw ConfigError("residual scan is defined for the fundamental families only");
  if (n <= 0) throw ConfigError("residual scan size must be positive");
  const ModelU::Box box = m.sample_box();
  Halton2 seq(seed);
  ResidualReport rep;
  rep.n = n;
  rep.transformed = box.transformed;
  for (int i = 0; i < n; ++i) {
    const auto [t0, t1] = seq.next();
    const double c0 = box.lo0 + t0 * (box.hi0 - box.lo0);
    const double c1 = box.lo1 + t1 * (box.hi1 - box.lo1);
    double mres, sres;
    if (box.transformed) {
      const auto& l = std::get<FundamentalLegendre>(m.spec());
      const OmegaPoint w = legendre_omega(c0, c1, l.epsilon, l.sign);
      const double r2 = c0 * c0 + c1 * c1;
      const double d = w.w - c0 * w.wxi;
      mres = std::abs(w.w * w.w - r2 * w.wxi * w.wxi - 1.0);
      sres = std::abs(4.0 * r2 * d * d - 1.0);
    } else {
      const Jet2 j = m.eval(c0, c1);
      mres = std::abs(casimir_mass(j, c0, c1) - 1.0);
      sres = std::abs(casimir_spin(j, c0, c1) - 1.0);
    }
    rep.max_mass_residual = std::max(rep.max_mass_residual, mres);
    rep.max_spin_residual = std::max(rep.max_spin_residual, sres);
  }
  return rep;
}

// ---- rotating-frame chart ------------------------------------------------------------

namespace {

template <class S>
struct FrameT {
  Vec3T<S> i, j, n;
};

template <class S>
FrameT<S> frame_expr(const S& th, const S& ph, const S& ps) {
  using std::cos;
  using std::sin;
  const S ct = cos(th), st = sin(th);
  const S cp = cos(ph), sp = sin(ph);
  const S cs = cos(ps), ss = sin(ps);
  const Vec3T<S> theta_hat{ct * cp, ct * sp, -st};
  const Vec3T<S> phi_hat{-sp, cp, S(0.0)};
  FrameT<S> f;
  f.i = (-ss) * theta_hat + cs * phi_hat;
  f.j = (-cs) * theta_hat + (-ss) * phi_hat;
  f.n = {st * cp, st * sp, ct};
  return f;
}

}  // namespace

Frame euler_frame(double theta, double phi, double psi) {
  const FrameT<double> f = frame_expr<double>(theta, phi, psi);
  return {f.i, f.j, f.n};
}

Frame euler_frame_rates(const EulerGaugeState& s) {
  const FrameT<D3> f =
      frame_expr<D3>(D3::seeded(s.theta, 0), D3::seeded(s.phi, 1), D3::seeded(s.psi, 2));
  const auto rate = [&](const D3& c) {
    return c.d[0] * s.theta_dot + c.d[1] * s.phi_dot + c.d[2] * s.psi_dot;
  };
  const auto rate3 = [&](const Vec3T<D3>& v) { return Vec3{rate(v.x), rate(v.y), rate(v.z)}; };
  return {rate3(f.i), rate3(f.j), rate3(f.n)};
}

Vec3 euler_angular_velocity(const EulerGaugeState& s) {
  const Frame f = euler_frame(s.theta, s.phi, s.psi);
  const Frame r = euler_frame_rates(s);
  return dot3(r.j, f.n) * f.i + dot3(r.n, f.i) * f.j + dot3(r.i, f.j) * f.n;
}

InvariantPair euler_invariants(const EulerGaugeState& s, double ell) {
  if (!(ell > 0.0)) throw DomainError("ell must be positive");
  const double v2 = dot3(s.v, s.v);
  if (v2 >= 1.0) throw ChartError("speed must stay below 1");
  if (std::abs(std::sin(s.theta)) < 1e-10)
    throw ChartError("polar chart degenerate: sin(theta) ~ 0");
  const Frame f = euler_frame(s.theta, s.phi, s.psi);
  const double denom = 1.0 - dot3(f.n, s.v);
  if (denom < 1e-10) throw ChartError("grazing incidence: 1 - n.v ~ 0");
  const double gamma = 1.0 / std::sqrt(1.0 - v2);
  const Vec3 w = euler_angular_velocity(s);
  const double wn = dot3(w, f.n);
  InvariantPair out;
  out.I0 = 1.0 - v2;
  out.P = ell * gamma * dot3(w, f.n - s.v) / denom;
  out.Q = ell * ell * (dot3(w, w) - wn * wn) / (denom * denom);
  return out;
}

// ---- covariant form ---------------------------------------------------------------------

BasicInvariants basic_invariants(const FourVector& xdot, const NullTriad& t, const TriadRates& r) {
  const double kx = dot(xdot, t.k);
  BasicInvariants b;
  b.I0 = dot(xdot, xdot);
  b.I1 = dot(r.a_dot, t.k) / kx;
  b.I2 = dot(r.b_dot, t.k) / kx;
  b.I3 = dot(r.b_dot, t.a) - b.I2 * dot(xdot, t.a) + b.I1 * dot(xdot, t.b);
  return b;
}

namespace {
double amax4(const FourVector& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2]), std::abs(v[3])});
}
}  // namespace

InvariantPair covariant_invariants(const FourVector& xdot, const NullTriad& t, const TriadRates& r,
                                   double ell, double rate_tol) {
  if (!(ell > 0.0)) throw DomainError("ell must be positive");
  const double vscale = 1.0 + std::max({amax4(t.k), amax4(t.a), amax4(t.b)});
  const double rscale = 1.0 + std::max({amax4(r.a_dot), amax4(r.b_dot), amax4(r.k_dot)});
  if (triad_residual(t) > rate_tol * vscale * vscale)
    throw ConsistencyError("triad violates its scalar constraints");
  const double drift =
      std::max({std::abs(2.0 * dot(t.k, r.k_dot)), std::abs(2.0 * dot(t.a, r.a_dot)),
                std::abs(2.0 * dot(t.b, r.b_dot)),
                std::abs(dot(r.k_dot, t.a) + dot(t.k, r.a_dot)),
                std::abs(dot(r.k_dot, t.b) + dot(t.k, r.b_dot)),
                std::abs(dot(r.a_dot, t.b) + dot(t.a, r.b_dot))});
  if (drift > rate_tol * vscale * rscale)
    throw ConsistencyError("triad rates do not preserve the constraints");
  const double xscale = 1.0 + amax4(xdot);
  const double kx = dot(xdot, t.k);
  if (std::abs(kx) < 1e-12 * xscale * vscale) throw ChartError("k.xdot vanishes");
  if (dot(xdot, xdot) < 1e-12 * xscale * xscale) throw ChartError("xdot must be timelike");
  const VelocityPack<double> pack{xdot, r.a_dot, r.b_dot, r.k_dot};
  const InvariantsT<double> iv = invariants_from_velocities<double>(t, pack, ell);
  return {iv.P, iv.Q, iv.I0};
}

CovariantKinematics euler_chart(const EulerGaugeState& s) {
  const Frame f = euler_frame(s.theta, s.phi, s.psi);
  const Frame fr = euler_frame_rates(s);
  CovariantKinematics out;
  out.xdot = {{1.0, s.v.x, s.v.y, s.v.z}};
  out.triad = {FourVector{{1.0, f.n.x, f.n.y, f.n.z}}, FourVector{{0.0, f.i.x, f.i.y, f.i.z}},
               FourVector{{0.0, f.j.x, f.j.y, f.j.z}}};
  out.rates = {FourVector{{0.0, fr.i.x, fr.i.y, fr.i.z}}, FourVector{{0.0, fr.j.x, fr.j.y, fr.j.z}},
               FourVector{{0.0, fr.n.x, fr.n.y, fr.n.z}}};
  return out;
}

// ---- targeted state construction ----------------------------------------------------------

EulerGaugeState state_with_invariants(Rng& rng, double P, double Q, double ell, double vmax) {
  if (!(ell > 0.0) || !std::isfinite(P) || !(Q > 0.0) || !std::isfinite(Q))
    throw DomainError("state targeting requires ell > 0, finite P and Q > 0");
  if (!(vmax >= 0.0) || vmax > 0.95) throw DomainError("vmax must lie in [0, 0.95]");
  constexpr double kPi = 3.14159265358979323846;
  for (int attempt = 0; attempt < 256; ++attempt) {
    EulerGaugeState s;
    s.v = rng.ball(vmax);
    s.theta = rng.uniform(0.35, kPi - 0.35);
    s.phi = rng.uniform(0.0, 2.0 * kPi);
    s.psi = rng.uniform(0.0, 2.0 * kPi);
    const double tdr = rng.uniform(-1.0, 1.0);
    const double pdr = rng.uniform(-1.0, 1.0);
    const double st = std::sin(s.theta);
    const double wp2 = tdr * tdr + pdr * pdr * st * st;
    if (wp2 < 0.05) continue;
    const Frame f = euler_frame(s.theta, s.phi, s.psi);
    const double denom = 1.0 - dot3(f.n, s.v);
    if (denom < 0.25) continue;
    // scale the transverse rates to land exactly on Q
    const double scale = std::sqrt(Q) * denom / (ell * std::sqrt(wp2));
    s.theta_dot = scale * tdr;
    s.phi_dot = scale * pdr;
    // psi_dot enters omega only along n; solve the parallel part for P
    s.psi_dot = 0.0;
    const Vec3 w0 = euler_angular_velocity(s);
    const double wn = dot3(w0, f.n);
    const Vec3 wperp = w0 - wn * f.n;
    const double gamma = 1.0 / std::sqrt(1.0 - dot3(s.v, s.v));
    const double wpar = P / (ell * gamma) + dot3(wperp, s.v) / denom;
    s.psi_dot = wpar - wn;
    return s;
  }
  throw NumericsError("state targeting did not find an admissible chart point");
}

}  // namespace spintop
