#include "spintop/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>

#include "spintop/errors.hpp"
#include "spintop/noether.hpp"

namespace spintop {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double amax4(const FourVector& v) {
  double r = 0.0;
  for (int i = 0; i < 4; ++i) r = std::max(r, std::abs(v[i]));
  return r;
}

/// Natural magnitude of each constraint, used to scale residuals.
std::array<double, 6> constraint_scales(const PhasePoint& pt, double m, double ell) {
  const double pn = std::max(amax4(pt.p), m);
  const double kn = std::max(amax4(pt.k), 1.0);
  const double qn = std::max(amax4(pt.pi), 0.5 * m * ell);
  return {pn * pn, kn * kn, kn * qn, qn * qn, pn * qn, pn * kn};
}

/// Equations of motion without the surface check; integrator stages may sit
/// slightly off the surface.
PhaseDerivs rhs_raw(const PhasePoint& pt, double c_t, double c_phi, double m, double ell) {
  const double a = 0.5 * ell * ell * m * m * m;
  PhaseDerivs d;
  d.xdot = (2.0 * c_t) * pt.p + (-a * c_phi) * pt.k;
  d.pdot = FourVector{};
  d.kdot = (2.0 * m * m * c_phi) * pt.pi;
  d.pidot = (a * c_phi) * (pt.p + (-m) * pt.k);
  return d;
}

/// Solve A x = b for a small n x n system in place; returns false on a
/// vanishing pivot.
template <int N>
bool solve_lu(std::array<std::array<double, N>, N>& A, std::array<double, N>& b) {
  for (int c = 0; c < N; ++c) {
    int piv = c;
    for (int r = c + 1; r < N; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    if (std::abs(A[piv][c]) < 1e-300) return false;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < N; ++r) {
      const double f = A[r][c] / A[c][c];
      if (f == 0.0) continue;
      for (int cc = c; cc < N; ++cc) A[r][cc] -= f * A[c][cc];
      b[r] -= f * b[c];
    }
  }
  for (int r = N - 1; r >= 0; --r) {
    double s = b[r];
    for (int cc = r + 1; cc < N; ++cc) s -= A[r][cc] * b[cc];
    b[r] = s / A[r][r];
  }
  return true;
}

}  // namespace

// ---- gauge functions --------------------------------------------------------

double gauge_value(const GaugeSpec& g, double tau) {
  return std::visit(overloaded{
                        [](const GaugeConst& c) { return c.c; },
                        [tau](const GaugePoly& p) {
                          double v = 0.0;
                          for (std::size_t i = p.coeff.size(); i-- > 0;)
                            v = v * tau + p.coeff[i];
                          return v;
                        },
                        [tau](const GaugeSinusoid& s) {
                          return s.offset +
                                 s.amplitude * std::sin(s.frequency * tau + s.phase);
                        },
                    },
                    g);
}

double gauge_derivative(const GaugeSpec& g, double tau) {
  return std::visit(overloaded{
                        [](const GaugeConst&) { return 0.0; },
                        [tau](const GaugePoly& p) {
                          double v = 0.0;
                          for (std::size_t i = p.coeff.size(); i-- > 1;)
                            v = v * tau + static_cast<double>(i) * p.coeff[i];
                          return v;
                        },
                        [tau](const GaugeSinusoid& s) {
                          return s.amplitude * s.frequency *
                                 std::cos(s.frequency * tau + s.phase);
                        },
                    },
                    g);
}

GaugeSpec scale_gauge(const GaugeSpec& g, double factor) {
  return std::visit(overloaded{
                        [factor](GaugeConst c) -> GaugeSpec {
                          c.c *= factor;
                          return c;
                        },
                        [factor](GaugePoly p) -> GaugeSpec {
                          for (double& c : p.coeff) c *= factor;
                          return p;
                        },
                        [factor](GaugeSinusoid s) -> GaugeSpec {
                          s.amplitude *= factor;
                          s.offset *= factor;
                          return s;
                        },
                    },
                    g);
}

// ---- surface bookkeeping ------------------------------------------------------

std::array<double, 6> constraint_residuals(const PhasePoint& pt, double m, double ell) {
  return {dot(pt.p, pt.p) - m * m,
          dot(pt.k, pt.k),
          dot(pt.k, pt.pi),
          dot(pt.pi, pt.pi) + 0.25 * m * m * ell * ell,
          dot(pt.p, pt.pi),
          dot(pt.k, pt.p) - m};
}

double surface_violation(const PhasePoint& pt, double m, double ell) {
  const auto r = constraint_residuals(pt, m, ell);
  const auto s = constraint_scales(pt, m, ell);
  double v = 0.0;
  for (int i = 0; i < 6; ++i) v = std::max(v, std::abs(r[i]) / s[i]);
  return v;
}

void project_to_surface(PhasePoint* pt, double m, double ell) {
  // Newton on the five (k, pi)-constraints; the minimal-norm update
  // dz = J^T (J J^T)^{-1} (-g) leaves p and x untouched.
  const FourVector pl = lower(pt->p);
  for (int iter = 0; iter < 10; ++iter) {
    const std::array<double, 5> g = {dot(pt->k, pt->k),
                                     dot(pt->k, pt->pi),
                                     dot(pt->pi, pt->pi) + 0.25 * m * m * ell * ell,
                                     dot(pt->p, pt->pi),
                                     dot(pt->k, pt->p) - m};
    const auto sc = constraint_scales(*pt, m, ell);
    const std::array<double, 5> gs = {sc[1], sc[2], sc[3], sc[4], sc[5]};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(g[i]) / gs[i]);
    if (worst <= 1e-14) return;

    // Rows of J in the 8 unknowns (dk^mu, dpi^mu), lower-index gradients.
    const FourVector kl = lower(pt->k);
    const FourVector ql = lower(pt->pi);
    std::array<std::array<double, 8>, 5> J{};
    for (int mu = 0; mu < 4; ++mu) {
      J[0][mu] = 2.0 * kl[mu];
      J[1][mu] = ql[mu];
      J[1][4 + mu] = kl[mu];
      J[2][4 + mu] = 2.0 * ql[mu];
      J[3][4 + mu] = pl[mu];
      J[4][mu] = pl[mu];
    }
    std::array<std::array<double, 5>, 5> JJt{};
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c) {
        double s = 0.0;
        for (int i = 0; i < 8; ++i) s += J[r][i] * J[c][i];
        JJt[r][c] = s;
      }
    std::array<double, 5> rhs;
    for (int i = 0; i < 5; ++i) rhs[i] = -g[i];
    if (!solve_lu<5>(JJt, rhs))
      throw NumericsError("project_to_surface: degenerate constraint gradients");
    for (int mu = 0; mu < 4; ++mu) {
      double dk = 0.0, dq = 0.0;
      for (int r = 0; r < 5; ++r) {
        dk += J[r][mu] * rhs[r];
        dq += J[r][4 + mu] * rhs[r];
      }
      pt->k[mu] += dk;
      pt->pi[mu] += dq;
    }
  }
  if (surface_violation(*pt, m, ell) > 1e-12)
    throw NumericsError("project_to_surface: no convergence in 10 iterations");
}

PhasePoint random_surface_point(Rng& rng, double m, double ell) {
  if (!(m > 0.0) || !(ell > 0.0))
    throw DomainError("random_surface_point: m and ell must be positive");
  const Vec3 n = rng.direction();
  Vec3 e{};
  for (int tries = 0; tries < 64; ++tries) {
    const Vec3 t = rng.direction();
    e = t - dot3(t, n) * n;
    const double en = norm3(e);
    if (en > 1e-6) {
      e = (1.0 / en) * e;
      break;
    }
  }
  PhasePoint pt;
  pt.p = FourVector{{m, 0.0, 0.0, 0.0}};
  pt.k = FourVector{{1.0, n.x, n.y, n.z}};
  const double s = 0.5 * m * ell;
  pt.pi = FourVector{{0.0, s * e.x, s * e.y, s * e.z}};
  const Vec3 xs = rng.ball(2.0 * ell);
  pt.x = FourVector{{rng.uniform(-2.0 * ell, 2.0 * ell), xs.x, xs.y, xs.z}};

  const Mat4 L = lorentz_boost(rng.ball(0.6)) * rotation(rng.direction(), rng.uniform(0.0, 6.283185307179586));
  pt.x = apply(L, pt.x);
  pt.p = apply(L, pt.p);
  pt.k = apply(L, pt.k);
  pt.pi = apply(L, pt.pi);
  project_to_surface(&pt, m, ell);
  return pt;
}

PhaseDerivs hamiltonian_rhs(const PhasePoint& pt, double c_t, double c_phi, double m,
                            double ell) {
  if (surface_violation(pt, m, ell) > 1e-6)
    throw ConsistencyError("hamiltonian_rhs: point is off the constraint surface");
  return rhs_raw(pt, c_t, c_phi, m, ell);
}

// ---- integration ---------------------------------------------------------------

namespace {

constexpr int kNState = 19;  // x(0-3) p(4-7) k(8-11) pi(12-15) t(16) phi(17) phase(18)
using StateV = std::array<double, kNState>;

StateV pack_state(const PhasePoint& pt, double t, double phi, double phase) {
  StateV y{};
  for (int i = 0; i < 4; ++i) {
    y[i] = pt.x[i];
    y[4 + i] = pt.p[i];
    y[8 + i] = pt.k[i];
    y[12 + i] = pt.pi[i];
  }
  y[16] = t;
  y[17] = phi;
  y[18] = phase;
  return y;
}

PhasePoint unpack_point(const StateV& y) {
  PhasePoint pt;
  for (int i = 0; i < 4; ++i) {
    pt.x[i] = y[i];
    pt.p[i] = y[4 + i];
    pt.k[i] = y[8 + i];
    pt.pi[i] = y[12 + i];
  }
  return pt;
}

StateV state_deriv(double tau, const StateV& y, const GaugeFunctions& g, double m,
                   double ell) {
  const PhasePoint pt = unpack_point(y);
  const double ct = gauge_value(g.c_t, tau);
  const double cp = gauge_value(g.c_phi, tau);
  const PhaseDerivs d = rhs_raw(pt, ct, cp, m, ell);
  StateV dy{};
  for (int i = 0; i < 4; ++i) {
    dy[i] = d.xdot[i];
    dy[4 + i] = 0.0;
    dy[8 + i] = d.kdot[i];
    dy[12 + i] = d.pidot[i];
  }
  const double xp = dot(d.xdot, pt.p);
  const double kq = dot(d.kdot, pt.pi);
  dy[16] = xp / m;
  dy[17] = 2.0 * kq / (m * ell);
  dy[18] = kq + xp;
  return dy;
}

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

}  // namespace

Trajectory integrate(const PhasePoint& pt0, const GaugeFunctions& g, double m, double ell,
                     Span span, Tolerances tol, int samples) {
  if (!(m > 0.0) || !(ell > 0.0)) throw ConfigError("integrate: m and ell must be positive");
  if (!(span.t1 > span.t0)) throw ConfigError("integrate: span must have t1 > t0");
  if (samples < 1) throw ConfigError("integrate: need at least one sample interval");
  if (!(tol.rtol > 0.0) || !(tol.atol > 0.0))
    throw ConfigError("integrate: tolerances must be positive");
  if (surface_violation(pt0, m, ell) > 1e-10)
    throw ConsistencyError("integrate: initial point is off the constraint surface");

  PhasePoint start = pt0;
  project_to_surface(&start, m, ell);

  Trajectory tr;
  tr.gauge = g;
  tr.samples.reserve(static_cast<std::size_t>(samples) + 1);

  const double spanlen = span.t1 - span.t0;
  auto out_tau = [&](int j) {
    return (j == samples) ? span.t1 : span.t0 + spanlen * (static_cast<double>(j) / samples);
  };
  auto record = [&](double tau, const StateV& y) {
    Sample s;
    s.tau = tau;
    s.pt = unpack_point(y);
    s.t = y[16];
    s.phi = y[17];
    s.phase = y[18];
    s.residuals = constraint_residuals(s.pt, m, ell);
    tr.max_residual = std::max(tr.max_residual, surface_violation(s.pt, m, ell));
    tr.samples.push_back(s);
  };

  StateV y = pack_state(start, 0.0, 0.0, 0.0);
  double tau = span.t0;
  record(tau, y);

  StateV k1 = state_deriv(tau, y, g, m, ell);
  double h_ctrl = spanlen * 1e-3;
  const double h_min = spanlen * 1e-14;
  int next = 1;
  long budget = 20000000;

  StateV k2, k3, k4, k5, k6, k7, ytmp, y5;
  while (next <= samples) {
    if (--budget < 0) throw NumericsError("integrate: step budget exhausted");
    if (h_ctrl < h_min) throw NumericsError("integrate: step size underflow");
    const double target = out_tau(next);
    double h = h_ctrl;
    bool hit = false;
    if (tau + 1.01 * h >= target) {
      h = target - tau;
      hit = true;
    }

    for (int i = 0; i < kNState; ++i) ytmp[i] = y[i] + h * kA21 * k1[i];
    k2 = state_deriv(tau + kC2 * h, ytmp, g, m, ell);
    for (int i = 0; i < kNState; ++i)
      ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    k3 = state_deriv(tau + kC3 * h, ytmp, g, m, ell);
    for (int i = 0; i < kNState; ++i)
      ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    k4 = state_deriv(tau + kC4 * h, ytmp, g, m, ell);
    for (int i = 0; i < kNState; ++i)
      ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    k5 = state_deriv(tau + kC5 * h, ytmp, g, m, ell);
    for (int i = 0; i < kNState; ++i)
      ytmp[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] +
                            kA65 * k5[i]);
    k6 = state_deriv(tau + h, ytmp, g, m, ell);
    for (int i = 0; i < kNState; ++i)
      y5[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB5 * k5[i] +
                          kB6 * k6[i]);
    k7 = state_deriv(tau + h, y5, g, m, ell);

    double err2 = 0.0;
    for (int i = 0; i < kNState; ++i) {
      const double de = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                             kE6 * k6[i] + kE7 * k7[i]);
      const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err2 += (de / sc) * (de / sc);
    }
    const double err = std::sqrt(err2 / kNState);

    if (err <= 1.0) {
      tau = hit ? target : tau + h;
      y = y5;
      // Pull (k, pi) back onto the surface, then restart the first stage from
      // the projected state.
      PhasePoint pt = unpack_point(y);
      project_to_surface(&pt, m, ell);
      for (int i = 0; i < 4; ++i) {
        y[8 + i] = pt.k[i];
        y[12 + i] = pt.pi[i];
      }
      k1 = state_deriv(tau, y, g, m, ell);
      ++tr.n_steps;
      if (hit) {
        record(tau, y);
        ++next;
      }
      const double fac =
          (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h_ctrl = h * fac;
    } else {
      ++tr.n_rejected;
      const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      h_ctrl = h * fac;
    }
  }
  return tr;
}

// ---- observables ------------------------------------------------------------------

ObservableSeries observables(const Trajectory& tr, double m, double ell) {
  if (tr.samples.empty()) throw ConfigError("observables: empty trajectory");
  ObservableSeries out;
  out.rows.reserve(tr.samples.size());
  const FourVector x0 = tr.samples.front().pt.x;
  const FourVector pi0 = tr.samples.front().pt.pi;
  const double inf = std::numeric_limits<double>::infinity();

  for (const Sample& s : tr.samples) {
    const double ct = gauge_value(tr.gauge.c_t, s.tau);
    const double cp = gauge_value(tr.gauge.c_phi, s.tau);
    const double cpd = gauge_derivative(tr.gauge.c_phi, s.tau);
    const PhaseDerivs d = rhs_raw(s.pt, ct, cp, m, ell);
    const double tdot = dot(d.xdot, s.pt.p) / m;
    const double phidot = 2.0 * dot(d.kdot, s.pt.pi) / (m * ell);
    if (tdot <= 0.0) out.clock_warning = true;

    ObsSample row;
    row.tau = s.tau;
    row.t = s.t;
    row.phi = s.phi;
    if (std::abs(tdot) < 1e-300) {
      row.Psi = (phidot == 0.0) ? 0.0 : inf;
    } else {
      const double arg = 0.5 * ell * std::abs(phidot / tdot);
      // snap to the light-like boundary: within rounding of arg = 1 the
      // rapidity is not resolvable and reads as divergent
      row.Psi = (arg < 1.0 - 1e-9) ? std::atanh(arg) : inf;
    }

    // Transverse velocity and acceleration about the momentum axis; the
    // spatial metric of the p-frame is g(u, v) = -u.v on p-orthogonal vectors.
    const FourVector hk = s.pt.k + (-1.0 / m) * s.pt.p;
    const double pre = 0.5 * ell * ell * m * m * m;
    const FourVector vperp = (-pre * cp) * hk;
    const FourVector aperp = (-pre * cpd) * hk + (-2.0 * pre * m * m * cp * cp) * s.pt.pi;
    const double sp2 = -dot(vperp, vperp);
    row.has_rc = sp2 > 1e-24 * std::max(1.0, pre * pre);
    row.R_c = 0.0;
    if (row.has_rc) {
      const double gav = -dot(aperp, vperp);
      const FourVector an = aperp + (-gav / sp2) * vperp;
      const double n2 = -dot(an, an);
      if (n2 <= 1e-60) {
        row.has_rc = false;
      } else {
        row.R_c = sp2 / std::sqrt(n2);
      }
    }

    FourVector w = s.pt.x - x0;
    w = w + (-dot(w, s.pt.p) / (m * m)) * s.pt.p;
    w = w + (1.0 / m) * pi0;
    row.axis_distance = std::sqrt(std::max(0.0, -dot(w, w)));
    out.rows.push_back(row);
  }
  return out;
}

double worldline_separation(const Trajectory& a, const Trajectory& b, double m,
                            double ell) {
  (void)m;
  (void)ell;
  struct Series {
    std::vector<double> t;
    std::vector<FourVector> x;
  };
  auto extract = [](const Trajectory& tr) {
    if (tr.samples.size() < 2)
      throw ConfigError("worldline_separation: need at least two samples");
    Series s;
    for (const Sample& smp : tr.samples) {
      s.t.push_back(smp.t);
      s.x.push_back(smp.pt.x);
    }
    const bool up = s.t.back() > s.t.front();
    for (std::size_t i = 1; i < s.t.size(); ++i) {
      const double dt = s.t[i] - s.t[i - 1];
      if ((up && dt <= 0.0) || (!up && dt >= 0.0))
        throw ConsistencyError("worldline_separation: clock is not monotone");
    }
    if (!up) {
      std::reverse(s.t.begin(), s.t.end());
      std::reverse(s.x.begin(), s.x.end());
    }
    return s;
  };
  const Series sa = extract(a);
  const Series sb = extract(b);
  const double lo = std::max(sa.t.front(), sb.t.front());
  const double hi = std::min(sa.t.back(), sb.t.back());
  if (!(hi > lo))
    throw ConsistencyError("worldline_separation: no common clock span");

  auto interp = [](const Series& s, double t) {
    const auto it = std::upper_bound(s.t.begin(), s.t.end(), t);
    std::size_t i1 = static_cast<std::size_t>(it - s.t.begin());
    i1 = std::clamp<std::size_t>(i1, 1, s.t.size() - 1);
    const std::size_t i0 = i1 - 1;
    const double w = (t - s.t[i0]) / (s.t[i1] - s.t[i0]);
    return s.x[i0] + w * (s.x[i1] - s.x[i0]);
  };

  const FourVector p = a.samples.front().pt.p;
  const double pp = dot(p, p);
  double worst = 0.0;
  constexpr int kGrid = 512;
  for (int i = 0; i < kGrid; ++i) {
    const double t = lo + (hi - lo) * (static_cast<double>(i) / (kGrid - 1));
    FourVector d = interp(sa, t) - interp(sb, t);
    d = d + (-dot(d, p) / pp) * p;
    worst = std::max(worst, std::sqrt(std::max(0.0, -dot(d, d))));
  }
  return worst;
}

// ---- tube -------------------------------------------------------------------------

TubeResult tube_sample(const PhasePoint& pt0, const std::vector<GaugeFunctions>& gauges,
                       double m, double ell, Span span, Tolerances tol, int samples) {
  if (gauges.empty()) throw ConfigError("tube_sample: need at least one gauge");
  for (const GaugeFunctions& g : gauges)
    if (!(g.c_t == gauges.front().c_t))
      throw ConfigError("tube_sample: all members must share the same c_t");

  TubeResult res;
  res.members.reserve(gauges.size());
  // Members integrate independently; results are assembled in gauge order.
  std::vector<std::future<Trajectory>> futs;
  futs.reserve(gauges.size());
  for (const GaugeFunctions& g : gauges)
    futs.push_back(std::async(std::launch::async, [&, g] {
      return integrate(pt0, g, m, ell, span, tol, samples);
    }));
  for (auto& f : futs) res.members.push_back(f.get());

  TubeReport& rep = res.report;
  rep.separation_threshold = 1000.0 * (tol.rtol * ell + tol.atol);
  for (const Trajectory& tr : res.members) {
    const ObservableSeries obs = observables(tr, m, ell);
    for (const ObsSample& row : obs.rows)
      rep.axis_distance_max_dev =
          std::max(rep.axis_distance_max_dev, std::abs(row.axis_distance - 0.5 * ell));
  }
  rep.min_separation = std::numeric_limits<double>::infinity();
  bool any_pair = false;
  for (std::size_t i = 0; i < res.members.size(); ++i)
    for (std::size_t j = i + 1; j < res.members.size(); ++j) {
      const double sep = worldline_separation(res.members[i], res.members[j], m, ell);
      rep.max_separation = std::max(rep.max_separation, sep);
      rep.min_separation = std::min(rep.min_separation, sep);
      any_pair = true;
    }
  if (!any_pair) rep.min_separation = 0.0;
  rep.distinct_worldlines = any_pair && rep.min_separation > rep.separation_threshold;
  return res;
}

// ---- gauge presets -----------------------------------------------------------------

ZitterResult zitter_preset(const PhasePoint& pt0, double m, double ell, ZitterPreset which,
                           const GaugeSpec& c_phi, Span span, Tolerances tol, int samples) {
  GaugeFunctions g;
  g.c_phi = c_phi;
  g.c_t = (which == ZitterPreset::A) ? GaugeSpec(GaugeConst{0.0})
                                     : scale_gauge(c_phi, m * m * ell * ell);
  ZitterResult zr;
  zr.traj = integrate(pt0, g, m, ell, span, tol, samples);
  zr.xdot2.reserve(zr.traj.samples.size());
  for (const Sample& s : zr.traj.samples) {
    const double ct = gauge_value(g.c_t, s.tau);
    const double cp = gauge_value(g.c_phi, s.tau);
    const PhaseDerivs d = rhs_raw(s.pt, ct, cp, m, ell);
    const double v2 = dot(d.xdot, d.xdot);
    zr.xdot2.push_back(v2);
    zr.max_abs_xdot2 = std::max(zr.max_abs_xdot2, std::abs(v2));
    if (dot(d.xdot, s.pt.p) <= 0.0) zr.clock_reversal = true;
  }
  return zr;
}

// ---- brackets ------------------------------------------------------------------------

PhaseDuals seed_phase(const PhasePoint& pt) {
  PhaseDuals s;
  for (int mu = 0; mu < 4; ++mu) {
    s.x[mu] = PhaseDual::seeded(pt.x[mu], mu);
    s.p[mu] = PhaseDual::seeded(pt.p[mu], 4 + mu);
    s.k[mu] = PhaseDual::seeded(pt.k[mu], 8 + mu);
    s.pi[mu] = PhaseDual::seeded(pt.pi[mu], 12 + mu);
  }
  return s;
}

namespace {

/// Canonical bracket from two gradients, contravariant-component derivatives:
/// {A, B} = sum_mu eta^{mu mu} (dA/dx dB/dp - dB/dx dA/dp + dA/dk dB/dpi - ...).
double bracket_of(const PhaseDual& u, const PhaseDual& v) {
  double acc = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    const double sg = (mu == 0) ? 1.0 : -1.0;
    acc += sg * (u.d[mu] * v.d[4 + mu] - v.d[mu] * u.d[4 + mu]);
    acc += sg * (u.d[8 + mu] * v.d[12 + mu] - v.d[8 + mu] * u.d[12 + mu]);
  }
  return acc;
}

}  // namespace

double poisson_bracket(const Observable& U, const Observable& V, const PhasePoint& pt) {
  const PhaseDuals s = seed_phase(pt);
  return bracket_of(U(s), V(s));
}

double dirac_bracket(const Observable& U, const Observable& V, const PhasePoint& pt,
                     double m) {
  const PhaseDuals s = seed_phase(pt);
  const PhaseDual kk = dot(s.k, s.k);
  const PhaseDual kq = dot(s.k, s.pi);
  const PhaseDual pq = dot(s.p, s.pi);
  const PhaseDual kp = dot(s.k, s.p);

  const double kn = std::max(1.0, amax4(pt.k));
  const double pn = std::max(m, amax4(pt.p));
  const double qn = std::max(1.0, amax4(pt.pi));
  if (std::abs(kk.v) > 1e-6 * kn * kn || std::abs(kq.v) > 1e-6 * kn * qn ||
      std::abs(pq.v) > 1e-6 * pn * qn || std::abs(kp.v - m) > 1e-6 * pn * kn)
    throw ConsistencyError("dirac_bracket: point is off the constraint surface");

  const PhaseDual u = U(s);
  const PhaseDual v = V(s);
  const double corr =
      0.5 * (bracket_of(u, kk) * bracket_of(kq, v) - bracket_of(u, kq) * bracket_of(kk, v)) +
      (bracket_of(u, pq) * bracket_of(kk, v) - bracket_of(u, kk) * bracket_of(pq, v)) /
          (2.0 * m) +
      (bracket_of(u, kq) * bracket_of(kp, v) - bracket_of(u, kp) * bracket_of(kq, v)) / m;
  return bracket_of(u, v) - corr;
}

namespace {

/// Bracket engine over the internal pairs (q_i, pi_i) alone; p is inert.
template <int NV>
FirstClassReport first_class_impl(std::uint64_t seed) {
  constexpr int D = 8 * NV;
  using DD = Dual<double, D>;
  const auto pbr = [](const DD& u, const DD& v) {
    double acc = 0.0;
    for (int i = 0; i < NV; ++i)
      for (int mu = 0; mu < 4; ++mu) {
        const double sg = (mu == 0) ? 1.0 : -1.0;
        const int qd = 8 * i + mu, pd = 8 * i + 4 + mu;
        acc += sg * (u.d[qd] * v.d[pd] - v.d[qd] * u.d[pd]);
      }
    return acc;
  };

  Rng rng(seed);
  FirstClassReport rep;
  const double m = 1.0, ell = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    Vec4T<DD> p;
    std::vector<Vec4T<DD>> q(NV), pi(NV);
    for (int mu = 0; mu < 4; ++mu) p[mu] = DD(rng.uniform(-1.0, 1.0));
    for (int i = 0; i < NV; ++i)
      for (int mu = 0; mu < 4; ++mu) {
        q[static_cast<std::size_t>(i)][mu] =
            DD::seeded(rng.uniform(-1.0, 1.0), 8 * i + mu);
        pi[static_cast<std::size_t>(i)][mu] =
            DD::seeded(rng.uniform(-1.0, 1.0), 8 * i + 4 + mu);
      }

    std::vector<DD> scalars;
    for (int i = 0; i < NV; ++i)
      for (int j = i; j < NV; ++j) {
        scalars.push_back(dot(q[i], q[j]));
        scalars.push_back(dot(pi[i], pi[j]));
      }
    for (int i = 0; i < NV; ++i) {
      scalars.push_back(dot(p, q[i]));
      scalars.push_back(dot(p, pi[i]));
      for (int j = 0; j < NV; ++j) scalars.push_back(dot(q[i], pi[j]));
    }

    const DD psi1 = dot(p, p) - DD(m * m);
    const DD psi2 = casimir_spin_detsum_expr<DD>(p, q, pi) + DD(0.25 * m * m * m * m * ell * ell);
    for (const DD& s : scalars) {
      rep.max_psi1 = std::max(rep.max_psi1, std::abs(pbr(psi1, s)));
      rep.max_psi2 = std::max(rep.max_psi2, std::abs(pbr(psi2, s)));
    }
  }
  return rep;
}

}  // namespace

FirstClassReport poisson_first_class_check(int N_v, std::uint64_t seed) {
  if (N_v == 1) return first_class_impl<1>(seed);
  if (N_v == 2) return first_class_impl<2>(seed);
  throw ConfigError("poisson_first_class_check: N_v must be 1 or 2");
}

}  // namespace spintop
