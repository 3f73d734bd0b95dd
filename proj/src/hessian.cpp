#include "spintop/hessian.hpp"

#include <algorithm>
#include <cmath>

#include "spintop/errors.hpp"

namespace spintop {

EulerGaugeState chart_state(const ReducedState& s) {
  EulerGaugeState e;
  e.v = {s.qdot[0], s.qdot[1], s.qdot[2]};
  e.theta = s.q[3];
  e.phi = s.q[4];
  e.psi = s.q[5];
  e.theta_dot = s.qdot[3];
  e.phi_dot = s.qdot[4];
  e.psi_dot = s.qdot[5];
  return e;
}

ReducedState reduced_state(const EulerGaugeState& e) {
  ReducedState s;
  s.qdot[0] = e.v.x;
  s.qdot[1] = e.v.y;
  s.qdot[2] = e.v.z;
  s.q[3] = e.theta;
  s.q[4] = e.phi;
  s.q[5] = e.psi;
  s.qdot[3] = e.theta_dot;
  s.qdot[4] = e.phi_dot;
  s.qdot[5] = e.psi_dot;
  return s;
}

double reduced_lagrangian(const ModelU& mU, double m, double ell, const ReducedState& s) {
  if (!(m > 0.0)) throw DomainError("m must be positive");
  const InvariantPair iv = euler_invariants(chart_state(s), ell);
  const Jet2 j = mU.eval(std::sqrt(std::max(0.0, iv.Q)), iv.P);
  return -m * std::sqrt(iv.I0) * j.u;
}

namespace {

using Mat6 = std::array<std::array<double, 6>, 6>;

// 4th-order first-derivative weights at offsets -2,-1,+1,+2 (to be divided by h)
constexpr double kD1Off[4] = {-2.0, -1.0, 1.0, 2.0};
constexpr double kD1W[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

template <class F>
Mat6 stencil_hessian(const F& L, const std::array<double, 6>& qdot0, const std::array<double, 6>& h,
                     double L0) {
  Mat6 H{};
  std::array<double, 6> pert = qdot0;
  for (int i = 0; i < 6; ++i) {
    // diagonal: 5-point second-derivative stencil, error O(h^4)
    double acc = -30.0 * L0;
    for (const double off : {-2.0, -1.0, 1.0, 2.0}) {
      pert[i] = qdot0[i] + off * h[i];
      const double v = L(pert);
      acc += (std::abs(off) > 1.5 ? -1.0 : 16.0) * v;
    }
    pert[i] = qdot0[i];
    H[i][i] = acc / (12.0 * h[i] * h[i]);
    for (int j = i + 1; j < 6; ++j) {
      // mixed: product of two 4th-order first-derivative stencils
      double sum = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          pert[i] = qdot0[i] + kD1Off[a] * h[i];
          pert[j] = qdot0[j] + kD1Off[b] * h[j];
          sum += kD1W[a] * kD1W[b] * L(pert);
        }
      pert[i] = qdot0[i];
      pert[j] = qdot0[j];
      H[i][j] = H[j][i] = sum / (h[i] * h[j]);
    }
  }
  return H;
}

}  // namespace

HessianReport hessian_matrix(const ModelU& mU, double m, double ell, const ReducedState& s,
                             const StepPolicy& policy) {
  const InvariantPair iv0 = euler_invariants(chart_state(s), ell);
  if (iv0.Q < policy.q_min) throw ChartError("Q at the base state is below the policy floor");

  const auto L = [&](const std::array<double, 6>& qdot) {
    ReducedState p = s;
    p.qdot = qdot;
    return reduced_lagrangian(mU, m, ell, p);
  };
  const double L0 = L(s.qdot);

  std::array<double, 6> h{};
  for (int i = 0; i < 6; ++i) h[i] = std::max(policy.h_abs, policy.h_rel * std::abs(s.qdot[i]));
  std::array<double, 6> h2 = h;
  for (double& v : h2) v *= 0.5;

  const Mat6 Hc = stencil_hessian(L, s.qdot, h, L0);
  const Mat6 Hf = stencil_hessian(L, s.qdot, h2, L0);

  HessianReport rep;
  double scale = 0.0, disagree = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      rep.H[i][j] = (16.0 * Hf[i][j] - Hc[i][j]) / 15.0;
      scale = std::max(scale, std::abs(rep.H[i][j]));
      disagree = std::max(disagree, std::abs(Hf[i][j] - Hc[i][j]));
    }
  if (disagree > policy.rich_tol * std::max(scale, 1e-300))
    throw NumericsError("step policy: the two stencil scales disagree beyond tolerance");

  rep.det = det_6(rep.H);
  rep.singular_values = singular_values_6(rep.H);
  const double smax = rep.singular_values[0];
  rep.threshold = policy.tau_rank * smax;
  rep.rank = 0;
  for (const double sv : rep.singular_values)
    if (smax > 0.0 && sv > rep.threshold) ++rep.rank;
  return rep;
}

double kinematic_factor_estimate(const ModelU& mU, double m, double ell, const ReducedState& s,
                                 const StepPolicy& policy) {
  const InvariantPair iv = euler_invariants(chart_state(s), ell);
  const double x = std::sqrt(iv.Q), y = iv.P;
  const double factor = closed_form_hessian_factor(mU.eval(x, y), x, y);
  if (std::abs(factor) < 1e-10)
    throw DegenerateError("closed-form factor vanishes at this state");
  return hessian_matrix(mU, m, ell, s, policy).det / factor;
}

double proportionality_probe(const std::vector<ModelU>& models, double m, double ell,
                             const ReducedState& s, const StepPolicy& policy) {
  if (models.size() < 3) throw ConfigError("proportionality probe needs at least three models");
  std::vector<double> r;
  r.reserve(models.size());
  for (const ModelU& mU : models) r.push_back(kinematic_factor_estimate(mU, m, ell, s, policy));
  double spread = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j)
      spread = std::max(spread, std::abs(r[i] - r[j]) / std::abs(r[i]));
  return spread;
}

double jacobian_relation_ratio(const ModelU& mU, double m, double ell, const ReducedState& s,
                               const StepPolicy& policy) {
  const InvariantPair iv = euler_invariants(chart_state(s), ell);
  const double x = std::sqrt(iv.Q), y = iv.P;
  const Jet2 j = mU.eval(x, y);
  const double ec = e_c(j, x, y);
  const double jac = jacobian_cmcj(mU, x, y);
  const double lead = (j.u - y * j.uy) * j.ux + x * j.uy * j.uy;
  if (std::abs(ec) < 1e-10 || std::abs(jac) < 1e-12 || std::abs(lead) < 1e-12)
    throw DegenerateError("jacobian relation degenerate at this state");
  const double det = hessian_matrix(mU, m, ell, s, policy).det;
  return det * 16.0 * x * x * ec / (jac * lead);
}

std::array<double, 6> singular_values_6(const std::array<std::array<double, 6>, 6>& A) {
  double a[6][6];
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) a[i][j] = A[i][j];
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool converged = true;
    for (int p = 0; p < 6; ++p)
      for (int q = p + 1; q < 6; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int k = 0; k < 6; ++k) {
          app += a[k][p] * a[k][p];
          aqq += a[k][q] * a[k][q];
          apq += a[k][p] * a[k][q];
        }
        if (std::abs(apq) <= 1e-30 + 1e-15 * std::sqrt(app * aqq)) continue;
        converged = false;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        for (int k = 0; k < 6; ++k) {
          const double vp = a[k][p], vq = a[k][q];
          a[k][p] = c * vp - sn * vq;
          a[k][q] = sn * vp + c * vq;
        }
      }
    if (converged) break;
  }
  std::array<double, 6> sv{};
  for (int j = 0; j < 6; ++j) {
    double n2 = 0.0;
    for (int k = 0; k < 6; ++k) n2 += a[k][j] * a[k][j];
    sv[j] = std::sqrt(n2);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

double det_6(const std::array<std::array<double, 6>, 6>& A) {
  double a[6][6];
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) a[i][j] = A[i][j];
  double det = 1.0;
  for (int col = 0; col < 6; ++col) {
    int piv = col;
    for (int r = col + 1; r < 6; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-300) return 0.0;
    if (piv != col) {
      for (int j = 0; j < 6; ++j) std::swap(a[piv][j], a[col][j]);
      det = -det;
    }
    det *= a[col][col];
    for (int r = col + 1; r < 6; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int j = col; j < 6; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

}  // namespace spintop
