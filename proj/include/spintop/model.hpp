#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "spintop/dual.hpp"
#include "spintop/minkowski.hpp"
#include "spintop/sampling.hpp"
#include "spintop/spinor.hpp"

// Internal-shape models u(x, y) and the kinematic invariants feeding them.
//
// The action is -m Integral dtau sqrt(xdot.xdot) u(sqrt(Q), P), with
//   Q = -l^2 (kdot.kdot) / (k.xdot)^2        (precession speed squared)
//   P = l [(a.bdot)(k.xdot) + (k.adot)(b.xdot) + (b.kdot)(a.xdot)]
//         / (sqrt(xdot.xdot) (k.xdot))       (twist rate)
// evaluated on a null triad attached to the worldline. Everything downstream
// (Casimir functions, degeneracy analysis, canonical momenta) consumes the
// model only through its second-order jet.

namespace spintop {

/// Value and partials of u at a point, exact up to rounding.
struct Jet2 {
  double u, ux, uy, uxx, uxy, uyy;
};

/// u = sum_ij c[i][j] x^i y^j; rows indexed by the x power.
struct GenericPoly {
  std::vector<std::vector<double>> coeff;
};

/// Nondevelopable branch defined through its contact transform
///   omega(xi, eta) = sign [sqrt(xi^2+eta^2) + epsilon xi sqrt(1-4 eta^2)]
///                    / (2 eta^2),  0 < |eta| <= 1/2;
/// u(x, y) is recovered by inverting (d omega/d xi, d omega/d eta) = (x, y).
struct FundamentalLegendre {
  int epsilon = 1;  // +1 or -1
  int sign = 1;     // +1 or -1
};

/// u = sign sqrt(1 - x^2 sin^2(kappa)/4 + x cos(kappa)) + (y/2) sin(kappa).
struct FundamentalDevelopable {
  double kappa = 0.0;
  int sign = 1;
};

/// u = sign sqrt(1 + x).
struct Rotator {
  int sign = 1;
};

class ModelU {
 public:
  using Spec = std::variant<GenericPoly, FundamentalLegendre, FundamentalDevelopable, Rotator>;

  /// Rectangle of admissible sample points. When `transformed` is set the
  /// coordinates are (xi, eta) of the contact transform, not (x, y).
  struct Box {
    double lo0, hi0, lo1, hi1;
    bool transformed = false;
  };

  explicit ModelU(Spec spec);

  /// Second-order jet at (x, y); x >= 0 required. Throws DomainError outside
  /// the family's domain (for the Legendre branch: outside the reachable
  /// image of the declared (xi, eta) box).
  Jet2 eval(double x, double y) const;

  bool in_domain(double x, double y) const;

  std::string family() const;
  const Spec& spec() const { return spec_; }

  /// Declared sampling box used by residual scans and state targeting.
  Box sample_box() const;

  /// True for the families that are exact solutions of both defining
  /// conditions C_M = 1, C_J = 1.
  bool is_fundamental() const;

 private:
  Spec spec_;
};

// ---- closed forms in the model jet ----------------------------------------

template <class S>
S casimir_mass_expr(const S& u, const S& ux, const S& uy, const S& x, const S& y) {
  const S A = u - y * uy - x * ux;
  return A * A - x * x * (ux * ux + uy * uy);
}

template <class S>
S casimir_spin_expr(const S& u, const S& ux, const S& uy, const S& /*x*/, const S& y) {
  const S A = u - y * uy;
  return S(4.0) * A * A * (ux * ux + uy * uy);
}

template <class S>
S e_c_expr(const S& u, const S& ux, const S& uy, const S& x, const S& y) {
  return (u - y * uy) * (y * ux - x * uy) / x + uy * (x * ux + y * uy);
}

template <class S>
S hessian_factor_expr(const S& u, const S& ux, const S& uy, const S& uxx, const S& uxy,
                      const S& uyy, const S& x, const S& y) {
  const S A = u - y * uy;
  const S front = A * (x * uy * uy + A * ux) / x;
  const S bracket = (ux * ux + uy * uy) * uyy + A * (uxx * uyy - uxy * uxy);
  return front * bracket;
}

/// Squared Casimir mass functional of the model point.
double casimir_mass(const Jet2& j, double x, double y);

/// Squared Casimir spin functional (in units of m^2 l^2 / 4).
double casimir_spin(const Jet2& j, double x, double y);

/// Energy-like factor appearing in the Hessian/Jacobian relation.
double e_c(const Jet2& j, double x, double y);

/// Model-dependent factor of det H; the remaining factor is kinematic.
double closed_form_hessian_factor(const Jet2& j, double x, double y);

/// det d(C_M, C_J)/d(x, y) by exact forward-mode differentiation.
double jacobian_cmcj(const ModelU& m, double x, double y);

// ---- Legendre branch closed form -------------------------------------------

struct OmegaJet {
  double w, wxi, weta, wxixi, wxieta, wetaeta;
};

/// omega and first partials; 0 < |eta| <= 1/2 required. At |eta| = 1/2 the
/// eta partial is finite only for xi = 0 (DomainError otherwise).
struct OmegaPoint {
  double w, wxi, weta;
};
OmegaPoint legendre_omega(double xi, double eta, int epsilon, int sign);

/// Full second-order jet; requires the interior |eta| < 1/2.
OmegaJet legendre_omega_jet(double xi, double eta, int epsilon, int sign);

// ---- residual scans ---------------------------------------------------------

struct ResidualReport {
  // For (x, y) families: max |C_M - 1| and max |C_J - 1| over the scan.
  // For the Legendre branch: max residuals of the two transformed conditions
  //   omega^2 - (xi^2+eta^2) omega_xi^2 = 1,
  //   4 (xi^2+eta^2) (omega - xi omega_xi)^2 = 1.
  double max_mass_residual = 0.0;
  double max_spin_residual = 0.0;
  int n = 0;
  bool transformed = false;
};

/// Low-discrepancy scan of the family's declared box. Fundamental families
/// only; throws ConfigError for GenericPoly.
ResidualReport fundamental_residuals(const ModelU& m, int n, std::uint64_t seed);

// ---- kinematics: rotating-frame chart ---------------------------------------

/// Worldline data in the laboratory chart: velocity v, frame angles and rates.
/// The attached frame is i = -sin(psi) theta_hat + cos(psi) phi_hat,
/// j = -cos(psi) theta_hat - sin(psi) phi_hat, n = i x j the radial unit
/// vector of (theta, phi); time runs at lab rate (xdot^0 = 1).
struct EulerGaugeState {
  Vec3 v{};
  double theta = 0.0, phi = 0.0, psi = 0.0;
  double theta_dot = 0.0, phi_dot = 0.0, psi_dot = 0.0;
};

struct InvariantPair {
  double P, Q, I0;  // I0 = xdot.xdot in the chart
};

struct Frame {
  Vec3 i, j, n;
};

Frame euler_frame(double theta, double phi, double psi);

/// Frame velocity (di/dtau, dj/dtau, dn/dtau) for the given angle rates.
Frame euler_frame_rates(const EulerGaugeState& s);

/// omega = i (dj.n) + j (dn.i) + n (di.j) of the attached frame.
Vec3 euler_angular_velocity(const EulerGaugeState& s);

/// P, Q in the chart. Throws ChartError on |v| >= 1, sin(theta) ~ 0, or
/// grazing incidence 1 - n.v ~ 0.
InvariantPair euler_invariants(const EulerGaugeState& s, double ell);

// ---- kinematics: covariant form ---------------------------------------------

struct TriadRates {
  FourVector a_dot, b_dot, k_dot;
};

struct CovariantKinematics {
  FourVector xdot;
  NullTriad triad;
  TriadRates rates;
};

struct BasicInvariants {
  double I0;  // xdot.xdot
  double I1;  // (k.adot)/(k.xdot)
  double I2;  // (k.bdot)/(k.xdot)
  double I3;  // a.bdot - I2 (a.xdot) + I1 (b.xdot)
};

/// No consistency checks; building block for covariant_invariants.
BasicInvariants basic_invariants(const FourVector& xdot, const NullTriad& t,
                                 const TriadRates& r);

/// Covariant P, Q, I0. Verifies that the rates are consistent with the triad
/// constraints (d/dtau of each scalar constraint ~ 0 within rate_tol) and
/// that k.xdot and xdot.xdot are usable; throws ConsistencyError/ChartError.
InvariantPair covariant_invariants(const FourVector& xdot, const NullTriad& t,
                                   const TriadRates& r, double ell, double rate_tol = 1e-9);

/// Lift of an EulerGaugeState: xdot = (1, v), a = (0, i), b = (0, j),
/// k = (1, n), with matching rates.
CovariantKinematics euler_chart(const EulerGaugeState& s);

/// Templated P, Q, I0 with the triad held fixed and velocities carrying the
/// scalar type (used for exact momentum gradients).
inline double sqrt(double x) { return std::sqrt(x); }  // parallel to sqrt(Dual)

template <class S>
struct VelocityPack {
  Vec4T<S> xdot, a_dot, b_dot, k_dot;
};

template <class S>
struct InvariantsT {
  S P, Q, I0;
};

template <class S>
InvariantsT<S> invariants_from_velocities(const NullTriad& t, const VelocityPack<S>& v,
                                          double ell) {
  const S kx = dot(v.xdot, t.k);
  const S I0 = dot(v.xdot, v.xdot);
  const S num = dot(v.b_dot, t.a) * kx + dot(v.a_dot, t.k) * dot(v.xdot, t.b) +
                dot(v.k_dot, t.b) * dot(v.xdot, t.a);
  InvariantsT<S> r;
  r.I0 = I0;
  r.P = ell * num / (sqrt(I0) * kx);
  r.Q = S(-ell * ell) * dot(v.k_dot, v.k_dot) / (kx * kx);
  return r;
}

// ---- targeted state construction ---------------------------------------------

/// Random chart state whose invariants are exactly (P, Q) = (y, x^2): the
/// transverse rates are scaled to meet Q and psi_dot solves for P. Used to
/// sample model domains with full kinematic variety.
EulerGaugeState state_with_invariants(Rng& rng, double P, double Q, double ell,
                                      double vmax = 0.6);

}  // namespace spintop
