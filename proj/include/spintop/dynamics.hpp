#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "spintop/dual.hpp"
#include "spintop/minkowski.hpp"
#include "spintop/sampling.hpp"

// Constrained Hamiltonian flow of the single-null-vector system on the surface
//   p.p = m^2, k.k = 0, k.pi = 0, pi.pi = -1/4 m^2 l^2, p.pi = 0, k.p = m
// with two arbitrary gauge functions c_t, c_phi multiplying the first-class
// part. The flow is
//   xdot = 2 c_t p - 1/2 l^2 m^3 c_phi k,   pdot = 0,
//   kdot = 2 m^2 c_phi pi,                  pidot = 1/2 l^2 m^3 c_phi (p - m k).
// Different c_phi choices yield genuinely different worldlines from one
// initial state; all of them stay on a tube of radius l/2 about the momentum
// axis in the center-of-momentum frame.

namespace spintop {

struct PhasePoint {
  FourVector x, p, k, pi;
};

struct PhaseDerivs {
  FourVector xdot, pdot, kdot, pidot;
};

// ---- gauge functions of tau -------------------------------------------------

struct GaugeConst {
  double c = 0.0;
  bool operator==(const GaugeConst&) const = default;
};
struct GaugePoly {
  std::vector<double> coeff;  // c(tau) = sum coeff[i] tau^i
  bool operator==(const GaugePoly&) const = default;
};
struct GaugeSinusoid {
  double amplitude = 0.0, frequency = 0.0, phase = 0.0, offset = 0.0;
  bool operator==(const GaugeSinusoid&) const = default;
};
using GaugeSpec = std::variant<GaugeConst, GaugePoly, GaugeSinusoid>;

double gauge_value(const GaugeSpec& g, double tau);
double gauge_derivative(const GaugeSpec& g, double tau);
GaugeSpec scale_gauge(const GaugeSpec& g, double factor);

struct GaugeFunctions {
  GaugeSpec c_t, c_phi;
};

// ---- surface bookkeeping ------------------------------------------------------

/// Residuals in fixed order: (pp - m^2, kk, k.pi, pi.pi + 1/4 m^2 l^2, p.pi, k.p - m).
std::array<double, 6> constraint_residuals(const PhasePoint& pt, double m, double ell);

/// Largest residual scaled by the natural size of each constraint.
double surface_violation(const PhasePoint& pt, double m, double ell);

/// Newton projection of (k, pi) back onto the five (k, pi)-constraints with p
/// held fixed; x untouched. Throws NumericsError if it fails to converge.
void project_to_surface(PhasePoint* pt, double m, double ell);

/// Random point exactly on the surface: built in the center-of-momentum frame
/// and pushed out by a random boost and rotation.
PhasePoint random_surface_point(Rng& rng, double m, double ell);

/// Equations of motion. Validates the surface to 1e-6 scaled.
PhaseDerivs hamiltonian_rhs(const PhasePoint& pt, double c_t, double c_phi, double m, double ell);

// ---- integration ---------------------------------------------------------------

struct Span {
  double t0 = 0.0, t1 = 1.0;
};
struct Tolerances {
  double rtol = 1e-10, atol = 1e-12;
};

struct Sample {
  double tau;
  PhasePoint pt;
  double t = 0.0;      // center-of-momentum clock, integral of (xdot.p)/m
  double phi = 0.0;    // phase angle, integral of 2 (kdot.pi)/(m l)
  double phase = 0.0;  // integral of kdot.pi + xdot.p (= m t + 1/2 m l phi)
  std::array<double, 6> residuals{};
};

struct Trajectory {
  std::vector<Sample> samples;
  GaugeFunctions gauge;
  long n_steps = 0;
  long n_rejected = 0;
  double max_residual = 0.0;  // scaled, over all accepted samples
};

/// Embedded 5(4) pair with per-step (k, pi) projection; samples at
/// `samples`+1 equally spaced tau values including both ends.
Trajectory integrate(const PhasePoint& pt0, const GaugeFunctions& g, double m, double ell,
                     Span span, Tolerances tol = {}, int samples = 200);

// ---- observables ------------------------------------------------------------------

struct ObsSample {
  double tau, t, phi;
  double Psi;     // artanh((l/2)|dphi/dt|); +inf at the light-like boundary
  bool has_rc;    // transverse motion present
  double R_c;     // curvature radius of the transverse orbit (valid if has_rc)
  double axis_distance;  // center-of-momentum distance from the tube axis
};

struct ObservableSeries {
  std::vector<ObsSample> rows;
  bool clock_warning = false;  // some sample had xdot.p <= 0
};

ObservableSeries observables(const Trajectory& tr, double m, double ell);

/// Max center-of-momentum distance between the two worldlines compared at
/// equal values of the t clock over the common span.
double worldline_separation(const Trajectory& a, const Trajectory& b, double m, double ell);

// ---- tube -------------------------------------------------------------------------

struct TubeReport {
  bool distinct_worldlines = false;
  double max_separation = 0.0;
  double min_separation = 0.0;        // over member pairs
  double separation_threshold = 0.0;  // distinctness cutoff used
  double axis_distance_max_dev = 0.0; // max |d - l/2| over every sample
};

struct TubeResult {
  std::vector<Trajectory> members;
  TubeReport report;
};

/// One trajectory per gauge; all gauges must share the same c_t.
TubeResult tube_sample(const PhasePoint& pt0, const std::vector<GaugeFunctions>& gauges, double m,
                       double ell, Span span, Tolerances tol = {}, int samples = 200);

// ---- gauge presets -----------------------------------------------------------------

enum class ZitterPreset { A, B };  // A: c_t = 0; B: c_t = m^2 l^2 c_phi

struct ZitterResult {
  Trajectory traj;
  std::vector<double> xdot2;  // xdot.xdot at each sample
  double max_abs_xdot2 = 0.0;
  bool clock_reversal = false;
};

ZitterResult zitter_preset(const PhasePoint& pt0, double m, double ell, ZitterPreset which,
                           const GaugeSpec& c_phi, Span span, Tolerances tol = {},
                           int samples = 200);

// ---- brackets ------------------------------------------------------------------------

using PhaseDual = Dual<double, 16>;

/// One evaluation point with every phase component seeded: x in directions
/// 0..3, p in 4..7, k in 8..11, pi in 12..15.
struct PhaseDuals {
  Vec4T<PhaseDual> x, p, k, pi;
};

using Observable = std::function<PhaseDual(const PhaseDuals&)>;

PhaseDuals seed_phase(const PhasePoint& pt);

/// Canonical bracket over the pairs (x, p) and (k, pi) with
/// {x^mu, p_nu} = {k^mu, pi_nu} = delta^mu_nu.
double poisson_bracket(const Observable& U, const Observable& V, const PhasePoint& pt);

/// Poisson bracket corrected by the four second-class functions
/// (kk, k.pi, p.pi, k.p - m); requires pt on the surface.
double dirac_bracket(const Observable& U, const Observable& V, const PhasePoint& pt, double m);

struct FirstClassReport {
  double max_psi1 = 0.0;  // |{pp - m^2, s}| over basic scalars s
  double max_psi2 = 0.0;  // |{WW + 1/4 m^4 l^2, s}|
};

/// Brackets of the two fundamental-condition constraints with every basic
/// scalar of the (p, q_i, pi_i) algebra at random (unconstrained) points.
FirstClassReport poisson_first_class_check(int N_v, std::uint64_t seed);

}  // namespace spintop
