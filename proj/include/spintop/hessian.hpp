#pragma once

#include <array>
#include <vector>

#include "spintop/model.hpp"

// Velocity Hessian of the reduced Lagrangian L = -m sqrt(1 - v^2) u(sqrt(Q), P)
// in the rotating-frame chart. Rank deficiency of H = d^2L/dqdot^2 is the
// degeneracy diagnostic separating the fundamental families (rank <= 5) from
// generic models (rank 6).

namespace spintop {

/// Chart point: q = (x1, x2, x3, theta, phi, psi), qdot = (v, angle rates).
/// The Lagrangian is independent of the spatial position block.
struct ReducedState {
  std::array<double, 6> q{};
  std::array<double, 6> qdot{};
};

EulerGaugeState chart_state(const ReducedState& s);

/// Inverse packing of chart_state; the position block is zero.
ReducedState reduced_state(const EulerGaugeState& e);

/// Finite-difference plan. Fourth-order stencils are evaluated at h and h/2
/// and Richardson-combined; the pre-combination disagreement is the error
/// certificate and must stay below rich_tol relative to the matrix scale.
struct StepPolicy {
  double h_abs = 6e-3;   // absolute step floor per coordinate
  double h_rel = 6e-3;   // relative scaling with |qdot_i|
  double rich_tol = 1e-5;
  double tau_rank = 1e-7;  // rank threshold relative to sigma_max
  double q_min = 1e-6;     // smallest admissible Q at the base state
};

struct HessianReport {
  std::array<std::array<double, 6>, 6> H{};
  double det = 0.0;
  std::array<double, 6> singular_values{};  // descending
  int rank = 0;
  double threshold = 0.0;  // absolute cutoff tau_rank * sigma_max
};

double reduced_lagrangian(const ModelU& mU, double m, double ell, const ReducedState& s);

HessianReport hessian_matrix(const ModelU& mU, double m, double ell, const ReducedState& s,
                             const StepPolicy& policy = {});

/// det H divided by the model's closed-form factor; the quotient is a purely
/// kinematic number shared by all models at the same chart state.
double kinematic_factor_estimate(const ModelU& mU, double m, double ell, const ReducedState& s,
                                 const StepPolicy& policy = {});

/// max_{i,j} |r_i - r_j| / |r_i| over the per-model quotients r_i above.
/// Requires >= 3 models, each with a nonvanishing closed-form factor.
double proportionality_probe(const std::vector<ModelU>& models, double m, double ell,
                             const ReducedState& s, const StepPolicy& policy = {});

/// Kinematic quotient recovered through the Jacobian route instead:
/// det H * 16 x^2 E_C / (jacobian_cmcj * ((u - y u_y) u_x + x u_y^2)).
/// Agrees with kinematic_factor_estimate wherever E_C != 0.
double jacobian_relation_ratio(const ModelU& mU, double m, double ell, const ReducedState& s,
                               const StepPolicy& policy = {});

/// One-sided Jacobi singular values, descending.
std::array<double, 6> singular_values_6(const std::array<std::array<double, 6>, 6>& A);

/// Determinant by partially pivoted LU.
double det_6(const std::array<std::array<double, 6>, 6>& A);

}  // namespace spintop
