#pragma once

#include <vector>

#include "spintop/minkowski.hpp"
#include "spintop/model.hpp"

// Canonical momenta of the covariant Lagrangian, the spin tensor, the
// Pauli-Lubanski vector, and the determinant-sum spin invariant. Together they
// form the independent second route to the Casimir closed forms: p.p and W.W
// computed here must reproduce casimir_mass / casimir_spin from the model jet.

namespace spintop {

struct CanonicalPair {
  FourVector q, pi;
};

/// Momentum p plus the internal (vector, conjugate momentum) pairs.
struct CanonicalSet {
  FourVector p;
  std::vector<CanonicalPair> pairs;
};

struct SpinData {
  Bivector M;    // sum of q_i ^ pi_i over the internal pairs
  Bivector J;    // part of M orthogonal to p in both slots
  FourVector W;  // Pauli-Lubanski vector of M and p
};

/// p_mu = -dL/dxdot^mu and pi_mu = -dL/dqdot^mu for the covariant Lagrangian
/// -m sqrt(xdot.xdot) u(sqrt(Q), P), differentiated in the ambient (
/// unconstrained) velocity components; results stored contravariant.
/// Pairs are ordered (a, b, k).
CanonicalSet canonical_momenta(const ModelU& mU, double m, double ell,
                               const CovariantKinematics& kin);

/// Spin tensor by two routes (summed closed form and projection of M), checked
/// against each other; throws DegenerateError on p.p ~ 0.
SpinData spin_tensor(const CanonicalSet& cs);

/// W^mu = -1/2 eps^{mu alpha beta gamma} M_{alpha beta} p_gamma.
FourVector pauli_lubanski(const Bivector& M, const FourVector& p);

/// W.W as the negated sum over pair indices (i, j) of 3x3 Gram-type
/// determinants in the scalar products of (p, q_i, pi_i).
double casimir_spin_detsum(const CanonicalSet& cs);

template <class S>
S casimir_spin_detsum_expr(const Vec4T<S>& p, const std::vector<Vec4T<S>>& q,
                           const std::vector<Vec4T<S>>& pi) {
  S total(0.0);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) {
      const S a00 = dot(p, p), a01 = dot(p, q[j]), a02 = dot(p, pi[j]);
      const S a10 = dot(q[i], p), a11 = dot(q[i], q[j]), a12 = dot(q[i], pi[j]);
      const S a20 = dot(pi[i], p), a21 = dot(pi[i], q[j]), a22 = dot(pi[i], pi[j]);
      total += a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
               a02 * (a10 * a21 - a11 * a20);
    }
  return S(0.0) - total;
}

/// Phase-space degree-of-freedom bookkeeping for N_v internal vectors,
/// N_I first-class and N_II second-class constraints (with the pair of
/// Casimir-fixing conditions counted inside N_I on the configuration side).
/// With single_relation the two conditions merge into one on both sides.
struct DofCount {
  int lagrangian;
  int hamiltonian;
  int discrepancy;
};
DofCount dof_count(int N_v, int N_I, int N_II, bool single_relation = false);

}  // namespace spintop
