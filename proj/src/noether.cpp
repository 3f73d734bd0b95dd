#include "spintop/noether.hpp"

#include <cmath>

#include "spintop/dual.hpp"
#include "spintop/errors.hpp"

namespace spintop {
namespace {

using D16 = Dual<double, 16>;

Vec4T<D16> seed4(const FourVector& v, int base) {
  Vec4T<D16> r;
  for (int mu = 0; mu < 4; ++mu) r[mu] = D16::seeded(v[mu], base + mu);
  return r;
}

/// Lowered gradient -dL/dv^mu raised back to contravariant storage.
FourVector momentum_from_block(const D16& L, int base) {
  FourVector p;
  p[0] = -L.d[static_cast<std::size_t>(base)];
  for (int i = 1; i < 4; ++i) p[i] = L.d[static_cast<std::size_t>(base + i)];
  return p;
}

}  // namespace

CanonicalSet canonical_momenta(const ModelU& mU, double m, double ell,
                               const CovariantKinematics& kin) {
  if (!(m > 0.0)) throw DomainError("m must be positive");
  // validates triad, rates, k.xdot and timelike xdot
  (void)covariant_invariants(kin.xdot, kin.triad, kin.rates, ell);

  VelocityPack<D16> v;
  v.xdot = seed4(kin.xdot, 0);
  v.a_dot = seed4(kin.rates.a_dot, 4);
  v.b_dot = seed4(kin.rates.b_dot, 8);
  v.k_dot = seed4(kin.rates.k_dot, 12);
  const InvariantsT<D16> iv = invariants_from_velocities<D16>(kin.triad, v, ell);

  const D16 x = sqrt(iv.Q);
  const D16& y = iv.P;
  const Jet2 jet = mU.eval(x.v, y.v);
  D16 u(jet.u);
  for (int d = 0; d < 16; ++d) u.d[d] = jet.ux * x.d[d] + jet.uy * y.d[d];

  const D16 L = D16(-m) * sqrt(iv.I0) * u;

  CanonicalSet cs;
  cs.p = momentum_from_block(L, 0);
  cs.pairs = {{kin.triad.a, momentum_from_block(L, 4)},
              {kin.triad.b, momentum_from_block(L, 8)},
              {kin.triad.k, momentum_from_block(L, 12)}};
  return cs;
}

SpinData spin_tensor(const CanonicalSet& cs) {
  const double p2 = dot(cs.p, cs.p);
  double scale = std::abs(p2);
  if (scale < 1e-12) throw DegenerateError("spin tensor needs p.p away from zero");

  SpinData out;
  for (const CanonicalPair& pr : cs.pairs) out.M = out.M + wedge(pr.q, pr.pi);

  // route 1: the summed closed form, p^2 J = sum_i [p^2 q^pi + (p.pi) p^q + (p.q) pi^p]
  Bivector J1;
  for (const CanonicalPair& pr : cs.pairs) {
    const double ppi = dot(cs.p, pr.pi);
    const double pq = dot(cs.p, pr.q);
    J1 = J1 + wedge(pr.q, pr.pi) + (ppi / p2) * wedge(cs.p, pr.q) + (pq / p2) * wedge(pr.pi, cs.p);
  }

  // route 2: project M orthogonally to p in both slots
  Bivector J2;
  const FourVector pl = lower(cs.p);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      double acc = 0.0;
      for (int al = 0; al < 4; ++al)
        for (int be = 0; be < 4; ++be) {
          const double hma = (mu == al ? 1.0 : 0.0) - cs.p[mu] * pl[al] / p2;
          const double hnb = (nu == be ? 1.0 : 0.0) - cs.p[nu] * pl[be] / p2;
          acc += hma * hnb * out.M.comp(al, be);
        }
      J2.f[static_cast<std::size_t>(Bivector::slot(mu, nu))] = acc;
    }

  double mscale = 0.0, diff = 0.0;
  for (int s = 0; s < 6; ++s) {
    mscale = std::max(mscale, std::abs(out.M.f[s]));
    diff = std::max(diff, std::abs(J1.f[s] - J2.f[s]));
  }
  if (diff > 1e-9 * (1.0 + mscale))
    throw ConsistencyError("spin tensor routes disagree");

  out.J = J2;
  out.W = pauli_lubanski(out.M, cs.p);
  return out;
}

FourVector pauli_lubanski(const Bivector& M, const FourVector& p) {
  const FourVector pl = lower(p);
  FourVector W{};
  for (int mu = 0; mu < 4; ++mu) {
    double acc = 0.0;
    for (int al = 0; al < 4; ++al)
      for (int be = 0; be < 4; ++be)
        for (int ga = 0; ga < 4; ++ga) {
          const int sgn = levi_civita(mu, al, be, ga);
          if (sgn != 0) acc += sgn * M.comp_lower(al, be) * pl[ga];
        }
    W[mu] = -0.5 * acc;
  }
  return W;
}

double casimir_spin_detsum(const CanonicalSet& cs) {
  std::vector<FourVector> q, pi;
  q.reserve(cs.pairs.size());
  pi.reserve(cs.pairs.size());
  for (const CanonicalPair& pr : cs.pairs) {
    q.push_back(pr.q);
    pi.push_back(pr.pi);
  }
  return casimir_spin_detsum_expr<double>(cs.p, q, pi);
}

DofCount dof_count(int N_v, int N_I, int N_II, bool single_relation) {
  if (N_v < 0 || N_I < 0 || N_II < 0) throw ConfigError("degree counts must be nonnegative");
  if (N_II % 2 != 0) throw ConfigError("second-class constraints come in pairs");
  const int conditions = single_relation ? 1 : 2;
  const int n_first = single_relation ? N_I - 1 : N_I;
  if (n_first < 0) throw ConfigError("single-relation replacement needs N_I >= 1");
  DofCount out;
  out.lagrangian = 3 + 4 * N_v - (n_first + N_II / 2);
  const int twice = 8 * (1 + N_v) - 2 * (conditions + n_first) - N_II;
  if (twice % 2 != 0) throw ConfigError("phase-space dimension must come out even");
  out.hamiltonian = twice / 2;
  out.discrepancy = out.lagrangian - out.hamiltonian;
  return out;
}

}  // namespace spintop
