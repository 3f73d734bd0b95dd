#pragma once

#include <complex>
#include <vector>

#include "spintop/minkowski.hpp"

// Two-component spinors and their null-flag geometry.
//
// A spinor u determines a future null vector k through the Pauli bilinears and
// a pair of unit spacelike vectors (a, b) completing the flag: the triad obeys
// k.k = a.k = b.k = a.b = 0, a.a = b.b = -1, k^0 > 0. The flag bivector
// k ^ a doubles the spinor phase: u -> e^{i chi} u rotates (a, b) about k
// by 2 chi and leaves k fixed; u -> -u leaves the whole triad fixed.

namespace spintop {

struct Spinor {
  std::complex<double> u0, u1;
};

struct NullTriad {
  FourVector k, a, b;
};

/// k^mu = u^dagger sigma^mu u (sigma^0 = identity).
FourVector k_from_spinor(const Spinor& u);

/// Flag bivector assembled from the three quadratic component relations.
/// Null for every spinor, with principal null direction k_from_spinor(u).
Bivector flag_bivector(const Spinor& u);

/// Canonical triad with a^0 = b^0 = 0. Throws DegenerateError on |u| ~ 0.
NullTriad flag_from_spinor(const Spinor& u, double eps = 1e-14);

/// (F_{mn}F^{mn}, eps^{abmn}F_{ab}F_{mn}); both vanish iff F is null.
std::pair<double, double> null_bivector_check(const Bivector& F);

/// Largest violation among the six triad scalar constraints.
double triad_residual(const NullTriad& t);

/// k -> lambda k, a -> a + mu k, b -> b + nu k; requires lambda > 0.
NullTriad gauge_transform(const NullTriad& t, double lambda, double mu, double nu);

/// a -> a cos(psi) + b sin(psi), b -> -a sin(psi) + b cos(psi).
NullTriad phase_rotate(const NullTriad& t, double psi);

/// One plotted point on the unit sphere of spatial directions.
struct SpherePoint {
  char family;    // 'k', 'a', or 'b'
  double lambda;  // 0 for the k image
  Vec3 dir;       // unit vector; (0,0,1) is the image of k = (1,0,0,1)
};

/// Images of k and of the direction families a + lambda k, b + lambda k.
/// The a and b families trace the two circles through the image of k.
std::vector<SpherePoint> riemann_sphere_data(const NullTriad& t,
                                             const std::vector<double>& lambda_samples);

}  // namespace spintop
