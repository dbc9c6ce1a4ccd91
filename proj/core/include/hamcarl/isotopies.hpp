#pragma once

#include "hamcarl/al_approx.hpp"

namespace hamcarl {

// Radial twist P(x) = bump(r) r^2 with
//   bump(r) = height * s((r - 0.5) / rise) * s((3 - r) / fall),
// s the smooth step, so the support is 0.5 <= r <= 3. Its flow rotates each
// circle |x| = r by the angle -t P'(r) / r. The rise is wider than the
// support so the onset stays gentle; polynomial fits of a steep onset stall
// between degrees 10 and 12.
struct TwistParams {
  double height = 0.03;
  double rise = 5.5;
  double fall = 0.5;
  double inner = 0.5;
  double outer = 3.0;
};

// bump(r) r^2 and its first two radial derivatives.
struct RadialProfile {
  double value, d1, d2;
};
RadialProfile twist_profile(const TwistParams& p, double r);

IsotopySpec twist_isotopy(double a = 2.0, double b = 0.4, const TwistParams& params = {});
IsotopySpec zero_isotopy(double a = 2.0, double b = 0.4);
// Exact polynomial family; no fitting and no vanishing ball (inner radius 0).
IsotopySpec polynomial_isotopy(PolyPotentialFamily family, double a = 2.0, double b = 0.4,
                               bool autonomous = false);

// Closed-form time-t flow of the twist.
Vec twist_exact_flow(const TwistParams& p, const Vec& x, double t);

// P(t, x, y) = sin(t) x^2 on R^2 with dx ^ dy: X = (0, -2 sin(t) x).
TimeDependentField sin_quadratic_field();
PolyPotentialFamily sin_quadratic_potential();

// Hamiltonian field of an autonomous polynomial potential on (R^2n, standard).
TimeDependentField polynomial_hamiltonian_field(const Poly& p);

}  // namespace hamcarl
