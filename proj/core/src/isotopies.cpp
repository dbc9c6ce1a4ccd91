#include "hamcarl/isotopies.hpp"

#include <cmath>
#include <limits>

#include "hamcarl/errors.hpp"

namespace hamcarl {

RadialProfile twist_profile(const TwistParams& p, double r) {
  const double u1 = (r - p.inner) / p.rise, u2 = (p.outer - r) / p.fall;
  const double s1 = smooth_step(u1), s2 = smooth_step(u2);
  const double ds1 = smooth_step_derivative(u1) / p.rise;
  const double ds2 = -smooth_step_derivative(u2) / p.fall;
  const double dds1 = smooth_step_second_derivative(u1) / (p.rise * p.rise);
  const double dds2 = smooth_step_second_derivative(u2) / (p.fall * p.fall);
  const double b = p.height * s1 * s2;
  const double db = p.height * (ds1 * s2 + s1 * ds2);
  const double ddb = p.height * (dds1 * s2 + 2.0 * ds1 * ds2 + s1 * dds2);
  return {b * r * r, db * r * r + 2.0 * r * b, ddb * r * r + 4.0 * r * db + 2.0 * b};
}

IsotopySpec twist_isotopy(double a, double b, const TwistParams& params) {
  if (!(params.inner < params.outer) || !(params.rise > 0.0) || !(params.fall > 0.0)) {
    throw StructuralError("twist needs inner < outer and positive transition widths");
  }
  IsotopySpec iso;
  iso.name = "twist";
  iso.autonomous = true;
  iso.inner_radius = params.inner;
  iso.support_radius = params.outer;
  iso.a = a;
  iso.b = b;
  iso.potential = [params](double, const Vec& x) { return twist_profile(params, x.norm()).value; };
  iso.gradient = [params](double, const Vec& x) -> Vec {
    const double r = x.norm();
    if (r == 0.0) return Vec::Zero(x.size());
    return (twist_profile(params, r).d1 / r) * x;
  };
  iso.hessian = [params](double, const Vec& x) -> Mat {
    const auto n = x.size();
    const double r = x.norm();
    if (r == 0.0) return Mat::Zero(n, n);
    const auto prof = twist_profile(params, r);
    const Vec u = x / r;
    const Mat uu = u * u.transpose();
    return prof.d2 * uu + (prof.d1 / r) * (Mat::Identity(n, n) - uu);
  };
  return iso;
}

IsotopySpec zero_isotopy(double a, double b) {
  IsotopySpec iso;
  iso.name = "zero";
  iso.autonomous = true;
  iso.inner_radius = 0.5;
  iso.support_radius = 0.0;
  iso.a = a;
  iso.b = b;
  iso.potential = [](double, const Vec&) { return 0.0; };
  iso.gradient = [](double, const Vec& x) -> Vec { return Vec::Zero(x.size()); };
  iso.hessian = [](double, const Vec& x) -> Mat { return Mat::Zero(x.size(), x.size()); };
  return iso;
}

IsotopySpec polynomial_isotopy(PolyPotentialFamily family, double a, double b, bool autonomous) {
  IsotopySpec iso;
  iso.name = "polynomial";
  iso.autonomous = autonomous;
  iso.inner_radius = 0.0;
  iso.support_radius = std::numeric_limits<double>::infinity();
  iso.a = a;
  iso.b = b;
  iso.polynomial = family;
  iso.potential = [family](double t, const Vec& x) { return family(t)(x); };
  iso.gradient = [family](double t, const Vec& x) -> Vec {
    const Poly p = family(t);
    Vec g(p.nvars());
    for (int i = 0; i < p.nvars(); ++i) g[i] = p.derivative(i)(x);
    return g;
  };
  iso.hessian = [family](double t, const Vec& x) -> Mat {
    const Poly p = family(t);
    const int n = p.nvars();
    Mat h(n, n);
    for (int i = 0; i < n; ++i) {
      const Poly di = p.derivative(i);
      for (int j = 0; j < n; ++j) h(i, j) = di.derivative(j)(x);
    }
    return h;
  };
  return iso;
}

Vec twist_exact_flow(const TwistParams& p, const Vec& x, double t) {
  const double r = x.norm();
  if (r == 0.0) return x;
  const double angle = -t * twist_profile(p, r).d1 / r;
  const double c = std::cos(angle), s = std::sin(angle);
  Vec y(2);
  y << c * x[0] - s * x[1], s * x[0] + c * x[1];
  return y;
}

TimeDependentField sin_quadratic_field() {
  TimeDependentField f;
  f.value = [](double t, const Vec& x) -> Vec {
    Vec v(2);
    v << 0.0, -2.0 * std::sin(t) * x[0];
    return v;
  };
  f.jacobian = [](double t, const Vec&) -> Mat {
    Mat j = Mat::Zero(2, 2);
    j(1, 0) = -2.0 * std::sin(t);
    return j;
  };
  return f;
}

PolyPotentialFamily sin_quadratic_potential() {
  return [](double t) { return Poly::monomial({2, 0}, std::sin(t)); };
}

TimeDependentField polynomial_hamiltonian_field(const Poly& p) {
  const PolyField x = hamiltonian_field_flat(p, standard_symplectic(p.nvars()));
  const int n = p.nvars();
  std::vector<PolyField> jac;
  for (const auto& comp : x) {
    PolyField row;
    for (int j = 0; j < n; ++j) row.push_back(comp.derivative(j));
    jac.push_back(std::move(row));
  }
  TimeDependentField f;
  f.value = [x](double, const Vec& y) { return eval_field(x, y); };
  f.jacobian = [jac, n](double, const Vec& y) {
    Mat out(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out(i, j) = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](y);
    }
    return out;
  };
  return f;
}

}  // namespace hamcarl
