#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hamcarl/lie_core.hpp"

namespace hamcarl {

using cplx = std::complex<double>;
template <class S>
using Vec3T = Eigen::Matrix<S, 3, 1>;
using Vec3 = Vec3T<double>;
using CVec3 = Vec3T<cplx>;

// Global numerical thresholds for orbit membership and tangency.
inline constexpr double kMembershipTol = 1e-10;
inline constexpr double kTangencyTol = 1e-9;

enum class OrbitFamily { HeisenbergFlat, Sphere, Hyperboloid };

// One of three coadjoint orbits in R^3 (and its complexification in C^3):
//   HeisenbergFlat  x3 = level, level != 0 (form dx1^dx2 / x3)
//   Sphere          x1^2 + x2^2 + x3^2 = R^2 under SO(3)
//   Hyperboloid     x3^2 - x1^2 - x2^2 = R, x3 > 0 under SL(2,R)
class OrbitModel {
 public:
  static OrbitModel heisenberg_flat(double level);
  static OrbitModel sphere(double radius);
  static OrbitModel hyperboloid(double level);
  // "heisenberg:1.0", "sphere:1.0" or "hyperboloid:1.0".
  static OrbitModel parse(std::string_view spec);

  OrbitFamily family() const { return family_; }
  double level() const { return level_; }
  int ambient_dim() const { return 3; }
  const LieAlgebra& algebra() const { return algebra_; }
  std::string name() const;

  template <class S>
  S invariant(const Vec3T<S>& x) const {
    switch (family_) {
      case OrbitFamily::HeisenbergFlat:
        return x[2] - S(level_);
      case OrbitFamily::Sphere:
        return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - S(level_ * level_);
      case OrbitFamily::Hyperboloid:
        return x[2] * x[2] - x[0] * x[0] - x[1] * x[1] - S(level_);
    }
    return S(0);
  }

  template <class S>
  Vec3T<S> invariant_gradient(const Vec3T<S>& x) const {
    switch (family_) {
      case OrbitFamily::HeisenbergFlat:
        return Vec3T<S>(S(0), S(0), S(1));
      case OrbitFamily::Sphere:
        return S(2) * x;
      case OrbitFamily::Hyperboloid:
        return Vec3T<S>(-S(2) * x[0], -S(2) * x[1], S(2) * x[2]);
    }
    return Vec3T<S>::Zero();
  }

  // Weights g with omega(t1, t2) = (t1 x t2)_k / g_k for every k with g_k != 0.
  template <class S>
  Vec3T<S> chart_weights(const Vec3T<S>& x) const {
    switch (family_) {
      case OrbitFamily::HeisenbergFlat:
        return Vec3T<S>(S(0), S(0), x[2]);
      case OrbitFamily::Sphere:
        return x;
      case OrbitFamily::Hyperboloid:
        return Vec3T<S>(x[0], x[1], -x[2]);
    }
    return Vec3T<S>::Zero();
  }

 private:
  OrbitModel(OrbitFamily family, double level, LieAlgebra algebra)
      : family_(family), level_(level), algebra_(std::move(algebra)) {}

  OrbitFamily family_;
  double level_;
  LieAlgebra algebra_;
};

// Point on a real orbit or on its complexification; construction validates
// membership.
template <class S>
class BasicOrbitPoint {
 public:
  static BasicOrbitPoint on(const OrbitModel& model, const Vec3T<S>& coords);
  const Vec3T<S>& coords() const { return coords_; }
  static constexpr bool is_complex = !std::is_same_v<S, double>;

 private:
  explicit BasicOrbitPoint(const Vec3T<S>& c) : coords_(c) {}
  Vec3T<S> coords_;
};

using OrbitPoint = BasicOrbitPoint<double>;
using ComplexOrbitPoint = BasicOrbitPoint<cplx>;

template <class S>
class BasicTangentPair {
 public:
  static BasicTangentPair at(const OrbitModel& model,
                             const BasicOrbitPoint<S>& base,
                             const Vec3T<S>& vector);
  const BasicOrbitPoint<S>& base() const { return base_; }
  const Vec3T<S>& vector() const { return vector_; }

 private:
  BasicTangentPair(const BasicOrbitPoint<S>& b, const Vec3T<S>& v)
      : base_(b), vector_(v) {}
  BasicOrbitPoint<S> base_;
  Vec3T<S> vector_;
};

using TangentPair = BasicTangentPair<double>;
using ComplexTangentPair = BasicTangentPair<cplx>;

// X_u(xi) as an embedded tangent pair.
TangentPair orbit_tangent(const OrbitModel& model, const OrbitPoint& xi,
                          const AlgebraVector& u);

// KKS form in the coordinate chart with the largest denominator.
double kks_form(const OrbitModel& model, const OrbitPoint& xi,
                const TangentPair& t1, const TangentPair& t2);
cplx kks_form(const OrbitModel& model, const ComplexOrbitPoint& xi,
              const ComplexTangentPair& t1, const ComplexTangentPair& t2);

// KKS form through the Lie bracket: each tangent is pulled back to an algebra
// representative u with X_u(xi) = t, and the value is xi([u, v]).
double kks_form_lie(const OrbitModel& model, const OrbitPoint& xi,
                    const TangentPair& t1, const TangentPair& t2);

struct KksReport {
  int samples = 0;
  double well_defined_residual = 0.0;
  double min_abs_det = 0.0;
  double closedness_residual = 0.0;
  bool well_defined_ok = false;
  bool nondegenerate_ok = false;
  bool closed_ok = false;
  bool all_ok() const { return well_defined_ok && nondegenerate_ok && closed_ok; }
};

// Seeded sampling of the three KKS axioms with the thresholds 1e-9 (well
// definedness), 1e-8 (|det| of the tangent Gram matrix) and 1e-7 (closedness,
// central differences with h = 1e-4).
KksReport check_kks_axioms(const OrbitModel& model, int sample_count,
                           std::uint64_t seed);

// max |du(X_v)(xi) - omega(X_u, X_v)(xi)| over sampled xi and v.
double potential_check(const OrbitModel& model, const AlgebraVector& u,
                       int sample_count, std::uint64_t seed = 0);

// Componentwise conjugation on the complexified orbit.
ComplexOrbitPoint tau(const OrbitModel& model, const ComplexOrbitPoint& z);

// Seeded sample points: uniform directions on the sphere, (x1, x2) uniform in
// [-2, 2]^2 for the other real families, and (z1, z2) uniform in the unit
// polydisc-box of C^2 with z3 on the principal branch for complex points.
std::vector<OrbitPoint> sample_orbit_points(const OrbitModel& model, int count,
                                            std::uint64_t seed);
std::vector<ComplexOrbitPoint> sample_complex_orbit_points(
    const OrbitModel& model, int count, std::uint64_t seed);

}  // namespace hamcarl
