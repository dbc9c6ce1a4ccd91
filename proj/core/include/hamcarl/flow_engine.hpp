#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "hamcarl/orbit_models.hpp"
#include "hamcarl/poly_ham.hpp"

namespace hamcarl {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// x -> x + t * g'(f(x)) * V for a potential g(f) with f = c . u linear and
// V = Omega^{-T} c. Since f(V) = c^T Omega^{-T} c = 0, f is conserved and the
// formula is the exact time-t flow. A single ShearTerm d (c.u)^k has
// g'(s) = d k s^(k-1); several ShearTerms sharing one form commute and are
// stored as a single profile.
struct ShearFlow {
  LinearForm form;
  std::vector<double> slope;  // coefficients of g'(s) in powers of s
  Vec direction;              // V
};

// x -> exp(t w(x) A) x on a coadjoint orbit, where A generates X_u and
// w(x) = d k (c.x)^(k-1) is conserved by A (A^T c = 0); w == 1 when no weight
// term is given.
struct RotationFlow {
  AlgebraVector generator;
  Mat matrix;  // A
  std::optional<ShearTerm> weight;
};

class PrimitiveFlow {
 public:
  static PrimitiveFlow shear(const ShearTerm& term, const Mat& omega, double t);
  // All terms must share one linear form.
  static PrimitiveFlow shear(const std::vector<ShearTerm>& terms, const Mat& omega, double t);
  static PrimitiveFlow rotation(const OrbitModel& model, const AlgebraVector& generator,
                                double t, std::optional<ShearTerm> weight = std::nullopt);

  double time() const { return time_; }
  int dim() const;
  // The same flow run for time -t; exact since f (or w) is conserved.
  PrimitiveFlow inverse() const { return PrimitiveFlow(kind_, -time_); }
  bool is_shear() const { return std::holds_alternative<ShearFlow>(kind_); }
  const ShearFlow* as_shear() const { return std::get_if<ShearFlow>(&kind_); }
  const RotationFlow* as_rotation() const { return std::get_if<RotationFlow>(&kind_); }

  void apply_in_place(Vec& x) const;
  void apply_in_place(CVec& x) const;
  // Updates x and left-multiplies J by the step's Jacobian at the old x.
  void apply_with_jacobian(Vec& x, Mat& jac) const;
  Mat jacobian(const Vec& x) const;

 private:
  PrimitiveFlow(std::variant<ShearFlow, RotationFlow> k, double t) : kind_(std::move(k)), time_(t) {}
  std::variant<ShearFlow, RotationFlow> kind_;
  double time_;
};

// Finite composition of primitive flows. steps() is stored in application
// order: steps()[0] acts first, so the map is steps[M-1] o ... o steps[0].
class FlowMap {
 public:
  FlowMap() = default;
  explicit FlowMap(std::vector<PrimitiveFlow> steps_in_application_order);

  // Appends a step applied after everything already present.
  void then(PrimitiveFlow step) { steps_.push_back(std::move(step)); }
  const std::vector<PrimitiveFlow>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }

  Vec apply(const Vec& x) const;
  CVec apply(const CVec& x) const;
  Mat jacobian(const Vec& x) const;
  std::pair<Vec, Mat> apply_with_jacobian(const Vec& x) const;
  FlowMap inverse() const;

 private:
  std::vector<PrimitiveFlow> steps_;
};

// outer o inner
FlowMap compose(const FlowMap& outer, const FlowMap& inner);

struct TimeDependentField {
  std::function<Vec(double, const Vec&)> value;
  // Optional closed-form Jacobian in x; finite differences otherwise.
  std::function<Mat(double, const Vec&)> jacobian;
};

inline constexpr double kJacobianStep = 1e-6;
inline constexpr double kBlowUpNorm = 1e12;

// Central-difference Jacobian with step h.
Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x,
                               double h = kJacobianStep);
Mat field_jacobian(const TimeDependentField& field, double t, const Vec& x);

// Classical RK4 with `steps` fixed steps over [0, t]. Throws BlowUpError once
// the state is non-finite or its norm exceeds 1e12.
Vec reference_flow(const TimeDependentField& field, const Vec& x0, double t, int steps);
// RK4 over [t0, t1].
Vec reference_flow(const TimeDependentField& field, const Vec& x0, double t0, double t1,
                   int steps);

struct VariationalResult {
  Vec point;
  Mat jacobian;
};

// RK4 on the lifted system x' = X(t, x), J' = DX(t, x) J with J(0) = I.
VariationalResult variational_flow(const TimeDependentField& field, const Vec& x0, double t,
                                   int steps);
VariationalResult variational_flow(const TimeDependentField& field, const Vec& x0, double t0,
                                   double t1, int steps);

}  // namespace hamcarl
