#include "hamcarl/flow_engine.hpp"

#include <cmath>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "hamcarl/errors.hpp"

namespace hamcarl {

namespace {

template <class S>
S horner(const std::vector<double>& c, S s) {
  S v = S(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + S(*it);
  return v;
}

std::vector<double> derivative_coeffs(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  return d;
}

template <class S>
S weight_value(const std::optional<ShearTerm>& w, const Eigen::Matrix<S, Eigen::Dynamic, 1>& x) {
  if (!w) return S(1);
  const S f = w->form(x);
  S p = S(1);
  for (int e = 1; e < w->power; ++e) p *= f;
  return S(w->scale * w->power) * p;
}

void guard(const Vec& x, double time) {
  if (!x.allFinite() || x.norm() > kBlowUpNorm) {
    std::ostringstream msg;
    msg << "trajectory blew up after t = " << time;
    throw BlowUpError(msg.str(), time);
  }
}

}  // namespace

PrimitiveFlow PrimitiveFlow::shear(const ShearTerm& term, const Mat& omega, double t) {
  return shear(std::vector<ShearTerm>{term}, omega, t);
}

PrimitiveFlow PrimitiveFlow::shear(const std::vector<ShearTerm>& terms, const Mat& omega,
                                   double t) {
  if (terms.empty()) throw StructuralError("shear needs at least one term");
  const Vec& c = terms.front().form.coeffs;
  if (c.size() != omega.rows()) throw StructuralError("shear form and symplectic matrix differ in size");
  if (c.isZero(0.0)) throw StructuralError("shear generator form must be nonzero");
  ShearFlow s;
  s.form = terms.front().form;
  s.direction = hamiltonian_matrix(omega) * c;
  for (const auto& term : terms) {
    if (term.power < 1) throw StructuralError("shear power must be >= 1");
    if (term.form.coeffs != c) throw StructuralError("merged shear terms must share one form");
    const auto k = static_cast<std::size_t>(term.power);
    if (s.slope.size() < k) s.slope.resize(k, 0.0);
    s.slope[k - 1] += term.scale * term.power;
  }
  return PrimitiveFlow(std::move(s), t);
}

PrimitiveFlow PrimitiveFlow::rotation(const OrbitModel& model, const AlgebraVector& generator,
                                      double t, std::optional<ShearTerm> weight) {
  RotationFlow r;
  r.generator = generator;
  r.matrix = coadjoint_generator(model.algebra(), generator);
  if (weight) {
    if (weight->power < 1) throw StructuralError("rotation weight power must be >= 1");
    if (weight->form.coeffs.size() != 3) throw StructuralError("rotation weight form must have length 3");
    const double drift = (r.matrix.transpose() * weight->form.coeffs).norm();
    if (drift > 1e-12 * std::max(1.0, weight->form.coeffs.norm())) {
      throw StructuralError("rotation weight form is not conserved by the generator");
    }
  }
  r.weight = std::move(weight);
  return PrimitiveFlow(std::move(r), t);
}

int PrimitiveFlow::dim() const {
  if (const auto* s = as_shear()) return static_cast<int>(s->direction.size());
  return 3;
}

void PrimitiveFlow::apply_in_place(Vec& x) const {
  if (const auto* s = as_shear()) {
    const double f = s->form(x);
    x += (time_ * horner(s->slope, f)) * s->direction;
    return;
  }
  const auto& r = std::get<RotationFlow>(kind_);
  const double w = weight_value(r.weight, x);
  x = matrix_exp((time_ * w) * r.matrix) * x;
}

void PrimitiveFlow::apply_in_place(CVec& x) const {
  if (const auto* s = as_shear()) {
    const cplx f = s->form(x);
    const cplx g = time_ * horner(s->slope, f);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += g * s->direction[i];
    return;
  }
  const auto& r = std::get<RotationFlow>(kind_);
  const cplx w = weight_value(r.weight, x);
  const CMat a = (time_ * w) * r.matrix.cast<cplx>();
  x = a.exp() * x;
}

Mat PrimitiveFlow::jacobian(const Vec& x) const {
  const auto n = x.size();
  if (const auto* s = as_shear()) {
    const double f = s->form(x);
    const double curv = time_ * horner(derivative_coeffs(s->slope), f);
    return Mat::Identity(n, n) + curv * s->direction * s->form.coeffs.transpose();
  }
  const auto& r = std::get<RotationFlow>(kind_);
  const double w = weight_value(r.weight, x);
  const Mat e = matrix_exp((time_ * w) * r.matrix);
  Mat j = e;
  if (r.weight && r.weight->power >= 2) {
    const double f = r.weight->form(x);
    const int k = r.weight->power;
    const double dw = r.weight->scale * k * (k - 1) * std::pow(f, k - 2);
    j += (time_ * dw) * (r.matrix * e * x) * r.weight->form.coeffs.transpose();
  }
  return j;
}

void PrimitiveFlow::apply_with_jacobian(Vec& x, Mat& jac) const {
  jac = jacobian(x) * jac;
  apply_in_place(x);
}

FlowMap::FlowMap(std::vector<PrimitiveFlow> steps) : steps_(std::move(steps)) {}

Vec FlowMap::apply(const Vec& x) const {
  Vec y = x;
  for (const auto& s : steps_) s.apply_in_place(y);
  return y;
}

CVec FlowMap::apply(const CVec& x) const {
  CVec y = x;
  for (const auto& s : steps_) s.apply_in_place(y);
  return y;
}

Mat FlowMap::jacobian(const Vec& x) const { return apply_with_jacobian(x).second; }

std::pair<Vec, Mat> FlowMap::apply_with_jacobian(const Vec& x) const {
  Vec y = x;
  Mat j = Mat::Identity(x.size(), x.size());
  for (const auto& s : steps_) s.apply_with_jacobian(y, j);
  return {y, j};
}

FlowMap FlowMap::inverse() const {
  std::vector<PrimitiveFlow> out;
  out.reserve(steps_.size());
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) out.push_back(it->inverse());
  return FlowMap(std::move(out));
}

FlowMap compose(const FlowMap& outer, const FlowMap& inner) {
  std::vector<PrimitiveFlow> steps = inner.steps();
  steps.insert(steps.end(), outer.steps().begin(), outer.steps().end());
  return FlowMap(std::move(steps));
}

Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
  const auto n = x.size();
  Mat j;
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const Vec d = (f(xp) - f(xm)) / (2.0 * h);
    if (i == 0) j.resize(d.size(), n);
    j.col(i) = d;
  }
  return j;
}

Mat field_jacobian(const TimeDependentField& field, double t, const Vec& x) {
  if (field.jacobian) return field.jacobian(t, x);
  return finite_difference_jacobian([&](const Vec& y) { return field.value(t, y); }, x);
}

Vec reference_flow(const TimeDependentField& field, const Vec& x0, double t, int steps) {
  return reference_flow(field, x0, 0.0, t, steps);
}

Vec reference_flow(const TimeDependentField& field, const Vec& x0, double t0, double t1,
                   int steps) {
  if (steps < 1) throw StructuralError("reference_flow needs steps >= 1");
  const double h = (t1 - t0) / steps;
  Vec x = x0;
  guard(x, t0);
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const Vec k1 = field.value(t, x);
    const Vec k2 = field.value(t + 0.5 * h, x + 0.5 * h * k1);
    const Vec k3 = field.value(t + 0.5 * h, x + 0.5 * h * k2);
    const Vec k4 = field.value(t + h, x + h * k3);
    Vec next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    guard(next, t);
    x = std::move(next);
  }
  return x;
}

VariationalResult variational_flow(const TimeDependentField& field, const Vec& x0, double t,
                                   int steps) {
  return variational_flow(field, x0, 0.0, t, steps);
}

VariationalResult variational_flow(const TimeDependentField& field, const Vec& x0, double t0,
                                   double t1, int steps) {
  if (steps < 1) throw StructuralError("variational_flow needs steps >= 1");
  const double h = (t1 - t0) / steps;
  Vec x = x0;
  Mat j = Mat::Identity(x0.size(), x0.size());
  guard(x, t0);
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const Vec k1 = field.value(t, x);
    const Mat l1 = field_jacobian(field, t, x) * j;
    const Vec x2 = x + 0.5 * h * k1;
    const Vec k2 = field.value(t + 0.5 * h, x2);
    const Mat l2 = field_jacobian(field, t + 0.5 * h, x2) * (j + 0.5 * h * l1);
    const Vec x3 = x + 0.5 * h * k2;
    const Vec k3 = field.value(t + 0.5 * h, x3);
    const Mat l3 = field_jacobian(field, t + 0.5 * h, x3) * (j + 0.5 * h * l2);
    const Vec x4 = x + h * k3;
    const Vec k4 = field.value(t + h, x4);
    const Mat l4 = field_jacobian(field, t + h, x4) * (j + h * l3);
    Vec next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    guard(next, t);
    if (!j.allFinite()) throw BlowUpError("variational Jacobian became non-finite", t);
    x = std::move(next);
    j += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
  }
  return {x, j};
}

}  // namespace hamcarl
