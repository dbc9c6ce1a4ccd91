#pragma once

#include <functional>
#include <vector>

#include "hamcarl/poly.hpp"

namespace hamcarl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// f(u) = c . u
struct LinearForm {
  Vec coeffs;
  template <class X>
  auto operator()(const X& x) const {
    using S = std::decay_t<decltype(x[0])>;
    S s = S(0);
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) s += coeffs[i] * x[i];
    return s;
  }
};

// The potential scale * (form . u)^power.
struct ShearTerm {
  double scale = 0.0;
  LinearForm form;
  int power = 1;
};

// One term b * (c . u)^d of an exact polarization identity, with rational b
// stored as num/den and an integer form c.
struct WaringTerm {
  long long num = 0;
  long long den = 1;
  std::vector<long long> form;
  double coefficient() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// u^alpha = sum_k b_k (c_k . u)^|alpha| by the 2^(d-1)-term symmetric
// polarization identity (first sign fixed to +1), with proportional forms
// merged. Forms are normalized to coprime integers with first nonzero entry
// positive; output is sorted by form. Throws StructuralError for |alpha| = 0.
std::vector<WaringTerm> waring_decompose(const MultiIndex& alpha);

// Exact rational check that sum_k b_k (c_k . u)^d == u^alpha.
bool waring_identity_holds(const MultiIndex& alpha, const std::vector<WaringTerm>& terms);

// Standard omega = sum_i dx_i ^ dx_{i+n} on R^{2n}: [[0, I], [-I, 0]].
Mat standard_symplectic(int dim);

// Matrix M with X_P = M grad P under iota_{X_P} omega = dP, i.e. M = Omega^{-T}.
// Throws StructuralError if Omega is not square, antisymmetric and invertible.
Mat hamiltonian_matrix(const Mat& omega);

PolyField hamiltonian_field_flat(const Poly& p, const Mat& omega);

// Evaluates a polynomial vector field.
Vec eval_field(const PolyField& field, const Vec& x);

Poly linear_form_poly(const LinearForm& f);
Poly shear_potential(const ShearTerm& term);
PolyField shear_field(const ShearTerm& term, const Mat& omega);
// scale * power * f^(power-1) * X_f as a polynomial field.
PolyField shear_field_closed_form(const ShearTerm& term, const Mat& omega);
PolyField field_sum(const std::vector<PolyField>& fields, int nvars);
double max_field_distance(const PolyField& a, const PolyField& b);

// Keeps the real parts of the coefficients; for real u this is
// (Q(u) + conj(Q(conj u))) / 2.
Poly real_symmetrize(const ComplexPoly& q);

struct PotentialSample {
  Vec point;
  double value = 0.0;
  Vec gradient;  // empty when no derivative data is available
  // Row weight; a position-dependent tolerance eps(x) maps to 1 / eps(x).
  double weight = 1.0;
};

struct FitOptions {
  // Weight of the rows that pin the fit to zero on the zero ball.
  double zero_ball_weight = 100.0;
  // Lattice points per real axis in the zero ball.
  int zero_ball_points_per_axis = 7;
  // Sample the zero ball in C^N (as R^{2N}) rather than in R^N.
  bool complex_zero_ball = true;
  // Weight of gradient rows for samples that carry gradients.
  double gradient_weight = 1.0;
  // Weight of value rows; 0 fits from gradients alone (the zero ball then
  // fixes the constant).
  double value_weight = 1.0;
  // Relative pivot threshold of the least-squares solve.
  double rank_threshold = 1e-12;
};

struct PolyFit {
  Poly poly;
  // max weight * |fit - value| over the samples (gradients when value rows
  // are off)
  double residual = 0.0;
  double zero_ball_max = 0.0;  // max |fit| over the zero-ball lattice
};

// Weighted least-squares fit in the monomials of degree <= degree. The
// unknowns are complex because the zero-ball rows live in C^N; the solution
// is passed through real_symmetrize. Throws RankDeficientError naming the
// degree when the design matrix loses rank.
PolyFit fit_potential(const std::vector<PotentialSample>& samples,
                      double zero_ball_radius, int degree,
                      const FitOptions& options = {});

// Potential g(c . u) along one direction; profile is a polynomial in one
// variable without constant term.
struct RidgeTerm {
  LinearForm form;
  Poly profile{1};
};

struct RidgeFit {
  std::vector<RidgeTerm> ridges;
  double residual = 0.0;
  double zero_ball_max = 0.0;
  Poly expanded(int nvars) const;
};

// Least-squares fit on R^2 in ridge form: degree + 1 equally spaced unit
// directions theta_j = j pi / (degree + 1), each carrying a profile of degree
// <= degree with zero constant term. These ridge functions span all
// polynomials of degree <= degree without constant term; the overcomplete
// system is solved in the minimum-norm sense. Each ridge is a sum of
// ShearTerms with a common form, hence one exactly integrable shear.
RidgeFit fit_ridge_potential(const std::vector<PotentialSample>& samples,
                             double zero_ball_radius, int degree,
                             const FitOptions& options = {});

std::vector<ShearTerm> ridge_shear_terms(const RidgeTerm& ridge);

// Lattice points of the closed radius-ball in R^dim, per_axis points per axis.
std::vector<Vec> ball_lattice(int dim, double radius, int per_axis);

// s(t) = g(t) / (g(t) + g(1 - t)), g(t) = exp(-1/t) for t > 0 else 0.
double smooth_step(double t);
double smooth_step_derivative(double t);
double smooth_step_second_derivative(double t);

class Cutoff {
 public:
  // Transition over [inner, inner + 1].
  explicit Cutoff(double inner);
  Cutoff(double inner, double outer);

  double inner() const { return inner_; }
  double outer() const { return outer_; }
  double radial(double r) const;
  double radial_derivative(double r) const;
  double operator()(const Vec& x) const { return radial(x.norm()); }
  Vec gradient(const Vec& x) const;

 private:
  double inner_;
  double outer_;
};

struct SmoothPotential {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
};

// chi * P with the product-rule gradient.
SmoothPotential cutoff_apply(const Cutoff& chi, const SmoothPotential& p);

}  // namespace hamcarl
