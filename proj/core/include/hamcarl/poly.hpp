#pragma once

#include <complex>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hamcarl {

using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& alpha);

// All multi-indices in nvars variables with total degree in [lo, hi], graded
// and then lexicographically descending in the first variable.
std::vector<MultiIndex> monomials_up_to(int nvars, int lo, int hi);

// Sparse polynomial: multi-index -> coefficient, zero coefficients never stored.
template <class T>
class BasicPoly {
 public:
  using Terms = std::map<MultiIndex, T>;

  explicit BasicPoly(int nvars = 1);
  static BasicPoly constant(int nvars, T value);
  static BasicPoly variable(int nvars, int index);
  static BasicPoly monomial(MultiIndex alpha, T coeff);

  int nvars() const { return nvars_; }
  // -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const Terms& terms() const { return terms_; }
  T coefficient(const MultiIndex& alpha) const;

  // Adds coeff to the coefficient of alpha, erasing the term if it cancels.
  void add_term(const MultiIndex& alpha, T coeff);

  template <class X>
  auto operator()(const X& x) const;

  BasicPoly derivative(int var) const;
  Eigen::Matrix<T, Eigen::Dynamic, 1> gradient_at(
      const Eigen::Matrix<T, Eigen::Dynamic, 1>& x) const;

  BasicPoly& operator+=(const BasicPoly& o);
  BasicPoly& operator-=(const BasicPoly& o);
  BasicPoly& operator*=(T s);
  friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
  friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
  friend BasicPoly operator*(BasicPoly a, T s) { return a *= s; }
  friend BasicPoly operator*(T s, BasicPoly a) { return a *= s; }
  friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
    return a.times(b);
  }
  BasicPoly times(const BasicPoly& o) const;
  BasicPoly pow(int k) const;

  // Largest |coefficient difference| over the union of supports.
  double max_coefficient_distance(const BasicPoly& o) const;

  friend bool operator==(const BasicPoly& a, const BasicPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  int nvars_;
  Terms terms_;
};

using Poly = BasicPoly<double>;
using ComplexPoly = BasicPoly<std::complex<double>>;

// A polynomial vector field, one component per coordinate.
using PolyField = std::vector<Poly>;

template <class T>
template <class X>
auto BasicPoly<T>::operator()(const X& x) const {
  using S = std::decay_t<decltype(x[0])>;
  using R = decltype(T() * S());
  const int deg = std::max(degree(), 0);
  // Power table pw[i][e] = x_i^e, shared by all terms.
  std::vector<std::vector<S>> pw(static_cast<std::size_t>(nvars_));
  for (int i = 0; i < nvars_; ++i) {
    auto& row = pw[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(deg) + 1);
    row[0] = S(1);
    for (int e = 1; e <= deg; ++e) row[e] = row[e - 1] * x[i];
  }
  R sum = R(0);
  for (const auto& [alpha, a] : terms_) {
    R term = R(a);
    for (int i = 0; i < nvars_; ++i) {
      if (alpha[i] != 0) term *= pw[static_cast<std::size_t>(i)][alpha[i]];
    }
    sum += term;
  }
  return sum;
}

// Text format, one term per line: "a_alpha alpha_1 ... alpha_N". Blank lines
// and '#' comments are ignored. nvars is taken from the first term unless
// given explicitly.
Poly read_poly(std::istream& in, int nvars = 0);
void write_poly(std::ostream& out, const Poly& p);

// Coefficientwise real part.
Poly real_part(const ComplexPoly& q);
ComplexPoly to_complex(const Poly& p);

}  // namespace hamcarl
