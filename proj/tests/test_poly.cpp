#include <gtest/gtest.h>

#include <sstream>

#include "generators.hpp"
#include "hamcarl/errors.hpp"
#include "hamcarl/poly.hpp"

using namespace hamcarl;
using Vec = Eigen::VectorXd;

TEST(Poly, ZeroTermsAreNeverStored) {
  Poly p(2);
  p.add_term({1, 0}, 2.0);
  p.add_term({1, 0}, -2.0);
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.degree(), -1);
  EXPECT_TRUE(Poly::monomial({1, 1}, 0.0).is_zero());
}

TEST(Poly, ArithmeticAgreesWithEvaluation) {
  gen::Rng rng(71);
  for (int s = 0; s < 30; ++s) {
    const int n = rng.integer(1, 4);
    const Poly a = rng.poly(n, 4, 6), b = rng.poly(n, 3, 5);
    const Vec x = rng.vec(n);
    EXPECT_NEAR((a + b)(x), a(x) + b(x), 1e-12);
    EXPECT_NEAR((a - b)(x), a(x) - b(x), 1e-12);
    EXPECT_NEAR((a * b)(x), a(x) * b(x), 1e-12);
    EXPECT_NEAR((2.5 * a)(x), 2.5 * a(x), 1e-12);
    EXPECT_NEAR(a.pow(3)(x), a(x) * a(x) * a(x), 1e-10);
  }
}

TEST(Poly, DerivativeMatchesCentralDifference) {
  gen::Rng rng(73);
  const double h = 1e-5;
  for (int s = 0; s < 30; ++s) {
    const int n = rng.integer(1, 4);
    const Poly p = rng.poly(n, 5, 8);
    const Vec x = rng.vec(n);
    const Vec g = p.gradient_at(x);
    for (int i = 0; i < n; ++i) {
      const Vec e = h * Vec::Unit(n, i);
      EXPECT_NEAR(g[i], (p(Vec(x + e)) - p(Vec(x - e))) / (2 * h), 1e-8);
      EXPECT_EQ(g[i], p.derivative(i)(x));
    }
  }
}

TEST(Poly, DegreeAndCoefficients) {
  Poly p(3);
  p.add_term({2, 1, 0}, 3.0);
  p.add_term({0, 0, 1}, -1.0);
  EXPECT_EQ(p.degree(), 3);
  EXPECT_EQ(p.coefficient({2, 1, 0}), 3.0);
  EXPECT_EQ(p.coefficient({1, 1, 1}), 0.0);
}

TEST(Poly, RejectsMismatchedShapes) {
  Poly p(2);
  EXPECT_THROW(p.add_term({1, 0, 0}, 1.0), StructuralError);
  EXPECT_THROW(p.add_term({-1, 0}, 1.0), StructuralError);
  EXPECT_THROW(p + Poly(3), StructuralError);
  EXPECT_THROW(p.derivative(2), StructuralError);
}

TEST(Poly, MonomialEnumeration) {
  const auto m = monomials_up_to(2, 0, 2);
  ASSERT_EQ(m.size(), 6u);
  EXPECT_EQ(m[0], (MultiIndex{0, 0}));
  EXPECT_EQ(m[1], (MultiIndex{1, 0}));
  EXPECT_EQ(m[2], (MultiIndex{0, 1}));
  EXPECT_EQ(m[3], (MultiIndex{2, 0}));
  EXPECT_EQ(monomials_up_to(4, 6, 6).size(), 84u);  // C(9, 3)
}

TEST(Poly, TextRoundTripIsExact) {
  gen::Rng rng(79);
  for (int s = 0; s < 20; ++s) {
    const int n = rng.integer(1, 4);
    const Poly p = rng.poly(n, 5, 7);
    std::stringstream io;
    write_poly(io, p);
    EXPECT_EQ(read_poly(io, n), p);
  }
}

TEST(Poly, ReadsCommentsAndBlankLines) {
  std::istringstream in("# x^2 y - 3\n\n1.0 2 1\n-3 0 0  # constant\n");
  const Poly p = read_poly(in);
  EXPECT_EQ(p.nvars(), 2);
  EXPECT_EQ(p.coefficient({2, 1}), 1.0);
  EXPECT_EQ(p.coefficient({0, 0}), -3.0);
}

TEST(Poly, ReadRejectsMalformedInput) {
  for (const char* text : {"1.0 2 x\n", "abc 1 1\n", "1 2\n1 2 3\n", "inf 1\n", ""}) {
    std::istringstream in(text);
    EXPECT_THROW(read_poly(in), StructuralError) << text;
  }
}

TEST(Poly, ComplexEvaluationOfRealPolynomial) {
  gen::Rng rng(83);
  const Poly p = rng.poly(2, 4, 6);
  const Eigen::VectorXcd z = rng.cvec(2);
  const auto got = p(z);
  const ComplexPoly q = to_complex(p);
  EXPECT_LT(std::abs(got - q(z)), 1e-14);
  EXPECT_EQ(real_part(q), p);
}
