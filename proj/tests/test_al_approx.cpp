#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "generators.hpp"
#include "hamcarl/al_approx.hpp"
#include "hamcarl/errors.hpp"
#include "hamcarl/isotopies.hpp"

using namespace hamcarl;

namespace {

const Mat kOmega = standard_symplectic(2);
const double kU = std::numeric_limits<double>::epsilon() / 2;

Poly potential_of(const std::vector<ShearTerm>& terms, int n) {
  Poly out(n);
  for (const auto& t : terms) out += shear_potential(t);
  return out;
}

PolyField field_of(const std::vector<ShearTerm>& terms, int n) {
  std::vector<PolyField> fields;
  for (const auto& t : terms) fields.push_back(shear_field(t, standard_symplectic(n)));
  return field_sum(fields, n);
}

Poly without_constant(Poly p) {
  p.add_term(MultiIndex(static_cast<std::size_t>(p.nvars()), 0), -p.coefficient(MultiIndex(static_cast<std::size_t>(p.nvars()), 0)));
  return p;
}

// X_{xy} = (x, -y); its flow is (e^t x, e^-t y).
Vec xy_exact(const Vec& x, double t) { return (Vec(2) << std::exp(t) * x[0], std::exp(-t) * x[1]).finished(); }

double sup_error(const std::function<Vec(const Vec&)>& f, const std::function<Vec(const Vec&)>& g,
                 const std::vector<Vec>& grid) {
  double e = 0.0;
  for (const auto& x : grid) e = std::max(e, (f(x) - g(x)).cwiseAbs().maxCoeff());
  return e;
}

MapC1 shear_map_c1(const std::vector<ShearTerm>& terms, double t) {
  FlowMap m;
  for (const auto& term : terms) m.then(PrimitiveFlow::shear(term, kOmega, t));
  return flow_map_c1(m);
}

}  // namespace

TEST(DecomposeField, PurePowerIsOneTerm) {
  const auto terms = decompose_field(Poly::monomial({2, 0}, 1.0));
  ASSERT_EQ(terms.size(), 1u);
  EXPECT_EQ(terms[0].scale, 1.0);
  EXPECT_EQ(terms[0].power, 2);
  EXPECT_EQ(terms[0].form.coeffs, Vec::Unit(2, 0));
}

TEST(DecomposeField, ProductSplitsIntoTwoSquares) {
  const auto terms = decompose_field(Poly::monomial({1, 1}, 1.0));
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[0].form.coeffs, (Vec(2) << 1, -1).finished());
  EXPECT_EQ(terms[0].scale, -0.25);
  EXPECT_EQ(terms[1].form.coeffs, (Vec(2) << 1, 1).finished());
  EXPECT_EQ(terms[1].scale, 0.25);
  EXPECT_LT(max_field_distance(field_of(terms, 2), hamiltonian_field_flat(Poly::monomial({1, 1}, 1.0), kOmega)),
            1e-15);
}

TEST(DecomposeField, ZeroAndConstantsGiveNothing) {
  EXPECT_TRUE(decompose_field(Poly(2)).empty());
  EXPECT_TRUE(decompose_field(Poly::constant(4, 7.0)).empty());
}

TEST(DecomposeField, OrderedByPowerThenForm) {
  gen::Rng rng(211);
  const auto terms = decompose_field(rng.poly(2, 5, 10));
  for (std::size_t i = 1; i < terms.size(); ++i) {
    EXPECT_LE(terms[i - 1].power, terms[i].power);
    if (terms[i - 1].power == terms[i].power) {
      const Vec& a = terms[i - 1].form.coeffs;
      const Vec& b = terms[i].form.coeffs;
      EXPECT_TRUE(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
    }
  }
}

TEST(DecomposeField, FieldIdentityOnRandomPolynomials) {
  gen::Rng rng(223);
  for (int s = 0; s < 40; ++s) {
    const int n = rng.integer(1, 4);
    const Poly p = rng.poly(n, 5, 10);
    const auto terms = decompose_field(p);
    EXPECT_LT(potential_of(terms, n).max_coefficient_distance(without_constant(p)), 1e-12);
    if (n % 2 == 0) {
      EXPECT_LT(max_field_distance(field_of(terms, n), hamiltonian_field_flat(p, standard_symplectic(n))), 1e-12);
    }
  }
}

TEST(GroupByForm, KeepsFirstSeenOrder) {
  const LinearForm f{(Vec(2) << 1, 0).finished()}, g{(Vec(2) << 1, 1).finished()};
  const auto groups = group_by_form({{1.0, g, 2}, {1.0, f, 3}, {2.0, g, 4}});
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].size(), 2u);
  EXPECT_EQ(groups[0][0].form.coeffs, g.coeffs);
  EXPECT_EQ(groups[1][0].form.coeffs, f.coeffs);
}

TEST(ConsistentAlgorithm, EulerReproducesCompoundInterest) {
  const auto alg = euler_algorithm(TimeDependentField{[](double, const Vec& x) { return x; }, {}});
  const Vec one = Vec::Constant(1, 1.0);
  for (int n : {1, 2, 10, 1000}) {
    const double got = iterate_algorithm(alg, one, 1.0, n)[0];
    EXPECT_NEAR(got, std::pow(1.0 + 1.0 / n, n), 4.0 * n * kU) << n;
  }
  const double err = std::exp(1.0) - iterate_algorithm(alg, one, 1.0, 1000)[0];
  const long double exact = std::exp(1.0L) - std::pow(1.0L + 1.0L / 1000, 1000);
  EXPECT_NEAR(err, static_cast<double>(exact), 1e-12);
  // The quoted figure 1.359e-3 carries four digits.
  EXPECT_NEAR(err, 1.359e-3, 1.359e-6);
}

TEST(ConsistentAlgorithm, ZeroFieldIsIdentity) {
  const auto alg = euler_algorithm(TimeDependentField{[](double, const Vec& x) { return Vec(Vec::Zero(x.size())); }, {}});
  const Vec x = (Vec(2) << 0.25, -3.0).finished();
  EXPECT_EQ(iterate_algorithm(alg, x, 1.0, 17), x);
}

TEST(ConsistentAlgorithm, SteppersAreConsistent) {
  gen::Rng rng(227);
  const Poly p = rng.poly(2, 4, 8);
  const auto shear = shear_composition_algorithm(decompose_field(p), kOmega);
  const auto euler = euler_algorithm(polynomial_hamiltonian_field(p));
  for (int s = 0; s < 20; ++s) {
    const Vec x = rng.vec(2);
    const double scale = 1.0 + eval_field(hamiltonian_field_flat(p, kOmega), x).norm();
    EXPECT_LT(consistency_residual(shear, x), 1e-6 * scale);
    EXPECT_LT(consistency_residual(euler, x), 1e-6 * scale);
  }
}

TEST(ConsistentAlgorithm, ShearCompositionForProductHalvesError) {
  const auto alg = shear_composition_algorithm(decompose_field(Poly::monomial({1, 1}, 1.0)), kOmega);
  const auto grid = box_grid(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), 11);
  std::vector<double> errs;
  for (int n : {4, 8, 16, 32, 64}) {
    errs.push_back(sup_error([&](const Vec& x) { return iterate_algorithm(alg, x, 1.0, n); },
                             [](const Vec& x) { return xy_exact(x, 1.0); }, grid));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    EXPECT_NEAR(errs[i] / errs[i - 1], 0.5, 0.1) << i;
  }
  EXPECT_NEAR(loglog_slope({4, 8, 16, 32, 64}, errs), -1.0, 0.3);
}

TEST(ConsistentAlgorithm, JacobianIterationMatchesFiniteDifferences) {
  const auto alg = shear_composition_algorithm(decompose_field(Poly::monomial({2, 1}, 0.5)), kOmega);
  const Vec x = (Vec(2) << 0.3, -0.6).finished();
  const auto r = iterate_algorithm_with_jacobian(alg, x, 1.0, 8);
  EXPECT_EQ(r.point, iterate_algorithm(alg, x, 1.0, 8));
  const Mat fd = finite_difference_jacobian([&](const Vec& y) { return iterate_algorithm(alg, y, 1.0, 8); }, x);
  EXPECT_LT((r.jacobian - fd).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(FrozenTimeSplit, TwoSlicesOfLinearlyGrowingField) {
  const Vec v = (Vec(2) << 2.0, -1.0).finished();
  const TimeDependentField f{[&](double t, const Vec&) { return Vec((1 + t) * v); }, {}};
  const Vec x = (Vec(2) << 0.1, 0.2).finished();
  EXPECT_LT((frozen_time_split(f, 1.0, 2, x) - (x + 1.25 * v)).norm(), 1e-13);
  EXPECT_NEAR((frozen_time_split(f, 1.0, 2, x) - (x + 1.5 * v)).norm(), 0.25 * v.norm(), 1e-13);
}

TEST(FrozenTimeSplit, AutonomousFieldIsUnaffectedBySlicing) {
  const TimeDependentField f = polynomial_hamiltonian_field(Poly::monomial({1, 1}, 1.0) + Poly::monomial({3, 0}, 0.2));
  const Vec x = (Vec(2) << 0.4, 0.3).finished();
  const Vec whole = reference_flow(f, x, 1.0, 64 * 8);
  for (int n : {1, 2, 8}) {
    EXPECT_LT((frozen_time_split(f, 1.0, n, x, 64 * 8 / n) - whole).norm(), 1e-13) << n;
  }
}

TEST(FrozenTimeSplit, ExactSliceMapMatchesNumericalSplit) {
  const auto map = frozen_time_split_map(sin_quadratic_potential(), kOmega, 1.0, 8);
  gen::Rng rng(229);
  for (int s = 0; s < 10; ++s) {
    const Vec x = rng.vec(2);
    EXPECT_LT((map.apply(x) - frozen_time_split(sin_quadratic_field(), 1.0, 8, x)).norm(), 1e-12);
  }
}

TEST(FrozenTimeSplit, SinQuadraticConvergesAtFirstOrder) {
  const auto grid = box_grid(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), 9);
  const MapC1 reference = reference_map(sin_quadratic_field(), 1.0, 10000);
  const auto rep = convergence_study(
      {4, 8, 16, 32, 64},
      [](int n) { return flow_map_c1(frozen_time_split_map(sin_quadratic_potential(), kOmega, 1.0, n)); },
      reference, grid, 1);
  ASSERT_EQ(rep.rows.size(), 5u);
  EXPECT_NEAR(rep.slope_c0(), -1.0, 0.2);
  EXPECT_NEAR(rep.slope_c1(), -1.0, 0.2);
  for (const auto& row : rep.rows) EXPECT_FALSE(row.c2.has_value());
}

TEST(CrDiscrepancy, IdenticalMapsGiveZero) {
  const MapC1 f{[](const Vec& x) { return Vec(x.array().sin()); }, {}};
  const auto grid = box_grid(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), 5);
  for (int r : {0, 1, 2}) EXPECT_EQ(cr_discrepancy(f, f, grid, r), 0.0);
}

TEST(CrDiscrepancy, SquareAgainstZeroOnUnitInterval) {
  const MapC1 sq{[](const Vec& x) { return Vec(x.cwiseProduct(x)); },
                 [](const Vec& x) { return Mat((2 * x).asDiagonal()); }};
  const MapC1 zero{[](const Vec& x) { return Vec(Vec::Zero(x.size())); },
                   [](const Vec& x) { return Mat(Mat::Zero(x.size(), x.size())); }};
  const auto grid = box_grid(Vec::Zero(1), Vec::Ones(1), 11);
  const auto d = cr_discrepancy_orders(sq, zero, grid, 1);
  EXPECT_EQ(d.c0, 1.0);
  EXPECT_EQ(d.c1, 2.0);
  EXPECT_EQ(cr_discrepancy(sq, zero, grid, 1), 2.0);
  EXPECT_EQ(cr_discrepancy(sq, zero, grid, 0), 1.0);
  // Without closed-form Jacobians the differences agree closely.
  const MapC1 sq_fd{sq.value, {}}, zero_fd{zero.value, {}};
  EXPECT_NEAR(cr_discrepancy(sq_fd, zero_fd, grid, 1), 2.0, 1e-8);
  // Second derivative of x^2 is 2 everywhere.
  EXPECT_NEAR(cr_discrepancy_orders(sq, zero, grid, 2).c2, 2.0, 1e-8);
}

TEST(CrDiscrepancy, LinearInTimePerturbationOfShears) {
  const std::vector<ShearTerm> terms{{0.5, LinearForm{(Vec(2) << 1, 0).finished()}, 2},
                                     {-0.3, LinearForm{(Vec(2) << 0.6, 0.8).finished()}, 3},
                                     {0.2, LinearForm{(Vec(2) << 0, 1).finished()}, 4}};
  const auto grid = box_grid(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), 9);
  const MapC1 base = shear_map_c1(terms, 0.7);
  const double rate = cr_discrepancy(shear_map_c1(terms, 0.7 + 1e-6), base, grid, 1) / 1e-6;
  for (double delta : {1e-4, 1e-3, 1e-2}) {
    const double d = cr_discrepancy(shear_map_c1(terms, 0.7 + delta), base, grid, 1);
    EXPECT_NEAR(d / (delta * rate), 1.0, 0.05) << delta;
  }
}

TEST(CrDiscrepancy, IsASeminormOnDyadicData) {
  // Dyadic grid and coefficients keep every operation exact.
  const auto grid = box_grid(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), 9);
  gen::Rng rng(233);
  auto dyadic_affine = [&] {
    Mat a(2, 2);
    Vec b(2);
    for (int i = 0; i < 2; ++i) {
      b[i] = rng.integer(-8, 8) / 8.0;
      for (int j = 0; j < 2; ++j) a(i, j) = rng.integer(-8, 8) / 8.0;
    }
    return std::pair{a, b};
  };
  for (int s = 0; s < 20; ++s) {
    const auto [a1, b1] = dyadic_affine();
    const auto [a2, b2] = dyadic_affine();
    const auto [a3, b3] = dyadic_affine();
    auto make = [](Mat a, Vec b, double k) {
      return MapC1{[=](const Vec& x) { return Vec(k * (a * x + b)); }, [=](const Vec&) { return Mat(k * a); }};
    };
    const MapC1 f = make(a1, b1, 1), g = make(a2, b2, 1), h = make(a3, b3, 1);
    const double fg = cr_discrepancy(f, g, grid, 1), gh = cr_discrepancy(g, h, grid, 1);
    EXPECT_LE(cr_discrepancy(f, h, grid, 1), fg + gh);
    for (double k : {-2.0, 0.5, 4.0}) {
      EXPECT_EQ(cr_discrepancy(make(a1, b1, k), make(a2, b2, k), grid, 1), std::abs(k) * fg);
    }
    EXPECT_EQ(cr_discrepancy(f, g, grid, 1), cr_discrepancy(g, f, grid, 1));
  }
}

TEST(CrDiscrepancy, ParallelSweepMatchesSerial) {
  const std::vector<ShearTerm> terms{{0.5, LinearForm{(Vec(2) << 1, 0).finished()}, 3}};
  const auto grid = box_grid(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), 15);
  const MapC1 a = shear_map_c1(terms, 0.5), b = shear_map_c1(terms, 0.6);
  CrOptions par;
  par.parallel = true;
  const auto s = cr_discrepancy_orders(a, b, grid, 2);
  const auto p = cr_discrepancy_orders(a, b, grid, 2, par);
  EXPECT_EQ(s.c0, p.c0);
  EXPECT_EQ(s.c1, p.c1);
  EXPECT_EQ(s.c2, p.c2);
}

TEST(ConvergenceReport, SlopeOfExactPowerLaw) {
  EXPECT_NEAR(loglog_slope({2, 4, 8, 16}, {1.0, 0.25, 0.0625, 0.015625}), -2.0, 1e-12);
  EXPECT_TRUE(std::isnan(loglog_slope({2, 4}, {1.0, 0.5})));
  EXPECT_TRUE(std::isnan(loglog_slope({2, 4, 8}, {1.0, 0.0, 0.5})));
}

TEST(ConvergenceReport, CsvLayout) {
  ConvergenceReport rep;
  rep.rows.push_back({4, 0.1, 0.25, std::nullopt, 1.5});
  rep.rows.push_back({8, 1.0 / 3.0, 2e-17, 0.125, 2.0});
  std::ostringstream plain, timed;
  rep.write_csv(plain);
  rep.write_csv(timed, true);
  EXPECT_EQ(plain.str(),
            "n,c0_error,c1_error,c2_error_or_blank,seconds\n"
            "4,0.10000000000000001,0.25,,\n"
            "8,0.33333333333333331,2.0000000000000001e-17,0.125,\n");
  EXPECT_NE(timed.str().find("4,0.10000000000000001,0.25,,1.5\n"), std::string::npos);
}

TEST(ForEachIndex, VisitsEveryIndexOnce) {
  for (bool parallel : {false, true}) {
    std::vector<int> hits(257, 0);
    for_each_index(hits.size(), parallel, [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(ForEachIndex, PropagatesExceptions) {
  EXPECT_THROW(for_each_index(10, true, [](std::size_t i) {
                 if (i == 7) throw StructuralError("boom");
               }),
               StructuralError);
}
