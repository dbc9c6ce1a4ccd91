#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "generators.hpp"
#include "hamcarl/errors.hpp"
#include "hamcarl/flow_engine.hpp"
#include "shear_samples.hpp"

using namespace hamcarl;

namespace {

const Mat kOmega = standard_symplectic(2);
const double kPi = std::acos(-1.0);

ShearTerm random_shear(gen::Rng& rng, int n) {
  return ShearTerm{rng.uniform(-1, 1), LinearForm{rng.vec(n)}, rng.integer(1, 4)};
}

FlowMap random_shear_map(gen::Rng& rng, int n, int count) {
  FlowMap m;
  const Mat omega = standard_symplectic(n);
  for (int k = 0; k < count; ++k) m.then(PrimitiveFlow::shear(random_shear(rng, n), omega, rng.uniform(-1, 1)));
  return m;
}

}  // namespace

TEST(FlowEngine, EmptyMapIsIdentity) {
  const FlowMap m;
  const Vec x = (Vec(3) << 1, -2, 3).finished();
  EXPECT_EQ(m.apply(x), x);
  EXPECT_EQ(m.jacobian(x), Mat::Identity(3, 3));
}

TEST(FlowEngine, QuadraticShearExample) {
  const FlowMap m({PrimitiveFlow::shear(ShearTerm{1.0, LinearForm{Vec::Unit(2, 0)}, 2}, kOmega, 1.0)});
  const Vec y = m.apply(Vec(Vec::Unit(2, 0)));
  EXPECT_EQ(y, (Vec(2) << 1, -2).finished());
  const Mat j = m.jacobian(Vec(Vec::Unit(2, 0)));
  EXPECT_EQ(j, (Mat(2, 2) << 1, 0, -2, 1).finished());
  EXPECT_EQ(j.determinant(), 1.0);
}

TEST(FlowEngine, ShearMatchesIntegratedField) {
  gen::Rng rng(151);
  for (int s = 0; s < 10; ++s) {
    const ShearTerm term = random_shear(rng, 2);
    const double t = rng.uniform(-1, 1);
    const PolyField xf = shear_field(term, kOmega);
    const TimeDependentField field{[&](double, const Vec& x) { return eval_field(xf, x); }, {}};
    const Vec x0 = rng.vec(2);
    const Vec exact = FlowMap({PrimitiveFlow::shear(term, kOmega, t)}).apply(x0);
    EXPECT_LT((exact - reference_flow(field, x0, t, 400)).norm(), 1e-10);
  }
}

TEST(FlowEngine, SharedFormTermsCombine) {
  gen::Rng rng(157);
  const LinearForm f{rng.vec(4)};
  const Mat omega = standard_symplectic(4);
  const std::vector<ShearTerm> terms{{0.5, f, 1}, {-1.0, f, 3}, {0.25, f, 4}};
  FlowMap sequential;
  for (const auto& term : terms) sequential.then(PrimitiveFlow::shear(term, omega, 0.7));
  const FlowMap combined({PrimitiveFlow::shear(terms, omega, 0.7)});
  for (int s = 0; s < 20; ++s) {
    const Vec x = rng.vec(4);
    EXPECT_LT((sequential.apply(x) - combined.apply(x)).norm(), 1e-13);
  }
  const std::vector<ShearTerm> mixed{{1.0, f, 2}, {1.0, LinearForm{rng.vec(4)}, 2}};
  EXPECT_THROW(PrimitiveFlow::shear(mixed, omega, 1.0), StructuralError);
}

TEST(FlowEngine, SphereRotationExample) {
  const auto s = OrbitModel::sphere(1.0);
  const FlowMap m({PrimitiveFlow::rotation(s, s.algebra().basis(2), kPi / 2)});
  const Vec y = m.apply(Vec(Vec::Unit(3, 0)));
  EXPECT_LT((y - Vec::Unit(3, 1)).norm(), 1e-15);
}

TEST(FlowEngine, WeightedRotationTurnsByConservedAngle) {
  const auto s = OrbitModel::sphere(1.0);
  // w(x) = 2 x3 on the e3 rotation.
  const ShearTerm weight{1.0, LinearForm{Vec::Unit(3, 2)}, 2};
  const PrimitiveFlow p = PrimitiveFlow::rotation(s, s.algebra().basis(2), 0.9, weight);
  const double h = 0.6, r = std::sqrt(1 - h * h);
  const Vec x = (Vec(3) << r, 0, h).finished();
  const Vec y = FlowMap({p}).apply(x);
  const double ang = 0.9 * 2 * h;
  EXPECT_LT((y - (Vec(3) << r * std::cos(ang), r * std::sin(ang), h).finished()).norm(), 1e-14);
}

TEST(FlowEngine, JacobianMatchesFiniteDifferences) {
  gen::Rng rng(163);
  const FlowMap m = random_shear_map(rng, 4, 6);
  for (int s = 0; s < 10; ++s) {
    const Vec x = rng.vec(4, -0.5, 0.5);
    const Mat fd = finite_difference_jacobian([&](const Vec& y) { return m.apply(y); }, x);
    EXPECT_LT((m.jacobian(x) - fd).cwiseAbs().maxCoeff(), 1e-6);
    const auto [y, j] = m.apply_with_jacobian(x);
    EXPECT_EQ(y, m.apply(x));
    EXPECT_EQ(j, m.jacobian(x));
  }
}

TEST(FlowEngine, ShearCompositionsAreSymplectic) {
  gen::Rng rng(167);
  for (int n : {2, 4}) {
    for (int s = 0; s < 50; ++s) {
      const FlowMap m = shear_samples::bounded_map(rng, n, 10);
      const Vec x = rng.vec(n);
      EXPECT_LT(shear_samples::symplectic_residual(m.jacobian(x), standard_symplectic(n)), 1e-12);
    }
  }
}

TEST(FlowEngine, SymplecticResidualIsRoundingOnly) {
  // Unbounded data: the residual tracks u |J|^2 instead of an absolute level.
  gen::Rng rng(169);
  const double u = std::numeric_limits<double>::epsilon() / 2;
  for (int s = 0; s < 50; ++s) {
    const FlowMap m = random_shear_map(rng, 2, 10);
    const Mat j = m.jacobian(rng.vec(2, -0.5, 0.5));
    if (!j.allFinite()) continue;
    const double scale = 1.0 + j.cwiseAbs().maxCoeff();
    EXPECT_LT(shear_samples::symplectic_residual(j, kOmega), 16 * u * scale * scale);
  }
}

TEST(FlowEngine, ShearsConserveTheirFormToRounding) {
  gen::Rng rng(173);
  for (int s = 0; s < 200; ++s) {
    const int n = rng.coin() ? 2 : 4;
    const ShearTerm term = random_shear(rng, n);
    const PrimitiveFlow p = PrimitiveFlow::shear(term, standard_symplectic(n), rng.uniform(-2, 2));
    const Vec x = rng.vec(n);
    Vec y = x;
    p.apply_in_place(y);
    EXPECT_LE(std::abs(term.form(y) - term.form(x)), shear_samples::form_drift_bound(term.form.coeffs, x, y));
  }
}

TEST(FlowEngine, FormDriftBoundDetectsAWrongDirection) {
  // The bound is tight enough that stepping off the level set is caught.
  const Vec c = (Vec(2) << 0.6, 0.8).finished();
  const Vec x = (Vec(2) << 0.3, -0.2).finished();
  const Vec y = x + 1e-12 * c;
  EXPECT_GT(std::abs(LinearForm{c}(y) - LinearForm{c}(x)), shear_samples::form_drift_bound(c, x, y));
}

TEST(FlowEngine, RealDataKeepsRealVectorsReal) {
  gen::Rng rng(179);
  const FlowMap m = random_shear_map(rng, 4, 8);
  for (int s = 0; s < 20; ++s) {
    const Vec x = rng.vec(4);
    const CVec y = m.apply(CVec(x.cast<std::complex<double>>()));
    EXPECT_EQ(y.imag(), Vec::Zero(4));
    EXPECT_LT((y.real() - m.apply(x)).norm(), 1e-14);
  }
}

TEST(FlowEngine, CurvedPrimitivesStayOnTheOrbit) {
  gen::Rng rng(181);
  for (const auto& model : {OrbitModel::sphere(1.5), OrbitModel::hyperboloid(1.0)}) {
    for (const auto& p : sample_orbit_points(model, 30, 5)) {
      const AlgebraVector u{rng.vec(3, -0.5, 0.5)};
      const FlowMap m({PrimitiveFlow::rotation(model, u, rng.uniform(-1, 1))});
      const Vec3 y = m.apply(Vec(p.coords()));
      EXPECT_LT(std::abs(model.invariant(y)), 1e-10) << model.name();
    }
  }
}

TEST(FlowEngine, CurvedPrimitivesPreserveTheKksForm) {
  gen::Rng rng(191);
  for (const auto& model : {OrbitModel::sphere(1.0), OrbitModel::hyperboloid(1.0)}) {
    for (const auto& p : sample_orbit_points(model, 20, 3)) {
      const AlgebraVector u{rng.vec(3, -1, 1)};
      const FlowMap m({PrimitiveFlow::rotation(model, u, 0.8)});
      const auto [y, j] = m.apply_with_jacobian(Vec(p.coords()));
      const auto q = OrbitPoint::on(model, Vec3(y));
      const auto t1 = orbit_tangent(model, p, AlgebraVector{rng.vec(3)});
      const auto t2 = orbit_tangent(model, p, AlgebraVector{rng.vec(3)});
      const auto s1 = TangentPair::at(model, q, Vec3(j * t1.vector()));
      const auto s2 = TangentPair::at(model, q, Vec3(j * t2.vector()));
      EXPECT_NEAR(kks_form(model, q, s1, s2), kks_form(model, p, t1, t2), 1e-9) << model.name();
    }
  }
}

TEST(FlowEngine, InverseUndoesTheMap) {
  gen::Rng rng(193);
  const FlowMap m = random_shear_map(rng, 4, 10);
  const FlowMap inv = m.inverse();
  for (int s = 0; s < 20; ++s) {
    const Vec x = rng.vec(4, -0.5, 0.5);
    EXPECT_LT((inv.apply(m.apply(x)) - x).norm(), 1e-12);
  }
}

TEST(FlowEngine, ComposeAppliesInnerFirst) {
  gen::Rng rng(197);
  const FlowMap a = random_shear_map(rng, 2, 3), b = random_shear_map(rng, 2, 3);
  const FlowMap ab = compose(a, b);
  EXPECT_EQ(ab.size(), 6u);
  for (int s = 0; s < 10; ++s) {
    const Vec x = rng.vec(2);
    EXPECT_EQ(ab.apply(x), a.apply(b.apply(x)));
  }
}

TEST(ReferenceFlow, ZeroFieldIsIdentity) {
  const TimeDependentField zero{[](double, const Vec& x) { return Vec(Vec::Zero(x.size())); }, {}};
  const Vec x = (Vec(2) << 0.3, -0.4).finished();
  EXPECT_EQ(reference_flow(zero, x, 1.0, 10), x);
  const auto v = variational_flow(zero, x, 1.0, 10);
  EXPECT_EQ(v.point, x);
  EXPECT_EQ(v.jacobian, Mat::Identity(2, 2));
}

TEST(ReferenceFlow, ExponentialGrowth) {
  const TimeDependentField lin{[](double, const Vec& x) { return x; }, {}};
  EXPECT_NEAR(reference_flow(lin, Vec::Constant(1, 1.0), 1.0, 100)[0], std::exp(1.0), 1e-8);
}

TEST(ReferenceFlow, TimeDependentConstantField) {
  const Vec v = (Vec(2) << 1.0, -2.0).finished();
  const TimeDependentField f{[&](double t, const Vec&) { return Vec((1 + t) * v); }, {}};
  const Vec x0 = (Vec(2) << 0.5, 0.5).finished();
  EXPECT_LT((reference_flow(f, x0, 1.0, 7) - (x0 + 1.5 * v)).norm(), 1e-12);
  EXPECT_LT((reference_flow(f, x0, 0.5, 1.0, 3) - (x0 + 0.875 * v)).norm(), 1e-12);
}

TEST(ReferenceFlow, FourthOrderSelfConvergence) {
  const TimeDependentField f{[](double t, const Vec& x) { return Vec((Vec(1) << std::cos(t) * x[0] * x[0]).finished()); }, {}};
  const Vec x0 = Vec::Constant(1, 0.5);
  // x' = cos(t) x^2 gives x = x0 / (1 - x0 sin t).
  const double exact = 0.5 / (1 - 0.5 * std::sin(1.0));
  const double e1 = std::abs(reference_flow(f, x0, 1.0, 20)[0] - exact);
  const double e2 = std::abs(reference_flow(f, x0, 1.0, 40)[0] - exact);
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.3);
}

TEST(ReferenceFlow, BlowUpReportsLastValidTime) {
  // x' = x^2 from x = 1 escapes at t = 1.
  const TimeDependentField f{[](double, const Vec& x) { return Vec(x.cwiseProduct(x)); }, {}};
  try {
    reference_flow(f, Vec::Constant(1, 1.0), 2.0, 2000);
    FAIL() << "expected blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_GT(e.last_valid_time(), 0.9);
    EXPECT_LT(e.last_valid_time(), 1.1);
  }
  EXPECT_THROW(reference_flow(f, Vec::Constant(1, 1.0), 1.0, 0), StructuralError);
}

TEST(VariationalFlow, NilpotentLinearField) {
  Mat a(2, 2);
  a << 0, 1, 0, 0;
  const Mat expected = (Mat(2, 2) << 1, 1, 0, 1).finished();
  const TimeDependentField fd{[&](double, const Vec& x) { return Vec(a * x); }, {}};
  const TimeDependentField exact{fd.value, [&](double, const Vec&) { return a; }};
  for (const auto& f : {fd, exact}) {
    for (const Vec& x0 : {Vec(Vec::Zero(2)), Vec((Vec(2) << 0.3, -1.2).finished())}) {
      const auto r = variational_flow(f, x0, 1.0, 10);
      EXPECT_LT((r.jacobian - expected).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((r.point - expected * x0).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(VariationalFlow, LinearFieldMatchesMatrixExponential) {
  gen::Rng rng(199);
  Mat a = Mat::Zero(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a(i, j) = rng.uniform(-1, 1);
  }
  const TimeDependentField f{[&](double, const Vec& x) { return Vec(a * x); },
                             [&](double, const Vec&) { return a; }};
  const auto r = variational_flow(f, rng.vec(3), 1.0, 100);
  EXPECT_LT((r.jacobian - matrix_exp(a)).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(VariationalFlow, HamiltonianFieldIsNearlySymplectic) {
  const Poly p = Poly::monomial({3, 0}, 1.0 / 3) + Poly::monomial({0, 2}, 0.5) + Poly::monomial({1, 1}, 0.2);
  const PolyField xf = hamiltonian_field_flat(p, kOmega);
  const TimeDependentField f{[&](double, const Vec& x) { return eval_field(xf, x); }, {}};
  const auto r = variational_flow(f, (Vec(2) << 0.3, -0.2).finished(), 1.0, 200);
  EXPECT_LT(shear_samples::symplectic_residual(r.jacobian, kOmega), 1e-6);
}
