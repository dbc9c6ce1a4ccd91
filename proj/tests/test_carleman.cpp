#include <gtest/gtest.h>

#include <cmath>

#include "hamcarl/al_approx.hpp"
#include "hamcarl/errors.hpp"
#include "hamcarl/isotopies.hpp"
#include "shear_samples.hpp"

using namespace hamcarl;

namespace {

const Mat kOmega = standard_symplectic(2);

// Smaller grids keep the unit tests quick; acceptance runs the full sizes.
CarlemanConfig quick_config() {
  CarlemanConfig c;
  c.grid_per_axis = 11;
  c.complex_grid_per_axis = 5;
  c.reference_substeps = 2000;
  return c;
}

}  // namespace

TEST(Isotopies, TwistVanishesOnTheInnerBallAndOutsideItsSupport) {
  const auto iso = twist_isotopy();
  for (double r : {0.0, 0.2, 0.5, 3.0, 3.5}) {
    for (double th : {0.0, 1.0, 2.5}) {
      const Vec x = (Vec(2) << r * std::cos(th), r * std::sin(th)).finished();
      EXPECT_EQ(iso.potential(0.3, x), 0.0) << r;
      EXPECT_EQ(iso.gradient(0.3, x), Vec::Zero(2)) << r;
    }
  }
  EXPECT_NO_THROW(iso.validate());
}

TEST(Isotopies, TwistGradientAndProfileMatchDifferences) {
  const TwistParams p;
  const auto iso = twist_isotopy();
  const double h = 1e-6;
  for (double r = 0.6; r < 3.0; r += 0.3) {
    const auto prof = twist_profile(p, r);
    EXPECT_NEAR(prof.d1, (twist_profile(p, r + h).value - twist_profile(p, r - h).value) / (2 * h), 1e-8);
    const Vec x = (Vec(2) << r * 0.6, r * 0.8).finished();
    Vec fd(2);
    for (int i = 0; i < 2; ++i) {
      const Vec e = h * Vec::Unit(2, i);
      fd[i] = (iso.potential(0, Vec(x + e)) - iso.potential(0, Vec(x - e))) / (2 * h);
    }
    EXPECT_LT((fd - iso.gradient(0, x)).norm(), 1e-8);
  }
}

TEST(Isotopies, TwistExactFlowMatchesIntegration) {
  const TwistParams p;
  const auto field = twist_isotopy().field();
  for (double r : {0.7, 1.3, 2.0, 2.8}) {
    const Vec x = (Vec(2) << r, 0.0).finished();
    EXPECT_LT((twist_exact_flow(p, x, 1.0) - reference_flow(field, x, 1.0, 2000)).norm(), 1e-11) << r;
  }
}

TEST(Isotopies, ValidateRejectsBadRadii) {
  auto iso = twist_isotopy();
  iso.b = 0.6;  // not inside the inner ball
  EXPECT_THROW(iso.validate(), StructuralError);
  iso = twist_isotopy(0.3, 0.4);
  EXPECT_THROW(iso.validate(), StructuralError);
  iso = twist_isotopy();
  iso.potential = [](double, const Vec& x) { return x[0]; };
  EXPECT_THROW(iso.validate(), StructuralError);
}

TEST(Carleman, ZeroIsotopyGivesIdentity) {
  const auto res = carleman_step(zero_isotopy(), quick_config());
  const auto& rep = res.report;
  EXPECT_LT(rep.c0, 1e-12);
  EXPECT_LT(rep.c1, 1e-12);
  EXPECT_LT(rep.identity_b, 1e-12);
  EXPECT_LT(rep.max_imag, 1e-12);
  EXPECT_LT(rep.fit_residual, 1e-12);
}

TEST(Carleman, TwistStepIsRealAndSymplectic) {
  const auto res = carleman_step(twist_isotopy(), quick_config());
  EXPECT_EQ(res.report.max_imag, 0.0);
  EXPECT_GT(res.report.primitives, 0u);
  EXPECT_LT(res.report.c0, 0.01);
  for (const auto& x : ball_grid(2, 2.0, 9)) {
    EXPECT_LT(shear_samples::symplectic_residual(res.map.jacobian(x), kOmega), 1e-12);
    const CVec y = res.map.apply(CVec(x.cast<cplx>()));
    EXPECT_EQ(y.imag(), Vec::Zero(2));
  }
}

TEST(Carleman, FitAboveThresholdIsRejectedWithItsSlice) {
  auto cfg = quick_config();
  cfg.fit_degree = 2;
  cfg.fit_threshold = 1e-9;
  try {
    carleman_map(twist_isotopy(), cfg, 2.0);
    FAIL() << "expected rejection";
  } catch (const FitRejectedError& e) {
    EXPECT_EQ(e.slice(), 0);
    EXPECT_GT(e.residual(), 1e-9);
    EXPECT_NE(std::string(e.what()).find("time slice 0"), std::string::npos) << e.what();
  }
}

TEST(Carleman, ExactPolynomialIsotopyHalvesWithTimeSlices) {
  // Slices mix two forms, so both freezing and splitting contribute.
  const PolyPotentialFamily fam = [](double t) {
    return Poly::monomial({1, 1}, 1.0 + t) + Poly::monomial({0, 2}, 0.5 * t);
  };
  const auto iso = polynomial_isotopy(fam, 1.0, 0.0);
  auto cfg = quick_config();
  const auto ref = carleman_reference(iso, cfg, iso.a);
  double prev = 0.0;
  for (int n : {8, 16, 32, 64}) {
    cfg.n_time = n;
    const double c0 = carleman_step(iso, cfg, &ref).report.c0;
    if (prev > 0.0) {
      EXPECT_NEAR(c0 / prev, 0.5, 0.1) << n;
    }
    prev = c0;
  }
}

TEST(Carleman, ParallelRunMatchesSerial) {
  auto cfg = quick_config();
  cfg.n_time = 4;
  cfg.fit_degree = 6;
  const auto serial = carleman_step(twist_isotopy(), cfg).report;
  cfg.parallel = true;
  const auto par = carleman_step(twist_isotopy(), cfg).report;
  EXPECT_EQ(serial.c0, par.c0);
  EXPECT_EQ(serial.c1, par.c1);
  EXPECT_EQ(serial.identity_b, par.identity_b);
}

TEST(Carleman, SchedulesAreDocumented) {
  const auto d = default_schedule();
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(std::pair(d[0].n_time, d[0].fit_degree), std::pair(8, 8));
  EXPECT_EQ(std::pair(d[1].n_time, d[1].fit_degree), std::pair(16, 10));
  EXPECT_EQ(std::pair(d[2].n_time, d[2].fit_degree), std::pair(32, 12));
  const auto s = induction_schedule();
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(std::pair(s[0].n_time, s[0].fit_degree), std::pair(8, 8));
  EXPECT_EQ(s[0].outer_weight, d[0].outer_weight);
  EXPECT_EQ(std::pair(s[2].n_time, s[2].fit_degree), std::pair(32, 20));
}

TEST(Induction, SingleStepIsTheCarlemanStep) {
  const auto cfg = quick_config();
  const auto res = induction_demo(twist_isotopy(), 1, {cfg});
  ASSERT_EQ(res.steps.size(), 1u);
  ASSERT_TRUE(res.error.empty());
  const auto step = carleman_step(twist_isotopy(), cfg);
  EXPECT_EQ(res.steps[0].r1, 2.0);
  EXPECT_EQ(res.steps[0].eps, step.report.c0);
  EXPECT_EQ(res.steps[0].identity_b, step.report.identity_b);
  EXPECT_EQ(res.steps[0].map.size(), step.map.size());
  EXPECT_GE(res.steps[0].r2, 3.0);
}

TEST(Induction, ZeroIsotopyStaysExact) {
  const auto res = induction_demo(zero_isotopy(), 3, induction_schedule(quick_config()));
  ASSERT_EQ(res.steps.size(), 3u);
  for (const auto& s : res.steps) {
    EXPECT_LT(s.eps, 1e-12);
    EXPECT_LT(s.shared_eps, 1e-12);
    EXPECT_LT(s.identity_b, 1e-12);
    EXPECT_EQ(s.max_imag, 0.0);
  }
  EXPECT_EQ(res.steps[1].r1, res.steps[0].r2 + 1.0);
}

TEST(Induction, SecondStepDoesNotLoseAccuracyOnTheSharedBall) {
  const auto res = induction_demo(twist_isotopy(), 2, induction_schedule(quick_config()));
  ASSERT_EQ(res.steps.size(), 2u) << res.error;
  EXPECT_LE(res.steps[1].shared_eps, res.steps[0].shared_eps);
  EXPECT_EQ(res.steps[0].shared_eps, res.steps[0].eps);
  EXPECT_EQ(res.steps[1].max_imag, 0.0);
  EXPECT_GT(res.steps[1].r1, res.steps[0].r1);
}

TEST(Induction, RejectsBadArguments) {
  EXPECT_THROW(induction_demo(zero_isotopy(), 0, default_schedule()), StructuralError);
  EXPECT_THROW(induction_demo(zero_isotopy(), 4, default_schedule()), StructuralError);
  EXPECT_THROW(induction_demo(zero_isotopy(), 3, {CarlemanConfig{}}), StructuralError);
}
