#include "hamcarl/orbit_models.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "hamcarl/errors.hpp"

namespace hamcarl {

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

template <class S>
int chart_index(const Vec3T<S>& g) {
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(g[k]) > std::abs(g[best])) best = k;
  }
  if (std::abs(g[best]) == 0.0) {
    throw StructuralError("KKS chart is singular at this point");
  }
  return best;
}

template <class S>
S chart_value(const OrbitModel& model, const Vec3T<S>& x, const Vec3T<S>& t1,
              const Vec3T<S>& t2) {
  const Vec3T<S> g = model.chart_weights(x);
  const int k = chart_index(g);
  const Vec3T<S> w = t1.cross(t2);
  return w[k] / g[k];
}

Mat tangent_matrix(const OrbitModel& model, const Vec3& x) {
  const auto& alg = model.algebra();
  Mat m(3, 3);
  for (int i = 0; i < 3; ++i) {
    m.col(i) = infinitesimal_coadjoint(alg, alg.basis(i), DualVector{x}).coords;
  }
  return m;
}

Vec3 field(const OrbitModel& model, const AlgebraVector& u, const Vec3& x) {
  return infinitesimal_coadjoint(model.algebra(), u, DualVector{x}).coords;
}

double chart_at(const OrbitModel& model, const Vec3& x, const AlgebraVector& u,
                const AlgebraVector& v) {
  return chart_value<double>(model, x, field(model, u, x), field(model, v, x));
}

}  // namespace

OrbitModel OrbitModel::heisenberg_flat(double level) {
  if (!(level != 0.0) || !std::isfinite(level)) {
    throw StructuralError("Heisenberg orbit level must be finite and nonzero");
  }
  return OrbitModel(OrbitFamily::HeisenbergFlat, level, heisenberg());
}

OrbitModel OrbitModel::sphere(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw StructuralError("sphere radius must be positive, got " + fmt(radius));
  }
  return OrbitModel(OrbitFamily::Sphere, radius, so3());
}

OrbitModel OrbitModel::hyperboloid(double level) {
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw StructuralError("hyperboloid level must be positive, got " + fmt(level));
  }
  return OrbitModel(OrbitFamily::Hyperboloid, level, sl2r());
}

OrbitModel OrbitModel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw StructuralError("orbit spec must look like family:level");
  }
  const std::string family(spec.substr(0, colon));
  const std::string number(spec.substr(colon + 1));
  double level = 0.0;
  std::size_t used = 0;
  try {
    level = std::stod(number, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != number.size()) {
    throw StructuralError("bad orbit level '" + number + "'");
  }
  if (family == "heisenberg") return heisenberg_flat(level);
  if (family == "sphere") return sphere(level);
  if (family == "hyperboloid") return hyperboloid(level);
  throw StructuralError("unknown orbit family '" + family + "'");
}

std::string OrbitModel::name() const {
  switch (family_) {
    case OrbitFamily::HeisenbergFlat:
      return "heisenberg:" + fmt(level_);
    case OrbitFamily::Sphere:
      return "sphere:" + fmt(level_);
    case OrbitFamily::Hyperboloid:
      return "hyperboloid:" + fmt(level_);
  }
  return "";
}

template <class S>
BasicOrbitPoint<S> BasicOrbitPoint<S>::on(const OrbitModel& model,
                                          const Vec3T<S>& coords) {
  const double residual = std::abs(model.invariant(coords));
  if (!(residual < kMembershipTol)) {
    throw StructuralError("point off orbit " + model.name() +
                          ", invariant residual " + fmt(residual));
  }
  if (model.family() == OrbitFamily::Hyperboloid && !(std::real(coords[2]) > 0.0)) {
    throw StructuralError("hyperboloid points need Re(x3) > 0");
  }
  return BasicOrbitPoint(coords);
}

template <class S>
BasicTangentPair<S> BasicTangentPair<S>::at(const OrbitModel& model,
                                            const BasicOrbitPoint<S>& base,
                                            const Vec3T<S>& vector) {
  // Eigen's dot() conjugates its left argument, which is wrong for the
  // holomorphic differential at a complex point.
  const double plain = std::abs(
      (model.invariant_gradient(base.coords()).array() * vector.array()).sum());
  if (!(plain < kTangencyTol)) {
    throw StructuralError("vector not tangent to " + model.name() +
                          ", normal component " + fmt(plain));
  }
  return BasicTangentPair(base, vector);
}

template class BasicOrbitPoint<double>;
template class BasicOrbitPoint<cplx>;
template class BasicTangentPair<double>;
template class BasicTangentPair<cplx>;

TangentPair orbit_tangent(const OrbitModel& model, const OrbitPoint& xi,
                          const AlgebraVector& u) {
  return TangentPair::at(model, xi, field(model, u, xi.coords()));
}

double kks_form(const OrbitModel& model, const OrbitPoint& xi,
                const TangentPair& t1, const TangentPair& t2) {
  return chart_value<double>(model, xi.coords(), t1.vector(), t2.vector());
}

cplx kks_form(const OrbitModel& model, const ComplexOrbitPoint& xi,
              const ComplexTangentPair& t1, const ComplexTangentPair& t2) {
  return chart_value<cplx>(model, xi.coords(), t1.vector(), t2.vector());
}

double kks_form_lie(const OrbitModel& model, const OrbitPoint& xi,
                    const TangentPair& t1, const TangentPair& t2) {
  const Vec3& x = xi.coords();
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(tangent_matrix(model, x));
  const AlgebraVector u{cod.solve(Vec(t1.vector()))};
  const AlgebraVector v{cod.solve(Vec(t2.vector()))};
  return x.dot(bracket(model.algebra(), u, v).coords);
}

std::vector<OrbitPoint> sample_orbit_points(const OrbitModel& model, int count,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<OrbitPoint> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  const double lvl = model.level();
  while (static_cast<int>(out.size()) < count) {
    Vec3 x;
    switch (model.family()) {
      case OrbitFamily::HeisenbergFlat:
        x = Vec3(box(rng), box(rng), lvl);
        break;
      case OrbitFamily::Sphere: {
        Vec3 d(gauss(rng), gauss(rng), gauss(rng));
        const double n = d.norm();
        if (n < 1e-3) continue;
        x = lvl * d / n;
        break;
      }
      case OrbitFamily::Hyperboloid: {
        const double a = box(rng), b = box(rng);
        x = Vec3(a, b, std::sqrt(lvl + a * a + b * b));
        break;
      }
    }
    out.push_back(OrbitPoint::on(model, x));
  }
  return out;
}

std::vector<ComplexOrbitPoint> sample_complex_orbit_points(
    const OrbitModel& model, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  std::vector<ComplexOrbitPoint> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  const double lvl = model.level();
  while (static_cast<int>(out.size()) < count) {
    const cplx z1(box(rng), box(rng));
    const cplx z2(box(rng), box(rng));
    cplx z3;
    switch (model.family()) {
      case OrbitFamily::HeisenbergFlat:
        z3 = lvl;
        break;
      case OrbitFamily::Sphere:
        z3 = std::sqrt(lvl * lvl - z1 * z1 - z2 * z2);
        break;
      case OrbitFamily::Hyperboloid:
        z3 = std::sqrt(lvl + z1 * z1 + z2 * z2);
        if (!(z3.real() > 1e-6)) continue;
        break;
    }
    out.push_back(ComplexOrbitPoint::on(model, CVec3(z1, z2, z3)));
  }
  return out;
}

KksReport check_kks_axioms(const OrbitModel& model, int sample_count,
                           std::uint64_t seed) {
  if (sample_count < 1) throw StructuralError("sample_count must be >= 1");
  constexpr double h = 1e-4;
  const auto& alg = model.algebra();
  const auto points = sample_orbit_points(model, sample_count, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_u = [&] {
    return AlgebraVector{Vec3(gauss(rng), gauss(rng), gauss(rng))};
  };
  auto plus = [](const AlgebraVector& a, const Vec& b) {
    return AlgebraVector{a.coords + b};
  };

  KksReport rep;
  rep.samples = sample_count;
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    const Vec3& x = p.coords();
    const AlgebraVector u = random_u(), v = random_u(), w = random_u();

    // (a) the value does not depend on the algebra representative.
    const Mat kernel = isotropy_kernel(alg, DualVector{x});
    Vec shift_u = Vec::Zero(3), shift_v = Vec::Zero(3);
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
      shift_u += gauss(rng) * kernel.col(c);
      shift_v += gauss(rng) * kernel.col(c);
    }
    const double direct = x.dot(bracket(alg, u, v).coords);
    const double shifted =
        x.dot(bracket(alg, plus(u, shift_u), plus(v, shift_v)).coords);
    const auto t1 = orbit_tangent(model, p, u);
    const auto t2 = orbit_tangent(model, p, v);
    const double pulled = kks_form_lie(model, p, t1, t2);
    const double chart = kks_form(model, p, t1, t2);
    const double scale = std::max(1.0, std::abs(direct));
    rep.well_defined_residual = std::max(
        {rep.well_defined_residual, std::abs(shifted - direct) / scale,
         std::abs(pulled - direct) / scale, std::abs(chart - direct) / scale});

    // (b) Gram matrix of omega on an orthonormal tangent basis.
    Eigen::JacobiSVD<Mat> svd(tangent_matrix(model, x), Eigen::ComputeFullU);
    const Vec3 b1 = svd.matrixU().col(0), b2 = svd.matrixU().col(1);
    const double w12 = chart_value<double>(model, x, b1, b2);
    const double w21 = chart_value<double>(model, x, b2, b1);
    Eigen::Matrix2d gram;
    gram << 0.0, w12, w21, 0.0;
    rep.min_abs_det = std::min(rep.min_abs_det, std::abs(gram.determinant()));

    // (c) six-term formula for d omega on X_u, X_v, X_w. d omega is trilinear,
    // so unit generators keep the difference error on a fixed scale.
    const AlgebraVector du{u.coords.normalized()}, dv{v.coords.normalized()},
        dw{w.coords.normalized()};
    auto along = [&](const AlgebraVector& dir, const AlgebraVector& a,
                     const AlgebraVector& b) {
      const Mat gen = coadjoint_generator(alg, dir);
      const Vec3 xp = matrix_exp(h * gen) * x;
      const Vec3 xm = matrix_exp(-h * gen) * x;
      return (chart_at(model, xp, a, b) - chart_at(model, xm, a, b)) / (2 * h);
    };
    auto omega_vec = [&](const Vec3& y, const AlgebraVector& b) {
      return chart_value<double>(model, x, y, field(model, b, x));
    };
    auto field_bracket = [&](const AlgebraVector& a, const AlgebraVector& b) {
      const Mat ga = coadjoint_generator(alg, a);
      const Mat gb = coadjoint_generator(alg, b);
      return Vec3((gb * ga - ga * gb) * x);
    };
    const double d_omega = along(du, dv, dw) - along(dv, du, dw) + along(dw, du, dv) -
                           omega_vec(field_bracket(du, dv), dw) +
                           omega_vec(field_bracket(du, dw), dv) -
                           omega_vec(field_bracket(dv, dw), du);
    rep.closedness_residual = std::max(rep.closedness_residual, std::abs(d_omega));
  }
  rep.well_defined_ok = rep.well_defined_residual < 1e-9;
  rep.nondegenerate_ok = rep.min_abs_det > 1e-8;
  rep.closed_ok = rep.closedness_residual < 1e-7;
  return rep;
}

double potential_check(const OrbitModel& model, const AlgebraVector& u,
                       int sample_count, std::uint64_t seed) {
  const auto& alg = model.algebra();
  if (u.coords.size() != alg.dim()) {
    throw StructuralError("potential generator has wrong dimension");
  }
  const auto points = sample_orbit_points(model, sample_count, seed);
  std::mt19937_64 rng(seed + 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (const auto& p : points) {
    const Vec3& x = p.coords();
    std::vector<AlgebraVector> vs;
    for (int i = 0; i < alg.dim(); ++i) vs.push_back(alg.basis(i));
    vs.push_back(AlgebraVector{Vec3(gauss(rng), gauss(rng), gauss(rng))});
    const Vec3 xu = field(model, u, x);
    for (const auto& v : vs) {
      const Vec3 xv = field(model, v, x);
      const double du = u.coords.dot(xv);
      const double om = chart_value<double>(model, x, xu, xv);
      worst = std::max(worst, std::abs(du - om));
    }
  }
  return worst;
}

ComplexOrbitPoint tau(const OrbitModel& model, const ComplexOrbitPoint& z) {
  const CVec3 c = z.coords().conjugate();
  return ComplexOrbitPoint::on(model, c);
}

}  // namespace hamcarl
