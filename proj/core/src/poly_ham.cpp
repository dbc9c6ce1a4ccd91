#include "hamcarl/poly_ham.hpp"

#include <array>
#include <boost/integer/common_factor.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "hamcarl/errors.hpp"

namespace hamcarl {

namespace {

using Rational = boost::rational<long long>;
using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Exact expansion of sum_k b_k (c_k . u)^d.
std::map<MultiIndex, Rational> expand_exact(int nvars, const std::vector<WaringTerm>& terms,
                                            int d) {
  std::map<MultiIndex, Rational> total;
  for (const auto& t : terms) {
    std::map<MultiIndex, Rational> power{{MultiIndex(static_cast<std::size_t>(nvars), 0), 1}};
    for (int step = 0; step < d; ++step) {
      std::map<MultiIndex, Rational> next;
      for (const auto& [alpha, a] : power) {
        for (int i = 0; i < nvars; ++i) {
          if (t.form[static_cast<std::size_t>(i)] == 0) continue;
          MultiIndex b = alpha;
          ++b[static_cast<std::size_t>(i)];
          next[b] += a * Rational(t.form[static_cast<std::size_t>(i)]);
        }
      }
      power = std::move(next);
    }
    for (const auto& [alpha, a] : power) total[alpha] += Rational(t.num, t.den) * a;
  }
  for (auto it = total.begin(); it != total.end();) {
    it = it->second.numerator() == 0 ? total.erase(it) : std::next(it);
  }
  return total;
}

// Legendre P_k and P_k' for k = 0..deg at t.
template <class S>
void legendre(int deg, S t, std::vector<S>& p, std::vector<S>& dp) {
  p.assign(static_cast<std::size_t>(deg) + 1, S(0));
  dp.assign(static_cast<std::size_t>(deg) + 1, S(0));
  p[0] = S(1);
  if (deg >= 1) {
    p[1] = t;
    dp[1] = S(1);
  }
  for (int k = 1; k < deg; ++k) {
    p[k + 1] = (S(2 * k + 1) * t * p[k] - S(k) * p[k - 1]) / S(k + 1);
    dp[k + 1] = S(k + 1) * p[k] + t * dp[k];
  }
}

// Power-basis coefficients of P_0..P_deg.
std::vector<std::vector<double>> legendre_coefficients(int deg) {
  std::vector<std::vector<double>> c(static_cast<std::size_t>(deg) + 1,
                                     std::vector<double>(static_cast<std::size_t>(deg) + 1, 0.0));
  c[0][0] = 1.0;
  if (deg >= 1) c[1][1] = 1.0;
  for (int k = 1; k < deg; ++k) {
    for (int e = 0; e <= deg; ++e) {
      double v = -static_cast<double>(k) * c[k - 1][e];
      if (e >= 1) v += static_cast<double>(2 * k + 1) * c[k][e - 1];
      c[k + 1][e] = v / static_cast<double>(k + 1);
    }
  }
  return c;
}

std::vector<CVec> zero_ball_points(int nvars, double radius, const FitOptions& opt) {
  std::vector<CVec> out;
  if (radius <= 0.0 || opt.zero_ball_weight <= 0.0) return out;
  const int dim = opt.complex_zero_ball ? 2 * nvars : nvars;
  for (const Vec& p : ball_lattice(dim, radius, opt.zero_ball_points_per_axis)) {
    CVec z(nvars);
    for (int i = 0; i < nvars; ++i) {
      z[i] = opt.complex_zero_ball ? cplx(p[2 * i], p[2 * i + 1]) : cplx(p[i], 0.0);
    }
    out.push_back(std::move(z));
  }
  return out;
}

void check_samples(const std::vector<PotentialSample>& samples) {
  if (samples.empty()) throw StructuralError("fit needs at least one sample");
  const auto n = samples.front().point.size();
  for (const auto& s : samples) {
    if (s.point.size() != n) throw StructuralError("samples have mixed dimensions");
    if (!std::isfinite(s.value) || !s.point.allFinite()) {
      throw StructuralError("fit samples must be finite");
    }
    if (s.gradient.size() != 0 && s.gradient.size() != n) {
      throw StructuralError("sample gradient has wrong dimension");
    }
  }
}

double sample_scale(const std::vector<PotentialSample>& samples, double radius) {
  double s = radius;
  for (const auto& p : samples) s = std::max(s, p.point.norm());
  return s > 0.0 ? s : 1.0;
}

}  // namespace

std::vector<WaringTerm> waring_decompose(const MultiIndex& alpha) {
  const int d = total_degree(alpha);
  if (d < 1) throw StructuralError("waring_decompose needs |alpha| >= 1");
  for (int e : alpha) {
    if (e < 0) throw StructuralError("negative exponent in multi-index");
  }
  const auto nvars = alpha.size();
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < nvars; ++i) {
    for (int r = 0; r < alpha[i]; ++r) coords.push_back(i);
  }
  long long norm = 1;
  for (int k = 1; k <= d; ++k) norm *= k;
  norm <<= (d - 1);

  std::map<std::vector<long long>, Rational> merged;
  for (unsigned long mask = 0; mask < (1UL << (d - 1)); ++mask) {
    std::vector<long long> form(nvars, 0);
    int sign = 1;
    for (int k = 0; k < d; ++k) {
      const int eps = (k > 0 && ((mask >> (k - 1)) & 1UL)) ? -1 : 1;
      sign *= eps;
      form[coords[static_cast<std::size_t>(k)]] += eps;
    }
    long long g = 0;
    for (long long c : form) g = boost::integer::gcd(g, c < 0 ? -c : c);
    if (g == 0) continue;
    Rational coeff(sign, norm);
    long long lead = 0;
    for (auto& c : form) {
      c /= g;
      if (lead == 0) lead = c;
    }
    long long gd = 1;
    for (int k = 0; k < d; ++k) gd *= g;
    coeff *= gd;
    if (lead < 0) {
      for (auto& c : form) c = -c;
      if (d % 2 == 1) coeff = -coeff;
    }
    merged[form] += coeff;
  }
  std::vector<WaringTerm> out;
  for (const auto& [form, coeff] : merged) {
    if (coeff.numerator() == 0) continue;
    out.push_back(WaringTerm{coeff.numerator(), coeff.denominator(), form});
  }
  return out;
}

bool waring_identity_holds(const MultiIndex& alpha, const std::vector<WaringTerm>& terms) {
  const int nvars = static_cast<int>(alpha.size());
  const auto total = expand_exact(nvars, terms, total_degree(alpha));
  return total.size() == 1 && total.begin()->first == alpha && total.begin()->second.numerator() == 1 && total.begin()->second.denominator() == 1;
}

Mat standard_symplectic(int dim) {
  if (dim <= 0 || dim % 2 != 0) throw StructuralError("symplectic dimension must be even");
  const int n = dim / 2;
  Mat o = Mat::Zero(dim, dim);
  o.topRightCorner(n, n) = Mat::Identity(n, n);
  o.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return o;
}

Mat hamiltonian_matrix(const Mat& omega) {
  if (omega.rows() != omega.cols() || omega.rows() == 0) {
    throw StructuralError("symplectic matrix must be square");
  }
  if (!(omega + omega.transpose()).isZero(0.0)) {
    throw StructuralError("symplectic matrix must be antisymmetric");
  }
  Eigen::FullPivLU<Mat> lu(omega.transpose());
  if (!lu.isInvertible()) throw StructuralError("symplectic matrix is singular");
  return lu.inverse();
}

PolyField hamiltonian_field_flat(const Poly& p, const Mat& omega) {
  const int n = p.nvars();
  if (omega.rows() != n) throw StructuralError("symplectic matrix size differs from variable count");
  if (n % 2 != 0) throw StructuralError("flat model needs an even number of variables");
  const Mat m = hamiltonian_matrix(omega);
  std::vector<Poly> grad;
  for (int j = 0; j < n; ++j) grad.push_back(p.derivative(j));
  PolyField x(static_cast<std::size_t>(n), Poly(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m(i, j) != 0.0) x[static_cast<std::size_t>(i)] += m(i, j) * grad[static_cast<std::size_t>(j)];
    }
  }
  return x;
}

Vec eval_field(const PolyField& field, const Vec& x) {
  Vec out(static_cast<Eigen::Index>(field.size()));
  for (std::size_t i = 0; i < field.size(); ++i) out[static_cast<Eigen::Index>(i)] = field[i](x);
  return out;
}

Poly linear_form_poly(const LinearForm& f) {
  const int n = static_cast<int>(f.coeffs.size());
  Poly p(n);
  for (int i = 0; i < n; ++i) {
    MultiIndex a(static_cast<std::size_t>(n), 0);
    a[static_cast<std::size_t>(i)] = 1;
    p.add_term(a, f.coeffs[i]);
  }
  return p;
}

Poly shear_potential(const ShearTerm& term) {
  return term.scale * linear_form_poly(term.form).pow(term.power);
}

PolyField shear_field(const ShearTerm& term, const Mat& omega) {
  return hamiltonian_field_flat(shear_potential(term), omega);
}

PolyField shear_field_closed_form(const ShearTerm& term, const Mat& omega) {
  const Vec v = hamiltonian_matrix(omega) * term.form.coeffs;
  const Poly g = (term.scale * term.power) * linear_form_poly(term.form).pow(term.power - 1);
  PolyField out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i] * g);
  return out;
}

PolyField field_sum(const std::vector<PolyField>& fields, int nvars) {
  PolyField out(static_cast<std::size_t>(nvars), Poly(nvars));
  for (const auto& f : fields) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += f[i];
  }
  return out;
}

double max_field_distance(const PolyField& a, const PolyField& b) {
  if (a.size() != b.size()) throw StructuralError("fields have different dimensions");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, a[i].max_coefficient_distance(b[i]));
  }
  return worst;
}

Poly real_symmetrize(const ComplexPoly& q) { return real_part(q); }

std::vector<Vec> ball_lattice(int dim, double radius, int per_axis) {
  std::vector<Vec> out;
  if (dim <= 0 || per_axis <= 0) return out;
  std::vector<double> axis(static_cast<std::size_t>(per_axis));
  for (int i = 0; i < per_axis; ++i) {
    axis[static_cast<std::size_t>(i)] =
        per_axis == 1 ? 0.0 : -radius + 2.0 * radius * i / (per_axis - 1);
  }
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  const double limit = radius * radius * (1.0 + 1e-12);
  while (true) {
    Vec p(dim);
    for (int d = 0; d < dim; ++d) p[d] = axis[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
    if (p.squaredNorm() <= limit) out.push_back(std::move(p));
    int d = dim - 1;
    while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == per_axis) {
      idx[static_cast<std::size_t>(d)] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return out;
}

PolyFit fit_potential(const std::vector<PotentialSample>& samples, double zero_ball_radius,
                      int degree, const FitOptions& options) {
  check_samples(samples);
  if (degree < 0) throw StructuralError("fit degree must be nonnegative");
  const int n = static_cast<int>(samples.front().point.size());
  const auto basis = monomials_up_to(n, 0, degree);
  const auto m = static_cast<Eigen::Index>(basis.size());
  if (static_cast<std::size_t>(m) > samples.size()) {
    throw StructuralError("degree " + std::to_string(degree) + " needs " + std::to_string(m) +
                          " samples, got " + std::to_string(samples.size()));
  }
  const double s = sample_scale(samples, zero_ball_radius);
  const auto zeros = zero_ball_points(n, zero_ball_radius, options);

  auto mono = [&](const auto& x, const MultiIndex& alpha) {
    using S = std::decay_t<decltype(x[0])>;
    S v = S(1);
    for (int i = 0; i < n; ++i) {
      for (int e = 0; e < alpha[static_cast<std::size_t>(i)]; ++e) v *= x[i] / s;
    }
    return v;
  };

  std::vector<std::pair<std::vector<cplx>, cplx>> rows;
  for (const auto& smp : samples) {
    std::vector<cplx> r(static_cast<std::size_t>(m));
    for (Eigen::Index c = 0; c < m; ++c) r[static_cast<std::size_t>(c)] = mono(smp.point, basis[static_cast<std::size_t>(c)]);
    const double vw = options.value_weight * smp.weight;
    if (vw > 0.0) {
      for (auto& v : r) v *= vw;
      rows.emplace_back(std::move(r), vw * smp.value);
    }
    if (smp.gradient.size() == n && options.gradient_weight > 0.0) {
      const double gw = options.gradient_weight * smp.weight;
      for (int i = 0; i < n; ++i) {
        std::vector<cplx> g(static_cast<std::size_t>(m));
        for (Eigen::Index c = 0; c < m; ++c) {
          MultiIndex a = basis[static_cast<std::size_t>(c)];
          const int e = a[static_cast<std::size_t>(i)];
          if (e == 0) continue;
          --a[static_cast<std::size_t>(i)];
          g[static_cast<std::size_t>(c)] = gw * e * mono(smp.point, a) / s;
        }
        rows.emplace_back(std::move(g), gw * smp.gradient[i]);
      }
    }
  }
  for (const auto& z : zeros) {
    std::vector<cplx> r(static_cast<std::size_t>(m));
    for (Eigen::Index c = 0; c < m; ++c) {
      r[static_cast<std::size_t>(c)] = options.zero_ball_weight * mono(z, basis[static_cast<std::size_t>(c)]);
    }
    rows.emplace_back(std::move(r), 0.0);
  }

  CMat a(static_cast<Eigen::Index>(rows.size()), m);
  CVec rhs(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Eigen::Index c = 0; c < m; ++c) a(static_cast<Eigen::Index>(r), c) = rows[r].first[static_cast<std::size_t>(c)];
    rhs[static_cast<Eigen::Index>(r)] = rows[r].second;
  }
  Eigen::ColPivHouseholderQR<CMat> qr(a);
  qr.setThreshold(options.rank_threshold);
  if (qr.rank() < m) {
    throw RankDeficientError("degree " + std::to_string(degree) + " fit: design matrix rank " +
                             std::to_string(qr.rank()) + " < " + std::to_string(m) + " monomials");
  }
  const CVec coef = qr.solve(rhs);
  ComplexPoly q(n);
  for (Eigen::Index c = 0; c < m; ++c) {
    const auto& alpha = basis[static_cast<std::size_t>(c)];
    q.add_term(alpha, coef[c] / std::pow(s, total_degree(alpha)));
  }
  PolyFit fit{real_symmetrize(q), 0.0, 0.0};
  for (const auto& smp : samples) {
    double e = 0.0;
    if (options.value_weight > 0.0) {
      e = std::abs(fit.poly(smp.point) - smp.value);
    } else if (smp.gradient.size() == n) {
      e = (fit.poly.gradient_at(smp.point) - smp.gradient).cwiseAbs().maxCoeff();
    }
    fit.residual = std::max(fit.residual, smp.weight * e);
  }
  for (const auto& z : zeros) fit.zero_ball_max = std::max(fit.zero_ball_max, std::abs(fit.poly(z)));
  return fit;
}

Poly RidgeFit::expanded(int nvars) const {
  Poly out(nvars);
  for (const auto& r : ridges) {
    const Poly f = linear_form_poly(r.form);
    for (const auto& [alpha, a] : r.profile.terms()) out += a * f.pow(alpha[0]);
  }
  return out;
}

RidgeFit fit_ridge_potential(const std::vector<PotentialSample>& samples, double zero_ball_radius,
                             int degree, const FitOptions& options) {
  check_samples(samples);
  if (samples.front().point.size() != 2) throw StructuralError("ridge fits are planar");
  if (degree < 1) throw StructuralError("ridge fit degree must be >= 1");
  const int nd = degree + 1;
  const Eigen::Index m = static_cast<Eigen::Index>(nd) * degree;
  const Eigen::Index expected_rank = static_cast<Eigen::Index>(degree) * (degree + 3) / 2;
  if (static_cast<Eigen::Index>(samples.size()) < expected_rank) {
    throw StructuralError("degree " + std::to_string(degree) + " needs " +
                          std::to_string(expected_rank) + " samples, got " +
                          std::to_string(samples.size()));
  }
  const double s = sample_scale(samples, zero_ball_radius);
  const double pi = std::acos(-1.0);
  std::vector<Vec> dirs;
  for (int j = 0; j < nd; ++j) {
    const double th = j * pi / nd;
    dirs.push_back((Vec(2) << std::cos(th), std::sin(th)).finished());
  }
  std::vector<double> p0, dp0;
  legendre(degree, 0.0, p0, dp0);

  auto value_row = [&](const auto& x, double w) {
    using S = std::decay_t<decltype(x[0])>;
    std::vector<cplx> r(static_cast<std::size_t>(m));
    std::vector<S> p, dp;
    for (int j = 0; j < nd; ++j) {
      const S t = (dirs[static_cast<std::size_t>(j)][0] * x[0] + dirs[static_cast<std::size_t>(j)][1] * x[1]) / s;
      legendre(degree, t, p, dp);
      for (int k = 1; k <= degree; ++k) {
        r[static_cast<std::size_t>(j * degree + k - 1)] = w * (p[k] - p0[k]);
      }
    }
    return r;
  };

  std::vector<std::pair<std::vector<cplx>, cplx>> rows;
  for (const auto& smp : samples) {
    const double vw = options.value_weight * smp.weight;
    if (vw > 0.0) rows.emplace_back(value_row(smp.point, vw), vw * smp.value);
    if (smp.gradient.size() == 2 && options.gradient_weight > 0.0) {
      const double gw = options.gradient_weight * smp.weight;
      std::vector<double> p, dp;
      std::vector<cplx> gx(static_cast<std::size_t>(m)), gy(static_cast<std::size_t>(m));
      for (int j = 0; j < nd; ++j) {
        const Vec& c = dirs[static_cast<std::size_t>(j)];
        legendre(degree, c.dot(smp.point) / s, p, dp);
        for (int k = 1; k <= degree; ++k) {
          const double g = gw * dp[k] / s;
          gx[static_cast<std::size_t>(j * degree + k - 1)] = g * c[0];
          gy[static_cast<std::size_t>(j * degree + k - 1)] = g * c[1];
        }
      }
      rows.emplace_back(std::move(gx), gw * smp.gradient[0]);
      rows.emplace_back(std::move(gy), gw * smp.gradient[1]);
    }
  }
  const auto zeros = zero_ball_points(2, zero_ball_radius, options);
  for (const auto& z : zeros) rows.emplace_back(value_row(z, options.zero_ball_weight), 0.0);

  CMat a(static_cast<Eigen::Index>(rows.size()), m);
  CVec rhs(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Eigen::Index c = 0; c < m; ++c) a(static_cast<Eigen::Index>(r), c) = rows[r].first[static_cast<std::size_t>(c)];
    rhs[static_cast<Eigen::Index>(r)] = rows[r].second;
  }
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(a);
  cod.setThreshold(options.rank_threshold);
  if (cod.rank() < expected_rank) {
    throw RankDeficientError("degree " + std::to_string(degree) + " ridge fit: rank " +
                             std::to_string(cod.rank()) + " < " + std::to_string(expected_rank));
  }
  const CVec coef = cod.solve(rhs);

  const auto leg = legendre_coefficients(degree);
  RidgeFit fit;
  for (int j = 0; j < nd; ++j) {
    ComplexPoly profile(1);
    for (int e = 1; e <= degree; ++e) {
      cplx c = 0.0;
      for (int k = e; k <= degree; ++k) {
        c += coef[j * degree + k - 1] * leg[static_cast<std::size_t>(k)][static_cast<std::size_t>(e)];
      }
      profile.add_term(MultiIndex{e}, c / std::pow(s, e));
    }
    fit.ridges.push_back(RidgeTerm{LinearForm{dirs[static_cast<std::size_t>(j)]}, real_symmetrize(profile)});
  }
  auto evaluate = [&](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    S v = S(0);
    for (const auto& r : fit.ridges) {
      const S t = r.form(x);
      v += r.profile(std::array<S, 1>{t});
    }
    return v;
  };
  for (const auto& smp : samples) {
    fit.residual = std::max(fit.residual, smp.weight * std::abs(evaluate(smp.point) - smp.value));
  }
  for (const auto& z : zeros) fit.zero_ball_max = std::max(fit.zero_ball_max, std::abs(evaluate(z)));
  return fit;
}

std::vector<ShearTerm> ridge_shear_terms(const RidgeTerm& ridge) {
  std::vector<ShearTerm> out;
  for (const auto& [alpha, a] : ridge.profile.terms()) {
    if (alpha[0] >= 1) out.push_back(ShearTerm{a, ridge.form, alpha[0]});
  }
  return out;
}

double smooth_step(double t) {
  auto g = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = g(t), b = g(1.0 - t);
  return a / (a + b);
}

double smooth_step_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  const double da = a / (t * t), db = -b / ((1.0 - t) * (1.0 - t));
  const double den = a + b;
  return (da * den - a * (da + db)) / (den * den);
}

double smooth_step_second_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = 1.0 - t;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / u);
  const double da = a / (t * t), db = -b / (u * u);
  const double dda = a * (1.0 - 2.0 * t) / (t * t * t * t);
  const double ddb = b * (2.0 * t - 1.0) / (u * u * u * u);
  const double d = a + b, dd = da + db;
  return ((dda * b - a * ddb) * d - 2.0 * (da * b - a * db) * dd) / (d * d * d);
}

Cutoff::Cutoff(double inner) : Cutoff(inner, inner + 1.0) {}

Cutoff::Cutoff(double inner, double outer) : inner_(inner), outer_(outer) {
  if (!(outer > inner) || !(inner >= 0.0)) {
    throw StructuralError("cutoff needs 0 <= inner < outer");
  }
}

double Cutoff::radial(double r) const { return smooth_step((r - inner_) / (outer_ - inner_)); }

double Cutoff::radial_derivative(double r) const {
  return smooth_step_derivative((r - inner_) / (outer_ - inner_)) / (outer_ - inner_);
}

Vec Cutoff::gradient(const Vec& x) const {
  const double r = x.norm();
  if (r <= inner_ || r >= outer_) return Vec::Zero(x.size());
  return radial_derivative(r) / r * x;
}

SmoothPotential cutoff_apply(const Cutoff& chi, const SmoothPotential& p) {
  SmoothPotential out;
  out.value = [chi, p](const Vec& x) {
    const double c = chi(x);
    return c == 0.0 ? 0.0 : c * p.value(x);
  };
  out.gradient = [chi, p](const Vec& x) {
    const double c = chi(x);
    if (c == 0.0) return Vec(Vec::Zero(x.size()));
    Vec g = c * p.gradient(x);
    if (c != 1.0) g += p.value(x) * chi.gradient(x);
    return g;
  };
  return out;
}

}  // namespace hamcarl
