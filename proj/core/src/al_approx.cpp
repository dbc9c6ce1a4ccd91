#include "hamcarl/al_approx.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "hamcarl/errors.hpp"

namespace hamcarl {

namespace {

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Mat jacobian_of(const MapC1& f, const Vec& x, double h) {
  if (f.jacobian) return f.jacobian(x);
  return finite_difference_jacobian(f.value, x, h);
}

}  // namespace

std::vector<ShearTerm> decompose_field(const Poly& p) {
  std::map<std::pair<int, std::vector<long long>>, double> acc;
  for (const auto& [alpha, a] : p.terms()) {
    const int d = total_degree(alpha);
    if (d == 0) continue;
    for (const auto& w : waring_decompose(alpha)) acc[{d, w.form}] += a * w.coefficient();
  }
  std::vector<ShearTerm> out;
  for (const auto& [key, scale] : acc) {
    if (scale == 0.0) continue;
    Vec c(static_cast<Eigen::Index>(key.second.size()));
    for (std::size_t i = 0; i < key.second.size(); ++i) {
      c[static_cast<Eigen::Index>(i)] = static_cast<double>(key.second[i]);
    }
    out.push_back(ShearTerm{scale, LinearForm{c}, key.first});
  }
  return out;
}

std::vector<std::vector<ShearTerm>> group_by_form(const std::vector<ShearTerm>& terms) {
  std::vector<std::vector<ShearTerm>> groups;
  for (const auto& t : terms) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
      return g.front().form.coeffs == t.form.coeffs;
    });
    if (it == groups.end()) {
      groups.push_back({t});
    } else {
      it->push_back(t);
    }
  }
  return groups;
}

double consistency_residual(const ConsistentAlgorithm& alg, const Vec& x, double h) {
  const Vec d = (alg.stepper(h, x) - alg.stepper(-h, x)) / (2.0 * h);
  return (d - alg.field.value(0.0, x)).norm();
}

ConsistentAlgorithm euler_algorithm(TimeDependentField field) {
  ConsistentAlgorithm alg;
  alg.field = field;
  alg.stepper = [field](double s, const Vec& x) -> Vec { return x + s * field.value(0.0, x); };
  alg.stepper_with_jacobian = [field](double s, const Vec& x) {
    const auto n = x.size();
    return std::make_pair(Vec(x + s * field.value(0.0, x)),
                          Mat(Mat::Identity(n, n) + s * field_jacobian(field, 0.0, x)));
  };
  return alg;
}

ConsistentAlgorithm shear_composition_algorithm(const std::vector<ShearTerm>& terms,
                                                const Mat& omega) {
  ConsistentAlgorithm alg;
  auto one_step = [terms, omega](double s) {
    FlowMap f;
    for (const auto& t : terms) f.then(PrimitiveFlow::shear(t, omega, s));
    return f;
  };
  alg.stepper = [one_step](double s, const Vec& x) { return one_step(s).apply(x); };
  alg.stepper_with_jacobian = [one_step](double s, const Vec& x) {
    return one_step(s).apply_with_jacobian(x);
  };
  std::vector<PolyField> fields;
  const int n = static_cast<int>(omega.rows());
  for (const auto& t : terms) fields.push_back(shear_field(t, omega));
  const PolyField sum = field_sum(fields, n);
  alg.field.value = [sum](double, const Vec& x) { return eval_field(sum, x); };
  std::vector<PolyField> jac;
  for (const auto& comp : sum) {
    PolyField row;
    for (int j = 0; j < n; ++j) row.push_back(comp.derivative(j));
    jac.push_back(std::move(row));
  }
  alg.field.jacobian = [jac, n](double, const Vec& x) {
    Mat out(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out(i, j) = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](x);
    }
    return out;
  };
  return alg;
}

Vec iterate_algorithm(const ConsistentAlgorithm& alg, const Vec& x, double t, int n) {
  if (n < 1) throw StructuralError("iterate_algorithm needs n >= 1");
  const double s = t / n;
  Vec y = x;
  for (int i = 0; i < n; ++i) {
    y = alg.stepper(s, y);
    if (!y.allFinite() || y.norm() > kBlowUpNorm) {
      throw BlowUpError("iteration blew up at step " + std::to_string(i + 1), i * s);
    }
  }
  return y;
}

VariationalResult iterate_algorithm_with_jacobian(const ConsistentAlgorithm& alg, const Vec& x,
                                                  double t, int n) {
  if (n < 1) throw StructuralError("iterate_algorithm needs n >= 1");
  if (!alg.stepper_with_jacobian) throw StructuralError("algorithm has no Jacobian stepper");
  const double s = t / n;
  Vec y = x;
  Mat j = Mat::Identity(x.size(), x.size());
  for (int i = 0; i < n; ++i) {
    auto [next, dj] = alg.stepper_with_jacobian(s, y);
    if (!next.allFinite() || next.norm() > kBlowUpNorm) {
      throw BlowUpError("iteration blew up at step " + std::to_string(i + 1), i * s);
    }
    y = std::move(next);
    j = dj * j;
  }
  return {y, j};
}

namespace {

TimeDependentField frozen(const TimeDependentField& field, double tj) {
  TimeDependentField f;
  f.value = [field, tj](double, const Vec& x) { return field.value(tj, x); };
  if (field.jacobian) f.jacobian = [field, tj](double, const Vec& x) { return field.jacobian(tj, x); };
  return f;
}

}  // namespace

Vec frozen_time_split(const TimeDependentField& field, double t, int n, const Vec& x,
                      int substeps_per_slice) {
  if (n < 1) throw StructuralError("frozen_time_split needs n >= 1");
  Vec y = x;
  for (int j = 0; j < n; ++j) {
    y = reference_flow(frozen(field, j * t / n), y, t / n, substeps_per_slice);
  }
  return y;
}

VariationalResult frozen_time_split_with_jacobian(const TimeDependentField& field, double t,
                                                  int n, const Vec& x, int substeps_per_slice) {
  if (n < 1) throw StructuralError("frozen_time_split needs n >= 1");
  VariationalResult acc{x, Mat::Identity(x.size(), x.size())};
  for (int j = 0; j < n; ++j) {
    auto step = variational_flow(frozen(field, j * t / n), acc.point, t / n, substeps_per_slice);
    acc.point = std::move(step.point);
    acc.jacobian = step.jacobian * acc.jacobian;
  }
  return acc;
}

FlowMap frozen_time_split_map(const PolyPotentialFamily& potential, const Mat& omega, double t,
                              int n, int repeats) {
  if (n < 1 || repeats < 1) throw StructuralError("frozen_time_split_map needs n, repeats >= 1");
  FlowMap map;
  const double dt = t / (static_cast<double>(n) * repeats);
  for (int j = 0; j < n; ++j) {
    const auto groups = group_by_form(decompose_field(potential(j * t / n)));
    for (int r = 0; r < repeats; ++r) {
      for (const auto& g : groups) map.then(PrimitiveFlow::shear(g, omega, dt));
    }
  }
  return map;
}

double CrDiscrepancy::value() const {
  double v = c0;
  if (r >= 1) v = std::max(v, c1);
  if (r >= 2) v = std::max(v, c2);
  return v;
}

void for_each_index(std::size_t count, bool parallel, const std::function<void(std::size_t)>& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (!parallel || hw == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(hw, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

CrDiscrepancy cr_discrepancy_orders(const MapC1& f, const MapC1& g, const std::vector<Vec>& grid,
                                    int r, const CrOptions& options) {
  if (r < 0 || r > 2) throw StructuralError("cr_discrepancy supports r in {0, 1, 2}");
  std::vector<std::array<double, 3>> local(grid.size(), {0.0, 0.0, 0.0});
  for_each_index(grid.size(), options.parallel, [&](std::size_t idx) {
    const Vec& x = grid[idx];
    auto& out = local[idx];
    out[0] = max_abs(Vec(f.value(x) - g.value(x)));
    if (r >= 1) {
      out[1] = max_abs(Mat(jacobian_of(f, x, options.jacobian_step) -
                           jacobian_of(g, x, options.jacobian_step)));
    }
    if (r >= 2) {
      const double h = options.second_order_step;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const Mat df = (jacobian_of(f, xp, options.jacobian_step) -
                        jacobian_of(f, xm, options.jacobian_step)) / (2.0 * h);
        const Mat dg = (jacobian_of(g, xp, options.jacobian_step) -
                        jacobian_of(g, xm, options.jacobian_step)) / (2.0 * h);
        out[2] = std::max(out[2], max_abs(Mat(df - dg)));
      }
    }
  });
  CrDiscrepancy d;
  d.r = r;
  for (const auto& l : local) {
    d.c0 = std::max(d.c0, l[0]);
    d.c1 = std::max(d.c1, l[1]);
    d.c2 = std::max(d.c2, l[2]);
  }
  return d;
}

double cr_discrepancy(const MapC1& f, const MapC1& g, const std::vector<Vec>& grid, int r,
                      const CrOptions& options) {
  return cr_discrepancy_orders(f, g, grid, r, options).value();
}

MapC1 flow_map_c1(const FlowMap& map) {
  return MapC1{[map](const Vec& x) { return map.apply(x); },
               [map](const Vec& x) { return map.jacobian(x); }};
}

MapC1 reference_map(const TimeDependentField& field, double t, int steps) {
  return MapC1{[field, t, steps](const Vec& x) { return reference_flow(field, x, t, steps); },
               [field, t, steps](const Vec& x) { return variational_flow(field, x, t, steps).jacobian; }};
}

std::vector<Vec> box_grid(const Vec& lo, const Vec& hi, int per_axis) {
  if (lo.size() != hi.size() || per_axis < 1) throw StructuralError("bad box grid");
  const auto dim = lo.size();
  std::vector<Vec> out;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    Vec p(dim);
    for (Eigen::Index d = 0; d < dim; ++d) {
      const int k = idx[static_cast<std::size_t>(d)];
      p[d] = per_axis == 1 ? 0.5 * (lo[d] + hi[d]) : lo[d] + (hi[d] - lo[d]) * k / (per_axis - 1);
    }
    out.push_back(std::move(p));
    auto d = static_cast<Eigen::Index>(dim) - 1;
    while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == per_axis) {
      idx[static_cast<std::size_t>(d)] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return out;
}

std::vector<Vec> ball_grid(int dim, double radius, int per_axis) {
  return ball_lattice(dim, radius, per_axis);
}

std::vector<CVec> complex_ball_grid(int n, double radius, int per_axis) {
  std::vector<CVec> out;
  for (const Vec& p : ball_lattice(2 * n, radius, per_axis)) {
    CVec z(n);
    for (int i = 0; i < n; ++i) z[i] = cplx(p[2 * i], p[2 * i + 1]);
    out.push_back(std::move(z));
  }
  return out;
}

double loglog_slope(const std::vector<double>& n, const std::vector<double>& err) {
  if (n.size() != err.size() || n.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(err[i] > 0.0) || !(n[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double x = std::log(n[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

double ConvergenceReport::slope_c0() const {
  std::vector<double> n, e;
  for (const auto& r : rows) {
    n.push_back(r.n);
    e.push_back(r.c0);
  }
  return loglog_slope(n, e);
}

double ConvergenceReport::slope_c1() const {
  std::vector<double> n, e;
  for (const auto& r : rows) {
    n.push_back(r.n);
    e.push_back(r.c1);
  }
  return loglog_slope(n, e);
}

void ConvergenceReport::write_csv(std::ostream& out, bool with_timings) const {
  out << "n,c0_error,c1_error,c2_error_or_blank,seconds\n";
  for (const auto& r : rows) {
    out << r.n << ',' << g17(r.c0) << ',' << g17(r.c1) << ',' << (r.c2 ? g17(*r.c2) : "") << ','
        << (with_timings ? g17(r.seconds) : "") << '\n';
  }
}

ConvergenceReport convergence_study(const std::vector<int>& ns,
                                    const std::function<MapC1(int)>& approx,
                                    const MapC1& reference, const std::vector<Vec>& grid, int r,
                                    const CrOptions& options) {
  ConvergenceReport rep;
  for (int n : ns) {
    const auto start = std::chrono::steady_clock::now();
    const auto d = cr_discrepancy_orders(approx(n), reference, grid, r, options);
    const auto stop = std::chrono::steady_clock::now();
    ConvergenceRow row;
    row.n = n;
    row.c0 = d.c0;
    row.c1 = d.c1;
    if (r >= 2) row.c2 = d.c2;
    row.seconds = std::chrono::duration<double>(stop - start).count();
    rep.rows.push_back(row);
  }
  return rep;
}

void IsotopySpec::validate() const {
  if (!potential || !gradient) throw StructuralError("isotopy needs a potential and its gradient");
  if (!(a > b) || !(b >= 0.0)) throw StructuralError("isotopy radii need a > b >= 0");
  if (!polynomial && !(b < inner_radius)) {
    throw StructuralError("identity ball radius b must be below the inner radius");
  }
  if (inner_radius > 0.0) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 64; ++k) {
      Vec x(2);
      do {
        x << u(rng), u(rng);
      } while (x.norm() > 1.0);
      x *= inner_radius;
      for (double t : {0.0, 0.5, 1.0}) {
        if (potential(t, x) != 0.0) {
          throw StructuralError("isotopy potential does not vanish on the inner ball");
        }
      }
    }
  }
}

TimeDependentField IsotopySpec::field() const {
  const Mat m = hamiltonian_matrix(standard_symplectic(2));
  TimeDependentField f;
  auto grad = gradient;
  f.value = [m, grad](double t, const Vec& x) -> Vec { return m * grad(t, x); };
  if (hessian) {
    auto hess = hessian;
    f.jacobian = [m, hess](double t, const Vec& x) -> Mat { return m * hess(t, x); };
  }
  return f;
}

std::vector<CarlemanConfig> default_schedule(const CarlemanConfig& base) {
  std::vector<CarlemanConfig> out;
  for (auto [n, d] : {std::pair{8, 8}, std::pair{16, 10}, std::pair{32, 12}}) {
    CarlemanConfig c = base;
    c.n_time = n;
    c.fit_degree = d;
    out.push_back(c);
  }
  return out;
}

std::vector<CarlemanConfig> induction_schedule(const CarlemanConfig& base) {
  std::vector<CarlemanConfig> out;
  for (auto [n, d] : {std::pair{8, 8}, std::pair{16, 16}, std::pair{32, 20}}) {
    CarlemanConfig c = base;
    c.n_time = n;
    c.fit_degree = d;
    if (!out.empty()) c.outer_weight = 0.01;
    out.push_back(c);
  }
  return out;
}

CarlemanReference carleman_reference(const IsotopySpec& iso, const CarlemanConfig& config,
                                     double radius) {
  CarlemanReference ref;
  ref.grid = ball_grid(2, radius, config.grid_per_axis);
  ref.images.resize(ref.grid.size());
  ref.jacobians.resize(ref.grid.size());
  const auto field = iso.field();
  const bool second = config.r >= 2;
  if (second) ref.jacobian_offsets.resize(ref.grid.size());
  for_each_index(ref.grid.size(), config.parallel, [&](std::size_t i) {
    auto v = variational_flow(field, ref.grid[i], 1.0, config.reference_substeps);
    ref.images[i] = std::move(v.point);
    ref.jacobians[i] = std::move(v.jacobian);
    if (second) {
      for (int d = 0; d < 2; ++d) {
        for (double sgn : {1.0, -1.0}) {
          Vec x = ref.grid[i];
          x[d] += sgn * ref.second_order_step;
          ref.jacobian_offsets[i].push_back(
              variational_flow(field, x, 1.0, config.reference_substeps).jacobian);
        }
      }
    }
  });
  return ref;
}

FlowMap carleman_map(const IsotopySpec& iso, const CarlemanConfig& config, double radius,
                     double* fit_residual, double* zero_ball_max) {
  if (config.n_time < 1 || config.substeps < 1) {
    throw StructuralError("carleman step needs n_time, substeps >= 1");
  }
  const Mat omega = standard_symplectic(2);
  const int n = config.n_time;
  const double dt = 1.0 / (static_cast<double>(n) * config.substeps);
  double worst_fit = 0.0, worst_zero = 0.0;

  std::vector<Vec> sample_points;
  if (!iso.polynomial) {
    const double rf = radius * (1.0 + config.fit_margin);
    Vec lo(2), hi(2);
    lo << -rf, -rf;
    hi << rf, rf;
    for (auto& p : box_grid(lo, hi, config.fit_grid_per_axis)) {
      if (p.squaredNorm() <= rf * rf * (1.0 + 1e-12)) sample_points.push_back(std::move(p));
    }
  }

  std::vector<std::vector<ShearTerm>> cached;
  FlowMap map;
  for (int j = 0; j < n; ++j) {
    const double tj = static_cast<double>(j) / n;
    std::vector<std::vector<ShearTerm>> groups;
    if (iso.polynomial) {
      groups = group_by_form(decompose_field(iso.polynomial(tj)));
    } else if (iso.autonomous && j > 0) {
      groups = cached;
    } else {
      std::vector<PotentialSample> samples;
      samples.reserve(sample_points.size());
      for (const auto& p : sample_points) {
        const double w = p.norm() > config.tight_radius * (1.0 + config.fit_margin) ? config.outer_weight : 1.0;
        samples.push_back(PotentialSample{p, iso.potential(tj, p), iso.gradient(tj, p), w});
      }
      const RidgeFit fit =
          fit_ridge_potential(samples, iso.inner_radius, config.fit_degree, config.fit);
      if (!(fit.residual <= config.fit_threshold)) {
        throw FitRejectedError("fit rejected at time slice " + std::to_string(j) + " (t = " +
                                   g17(tj) + "): residual " + g17(fit.residual) + " > " +
                                   g17(config.fit_threshold),
                               j, fit.residual);
      }
      worst_fit = std::max(worst_fit, fit.residual);
      worst_zero = std::max(worst_zero, fit.zero_ball_max);
      for (const auto& ridge : fit.ridges) {
        auto terms = ridge_shear_terms(ridge);
        if (!terms.empty()) groups.push_back(std::move(terms));
      }
      cached = groups;
    }
    for (int r = 0; r < config.substeps; ++r) {
      for (const auto& g : groups) map.then(PrimitiveFlow::shear(g, omega, dt));
    }
  }
  if (fit_residual) *fit_residual = worst_fit;
  if (zero_ball_max) *zero_ball_max = worst_zero;
  return map;
}

CarlemanResult carleman_step(const IsotopySpec& iso, const CarlemanConfig& config,
                             const CarlemanReference* reference) {
  iso.validate();
  if (config.r < 0 || config.r > 2) throw StructuralError("carleman step supports r <= 2");
  CarlemanReference local;
  if (!reference) {
    local = carleman_reference(iso, config, iso.a);
    reference = &local;
  }
  CarlemanResult res;
  res.map = carleman_map(iso, config, iso.a, &res.report.fit_residual, &res.report.zero_ball_max);
  auto& rep = res.report;
  rep.n_time = config.n_time;
  rep.fit_degree = config.fit_degree;
  rep.primitives = res.map.size();

  const auto& grid = reference->grid;
  std::vector<std::array<double, 4>> local_err(grid.size(), {0.0, 0.0, 0.0, 0.0});
  for_each_index(grid.size(), config.parallel, [&](std::size_t i) {
    const auto [y, j] = res.map.apply_with_jacobian(grid[i]);
    auto& e = local_err[i];
    e[0] = max_abs(Vec(y - reference->images[i]));
    e[1] = max_abs(Mat(j - reference->jacobians[i]));
    if (config.r >= 2) {
      const double h = reference->second_order_step;
      for (int d = 0; d < 2; ++d) {
        Vec xp = grid[i], xm = grid[i];
        xp[d] += h;
        xm[d] -= h;
        const Mat da = (res.map.jacobian(xp) - res.map.jacobian(xm)) / (2.0 * h);
        const Mat dr = (reference->jacobian_offsets[i][static_cast<std::size_t>(2 * d)] -
                        reference->jacobian_offsets[i][static_cast<std::size_t>(2 * d + 1)]) /
                       (2.0 * h);
        e[2] = std::max(e[2], max_abs(Mat(da - dr)));
      }
    }
    CVec z = grid[i].cast<cplx>();
    e[3] = max_abs(Vec(res.map.apply(z).imag()));
  });
  for (const auto& e : local_err) {
    rep.c0 = std::max(rep.c0, e[0]);
    rep.c1 = std::max(rep.c1, e[1]);
    rep.c2 = std::max(rep.c2, e[2]);
    rep.max_imag = std::max(rep.max_imag, e[3]);
  }
  rep.cr = std::max(rep.c0, config.r >= 1 ? rep.c1 : 0.0);
  if (config.r >= 2) rep.cr = std::max(rep.cr, rep.c2);

  const auto zgrid = complex_ball_grid(2, iso.b, config.complex_grid_per_axis);
  std::vector<double> id_err(zgrid.size(), 0.0);
  for_each_index(zgrid.size(), config.parallel, [&](std::size_t i) {
    id_err[i] = (res.map.apply(zgrid[i]) - zgrid[i]).cwiseAbs().maxCoeff();
  });
  for (double e : id_err) rep.identity_b = std::max(rep.identity_b, e);
  return res;
}

InductionResult induction_demo(const IsotopySpec& iso, int j_max,
                               const std::vector<CarlemanConfig>& schedule) {
  iso.validate();
  if (j_max < 1 || j_max > 3) throw StructuralError("induction_demo supports 1 <= j_max <= 3");
  if (static_cast<int>(schedule.size()) < j_max) {
    throw StructuralError("schedule has fewer entries than j_max");
  }
  InductionResult out;
  const auto base_ref = carleman_reference(iso, schedule.front(), iso.a);
  const auto zgrid = complex_ball_grid(2, iso.b, schedule.front().complex_grid_per_axis);
  double r1 = iso.a;
  std::vector<Vec> prev_grid;
  for (int j = 1; j <= j_max; ++j) {
    auto cfg = schedule[static_cast<std::size_t>(j - 1)];
    if (j > 1) cfg.tight_radius = out.steps.back().r1;
    InductionStep step;
    step.j = j;
    step.r1 = r1;
    try {
      const auto ref = j == 1 ? base_ref : carleman_reference(iso, cfg, r1);
      step.map = carleman_map(iso, cfg, r1);
      double image_radius = 0.0;
      for (std::size_t i = 0; i < ref.grid.size(); ++i) {
        const Vec y = step.map.apply(ref.grid[i]);
        step.eps = std::max(step.eps, max_abs(Vec(y - ref.images[i])));
        image_radius = std::max(image_radius, y.norm());
        step.max_imag = std::max(step.max_imag, max_abs(Vec(step.map.apply(CVec(ref.grid[i].cast<cplx>())).imag())));
      }
      step.r2 = std::max(r1 + 1.0, std::ceil(image_radius));
      for (std::size_t i = 0; i < base_ref.grid.size(); ++i) {
        step.shared_eps = std::max(
            step.shared_eps, max_abs(Vec(step.map.apply(base_ref.grid[i]) - base_ref.images[i])));
      }
      for (const auto& z : zgrid) {
        step.identity_b = std::max(step.identity_b, (step.map.apply(z) - z).cwiseAbs().maxCoeff());
      }
      if (j > 1) {
        const auto& prev = out.steps.back().map;
        for (const auto& x : prev_grid) {
          step.step_change = std::max(step.step_change, max_abs(Vec(step.map.apply(x) - prev.apply(x))));
        }
      }
      prev_grid = ref.grid;
    } catch (const std::exception& e) {
      out.error = "induction step " + std::to_string(j) + ": " + e.what();
      break;
    }
    out.steps.push_back(std::move(step));
    r1 = out.steps.back().r2 + 1.0;
  }
  return out;
}

}  // namespace hamcarl
