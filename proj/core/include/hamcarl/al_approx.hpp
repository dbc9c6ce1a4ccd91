#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hamcarl/flow_engine.hpp"
#include "hamcarl/poly_ham.hpp"

namespace hamcarl {

// Splits X_P into complete shear fields. Each monomial is expanded with
// waring_decompose; terms with equal (power, form) are merged and zero scales
// dropped. Constants are ignored. The result is ordered by power, then by the
// integer form in lexicographic order; this is also the composition order of
// shear_composition_algorithm.
std::vector<ShearTerm> decompose_field(const Poly& p);

// Groups terms that share a form (their flows commute), keeping first-seen
// order of the forms.
std::vector<std::vector<ShearTerm>> group_by_form(const std::vector<ShearTerm>& terms);

struct ConsistentAlgorithm {
  // psi(s, x) with psi(0, .) = id.
  std::function<Vec(double, const Vec&)> stepper;
  // Optional: psi(s, x) together with its Jacobian in x.
  std::function<std::pair<Vec, Mat>(double, const Vec&)> stepper_with_jacobian;
  TimeDependentField field;
};

// |d/ds psi(s, x)|_{s=0} - X(x)| by central differences.
double consistency_residual(const ConsistentAlgorithm& alg, const Vec& x, double h = 1e-6);

ConsistentAlgorithm euler_algorithm(TimeDependentField autonomous_field);

// One step is the ordered composition of the exact shear flows of `terms`,
// first term applied first.
ConsistentAlgorithm shear_composition_algorithm(const std::vector<ShearTerm>& terms,
                                                const Mat& omega);

// psi(t/n, .)^n (x), with the blow-up guard after every step.
Vec iterate_algorithm(const ConsistentAlgorithm& alg, const Vec& x, double t, int n);
VariationalResult iterate_algorithm_with_jacobian(const ConsistentAlgorithm& alg, const Vec& x,
                                                  double t, int n);

// Composition of n flows of the field frozen at the left end of each slice,
// each frozen flow integrated by RK4 with substeps_per_slice steps.
Vec frozen_time_split(const TimeDependentField& field, double t, int n, const Vec& x,
                      int substeps_per_slice = 64);
VariationalResult frozen_time_split_with_jacobian(const TimeDependentField& field, double t,
                                                  int n, const Vec& x,
                                                  int substeps_per_slice = 64);

using PolyPotentialFamily = std::function<Poly(double)>;

// Frozen-time splitting of a polynomial potential family as an exact FlowMap:
// slice j freezes P at t_j = j t / n, decomposes it and applies the ordered
// shear composition `repeats` times with step t / (n repeats). When all terms
// of a slice share one form the slice flow is exact for any repeats.
FlowMap frozen_time_split_map(const PolyPotentialFamily& potential, const Mat& omega, double t,
                              int n, int repeats = 1);

// A map with optional closed-form Jacobian.
struct MapC1 {
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> jacobian;
};

struct CrDiscrepancy {
  int r = 0;
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  // max over orders 0..r
  double value() const;
};

struct CrOptions {
  double jacobian_step = kJacobianStep;  // when no closed-form Jacobian exists
  double second_order_step = 1e-4;       // differencing Jacobians for r = 2
  bool parallel = false;
};

// Sup over the grid of max-abs entries of F - G and of their derivatives up
// to order r <= 2.
CrDiscrepancy cr_discrepancy_orders(const MapC1& f, const MapC1& g, const std::vector<Vec>& grid,
                                    int r, const CrOptions& options = {});
double cr_discrepancy(const MapC1& f, const MapC1& g, const std::vector<Vec>& grid, int r,
                      const CrOptions& options = {});

MapC1 flow_map_c1(const FlowMap& map);
// x -> phi_t(x) by RK4, Jacobian by the variational equation.
MapC1 reference_map(const TimeDependentField& field, double t, int steps);

std::vector<Vec> box_grid(const Vec& lo, const Vec& hi, int per_axis);
std::vector<Vec> ball_grid(int dim, double radius, int per_axis);
// Lattice of the radius ball of C^n viewed as R^{2n}.
std::vector<CVec> complex_ball_grid(int n, double radius, int per_axis);

struct ConvergenceRow {
  int n = 0;
  double c0 = 0.0;
  double c1 = 0.0;
  std::optional<double> c2;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  // Least-squares slope of log(error) against log(n) over all rows; NaN with
  // fewer than three rows or any zero error.
  double slope_c0() const;
  double slope_c1() const;
  // Columns n, c0_error, c1_error, c2_error_or_blank, seconds; %.17g. The
  // seconds column is left blank unless with_timings is set, so that reruns
  // produce identical files.
  void write_csv(std::ostream& out, bool with_timings = false) const;
};

double loglog_slope(const std::vector<double>& n, const std::vector<double>& err);

// Runs approx(n) against reference on the grid for every n.
ConvergenceReport convergence_study(const std::vector<int>& ns,
                                    const std::function<MapC1(int)>& approx,
                                    const MapC1& reference, const std::vector<Vec>& grid, int r,
                                    const CrOptions& options = {});

// Time-dependent potential on R^2 with the standard form dx ^ dy.
struct IsotopySpec {
  std::string name;
  std::function<double(double, const Vec&)> potential;
  std::function<Vec(double, const Vec&)> gradient;
  std::function<Mat(double, const Vec&)> hessian;  // optional
  // Exact polynomial potential; when set, slices are decomposed directly and
  // no fitting takes place.
  PolyPotentialFamily polynomial;
  bool autonomous = false;
  double inner_radius = 0.5;  // potential vanishes on this ball
  double support_radius = 3.0;
  double a = 2.0;  // approximation ball
  double b = 0.4;  // identity ball

  // Throws StructuralError on a <= b, b >= inner_radius (fitted isotopies)
  // or a potential that does not vanish on sampled points of the inner ball.
  void validate() const;
  TimeDependentField field() const;
};

// Fit defaults for Carleman steps: gradient rows weigh more than in the
// generic fit since the step error is driven by the fitted field.
inline FitOptions carleman_fit_options() {
  FitOptions o;
  o.gradient_weight = 8.0;
  return o;
}

struct CarlemanConfig {
  int n_time = 8;
  int fit_degree = 8;
  // Shear-composition repeats per time slice.
  int substeps = 4;
  // Lattice points per axis for the real a-ball grid and the complex b-ball.
  int grid_per_axis = 21;
  int complex_grid_per_axis = 7;
  // Fit samples: square grid clipped to the disk of radius a (1 + margin).
  int fit_grid_per_axis = 41;
  double fit_margin = 0.125;
  // Position-dependent tolerance: fit samples beyond
  // tight_radius (1 + fit_margin) get weight outer_weight.
  double tight_radius = std::numeric_limits<double>::infinity();
  double outer_weight = 1.0;
  FitOptions fit = carleman_fit_options();
  double fit_threshold = 0.05;
  int reference_substeps = 10000;
  int r = 1;
  bool parallel = false;
};

struct CarlemanReport {
  int n_time = 0;
  int fit_degree = 0;
  double c0 = 0.0;  // (i) on the a-ball
  double c1 = 0.0;
  double c2 = 0.0;  // only for r = 2
  double cr = 0.0;
  double identity_b = 0.0;  // (ii) on the complex b-ball
  double max_imag = 0.0;    // (iii)
  double fit_residual = 0.0;
  double zero_ball_max = 0.0;
  std::size_t primitives = 0;
};

// Reference flow of the isotopy on the a-ball grid, reusable across levels.
struct CarlemanReference {
  std::vector<Vec> grid;
  std::vector<Vec> images;
  std::vector<Mat> jacobians;
  std::vector<std::vector<Mat>> jacobian_offsets;  // r = 2: J at x +- h e_i
  double second_order_step = 1e-4;
};

CarlemanReference carleman_reference(const IsotopySpec& iso, const CarlemanConfig& config,
                                     double radius);

// Builds the approximating FlowMap only: time slices, fit or decomposition,
// and shear composition. Throws FitRejectedError naming the slice whose fit
// residual exceeds the threshold.
FlowMap carleman_map(const IsotopySpec& iso, const CarlemanConfig& config, double radius,
                     double* fit_residual = nullptr, double* zero_ball_max = nullptr);

struct CarlemanResult {
  FlowMap map;
  CarlemanReport report;
};

CarlemanResult carleman_step(const IsotopySpec& iso, const CarlemanConfig& config,
                             const CarlemanReference* reference = nullptr);

struct InductionStep {
  int j = 0;
  double r1 = 0.0;  // approximation radius R^j_1
  double r2 = 0.0;  // image radius R^j_2 >= R^j_1 + 1 covering phi_j(R^j_1 ball)
  double eps = 0.0;            // C^0 error against psi_1 on the R^j_1 ball
  double shared_eps = 0.0;     // C^0 error against psi_1 on the base ball
  double step_change = 0.0;    // |phi_j - phi_{j-1}| on the R^{j-1}_1 ball
  double identity_b = 0.0;     // |phi_j - id| on the complex b-ball
  double max_imag = 0.0;
  FlowMap map;
};

// Bounded run of the inductive scheme: step j approximates the isotopy on the
// ball of radius R^j_1 with schedule entry j, where R^1_1 = a and
// R^{j+1}_1 = R^j_2 + 1. For j >= 2 the fit is tight on the previous ball
// R^{j-1}_1 and weighted by the entry's outer_weight beyond it, i.e. the
// tolerance grows with |x| as in Carleman approximation. Errors are measured
// on lattices of each ball. Any rejected step ends the sequence early;
// `error` then carries the message.
struct InductionResult {
  std::vector<InductionStep> steps;
  std::string error;
};

InductionResult induction_demo(const IsotopySpec& iso, int j_max,
                               const std::vector<CarlemanConfig>& schedule);

// The documented three-level refinement schedule (n_time, fit_degree):
// (8, 8), (16, 10), (32, 12), on top of `base`.
std::vector<CarlemanConfig> default_schedule(const CarlemanConfig& base = {});

// Schedule for induction_demo: (8, 8), (16, 16), (32, 20) with outer weight
// 0.01 after the first step. The first entry equals the first level of
// default_schedule, so j_max = 1 reproduces carleman_step.
std::vector<CarlemanConfig> induction_schedule(const CarlemanConfig& base = {});

// Runs body(i) for i in [0, count), optionally on hardware threads. Each index
// is processed exactly once; results must go to per-index slots.
void for_each_index(std::size_t count, bool parallel, const std::function<void(std::size_t)>& body);

}  // namespace hamcarl
