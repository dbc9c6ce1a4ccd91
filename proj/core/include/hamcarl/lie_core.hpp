#pragma once

#include <istream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hamcarl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class LieFamily { Generic, Heisenberg, SO3, SL2R };

struct AlgebraVector {
  Vec coords;
};

struct DualVector {
  Vec coords;
};

// Real Lie algebra given by structure constants [e_i, e_j] = sum_k c(i,j,k) e_k.
class LieAlgebra {
 public:
  // Throws StructuralError unless c is exactly antisymmetric in (i, j) and
  // the Jacobi identity holds to 1e-12 entrywise.
  LieAlgebra(int dim, std::vector<double> structure_constants,
             std::vector<std::string> basis_labels = {},
             LieFamily family = LieFamily::Generic);

  int dim() const { return dim_; }
  LieFamily family() const { return family_; }
  const std::vector<std::string>& basis_labels() const { return labels_; }
  double c(int i, int j, int k) const {
    return constants_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
  }

  // Matrix of ad_x in the basis e_i: (ad_x)_{kj} = sum_i x_i c(i,j,k).
  Mat ad(const AlgebraVector& x) const;

  // Largest entry of the cyclic Jacobi sum over all basis triples.
  double jacobi_residual() const;

  AlgebraVector basis(int i) const;

 private:
  int dim_;
  std::vector<double> constants_;
  std::vector<std::string> labels_;
  LieFamily family_;
};

// Heisenberg algebra: [e1,e2] = e3, e3 central. e1 is the a-direction, e2
// the b-direction and e3 the c-direction of the upper triangular matrix
// [[1,a,c],[0,1,b],[0,0,1]].
LieAlgebra heisenberg();

// so(3) with [e1,e2] = e3 and cyclic. e_i generates the right-handed rotation
// about the i-th axis, so exp(t e3) acts on R^3 by rotation by +t about x3.
LieAlgebra so3();

// sl(2,R) in the so(2,1) basis: e1, e2 boosts, e3 the rotation, with
// [e1,e2] = -e3, [e2,e3] = e1, [e3,e1] = e2.
LieAlgebra sl2r();

// Reads lines "i j k value" with 0-based indices; '#' starts a comment. An
// optional "dim N" line fixes the dimension, otherwise it is the largest index
// plus one. The antisymmetric partner of each entry is filled in; listing both
// with inconsistent values is an error.
LieAlgebra load_structure_constants(std::istream& in);

AlgebraVector bracket(const LieAlgebra& alg, const AlgebraVector& u,
                      const AlgebraVector& v);

// Matrix of Ad*(g) on dual coordinates. Heisenberg takes the global chart
// (a, b, c); every other family takes exponential coordinates X with g = exp X.
Mat coadjoint_matrix(const LieAlgebra& alg, const Vec& group_params);

DualVector coadjoint_action(const LieAlgebra& alg, const Vec& group_params,
                            const DualVector& xi);

// Linear generator A_u of the orbit field: X_u(xi) = A_u xi, the derivative of
// Ad*(exp(t u)) xi at t = 0. Its pairing with v is xi([v, u]).
Mat coadjoint_generator(const LieAlgebra& alg, const AlgebraVector& u);

DualVector infinitesimal_coadjoint(const LieAlgebra& alg,
                                   const AlgebraVector& u,
                                   const DualVector& xi);

// Columns span {u : X_u(xi) = 0}.
Mat isotropy_kernel(const LieAlgebra& alg, const DualVector& xi,
                    double tol = 1e-10);

// exp of a square matrix; finite series when the matrix is nilpotent.
Mat matrix_exp(const Mat& m);

}  // namespace hamcarl
