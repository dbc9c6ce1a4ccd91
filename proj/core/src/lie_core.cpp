#include "hamcarl/lie_core.hpp"

#include <cmath>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "hamcarl/errors.hpp"

namespace hamcarl {

namespace {

void require_dim(const LieAlgebra& alg, const Vec& v, const char* what) {
  if (v.size() != alg.dim()) {
    std::ostringstream msg;
    msg << what << " has length " << v.size() << ", algebra dimension is "
        << alg.dim();
    throw StructuralError(msg.str());
  }
}

std::size_t index3(int dim, int i, int j, int k) {
  return (static_cast<std::size_t>(i) * dim + j) * dim + k;
}

}  // namespace

LieAlgebra::LieAlgebra(int dim, std::vector<double> structure_constants,
                       std::vector<std::string> basis_labels, LieFamily family)
    : dim_(dim),
      constants_(std::move(structure_constants)),
      labels_(std::move(basis_labels)),
      family_(family) {
  if (dim_ <= 0) throw StructuralError("Lie algebra dimension must be positive");
  const auto n = static_cast<std::size_t>(dim_);
  if (constants_.size() != n * n * n) {
    throw StructuralError("structure constant array must have dim^3 entries");
  }
  if (labels_.empty()) {
    for (int i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i + 1));
  }
  if (static_cast<int>(labels_.size()) != dim_) {
    throw StructuralError("one basis label per basis vector required");
  }
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      for (int k = 0; k < dim_; ++k) {
        if (c(i, j, k) != -c(j, i, k)) {
          std::ostringstream msg;
          msg << "structure constants not antisymmetric at (" << i << ", " << j
              << ", " << k << ")";
          throw StructuralError(msg.str());
        }
      }
    }
  }
  const double jac = jacobi_residual();
  if (!(jac <= 1e-12)) {
    std::ostringstream msg;
    msg << "Jacobi identity violated, residual " << jac;
    throw StructuralError(msg.str());
  }
}

Mat LieAlgebra::ad(const AlgebraVector& x) const {
  require_dim(*this, x.coords, "algebra vector");
  Mat out = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x.coords[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      for (int k = 0; k < dim_; ++k) out(k, j) += x.coords[i] * c(i, j, k);
    }
  }
  return out;
}

double LieAlgebra::jacobi_residual() const {
  // [[e_i,e_j],e_k] = sum_m c(i,j,m) c(m,k,l) e_l, summed cyclically.
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      for (int k = 0; k < dim_; ++k) {
        for (int l = 0; l < dim_; ++l) {
          double s = 0.0;
          for (int m = 0; m < dim_; ++m) {
            s += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) +
                 c(k, i, m) * c(m, j, l);
          }
          worst = std::max(worst, std::abs(s));
        }
      }
    }
  }
  return worst;
}

AlgebraVector LieAlgebra::basis(int i) const {
  AlgebraVector e{Vec::Zero(dim_)};
  e.coords[i] = 1.0;
  return e;
}

LieAlgebra heisenberg() {
  std::vector<double> c(27, 0.0);
  c[index3(3, 0, 1, 2)] = 1.0;
  c[index3(3, 1, 0, 2)] = -1.0;
  return LieAlgebra(3, std::move(c), {"a", "b", "c"}, LieFamily::Heisenberg);
}

LieAlgebra so3() {
  std::vector<double> c(27, 0.0);
  auto set = [&](int i, int j, int k, double v) {
    c[index3(3, i, j, k)] = v;
    c[index3(3, j, i, k)] = -v;
  };
  set(0, 1, 2, 1.0);
  set(1, 2, 0, 1.0);
  set(2, 0, 1, 1.0);
  return LieAlgebra(3, std::move(c), {"L1", "L2", "L3"}, LieFamily::SO3);
}

LieAlgebra sl2r() {
  std::vector<double> c(27, 0.0);
  auto set = [&](int i, int j, int k, double v) {
    c[index3(3, i, j, k)] = v;
    c[index3(3, j, i, k)] = -v;
  };
  set(0, 1, 2, -1.0);
  set(1, 2, 0, 1.0);
  set(2, 0, 1, 1.0);
  return LieAlgebra(3, std::move(c), {"K1", "K2", "J"}, LieFamily::SL2R);
}

LieAlgebra load_structure_constants(std::istream& in) {
  struct Entry {
    int i, j, k;
    double value;
  };
  std::vector<Entry> entries;
  int dim = 0;
  bool fixed_dim = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "dim") {
      if (!(ls >> dim) || dim <= 0) {
        throw StructuralError("bad dim line at line " + std::to_string(lineno));
      }
      fixed_dim = true;
      continue;
    }
    Entry e{};
    std::istringstream full(line);
    if (!(full >> e.i >> e.j >> e.k >> e.value) || e.i < 0 || e.j < 0 ||
        e.k < 0) {
      throw StructuralError("expected 'i j k value' at line " +
                            std::to_string(lineno));
    }
    std::string extra;
    if (full >> extra) {
      throw StructuralError("trailing input at line " + std::to_string(lineno));
    }
    entries.push_back(e);
  }
  if (!fixed_dim) {
    for (const auto& e : entries) dim = std::max({dim, e.i + 1, e.j + 1, e.k + 1});
  }
  if (dim <= 0) throw StructuralError("structure constant file defines no algebra");

  const auto n = static_cast<std::size_t>(dim);
  std::vector<double> c(n * n * n, 0.0);
  std::vector<char> seen(n * n * n, 0);
  for (const auto& e : entries) {
    if (e.i >= dim || e.j >= dim || e.k >= dim) {
      throw StructuralError("index out of range for declared dimension");
    }
    const auto ij = index3(dim, e.i, e.j, e.k);
    const auto ji = index3(dim, e.j, e.i, e.k);
    if (e.i == e.j && e.value != 0.0) {
      throw StructuralError("[e_i, e_i] must vanish");
    }
    if ((seen[ij] && c[ij] != e.value) || (seen[ji] && c[ji] != -e.value)) {
      throw StructuralError("inconsistent antisymmetric entries");
    }
    c[ij] = e.value;
    c[ji] = -e.value;
    seen[ij] = seen[ji] = 1;
  }
  return LieAlgebra(dim, std::move(c));
}

AlgebraVector bracket(const LieAlgebra& alg, const AlgebraVector& u,
                      const AlgebraVector& v) {
  require_dim(alg, u.coords, "u");
  require_dim(alg, v.coords, "v");
  const int n = alg.dim();
  AlgebraVector out{Vec::Zero(n)};
  for (int i = 0; i < n; ++i) {
    if (u.coords[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double uv = u.coords[i] * v.coords[j];
      if (uv == 0.0) continue;
      for (int k = 0; k < n; ++k) out.coords[k] += uv * alg.c(i, j, k);
    }
  }
  return out;
}

Mat matrix_exp(const Mat& m) {
  const auto n = m.rows();
  Mat power = Mat::Identity(n, n);
  Mat sum = Mat::Identity(n, n);
  double factorial = 1.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    power = power * m;
    if (power.isZero(0.0)) return sum;
    factorial *= static_cast<double>(k);
    sum += power / factorial;
  }
  return m.exp();
}

Mat coadjoint_matrix(const LieAlgebra& alg, const Vec& group_params) {
  require_dim(alg, group_params, "group parameters");
  AlgebraVector x{group_params};
  if (alg.family() == LieFamily::Heisenberg) {
    // [[1,a,c],[0,1,b],[0,0,1]] = exp(a E_a + b E_b + (c - ab/2) E_c).
    x.coords[2] = group_params[2] - 0.5 * group_params[0] * group_params[1];
  }
  return matrix_exp(-alg.ad(x)).transpose();
}

DualVector coadjoint_action(const LieAlgebra& alg, const Vec& group_params,
                            const DualVector& xi) {
  require_dim(alg, xi.coords, "dual vector");
  return DualVector{coadjoint_matrix(alg, group_params) * xi.coords};
}

Mat coadjoint_generator(const LieAlgebra& alg, const AlgebraVector& u) {
  return -alg.ad(u).transpose();
}

DualVector infinitesimal_coadjoint(const LieAlgebra& alg,
                                   const AlgebraVector& u,
                                   const DualVector& xi) {
  require_dim(alg, u.coords, "u");
  require_dim(alg, xi.coords, "dual vector");
  // Component j is -xi([u, e_j]).
  const int n = alg.dim();
  DualVector out{Vec::Zero(n)};
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      if (u.coords[i] == 0.0) continue;
      for (int k = 0; k < n; ++k) s += u.coords[i] * alg.c(i, j, k) * xi.coords[k];
    }
    out.coords[j] = -s;
  }
  return out;
}

Mat isotropy_kernel(const LieAlgebra& alg, const DualVector& xi, double tol) {
  require_dim(alg, xi.coords, "dual vector");
  const int n = alg.dim();
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    m.col(i) = infinitesimal_coadjoint(alg, alg.basis(i), xi).coords;
  }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = tol * std::max(1.0, s.size() ? s[0] : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace hamcarl
