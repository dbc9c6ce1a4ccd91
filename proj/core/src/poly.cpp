#include "hamcarl/poly.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "hamcarl/errors.hpp"

namespace hamcarl {

int total_degree(const MultiIndex& alpha) {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

namespace {

void compositions(int nvars, int deg, MultiIndex& cur, int pos,
                  std::vector<MultiIndex>& out) {
  if (pos == nvars - 1) {
    cur[pos] = deg;
    out.push_back(cur);
    return;
  }
  for (int e = deg; e >= 0; --e) {
    cur[pos] = e;
    compositions(nvars, deg - e, cur, pos + 1, out);
  }
}

}  // namespace

std::vector<MultiIndex> monomials_up_to(int nvars, int lo, int hi) {
  std::vector<MultiIndex> out;
  if (nvars <= 0) return out;
  MultiIndex cur(static_cast<std::size_t>(nvars), 0);
  for (int d = std::max(lo, 0); d <= hi; ++d) compositions(nvars, d, cur, 0, out);
  return out;
}

template <class T>
BasicPoly<T>::BasicPoly(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw StructuralError("polynomials need at least one variable");
}

template <class T>
BasicPoly<T> BasicPoly<T>::constant(int nvars, T value) {
  BasicPoly p(nvars);
  p.add_term(MultiIndex(static_cast<std::size_t>(nvars), 0), value);
  return p;
}

template <class T>
BasicPoly<T> BasicPoly<T>::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw StructuralError("variable index out of range");
  MultiIndex a(static_cast<std::size_t>(nvars), 0);
  a[static_cast<std::size_t>(index)] = 1;
  return monomial(std::move(a), T(1));
}

template <class T>
BasicPoly<T> BasicPoly<T>::monomial(MultiIndex alpha, T coeff) {
  BasicPoly p(static_cast<int>(alpha.size()));
  p.add_term(alpha, coeff);
  return p;
}

template <class T>
int BasicPoly<T>::degree() const {
  int d = -1;
  for (const auto& [alpha, a] : terms_) d = std::max(d, total_degree(alpha));
  return d;
}

template <class T>
T BasicPoly<T>::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? T(0) : it->second;
}

template <class T>
void BasicPoly<T>::add_term(const MultiIndex& alpha, T coeff) {
  if (static_cast<int>(alpha.size()) != nvars_) {
    throw StructuralError("multi-index length does not match variable count");
  }
  for (int e : alpha) {
    if (e < 0) throw StructuralError("negative exponent in multi-index");
  }
  if (coeff == T(0)) return;
  auto [it, inserted] = terms_.try_emplace(alpha, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == T(0)) terms_.erase(it);
  }
}

template <class T>
BasicPoly<T> BasicPoly<T>::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw StructuralError("derivative index out of range");
  BasicPoly out(nvars_);
  for (const auto& [alpha, a] : terms_) {
    const int e = alpha[static_cast<std::size_t>(var)];
    if (e == 0) continue;
    MultiIndex b = alpha;
    b[static_cast<std::size_t>(var)] = e - 1;
    out.add_term(b, a * T(e));
  }
  return out;
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, 1> BasicPoly<T>::gradient_at(
    const Eigen::Matrix<T, Eigen::Dynamic, 1>& x) const {
  Eigen::Matrix<T, Eigen::Dynamic, 1> g(nvars_);
  for (int i = 0; i < nvars_; ++i) g[i] = derivative(i)(x);
  return g;
}

template <class T>
BasicPoly<T>& BasicPoly<T>::operator+=(const BasicPoly& o) {
  if (o.nvars_ != nvars_) throw StructuralError("polynomial variable counts differ");
  for (const auto& [alpha, a] : o.terms_) add_term(alpha, a);
  return *this;
}

template <class T>
BasicPoly<T>& BasicPoly<T>::operator-=(const BasicPoly& o) {
  if (o.nvars_ != nvars_) throw StructuralError("polynomial variable counts differ");
  for (const auto& [alpha, a] : o.terms_) add_term(alpha, -a);
  return *this;
}

template <class T>
BasicPoly<T>& BasicPoly<T>::operator*=(T s) {
  if (s == T(0)) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    it = it->second == T(0) ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

template <class T>
BasicPoly<T> BasicPoly<T>::times(const BasicPoly& o) const {
  if (o.nvars_ != nvars_) throw StructuralError("polynomial variable counts differ");
  BasicPoly out(nvars_);
  MultiIndex c(static_cast<std::size_t>(nvars_));
  for (const auto& [a, x] : terms_) {
    for (const auto& [b, y] : o.terms_) {
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
      out.add_term(c, x * y);
    }
  }
  return out;
}

template <class T>
BasicPoly<T> BasicPoly<T>::pow(int k) const {
  if (k < 0) throw StructuralError("negative polynomial power");
  BasicPoly out = constant(nvars_, T(1));
  BasicPoly base = *this;
  while (k > 0) {
    if (k & 1) out = out.times(base);
    k >>= 1;
    if (k > 0) base = base.times(base);
  }
  return out;
}

template <class T>
double BasicPoly<T>::max_coefficient_distance(const BasicPoly& o) const {
  double worst = 0.0;
  for (const auto& [alpha, a] : terms_) {
    worst = std::max(worst, static_cast<double>(std::abs(a - o.coefficient(alpha))));
  }
  for (const auto& [alpha, b] : o.terms_) {
    if (!terms_.count(alpha)) worst = std::max(worst, static_cast<double>(std::abs(b)));
  }
  return worst;
}

template class BasicPoly<double>;
template class BasicPoly<std::complex<double>>;

Poly read_poly(std::istream& in, int nvars) {
  std::vector<std::pair<double, MultiIndex>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double a = 0.0;
    if (!(ls >> a)) {
      throw StructuralError("bad coefficient at line " + std::to_string(lineno));
    }
    MultiIndex alpha;
    int e = 0;
    while (ls >> e) alpha.push_back(e);
    if (!ls.eof()) throw StructuralError("bad exponent at line " + std::to_string(lineno));
    if (!std::isfinite(a)) throw StructuralError("non-finite coefficient at line " + std::to_string(lineno));
    if (nvars == 0) nvars = static_cast<int>(alpha.size());
    if (static_cast<int>(alpha.size()) != nvars) {
      throw StructuralError("line " + std::to_string(lineno) + " has " +
                            std::to_string(alpha.size()) + " exponents, expected " +
                            std::to_string(nvars));
    }
    rows.emplace_back(a, std::move(alpha));
  }
  if (nvars == 0) throw StructuralError("polynomial file has no terms and no variable count");
  Poly p(nvars);
  for (const auto& [a, alpha] : rows) p.add_term(alpha, a);
  return p;
}

void write_poly(std::ostream& out, const Poly& p) {
  const auto old = out.precision(17);
  for (const auto& [alpha, a] : p.terms()) {
    out << a;
    for (int e : alpha) out << ' ' << e;
    out << '\n';
  }
  out.precision(old);
}

Poly real_part(const ComplexPoly& q) {
  Poly out(q.nvars());
  for (const auto& [alpha, a] : q.terms()) out.add_term(alpha, a.real());
  return out;
}

ComplexPoly to_complex(const Poly& p) {
  ComplexPoly out(p.nvars());
  for (const auto& [alpha, a] : p.terms()) out.add_term(alpha, a);
  return out;
}

}  // namespace hamcarl
