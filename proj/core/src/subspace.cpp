#include "bltk/subspace.hpp"

namespace bltk {

Subspace Subspace::span(const Matrix& columns, double tol) {
  if (!columns.all_finite()) throw std::invalid_argument("non-finite entry");
  int n = columns.rows();
  if (columns.is_exact()) {
    // Reduced column echelon form = rref of the transpose, nonzero rows back
    // as columns.
    Matrix t = columns.transpose();
    std::vector<int> pivots = rref(t);
    Matrix basis(n, static_cast<int>(pivots.size()), ScalarMode::Exact);
    for (size_t r = 0; r < pivots.size(); ++r)
      for (int j = 0; j < n; ++j) basis.q(j, static_cast<int>(r)) = t.q(static_cast<int>(r), j);
    return Subspace(n, std::move(basis));
  }
  if (columns.cols() == 0) return Subspace(n, Matrix(n, 0, ScalarMode::Float));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns.eigen(), Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (smax > 0 && sv(i) > tol * smax) ++r;
  return Subspace(n, Matrix::from_eigen(svd.matrixU().leftCols(r)));
}

Subspace Subspace::zero(int ambient_dim, ScalarMode mode) {
  return Subspace(ambient_dim, Matrix(ambient_dim, 0, mode));
}

Subspace Subspace::full(int ambient_dim, ScalarMode mode) {
  return Subspace(ambient_dim, Matrix::identity(ambient_dim, mode));
}

bool Subspace::contains(const Subspace& other, double tol) const {
  if (ambient_ != other.ambient_) return false;
  Matrix joint = basis_.hcat(other.basis_);
  if (mode() == ScalarMode::Exact) return rank(joint, 0.0) == dim();
  return rank(joint, tol) == dim();
}

bool Subspace::operator==(const Subspace& rhs) const {
  if (ambient_ != rhs.ambient_ || mode() != rhs.mode() || dim() != rhs.dim()) return false;
  if (mode() == ScalarMode::Exact) return basis_ == rhs.basis_;
  // Orthonormal bases: compare projectors.
  Eigen::MatrixXd b1 = basis_.eigen(), b2 = rhs.basis_.eigen();
  return (b1 * b1.transpose() - b2 * b2.transpose()).norm() <= 1e-8 * (1 + dim());
}

Subspace intersect(const Subspace& v, const Subspace& w) {
  if (v.ambient_dim() != w.ambient_dim())
    throw std::invalid_argument("subspace intersection: ambient dimension mismatch");
  if (v.dim() == 0 || w.dim() == 0) return Subspace::zero(v.ambient_dim(), v.mode());
  Matrix stacked = v.basis().hcat(w.basis().scaled(Rational(-1)));
  Matrix ns = nullspace(stacked);
  if (ns.cols() == 0) return Subspace::zero(v.ambient_dim(), v.mode());
  // First v.dim() rows of each nullspace column are coefficients in V's basis.
  Matrix coeff(v.dim(), ns.cols(), ns.mode());
  for (int i = 0; i < v.dim(); ++i)
    for (int j = 0; j < ns.cols(); ++j) {
      if (ns.is_exact())
        coeff.q(i, j) = ns.q(i, j);
      else
        coeff.f(i, j) = ns.f(i, j);
    }
  return Subspace::span(v.basis() * coeff);
}

Subspace subspace_sum(const Subspace& v, const Subspace& w) {
  if (v.ambient_dim() != w.ambient_dim())
    throw std::invalid_argument("subspace sum: ambient dimension mismatch");
  return Subspace::span(v.basis().hcat(w.basis()));
}

Subspace orthogonal_complement(const Subspace& v) {
  return Subspace::span(nullspace(v.basis().transpose()));
}

Subspace image(const Matrix& l, const Subspace& v) {
  if (l.cols() != v.ambient_dim())
    throw std::invalid_argument("image: map domain does not match subspace ambient dimension");
  return Subspace::span(l * v.basis());
}

}  // namespace bltk
