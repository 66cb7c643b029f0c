#include "bltk/matrix.hpp"

#include <cmath>

namespace bltk {

namespace {
void require_same_mode(const Matrix& a, const Matrix& b) {
  if (a.mode() != b.mode())
    throw std::invalid_argument("scalar-mode mismatch (no silent coercion)");
}
}  // namespace

Matrix::Matrix(int rows, int cols, ScalarMode mode) : rows_(rows), cols_(cols), mode_(mode) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  if (is_exact())
    q_.assign(static_cast<size_t>(rows) * cols, Rational(0));
  else
    f_.assign(static_cast<size_t>(rows) * cols, 0.0);
}

Matrix Matrix::identity(int n, ScalarMode mode) {
  Matrix m(n, n, mode);
  for (int i = 0; i < n; ++i) {
    if (mode == ScalarMode::Exact)
      m.q(i, i) = 1;
    else
      m.f(i, i) = 1.0;
  }
  return m;
}

Matrix Matrix::from_eigen(const Eigen::MatrixXd& e) {
  Matrix m(static_cast<int>(e.rows()), static_cast<int>(e.cols()), ScalarMode::Float);
  for (int i = 0; i < m.rows_; ++i)
    for (int j = 0; j < m.cols_; ++j) m.f(i, j) = e(i, j);
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_, mode_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      if (is_exact())
        t.q(j, i) = q(i, j);
      else
        t.f(j, i) = f(i, j);
    }
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  require_same_mode(*this, rhs);
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product dimension mismatch");
  Matrix r(rows_, rhs.cols_, mode_);
  if (is_exact()) {
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rational& a = q(i, k);
        if (a == 0) continue;
        for (int j = 0; j < rhs.cols_; ++j) r.q(i, j) += a * rhs.q(k, j);
      }
  } else {
    r = from_eigen(eigen() * rhs.eigen());
  }
  return r;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  require_same_mode(*this, rhs);
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("matrix sum dimension mismatch");
  Matrix r(rows_, cols_, mode_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      if (is_exact())
        r.q(i, j) = q(i, j) + rhs.q(i, j);
      else
        r.f(i, j) = f(i, j) + rhs.f(i, j);
    }
  return r;
}

Matrix Matrix::operator-(const Matrix& rhs) const { return *this + rhs.scaled(Rational(-1)); }

Matrix Matrix::scaled(const Rational& t) const {
  Matrix r(rows_, cols_, mode_);
  double td = to_double(t);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      if (is_exact())
        r.q(i, j) = q(i, j) * t;
      else
        r.f(i, j) = f(i, j) * td;
    }
  return r;
}

Matrix Matrix::hcat(const Matrix& rhs) const {
  require_same_mode(*this, rhs);
  if (rows_ != rhs.rows_) throw std::invalid_argument("hcat row mismatch");
  Matrix r(rows_, cols_ + rhs.cols_, mode_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      if (is_exact())
        r.q(i, j) = q(i, j);
      else
        r.f(i, j) = f(i, j);
    }
    for (int j = 0; j < rhs.cols_; ++j) {
      if (is_exact())
        r.q(i, cols_ + j) = rhs.q(i, j);
      else
        r.f(i, cols_ + j) = rhs.f(i, j);
    }
  }
  return r;
}

Matrix Matrix::col(int j) const { return cols_subset({j}); }

Matrix Matrix::cols_subset(const std::vector<int>& js) const {
  Matrix r(rows_, static_cast<int>(js.size()), mode_);
  for (int i = 0; i < rows_; ++i)
    for (size_t k = 0; k < js.size(); ++k) {
      if (is_exact())
        r.q(i, static_cast<int>(k)) = q(i, js[k]);
      else
        r.f(i, static_cast<int>(k)) = f(i, js[k]);
    }
  return r;
}

Matrix Matrix::to_float() const {
  if (!is_exact()) return *this;
  Matrix r(rows_, cols_, ScalarMode::Float);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.f(i, j) = to_double(q(i, j));
  return r;
}

Eigen::MatrixXd Matrix::eigen() const {
  Eigen::MatrixXd e(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) e(i, j) = entry_as_double(i, j);
  return e;
}

bool Matrix::all_finite() const {
  if (is_exact()) return true;
  for (double v : f_)
    if (!std::isfinite(v)) return false;
  return true;
}

bool Matrix::operator==(const Matrix& rhs) const {
  if (mode_ != rhs.mode_ || rows_ != rhs.rows_ || cols_ != rhs.cols_) return false;
  return is_exact() ? q_ == rhs.q_ : f_ == rhs.f_;
}

std::vector<int> rref(Matrix& a) {
  if (!a.is_exact()) throw std::invalid_argument("rref requires exact mode");
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int p = -1;
    for (int i = r; i < a.rows(); ++i)
      if (a.q(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < a.cols(); ++j) std::swap(a.q(p, j), a.q(r, j));
    Rational inv = Rational(1) / a.q(r, c);
    for (int j = c; j < a.cols(); ++j) a.q(r, j) *= inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || a.q(i, c) == 0) continue;
      Rational m = a.q(i, c);
      for (int j = c; j < a.cols(); ++j) a.q(i, j) -= m * a.q(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int rank(const Matrix& a, double tol) {
  if (!a.all_finite()) throw std::invalid_argument("non-finite entry");
  if (a.rows() == 0 || a.cols() == 0) return 0;
  if (a.is_exact()) {
    if (tol != 0.0) throw std::invalid_argument("exact-mode rank requires tol 0");
    Matrix w = a;
    return static_cast<int>(rref(w).size());
  }
  if (tol < 0) throw std::invalid_argument("negative tolerance");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.eigen());
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++r;
  return r;
}

Matrix nullspace(const Matrix& a, double tol) {
  if (!a.all_finite()) throw std::invalid_argument("non-finite entry");
  if (a.is_exact()) {
    if (tol != 0.0) throw std::invalid_argument("exact-mode nullspace requires tol 0");
    Matrix w = a;
    std::vector<int> pivots = rref(w);
    std::vector<bool> is_pivot(a.cols(), false);
    for (int c : pivots) is_pivot[c] = true;
    Matrix basis(a.cols(), a.cols() - static_cast<int>(pivots.size()), ScalarMode::Exact);
    int k = 0;
    for (int c = 0; c < a.cols(); ++c) {
      if (is_pivot[c]) continue;
      basis.q(c, k) = 1;
      for (size_t pr = 0; pr < pivots.size(); ++pr)
        basis.q(pivots[pr], k) = -w.q(static_cast<int>(pr), c);
      ++k;
    }
    return basis;
  }
  if (a.rows() == 0 || a.cols() == 0) return Matrix::identity(a.cols(), ScalarMode::Float);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.eigen(), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (smax > 0 && sv(i) > tol * smax) ++r;
  Eigen::MatrixXd v = svd.matrixV().rightCols(a.cols() - r);
  return Matrix::from_eigen(v);
}

}  // namespace bltk
