#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bltk/rational.hpp"

namespace bltk {

enum class ScalarMode { Exact, Float };

// Dense matrix over exact rationals or binary floats, tagged by scalar mode.
// Exact-mode arithmetic is closed: mixing modes throws rather than coercing.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, ScalarMode mode);

  static Matrix zeros(int rows, int cols, ScalarMode mode) { return Matrix(rows, cols, mode); }
  static Matrix identity(int n, ScalarMode mode);
  static Matrix from_eigen(const Eigen::MatrixXd& m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  ScalarMode mode() const { return mode_; }
  bool is_exact() const { return mode_ == ScalarMode::Exact; }

  const Rational& q(int i, int j) const { return q_[idx(i, j)]; }
  Rational& q(int i, int j) { return q_[idx(i, j)]; }
  double f(int i, int j) const { return f_[idx(i, j)]; }
  double& f(int i, int j) { return f_[idx(i, j)]; }

  // Entry as a double regardless of mode.
  double entry_as_double(int i, int j) const {
    return is_exact() ? to_double(q(i, j)) : f(i, j);
  }

  Matrix transpose() const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix scaled(const Rational& t) const;

  // Horizontal concatenation [this | rhs].
  Matrix hcat(const Matrix& rhs) const;
  Matrix col(int j) const;
  Matrix cols_subset(const std::vector<int>& js) const;

  Matrix to_float() const;
  Eigen::MatrixXd eigen() const;

  bool all_finite() const;
  bool operator==(const Matrix& rhs) const;

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * cols_ + j; }
  int rows_ = 0, cols_ = 0;
  ScalarMode mode_ = ScalarMode::Float;
  std::vector<Rational> q_;
  std::vector<double> f_;
};

inline constexpr double kDefaultRankTol = 1e-10;

// Column-span dimension.  Exact mode requires tol == 0; float mode treats
// singular values below tol * sigma_max as zero.
int rank(const Matrix& a, double tol);
inline int rank(const Matrix& a) { return rank(a, a.is_exact() ? 0.0 : kDefaultRankTol); }

// Basis of the (right) nullspace, returned as columns.  May have 0 columns.
Matrix nullspace(const Matrix& a, double tol);
inline Matrix nullspace(const Matrix& a) {
  return nullspace(a, a.is_exact() ? 0.0 : kDefaultRankTol);
}

// In-place reduction of `a` to reduced row echelon form (exact mode only);
// returns the pivot column indices.
std::vector<int> rref(Matrix& a);

}  // namespace bltk
