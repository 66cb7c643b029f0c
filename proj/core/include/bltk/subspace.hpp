#pragma once

#include "bltk/matrix.hpp"

namespace bltk {

// Linear subspace of R^n held by a canonical basis: reduced column echelon
// form in exact mode, an orthonormal basis in float mode.  Two values with
// equal spans compare equal.
class Subspace {
 public:
  Subspace() = default;  // the zero subspace of R^0
  static Subspace span(const Matrix& columns, double tol);
  static Subspace span(const Matrix& columns) {
    return span(columns, columns.is_exact() ? 0.0 : kDefaultRankTol);
  }
  static Subspace zero(int ambient_dim, ScalarMode mode);
  static Subspace full(int ambient_dim, ScalarMode mode);

  int ambient_dim() const { return ambient_; }
  int dim() const { return basis_.cols(); }
  ScalarMode mode() const { return basis_.mode(); }
  const Matrix& basis() const { return basis_; }

  bool contains(const Subspace& other, double tol = kDefaultRankTol) const;
  bool operator==(const Subspace& rhs) const;

 private:
  Subspace(int ambient, Matrix canonical_basis)
      : ambient_(ambient), basis_(std::move(canonical_basis)) {}
  int ambient_ = 0;
  Matrix basis_;
};

Subspace intersect(const Subspace& v, const Subspace& w);
Subspace subspace_sum(const Subspace& v, const Subspace& w);
Subspace orthogonal_complement(const Subspace& v);
// L(V) as a subspace of R^{L.rows}.
Subspace image(const Matrix& l, const Subspace& v);

}  // namespace bltk
