#pragma once

#include <vector>

#include "bltk/subspace.hpp"

namespace bltk {

class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(std::vector<Exponent> values) : values_(std::move(values)) {}

  size_t size() const { return values_.size(); }
  const Exponent& operator[](size_t j) const { return values_[j]; }
  const std::vector<Exponent>& values() const { return values_; }

  ExponentVector conjugate() const {
    std::vector<Exponent> out;
    out.reserve(values_.size());
    for (const auto& p : values_) out.push_back(p.conjugate());
    return ExponentVector(std::move(out));
  }

  // Sum of 1/p_j (exact).
  Rational reciprocal_sum() const {
    Rational s = 0;
    for (const auto& p : values_) s += p.reciprocal();
    return s;
  }

  bool operator==(const ExponentVector& rhs) const { return values_ == rhs.values_; }

 private:
  std::vector<Exponent> values_;
};

// The Brascamp-Lieb datum (L, p): surjective maps L_j: R^n -> R^{n_j} with
// Lebesgue exponents p_j.
struct BLDatum {
  int n = 0;
  std::vector<Matrix> maps;
  ExponentVector exponents;

  size_t m() const { return maps.size(); }
  int block_dim(size_t j) const { return maps[j].rows(); }
  ScalarMode mode() const { return maps.empty() ? ScalarMode::Float : maps[0].mode(); }
  BLDatum to_float() const;
};

// The parametrisation-free datum (H, p): a subspace of the block product
// R^{n_1} x ... x R^{n_m} with exponents.
struct SubspaceDatum {
  std::vector<int> block_dims;
  Subspace H;
  ExponentVector exponents;
  // Set when the datum came from a non-injective joint map x -> (L_j x)_j.
  bool joint_map_injective = true;

  int total_dim() const {
    int s = 0;
    for (int d : block_dims) s += d;
    return s;
  }
};

class ValidatedDatum {
 public:
  explicit ValidatedDatum(BLDatum d) : datum_(std::move(d)) {}
  const BLDatum& get() const { return datum_; }

 private:
  BLDatum datum_;
};

// Confirms each L_j is surjective and every p_j >= 1 (the Exponent type
// enforces the latter on construction).  Throws naming the offending map.
ValidatedDatum validate(const BLDatum& d);

// Sum_j n_j/p_j - n; zero iff the scaling condition holds.
Rational scaling_defect(const BLDatum& d);

// H = {(L_1 x, ..., L_m x) : x in R^n} with the same exponents.
SubspaceDatum to_subspace_form(const BLDatum& d);

// Fourier dual (H-perp, p'); an involution.
SubspaceDatum dual(const SubspaceDatum& sd);

// A surjective-parametrised representative of (H, p): maps u -> pi_j(B u)
// for an orthonormal/canonical basis B of H.  Throws if some block
// projection of H is not surjective.
BLDatum parametrize(const SubspaceDatum& sd);

}  // namespace bltk
