#include "bltk/datum.hpp"

#include <string>

namespace bltk {

BLDatum BLDatum::to_float() const {
  BLDatum d;
  d.n = n;
  d.exponents = exponents;
  d.maps.reserve(maps.size());
  for (const auto& l : maps) d.maps.push_back(l.to_float());
  return d;
}

ValidatedDatum validate(const BLDatum& d) {
  if (d.maps.size() != d.exponents.size())
    throw std::invalid_argument("datum: map count does not match exponent count");
  for (size_t j = 0; j < d.maps.size(); ++j) {
    const Matrix& l = d.maps[j];
    if (l.cols() != d.n)
      throw std::invalid_argument("map " + std::to_string(j + 1) + " has wrong domain dimension");
    if (l.rows() > d.n)
      throw std::invalid_argument("map " + std::to_string(j + 1) +
                                  " has codomain larger than domain");
    if (rank(l) != l.rows())
      throw std::invalid_argument("map " + std::to_string(j + 1) + " not surjective");
  }
  return ValidatedDatum(d);
}

Rational scaling_defect(const BLDatum& d) {
  Rational s = 0;
  for (size_t j = 0; j < d.m(); ++j) s += Rational(d.block_dim(j)) * d.exponents[j].reciprocal();
  return s - d.n;
}

SubspaceDatum to_subspace_form(const BLDatum& d) {
  int total = 0;
  std::vector<int> dims;
  for (const auto& l : d.maps) {
    dims.push_back(l.rows());
    total += l.rows();
  }
  Matrix stacked(total, d.n, d.mode());
  int row = 0;
  for (const auto& l : d.maps) {
    for (int i = 0; i < l.rows(); ++i)
      for (int j = 0; j < d.n; ++j) {
        if (stacked.is_exact())
          stacked.q(row + i, j) = l.q(i, j);
        else
          stacked.f(row + i, j) = l.f(i, j);
      }
    row += l.rows();
  }
  SubspaceDatum sd;
  sd.block_dims = std::move(dims);
  sd.H = Subspace::span(stacked);
  sd.exponents = d.exponents;
  sd.joint_map_injective = sd.H.dim() == d.n;
  return sd;
}

SubspaceDatum dual(const SubspaceDatum& sd) {
  SubspaceDatum out;
  out.block_dims = sd.block_dims;
  out.H = orthogonal_complement(sd.H);
  out.exponents = sd.exponents.conjugate();
  out.joint_map_injective = sd.joint_map_injective;
  return out;
}

BLDatum parametrize(const SubspaceDatum& sd) {
  // An orthonormal basis keeps Lebesgue measure on H equal to du in the
  // parameter space, so the parametrised constant equals BL(H, p).
  Matrix b = Subspace::span(sd.H.basis().to_float()).basis();
  BLDatum d;
  d.n = sd.H.dim();
  d.exponents = sd.exponents;
  int row = 0;
  for (size_t j = 0; j < sd.block_dims.size(); ++j) {
    int nj = sd.block_dims[j];
    Matrix lj(nj, d.n, ScalarMode::Float);
    for (int i = 0; i < nj; ++i)
      for (int k = 0; k < d.n; ++k) lj.f(i, k) = b.f(row + i, k);
    if (rank(lj) != nj)
      throw std::invalid_argument("block projection " + std::to_string(j + 1) +
                                  " of H is not surjective; no parametrised representative");
    d.maps.push_back(std::move(lj));
    row += nj;
  }
  return d;
}

}  // namespace bltk
