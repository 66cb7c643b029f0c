#pragma once

#include <initializer_list>
#include <vector>

#include "bltk/datum.hpp"
#include "bltk/rng.hpp"

namespace bltk::testing {

inline Matrix exact(std::initializer_list<std::initializer_list<long>> rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows.begin()->size()) : 0;
  Matrix m(r, c, ScalarMode::Exact);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (long v : row) m.q(i, j++) = v;
    ++i;
  }
  return m;
}

inline Matrix dense(std::initializer_list<std::initializer_list<double>> rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows.begin()->size()) : 0;
  Matrix m(r, c, ScalarMode::Float);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m.f(i, j++) = v;
    ++i;
  }
  return m;
}

// Small-integer random exact matrix, entries in [-3, 3].
inline Matrix random_exact(int rows, int cols, SplitRng& rng) {
  Matrix m(rows, cols, ScalarMode::Exact);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m.q(i, j) = static_cast<long>(rng.next_u64() % 7) - 3;
  return m;
}

inline ExponentVector exponents(std::initializer_list<const char*> ps) {
  std::vector<Exponent> v;
  for (const char* p : ps) v.push_back(parse_exponent(p));
  return ExponentVector(std::move(v));
}

// Loomis-Whitney datum in R^3: coordinate-plane projections.
inline BLDatum loomis_whitney(std::initializer_list<const char*> ps = {"2", "2", "2"}) {
  BLDatum d;
  d.n = 3;
  d.maps = {exact({{0, 1, 0}, {0, 0, 1}}), exact({{1, 0, 0}, {0, 0, 1}}),
            exact({{1, 0, 0}, {0, 1, 0}})};
  d.exponents = exponents(ps);
  return d;
}

// Trilinear form of sharp Young in d = 1: (x, y) -> y, x - y, x.
inline BLDatum young_datum(std::initializer_list<const char*> ps = {"3/2", "3/2", "3/2"}) {
  BLDatum d;
  d.n = 2;
  d.maps = {exact({{0, 1}}), exact({{1, -1}}), exact({{1, 0}})};
  d.exponents = exponents(ps);
  return d;
}

inline BLDatum holder_datum(int n, std::initializer_list<const char*> ps) {
  BLDatum d;
  d.n = n;
  for (size_t j = 0; j < ps.size(); ++j) d.maps.push_back(Matrix::identity(n, ScalarMode::Exact));
  d.exponents = exponents(ps);
  return d;
}

}  // namespace bltk::testing
