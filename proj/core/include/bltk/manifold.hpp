#pragma once

#include <functional>
#include <optional>

#include "bltk/datum.hpp"
#include "bltk/finiteness.hpp"

namespace bltk {

// Multivariate polynomial with rational coefficients, one term per entry.
struct PolyTerm {
  Rational coef;
  std::vector<int> powers;  // exponent per variable
};
using Poly = std::vector<PolyTerm>;

Rational poly_eval(const Poly& p, const std::vector<Rational>& xi);
Poly poly_derivative(const Poly& p, int var);

// A parametrised compact patch Sigma: U -> R^n with 0 in U and Sigma(0) = 0.
// Polynomial and sqrt-graph charts carry exact derivatives at rational
// points; opaque callables fall back to Richardson-extrapolated finite
// differences.
class Chart {
 public:
  enum class Kind { Polynomial, SqrtGraph, Opaque };

  static Chart polynomial(std::vector<Poly> components, int domain_dim,
                          std::vector<std::pair<Rational, Rational>> domain);
  // Graph chart xi -> (xi, phi(xi)) for polynomial phi.
  static Chart polynomial_graph(const Poly& phi, int domain_dim,
                                std::vector<std::pair<Rational, Rational>> domain);
  // Flat patch xi -> (xi, <v, xi>).
  static Chart hyperplane(const std::vector<Rational>& gradient,
                          std::vector<std::pair<Rational, Rational>> domain);
  // xi -> (xi, |xi|^2).
  static Chart paraboloid(int domain_dim, std::vector<std::pair<Rational, Rational>> domain);
  // Cap of the radius-r sphere: xi -> (xi, sqrt(r^2 - |xi|^2) - r).
  static Chart sphere_cap(int domain_dim, const Rational& radius,
                          std::vector<std::pair<Rational, Rational>> domain);
  // Cone patch away from the vertex: xi -> (xi, |xi + center| - |center|).
  static Chart cone_patch(const std::vector<Rational>& center,
                          std::vector<std::pair<Rational, Rational>> domain);
  // One-dimensional line patch through 0 with the given direction.
  static Chart line(const std::vector<Rational>& direction, const Rational& half_length);
  static Chart opaque(int domain_dim, int ambient_dim,
                      std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval,
                      std::vector<std::pair<Rational, Rational>> domain);

  Kind kind() const { return kind_; }
  int domain_dim() const { return domain_dim_; }
  int ambient_dim() const { return ambient_dim_; }
  const std::vector<std::pair<Rational, Rational>>& domain() const { return domain_; }
  bool in_domain(const Eigen::VectorXd& xi) const;

  Eigen::VectorXd eval(const Eigen::VectorXd& xi) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& xi) const;

  bool exact_capable() const { return kind_ != Kind::Opaque; }
  // Throw if the value is not rational at this point (e.g. an irrational
  // square root on a sqrt-graph chart).
  Matrix eval_exact(const std::vector<Rational>& xi) const;          // ambient x 1
  Matrix jacobian_exact(const std::vector<Rational>& xi) const;      // ambient x domain_dim

 private:
  Chart() = default;
  Kind kind_ = Kind::Opaque;
  int domain_dim_ = 0, ambient_dim_ = 0;
  std::vector<std::pair<Rational, Rational>> domain_;
  std::vector<Poly> components_;  // Polynomial kind
  // SqrtGraph kind: xi -> (xi, sqrt(g(xi)) + offset) with polynomial g.
  Poly sqrt_arg_;
  Rational sqrt_offset_ = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> opaque_eval_;
};

struct ManifoldCollection {
  std::vector<Chart> charts;
  ExponentVector exponents;

  int ambient_dim() const { return charts.empty() ? 0 : charts[0].ambient_dim(); }
  // Surface-measure scaling: sum dim(S_j)/p_j' = n.
  bool scaling_condition_holds() const;
};

// Column span of the chart derivative at xi.
Subspace tangent_space(const Chart& c, const Eigen::VectorXd& xi);
Subspace tangent_space_exact(const Chart& c, const std::vector<Rational>& xi);

// Gram-determinant square root of the derivative: the surface-measure
// density of d-sigma in the chart.
double surface_weight(const Chart& c, const Eigen::VectorXd& xi);

// The derived linear datum at a point tuple: maps dSigma_j(xi_j)^* with the
// conjugate exponents, the finiteness test behind the transversality check.
BLDatum datum_at(const ManifoldCollection& mc, const std::vector<Eigen::VectorXd>& points);
BLDatum datum_at_exact(const ManifoldCollection& mc,
                       const std::vector<std::vector<Rational>>& points);

struct ScanReport {
  struct Tuple {
    std::vector<Eigen::VectorXd> points;
    FinitenessVerdict verdict;
  };
  std::vector<Tuple> tuples;
  Rational worst_defect = 0;
  int worst_tuple = -1;
  std::optional<Subspace> worst_witness;
  bool passed = true;
};

// Samples per-chart grids over the domains and runs the finiteness module on
// datum_at for every point tuple.  A deliberate under-approximation of "all
// tangent spaces": a passing scan means no sampled tuple is degenerate.
ScanReport transversality_scan(const ManifoldCollection& mc, const std::vector<int>& grid,
                               const SearchBudget& budget);

}  // namespace bltk
