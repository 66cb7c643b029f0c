#include "bltk/manifold.hpp"

#include <cmath>

namespace bltk {

Rational poly_eval(const Poly& p, const std::vector<Rational>& xi) {
  Rational s = 0;
  for (const auto& term : p) {
    Rational t = term.coef;
    for (size_t v = 0; v < term.powers.size(); ++v)
      for (int k = 0; k < term.powers[v]; ++k) t *= xi[v];
    s += t;
  }
  return s;
}

static double poly_eval_f(const Poly& p, const Eigen::VectorXd& xi) {
  double s = 0;
  for (const auto& term : p) {
    double t = to_double(term.coef);
    for (size_t v = 0; v < term.powers.size(); ++v) t *= std::pow(xi(static_cast<int>(v)), term.powers[v]);
    s += t;
  }
  return s;
}

Poly poly_derivative(const Poly& p, int var) {
  Poly d;
  for (const auto& term : p) {
    if (var >= static_cast<int>(term.powers.size()) || term.powers[var] == 0) continue;
    PolyTerm t = term;
    t.coef *= term.powers[var];
    t.powers[var] -= 1;
    d.push_back(std::move(t));
  }
  return d;
}

namespace {
Poly constant_shift(const Poly& p, int nvars) {
  // Subtract p(0) so graph charts satisfy Sigma(0) = 0.
  Rational at0 = poly_eval(p, std::vector<Rational>(nvars, Rational(0)));
  Poly out = p;
  if (at0 != 0) out.push_back(PolyTerm{-at0, std::vector<int>(nvars, 0)});
  return out;
}
}  // namespace

Chart Chart::polynomial(std::vector<Poly> components, int domain_dim,
                        std::vector<std::pair<Rational, Rational>> domain) {
  Chart c;
  c.kind_ = Kind::Polynomial;
  c.domain_dim_ = domain_dim;
  c.ambient_dim_ = static_cast<int>(components.size());
  c.domain_ = std::move(domain);
  for (auto& comp : components) c.components_.push_back(constant_shift(comp, domain_dim));
  if (c.ambient_dim_ < domain_dim) throw std::invalid_argument("chart ambient below domain dim");
  return c;
}

Chart Chart::polynomial_graph(const Poly& phi, int domain_dim,
                              std::vector<std::pair<Rational, Rational>> domain) {
  std::vector<Poly> comps;
  for (int i = 0; i < domain_dim; ++i) {
    std::vector<int> pw(domain_dim, 0);
    pw[i] = 1;
    comps.push_back(Poly{PolyTerm{Rational(1), pw}});
  }
  comps.push_back(phi);
  return polynomial(std::move(comps), domain_dim, std::move(domain));
}

Chart Chart::hyperplane(const std::vector<Rational>& gradient,
                        std::vector<std::pair<Rational, Rational>> domain) {
  int d = static_cast<int>(gradient.size());
  Poly phi;
  for (int i = 0; i < d; ++i) {
    std::vector<int> pw(d, 0);
    pw[i] = 1;
    phi.push_back(PolyTerm{gradient[i], pw});
  }
  return polynomial_graph(phi, d, std::move(domain));
}

Chart Chart::paraboloid(int domain_dim, std::vector<std::pair<Rational, Rational>> domain) {
  Poly phi;
  for (int i = 0; i < domain_dim; ++i) {
    std::vector<int> pw(domain_dim, 0);
    pw[i] = 2;
    phi.push_back(PolyTerm{Rational(1), pw});
  }
  return polynomial_graph(phi, domain_dim, std::move(domain));
}

Chart Chart::sphere_cap(int domain_dim, const Rational& radius,
                        std::vector<std::pair<Rational, Rational>> domain) {
  Chart c;
  c.kind_ = Kind::SqrtGraph;
  c.domain_dim_ = domain_dim;
  c.ambient_dim_ = domain_dim + 1;
  c.domain_ = std::move(domain);
  c.sqrt_arg_.push_back(PolyTerm{radius * radius, std::vector<int>(domain_dim, 0)});
  for (int i = 0; i < domain_dim; ++i) {
    std::vector<int> pw(domain_dim, 0);
    pw[i] = 2;
    c.sqrt_arg_.push_back(PolyTerm{Rational(-1), pw});
  }
  c.sqrt_offset_ = -radius;
  return c;
}

Chart Chart::cone_patch(const std::vector<Rational>& center,
                        std::vector<std::pair<Rational, Rational>> domain) {
  int d = static_cast<int>(center.size());
  Rational c2 = 0;
  for (const auto& ci : center) c2 += ci * ci;
  auto norm = rational_sqrt(c2);
  if (!norm || *norm == 0)
    throw std::invalid_argument("cone patch center must be nonzero with rational norm");
  Chart c;
  c.kind_ = Kind::SqrtGraph;
  c.domain_dim_ = d;
  c.ambient_dim_ = d + 1;
  c.domain_ = std::move(domain);
  // |xi + center|^2 expanded.
  c.sqrt_arg_.push_back(PolyTerm{c2, std::vector<int>(d, 0)});
  for (int i = 0; i < d; ++i) {
    std::vector<int> lin(d, 0), sq(d, 0);
    lin[i] = 1;
    sq[i] = 2;
    c.sqrt_arg_.push_back(PolyTerm{2 * center[i], lin});
    c.sqrt_arg_.push_back(PolyTerm{Rational(1), sq});
  }
  c.sqrt_offset_ = -*norm;
  return c;
}

Chart Chart::line(const std::vector<Rational>& direction, const Rational& half_length) {
  std::vector<Poly> comps;
  for (const auto& di : direction) comps.push_back(Poly{PolyTerm{di, {1}}});
  return polynomial(std::move(comps), 1, {{-half_length, half_length}});
}

Chart Chart::opaque(int domain_dim, int ambient_dim,
                    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval,
                    std::vector<std::pair<Rational, Rational>> domain) {
  Chart c;
  c.kind_ = Kind::Opaque;
  c.domain_dim_ = domain_dim;
  c.ambient_dim_ = ambient_dim;
  c.domain_ = std::move(domain);
  Eigen::VectorXd at0 = eval(Eigen::VectorXd::Zero(domain_dim));
  c.opaque_eval_ = [eval = std::move(eval), at0](const Eigen::VectorXd& xi) {
    return Eigen::VectorXd(eval(xi) - at0);
  };
  return c;
}

bool Chart::in_domain(const Eigen::VectorXd& xi) const {
  for (int i = 0; i < domain_dim_; ++i) {
    double lo = to_double(domain_[i].first), hi = to_double(domain_[i].second);
    if (xi(i) < lo - 1e-12 || xi(i) > hi + 1e-12) return false;
  }
  return true;
}

Eigen::VectorXd Chart::eval(const Eigen::VectorXd& xi) const {
  switch (kind_) {
    case Kind::Polynomial: {
      Eigen::VectorXd out(ambient_dim_);
      for (int i = 0; i < ambient_dim_; ++i) out(i) = poly_eval_f(components_[i], xi);
      return out;
    }
    case Kind::SqrtGraph: {
      Eigen::VectorXd out(ambient_dim_);
      out.head(domain_dim_) = xi;
      double g = poly_eval_f(sqrt_arg_, xi);
      if (g < 0) throw std::domain_error("sqrt-graph chart evaluated outside its patch");
      out(domain_dim_) = std::sqrt(g) + to_double(sqrt_offset_);
      return out;
    }
    case Kind::Opaque:
      return opaque_eval_(xi);
  }
  throw std::logic_error("unreachable");
}

Eigen::MatrixXd Chart::jacobian(const Eigen::VectorXd& xi) const {
  switch (kind_) {
    case Kind::Polynomial: {
      Eigen::MatrixXd j(ambient_dim_, domain_dim_);
      for (int i = 0; i < ambient_dim_; ++i)
        for (int v = 0; v < domain_dim_; ++v)
          j(i, v) = poly_eval_f(poly_derivative(components_[i], v), xi);
      return j;
    }
    case Kind::SqrtGraph: {
      Eigen::MatrixXd j = Eigen::MatrixXd::Zero(ambient_dim_, domain_dim_);
      j.topLeftCorner(domain_dim_, domain_dim_).setIdentity();
      double g = poly_eval_f(sqrt_arg_, xi);
      if (g <= 0) throw std::domain_error("sqrt-graph chart not smooth here");
      for (int v = 0; v < domain_dim_; ++v)
        j(domain_dim_, v) = poly_eval_f(poly_derivative(sqrt_arg_, v), xi) / (2.0 * std::sqrt(g));
      return j;
    }
    case Kind::Opaque: {
      // Richardson-extrapolated central differences.
      const double h = 1e-5;
      Eigen::MatrixXd j(ambient_dim_, domain_dim_);
      for (int v = 0; v < domain_dim_; ++v) {
        auto central = [&](double step) {
          Eigen::VectorXd xp = xi, xm = xi;
          xp(v) += step;
          xm(v) -= step;
          return Eigen::VectorXd((opaque_eval_(xp) - opaque_eval_(xm)) / (2 * step));
        };
        Eigen::VectorXd d1 = central(h), d2 = central(h / 2);
        j.col(v) = (4.0 * d2 - d1) / 3.0;
      }
      return j;
    }
  }
  throw std::logic_error("unreachable");
}

Matrix Chart::eval_exact(const std::vector<Rational>& xi) const {
  Matrix out(ambient_dim_, 1, ScalarMode::Exact);
  switch (kind_) {
    case Kind::Polynomial:
      for (int i = 0; i < ambient_dim_; ++i) out.q(i, 0) = poly_eval(components_[i], xi);
      return out;
    case Kind::SqrtGraph: {
      for (int i = 0; i < domain_dim_; ++i) out.q(i, 0) = xi[i];
      auto root = rational_sqrt(poly_eval(sqrt_arg_, xi));
      if (!root) throw std::domain_error("chart value irrational at this point");
      out.q(domain_dim_, 0) = *root + sqrt_offset_;
      return out;
    }
    case Kind::Opaque:
      throw std::domain_error("opaque chart has no exact evaluation");
  }
  throw std::logic_error("unreachable");
}

Matrix Chart::jacobian_exact(const std::vector<Rational>& xi) const {
  Matrix j(ambient_dim_, domain_dim_, ScalarMode::Exact);
  switch (kind_) {
    case Kind::Polynomial:
      for (int i = 0; i < ambient_dim_; ++i)
        for (int v = 0; v < domain_dim_; ++v)
          j.q(i, v) = poly_eval(poly_derivative(components_[i], v), xi);
      return j;
    case Kind::SqrtGraph: {
      for (int i = 0; i < domain_dim_; ++i) j.q(i, i) = 1;
      auto root = rational_sqrt(poly_eval(sqrt_arg_, xi));
      if (!root || *root == 0) throw std::domain_error("chart derivative irrational at this point");
      for (int v = 0; v < domain_dim_; ++v)
        j.q(domain_dim_, v) = poly_eval(poly_derivative(sqrt_arg_, v), xi) / (2 * *root);
      return j;
    }
    case Kind::Opaque:
      throw std::domain_error("opaque chart has no exact derivative");
  }
  throw std::logic_error("unreachable");
}

bool ManifoldCollection::scaling_condition_holds() const {
  Rational s = 0;
  for (size_t j = 0; j < charts.size(); ++j)
    s += Rational(charts[j].domain_dim()) * exponents[j].conjugate().reciprocal();
  return s == ambient_dim();
}

Subspace tangent_space(const Chart& c, const Eigen::VectorXd& xi) {
  Subspace t = Subspace::span(Matrix::from_eigen(c.jacobian(xi)));
  if (t.dim() != c.domain_dim()) throw std::runtime_error("chart not immersive at xi");
  return t;
}

Subspace tangent_space_exact(const Chart& c, const std::vector<Rational>& xi) {
  Subspace t = Subspace::span(c.jacobian_exact(xi));
  if (t.dim() != c.domain_dim()) throw std::runtime_error("chart not immersive at xi");
  return t;
}

double surface_weight(const Chart& c, const Eigen::VectorXd& xi) {
  Eigen::MatrixXd j = c.jacobian(xi);
  double det = (j.transpose() * j).determinant();
  if (det <= 0) throw std::runtime_error("chart not immersive at xi");
  return std::sqrt(det);
}

BLDatum datum_at(const ManifoldCollection& mc, const std::vector<Eigen::VectorXd>& points) {
  if (points.size() != mc.charts.size())
    throw std::invalid_argument("one evaluation point per chart required");
  BLDatum d;
  d.n = mc.ambient_dim();
  d.exponents = mc.exponents.conjugate();
  for (size_t j = 0; j < mc.charts.size(); ++j) {
    Eigen::MatrixXd jac = mc.charts[j].jacobian(points[j]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    if (svd.singularValues().minCoeff() <= kDefaultRankTol * svd.singularValues().maxCoeff())
      throw std::runtime_error("chart not immersive at xi");
    d.maps.push_back(Matrix::from_eigen(jac.transpose()));
  }
  return d;
}

BLDatum datum_at_exact(const ManifoldCollection& mc,
                       const std::vector<std::vector<Rational>>& points) {
  if (points.size() != mc.charts.size())
    throw std::invalid_argument("one evaluation point per chart required");
  BLDatum d;
  d.n = mc.ambient_dim();
  d.exponents = mc.exponents.conjugate();
  for (size_t j = 0; j < mc.charts.size(); ++j) {
    Matrix jac = mc.charts[j].jacobian_exact(points[j]);
    if (rank(jac) != mc.charts[j].domain_dim())
      throw std::runtime_error("chart not immersive at xi");
    d.maps.push_back(jac.transpose());
  }
  return d;
}

ScanReport transversality_scan(const ManifoldCollection& mc, const std::vector<int>& grid,
                               const SearchBudget& budget) {
  if (!mc.scaling_condition_holds())
    throw std::invalid_argument("scaling condition fails for this collection");
  if (grid.size() != mc.charts.size())
    throw std::invalid_argument("one grid count per chart required");

  // Per-chart sample points: uniform grids over the domain boxes.
  std::vector<std::vector<Eigen::VectorXd>> samples(mc.charts.size());
  for (size_t j = 0; j < mc.charts.size(); ++j) {
    const Chart& c = mc.charts[j];
    int g = std::max(1, grid[j]);
    std::vector<Eigen::VectorXd> pts(1, Eigen::VectorXd::Zero(c.domain_dim()));
    for (int axis = 0; axis < c.domain_dim(); ++axis) {
      std::vector<Eigen::VectorXd> next;
      double lo = to_double(c.domain()[axis].first), hi = to_double(c.domain()[axis].second);
      for (const auto& base : pts)
        for (int i = 0; i < g; ++i) {
          Eigen::VectorXd p = base;
          p(axis) = g == 1 ? 0.5 * (lo + hi) : lo + i * (hi - lo) / (g - 1);
          next.push_back(p);
        }
      pts = std::move(next);
    }
    samples[j] = std::move(pts);
  }

  ScanReport report;
  std::vector<size_t> index(mc.charts.size(), 0);
  while (true) {
    ScanReport::Tuple tuple;
    for (size_t j = 0; j < mc.charts.size(); ++j) tuple.points.push_back(samples[j][index[j]]);
    BLDatum d = datum_at(mc, tuple.points);
    if (auto w = search_violating_subspace(d, budget)) {
      tuple.verdict.status = FinitenessStatus::Infinite;
      tuple.verdict.defect = dimension_defect(d, *w);
      tuple.verdict.witness = std::move(w);
    } else {
      tuple.verdict.status = FinitenessStatus::Finite;
    }
    tuple.verdict.certificate_mode = CertificateMode::Heuristic;
    if (tuple.verdict.defect < report.worst_defect) {
      report.worst_defect = tuple.verdict.defect;
      report.worst_tuple = static_cast<int>(report.tuples.size());
      report.worst_witness = tuple.verdict.witness;
    }
    if (tuple.verdict.status == FinitenessStatus::Infinite) report.passed = false;
    report.tuples.push_back(std::move(tuple));

    size_t k = 0;
    while (k < index.size() && ++index[k] == samples[k].size()) index[k++] = 0;
    if (k == index.size()) break;
  }
  return report;
}

}  // namespace bltk
