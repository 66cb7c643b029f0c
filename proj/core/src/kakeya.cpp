#include "bltk/kakeya.hpp"

#include <algorithm>
#include <cmath>

namespace bltk {

namespace {

// Orthogonal projector onto the complement of the tube direction; distance
// to the axis is the norm of the projected offset.
Eigen::MatrixXd perp_projector(const Tube& t, int n) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  if (t.direction.dim() > 0) {
    Eigen::MatrixXd b = t.direction.basis().eigen();
    p -= b * b.transpose();
  }
  return p;
}

DeltaMeasurement mkbl_measure(const std::vector<TubeFamily>& families, const ExponentVector& p,
                              int grid_per_axis) {
  int n = families.front().n;
  double delta = families.front().delta;
  for (const auto& fam : families) {
    if (fam.n != n) throw std::invalid_argument("tube families live in different dimensions");
    if (fam.delta != delta) throw std::invalid_argument("tube families have mismatched delta");
    for (const auto& t : fam.members)
      if (t.direction.dim() != n - fam.codim)
        throw std::invalid_argument("tube direction dimension disagrees with codim");
  }

  struct RasterTube {
    Eigen::MatrixXd proj;
    Eigen::VectorXd point;
  };
  std::vector<std::vector<RasterTube>> raster(families.size());
  for (size_t j = 0; j < families.size(); ++j)
    for (const auto& t : families[j].members)
      raster[j].push_back({perp_projector(t, n), t.point});

  std::vector<double> expo(families.size());
  for (size_t j = 0; j < families.size(); ++j) expo[j] = to_double(p[j].reciprocal());

  int cells = std::min(grid_per_axis, 2048);
  double h = 1.0 / cells;
  std::vector<int> idx(n, 0);
  double lhs = 0.0;
  while (true) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = (idx[i] + 0.5) * h;
    double prod = 1.0;
    for (size_t j = 0; j < families.size() && prod != 0.0; ++j) {
      int count = 0;
      for (const auto& t : raster[j])
        if ((t.proj * (x - t.point)).norm() <= delta) ++count;
      if (expo[j] == 0.0)
        prod *= count > 0 ? 1.0 : 0.0;  // 1/p = 0: indicator of positive overlap
      else
        prod *= std::pow(static_cast<double>(count), expo[j]);
    }
    lhs += prod;
    int k = 0;
    while (k < n && ++idx[k] == cells) idx[k++] = 0;
    if (k == n) break;
  }
  lhs *= std::pow(h, n);

  double rhs = std::pow(delta, n);
  for (size_t j = 0; j < families.size(); ++j)
    rhs *= std::pow(static_cast<double>(families[j].members.size()), expo[j]);
  return {delta, lhs, rhs, lhs / rhs};
}

void require_scaling(const std::vector<TubeFamily>& families, const ExponentVector& p) {
  if (families.empty()) throw std::invalid_argument("no tube families given");
  if (p.size() != families.size())
    throw std::invalid_argument("one exponent per tube family required");
  Rational s = 0;
  for (size_t j = 0; j < families.size(); ++j)
    s += Rational(families[j].codim) * p[j].reciprocal();
  if (s != Rational(families.front().n)) throw std::invalid_argument("scaling condition fails");
}

}  // namespace

TubeFamily random_tube_family(int n, int codim, const Subspace& reference, int count, double delta,
                              double angle_spread, uint64_t seed) {
  if (reference.dim() != n - codim)
    throw std::invalid_argument("reference direction dimension disagrees with codim");
  TubeFamily fam;
  fam.n = n;
  fam.codim = codim;
  fam.direction_reference = reference;
  fam.delta = delta;
  SplitRng rng(seed, 3);
  for (int t = 0; t < count; ++t) {
    Tube tube;
    tube.point = Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) { return rng.next_double(); });
    if (reference.dim() > 0) {
      Eigen::MatrixXd b = reference.basis().eigen();
      Eigen::MatrixXd perturbed =
          b + angle_spread * Eigen::MatrixXd::NullaryExpr(
                                 n, b.cols(), [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
      Matrix m(n, static_cast<int>(b.cols()), ScalarMode::Float);
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < b.cols(); ++c) m.f(i, c) = perturbed(i, c);
      tube.direction = Subspace::span(m);
    } else {
      tube.direction = Subspace::zero(n, ScalarMode::Float);
    }
    fam.members.push_back(std::move(tube));
  }
  return fam;
}

ExperimentReport mkbl_check(const std::vector<TubeFamily>& families, const ExponentVector& p,
                            int grid_per_axis) {
  require_scaling(families, p);
  ExperimentReport report;
  report.name = "mkbl";
  report.measurements.push_back(mkbl_measure(families, p, grid_per_axis));
  report.predicted_exponent = 0.0;
  report.pass = true;  // single delta: boundedness needs the sweep
  Json fams = Json::array();
  for (const auto& f : families) {
    Json jf;
    jf["codim"] = f.codim;
    jf["count"] = f.members.size();
    fams.push_back(jf);
  }
  report.inputs["families"] = fams;
  return report;
}

ExperimentReport kakeya_sweep(const std::function<std::vector<TubeFamily>(double)>& make_families,
                              const ExponentVector& p, const std::vector<double>& delta_list,
                              int grid_per_axis, double slope_tolerance) {
  ExperimentReport report;
  report.name = "kakeya";
  report.predicted_exponent = 0.0;
  report.slope_tolerance = slope_tolerance;
  for (double delta : delta_list) {
    std::vector<TubeFamily> fams = make_families(delta);
    require_scaling(fams, p);
    // Resolve the tube width; capped per-axis resolution keeps desk scale.
    int cells = std::min(2048, std::max(grid_per_axis, static_cast<int>(std::ceil(8.0 / delta))));
    report.measurements.push_back(mkbl_measure(fams, p, cells));
  }
  report.fitted_slope = fit_loglog_slope(report.measurements);
  report.pass = std::abs(report.fitted_slope - report.predicted_exponent) <= slope_tolerance;
  return report;
}

}  // namespace bltk
