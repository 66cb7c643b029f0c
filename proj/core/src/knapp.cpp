#include "bltk/knapp.hpp"

#include <algorithm>
#include <cmath>

namespace bltk {

namespace {

// Orthonormal frame [core | complement] for slab-aligned coordinates.
Eigen::MatrixXd aligned_frame(const SlabSet& s) {
  int n = s.core.ambient_dim();
  Eigen::MatrixXd f(n, n);
  int kc = s.core.dim();
  if (kc > 0) f.leftCols(kc) = s.core.basis().eigen();
  if (kc < n) f.rightCols(n - kc) = orthogonal_complement(s.core).basis().eigen();
  return f;
}

double chart_gradient_bound(const Chart& c) {
  // Coarse bound on |dSigma| over the domain box, from corner and center
  // samples.
  double bound = 0.0;
  int d = c.domain_dim();
  for (int mask = 0; mask < (1 << d); ++mask) {
    Eigen::VectorXd xi(d);
    for (int i = 0; i < d; ++i)
      xi(i) = to_double(mask & (1 << i) ? c.domain()[i].second : c.domain()[i].first);
    bound = std::max(bound, c.jacobian(xi).norm());
  }
  bound = std::max(bound, c.jacobian(Eigen::VectorXd::Zero(d)).norm());
  return bound;
}

}  // namespace

bool SlabSet::contains(const Eigen::VectorXd& x) const {
  int kc = core.dim();
  double dist;
  if (kc == 0) {
    dist = x.norm();
  } else {
    Eigen::MatrixXd b = core.basis().eigen();
    Eigen::VectorXd xc = b.transpose() * x;
    Eigen::VectorXd xp = x - b * xc;
    double t = xc.norm();
    dist = t <= core_radius ? xp.norm() : std::hypot(t - core_radius, xp.norm());
  }
  return dist <= thickness + 1e-15;
}

double SlabSet::box_counted_volume(int cells_per_axis) const {
  int n = core.ambient_dim();
  int cells = std::max(2, std::min(cells_per_axis, static_cast<int>(std::pow(2.0, 22.0 / n))));
  Eigen::MatrixXd f = aligned_frame(*this);
  int kc = core.dim();
  std::vector<double> half(n);
  for (int i = 0; i < n; ++i) half[i] = (i < kc ? core_radius : 0.0) + thickness;
  std::vector<int> idx(n, 0);
  double cell_vol = 1.0;
  for (int i = 0; i < n; ++i) cell_vol *= 2.0 * half[i] / cells;
  long count = 0;
  while (true) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u(i) = -half[i] + (idx[i] + 0.5) * (2.0 * half[i] / cells);
    if (contains(f * u)) ++count;
    int k = 0;
    while (k < n && ++idx[k] == cells) idx[k++] = 0;
    if (k == n) break;
  }
  return count * cell_vol;
}

Eigen::VectorXd SlabSet::sample(SplitRng& rng) const {
  int n = core.ambient_dim();
  Eigen::MatrixXd f = aligned_frame(*this);
  int kc = core.dim();
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) {
      double h = (i < kc ? core_radius : 0.0) + thickness;
      u(i) = rng.uniform(-h, h);
    }
    Eigen::VectorXd x = f * u;
    if (contains(x)) return x;
  }
  throw std::runtime_error("slab rejection sampling failed");
}

KnappSets knapp_sets(const BLDatum& d, const Subspace& v, double delta, double c,
                     int cells_per_axis) {
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta must lie in (0,1)");
  if (v.ambient_dim() != d.n) throw std::invalid_argument("V must live in the datum's domain");
  KnappSets sets;
  for (size_t j = 0; j < d.m(); ++j) {
    SlabSet xj;
    xj.core = orthogonal_complement(image(d.maps[j].to_float(), v));
    xj.core_radius = std::sqrt(delta);
    xj.thickness = delta;
    sets.frequency_volume.push_back(xj.box_counted_volume(cells_per_axis));
    sets.frequency.push_back(std::move(xj));
  }
  sets.spatial.core = Subspace::span(v.basis().to_float());
  sets.spatial.core_radius = c / delta;
  sets.spatial.thickness = c / std::sqrt(delta);
  sets.spatial_volume = sets.spatial.box_counted_volume(cells_per_axis);
  return sets;
}

bool phase_check(const ManifoldCollection& mc, const Subspace& v, double delta, double c,
                 int samples, uint64_t seed) {
  std::vector<Eigen::VectorXd> zeros;
  for (const auto& ch : mc.charts) zeros.push_back(Eigen::VectorXd::Zero(ch.domain_dim()));
  BLDatum d0 = datum_at(mc, zeros);
  KnappSets sets = knapp_sets(d0, v, delta, c, 8 /* volumes unused here */);
  SplitRng rng(seed, 17);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x = sets.spatial.sample(rng);
    for (size_t j = 0; j < mc.charts.size(); ++j) {
      Eigen::VectorXd xi = sets.frequency[j].sample(rng);
      Eigen::MatrixXd lj = d0.maps[j].eigen();
      if (std::abs((lj * x).dot(xi)) > 0.1) return false;
      Eigen::VectorXd curve = mc.charts[j].eval(xi) - lj.transpose() * xi;
      if (std::abs(x.dot(curve)) > 0.1) return false;
    }
  }
  return true;
}

GridFn GridFn::indicator(const std::vector<std::pair<double, double>>& box,
                         const std::vector<int>& counts,
                         const std::function<bool(const Eigen::VectorXd&)>& member) {
  GridFn f;
  f.box = box;
  f.counts = counts;
  size_t total = 1;
  for (int c : counts) total *= static_cast<size_t>(c);
  f.values.assign(total, 0.0);
  for (size_t i = 0; i < total; ++i)
    if (member(f.cell_center(i))) f.values[i] = 1.0;
  return f;
}

GridFn GridFn::constant(const std::vector<std::pair<double, double>>& box,
                        const std::vector<int>& counts, double value) {
  GridFn f;
  f.box = box;
  f.counts = counts;
  size_t total = 1;
  for (int c : counts) total *= static_cast<size_t>(c);
  f.values.assign(total, value);
  return f;
}

double GridFn::value_at(const Eigen::VectorXd& x) const {
  size_t flat = 0, stride = 1;
  for (size_t i = 0; i < box.size(); ++i) {
    double t = (x(static_cast<int>(i)) - box[i].first) / (box[i].second - box[i].first);
    if (t < 0.0 || t >= 1.0) return 0.0;
    flat += stride * static_cast<size_t>(t * counts[i]);
    stride *= static_cast<size_t>(counts[i]);
  }
  return values[flat];
}

double GridFn::cell_volume() const {
  double v = 1.0;
  for (size_t i = 0; i < box.size(); ++i) v *= (box[i].second - box[i].first) / counts[i];
  return v;
}

Eigen::VectorXd GridFn::cell_center(size_t flat_index) const {
  Eigen::VectorXd x(static_cast<int>(box.size()));
  for (size_t i = 0; i < box.size(); ++i) {
    size_t c = flat_index % counts[i];
    flat_index /= counts[i];
    x(static_cast<int>(i)) = box[i].first + (c + 0.5) * (box[i].second - box[i].first) / counts[i];
  }
  return x;
}

double GridFn::l2_norm_sq() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s * cell_volume();
}

namespace {

struct SupportCell {
  Eigen::VectorXd sigma;  // Sigma(xi_center)
  double weight;          // f(xi) * cell volume
};

std::vector<SupportCell> support_cells(const Chart& c, const GridFn& f) {
  std::vector<SupportCell> cells;
  for (size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i] == 0.0) continue;
    Eigen::VectorXd xi = f.cell_center(i);
    cells.push_back({c.eval(xi), f.values[i] * f.cell_volume()});
  }
  return cells;
}

std::complex<double> evaluate_extension(const std::vector<SupportCell>& cells,
                                        const Eigen::VectorXd& x) {
  std::complex<double> s(0.0, 0.0);
  for (const auto& cell : cells) {
    double phase = x.dot(cell.sigma);
    s += cell.weight * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return s;
}

}  // namespace

std::complex<double> extension_integral(const Chart& c, const GridFn& f,
                                        const Eigen::VectorXd& x) {
  double grad = chart_gradient_bound(c);
  for (size_t i = 0; i < f.box.size(); ++i) {
    double h = (f.box[i].second - f.box[i].first) / f.counts[i];
    // >= 8 grid points per phase period along each axis.
    if (h * grad * x.norm() > 2.0 * M_PI / 8.0) throw std::runtime_error("phase under-resolved");
  }
  return evaluate_extension(support_cells(c, f), x);
}

ExperimentReport knapp_experiment(const ManifoldCollection& mc, const KnappConfig& cfg) {
  if (!mc.scaling_condition_holds())
    throw std::invalid_argument("scaling condition fails for this collection");
  int n = mc.ambient_dim();
  std::vector<Eigen::VectorXd> zeros;
  for (const auto& ch : mc.charts) zeros.push_back(Eigen::VectorXd::Zero(ch.domain_dim()));
  BLDatum d0 = datum_at(mc, zeros);
  ExponentVector pconj = mc.exponents.conjugate();

  // Predicted deficit from the |X|, |X_j| size asymptotics.
  Subspace vf = Subspace::span(cfg.V.basis().to_float());
  double image_dim_sum = 0.0;
  for (size_t j = 0; j < d0.m(); ++j)
    image_dim_sum += image(d0.maps[j], vf).dim() * to_double(pconj[j].reciprocal());
  double predicted = 0.5 * (image_dim_sum - vf.dim());

  ExperimentReport report;
  report.name = "knapp";
  report.predicted_exponent = predicted;
  report.slope_tolerance = cfg.slope_tolerance;

  for (double delta : cfg.delta_list) {
    if (!phase_check(mc, vf, delta, cfg.c, cfg.phase_samples, cfg.seed))
      throw std::runtime_error("phase bound violated: decrease c");
    KnappSets sets = knapp_sets(d0, vf, delta, cfg.c);
    double big_r = 1.0 / delta;

    // Frequency-side indicators on grids fine enough for the phase at |x|<=R.
    std::vector<std::vector<SupportCell>> charts_cells;
    std::vector<double> l2sq;
    for (size_t j = 0; j < mc.charts.size(); ++j) {
      const Chart& chart = mc.charts[j];
      double grad = chart_gradient_bound(chart);
      double h = std::min(delta / 2.0, (2.0 * M_PI / 8.0) / (big_r * grad)) * 0.999;
      double extent = sets.frequency[j].core_radius + sets.frequency[j].thickness;
      std::vector<std::pair<double, double>> box;
      std::vector<int> counts;
      for (int axis = 0; axis < chart.domain_dim(); ++axis) {
        double lo = std::max(-extent, to_double(chart.domain()[axis].first));
        double hi = std::min(extent, to_double(chart.domain()[axis].second));
        box.emplace_back(lo, hi);
        counts.push_back(std::max(2, static_cast<int>(std::ceil((hi - lo) / h))));
      }
      const SlabSet& slab = sets.frequency[j];
      GridFn f = GridFn::indicator(box, counts,
                                   [&](const Eigen::VectorXd& xi) { return slab.contains(xi); });
      l2sq.push_back(f.l2_norm_sq());
      charts_cells.push_back(support_cells(chart, f));
    }

    // Spatial Riemann sum over B_R resolving the delta^{-1/2} scale.
    double hx = std::sqrt(delta) <= 0 ? 1.0 : (1.0 / std::sqrt(delta)) / cfg.quadrature;
    int per_axis = static_cast<int>(std::ceil(2.0 * big_r / hx));
    std::vector<int> idx(n, 0);
    double lhs = 0.0;
    while (true) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x(i) = -big_r + (idx[i] + 0.5) * (2.0 * big_r / per_axis);
      if (x.norm() <= big_r) {
        double prod = 1.0;
        for (size_t j = 0; j < charts_cells.size(); ++j) {
          double e = 2.0 * to_double(pconj[j].reciprocal());
          if (e == 0.0) continue;
          prod *= std::pow(std::abs(evaluate_extension(charts_cells[j], x)), e);
        }
        lhs += prod;
      }
      int k = 0;
      while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
      if (k == n) break;
    }
    double cell = 2.0 * big_r / per_axis;
    lhs *= std::pow(cell, n);

    double rhs = 1.0;
    for (size_t j = 0; j < mc.charts.size(); ++j)
      rhs *= std::pow(l2sq[j], to_double(pconj[j].reciprocal()));

    report.measurements.push_back({delta, lhs, rhs, lhs / rhs});
  }

  report.fitted_slope = fit_loglog_slope(report.measurements);
  report.pass = std::abs(report.fitted_slope - predicted) <= cfg.slope_tolerance;
  return report;
}

}  // namespace bltk
