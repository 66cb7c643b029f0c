#include <doctest.h>

#include <cmath>
#include <complex>

#include "bltk/convolution.hpp"
#include "bltk/kakeya.hpp"
#include "helpers.hpp"

using namespace bltk;
using namespace bltk::testing;

namespace {

ManifoldCollection line_pair(bool identical) {
  ManifoldCollection mc;
  mc.charts = {Chart::line({Rational(1), Rational(0)}, Rational(1, 2)),
               identical ? Chart::line({Rational(1), Rational(0)}, Rational(1, 2))
                         : Chart::line({Rational(0), Rational(1)}, Rational(1, 2))};
  mc.exponents = exponents({"inf", "inf"});
  return mc;
}

Chart segment(double angle) {
  Eigen::Vector2d dir(std::cos(angle), std::sin(angle));
  return Chart::opaque(
      1, 2, [dir](const Eigen::VectorXd& xi) { return Eigen::VectorXd(dir * xi(0)); },
      {{Rational(-1, 2), Rational(1, 2)}});
}

}  // namespace

TEST_CASE("knapp set volumes track the size asymptotics") {
  double delta = 1e-2, c = 1.0;
  BLDatum d = datum_at(line_pair(true), {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)});
  Subspace v = Subspace::span(dense({{1}, {0}}));  // the common normal
  KnappSets sets = knapp_sets(d, v, delta, c, 512);

  for (size_t j = 0; j < 2; ++j) {
    int dim_ljv = image(d.maps[j], v).dim();
    double formula = std::pow(2.0 * std::sqrt(delta), 1 - dim_ljv) * std::pow(2.0 * delta, dim_ljv);
    double ratio = sets.frequency_volume[j] / formula;
    CHECK(ratio > 0.25);
    CHECK(ratio < 4.0);
  }
  double formula_x = std::pow(2.0 * c / delta, v.dim()) *
                     std::pow(2.0 * c / std::sqrt(delta), 2 - v.dim());
  CHECK(sets.spatial_volume / formula_x > 0.25);
  CHECK(sets.spatial_volume / formula_x < 4.0);

  // Degenerate V = {0}: X is just the c delta^{-1/2} ball.
  KnappSets degenerate = knapp_sets(d, Subspace::zero(2, ScalarMode::Float), delta, c, 512);
  double ball = M_PI * std::pow(c / std::sqrt(delta), 2);
  CHECK(degenerate.spatial_volume == doctest::Approx(ball).epsilon(0.05));
}

TEST_CASE("extension integral basics") {
  Chart line = Chart::line({Rational(1), Rational(0)}, Rational(1, 2));
  GridFn f = GridFn::constant({{-0.5, 0.5}}, {512}, 1.0);
  // No oscillation at x = 0: the integral of f.
  std::complex<double> at0 = extension_integral(line, f, Eigen::Vector2d(0, 0));
  CHECK(at0.real() == doctest::Approx(1.0));
  CHECK(at0.imag() == doctest::Approx(0.0));

  // Linear chart: E f(x) = fhat(Sigma^* x), checked against a direct
  // discrete Fourier evaluation.
  SplitRng rng(29);
  GridFn g = GridFn::constant({{-0.5, 0.5}}, {512}, 0.0);
  for (auto& v : g.values) v = rng.uniform(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector2d x(rng.uniform(-3, 3), rng.uniform(-3, 3));
    double s = x(0);  // Sigma^* x for the unit x-axis line
    std::complex<double> dft(0, 0);
    for (size_t i = 0; i < g.values.size(); ++i) {
      double xi = g.box[0].first + (i + 0.5) / 512.0;
      dft += g.values[i] * std::exp(std::complex<double>(0, s * xi)) * g.cell_volume();
    }
    std::complex<double> e = extension_integral(line, g, x);
    CHECK(std::abs(e - dft) <= 1e-6 * (1.0 + std::abs(dft)));
  }

  CHECK_THROWS_WITH(extension_integral(line, f, Eigen::Vector2d(1e6, 0)),
                    doctest::Contains("phase under-resolved"));
}

TEST_CASE("phase bounds calibrate c") {
  // Linear charts: the curvature term vanishes identically.
  CHECK(phase_check(line_pair(true), Subspace::span(dense({{1}, {0}})), 1e-3, 0.01, 200));

  ManifoldCollection parab;
  parab.charts = {Chart::paraboloid(2, {{Rational(-1), Rational(1)}, {Rational(-1), Rational(1)}})};
  parab.exponents = exponents({"1"});
  Subspace v = Subspace::span(dense({{0.0}, {0.0}, {1.0}}));
  CHECK(phase_check(parab, v, 1e-3, 0.01, 400));
  CHECK(!phase_check(parab, v, 1e-3, 10.0, 400));
}

TEST_CASE("extension of a Knapp indicator is large on the dual box") {
  ManifoldCollection mc = line_pair(true);
  BLDatum d = datum_at(mc, {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)});
  Subspace v = Subspace::span(dense({{0}, {1}}));  // normal of the x-axis line
  double delta = 1e-2, c = 0.01;
  REQUIRE(phase_check(mc, v, delta, c, 300));
  KnappSets sets = knapp_sets(d, v, delta, c, 512);

  const SlabSet& xj = sets.frequency[0];
  double extent = xj.core_radius + xj.thickness;
  GridFn f = GridFn::indicator({{-extent, extent}}, {512},
                               [&](const Eigen::VectorXd& xi) { return xj.contains(xi); });
  double measure = f.l2_norm_sq();  // indicator: equals its mass
  SplitRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x = sets.spatial.sample(rng);
    std::complex<double> e = extension_integral(mc.charts[0], f, x);
    CHECK(std::abs(e) >= std::cos(0.2) * measure);
  }
}

TEST_CASE("null Knapp experiment has flat slope") {
  KnappConfig cfg;
  cfg.V = Subspace::zero(2, ScalarMode::Float);
  cfg.delta_list = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  cfg.quadrature = 4;
  ExperimentReport r = knapp_experiment(line_pair(false), cfg);
  CHECK(r.predicted_exponent == doctest::Approx(0.0));
  CHECK(std::abs(r.fitted_slope) <= 0.1);
  CHECK(r.pass);
}

TEST_CASE("convolution density matches the transverse segment formula") {
  double theta = M_PI / 3;
  ManifoldCollection mc;
  mc.charts = {segment(0.0), segment(theta)};
  mc.exponents = exponents({"2", "2"});
  std::vector<GridFn> g = {GridFn::constant({{-0.5, 0.5}}, {64}, 1.0),
                           GridFn::constant({{-0.5, 0.5}}, {64}, 1.0)};
  Eigen::Vector2d a = 0.2 * Eigen::Vector2d(1, 0) + 0.1 * Eigen::Vector2d(std::cos(theta),
                                                                          std::sin(theta));
  McConfig cfg;
  cfg.samples = 1000000;
  cfg.seed = 2;
  DensityEstimate est = convolution_density(mc, g, a, cfg);
  CHECK(est.value == doctest::Approx(1.0 / std::sin(theta)).epsilon(0.05));
  CHECK(est.ci_halfwidth < 0.1);

  // Bit-identical under the same seed.
  DensityEstimate again = convolution_density(mc, g, a, cfg);
  CHECK(again.value == est.value);
  CHECK(again.ci_halfwidth == est.ci_halfwidth);
}

TEST_CASE("parallel segments trip the blow-up detector") {
  ManifoldCollection mc;
  mc.charts = {segment(0.0), segment(0.0)};
  mc.exponents = exponents({"2", "2"});
  std::vector<GridFn> g = {GridFn::constant({{-0.5, 0.5}}, {64}, 1.0),
                           GridFn::constant({{-0.5, 0.5}}, {64}, 1.0)};
  McConfig cfg;
  cfg.samples = 200000;
  CHECK_THROWS_WITH(convolution_density(mc, g, Eigen::Vector2d(0.3, 0.0), cfg),
                    doctest::Contains("non-transversal"));
}

TEST_CASE("verify_C stays bounded on a transverse pair") {
  ManifoldCollection mc;
  mc.charts = {segment(0.0), segment(M_PI / 2)};
  mc.exponents = exponents({"2", "2"});
  VerifyCConfig cfg;
  cfg.trials = 3;
  cfg.mc.samples = 400000;
  ExperimentReport r = verify_C(mc, cfg);
  CHECK(r.pass);
  CHECK(r.details["worst_ratio"].get<double>() > 0.0);
}

TEST_CASE("single tube family of balls rasterizes exactly") {
  TubeFamily fam;
  fam.n = 2;
  fam.codim = 2;
  fam.direction_reference = Subspace::zero(2, ScalarMode::Float);
  fam.delta = 1.0 / 8;
  // Well-separated centres: disjoint delta-balls.
  for (double x : {0.25, 0.75})
    for (double y : {0.25, 0.75})
      fam.members.push_back({Eigen::Vector2d(x, y), Subspace::zero(2, ScalarMode::Float)});
  ExponentVector p = exponents({"1"});
  ExperimentReport r = mkbl_check({fam}, p, 1024);
  // LHS is the exact total ball area; the quotient is pi for all delta.
  CHECK(r.measurements[0].ratio == doctest::Approx(M_PI).epsilon(0.01));
}

TEST_CASE("axis-parallel tubes reproduce the product-structure value") {
  double delta = 1.0 / 16;
  TubeFamily horizontal, vertical;
  horizontal.n = vertical.n = 2;
  horizontal.codim = vertical.codim = 1;
  horizontal.direction_reference = Subspace::span(dense({{1.0}, {0.0}}));
  vertical.direction_reference = Subspace::span(dense({{0.0}, {1.0}}));
  horizontal.delta = vertical.delta = delta;
  std::vector<double> hy = {0.2, 0.25, 0.7}, vx = {0.4, 0.8};
  for (double y : hy)
    horizontal.members.push_back({Eigen::Vector2d(0, y), horizontal.direction_reference});
  for (double x : vx)
    vertical.members.push_back({Eigen::Vector2d(x, 0), vertical.direction_reference});

  // 1-dim oracle: the integral factorizes into interval-overlap sums.
  auto line_mass = [&](const std::vector<double>& centers) {
    double s = 0.0;
    for (double c : centers)
      s += std::min(1.0, c + delta) - std::max(0.0, c - delta);
    return s;
  };
  double oracle = line_mass(hy) * line_mass(vx);

  ExponentVector p = exponents({"1", "1"});
  ExperimentReport r = mkbl_check({horizontal, vertical}, p, 1024);
  CHECK(r.measurements[0].lhs == doctest::Approx(oracle).epsilon(0.05));
}

TEST_CASE("kakeya scaling condition is enforced") {
  TubeFamily fam;
  fam.n = 2;
  fam.codim = 1;
  fam.direction_reference = Subspace::span(dense({{1.0}, {0.0}}));
  fam.delta = 0.125;
  fam.members.push_back({Eigen::Vector2d::Zero(), fam.direction_reference});
  CHECK_THROWS_WITH(mkbl_check({fam, fam}, exponents({"2", "2"}), 128),
                    doctest::Contains("scaling condition fails"));
}

TEST_CASE("random tube families are reproducible and well-formed") {
  Subspace ref = Subspace::span(dense({{1.0}, {0.0}}));
  TubeFamily a = random_tube_family(2, 1, ref, 5, 0.1, 0.2, 99);
  TubeFamily b = random_tube_family(2, 1, ref, 5, 0.1, 0.2, 99);
  REQUIRE(a.members.size() == 5);
  for (size_t i = 0; i < 5; ++i) {
    CHECK(a.members[i].point == b.members[i].point);
    CHECK(a.members[i].direction == b.members[i].direction);
    CHECK(a.members[i].direction.dim() == 1);
  }
}
