#include <doctest.h>

#include <cmath>

#include "bltk/gaussian.hpp"
#include "helpers.hpp"

using namespace bltk;
using namespace bltk::testing;

TEST_CASE("ratio at identity tuples") {
  BLDatum holder = holder_datum(2, {"2", "2"}).to_float();
  CHECK(bl_ratio(holder, GaussianTuple::identities(holder)) == doctest::Approx(1.0));

  // The trilinear Young ratio is already extremal at isotropic gaussians.
  BLDatum young = young_datum().to_float();
  CHECK(bl_ratio(young, GaussianTuple::identities(young)) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));

  BLDatum lw = loomis_whitney().to_float();
  CHECK(bl_ratio(lw, GaussianTuple::identities(lw)) == doctest::Approx(1.0));
}

TEST_CASE("ratio is homogeneous when scaling holds") {
  SplitRng rng(3);
  BLDatum d = young_datum().to_float();
  GaussianTuple a = GaussianTuple::identities(d);
  for (auto& b : a.blocks) b *= 1.7;
  double base = bl_ratio(d, a);
  for (int trial = 0; trial < 20; ++trial) {
    double t = rng.uniform(0.1, 10.0);
    GaussianTuple scaled = a;
    for (auto& b : scaled.blocks) b *= t;
    CHECK(bl_ratio(d, scaled) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("infinite exponents carry zero weight") {
  BLDatum d;
  d.n = 2;
  d.maps = {exact({{1, 0}, {0, 1}}).to_float(), exact({{1, 0}}).to_float()};
  d.exponents = exponents({"1", "inf"});
  GaussianTuple a = GaussianTuple::identities(d);
  a.blocks[1] *= 100.0;  // must not change anything
  CHECK(bl_ratio(d, a) == doctest::Approx(1.0));
}

TEST_CASE("fixed point step is stationary at Hoelder identity") {
  BLDatum d = holder_datum(3, {"2", "4", "4"}).to_float();
  GaussianTuple a = GaussianTuple::identities(d);
  GaussianTuple next = fixed_point_step(d, a);
  for (size_t j = 0; j < d.m(); ++j)
    CHECK((next.blocks[j] - a.blocks[j]).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("computed constants match the closed forms") {
  IterationOptions opts;
  opts.tol = 1e-10;

  ConstantEstimate young = compute_constant(young_datum().to_float(), opts);
  CHECK(young.status == IterationStatus::Converged);
  CHECK(std::abs(young.value - std::sqrt(3.0) / 2.0) <= 1e-6);

  ConstantEstimate holder = compute_constant(holder_datum(2, {"2", "2"}).to_float(), opts);
  CHECK(holder.status == IterationStatus::Converged);
  CHECK(holder.value == 1.0);
  CHECK(holder.iterations == 1);

  ConstantEstimate lw = compute_constant(loomis_whitney().to_float(), opts);
  CHECK(lw.status == IterationStatus::Converged);
  CHECK(lw.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("stationarity residual is honored at convergence") {
  IterationOptions opts;
  ConstantEstimate e = compute_constant(young_datum().to_float(), opts);
  REQUIRE(e.status == IterationStatus::Converged);
  CHECK(e.residual <= opts.tol);
  CHECK(e.value == doctest::Approx(bl_ratio(young_datum().to_float(), e.maximizer)));
}

TEST_CASE("scaling violations blow the iteration up") {
  ConstantEstimate e = compute_constant(loomis_whitney({"2", "2", "4"}).to_float());
  CHECK(e.status == IterationStatus::Diverging);
}

TEST_CASE("infinite-by-witness data never report convergence") {
  // Scaling holds but the x-axis is a violating subspace.
  ConstantEstimate e = compute_constant(loomis_whitney({"4/3", "2", "4"}).to_float());
  CHECK(e.status == IterationStatus::Diverging);
}

TEST_CASE("duality ratio depends only on exponents and block dims") {
  SplitRng rng(5);
  IterationOptions opts;
  opts.tol = 1e-9;
  double first = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    SubspaceDatum sd;
    sd.block_dims = {1, 1};
    Matrix b(2, 1, ScalarMode::Float);
    b.f(0, 0) = rng.uniform(0.3, 2.0);
    b.f(1, 0) = rng.uniform(0.3, 2.0);
    sd.H = Subspace::span(b);
    sd.exponents = exponents({"2", "2"});
    double r = duality_ratio(sd, opts);
    if (trial == 0)
      first = r;
    else
      CHECK(r == doctest::Approx(first).epsilon(1e-3));
  }
}

TEST_CASE("duality ratio is undefined for infinite constants") {
  SubspaceDatum sd = to_subspace_form(loomis_whitney({"2", "2", "4"}));
  CHECK_THROWS_WITH(duality_ratio(sd), doctest::Contains("duality ratio undefined"));
}
