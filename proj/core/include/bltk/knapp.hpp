#pragma once

#include <complex>

#include "bltk/manifold.hpp"
#include "bltk/report.hpp"
#include "bltk/rng.hpp"

namespace bltk {

// Anisotropic slab N_thickness(W cap B(0, core_radius)): the building block
// of both Knapp-set sides.
struct SlabSet {
  Subspace core;  // float mode
  double core_radius = 0.0;
  double thickness = 0.0;

  bool contains(const Eigen::VectorXd& x) const;
  // Box counting in coordinates aligned with the core subspace, so the cell
  // size adapts to the slab anisotropy.
  double box_counted_volume(int cells_per_axis) const;
  // Seeded rejection sample from the slab.
  Eigen::VectorXd sample(SplitRng& rng) const;
};

struct KnappSets {
  std::vector<SlabSet> frequency;  // X_j in R^{n_j}
  SlabSet spatial;                 // X in R^n
  std::vector<double> frequency_volume;
  double spatial_volume = 0.0;
};

// X_j = N_delta((L_j V)-perp cap B(0, delta^{1/2})) and
// X = N_{c delta^{-1/2}}(V cap B(0, c delta^{-1})).
KnappSets knapp_sets(const BLDatum& d, const Subspace& v, double delta, double c,
                     int cells_per_axis = 256);

// Samples (x, xi) in X x X_j and verifies both halves of the phase bound:
// |<L_j x, xi>| <= 1/10 and |<x, Sigma_j(xi) - dSigma_j(0) xi>| <= 1/10.
bool phase_check(const ManifoldCollection& mc, const Subspace& v, double delta, double c,
                 int samples, uint64_t seed = 0);

// Grid function on an axis-aligned box (cell-center samples).
struct GridFn {
  std::vector<std::pair<double, double>> box;
  std::vector<int> counts;
  std::vector<double> values;

  static GridFn indicator(const std::vector<std::pair<double, double>>& box,
                          const std::vector<int>& counts,
                          const std::function<bool(const Eigen::VectorXd&)>& member);
  static GridFn constant(const std::vector<std::pair<double, double>>& box,
                         const std::vector<int>& counts, double value);
  double cell_volume() const;
  Eigen::VectorXd cell_center(size_t flat_index) const;
  // Piecewise-constant evaluation; zero outside the box.
  double value_at(const Eigen::VectorXd& x) const;
  double l2_norm_sq() const;
};

// Quadrature approximation of E f(x) = int e^{i<x, Sigma(xi)>} f(xi) dxi.
// Throws "phase under-resolved" if the grid cannot resolve the oscillation
// at this |x|.
std::complex<double> extension_integral(const Chart& c, const GridFn& f, const Eigen::VectorXd& x);

struct KnappConfig {
  Subspace V;
  std::vector<double> delta_list;
  double c = 0.01;
  int quadrature = 8;  // x-grid points per delta^{-1/2} oscillation scale
  int phase_samples = 400;
  uint64_t seed = 0;
  double slope_tolerance = 0.1;
};

// The Knapp quotient int_{B_R} prod |E_j 1_{X_j}|^{2/p_j'} normalized
// by prod ||1_{X_j}||_2^{2/p_j'} with R = delta^{-1}, fitted against the
// predicted exponent (1/2)(sum dim(L_j V)/p_j' - dim V).  A negative slope
// beyond tolerance certifies a transversality failure at this V.
ExperimentReport knapp_experiment(const ManifoldCollection& mc, const KnappConfig& cfg);

}  // namespace bltk
