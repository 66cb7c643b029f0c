#pragma once

#include "bltk/report.hpp"
#include "bltk/rng.hpp"
#include "bltk/subspace.hpp"
#include "bltk/datum.hpp"

#include <functional>

namespace bltk {

// delta-neighbourhood of the affine subspace point + direction, clipped to
// the integration box at rasterization time.
struct Tube {
  Eigen::VectorXd point;
  Subspace direction;  // float mode, dim = n - codim
};

struct TubeFamily {
  int n = 0;
  int codim = 0;
  Subspace direction_reference;
  std::vector<Tube> members;
  double delta = 0.0;
};

// Members get directions within angle_spread of the reference (basis vectors
// perturbed and re-orthonormalized) and base points uniform in [0,1]^n.
TubeFamily random_tube_family(int n, int codim, const Subspace& reference, int count, double delta,
                              double angle_spread, uint64_t seed);

// One-delta check of int_{[0,1]^n} prod_j (sum_T chi_T)^{1/p_j} against
// delta^n prod (#T_j)^{1/p_j}: rasterizes overlap counts at cell centres and
// reports the ratio.  Requires the exact scaling n = sum codim_j / p_j.
// p_j = infinity enters as the indicator of positive overlap.
ExperimentReport mkbl_check(const std::vector<TubeFamily>& families, const ExponentVector& p,
                            int grid_per_axis);

// Multi-delta sweep with a caller-supplied family generator; pass means the
// fitted log-log slope of the ratio stays within slope_tolerance of zero
// (bounded ratio, no blow-up).
ExperimentReport kakeya_sweep(const std::function<std::vector<TubeFamily>(double)>& make_families,
                              const ExponentVector& p, const std::vector<double>& delta_list,
                              int grid_per_axis, double slope_tolerance = 0.1);

}  // namespace bltk
