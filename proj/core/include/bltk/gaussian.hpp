#pragma once

#include <Eigen/Dense>

#include "bltk/datum.hpp"

namespace bltk {

// m-tuple of symmetric positive definite matrices A_j, the gaussian
// covariance parameters of Lieb's supremum formula.
struct GaussianTuple {
  std::vector<Eigen::MatrixXd> blocks;

  static GaussianTuple identities(const BLDatum& d);
};

enum class IterationStatus { Converged, MaxIter, Diverging };

struct ConstantEstimate {
  double value = 0.0;
  GaussianTuple maximizer;
  IterationStatus status = IterationStatus::MaxIter;
  int iterations = 0;
  double residual = 0.0;
};

// The gaussian ratio  prod_j det(A_j)^{1/(2 p_j)} / det(Q)^{1/2}  with
// Q = sum_j (1/p_j) L_j^* A_j L_j.  Blocks with p_j = infinity carry weight
// zero in Q and exponent zero in the numerator.
double bl_ratio(const BLDatum& d, const GaussianTuple& a);

// Coordinate-wise maximizing update A_j <- (L_j Q^{-1} L_j^*)^{-1} for all
// finite-exponent blocks; a fixed point is a stationary tuple of the ratio.
GaussianTuple fixed_point_step(const BLDatum& d, const GaussianTuple& a);

struct IterationOptions {
  double tol = 1e-10;
  int max_iter = 2000;
  int restarts = 5;  // seeded random SPD restarts, in addition to identity
  uint64_t seed = 0;
  double condition_cap = 1e14;
};

// Iterates the fixed point map with joint det-normalization and reports the
// best ratio over restarts.  Divergence (ratio beyond 1/tol or Q conditioning
// collapse) signals an infinite constant or a sup approached only by
// degenerating gaussians.
ConstantEstimate compute_constant(const BLDatum& d, const IterationOptions& opts = {});

// Measured ratio BL(H, p) / BL(H-perp, p'); by Fourier duality this depends
// only on (p, block_dims).  Throws if either side diverges.
double duality_ratio(const SubspaceDatum& sd, const IterationOptions& opts = {});

}  // namespace bltk
