#pragma once

#include "bltk/knapp.hpp"

namespace bltk {

struct McLevel {
  double epsilon = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
};

struct DensityEstimate {
  double value = 0.0;
  double ci_halfwidth = 0.0;  // 95% confidence
  std::vector<McLevel> levels;
};

struct McConfig {
  long samples = 4000000;                           // per ladder level
  std::vector<double> epsilon_list = {0.2, 0.1, 0.05};  // dyadic, decreasing
  uint64_t seed = 0;
  double rank_tol = 1e-6;  // relative singular-value floor for transversality
};

// Density of g_1 dsigma_1 * ... * g_m dsigma_m at the point a, estimated as
// int prod g_j(xi_j) delta(Sigma_1(xi_1)+...+Sigma_m(xi_m) - a) prod w_j dxi
// with the delta mollified by a centred gaussian of width epsilon and
// Richardson-extrapolated over the ladder.  Detects a rank-deficient
// constraint Jacobian on the zero set (or unbounded growth across the
// ladder) and reports it as an error, since the density is then typically
// infinite.
DensityEstimate convolution_density(const ManifoldCollection& mc, const std::vector<GridFn>& g,
                                    const Eigen::VectorXd& a, const McConfig& cfg);

// ||g||_{L^p(dsigma)} by cell-centre quadrature with the surface weight.
double chart_lp_norm(const Chart& c, const GridFn& g, const Exponent& p);

struct VerifyCConfig {
  int trials = 8;
  McConfig mc;
  uint64_t seed = 0;
};

// Samples random sub-box indicators g_j and points a near the summed
// surface, and reports the worst density / prod ||g_j||_{p_j} ratio.  The
// per-level worst ratios double as a refinement trend: pass means the
// mollification ladder converged (near-zero fitted slope in epsilon) and no
// trial hit the non-transversal error.
ExperimentReport verify_C(const ManifoldCollection& mc, const VerifyCConfig& cfg);

}  // namespace bltk
