#include "bltk/gaussian.hpp"

#include <cmath>
#include <random>

namespace bltk {

namespace {

double log_det_spd(const Eigen::MatrixXd& m, const char* what) {
  if ((m - m.transpose()).norm() > 1e-12 * (1.0 + m.norm()))
    throw std::invalid_argument(std::string(what) + " not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(std::string(what) + " not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Eigen::MatrixXd quadratic_form(const BLDatum& d, const GaussianTuple& a) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(d.n, d.n);
  for (size_t j = 0; j < d.m(); ++j) {
    double w = to_double(d.exponents[j].reciprocal());
    if (w == 0.0) continue;
    Eigen::MatrixXd lj = d.maps[j].eigen();
    q += w * lj.transpose() * a.blocks[j] * lj;
  }
  return 0.5 * (q + q.transpose());
}

double condition_number(const Eigen::MatrixXd& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (lo <= 0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

double stationarity_residual(const BLDatum& d, const GaussianTuple& a) {
  Eigen::MatrixXd q = quadratic_form(d, a);
  Eigen::LLT<Eigen::MatrixXd> llt(q);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (size_t j = 0; j < d.m(); ++j) {
    if (d.exponents[j].is_infinite()) continue;
    Eigen::MatrixXd lj = d.maps[j].eigen();
    Eigen::MatrixXd target = lj * llt.solve(lj.transpose());
    Eigen::MatrixXd ainv = a.blocks[j].inverse();
    worst = std::max(worst, (ainv - target).norm() / ainv.norm());
  }
  return worst;
}

}  // namespace

GaussianTuple GaussianTuple::identities(const BLDatum& d) {
  GaussianTuple a;
  for (size_t j = 0; j < d.m(); ++j)
    a.blocks.push_back(Eigen::MatrixXd::Identity(d.block_dim(j), d.block_dim(j)));
  return a;
}

double bl_ratio(const BLDatum& d, const GaussianTuple& a) {
  if (a.blocks.size() != d.m()) throw std::invalid_argument("gaussian tuple arity mismatch");
  double log_num = 0.0;
  for (size_t j = 0; j < d.m(); ++j) {
    if (a.blocks[j].rows() != d.block_dim(j))
      throw std::invalid_argument("gaussian block dimension mismatch");
    double w = to_double(d.exponents[j].reciprocal());
    double ld = log_det_spd(a.blocks[j], "gaussian block");
    if (w != 0.0) log_num += 0.5 * w * ld;
  }
  Eigen::MatrixXd q = quadratic_form(d, a);
  Eigen::LLT<Eigen::MatrixXd> llt(q);
  if (llt.info() != Eigen::Success) throw std::runtime_error("degenerate gaussian");
  double log_den = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return std::exp(log_num - 0.5 * log_den);
}

GaussianTuple fixed_point_step(const BLDatum& d, const GaussianTuple& a) {
  Eigen::MatrixXd q = quadratic_form(d, a);
  Eigen::LLT<Eigen::MatrixXd> llt(q);
  if (llt.info() != Eigen::Success) throw std::runtime_error("degenerate gaussian");
  GaussianTuple next = a;
  for (size_t j = 0; j < d.m(); ++j) {
    if (d.exponents[j].is_infinite()) continue;  // frozen at the supplied block
    Eigen::MatrixXd lj = d.maps[j].eigen();
    Eigen::MatrixXd m = lj * llt.solve(lj.transpose());
    Eigen::LLT<Eigen::MatrixXd> mllt(0.5 * (m + m.transpose()));
    if (mllt.info() != Eigen::Success) throw std::runtime_error("degenerate gaussian");
    Eigen::MatrixXd inv = mllt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    next.blocks[j] = 0.5 * (inv + inv.transpose());
  }
  return next;
}

ConstantEstimate compute_constant(const BLDatum& d, const IterationOptions& opts) {
  BLDatum df = d.to_float();
  Rational sca = scaling_defect(df);
  Rational weight_sum = 0;  // sum n_j / p_j
  for (size_t j = 0; j < df.m(); ++j)
    weight_sum += Rational(df.block_dim(j)) * df.exponents[j].reciprocal();

  auto run_from = [&](GaussianTuple a) {
    ConstantEstimate est;
    est.maximizer = a;
    double prev;
    try {
      prev = bl_ratio(df, a);
      est.value = prev;
    } catch (const std::runtime_error&) {
      est.status = IterationStatus::Diverging;
      return est;
    }
    for (int it = 1; it <= opts.max_iter; ++it) {
      est.iterations = it;
      try {
        a = fixed_point_step(df, a);
        if (sca == 0) {
          // Kill the flat scaling direction: prod det(A_j)^{1/p_j} = 1.
          double logdets = 0.0;
          for (size_t j = 0; j < df.m(); ++j)
            logdets += to_double(df.exponents[j].reciprocal()) *
                       log_det_spd(a.blocks[j], "gaussian block");
          double t = std::exp(-logdets / to_double(weight_sum));
          for (auto& b : a.blocks) b *= t;
        } else {
          // The ratio is homogeneous of degree sca/2 in a joint rescaling, so
          // a scale line search improves it without bound.
          double t = sca > 0 ? 4.0 : 0.25;
          for (auto& b : a.blocks) b *= t;
        }
        double r = bl_ratio(df, a);
        est.value = r;
        est.maximizer = a;
        if (r > 1.0 / opts.tol || !std::isfinite(r) ||
            condition_number(quadratic_form(df, a)) > opts.condition_cap) {
          est.status = IterationStatus::Diverging;
          return est;
        }
        double res = stationarity_residual(df, a);
        est.residual = res;
        if (std::abs(r - prev) < opts.tol * std::max(1.0, r) && res < opts.tol) {
          est.status = IterationStatus::Converged;
          return est;
        }
        prev = r;
      } catch (const std::runtime_error&) {
        est.status = IterationStatus::Diverging;
        return est;
      }
    }
    est.status = IterationStatus::MaxIter;
    return est;
  };

  std::vector<GaussianTuple> starts;
  starts.push_back(GaussianTuple::identities(df));
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < opts.restarts; ++s) {
    GaussianTuple a;
    for (size_t j = 0; j < df.m(); ++j) {
      int nj = df.block_dim(j);
      Eigen::MatrixXd b(nj, nj);
      for (int i = 0; i < nj; ++i)
        for (int k = 0; k < nj; ++k) b(i, k) = gauss(rng);
      a.blocks.push_back(b.transpose() * b + 0.1 * Eigen::MatrixXd::Identity(nj, nj));
    }
    starts.push_back(std::move(a));
  }

  ConstantEstimate best;
  bool have = false;
  for (auto& start : starts) {
    ConstantEstimate est = run_from(start);
    if (est.status == IterationStatus::Diverging) return est;
    if (!have || est.value > best.value ||
        (est.status == IterationStatus::Converged && best.status != IterationStatus::Converged &&
         est.value >= best.value * (1.0 - 10 * opts.tol))) {
      best = est;
      have = true;
    }
  }
  return best;
}

double duality_ratio(const SubspaceDatum& sd, const IterationOptions& opts) {
  ConstantEstimate primal = compute_constant(parametrize(sd), opts);
  ConstantEstimate dual_est = compute_constant(parametrize(dual(sd)), opts);
  if (primal.status == IterationStatus::Diverging ||
      dual_est.status == IterationStatus::Diverging)
    throw std::runtime_error("duality ratio undefined (infinite constant)");
  return primal.value / dual_est.value;
}

}  // namespace bltk
