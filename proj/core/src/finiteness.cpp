#include "bltk/finiteness.hpp"

#include <algorithm>
#include <random>

#include "bltk/gaussian.hpp"

namespace bltk {

Rational dimension_defect(const BLDatum& d, const Subspace& v) {
  if (v.ambient_dim() != d.n)
    throw std::invalid_argument("subspace ambient dimension does not match datum");
  Rational s = 0;
  for (size_t j = 0; j < d.m(); ++j)
    s += Rational(image(d.maps[j], v).dim()) * d.exponents[j].reciprocal();
  return s - v.dim();
}

Rational transversality_defect(const std::vector<Subspace>& tangents, const ExponentVector& p,
                               const Subspace& v) {
  if (tangents.size() != p.size())
    throw std::invalid_argument("tangent count does not match exponent count");
  Rational s = 0;
  for (size_t j = 0; j < tangents.size(); ++j) {
    if (tangents[j].ambient_dim() != v.ambient_dim())
      throw std::invalid_argument("tangent space ambient dimension mismatch");
    Subspace normal = orthogonal_complement(tangents[j]);
    int drop = v.dim() - intersect(v, normal).dim();
    s += Rational(drop) * p[j].conjugate().reciprocal();
  }
  return s - v.dim();
}

namespace {

constexpr size_t kPoolCap = 24;

// Projective normalization key for deduplicating exact column vectors.
std::string vector_key(const Matrix& col) {
  Rational lead = 0;
  for (int i = 0; i < col.rows(); ++i)
    if (col.q(i, 0) != 0) {
      lead = col.q(i, 0);
      break;
    }
  std::string key;
  for (int i = 0; i < col.rows(); ++i) {
    key += lead == 0 ? "0" : to_string(col.q(i, 0) / lead);
    key += ',';
  }
  return key;
}

std::string span_key(const Subspace& v) {
  std::string key = std::to_string(v.dim()) + ":";
  for (int j = 0; j < v.basis().cols(); ++j)
    for (int i = 0; i < v.basis().rows(); ++i) key += to_string(v.basis().q(i, j)) + ",";
  return key;
}

Rational rationalize(double x, long max_den) {
  // Continued-fraction convergents with bounded denominator.
  bool neg = x < 0;
  double t = std::abs(x);
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(t);
    long ai = static_cast<long>(a);
    long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = t - a;
    if (frac < 1e-12) break;
    t = 1.0 / frac;
  }
  Rational r(p1, q1 == 0 ? 1 : q1);
  return neg ? -r : r;
}

bool push_unique(std::vector<Subspace>& out, std::vector<std::string>& keys, const Subspace& v) {
  std::string key = span_key(v);
  if (std::find(keys.begin(), keys.end(), key) != keys.end()) return false;
  keys.push_back(key);
  out.push_back(v);
  return true;
}

}  // namespace

std::vector<Matrix> candidate_pool(const BLDatum& d) {
  if (d.mode() != ScalarMode::Exact)
    throw std::invalid_argument("candidate pool is defined for exact-mode data");
  std::vector<Matrix> pool;
  std::vector<std::string> seen;
  auto add = [&](const Matrix& col) {
    bool zero = true;
    for (int i = 0; i < col.rows(); ++i)
      if (col.q(i, 0) != 0) zero = false;
    if (zero || pool.size() >= kPoolCap) return;
    std::string key = vector_key(col);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) return;
    seen.push_back(key);
    pool.push_back(col);
  };
  for (int i = 0; i < d.n; ++i) {
    Matrix e(d.n, 1, ScalarMode::Exact);
    e.q(i, 0) = 1;
    add(e);
  }
  for (const auto& l : d.maps) {
    Matrix ker = nullspace(l);
    for (int j = 0; j < ker.cols(); ++j) add(ker.col(j));
  }
  size_t base = pool.size();
  for (size_t i = 0; i < base; ++i)
    for (size_t j = i + 1; j < base; ++j) add(pool[i] + pool[j]);
  return pool;
}

std::vector<Subspace> kernel_lattice(const BLDatum& d, int max_depth) {
  ScalarMode mode = d.mode();
  std::vector<Subspace> out;
  std::vector<std::string> keys;
  auto key_of = [&](const Subspace& v) {
    if (mode == ScalarMode::Exact) return span_key(v);
    std::string k = std::to_string(v.dim()) + ":";
    for (int j = 0; j < v.basis().cols(); ++j)
      for (int i = 0; i < v.basis().rows(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f,", v.basis().f(i, j));
        k += buf;
      }
    return k;
  };
  auto push = [&](const Subspace& v) {
    std::string key = key_of(v);
    if (std::find(keys.begin(), keys.end(), key) != keys.end()) return false;
    keys.push_back(key);
    out.push_back(v);
    return true;
  };
  for (const auto& l : d.maps) push(Subspace::span(nullspace(l)));
  for (int depth = 0; depth < max_depth; ++depth) {
    bool grew = false;
    size_t count = out.size();
    for (size_t i = 0; i < count && out.size() < 256; ++i)
      for (size_t j = i + 1; j < count && out.size() < 256; ++j) {
        grew |= push(subspace_sum(out[i], out[j]));
        grew |= push(intersect(out[i], out[j]));
      }
    if (!grew) break;
  }
  return out;
}

namespace {

// Float-mode local descent on the Grassmannian: minimizes a smooth rank
// surrogate of the defect, then re-verifies any promising candidate with
// exact arithmetic (when the datum is exact).
std::optional<Subspace> grassmannian_descent(const BLDatum& d, const SearchBudget& budget) {
  BLDatum df = d.to_float();
  std::vector<Eigen::MatrixXd> maps;
  std::vector<double> weights;
  for (size_t j = 0; j < df.m(); ++j) {
    maps.push_back(df.maps[j].eigen());
    weights.push_back(to_double(df.exponents[j].reciprocal()));
  }
  const double mu = 1e-2;
  auto surrogate = [&](const Eigen::MatrixXd& b) {
    double s = 0.0;
    for (size_t j = 0; j < maps.size(); ++j) {
      if (weights[j] == 0.0) continue;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(maps[j] * b);
      double soft = 0.0;
      for (int i = 0; i < svd.singularValues().size(); ++i) {
        double s2 = svd.singularValues()(i) * svd.singularValues()(i);
        soft += s2 / (s2 + mu);
      }
      s += weights[j] * soft;
    }
    return s - b.cols();
  };
  auto orthonormalize = [](const Eigen::MatrixXd& b) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols()));
  };

  std::mt19937_64 rng(budget.seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 1; k < d.n; ++k) {
    for (int restart = 0; restart < 6; ++restart) {
      Eigen::MatrixXd b(d.n, k);
      for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < k; ++j) b(i, j) = gauss(rng);
      b = orthonormalize(b);
      double eta = 0.2;
      double f = surrogate(b);
      for (int it = 0; it < 120; ++it) {
        Eigen::MatrixXd g(d.n, k);
        const double h = 1e-5;
        for (int i = 0; i < d.n; ++i)
          for (int j = 0; j < k; ++j) {
            Eigen::MatrixXd bp = b;
            bp(i, j) += h;
            g(i, j) = (surrogate(orthonormalize(bp)) - f) / h;
          }
        Eigen::MatrixXd bn = orthonormalize(b - eta * g);
        double fn = surrogate(bn);
        if (fn < f) {
          b = bn;
          f = fn;
          eta = std::min(eta * 1.2, 0.5);
        } else {
          eta *= 0.5;
          if (eta < 1e-4) break;
        }
      }
      Subspace vf = Subspace::span(Matrix::from_eigen(b));
      if (vf.dim() != k) continue;
      if (d.mode() == ScalarMode::Float) {
        if (dimension_defect(df, vf) < 0) return vf;
        continue;
      }
      // Rationalize the canonical basis and certify exactly.
      Matrix exact(d.n, k, ScalarMode::Exact);
      for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < k; ++j) exact.q(i, j) = rationalize(vf.basis().f(i, j), 1024);
      Subspace ve = Subspace::span(exact);
      if (ve.dim() == k && dimension_defect(d, ve) < 0) return ve;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Subspace> search_violating_subspace(const BLDatum& d, const SearchBudget& budget) {
  // 1. Kernel-generated sublattice.
  for (const auto& v : kernel_lattice(d, budget.lattice_depth)) {
    if (v.dim() == 0 || v.dim() == d.n) continue;
    if (dimension_defect(d, v) < 0) return v;
  }

  // 2. Exhaustive candidate-pool subsets (exact mode, small dimension).
  if (d.mode() == ScalarMode::Exact && d.n <= budget.exhaustive_dim_cap) {
    std::vector<Matrix> pool = candidate_pool(d);
    std::vector<std::string> span_keys;
    std::vector<int> subset;
    std::optional<Subspace> found;
    auto recurse = [&](auto&& self, size_t start) -> void {
      if (found) return;
      if (!subset.empty()) {
        Matrix cols(d.n, static_cast<int>(subset.size()), ScalarMode::Exact);
        for (size_t k = 0; k < subset.size(); ++k)
          for (int i = 0; i < d.n; ++i) cols.q(i, static_cast<int>(k)) = pool[subset[k]].q(i, 0);
        Subspace v = Subspace::span(cols);
        if (v.dim() > 0 && v.dim() < d.n) {
          std::string key = span_key(v);
          if (std::find(span_keys.begin(), span_keys.end(), key) == span_keys.end()) {
            span_keys.push_back(key);
            if (dimension_defect(d, v) < 0) {
              found = v;
              return;
            }
          }
        }
      }
      if (static_cast<int>(subset.size()) >= d.n - 1) return;
      for (size_t i = start; i < pool.size(); ++i) {
        subset.push_back(static_cast<int>(i));
        self(self, i + 1);
        subset.pop_back();
        if (found) return;
      }
    };
    recurse(recurse, 0);
    if (found) return found;
  }

  // 3. Budgeted random rational subspaces of every intermediate dimension.
  std::mt19937_64 rng(budget.seed);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int trial = 0; trial < budget.random_trials; ++trial) {
    int k = 1 + static_cast<int>(rng() % std::max(1, d.n - 1));
    Matrix cols(d.n, k, d.mode());
    for (int i = 0; i < d.n; ++i)
      for (int j = 0; j < k; ++j) {
        int e = entry(rng);
        if (cols.is_exact())
          cols.q(i, j) = e;
        else
          cols.f(i, j) = e;
      }
    Subspace v = Subspace::span(cols);
    if (v.dim() == 0 || v.dim() == d.n) continue;
    if (dimension_defect(d, v) < 0) return v;
  }

  // 4. Float-mode descent with exact re-verification.
  return grassmannian_descent(d, budget);
}

FinitenessVerdict decide_finiteness(const BLDatum& d, const SearchBudget& budget) {
  validate(d);
  FinitenessVerdict verdict;
  Rational sca = scaling_defect(d);
  if (sca != 0) {
    verdict.status = FinitenessStatus::Infinite;
    verdict.defect = sca;
    verdict.certificate_mode = CertificateMode::Exact;
    return verdict;
  }
  if (auto w = search_violating_subspace(d, budget)) {
    verdict.status = FinitenessStatus::Infinite;
    verdict.defect = dimension_defect(d, *w);
    verdict.witness = std::move(w);
    verdict.certificate_mode =
        d.mode() == ScalarMode::Exact ? CertificateMode::Exact : CertificateMode::Heuristic;
    return verdict;
  }
  // No violator found: corroborate with the gaussian lower-bound sequence.
  IterationOptions opts;
  opts.tol = 1e-7;
  opts.max_iter = 400;
  opts.restarts = 2;
  opts.seed = budget.seed;
  ConstantEstimate est = compute_constant(d, opts);
  if (est.status == IterationStatus::Diverging) {
    verdict.status = FinitenessStatus::Unknown;
    verdict.certificate_mode = CertificateMode::Heuristic;
    return verdict;
  }
  verdict.status = FinitenessStatus::Finite;
  verdict.certificate_mode =
      (d.mode() == ScalarMode::Exact && d.n <= budget.exhaustive_dim_cap)
          ? CertificateMode::Exact
          : CertificateMode::Heuristic;
  return verdict;
}

}  // namespace bltk
