// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "bltk/convolution.hpp"
#include "bltk/json_io.hpp"
#include "bltk/kakeya.hpp"
#include "helpers.hpp"

using namespace bltk;
using namespace bltk::testing;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  %d. %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(), detail.c_str());
  if (!pass) ++failures;
}

void run(int index, const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
  try {
    auto [pass, detail] = fn();
    report(index, name, pass, detail);
  } catch (const std::exception& e) {
    report(index, name, false, std::string("exception: ") + e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// ---- criterion bodies ----

std::pair<bool, std::string> young_constant() {
  auto t0 = std::chrono::steady_clock::now();
  IterationOptions opts;
  opts.tol = 1e-10;
  ConstantEstimate e = compute_constant(young_datum().to_float(), opts);
  double target = std::sqrt(3.0) / 2.0;
  double err = std::abs(e.value - target);
  bool pass = e.status == IterationStatus::Converged && err <= 1e-6 && seconds_since(t0) <= 10.0;
  return {pass, fmt("value %.9f, |err| %.2e, %.1fs", e.value, err, seconds_since(t0))};
}

std::pair<bool, std::string> holder_identity() {
  struct Case {
    int n;
    std::vector<std::string> ps;
  };
  // Reciprocals are dyadic so the identity-tuple ratio is 1.0 in doubles.
  std::vector<Case> cases = {{1, {"2", "2"}},     {2, {"2", "2"}},       {3, {"2", "4", "4"}},
                             {4, {"2", "4", "4"}}, {4, {"4", "4", "4", "4"}},
                             {3, {"2", "4", "8", "8"}}};
  SplitRng rng(101);
  for (const auto& c : cases) {
    BLDatum d;
    d.n = c.n;
    std::vector<Exponent> ps;
    for (const std::string& p : c.ps) {
      d.maps.push_back(Matrix::identity(c.n, ScalarMode::Exact));
      ps.push_back(parse_exponent(p));
    }
    d.exponents = ExponentVector(std::move(ps));
    IterationOptions opts;
    opts.restarts = 0;  // identity start: the iteration is stationary at once
    ConstantEstimate e = compute_constant(d.to_float(), opts);
    if (e.value != 1.0 || e.iterations != 1)
      return {false, fmt("n=%g: value %.17g at iteration %g", c.n, e.value, e.iterations)};
    // Every subspace has exact defect zero.
    for (int trial = 0; trial < 50; ++trial) {
      int k = 1 + static_cast<int>(rng.next_u64() % c.n);
      Subspace v = Subspace::span(random_exact(c.n, k, rng));
      if (dimension_defect(d, v) != 0) return {false, "nonzero defect found"};
    }
  }
  return {true, fmt("%g exponent layouts, exact zero defects", cases.size())};
}

std::pair<bool, std::string> finiteness_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  SplitRng rng(1234);
  int checked = 0, disagreements = 0;
  while (checked < 200) {
    BLDatum d;
    d.n = 2 + static_cast<int>(rng.next_u64() % 3);  // up to 4
    int m = 2 + static_cast<int>(rng.next_u64() % 2);
    d.maps.clear();
    for (int j = 0; j < m; ++j) {
      Matrix l = random_exact(1 + static_cast<int>(rng.next_u64() % d.n), d.n, rng);
      if (rank(l) < l.rows()) {
        --j;
        continue;
      }
      d.maps.push_back(l);
    }
    // Random reciprocals; solve the last one to satisfy scaling half the time.
    std::vector<Rational> recips;
    Rational acc = 0;
    for (int j = 0; j < m; ++j) {
      Rational r = Rational(static_cast<long>(rng.next_u64() % 5)) / 4;
      recips.push_back(r);
      acc += Rational(d.block_dim(j)) * r;
    }
    if (rng.next_u64() % 2) {
      Rational want = Rational(d.n) - acc + Rational(d.block_dim(m - 1)) * recips.back();
      Rational r = want / d.block_dim(m - 1);
      if (r < 0 || r > 1) continue;
      recips.back() = r;
    }
    std::vector<Exponent> ps;
    for (const Rational& r : recips)
      ps.push_back(r == 0 ? Exponent::infinity() : Exponent(1 / r));
    d.exponents = ExponentVector(ps);
    ++checked;

    // Independent oracle: scaling plus brute force over candidate-pool spans
    // (subsets up to size n-1 cover every proper subspace the pool spans).
    bool oracle_infinite = scaling_defect(d) != 0;
    if (!oracle_infinite) {
      std::vector<Matrix> pool = candidate_pool(d);
      int p = static_cast<int>(pool.size());
      std::function<void(int, int, Matrix)> rec = [&](int start, int left, Matrix cols) {
        if (oracle_infinite) return;
        if (cols.cols() && dimension_defect(d, Subspace::span(cols)) < 0) {
          oracle_infinite = true;
          return;
        }
        if (left == 0) return;
        for (int i = start; i < p; ++i)
          rec(i + 1, left - 1, cols.cols() ? cols.hcat(pool[i]) : pool[i]);
      };
      rec(0, d.n - 1, Matrix(d.n, 0, ScalarMode::Exact));
    }

    FinitenessVerdict v = decide_finiteness(d, SearchBudget{});
    bool verdict_infinite = v.status == FinitenessStatus::Infinite;
    if (oracle_infinite != verdict_infinite) {
      ++disagreements;
      std::fprintf(stderr, "  disagreement at instance %d (oracle %d, verdict %d)\n", checked,
                   oracle_infinite, verdict_infinite);
    }
  }
  double dt = seconds_since(t0);
  return {disagreements == 0 && dt < 60.0,
          fmt("200 data, %g disagreements, %.1fs", disagreements, dt)};
}

std::pair<bool, std::string> defect_bridge() {
  Rational h(1, 2);
  std::vector<std::pair<Rational, Rational>> b1 = {{-h, h}};
  std::vector<std::pair<Rational, Rational>> b2 = {{-h, h}, {-h, h}};
  std::vector<ManifoldCollection> collections;

  ManifoldCollection caps;
  caps.charts = {Chart::sphere_cap(1, Rational(1), {{Rational(-3, 5), Rational(3, 5)}}),
                 Chart::line({Rational(0), Rational(1)}, h)};
  caps.exponents = exponents({"inf", "inf"});
  collections.push_back(caps);

  ManifoldCollection surfaces;
  surfaces.charts = {Chart::paraboloid(2, b2), Chart::hyperplane({Rational(1), Rational(-2)}, b2),
                     Chart::cone_patch({Rational(3), Rational(4)}, b2)};
  surfaces.exponents = exponents({"3", "3", "3"});
  collections.push_back(surfaces);

  ManifoldCollection graph;
  graph.charts = {Chart::polynomial_graph({{Rational(1), {2}}, {Rational(1, 2), {1}}}, 1, b1),
                  Chart::line({Rational(3, 5), Rational(4, 5)}, h)};
  graph.exponents = exponents({"2", "2"});
  collections.push_back(graph);

  int checked = 0;
  for (const auto& mc : collections) {
    int n = mc.ambient_dim();
    std::vector<std::vector<Rational>> points;
    for (const auto& c : mc.charts) {
      std::vector<Rational> xi(c.domain_dim(), Rational(0));
      if (c.kind() != Chart::Kind::SqrtGraph) xi[0] = Rational(1, 4);
      points.push_back(xi);
    }
    BLDatum d = datum_at_exact(mc, points);
    std::vector<Subspace> tangents;
    for (size_t j = 0; j < mc.charts.size(); ++j)
      tangents.push_back(tangent_space_exact(mc.charts[j], points[j]));
    for (int mask = 0; mask < (1 << n); ++mask) {
      Matrix cols(n, 0, ScalarMode::Exact);
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) {
          Matrix e(n, 1, ScalarMode::Exact);
          e.q(i, 0) = 1;
          cols = cols.cols() ? cols.hcat(e) : e;
        }
      Subspace v = Subspace::span(cols);
      if (transversality_defect(tangents, mc.exponents, v) != dimension_defect(d, v))
        return {false, "identity violated"};
      ++checked;
    }
  }
  return {true, fmt("%g coordinate subspaces across 3 collections, exact", checked)};
}

std::pair<bool, std::string> duality_constancy() {
  SplitRng rng(77);
  IterationOptions opts;
  opts.tol = 1e-9;

  // dual of dual is the identity, exactly.
  for (int trial = 0; trial < 20; ++trial) {
    SubspaceDatum sd;
    sd.block_dims = {1, 2};
    sd.H = Subspace::span(random_exact(3, 1 + static_cast<int>(rng.next_u64() % 2), rng));
    sd.exponents = exponents({"2", "3/2"});
    SubspaceDatum back = dual(dual(sd));
    if (!(back.H == sd.H) || !(back.exponents == sd.exponents))
      return {false, "dual involution violated"};
  }

  std::vector<double> ratios;
  for (int trial = 0; trial < 10; ++trial) {
    SubspaceDatum sd;
    sd.block_dims = {1, 1};
    Matrix b(2, 1, ScalarMode::Float);
    b.f(0, 0) = rng.uniform(0.2, 2.0);
    b.f(1, 0) = rng.uniform(0.2, 2.0);
    sd.H = Subspace::span(b);
    sd.exponents = exponents({"2", "2"});
    ratios.push_back(duality_ratio(sd, opts));
  }
  double lo = *std::min_element(ratios.begin(), ratios.end());
  double hi = *std::max_element(ratios.begin(), ratios.end());
  double rel = (hi - lo) / lo;
  return {rel <= 1e-3, fmt("ratio spread %.2e over 10 instances", rel)};
}

std::pair<bool, std::string> knapp_blowup() {
  auto t0 = std::chrono::steady_clock::now();
  auto lines = [](bool identical) {
    ManifoldCollection mc;
    mc.charts = {Chart::line({Rational(1), Rational(0)}, Rational(1, 2)),
                 identical ? Chart::line({Rational(1), Rational(0)}, Rational(1, 2))
                           : Chart::line({Rational(0), Rational(1)}, Rational(1, 2))};
    mc.exponents = exponents({"inf", "inf"});
    return mc;
  };
  KnappConfig cfg;
  cfg.V = Subspace::span(dense({{0.0}, {1.0}}));  // the common normal
  cfg.delta_list = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  ExperimentReport degenerate = knapp_experiment(lines(true), cfg);
  double err = std::abs(degenerate.fitted_slope - degenerate.predicted_exponent);
  bool ok1 = std::abs(degenerate.predicted_exponent + 0.5) < 1e-12 && err <= 0.1;

  ExperimentReport transverse = knapp_experiment(lines(false), cfg);
  bool ok2 = transverse.fitted_slope >= -0.05;
  double dt = seconds_since(t0);
  return {ok1 && ok2 && dt <= 60.0,
          fmt("degenerate slope %.3f (predicted -0.5), transverse slope %.3f, %.0fs",
              degenerate.fitted_slope, transverse.fitted_slope, dt)};
}

std::pair<bool, std::string> convolution_oracle() {
  auto segment = [](double angle) {
    Eigen::Vector2d dir(std::cos(angle), std::sin(angle));
    return Chart::opaque(
        1, 2, [dir](const Eigen::VectorXd& xi) { return Eigen::VectorXd(dir * xi(0)); },
        {{Rational(-1, 2), Rational(1, 2)}});
  };
  McConfig cfg;
  cfg.samples = 8000000;
  cfg.epsilon_list = {0.1, 0.05, 0.025};
  cfg.seed = 9;
  std::string detail;
  for (double theta : {M_PI / 2, M_PI / 3, M_PI / 6}) {
    ManifoldCollection mc;
    mc.charts = {segment(0.0), segment(theta)};
    mc.exponents = exponents({"2", "2"});
    std::vector<GridFn> g = {GridFn::constant({{-0.5, 0.5}}, {64}, 1.0),
                             GridFn::constant({{-0.5, 0.5}}, {64}, 1.0)};
    Eigen::Vector2d a = 0.2 * Eigen::Vector2d(1, 0) +
                        0.1 * Eigen::Vector2d(std::cos(theta), std::sin(theta));
    DensityEstimate est = convolution_density(mc, g, a, cfg);
    double target = 1.0 / std::sin(theta);
    double rel = std::abs(est.value - target) / target;
    detail += fmt("%.0f%%/", 100.0 * rel);
    if (rel > 0.02) return {false, detail + fmt(" rel err %.3f exceeds 2%%", rel)};
  }
  // Parallel segments must trip the blow-up detection.
  ManifoldCollection parallel;
  parallel.charts = {segment(0.0), segment(0.0)};
  parallel.exponents = exponents({"2", "2"});
  std::vector<GridFn> g = {GridFn::constant({{-0.5, 0.5}}, {64}, 1.0),
                           GridFn::constant({{-0.5, 0.5}}, {64}, 1.0)};
  McConfig small = cfg;
  small.samples = 200000;
  try {
    convolution_density(parallel, g, Eigen::Vector2d(0.3, 0.0), small);
    return {false, "parallel segments not detected"};
  } catch (const std::runtime_error&) {
  }
  return {true, "rel errs " + detail + " parallel case detected"};
}

std::pair<bool, std::string> kakeya_desk_scale() {
  // (a) all-parallel families against the 1-dim product value.
  double delta = 1.0 / 32;
  TubeFamily horizontal, vertical;
  horizontal.n = vertical.n = 2;
  horizontal.codim = vertical.codim = 1;
  horizontal.direction_reference = Subspace::span(dense({{1.0}, {0.0}}));
  vertical.direction_reference = Subspace::span(dense({{0.0}, {1.0}}));
  horizontal.delta = vertical.delta = delta;
  std::vector<double> hy = {0.15, 0.3, 0.32, 0.8}, vx = {0.25, 0.6, 0.64};
  for (double y : hy)
    horizontal.members.push_back({Eigen::Vector2d(0, y), horizontal.direction_reference});
  for (double x : vx)
    vertical.members.push_back({Eigen::Vector2d(x, 0), vertical.direction_reference});
  auto mass = [&](const std::vector<double>& cs) {
    double s = 0;
    for (double c : cs) s += std::min(1.0, c + delta) - std::max(0.0, c - delta);
    return s;
  };
  double oracle = mass(hy) * mass(vx);
  ExponentVector p = exponents({"1", "1"});
  ExperimentReport parallel = mkbl_check({horizontal, vertical}, p, 2048);
  double rel = std::abs(parallel.measurements[0].lhs - oracle) / oracle;
  if (rel > 0.05) return {false, fmt("all-parallel rel err %.3f", rel)};

  // (b) transverse random-direction families: flat ratio across delta.
  std::vector<double> deltas = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  auto transverse = [&](double d) {
    return std::vector<TubeFamily>{
        random_tube_family(2, 1, horizontal.direction_reference, 12, d, 0.15, 5),
        random_tube_family(2, 1, vertical.direction_reference, 12, d, 0.15, 6)};
  };
  ExperimentReport flat = kakeya_sweep(transverse, p, deltas, 256);
  if (std::abs(flat.fitted_slope) > 0.1)
    return {false, fmt("transverse slope %.3f", flat.fitted_slope)};

  // (c) coincident parallel families: the penalized direction blows up.
  auto coincident = [&](double d) {
    TubeFamily fam = random_tube_family(2, 1, horizontal.direction_reference, 8, d, 0.0, 7);
    return std::vector<TubeFamily>{fam, fam};
  };
  ExperimentReport blowup = kakeya_sweep(coincident, p, deltas, 256);
  bool ok = blowup.fitted_slope <= -0.3;
  return {ok, fmt("parallel rel err %.3f, transverse slope %.3f, violating slope %.3f", rel,
                  flat.fitted_slope, blowup.fitted_slope)};
}

std::pair<bool, std::string> cli_determinism() {
  const char* cli = BLTK_CLI_PATH;
  std::string dir = "acceptance_tmp";
  if (std::system(("mkdir -p " + dir).c_str()) != 0) return {false, "tmp dir setup failed"};
  {
    std::ofstream f(dir + "/datum.json");
    f << datum_to_json(loomis_whitney({"4/3", "2", "4"})).dump(2);
  }
  auto slurp = [](const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  for (const char* cmd : {"finiteness", "constant"}) {
    std::string base = std::string(cli) + " " + cmd + " --input " + dir + "/datum.json --seed 5";
    int rc1 = std::system((base + " --output " + dir + "/r1.json").c_str());
    int rc2 = std::system((base + " --output " + dir + "/r2.json").c_str());
    if (WEXITSTATUS(rc1) != WEXITSTATUS(rc2)) return {false, "exit codes differ"};
    std::string a = slurp(dir + "/r1.json"), b = slurp(dir + "/r2.json");
    if (a.empty() || a != b) return {false, std::string("report bytes differ for ") + cmd};
  }
  return {true, "byte-identical reports for finiteness and constant runs"};
}

}  // namespace

int main() {
  run(1, "sharp Young constant sqrt(3)/2", young_constant);
  run(2, "Hoelder identity, exact zero defects", holder_identity);
  run(3, "finiteness agrees with brute-force oracle on 200 random data", finiteness_oracle);
  run(4, "transversality defect equals derived-datum defect (exact)", defect_bridge);
  run(5, "Fourier duality ratio constancy", duality_constancy);
  run(6, "Knapp blow-up certification", knapp_blowup);
  run(7, "convolution density oracle 1/|sin theta|", convolution_oracle);
  run(8, "Kakeya tube inequality at desk scale", kakeya_desk_scale);
  run(9, "CLI byte-determinism", cli_determinism);
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
