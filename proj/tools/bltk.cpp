#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bltk/convolution.hpp"
#include "bltk/json_io.hpp"
#include "bltk/kakeya.hpp"

namespace {

using bltk::Json;

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitNegative = 2;  // certified fail/infinite verdicts
constexpr int kExitUnknown = 3;   // budget exhausted

struct Options {
  std::string input;
  std::string output;
  uint64_t seed = 0;
  double tol = 1e-10;
  int budget_depth = 8;
  int budget_trials = 1000;
  std::string mode;  // "", "exact", "float"
  std::vector<double> delta_list;
  int grid = 256;
};

Json load_input(const Options& opt) {
  std::ifstream f(opt.input);
  if (!f) throw std::runtime_error("cannot open input file " + opt.input);
  Json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("input is not valid JSON: ") + e.what());
  }
  return j;
}

bltk::BLDatum load_datum(const Options& opt, const Json& in) {
  bltk::BLDatum d = bltk::datum_from_json(in);
  if (opt.mode == "float") d = d.to_float();
  if (opt.mode == "exact" && d.mode() != bltk::ScalarMode::Exact)
    throw std::runtime_error("--mode exact requires rational-string input entries");
  return d;
}

Json config_echo(const std::string& command, const Options& opt, const Json& input) {
  Json cfg;
  cfg["command"] = command;
  cfg["seed"] = opt.seed;
  cfg["tol"] = opt.tol;
  cfg["budget_depth"] = opt.budget_depth;
  cfg["budget_trials"] = opt.budget_trials;
  if (!opt.mode.empty()) cfg["mode"] = opt.mode;
  if (!opt.delta_list.empty()) cfg["delta_list"] = opt.delta_list;
  cfg["grid"] = opt.grid;
  cfg["input"] = input;
  return cfg;
}

void emit(const Options& opt, const Json& report, const std::string& csv = "") {
  std::string text = report.dump(2);
  text += "\n";
  if (opt.output.empty()) {
    std::cout << text;
  } else {
    bltk::write_file_atomic(opt.output, text);
    if (!csv.empty()) bltk::write_file_atomic(opt.output + ".csv", csv);
  }
}

Json report_shell(const std::string& command, const Options& opt, const Json& input) {
  Json r;
  r["config"] = config_echo(command, opt, input);
  return r;
}

bltk::SearchBudget budget_of(const Options& opt) {
  bltk::SearchBudget b;
  b.lattice_depth = opt.budget_depth;
  b.random_trials = opt.budget_trials;
  b.seed = opt.seed;
  return b;
}

std::vector<double> deltas_or(const Options& opt, std::vector<double> fallback) {
  return opt.delta_list.empty() ? fallback : opt.delta_list;
}

int run_validate(const Options& opt) {
  Json in = load_input(opt);
  Json report = report_shell("validate", opt, in);
  bltk::BLDatum d = load_datum(opt, in);
  bltk::validate(d);
  report["valid"] = true;
  report["scaling_defect"] = bltk::to_string(bltk::scaling_defect(d));
  emit(opt, report);
  return kExitPass;
}

int run_finiteness(const Options& opt) {
  Json in = load_input(opt);
  Json report = report_shell("finiteness", opt, in);
  bltk::BLDatum d = load_datum(opt, in);
  bltk::validate(d);
  bltk::SearchBudget budget = budget_of(opt);
  bltk::FinitenessVerdict v = bltk::decide_finiteness(d, budget);
  report["verdict"] = bltk::verdict_to_json(v, budget);
  emit(opt, report);
  if (v.status == bltk::FinitenessStatus::Unknown) return kExitUnknown;
  return v.status == bltk::FinitenessStatus::Finite ? kExitPass : kExitNegative;
}

int run_constant(const Options& opt) {
  Json in = load_input(opt);
  Json report = report_shell("constant", opt, in);
  bltk::BLDatum d = load_datum(opt, in);
  bltk::validate(d);
  bltk::IterationOptions io;
  io.tol = opt.tol;
  io.seed = opt.seed;
  bltk::ConstantEstimate e = bltk::compute_constant(d, io);
  report["estimate"] = bltk::estimate_to_json(e);
  emit(opt, report);
  if (e.status == bltk::IterationStatus::Converged) return kExitPass;
  return e.status == bltk::IterationStatus::Diverging ? kExitNegative : kExitUnknown;
}

int run_transversality(const Options& opt) {
  Json in = load_input(opt);
  Json report = report_shell("transversality", opt, in);
  bltk::ManifoldCollection mc = bltk::collection_from_json(in);
  std::vector<int> grid(mc.charts.size(), std::max(2, opt.grid));
  bltk::ScanReport scan = bltk::transversality_scan(mc, grid, budget_of(opt));
  report["tuples_scanned"] = scan.tuples.size();
  report["passed"] = scan.passed;
  report["worst_defect"] = bltk::to_string(scan.worst_defect);
  report["worst_tuple"] = scan.worst_tuple;
  if (scan.worst_witness)
    report["worst_witness"] = bltk::matrix_to_json(scan.worst_witness->basis());
  emit(opt, report);
  return scan.passed ? kExitPass : kExitNegative;
}

int run_duality(const Options& opt) {
  Json in = load_input(opt);
  Json report = report_shell("duality", opt, in);
  bltk::SubspaceDatum sd = bltk::subspace_datum_from_json(in);
  bltk::IterationOptions io;
  io.tol = opt.tol;
  io.seed = opt.seed;
  try {
    report["ratio"] = bltk::duality_ratio(sd, io);
  } catch (const std::runtime_error& e) {
    report["ratio"] = nullptr;
    report["error"] = e.what();
    emit(opt, report);
    return kExitNegative;
  }
  emit(opt, report);
  return kExitPass;
}

int run_knapp(const Options& opt) {
  Json in = load_input(opt);
  Json report = report_shell("knapp", opt, in);
  bltk::ManifoldCollection mc = bltk::collection_from_json(in.at("collection"));
  bltk::KnappConfig cfg;
  cfg.V = bltk::Subspace::span(bltk::matrix_from_json(in.at("V")));
  cfg.delta_list = deltas_or(opt, {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256});
  if (in.contains("c")) cfg.c = in["c"].get<double>();
  cfg.seed = opt.seed;
  bltk::ExperimentReport r = bltk::knapp_experiment(mc, cfg);
  r.inputs = report["config"];
  report["report"] = r.to_json();
  emit(opt, report, r.to_csv());
  return r.pass ? kExitPass : kExitNegative;
}

int run_convolve(const Options& opt) {
  Json in = load_input(opt);
  Json report = report_shell("convolve", opt, in);
  bltk::ManifoldCollection mc = bltk::collection_from_json(in.at("collection"));
  bltk::VerifyCConfig cfg;
  cfg.seed = opt.seed;
  if (in.contains("trials")) cfg.trials = in["trials"].get<int>();
  if (in.contains("samples")) cfg.mc.samples = in["samples"].get<long>();
  cfg.mc.seed = opt.seed;
  bltk::ExperimentReport r = bltk::verify_C(mc, cfg);
  r.inputs = report["config"];
  report["report"] = r.to_json();
  emit(opt, report, r.to_csv());
  return r.pass ? kExitPass : kExitNegative;
}

int run_kakeya(const Options& opt) {
  Json in = load_input(opt);
  Json report = report_shell("kakeya", opt, in);
  bltk::ExponentVector p = bltk::exponents_from_json(in.at("exponents"));
  struct FamilySpec {
    int codim;
    bltk::Subspace reference;
    int count;
    double spread;
  };
  int n = in.at("n").get<int>();
  std::vector<FamilySpec> specs;
  for (const auto& f : in.at("families")) {
    FamilySpec s{f.at("codim").get<int>(),
                 bltk::Subspace::span(bltk::matrix_from_json(f.at("reference")).to_float()),
                 f.at("count").get<int>(), f.value("angle_spread", 0.0)};
    specs.push_back(std::move(s));
  }
  uint64_t seed = opt.seed;
  auto make = [&](double delta) {
    std::vector<bltk::TubeFamily> fams;
    for (size_t j = 0; j < specs.size(); ++j)
      fams.push_back(bltk::random_tube_family(n, specs[j].codim, specs[j].reference,
                                              specs[j].count, delta, specs[j].spread,
                                              seed + 100 * j));
    return fams;
  };
  std::vector<double> deltas = deltas_or(opt, {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128});
  bltk::ExperimentReport r = bltk::kakeya_sweep(make, p, deltas, opt.grid);
  r.inputs = report["config"];
  report["report"] = r.to_json();
  emit(opt, report, r.to_csv());
  return r.pass ? kExitPass : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brascamp-Lieb toolkit: finiteness verdicts, constants, transversality scans, "
               "and scaling experiments"};
  app.require_subcommand(1);

  Options opt;
  if (const char* threads = std::getenv("BLTK_THREADS")) {
    // All current pipelines are sequential; the cap is honored by Eigen.
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));
  }

  std::map<std::string, std::function<int(const Options&)>> handlers = {
      {"validate", run_validate},       {"finiteness", run_finiteness},
      {"constant", run_constant},       {"transversality", run_transversality},
      {"duality", run_duality},         {"knapp", run_knapp},
      {"convolve", run_convolve},       {"kakeya", run_kakeya},
  };

  std::string chosen;
  for (auto& [name, fn] : handlers) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input", opt.input)->required();
    sub->add_option("--output", opt.output);
    sub->add_option("--seed", opt.seed);
    sub->add_option("--tol", opt.tol);
    sub->add_option("--budget-depth", opt.budget_depth);
    sub->add_option("--budget-trials", opt.budget_trials);
    sub->add_option("--mode", opt.mode)->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--delta-list", opt.delta_list)->delimiter(',');
    sub->add_option("--grid", opt.grid);
    sub->callback([&chosen, name = name] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return handlers.at(chosen)(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
