#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace bltk {

using Json = nlohmann::ordered_json;

struct DeltaMeasurement {
  double delta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

// Shared shape of the experiment lab outputs: per-delta measurements, a
// fitted log-log slope against the predicted exponent, and a pass flag at
// the stated tolerance.
struct ExperimentReport {
  std::string name;
  Json inputs;
  std::vector<DeltaMeasurement> measurements;
  double fitted_slope = 0.0;
  double predicted_exponent = 0.0;
  double slope_tolerance = 0.1;
  bool pass = false;
  Json details;

  Json to_json() const;
  std::string to_csv() const;
};

// Least-squares slope of log(ratio) against log(delta) over the `tail`
// smallest deltas.
double fit_loglog_slope(const std::vector<DeltaMeasurement>& ms, size_t tail = 4);

// Write-then-rename so readers never observe a partial report.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace bltk
