#include "bltk/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bltk {

Json ExperimentReport::to_json() const {
  Json j;
  j["experiment"] = name;
  j["inputs"] = inputs;
  Json ms = Json::array();
  for (const auto& m : measurements) {
    Json row;
    row["delta"] = m.delta;
    row["lhs"] = m.lhs;
    row["rhs"] = m.rhs;
    row["ratio"] = m.ratio;
    ms.push_back(row);
  }
  j["measurements"] = ms;
  j["fitted_slope"] = fitted_slope;
  j["predicted_exponent"] = predicted_exponent;
  j["slope_tolerance"] = slope_tolerance;
  j["pass"] = pass;
  if (!details.is_null()) j["details"] = details;
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::string out = "delta,lhs,rhs,ratio,log_delta,log_ratio\n";
  char buf[256];
  for (const auto& m : measurements) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", m.delta, m.lhs, m.rhs,
                  m.ratio, std::log(m.delta), std::log(m.ratio));
    out += buf;
  }
  return out;
}

double fit_loglog_slope(const std::vector<DeltaMeasurement>& ms, size_t tail) {
  // Smallest deltas only; matches the achievable quadrature accuracy.
  std::vector<std::pair<double, double>> pts;
  for (const auto& m : ms)
    if (m.ratio > 0) pts.emplace_back(std::log(m.delta), std::log(m.ratio));
  std::sort(pts.begin(), pts.end());
  if (pts.size() > tail) pts.erase(pts.begin() + tail, pts.end());
  if (pts.size() < 2) throw std::invalid_argument("slope fit needs at least two measurements");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f << contents;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move report into place at " + path);
}

}  // namespace bltk
