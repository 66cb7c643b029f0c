#include "bltk/json_io.hpp"

#include <stdexcept>

namespace bltk {

namespace {

const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field \"") + name + "\"");
  return *it;
}

Rational rational_from_json(const Json& e) {
  if (e.is_string()) return parse_rational(e.get<std::string>());
  if (e.is_number_integer()) return Rational(e.get<long long>());
  throw std::invalid_argument("exact entry must be an integer or an \"a/b\" string");
}

std::vector<std::pair<Rational, Rational>> domain_from_json(const Json& j) {
  std::vector<std::pair<Rational, Rational>> dom;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::invalid_argument("domain intervals must be [lo, hi] pairs");
    dom.emplace_back(rational_from_json(pair[0]), rational_from_json(pair[1]));
  }
  return dom;
}

std::vector<Rational> rational_list(const Json& j) {
  std::vector<Rational> v;
  for (const auto& e : j) v.push_back(rational_from_json(e));
  return v;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json data = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) {
      if (m.is_exact())
        row.push_back(to_string(m.q(i, c)));
      else
        row.push_back(m.f(i, c));
    }
    data.push_back(row);
  }
  j["data"] = data;
  return j;
}

Matrix matrix_from_json(const Json& j) {
  int rows = field(j, "rows").get<int>();
  int cols = field(j, "cols").get<int>();
  const Json& data = field(j, "data");
  if (static_cast<int>(data.size()) != rows)
    throw std::invalid_argument("matrix data has wrong row count");
  bool exact = true;
  for (const auto& row : data)
    for (const auto& e : row)
      if (!e.is_string() && !e.is_number_integer()) exact = false;
  Matrix m(rows, cols, exact ? ScalarMode::Exact : ScalarMode::Float);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(data[i].size()) != cols)
      throw std::invalid_argument("matrix data has wrong column count");
    for (int c = 0; c < cols; ++c) {
      if (exact)
        m.q(i, c) = rational_from_json(data[i][c]);
      else
        m.f(i, c) = data[i][c].get<double>();
    }
  }
  return m;
}

Json exponents_to_json(const ExponentVector& p) {
  Json j = Json::array();
  for (const auto& e : p.values()) j.push_back(to_string(e));
  return j;
}

ExponentVector exponents_from_json(const Json& j) {
  std::vector<Exponent> out;
  for (const auto& e : j) out.push_back(parse_exponent(e.get<std::string>()));
  return ExponentVector(std::move(out));
}

Json datum_to_json(const BLDatum& d) {
  Json j;
  j["n"] = d.n;
  Json maps = Json::array();
  for (const auto& m : d.maps) maps.push_back(matrix_to_json(m));
  j["maps"] = maps;
  j["exponents"] = exponents_to_json(d.exponents);
  j["mode"] = d.mode() == ScalarMode::Exact ? "exact" : "float";
  return j;
}

BLDatum datum_from_json(const Json& j) {
  BLDatum d;
  d.n = field(j, "n").get<int>();
  for (const auto& m : field(j, "maps")) d.maps.push_back(matrix_from_json(m));
  d.exponents = exponents_from_json(field(j, "exponents"));
  if (j.contains("mode")) {
    std::string mode = j["mode"].get<std::string>();
    if (mode != "exact" && mode != "float") throw std::invalid_argument("mode must be exact|float");
    if (mode == "float")
      d = d.to_float();
    else if (d.mode() != ScalarMode::Exact)
      throw std::invalid_argument("exact mode requires rational-string entries");
  }
  for (const auto& m : d.maps)
    if (m.cols() != d.n) throw std::invalid_argument("map column count disagrees with n");
  if (d.exponents.size() != d.m())
    throw std::invalid_argument("one exponent per map required");
  return d;
}

Json subspace_datum_to_json(const SubspaceDatum& sd) {
  Json j;
  j["block_dims"] = sd.block_dims;
  j["H"] = matrix_to_json(sd.H.basis());
  j["exponents"] = exponents_to_json(sd.exponents);
  return j;
}

SubspaceDatum subspace_datum_from_json(const Json& j) {
  SubspaceDatum sd;
  sd.block_dims = field(j, "block_dims").get<std::vector<int>>();
  sd.H = Subspace::span(matrix_from_json(field(j, "H")));
  sd.exponents = exponents_from_json(field(j, "exponents"));
  if (sd.H.ambient_dim() != sd.total_dim())
    throw std::invalid_argument("H basis rows disagree with block dimensions");
  if (sd.exponents.size() != sd.block_dims.size())
    throw std::invalid_argument("one exponent per block required");
  return sd;
}

namespace {

Poly poly_from_json(const Json& j) {
  Poly p;
  for (const auto& term : j) {
    PolyTerm t;
    t.coef = rational_from_json(field(term, "coef"));
    t.powers = field(term, "powers").get<std::vector<int>>();
    p.push_back(std::move(t));
  }
  return p;
}

}  // namespace

Chart chart_from_json(const Json& j) {
  std::string kind = field(j, "kind").get<std::string>();
  if (kind == "polynomial") {
    int vars = field(j, "vars").get<int>();
    std::vector<Poly> components;
    for (const auto& comp : field(j, "components")) components.push_back(poly_from_json(comp));
    return Chart::polynomial(std::move(components), vars, domain_from_json(field(j, "domain")));
  }
  if (kind != "builtin") throw std::invalid_argument("chart kind must be polynomial|builtin");
  std::string name = field(j, "name").get<std::string>();
  const Json& params = field(j, "params");
  if (name == "line")
    return Chart::line(rational_list(field(params, "direction")),
                       rational_from_json(field(params, "half_length")));
  auto dom = domain_from_json(field(params, "domain"));
  if (name == "hyperplane")
    return Chart::hyperplane(rational_list(field(params, "gradient")), dom);
  if (name == "paraboloid") return Chart::paraboloid(static_cast<int>(dom.size()), dom);
  if (name == "sphere_cap")
    return Chart::sphere_cap(static_cast<int>(dom.size()),
                             rational_from_json(field(params, "radius")), dom);
  if (name == "cone_patch") return Chart::cone_patch(rational_list(field(params, "center")), dom);
  if (name == "polynomial_graph")
    return Chart::polynomial_graph(poly_from_json(field(params, "phi")),
                                   static_cast<int>(dom.size()), dom);
  throw std::invalid_argument("unknown builtin chart \"" + name + "\"");
}

ManifoldCollection collection_from_json(const Json& j) {
  ManifoldCollection mc;
  for (const auto& c : field(j, "charts")) mc.charts.push_back(chart_from_json(c));
  mc.exponents = exponents_from_json(field(j, "exponents"));
  if (mc.exponents.size() != mc.charts.size())
    throw std::invalid_argument("one exponent per chart required");
  return mc;
}

Json verdict_to_json(const FinitenessVerdict& v, const SearchBudget& budget) {
  Json j;
  switch (v.status) {
    case FinitenessStatus::Finite: j["status"] = "Finite"; break;
    case FinitenessStatus::Infinite: j["status"] = "Infinite"; break;
    case FinitenessStatus::Unknown: j["status"] = "Unknown"; break;
  }
  j["witness"] = v.witness ? matrix_to_json(v.witness->basis()) : Json(nullptr);
  j["defect"] = to_string(v.defect);
  j["certificate_mode"] = v.certificate_mode == CertificateMode::Exact ? "exact" : "heuristic";
  Json b;
  b["exhaustive_dim_cap"] = budget.exhaustive_dim_cap;
  b["random_trials"] = budget.random_trials;
  b["lattice_depth"] = budget.lattice_depth;
  b["seed"] = budget.seed;
  j["budget"] = b;
  return j;
}

Json estimate_to_json(const ConstantEstimate& e) {
  Json j;
  j["value"] = e.value;
  switch (e.status) {
    case IterationStatus::Converged: j["status"] = "Converged"; break;
    case IterationStatus::MaxIter: j["status"] = "MaxIter"; break;
    case IterationStatus::Diverging: j["status"] = "Diverging"; break;
  }
  j["iterations"] = e.iterations;
  j["residual"] = e.residual;
  Json blocks = Json::array();
  for (const auto& a : e.maximizer.blocks) blocks.push_back(matrix_to_json(Matrix::from_eigen(a)));
  j["maximizer"] = blocks;
  return j;
}

}  // namespace bltk
