#pragma once

#include "bltk/finiteness.hpp"
#include "bltk/gaussian.hpp"
#include "bltk/manifold.hpp"
#include "bltk/report.hpp"

namespace bltk {

// Matrix schema: {"rows", "cols", "data": row-major nested arrays}; exact
// entries travel as "a/b" strings, float entries as numbers.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json exponents_to_json(const ExponentVector& p);
ExponentVector exponents_from_json(const Json& j);

// {"n", "maps", "exponents", "mode": "exact"|"float"}
Json datum_to_json(const BLDatum& d);
BLDatum datum_from_json(const Json& j);

// {"block_dims", "H": basis-columns Matrix, "exponents"}
Json subspace_datum_to_json(const SubspaceDatum& sd);
SubspaceDatum subspace_datum_from_json(const Json& j);

// Charts: {"kind": builtin name, parameters, "domain": [["lo","hi"],...]};
// collections: {"charts": [...], "exponents": [...]}.
Chart chart_from_json(const Json& j);
ManifoldCollection collection_from_json(const Json& j);

Json verdict_to_json(const FinitenessVerdict& v, const SearchBudget& budget);
Json estimate_to_json(const ConstantEstimate& e);

}  // namespace bltk
