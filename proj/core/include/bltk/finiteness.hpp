#pragma once

#include <optional>

#include "bltk/datum.hpp"

namespace bltk {

enum class FinitenessStatus { Finite, Infinite, Unknown };
enum class CertificateMode { Exact, Heuristic };

struct FinitenessVerdict {
  FinitenessStatus status = FinitenessStatus::Unknown;
  std::optional<Subspace> witness;
  Rational defect = 0;  // the violated margin (witness defect or scaling defect)
  CertificateMode certificate_mode = CertificateMode::Heuristic;
};

struct SearchBudget {
  int exhaustive_dim_cap = 4;
  int random_trials = 1000;
  int lattice_depth = 8;
  uint64_t seed = 0;
};

// Sum_j dim(L_j V)/p_j - dim(V); nonnegativity for all V is the subspace
// finiteness condition.
Rational dimension_defect(const BLDatum& d, const Subspace& v);

// Sum_j (dim V - dim(V cap (TS_j)-perp))/p_j' - dim V, the transversality
// margin of the collection at this tuple of tangent spaces.
Rational transversality_defect(const std::vector<Subspace>& tangents, const ExponentVector& p,
                               const Subspace& v);

// The candidate subspaces an exhaustive exact certificate covers: spans of
// subsets of {coordinate vectors, kernel basis vectors, pairwise sums}.
std::vector<Matrix> candidate_pool(const BLDatum& d);

// Kernel-generated sublattice: closure of {ker L_j} under + and cap, to a
// fixpoint or the budgeted depth.
std::vector<Subspace> kernel_lattice(const BLDatum& d, int max_depth);

// Searches for V with dimension_defect(d, V) < 0.  Any candidate found by
// the float-mode descent is re-verified exactly before being returned.
std::optional<Subspace> search_violating_subspace(const BLDatum& d, const SearchBudget& budget);

FinitenessVerdict decide_finiteness(const BLDatum& d, const SearchBudget& budget);

}  // namespace bltk
