#pragma once

#include <optional>
#include <vector>

#include "hamsec/jet.hpp"

namespace hamsec {

// Small exact rational linear algebra (fraction-free would be overkill at
// these sizes; plain Gaussian elimination over mpq).
using RatMat = std::vector<std::vector<Rat>>;
using RatVec = std::vector<Rat>;

int mat_rank(RatMat a);
Rat mat_det(RatMat a);
std::optional<RatMat> mat_inverse(RatMat a);
// Solves A x = b; nullopt if inconsistent or rank-deficient in a way that
// leaves x undetermined is resolved by picking the pivot solution with free
// variables set to zero; nullopt only on inconsistency.
std::optional<RatVec> mat_solve(RatMat a, RatVec b);
// Basis of the nullspace of A (columns as vectors).
std::vector<RatVec> mat_nullspace(RatMat a);

// Inertia (positive, negative, zero counts) of a symmetric matrix, by exact
// congruence diagonalization.
struct Inertia {
    int pos = 0, neg = 0, zero = 0;
};
Inertia sym_signature(RatMat a);

}  // namespace hamsec
