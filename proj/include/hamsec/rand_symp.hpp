#pragma once

#include <random>

#include "hamsec/normalize.hpp"

namespace hamsec {

// Time-1 flow of the Hamiltonian field of g.  Preserves omega exactly; if g
// is x-free it also preserves f = y.  g must satisfy g(0)=0, dg(0)=0, and
// every quadratic term of g must contain y (nilpotency of the linear part).
DiffeoJet hamiltonian_time1_flow(const Jet& g, int order);

// Random f-preserving symplectomorphism jet on the Full chart: a product of
// random symplectic transvections of the (p,q) block and 2-4 time-1 flows of
// random x-free Hamiltonians.  Each draw self-checks pullback(Phi,omega) =
// omega and y o Phi = y before returning.
DiffeoJet random_isotropy_symplectomorphism(std::mt19937& rng, Chart full, int order);

// Same idea on the Reduced chart (symplectomorphisms of dp^dq fixing 0):
// transvections plus flows of valuation >= 3 Hamiltonians.
DiffeoJet random_reduced_symplectomorphism(std::mt19937& rng, Chart reduced, int order);

// Exact polynomial f-preserving symplectomorphism: a random linear symplectic
// map of the (p,q) block composed with one shear, the time-1 flow of a random
// x-free Hamiltonian G depending on y and a single block (G(y,q) or G(y,p)),
// whose field is constant along its own flow.  Every component is a polynomial
// of degree <= 2, so the composite is the exact germ (no jet truncation), at
// the price of a much smaller subgroup than the Lie-series draws above.  Use
// these for invariance properties that must hold exactly: truncated draws are
// only jets of group elements, and their missing tails feed back into the
// invariants at order ~ order/(k+1) through the x^{k+1} division.
DiffeoJet random_polynomial_isotropy(std::mt19937& rng, Chart full, int order);

}  // namespace hamsec
