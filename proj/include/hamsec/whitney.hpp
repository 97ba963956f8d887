#pragma once

#include <optional>

#include "hamsec/normalize.hpp"

namespace hamsec {

// Input lies outside the open set where the reduction theorems apply (a
// vanishing determinant, a failed transversality); the CLI maps this to its
// own exit code, distinct from bad input and from internal bugs.
class genericity_error : public error {
public:
    explicit genericity_error(const std::string& what) : error(what) {}
};

// Map germ (R^{2n}, dp^dq) -> R^{2n} fixing the origin, one Jet per target
// component, all on the Reduced chart.
struct MapJet {
    Chart chart{1, Ambient::Reduced};
    std::vector<Jet> comps;

    MapJet() = default;
    MapJet(Chart c, std::vector<Jet> comps_);
    int n() const { return chart.n; }
};

// s-class of (r_0, r_1) plus the differential-independence conditions.  The
// flags are only meaningful when s is determined; (d) is informational (it
// singles out ordinary Whitney maps, a non-generic subclass).
struct WhitneyClass {
    std::optional<int> s;
    bool flag_a = false;  // bracket chain + dr_0^dr_1(0) != 0 when n >= 2, s >= 1
    bool flag_b = false;  // dr_0 ^ d{r_0,r_1} ^ ... ^ d{r_0,r_1}_{s-1} (0) != 0
    bool flag_c = false;  // dr_0 ^ d{r_0,r_1}_{s-1} ^ dr_2 ^ ... ^ dr_{2n-1} (0) != 0
    bool flag_d = false;  // det[dr] = unit * {r_0,r_1} at truncation order
    int exhausted_at = 0;
    std::vector<std::pair<std::string, Rat>> witnesses;

    bool typical() const { return s && flag_a && flag_b && flag_c; }
};
WhitneyClass whitney_classify(const MapJet& r, int max_i);

// a = sum over generators of m~_i of generator * cofactor, or the list of
// monomials of a containing no generator.  m~_i is generated by the first i
// of q1, p1, q2, p2, ...
struct IdealCertificate {
    bool member = false;
    std::vector<std::pair<std::string, Jet>> cofactors;
    std::vector<Mono> offending;
};
IdealCertificate ideal_membership(const Jet& a, int i);

// Normal form under ordinary (non-symplectic) source diffeomorphisms:
//   r = (p1, lead*q1^{s+1} + sum_{j<s} r1j[j](q^1) q1^j, p2 + m~_1, q2 + m~_1, ...).
// Over the rationals the leading coefficient can only be scaled by (s+1)-th
// powers, so it is kept explicitly instead of being normalized to 1.
struct RReduction {
    MapJet normal;
    DiffeoJet phi;  // source diffeo, r o phi = normal
    Rat lead = 0;
    std::vector<Jet> r1j;  // s moduli, free of q1, vanishing at 0
    // dr1j[0] ^ ... ^ dr1j[s-1] (0) != 0.  This does NOT follow from flags
    // (a)-(c): the plain fold (p1, q1^2) and the map
    // (p1, q1^3 + p2*q1 + p2, p2, q2) pass all three flags with dependent
    // moduli, and the wedge is invariant under the allowed changes of
    // coordinates, so it is reported instead of enforced.
    bool moduli_independent = false;
    int valid_order = 0;
};
RReduction reduce_R(const MapJet& r, int s, int N);

// Functional moduli of the symplectic normal form.
struct WhitneyModuli {
    Jet psi;               // unit factor of q1^{s+1} in r_1
    std::vector<Jet> r1j;  // s moduli, free of q1, vanishing at 0
    std::vector<Jet> odd;         // r_{2m+1} in m~_{2m+1}, m = 1..n-1
    std::vector<Jet> even_tilde;  // r_{2m} - p_{m+1} in m~_{2m}
    std::vector<IdealCertificate> odd_cert, even_cert;
    bool moduli_independent = false;  // see RReduction: reported, not enforced
};

// Normal form under symplectomorphisms of dp^dq:
//   r_1 = psi*q1^{s+1} + sum_{j<s} r1j[j](q^1) q1^j,  psi(0) != 0,
//   r_{2m} = p_{m+1} + m~_{2m},  r_{2m+1} in m~_{2m+1} with d_{q_{m+1}} r_{2m+1}(0) != 0.
struct OmegaReduction {
    MapJet normal;
    DiffeoJet phi;  // exactly symplectic at its order
    WhitneyModuli moduli;
    int valid_order = 0;
};
OmegaReduction reduce_R_omega(const MapJet& r, int s, int N);

}  // namespace hamsec
