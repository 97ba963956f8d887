#pragma once

#include "hamsec/whitney.hpp"

namespace hamsec {

// Taylor split of preliminary coefficients R_0..R_{k-1} (Orbit chart) along
// y.  For k <= 2n:
//   R_i = r_i + phi_i*y  (i = 1..k-1),
//   R_0 = g(y) + r_0 + sum_{j=1}^{2n-k} r_{k-1+j}*y^j + phi_0*y^{2n-k+1},
// where g collects the pure powers of y (so every r_i vanishes at 0).  For
// k = 2n+1 all of R_0..R_{2n-1} split as r_i + phi_i*y and R_{2n} is carried
// whole in `extra`.
struct SplitTaylor {
    Jet g;                 // Orbit chart, pure y
    MapJet r;              // Reduced chart, the associated map
    std::vector<Jet> phi;  // Orbit chart
    std::optional<Jet> extra;
};
SplitTaylor split_taylor_in_y(const std::vector<Jet>& R, int k, int n);

// Section-level moduli.  `provenance` names the matched template: 1 for the
// S(k,1) k <= 2n family, 2 for the isolated S(2n+1,1) case, 3 for S(1,l>=2),
// 4 for S(k>=2,l>=2), 5 for A1.
enum class Template { Sk1, Isolated, S1l, Skl, A1 };
std::string template_name(Template t);

struct SectionModuli {
    SingularityClass cls;
    Template provenance = Template::Sk1;
    Jet g;                   // pure y part (Sk1, S1l, Skl)
    std::vector<Jet> phi;    // y-quotient moduli
    WhitneyModuli whitney;   // all but A1
    std::optional<Jet> extra;  // Isolated: R_{2n}; A1: the Morse function
    Inertia psi_signature;     // A1 only
    std::vector<Jet> R;      // transformed coefficient jets (Orbit chart)
    DiffeoJet transform;     // Full chart, total symplectomorphism
    Jet unit;
    int valid_order = 0;
};

// Full pipeline: classify, reduce to the preliminary form, split along y,
// reduce the associated map symplectically, and read the moduli off the
// transformed coefficients.  Throws genericity_error when the section lies
// outside the open set U of its class template, order_exhausted when the
// class or a reduction step cannot be decided at this order.
//
// h is interpreted as an exact polynomial germ.  If it is instead a truncated
// jet of a longer germ, the missing tail at order W+1 (W = N+2) feeds back
// into the invariants at order ~ (W+1)/(k+1): folding one power of x^(k+1)
// into the lower coefficients trades k+1 powers of x for a single power of
// the valuation-1 coefficients.  Moduli of exact polynomial inputs of degree
// <= W are exact at order N-2 and beyond; moduli of truncated germs are only
// trustworthy to order ceil((W+1)/(k+1)) - 1 minus the y-offset of the
// modulus in question.
SectionModuli assemble_moduli(const Jet& h, int N);

// Exact re-check of every template invariant; failures name the violated
// condition, notes record informational findings (such as dependent moduli).
struct TemplateReport {
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    bool ok() const { return failures.empty(); }
};
TemplateReport validate_template(const SectionModuli& m);

}  // namespace hamsec
