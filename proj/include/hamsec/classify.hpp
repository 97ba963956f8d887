#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamsec/poisson.hpp"
#include "hamsec/ratlin.hpp"

namespace hamsec {

enum class SingTag { Nonsingular, Sk, Skl, A1, Degenerate, Undetermined };

std::string tag_name(SingTag t);

struct SingularityClass {
    SingTag tag = SingTag::Undetermined;
    int k = 0;  // tangency order, valid for Sk/Skl (and k=1 for A1)
    int l = 0;  // valid for Skl
    int undetermined_order = 0;  // where the scan gave up, for Undetermined
    std::vector<std::pair<std::string, Rat>> witnesses;
    bool typical = false;

    std::string describe() const;
};

// Decision procedure for a section {h = 0} of the system (omega, f = y) on
// the Full chart.  Scans bracket chains up to max_i (and up to the jet order
// of h, whichever binds first).  Throws on an invalid section (h(0) != 0 or
// dh(0) = 0).
SingularityClass classify_section(const Jet& h, int max_i);

// Hessian of h(x,0,p,q) at 0 in the variables (x,p,q); requires the
// restricted differential to vanish at 0.
RatMat hessian_restricted(const Jet& h);
bool is_morse(const RatMat& hessian);

// Conditions of the preliminary normal form x^{k+1} + sum R_i x^i on the
// coefficient jets R_0..R_{k-1} (Orbit chart), plus a cross-check of the
// derived index l against the classifier run on the assembled section.
struct NormalFormReport {
    bool coeffs_vanish_at_origin = false;
    bool transversal = false;          // dy ^ dR_0 (0) != 0
    std::optional<int> l;              // from the k-specific bracket chain
    Rat l_witness = 0;
    std::optional<int> classifier_l;   // from classify_section on assembled h
    // Whether the two routes give the same l.  The coefficient chain is only
    // guaranteed to match the classifier for k = 1 or l < k; at l >= k the
    // x^{k+1} monomial feeds (d_y R_0(0))-corrections into {h,f}_i(0), so a
    // disagreement there is recorded but not counted as a failure.
    bool identities_agree = false;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};
NormalFormReport check_normal_form_conditions(const std::vector<Jet>& R, int k);

// x^{k+1} + sum R_i x^i as a jet on the Full chart.
Jet assemble_section(const std::vector<Jet>& R, int k, int order);

}  // namespace hamsec
