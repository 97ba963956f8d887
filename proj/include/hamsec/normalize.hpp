#pragma once

#include "hamsec/classify.hpp"
#include "hamsec/form.hpp"

namespace hamsec {

// Signals a violated internal postcondition (an implementation bug, not bad
// input); pipelines abort and the CLI maps this to its own exit code.
class internal_error : public error {
public:
    explicit internal_error(const std::string& what) : error(what) {}
};

// unit * h = x^{k+1} + sum_{i=0}^{k} R_i(y,p,q) x^i at order N.
struct WeierstrassResult {
    Jet unit;            // Full chart, unit(0) != 0
    std::vector<Jet> R;  // k+1 jets on the Orbit chart, R_i(0) = 0
    int k = 0;
};
WeierstrassResult weierstrass_prepare(const Jet& h, int k, int N);

// Shift x -> x - R_k/(k+1): kills the x^k coefficient and splits the
// symplectic form as dx^dy + omega_hat(y,p,q).
struct KillTopResult {
    std::vector<Jet> R;   // k jets, x^k coefficient now identically 0
    Jet unit;             // Full chart
    DiffeoJet shift;      // Full chart, (x,y,p,q) -> (x - c, y, p, q)
    FormJet omega_hat;    // Orbit chart, closed, rank 2n at 0
};
KillTopResult kill_top_coefficient(const WeierstrassResult& prep);

// Phi on the Orbit chart of the form (y,p,q) -> (y, ...) with
// pullback(Phi, dp^dq) = omega_hat at omega_hat's order.
DiffeoJet moser_darboux_orbit(const FormJet& omega_hat);

// exp(W)(a) = sum_m W^m(a)/m! for a polynomial field W (one Jet per chart
// variable) of valuation >= 1.  Exact at `order`; the caller must guarantee
// termination (nilpotent linear part, or valuation >= 2), internal_error
// otherwise.
Jet lie_series_apply(const std::vector<Jet>& W, const Jet& a, int order);

// Time-1 flow of the polynomial vector field W (one Jet per chart variable,
// each of valuation >= 2), as a map jet of the given order.  The Lie series
// terminates because every application of W raises total degree.
DiffeoJet time1_flow(const std::vector<Jet>& W, int order);

struct PreliminaryNormalForm {
    int k = 0;
    std::vector<Jet> R;   // k jets on the Orbit chart
    DiffeoJet transform;  // Full chart, symplectic, preserves y
    Jet unit;             // Full chart
    int valid_order = 0;  // order at which the invariants are guaranteed
};
// Theorem-2 pipeline: prepare, shift, Moser-Darboux, recompose.
PreliminaryNormalForm reduce_to_preliminary(const Jet& h, int N);

struct A1Form {
    Jet psi;              // Reduced chart, Morse, psi(0)=0, dpsi(0)=0
    Jet phi;              // Orbit chart, phi(0) != 0
    DiffeoJet transform;  // Full chart
    Jet unit;
    Inertia psi_signature;
    int valid_order = 0;
};
// unit * (h o transform) = x^2 + psi(p,q) + phi(y,p,q)*y at valid_order.
A1Form reduce_A1(const Jet& h, int N);

}  // namespace hamsec
