#pragma once

#include <optional>
#include <vector>

#include "hamsec/jet.hpp"

namespace hamsec {

// Raised when a bracket chain would need more jet order than the inputs
// carry; callers surface this as an undetermined classification.
class order_exhausted : public error {
public:
    explicit order_exhausted(const std::string& what) : error(what) {}
};

// {a,b} for omega = dx^dy + sum dp_i^dq_i, fixed by Z_f interior omega = df:
//   {a,b} = d_y a d_x b - d_x a d_y b + sum_i (d_{q_i} a d_{p_i} b - d_{p_i} a d_{q_i} b)
// with the (x,y) block dropped on Orbit/Reduced charts.  Result order is
// min(order a, order b) - 1; throws order_exhausted if either order is < 1.
Jet bracket(const Jet& a, const Jet& b);

// Components of Z_a, one Jet per chart variable, so that Z_a(g) = {a,g}.
std::vector<Jet> hamiltonian_field(const Jet& a);

// {f,h}_i = Z_f^{i+1}(h) and {h,f}_i = Z_h^{i+1}(f).
Jet iterated_fh(const Jet& f, const Jet& h, int i);
Jet iterated_hf(const Jet& h, const Jet& f, int i);

// min{ i : {f,h}_i(0) != 0 } scanned up to max_i; nullopt when every
// computable value vanished (exhausted_at tells how far the scan got before
// running out of jet order or hitting max_i).
struct BracketScan {
    std::optional<int> index;
    Rat witness;       // the nonzero value at 0, when found
    int exhausted_at;  // first i that could not be computed or exceeded max_i
};
BracketScan first_nonvanishing_fh(const Jet& f, const Jet& h, int max_i);
BracketScan first_nonvanishing_hf(const Jet& h, const Jet& f, int max_i);

// Independent tangency oracle: integrates the formal flow of Z_generator from
// the origin as a power series in t (Picard recursion on the ODE, no nested
// bracket calls), evaluates target along it, and returns
// (vanishing order in t) - 1.  nullopt if target vanishes through t^maxorder.
// Exact when generator and target are exact polynomials.
std::optional<int> flow_tangency_oracle(const Jet& generator, const Jet& target, int maxorder);

}  // namespace hamsec
