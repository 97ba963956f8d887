#pragma once

#include <map>
#include <vector>

#include "hamsec/jet.hpp"

namespace hamsec {

// Exterior differential form of degree 0..3 with Jet coefficients.  Component
// keys are strictly increasing variable-index tuples; all component jets are
// kept at the form's tracked order.
class FormJet {
public:
    using Key = std::vector<int>;

    FormJet() = default;
    FormJet(Chart chart, int degree, int order)
        : chart_(chart), degree_(degree), order_(order) {
        // degree may exceed the chart dimension; such a form is always zero
        // (every key repeats an index), which keeps d total on small charts
        if (degree < 0 || degree > 3) throw error("FormJet: degree out of range");
        if (order < 0) throw error("FormJet: negative order");
    }

    static FormJet from_jet(const Jet& a) {
        FormJet f(a.chart(), 0, a.order());
        f.add_comp({}, a);
        return f;
    }

    const Chart& chart() const { return chart_; }
    int degree() const { return degree_; }
    int order() const { return order_; }
    const std::map<Key, Jet>& comps() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    Jet comp(Key key) const;              // 0 jet if absent; key may be unsorted
    void add_comp(Key key, const Jet& a); // sorts key, tracks the sign

    FormJet truncated(int new_order) const;

    FormJet operator-() const;
    FormJet& operator+=(const FormJet& o);
    FormJet& operator-=(const FormJet& o);
    friend FormJet operator+(FormJet a, const FormJet& b) { a += b; return a; }
    friend FormJet operator-(FormJet a, const FormJet& b) { a -= b; return a; }
    friend FormJet operator*(const Rat& s, const FormJet& a);
    friend FormJet operator*(const Jet& s, const FormJet& a);

    bool operator==(const FormJet& o) const {
        return chart_ == o.chart_ && degree_ == o.degree_ && comps_ == o.comps_;
    }

    std::string str() const;

private:
    Chart chart_{1, Ambient::Full};
    int degree_ = 0;
    int order_ = 0;
    std::map<Key, Jet> comps_;
};

FormJet d(const FormJet& a);
FormJet wedge(const FormJet& a, const FormJet& b);
// Interior product with a vector field given as one Jet per chart variable.
FormJet interior(const std::vector<Jet>& V, const FormJet& a);
FormJet pullback(const DiffeoJet& phi, const FormJet& a);

// Rank at the origin of a degree-2 form (its constant antisymmetric matrix).
int rank_at_origin(const FormJet& a);
bool is_closed(const FormJet& a);

// beta with d(beta) = a, by the radial (Euler) homotopy; requires a closed,
// degree 1 or 2 (for degree 1, a zero constant term).
FormJet homotopy_primitive(const FormJet& a);

// The Darboux two-form of the chart: dx^dy + sum dp_i^dq_i on Full,
// sum dp_i^dq_i on Orbit/Reduced.
FormJet darboux_form(Chart chart, int order);
// Just the (p,q) block, on any chart.
FormJet pq_form(Chart chart, int order);

}  // namespace hamsec
