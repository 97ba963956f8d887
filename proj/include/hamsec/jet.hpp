#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hamsec/chart.hpp"

namespace hamsec {

using Rat = mpq_class;

inline std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// Truncated multivariate polynomial with exact rational coefficients over a
// chart.  `order` is the inclusive total-degree truncation; it also records
// how far the value is trusted as a germ representative.  Canonical sparse
// form: no zero coefficient is ever stored.
class Jet {
public:
    using CoeffMap = std::map<Mono, Rat, GradedLex>;

    Jet() = default;
    Jet(Chart chart, int order) : chart_(chart), order_(order) {
        if (order < 0) throw error("Jet: negative order");
    }

    static Jet zero(Chart chart, int order) { return Jet(chart, order); }
    static Jet constant(Chart chart, int order, const Rat& c) {
        Jet j(chart, order);
        j.set_coeff(Mono{}, c);
        return j;
    }
    static Jet variable(Chart chart, int order, int var, const Rat& scale = 1) {
        if (var < 0 || var >= chart.dim()) throw error("Jet: bad variable index");
        if (order < 1) throw error("Jet: order too small for a variable");
        Jet j(chart, order);
        Mono m;
        m[var] = 1;
        j.set_coeff(m, scale);
        return j;
    }

    const Chart& chart() const { return chart_; }
    int order() const { return order_; }
    const CoeffMap& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    Rat coeff(const Mono& m) const {
        auto it = coeffs_.find(m);
        return it == coeffs_.end() ? Rat(0) : it->second;
    }
    void set_coeff(const Mono& m, const Rat& c) {
        if (m.deg() > order_) return;  // silently truncate on construction
        if (c == 0)
            coeffs_.erase(m);
        else
            coeffs_[m] = c;
    }
    void add_coeff(const Mono& m, const Rat& c) {
        if (m.deg() > order_ || c == 0) return;
        auto [it, ins] = coeffs_.try_emplace(m, c);
        if (!ins) {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    Rat eval0() const { return coeff(Mono{}); }

    // Lowest total degree with a nonzero coefficient; nullopt for the zero jet.
    std::optional<int> valuation() const {
        if (coeffs_.empty()) return std::nullopt;
        return coeffs_.begin()->first.deg();
    }

    Jet truncated(int new_order) const {
        Jet r(chart_, new_order);
        for (auto& [m, c] : coeffs_)
            if (m.deg() <= new_order) r.coeffs_[m] = c;
        return r;
    }
    // Re-tag the trusted order without dropping terms (caller asserts validity,
    // e.g. when the input is an exact polynomial, not a truncation).
    Jet with_order(int new_order) const {
        if (new_order < order_) return truncated(new_order);
        Jet r = *this;
        r.order_ = new_order;
        return r;
    }

    // Homogeneous part of total degree d.
    Jet homogeneous_part(int d) const {
        Jet r(chart_, order_);
        for (auto& [m, c] : coeffs_)
            if (m.deg() == d) r.coeffs_[m] = c;
        return r;
    }

    bool operator==(const Jet& o) const {
        return chart_ == o.chart_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const Jet& o) const { return !(*this == o); }

    Jet operator-() const {
        Jet r(chart_, order_);
        for (auto& [m, c] : coeffs_) r.coeffs_[m] = -c;
        return r;
    }

    Jet& operator+=(const Jet& o) {
        require_same_chart(o);
        if (o.order_ < order_) *this = truncated(o.order_);
        for (auto& [m, c] : o.coeffs_) add_coeff(m, c);
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        require_same_chart(o);
        if (o.order_ < order_) *this = truncated(o.order_);
        for (auto& [m, c] : o.coeffs_) add_coeff(m, -c);
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
    friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.require_same_chart(b);
        int ord = std::min(a.order_, b.order_);
        Jet r(a.chart_, ord);
        for (auto& [ma, ca] : a.coeffs_) {
            int da = ma.deg();
            if (da > ord) break;
            for (auto& [mb, cb] : b.coeffs_) {
                if (da + mb.deg() > ord) break;
                r.add_coeff(ma * mb, ca * cb);
            }
        }
        return r;
    }
    Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }

    friend Jet operator*(const Rat& s, const Jet& a) {
        Jet r(a.chart_, a.order_);
        if (s == 0) return r;
        for (auto& [m, c] : a.coeffs_) r.coeffs_[m] = s * c;
        return r;
    }
    friend Jet operator*(const Jet& a, const Rat& s) { return s * a; }

    std::string str() const;  // human-readable, graded-lex term order

private:
    void require_same_chart(const Jet& o) const {
        if (chart_ != o.chart_)
            throw error("Jet: chart mismatch (" + chart_.describe() + " vs " + o.chart_.describe() + ")");
    }

    Chart chart_{1, Ambient::Full};
    int order_ = 0;
    CoeffMap coeffs_;
};

// Formal partial derivative; result order drops by one (capped at 0).
Jet partial(const Jet& a, int var);
Jet partial(const Jet& a, const std::string& var_name);

// Antiderivative in one variable (zero constant of integration); order +1.
Jet integrate(const Jet& a, int var);

// a with every chart variable replaced by subst[i].  All substitution jets
// must share one chart (the result chart).  Substitutions must vanish at 0
// unless allow_constant_terms.
Jet compose(const Jet& a, const std::vector<Jet>& subst, bool allow_constant_terms = false);

// a = r + phi*y with r free of y; exact at a's order (phi one order lower).
struct IdealYSplit {
    Jet r;    // same chart as input, y-free
    Jet phi;  // same chart as input
};
IdealYSplit divide_by_ideal_y(const Jet& a);

// Drop a variable whose exponent is everywhere zero, producing a jet on the
// smaller chart (Full -> Orbit drops x; Orbit -> Reduced drops y).
Jet restrict_chart(const Jet& a, Chart target);
// Reinterpret on a larger chart (Reduced -> Orbit -> Full).
Jet lift_chart(const Jet& a, Chart target);

// Substitute one variable by `value` (a jet on the same chart), leaving the
// others fixed.
Jet substitute_var(const Jet& a, int var, const Jet& value);

// Collect powers of one variable: a = sum_e coeffs[e] * var^e where coeffs[e]
// is free of var.
std::vector<Jet> collect_powers(const Jet& a, int var);

// u with u*b == a at a's order, failing (nullopt) if no such jet exists.
// Solved degree by degree using the lowest homogeneous part of b.
std::optional<Jet> divide_jet(const Jet& a, const Jet& b);

// Formal map germ: one component jet per chart variable, source chart ==
// target chart unless stated otherwise by the caller.
class DiffeoJet {
public:
    DiffeoJet() = default;
    DiffeoJet(Chart chart, std::vector<Jet> comps) : chart_(chart), comps_(std::move(comps)) {
        if (int(comps_.size()) != chart_.dim()) throw error("DiffeoJet: component count mismatch");
        for (auto& c : comps_)
            if (c.chart() != chart_) throw error("DiffeoJet: component chart mismatch");
    }

    static DiffeoJet identity(Chart chart, int order);

    const Chart& chart() const { return chart_; }
    int order() const;
    const std::vector<Jet>& components() const { return comps_; }
    const Jet& component(int i) const { return comps_[size_t(i)]; }
    Jet& component(int i) { return comps_[size_t(i)]; }

    bool fixes_origin() const {
        for (auto& c : comps_)
            if (c.eval0() != 0) return false;
        return true;
    }

    // Linear part as a dim x dim rational matrix (rows = components).
    std::vector<std::vector<Rat>> linear_matrix() const;

    Jet apply(const Jet& a) const { return compose(a, comps_); }
    DiffeoJet then_inner(const DiffeoJet& inner) const;  // this ∘ inner
    bool operator==(const DiffeoJet& o) const { return chart_ == o.chart_ && comps_ == o.comps_; }

private:
    Chart chart_{1, Ambient::Full};
    std::vector<Jet> comps_;
};

// Two-sided compositional inverse to the common jet order; throws on a
// singular linear part.
DiffeoJet invert(const DiffeoJet& phi);

}  // namespace hamsec
