#include "hamsec/jet.hpp"

#include <algorithm>
#include <map>

#include "hamsec/ratlin.hpp"

namespace hamsec {

std::string Jet::str() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [m, c] : coeffs_) {
        Rat a = c;
        if (first) {
            if (a < 0) { out += "-"; a = -a; }
        } else {
            out += a < 0 ? " - " : " + ";
            if (a < 0) a = -a;
        }
        first = false;
        std::string mono;
        for (int v = 0; v < chart_.dim(); ++v) {
            if (!m[v]) continue;
            if (!mono.empty()) mono += "*";
            mono += chart_.var_name(v);
            if (m[v] > 1) mono += "^" + std::to_string(int(m[v]));
        }
        if (mono.empty()) {
            out += rat_str(a);
        } else {
            if (a != 1) out += rat_str(a) + "*";
            out += mono;
        }
    }
    return out;
}

Jet partial(const Jet& a, int var) {
    if (var < 0 || var >= a.chart().dim()) throw error("partial: unknown variable");
    Jet r(a.chart(), std::max(0, a.order() - 1));
    for (auto& [m, c] : a.coeffs()) {
        if (!m[var]) continue;
        Mono d = m;
        d[var] = uint8_t(d[var] - 1);
        r.add_coeff(d, c * int(m[var]));
    }
    return r;
}

Jet integrate(const Jet& a, int var) {
    if (var < 0 || var >= a.chart().dim()) throw error("integrate: unknown variable");
    Jet r(a.chart(), a.order() + 1);
    for (auto& [m, c] : a.coeffs()) {
        Mono d = m;
        d[var] = uint8_t(d[var] + 1);
        r.add_coeff(d, c / int(d[var]));
    }
    return r;
}

Jet partial(const Jet& a, const std::string& name) {
    int v = a.chart().var_index(name);
    if (v < 0) throw error("partial: unknown variable '" + name + "'");
    return partial(a, v);
}

namespace {

using Term = std::pair<Mono, Rat>;

Jet compose_rec(const std::vector<Term>& terms, int var, int dim,
                const std::vector<Jet>& subst, Chart target, int order) {
    if (terms.empty()) return Jet::zero(target, order);
    if (var == dim) {
        // all exponents consumed; a single constant remains
        Rat c = 0;
        for (auto& t : terms) c += t.second;
        return Jet::constant(target, order, c);
    }
    std::map<int, std::vector<Term>> by_exp;
    for (auto& t : terms) by_exp[t.first[var]].push_back(t);
    int maxe = by_exp.rbegin()->first;
    Jet acc = Jet::zero(target, order);
    for (int e = maxe; e >= 0; --e) {
        if (e != maxe) acc = acc * subst[size_t(var)];
        auto it = by_exp.find(e);
        if (it != by_exp.end())
            acc += compose_rec(it->second, var + 1, dim, subst, target, order);
    }
    return acc;
}

}  // namespace

Jet compose(const Jet& a, const std::vector<Jet>& subst, bool allow_constant_terms) {
    int dim = a.chart().dim();
    if (int(subst.size()) != dim) throw error("compose: arity mismatch");
    if (subst.empty()) throw error("compose: empty substitution");
    Chart target = subst[0].chart();
    int order = a.order();
    for (auto& s : subst) {
        if (s.chart() != target) throw error("compose: substitution charts differ");
        order = std::min(order, s.order());
        if (!allow_constant_terms && s.eval0() != 0)
            throw error("compose: substitution has a constant term");
    }
    std::vector<Term> terms(a.coeffs().begin(), a.coeffs().end());
    return compose_rec(terms, 0, dim, subst, target, order);
}

IdealYSplit divide_by_ideal_y(const Jet& a) {
    if (!a.chart().has_y()) throw error("divide_by_ideal_y: chart has no y");
    int y = a.chart().y_index();
    IdealYSplit out{Jet(a.chart(), a.order()), Jet(a.chart(), std::max(0, a.order() - 1))};
    for (auto& [m, c] : a.coeffs()) {
        if (m[y] == 0) {
            out.r.set_coeff(m, c);
        } else {
            Mono d = m;
            d[y] = uint8_t(d[y] - 1);
            out.phi.add_coeff(d, c);
        }
    }
    return out;
}

Jet restrict_chart(const Jet& a, Chart target) {
    std::vector<int> map(size_t(a.chart().dim()), -1);
    for (int v = 0; v < a.chart().dim(); ++v)
        map[size_t(v)] = target.var_index(a.chart().var_name(v));
    Jet r(target, a.order());
    for (auto& [m, c] : a.coeffs()) {
        Mono t;
        for (int v = 0; v < a.chart().dim(); ++v) {
            if (!m[v]) continue;
            if (map[size_t(v)] < 0)
                throw error("restrict_chart: jet depends on dropped variable " + a.chart().var_name(v));
            t[map[size_t(v)]] = m[v];
        }
        r.set_coeff(t, c);
    }
    return r;
}

Jet lift_chart(const Jet& a, Chart target) {
    Jet r(target, a.order());
    for (auto& [m, c] : a.coeffs()) {
        Mono t;
        for (int v = 0; v < a.chart().dim(); ++v) {
            if (!m[v]) continue;
            int tv = target.var_index(a.chart().var_name(v));
            if (tv < 0) throw error("lift_chart: variable missing in target chart");
            t[tv] = m[v];
        }
        r.set_coeff(t, c);
    }
    return r;
}

Jet substitute_var(const Jet& a, int var, const Jet& value) {
    if (value.chart() != a.chart()) throw error("substitute_var: chart mismatch");
    std::vector<Jet> subst;
    int ord = std::min(a.order(), value.order());
    for (int v = 0; v < a.chart().dim(); ++v)
        subst.push_back(v == var ? value : Jet::variable(a.chart(), ord, v));
    return compose(a, subst, value.eval0() != 0);
}

std::vector<Jet> collect_powers(const Jet& a, int var) {
    int maxe = 0;
    for (auto& [m, c] : a.coeffs()) maxe = std::max(maxe, int(m[var]));
    std::vector<Jet> out(size_t(maxe) + 1, Jet(a.chart(), a.order()));
    for (auto& [m, c] : a.coeffs()) {
        Mono d = m;
        int e = d[var];
        d[var] = 0;
        out[size_t(e)].set_coeff(d, c);
    }
    return out;
}

namespace {

// Enumerate monomials of exact total degree d over `dim` variables,
// graded-lex order.
void enum_monos(int dim, int d, int var, Mono cur, std::vector<Mono>& out) {
    if (var == dim - 1) {
        cur[var] = uint8_t(d);
        out.push_back(cur);
        return;
    }
    for (int e = d; e >= 0; --e) {
        cur[var] = uint8_t(e);
        enum_monos(dim, d - e, var + 1, cur, out);
    }
}

std::vector<Mono> monomials_of_degree(int dim, int d) {
    std::vector<Mono> out;
    enum_monos(dim, d, 0, Mono{}, out);
    return out;
}

}  // namespace

std::optional<Jet> divide_jet(const Jet& a, const Jet& b) {
    if (a.chart() != b.chart()) throw error("divide_jet: chart mismatch");
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return Jet::zero(a.chart(), a.order());
    int m = *b.valuation();
    if (*a.valuation() < m) return std::nullopt;
    int dim = a.chart().dim();
    int umax = a.order() - m;
    Jet bm = b.homogeneous_part(m);
    Jet u(a.chart(), umax);
    for (int d = 0; d <= umax; ++d) {
        // residual at degree m+d after the lower-degree parts of u
        Jet partial_prod = u * b;
        Jet rhs = (a - partial_prod).homogeneous_part(m + d);
        auto rows = monomials_of_degree(dim, m + d);
        auto cols = monomials_of_degree(dim, d);
        std::map<Mono, int, GradedLex> row_of;
        for (size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = int(i);
        RatMat A(rows.size(), RatVec(cols.size(), 0));
        for (size_t j = 0; j < cols.size(); ++j)
            for (auto& [bm_m, bm_c] : bm.coeffs())
                A[size_t(row_of[cols[j] * bm_m])][j] = bm_c;
        RatVec bb(rows.size(), 0);
        for (size_t i = 0; i < rows.size(); ++i) bb[i] = rhs.coeff(rows[i]);
        auto x = mat_solve(A, bb);
        if (!x) return std::nullopt;
        for (size_t j = 0; j < cols.size(); ++j) u.add_coeff(cols[j], (*x)[j]);
    }
    Jet prod = u * b;
    int check_order = std::min(a.order(), prod.order());
    if (prod.truncated(check_order) != a.truncated(check_order)) return std::nullopt;
    return u;
}

DiffeoJet DiffeoJet::identity(Chart chart, int order) {
    std::vector<Jet> comps;
    for (int v = 0; v < chart.dim(); ++v) comps.push_back(Jet::variable(chart, order, v));
    return DiffeoJet(chart, std::move(comps));
}

int DiffeoJet::order() const {
    int o = comps_.empty() ? 0 : comps_[0].order();
    for (auto& c : comps_) o = std::min(o, c.order());
    return o;
}

std::vector<std::vector<Rat>> DiffeoJet::linear_matrix() const {
    int d = chart_.dim();
    RatMat L(size_t(d), RatVec(size_t(d), 0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Mono m;
            m[j] = 1;
            L[size_t(i)][size_t(j)] = comps_[size_t(i)].coeff(m);
        }
    return L;
}

DiffeoJet DiffeoJet::then_inner(const DiffeoJet& inner) const {
    if (inner.chart() != chart_) throw error("DiffeoJet::then_inner: chart mismatch");
    std::vector<Jet> comps;
    bool allow = !inner.fixes_origin();
    for (auto& c : comps_) comps.push_back(compose(c, inner.comps_, allow));
    return DiffeoJet(chart_, std::move(comps));
}

DiffeoJet invert(const DiffeoJet& phi) {
    if (!phi.fixes_origin()) throw error("invert: map does not fix the origin");
    Chart chart = phi.chart();
    int d = chart.dim();
    int order = phi.order();
    auto Linv = mat_inverse(phi.linear_matrix());
    if (!Linv) throw error("invert: singular linear part");
    // nonlinear remainder of phi
    std::vector<Jet> nonlin;
    for (int i = 0; i < d; ++i) {
        Jet ni = phi.component(i);
        for (int j = 0; j < d; ++j) {
            Mono m;
            m[j] = 1;
            ni.add_coeff(m, -ni.coeff(m));
        }
        nonlin.push_back(ni);
    }
    auto linv_apply = [&](const std::vector<Jet>& v) {
        std::vector<Jet> out;
        for (int i = 0; i < d; ++i) {
            Jet s = Jet::zero(chart, order);
            for (int j = 0; j < d; ++j)
                if ((*Linv)[size_t(i)][size_t(j)] != 0) s += (*Linv)[size_t(i)][size_t(j)] * v[size_t(j)];
            out.push_back(s);
        }
        return out;
    };
    std::vector<Jet> id_comps;
    for (int v = 0; v < d; ++v) id_comps.push_back(Jet::variable(chart, order, v));
    std::vector<Jet> psi = linv_apply(id_comps);
    for (int it = 0; it < order; ++it) {
        std::vector<Jet> v;
        for (int j = 0; j < d; ++j) v.push_back(id_comps[size_t(j)] - compose(nonlin[size_t(j)], psi));
        auto next = linv_apply(v);
        if (next == psi) break;
        psi = std::move(next);
    }
    return DiffeoJet(chart, std::move(psi));
}

}  // namespace hamsec
