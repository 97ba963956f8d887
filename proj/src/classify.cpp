#include "hamsec/classify.hpp"

namespace hamsec {

std::string tag_name(SingTag t) {
    switch (t) {
        case SingTag::Nonsingular: return "Nonsingular";
        case SingTag::Sk: return "S(k)";
        case SingTag::Skl: return "S(k,l)";
        case SingTag::A1: return "A1";
        case SingTag::Degenerate: return "Degenerate";
        case SingTag::Undetermined: return "UndeterminedAtOrder";
    }
    return "?";
}

std::string SingularityClass::describe() const {
    switch (tag) {
        case SingTag::Sk: return "S(" + std::to_string(k) + ")";
        case SingTag::Skl: return "S(" + std::to_string(k) + "," + std::to_string(l) + ")";
        case SingTag::Undetermined:
            return "UndeterminedAtOrder(" + std::to_string(undetermined_order) + ")";
        default: return tag_name(tag);
    }
}

namespace {

// true iff dh(0) has a nonzero component other than dy
bool has_non_dy_component(const Jet& h) {
    Chart c = h.chart();
    for (int v = 0; v < c.dim(); ++v) {
        if (c.has_y() && v == c.y_index()) continue;
        Mono m;
        m[v] = 1;
        if (h.coeff(m) != 0) return true;
    }
    return false;
}

}  // namespace

RatMat hessian_restricted(const Jet& h) {
    Chart c = h.chart();
    if (!c.has_x()) throw error("hessian_restricted: Full chart required");
    if (h.order() < 2) throw order_exhausted("hessian_restricted: jet order < 2");
    Jet h0 = substitute_var(h, c.y_index(), Jet::zero(c, h.order()));
    std::vector<int> vars{c.x_index()};
    for (int i = 1; i <= c.n; ++i) vars.push_back(c.p_index(i));
    for (int i = 1; i <= c.n; ++i) vars.push_back(c.q_index(i));
    for (int v : vars) {
        Mono m;
        m[v] = 1;
        if (h0.coeff(m) != 0)
            throw error("hessian_restricted: restricted differential does not vanish at 0");
    }
    size_t d = vars.size();
    RatMat M(d, RatVec(d, 0));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = i; j < d; ++j) {
            Mono m;
            m[vars[i]] = uint8_t(m[vars[i]] + 1);
            m[vars[j]] = uint8_t(m[vars[j]] + 1);
            Rat c2 = h0.coeff(m);
            if (i == j) c2 *= 2;
            M[i][j] = c2;
            M[j][i] = c2;
        }
    return M;
}

bool is_morse(const RatMat& hessian) { return mat_det(hessian) != 0; }

SingularityClass classify_section(const Jet& h, int max_i) {
    Chart c = h.chart();
    if (!c.has_x()) throw error("classify_section: Full chart required");
    if (h.eval0() != 0) throw error("classify_section: h(0) != 0, not a section through 0");
    {
        bool dh = false;
        for (int v = 0; v < c.dim(); ++v) {
            Mono m;
            m[v] = 1;
            if (h.coeff(m) != 0) dh = true;
        }
        if (!dh) throw error("classify_section: dh(0) = 0, not a smooth hypersurface germ");
    }

    SingularityClass out;
    Jet f = Jet::variable(c, h.order(), c.y_index());

    auto kscan = first_nonvanishing_fh(f, h, max_i);
    if (!kscan.index) {
        out.tag = SingTag::Undetermined;
        out.undetermined_order = kscan.exhausted_at;
        return out;
    }
    int k = *kscan.index;
    out.witnesses.emplace_back("{f,h}_" + std::to_string(k) + "(0)", kscan.witness);
    if (k == 0) {
        out.tag = SingTag::Nonsingular;
        out.typical = true;
        return out;
    }
    out.k = k;

    if (has_non_dy_component(h)) {
        // transversal case: S(k), refine by l
        auto lscan = first_nonvanishing_hf(h, f, max_i);
        if (!lscan.index) {
            out.tag = SingTag::Undetermined;
            out.undetermined_order = lscan.exhausted_at;
            return out;
        }
        out.l = *lscan.index;
        out.witnesses.emplace_back("{h,f}_" + std::to_string(out.l) + "(0)", lscan.witness);
        out.tag = SingTag::Skl;
        out.typical = 1 <= k + out.l - 1 && k + out.l - 1 <= 2 * c.n + 1;
        return out;
    }

    // transversality lost: A1 test (restriction of h to {y=0})
    if (k != 1) {
        out.tag = SingTag::Degenerate;
        return out;
    }
    auto hfscan = first_nonvanishing_hf(h, f, max_i);
    if (!hfscan.index) {
        out.tag = SingTag::Undetermined;
        out.undetermined_order = hfscan.exhausted_at;
        return out;
    }
    if (*hfscan.index != 1) {
        out.tag = SingTag::Degenerate;
        return out;
    }
    out.witnesses.emplace_back("{h,{h,f}}(0)", hfscan.witness);
    RatMat H;
    try {
        H = hessian_restricted(h);
    } catch (const order_exhausted&) {
        out.tag = SingTag::Undetermined;
        out.undetermined_order = h.order();
        return out;
    }
    Rat det = mat_det(H);
    out.witnesses.emplace_back("det d^2(h|_{y=0})(0)", det);
    if (det == 0) {
        out.tag = SingTag::Degenerate;
        return out;
    }
    out.tag = SingTag::A1;
    out.typical = true;
    return out;
}

Jet assemble_section(const std::vector<Jet>& R, int k, int order) {
    if (int(R.size()) < k) throw error("assemble_section: need k coefficient jets");
    Chart orbit = R[0].chart();
    Chart full(orbit.n, Ambient::Full);
    Jet x = Jet::variable(full, order, full.x_index());
    Jet h = Jet::constant(full, order, 1);
    for (int j = 0; j < k + 1; ++j) h = h * x;  // x^{k+1}
    Jet xpow = Jet::constant(full, order, 1);
    for (int i = 0; i < k; ++i) {
        h += lift_chart(R[size_t(i)], full).with_order(order) * xpow;
        xpow = xpow * x;
    }
    return h;
}

NormalFormReport check_normal_form_conditions(const std::vector<Jet>& R, int k) {
    NormalFormReport rep;
    if (int(R.size()) != k) throw error("check_normal_form_conditions: need exactly k jets");
    Chart orbit = R[0].chart();
    if (orbit.ambient != Ambient::Orbit) throw error("check_normal_form_conditions: Orbit chart required");

    rep.coeffs_vanish_at_origin = true;
    for (auto& r : R)
        if (r.eval0() != 0) rep.coeffs_vanish_at_origin = false;
    if (!rep.coeffs_vanish_at_origin) rep.failures.push_back("some R_i(0) != 0");

    rep.transversal = has_non_dy_component(R[0]);
    if (!rep.transversal) rep.failures.push_back("dy ^ dR_0 (0) = 0");

    int max_i = R[0].order();
    try {
        if (k == 1) {
            Jet dyR0 = partial(R[0], orbit.y_index());
            if (dyR0.eval0() != 0) {
                rep.l = 1;
                rep.l_witness = dyR0.eval0();
            } else {
                auto s = first_nonvanishing_fh(R[0], dyR0, max_i);
                if (s.index) {
                    rep.l = *s.index + 2;
                    rep.l_witness = s.witness;
                }
            }
        } else {
            auto s = first_nonvanishing_fh(R[0], R[1], max_i);
            if (s.index) {
                rep.l = *s.index + 1;
                rep.l_witness = s.witness;
            }
        }
    } catch (const order_exhausted&) {
    }
    // independent route: classify the assembled section
    try {
        int order = R[0].order() + k + 1;
        SingularityClass cls = classify_section(assemble_section(R, k, order), order);
        if (cls.tag == SingTag::Skl) {
            rep.classifier_l = cls.l;
            if (cls.k != k) rep.failures.push_back("classifier found k = " + std::to_string(cls.k));
        }
    } catch (const error& e) {
        rep.failures.push_back(std::string("assembled section rejected: ") + e.what());
    }

    // The chain identity {h,f}_i(0) = {R_0,R_1}_{i-1}(0) acquires correction
    // terms ~ (d_y R_0(0))^k from the x^{k+1} monomial once i reaches k
    // (witness: x^3 + p1*x + y + p1 is S(2,2) while every {R_0,R_1}_i(0)
    // vanishes), so for k >= 2 the chain is authoritative only while l < k.
    bool chain_covers = (k == 1) || (rep.classifier_l && *rep.classifier_l < k);
    if (!rep.l && chain_covers)
        rep.failures.push_back("no finite l detected from the coefficient brackets");
    rep.identities_agree = rep.l && rep.classifier_l && *rep.l == *rep.classifier_l;
    if (!rep.identities_agree && chain_covers)
        rep.failures.push_back("bracket identities disagree between routes");
    return rep;
}

}  // namespace hamsec
