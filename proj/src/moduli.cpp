#include "hamsec/moduli.hpp"

namespace hamsec {

std::string template_name(Template t) {
    switch (t) {
        case Template::Sk1: return "S(k,1)";
        case Template::Isolated: return "S(2n+1,1)";
        case Template::S1l: return "S(1,l)";
        case Template::Skl: return "S(k,l)";
        case Template::A1: return "A1";
    }
    return "?";
}

namespace {

Rat g_coeff(const Jet& g, int j) {
    Mono m;
    m[g.chart().y_index()] = uint8_t(j);
    return g.coeff(m);
}

bool pure_y(const Jet& g) {
    int yi = g.chart().y_index();
    for (auto& [m, c] : g.coeffs())
        if (m.deg() != int(m[yi])) return false;
    return true;
}

}  // namespace

SplitTaylor split_taylor_in_y(const std::vector<Jet>& R, int k, int n) {
    if (k < 1 || k > 2 * n + 1) throw error("split_taylor_in_y: k out of range");
    int named = (k == 2 * n + 1) ? 2 * n : k;  // coefficients that get split
    if (int(R.size()) < named) throw error("split_taylor_in_y: not enough coefficient jets");
    Chart orbit = R[0].chart();
    if (orbit.has_x() || !orbit.has_y()) throw error("split_taylor_in_y: Orbit chart required");
    if (orbit.n != n) throw error("split_taylor_in_y: chart dimension mismatch");
    Chart red(n, Ambient::Reduced);
    int yi = orbit.y_index();

    SplitTaylor out;
    std::vector<Jet> comps(size_t(2 * n), Jet(red, R[0].order()));
    out.phi.assign(size_t(named), Jet(orbit, std::max(0, R[0].order() - 1)));
    for (int i = (k == 2 * n + 1) ? 0 : 1; i < named; ++i) {
        auto split = divide_by_ideal_y(R[size_t(i)]);
        comps[size_t(i)] = restrict_chart(split.r, red);
        out.phi[size_t(i)] = split.phi;
    }
    if (k == 2 * n + 1) {
        out.g = Jet(orbit, R[0].order());
        out.extra = R[size_t(2 * n)];
    } else {
        // R_0 = g(y) + r_0 + sum_{j=1}^{2n-k} r_{k-1+j} y^j + phi_0 y^{2n-k+1},
        // with g absorbing the pure y-powers so the r's vanish at the origin
        auto cy = collect_powers(R[0], yi);
        int tail = 2 * n - k + 1;
        Jet g(orbit, R[0].order());
        Jet phi0(orbit, std::max(0, R[0].order() - tail));
        for (int j = 0; j < int(cy.size()); ++j) {
            Jet c = cy[size_t(j)].truncated(R[0].order() - j);
            Rat c0 = c.eval0();
            if (j == 0) {
                if (c0 != 0) throw error("split_taylor_in_y: R_0 does not vanish at 0");
                comps[0] = restrict_chart(c, red);
                continue;
            }
            Mono my;
            my[yi] = uint8_t(j);
            g.add_coeff(my, c0);
            Jet rest = c - Jet::constant(orbit, c.order(), c0);
            if (j <= 2 * n - k) {
                comps[size_t(k - 1 + j)] = restrict_chart(rest, red);
            } else {
                Mono mt;
                mt[yi] = uint8_t(j - tail);
                for (auto& [m, co] : rest.coeffs()) phi0.add_coeff(m * mt, co);
            }
        }
        out.g = g;
        out.phi[0] = phi0;
    }
    out.r = MapJet(red, std::move(comps));
    return out;
}

namespace {

// (y,p,q) -> (y, Phi(p,q)) as an Orbit-chart map
std::vector<Jet> orbit_inner_of(const DiffeoJet& phi, Chart orbit, int order) {
    std::vector<Jet> inner(size_t(orbit.dim()), Jet(orbit, order));
    inner[size_t(orbit.y_index())] = Jet::variable(orbit, order, orbit.y_index());
    Chart red = phi.chart();
    for (int i = 1; i <= red.n; ++i) {
        inner[size_t(orbit.p_index(i))] = lift_chart(phi.component(red.p_index(i)).truncated(order), orbit);
        inner[size_t(orbit.q_index(i))] = lift_chart(phi.component(red.q_index(i)).truncated(order), orbit);
    }
    return inner;
}

SectionModuli assemble_a1(const Jet& h, int N, SingularityClass cls) {
    A1Form a1 = reduce_A1(h, N);
    SectionModuli out;
    out.cls = std::move(cls);
    out.provenance = Template::A1;
    out.extra = a1.psi;
    out.psi_signature = a1.psi_signature;
    out.phi = {a1.phi};
    Chart orbit(h.chart().n, Ambient::Orbit);
    Jet R0 = lift_chart(a1.psi.truncated(a1.valid_order), orbit) +
             a1.phi.truncated(a1.valid_order - 1) * Jet::variable(orbit, a1.valid_order, orbit.y_index());
    out.R = {R0};
    out.transform = a1.transform;
    out.unit = a1.unit;
    out.valid_order = a1.valid_order;
    return out;
}

}  // namespace

SectionModuli assemble_moduli(const Jet& h, int N) {
    Chart full = h.chart();
    if (!full.has_x()) throw error("assemble_moduli: Full chart required");
    int n = full.n;
    SingularityClass cls = classify_section(h.order() >= N + 2 ? h : h.with_order(N + 2), N);
    if (cls.tag == SingTag::Undetermined)
        throw order_exhausted("assemble_moduli: class undetermined at order " +
                              std::to_string(cls.undetermined_order));
    if (cls.tag == SingTag::A1) return assemble_a1(h, N, std::move(cls));
    if (cls.tag != SingTag::Skl)
        throw error("assemble_moduli: no moduli template for class " + cls.describe());
    int k = cls.k, l = cls.l;
    if (!cls.typical)
        throw genericity_error("assemble_moduli: " + cls.describe() +
                               " is atypical at this dimension (k+l-1 > 2n+1)");

    Template tpl;
    int s;
    if (l == 1 && k <= 2 * n) {
        tpl = Template::Sk1;
        s = 0;
    } else if (l == 1) {
        tpl = Template::Isolated;
        s = 0;
    } else if (k == 1) {
        tpl = Template::S1l;
        s = l - 2;
    } else {
        tpl = Template::Skl;
        s = l - 1;
    }

    PreliminaryNormalForm pre = reduce_to_preliminary(h, N);
    if (pre.k != k) throw internal_error("assemble_moduli: pipeline and classifier disagree on k");
    SplitTaylor sp = split_taylor_in_y(pre.R, k, n);

    // transversal-type genericity on the pure y part
    if (tpl == Template::Sk1 || tpl == Template::Skl) {
        if (g_coeff(sp.g, 1) == 0)
            throw genericity_error("assemble_moduli: outside U: g'(0) = 0 (transversal type not a smooth curve)");
    } else if (tpl == Template::S1l) {
        if (g_coeff(sp.g, 1) != 0)
            throw internal_error("assemble_moduli: g'(0) != 0 contradicts l >= 2");
        if (g_coeff(sp.g, 2) == 0)
            throw genericity_error("assemble_moduli: outside U: g''(0) = 0 (transversal type not Morse)");
    } else {
        if (sp.phi[0].eval0() == 0)
            throw genericity_error("assemble_moduli: outside U: phi_0(0) = 0 (transversal type degenerate)");
        RatMat rows;
        for (auto& Ri : pre.R) {
            RatVec row(size_t(Ri.chart().dim()), 0);
            for (int v = 0; v < Ri.chart().dim(); ++v) {
                Mono m;
                m[v] = 1;
                row[size_t(v)] = Ri.coeff(m);
            }
            rows.push_back(std::move(row));
        }
        if (mat_rank(rows) != 2 * n + 1)
            throw genericity_error("assemble_moduli: outside U: dR_0^...^dR_2n(0) = 0");
    }

    // reduce the associated map; all components truncated to a common
    // honestly-trusted order (R_0's y^j coefficient is only exact to N-j)
    int Nw = pre.valid_order - std::max(2 * n - k, 0);
    if (Nw < s + 2)
        throw order_exhausted("assemble_moduli: associated map order " + std::to_string(Nw) +
                              " too small for s = " + std::to_string(s));
    std::vector<Jet> rcomps;
    for (auto& c : sp.r.comps) rcomps.push_back(c.truncated(std::min(c.order(), Nw)));
    MapJet rw(sp.r.chart, std::move(rcomps));
    WhitneyClass wc = whitney_classify(rw, s);
    if (!wc.s || *wc.s != s || !wc.flag_a || !wc.flag_b || !wc.flag_c) {
        std::string msg = "assemble_moduli: outside U: associated map is not S_" + std::to_string(s);
        for (auto& [name, val] : wc.witnesses) msg += "; " + name + " = " + rat_str(val);
        throw genericity_error(msg);
    }
    OmegaReduction red = reduce_R_omega(rw, s, Nw);

    // carry the symplectomorphism to the coefficients and re-split
    std::vector<Jet> inner = orbit_inner_of(red.phi, pre.R[0].chart(), Nw);
    std::vector<Jet> Rt;
    for (auto& Ri : pre.R) Rt.push_back(compose(Ri.truncated(Nw), inner));
    SplitTaylor sp2 = split_taylor_in_y(Rt, k, n);
    for (size_t i = 0; i < sp2.r.comps.size(); ++i) {
        int t = std::min({sp2.r.comps[i].order(), red.normal.comps[i].order(), red.valid_order});
        if (sp2.r.comps[i].truncated(t) != red.normal.comps[i].truncated(t))
            throw internal_error("assemble_moduli: re-split does not match the reduced map");
    }
    if (sp2.g.truncated(Nw) != sp.g.truncated(Nw))
        throw internal_error("assemble_moduli: pure y part not preserved");

    SectionModuli out;
    out.cls = std::move(cls);
    out.provenance = tpl;
    out.g = sp2.g;
    out.phi = std::move(sp2.phi);
    out.whitney = std::move(red.moduli);
    out.extra = std::move(sp2.extra);
    out.R = std::move(Rt);

    std::vector<Jet> fcomps(size_t(full.dim()));
    fcomps[size_t(full.x_index())] = Jet::variable(full, Nw, full.x_index());
    fcomps[size_t(full.y_index())] = Jet::variable(full, Nw, full.y_index());
    Chart redc = red.phi.chart();
    for (int i = 1; i <= n; ++i) {
        fcomps[size_t(full.p_index(i))] = lift_chart(red.phi.component(redc.p_index(i)).truncated(Nw), full);
        fcomps[size_t(full.q_index(i))] = lift_chart(red.phi.component(redc.q_index(i)).truncated(Nw), full);
    }
    DiffeoJet lift(full, std::move(fcomps));
    out.transform = pre.transform.then_inner(lift);
    out.unit = compose(pre.unit.truncated(Nw), lift.components());
    out.valid_order = red.valid_order;
    return out;
}

TemplateReport validate_template(const SectionModuli& m) {
    TemplateReport rep;
    auto fail = [&](const std::string& s) { rep.failures.push_back(s); };

    if (m.provenance == Template::A1) {
        if (!m.extra) {
            fail("A1: Morse function missing");
            return rep;
        }
        const Jet& psi = *m.extra;
        if (psi.eval0() != 0 || !psi.homogeneous_part(1).is_zero())
            fail("A1: psi is not critical at the origin");
        Chart red = psi.chart();
        RatMat H(size_t(red.dim()), RatVec(size_t(red.dim()), 0));
        for (int i = 0; i < red.dim(); ++i)
            for (int j = 0; j < red.dim(); ++j) {
                Mono mo;
                mo[i] += 1;
                mo[j] += 1;
                H[size_t(i)][size_t(j)] = psi.coeff(mo) * (i == j ? 2 : 1);
            }
        if (mat_det(H) == 0) fail("A1: psi is not Morse");
        Inertia sig = sym_signature(H);
        if (sig.pos != m.psi_signature.pos || sig.neg != m.psi_signature.neg ||
            sig.zero != m.psi_signature.zero)
            fail("A1: recorded signature is off");
        if (m.phi.empty() || m.phi[0].eval0() == 0) fail("A1: phi(0) = 0");
        return rep;
    }

    int n = m.R.empty() ? 0 : m.R[0].chart().n;
    int k = m.cls.k, l = m.cls.l;
    int s = m.provenance == Template::S1l ? l - 2 : (m.provenance == Template::Skl ? l - 1 : 0);
    Chart red(n, Ambient::Reduced);
    int q1i = red.q_index(1);

    if (!pure_y(m.g)) fail("g contains non-y monomials");
    if (m.provenance == Template::Sk1 || m.provenance == Template::Skl) {
        if (g_coeff(m.g, 1) == 0) fail("g'(0) = 0");
    } else if (m.provenance == Template::S1l) {
        if (g_coeff(m.g, 1) != 0) fail("g'(0) != 0");
        if (g_coeff(m.g, 2) == 0) fail("g''(0) = 0");
    } else {
        if (!m.extra) fail("isolated case: R_2n missing");
        if (m.phi.empty() || m.phi[0].eval0() == 0) fail("isolated case: phi_0(0) = 0");
    }
    if (int(m.phi.size()) != (m.provenance == Template::Isolated ? 2 * n : k))
        fail("phi count is off");

    const WhitneyModuli& w = m.whitney;
    if (w.psi.eval0() == 0) fail("psi(0) = 0");
    if (int(w.r1j.size()) != s) fail("r1j count is off");
    for (auto& a : w.r1j) {
        if (a.eval0() != 0) fail("an r1j does not vanish at 0");
        for (auto& [mo, c] : a.coeffs())
            if (mo[q1i] > 0) fail("an r1j depends on q1");
    }
    if (!w.moduli_independent && s > 0)
        rep.notes.push_back("r1j dependent at the origin (informational; not implied by the open-set conditions)");
    if (int(w.odd.size()) != n - 1 || int(w.even_tilde.size()) != n - 1) {
        fail("ideal-constrained component count is off");
        return rep;
    }
    for (int mm = 1; mm < n; ++mm) {
        const Jet& odd = w.odd[size_t(mm - 1)];
        const Jet& even = w.even_tilde[size_t(mm - 1)];
        if (!ideal_membership(odd, 2 * mm + 1).member)
            fail("r_" + std::to_string(2 * mm + 1) + " escapes its ideal");
        if (!ideal_membership(even, 2 * mm).member)
            fail("rtilde_" + std::to_string(2 * mm) + " escapes its ideal");
        Mono mq;
        mq[red.q_index(mm + 1)] = 1;
        if (odd.coeff(mq) == 0) fail("d_q" + std::to_string(mm + 1) + " r_odd(0) = 0");
    }

    // re-split the stored coefficients and compare against the template
    try {
        SplitTaylor sp = split_taylor_in_y(m.R, k, n);
        auto cmp = [&](const Jet& a, const Jet& b, const std::string& what) {
            int t = std::min({a.order(), b.order(), m.valid_order});
            if (a.truncated(t) != b.truncated(t)) fail(what);
        };
        cmp(sp.r.comps[0], Jet::variable(red, m.valid_order, red.p_index(1)), "r_0 is not p1");
        Jet r1(red, m.valid_order);
        Jet q1pow = Jet::constant(red, m.valid_order, 1);
        Jet q1v = Jet::variable(red, m.valid_order, q1i);
        for (int j = 0; j < s; ++j) {
            r1 += w.r1j[size_t(j)].truncated(m.valid_order) * q1pow;
            q1pow = q1pow * q1v;
        }
        q1pow = q1pow * q1v;  // q1^{s+1}
        r1 += w.psi.truncated(m.valid_order) * q1pow;
        cmp(sp.r.comps[1], r1, "r_1 does not match psi*q1^(s+1) + sum r1j*q1^j");
        for (int mm = 1; mm < n; ++mm) {
            cmp(sp.r.comps[size_t(2 * mm)],
                Jet::variable(red, m.valid_order, red.p_index(mm + 1)) + w.even_tilde[size_t(mm - 1)],
                "r_" + std::to_string(2 * mm) + " does not match p_" + std::to_string(mm + 1) + " + rtilde");
            cmp(sp.r.comps[size_t(2 * mm + 1)], w.odd[size_t(mm - 1)],
                "r_" + std::to_string(2 * mm + 1) + " does not match its modulus");
        }
        cmp(sp.g, m.g, "stored g does not match the coefficients");
    } catch (const error& e) {
        fail(std::string("re-split failed: ") + e.what());
    }
    return rep;
}

}  // namespace hamsec
