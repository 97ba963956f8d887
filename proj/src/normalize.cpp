#include "hamsec/normalize.hpp"

#include <algorithm>

namespace hamsec {

namespace {

using XPoly = std::vector<Rat>;  // coefficients by x-degree

XPoly xmul(const XPoly& a, const XPoly& b, int cap) {
    XPoly r(size_t(cap) + 1, 0);
    for (size_t i = 0; i < a.size() && int(i) <= cap; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size() && int(i + j) <= cap; ++j)
            if (b[j] != 0) r[i + j] += a[i] * b[j];
    }
    return r;
}

XPoly series_inverse(const XPoly& u, int cap) {
    if (u.empty() || u[0] == 0) throw error("series_inverse: not a unit");
    XPoly inv(size_t(cap) + 1, 0);
    inv[0] = 1 / u[0];
    for (int t = 1; t <= cap; ++t) {
        Rat s = 0;
        for (int j = 1; j <= t && j < int(u.size()); ++j) s += u[size_t(j)] * inv[size_t(t - j)];
        inv[size_t(t)] = -s / u[0];
    }
    return inv;
}

bool xpoly_zero(const XPoly& p) {
    for (auto& c : p)
        if (c != 0) return false;
    return true;
}

Mono strip_x(const Mono& m, int xi) {
    Mono w = m;
    w[xi] = 0;
    return w;
}

}  // namespace

WeierstrassResult weierstrass_prepare(const Jet& h, int k, int N) {
    Chart full = h.chart();
    if (!full.has_x()) throw error("weierstrass_prepare: Full chart required");
    if (k < 1) throw error("weierstrass_prepare: k must be >= 1");
    int W = std::min(h.order(), N);
    if (W < k + 1) throw order_exhausted("weierstrass_prepare: order too small for k");
    int xi = full.x_index();

    // split h by the (y,p,q)-part of each monomial
    std::map<Mono, XPoly, GradedLex> H;
    for (auto& [m, c] : h.coeffs()) {
        if (m.deg() > W) continue;
        auto& p = H[strip_x(m, xi)];
        if (int(p.size()) <= m[xi]) p.resize(size_t(m[xi]) + 1, 0);
        p[m[xi]] += c;
    }

    XPoly h0 = H.count(Mono{}) ? H[Mono{}] : XPoly{};
    h0.resize(size_t(W) + 1, 0);
    for (int t = 0; t <= k; ++t)
        if (h0[size_t(t)] != 0)
            throw error("weierstrass_prepare: x-valuation of h(x,0) below k+1");
    if (h0[size_t(k) + 1] == 0)
        throw error("weierstrass_prepare: x-valuation of h(x,0) exceeds k+1");

    XPoly u0(size_t(W) + 1, 0);  // h0 = x^{k+1} u0
    for (int t = 0; t + k + 1 <= W; ++t) u0[size_t(t)] = h0[size_t(t + k + 1)];
    XPoly u0inv = series_inverse(u0, W);

    // solve q*h + r = x^{k+1} by ascending degree in (y,p,q)
    std::map<Mono, XPoly, GradedLex> q;  // w-mono -> x-poly
    std::vector<Jet> Rfull(size_t(k) + 1, Jet(full, W));
    for (int j = 0; j <= W; ++j) {
        std::map<Mono, XPoly, GradedLex> G;
        if (j == 0) {
            auto& g = G[Mono{}];
            g.assign(size_t(W) + 1, 0);
            g[size_t(k) + 1] = 1;
        }
        for (auto& [mq, qp] : q) {
            int dq = mq.deg();
            if (dq >= j) continue;
            for (auto& [mh, hp] : H) {
                if (mh.deg() != j - dq || mh.is_one()) continue;
                XPoly prod = xmul(qp, hp, W - j);
                auto& g = G[mq * mh];
                if (g.empty()) g.assign(size_t(W) + 1, 0);
                for (size_t t = 0; t < prod.size(); ++t) g[t] -= prod[t];
            }
        }
        for (auto& [mu, g] : G) {
            if (xpoly_zero(g)) continue;
            // unit part: x-degree >= k+1, divided by h0
            XPoly hi(size_t(W) + 1, 0);
            for (int t = 0; t + k + 1 < int(g.size()) && t <= W - j; ++t)
                hi[size_t(t)] = g[size_t(t + k + 1)];
            XPoly qmu = xmul(hi, u0inv, W - j);
            if (!xpoly_zero(qmu)) q[mu] = qmu;
            // remainder: unit*h - x^{k+1} picks up -(low-degree part of G)
            for (int t = 0; t <= k && t < int(g.size()); ++t) {
                Mono m = mu;  // x-exponent stays 0 in R_i
                Rfull[size_t(t)].add_coeff(m, -g[size_t(t)]);
            }
        }
    }

    WeierstrassResult out;
    out.k = k;
    out.unit = Jet(full, W);
    for (auto& [mu, qp] : q)
        for (size_t t = 0; t < qp.size(); ++t) {
            Mono m = mu;
            m[xi] = uint8_t(t);
            out.unit.add_coeff(m, qp[t]);
        }
    Chart orbit(full.n, Ambient::Orbit);
    for (auto& r : Rfull) {
        if (r.eval0() != 0) throw internal_error("weierstrass_prepare: R_i(0) != 0");
        out.R.push_back(restrict_chart(r, orbit));
    }

    // postcondition: unit * h = x^{k+1} + sum R_i x^i at order W, exactly
    Jet lhs = out.unit * h.truncated(W);
    Jet x = Jet::variable(full, W, xi);
    Jet rhs = Jet::constant(full, W, 1);
    for (int t = 0; t <= k; ++t) rhs = rhs * x;
    Jet xpow = Jet::constant(full, W, 1);
    for (int i = 0; i <= k; ++i) {
        rhs += lift_chart(out.R[size_t(i)], full) * xpow;
        xpow = xpow * x;
    }
    if (lhs != rhs) throw internal_error("weierstrass_prepare: division residual nonzero");
    return out;
}

KillTopResult kill_top_coefficient(const WeierstrassResult& prep) {
    int k = prep.k;
    if (int(prep.R.size()) != k + 1) throw error("kill_top_coefficient: need k+1 coefficients");
    Chart orbit = prep.R[0].chart();
    Chart full(orbit.n, Ambient::Full);
    int W = prep.unit.order();
    int xi = full.x_index();

    Jet c = prep.R[size_t(k)] * Rat(1, k + 1);
    Jet c_full = lift_chart(c, full);

    std::vector<Jet> comps;
    comps.push_back(Jet::variable(full, W, xi) - c_full);
    for (int v = 1; v < full.dim(); ++v) comps.push_back(Jet::variable(full, W, v));
    DiffeoJet shift(full, std::move(comps));

    // substitute into the prepared polynomial and re-collect x powers
    Jet P = Jet::constant(full, W, 1);
    Jet x = Jet::variable(full, W, xi);
    for (int t = 0; t <= k; ++t) P = P * x;
    Jet xpow = Jet::constant(full, W, 1);
    for (int i = 0; i <= k; ++i) {
        P += lift_chart(prep.R[size_t(i)], full) * xpow;
        xpow = xpow * x;
    }
    Jet P2 = shift.apply(P);
    auto coeffs = collect_powers(P2, xi);
    if (int(coeffs.size()) != k + 2) throw internal_error("kill_top_coefficient: degree changed");
    if (!coeffs[size_t(k)].is_zero())
        throw internal_error("kill_top_coefficient: x^k coefficient survived the shift");
    if (coeffs[size_t(k) + 1] != Jet::constant(full, W, 1))
        throw internal_error("kill_top_coefficient: top coefficient not 1");

    KillTopResult out;
    for (int i = 0; i < k; ++i) out.R.push_back(restrict_chart(coeffs[size_t(i)], orbit));
    out.unit = shift.apply(prep.unit);
    out.shift = shift;

    // omega = dx^dy + dp^dq pulled back through the shift; the dx-part must
    // come out exactly dx^dy and everything else must be x-free
    FormJet w = pullback(shift, darboux_form(full, W + 1));
    int T = w.order();
    FormJet omega_hat(orbit, 2, T);
    for (auto& [key, j] : w.comps()) {
        bool has_x = false;
        for (int v : key) has_x |= (v == xi);
        if (has_x) {
            if (key != FormJet::Key{xi, full.y_index()} || j != Jet::constant(full, j.order(), 1))
                throw internal_error("kill_top_coefficient: dx-components not exactly dx^dy");
            continue;
        }
        FormJet::Key ok;
        for (int v : key) ok.push_back(orbit.var_index(full.var_name(v)));
        omega_hat.add_comp(std::move(ok), restrict_chart(j, orbit));
    }
    if (!is_closed(omega_hat)) throw internal_error("kill_top_coefficient: omega_hat not closed");
    out.omega_hat = std::move(omega_hat);
    return out;
}

namespace {

void check_field_valuation(const std::vector<Jet>& W) {
    if (W.empty()) throw error("time1_flow: empty field");
    for (auto& w : W) {
        auto v = w.valuation();
        if (v && *v < 2) throw error("time1_flow: field valuation < 2");
    }
}

// L_W sigma = d(i_W sigma) for closed sigma.  The interior product is taken
// one order above sigma's tag: its degree-(order+1) part only involves sigma
// coefficients of degree <= order-1 (W has valuation >= 2), so lifting the
// tags is exact and d() then lands back on `order` with nothing lost.
FormJet lie_derivative_closed(const std::vector<Jet>& W, const FormJet& sigma, int order) {
    Chart c = sigma.chart();
    FormJet lifted(c, sigma.degree(), order + 1);
    for (auto& [key, j] : sigma.comps()) lifted.add_comp(key, j.with_order(order + 1));
    std::vector<Jet> W2;
    for (auto& w : W) W2.push_back(w.with_order(order + 1));
    FormJet ds = d(interior(W2, lifted));
    return ds.truncated(order);
}

// exp(L_W) sigma: pullback of the closed form sigma by the time-1 flow of W.
FormJet exp_field_pullback(const std::vector<Jet>& W, const FormJet& sigma, int order) {
    FormJet sum = sigma.truncated(order);
    FormJet term = sum;
    for (int m = 1;; ++m) {
        if (m > order + 2) throw internal_error("time1_flow: Lie series did not terminate");
        term = Rat(1, m) * lie_derivative_closed(W, term, order);
        if (term.is_zero()) break;
        sum += term;
    }
    return sum;
}

}  // namespace

// W of valuation >= 1 means the degree-`order` part of W * d(term) only needs
// d(term) through degree order-1, which partial() delivers; the retags are
// therefore exact for polynomial W.
Jet lie_series_apply(const std::vector<Jet>& W, const Jet& a, int order) {
    Chart c = a.chart();
    for (auto& w : W) {
        auto v = w.valuation();
        if (v && *v < 1) throw error("lie_series_apply: field has a constant part");
    }
    Jet sum = a.with_order(order);
    Jet term = sum;
    for (int m = 1;; ++m) {
        if (m > 2 * order + 2)
            throw internal_error("lie_series_apply: Lie series did not terminate");
        Jet next = Jet::zero(c, order);
        for (int v = 0; v < c.dim(); ++v) {
            if (W[size_t(v)].is_zero()) continue;
            next += (W[size_t(v)].with_order(order) * partial(term, v).with_order(order))
                        .with_order(order);
        }
        next = next * Rat(1, m);
        if (next.is_zero()) break;
        sum += next;
        term = next;
    }
    return sum;
}

DiffeoJet time1_flow(const std::vector<Jet>& W, int order) {
    check_field_valuation(W);
    Chart c = W[0].chart();
    std::vector<Jet> comps;
    for (int i = 0; i < c.dim(); ++i)
        comps.push_back(lie_series_apply(W, Jet::variable(c, order, i), order));
    return DiffeoJet(c, std::move(comps));
}

namespace {

// straightening map Psi = lin o exp(W_1) o ... o exp(W_m) with
// pullback(Psi, omega_hat) = dp^dq at order T; the factors are kept so the
// inverse can be assembled without generic map inversion
struct MoserFactors {
    DiffeoJet Psi;
    std::vector<Jet> lin;                  // components of the linear factor
    std::vector<std::vector<Jet>> fields;  // W_1, ..., W_m
};

MoserFactors moser_factors(const FormJet& omega_hat) {
    Chart orbit = omega_hat.chart();
    if (orbit.ambient != Ambient::Orbit) throw error("moser_darboux_orbit: Orbit chart required");
    int n = orbit.n;
    int dim = orbit.dim();
    int T = omega_hat.order();
    if (rank_at_origin(omega_hat) != 2 * n)
        throw error("moser_darboux_orbit: rank deficiency at the origin");
    if (!is_closed(omega_hat)) throw error("moser_darboux_orbit: form not closed");

    // constant antisymmetric matrix and its kernel line
    RatMat A(size_t(dim), RatVec(size_t(dim), 0));
    for (auto& [key, j] : omega_hat.comps()) {
        Rat c = j.eval0();
        A[size_t(key[0])][size_t(key[1])] = c;
        A[size_t(key[1])][size_t(key[0])] = -c;
    }
    auto kernel = mat_nullspace(A);
    if (kernel.size() != 1) throw internal_error("moser_darboux_orbit: kernel dimension != 1");
    RatVec v = kernel[0];
    int yi = orbit.y_index();
    if (v[size_t(yi)] == 0)
        throw error("moser_darboux_orbit: kernel not transversal to the fibers (dy^omega^n(0)=0)");
    for (auto& e : v) e /= kernel[0][size_t(yi)];
    v[size_t(yi)] = 1;

    auto B = [&](const RatVec& a, const RatVec& b) {
        Rat s = 0;
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j2 = 0; j2 < b.size(); ++j2)
                if (a[i] != 0 && b[j2] != 0) s += a[i] * A[i][j2] * b[j2];
        return s;
    };

    // symplectic Gram-Schmidt on the hyperplane {y-component = 0}
    std::vector<RatVec> pool;
    for (int i = 1; i <= n; ++i) {
        RatVec e(size_t(dim), 0);
        e[size_t(orbit.p_index(i))] = 1;
        pool.push_back(e);
    }
    for (int i = 1; i <= n; ++i) {
        RatVec e(size_t(dim), 0);
        e[size_t(orbit.q_index(i))] = 1;
        pool.push_back(e);
    }
    std::vector<RatVec> us, ws;
    while (!pool.empty()) {
        RatVec u = pool.front();
        pool.erase(pool.begin());
        size_t wi = pool.size();
        for (size_t i = 0; i < pool.size(); ++i)
            if (B(u, pool[i]) != 0) { wi = i; break; }
        if (wi == pool.size())
            throw internal_error("moser_darboux_orbit: degenerate restriction in Gram-Schmidt");
        RatVec w = pool[wi];
        pool.erase(pool.begin() + long(wi));
        Rat scale = B(u, w);
        for (auto& e : w) e /= scale;
        for (auto& b : pool) {
            Rat c1 = B(u, b), c2 = B(w, b);
            for (size_t i = 0; i < b.size(); ++i) b[i] += c2 * u[i] - c1 * w[i];
        }
        us.push_back(std::move(u));
        ws.push_back(std::move(w));
    }

    std::vector<Jet> lin;
    for (int a = 0; a < dim; ++a) {
        Jet comp(orbit, T + 1);
        Mono my;
        my[yi] = 1;
        comp.add_coeff(my, v[size_t(a)]);
        for (int i = 0; i < n; ++i) {
            Mono mp;
            mp[orbit.p_index(i + 1)] = 1;
            comp.add_coeff(mp, us[size_t(i)][size_t(a)]);
            Mono mq;
            mq[orbit.q_index(i + 1)] = 1;
            comp.add_coeff(mq, ws[size_t(i)][size_t(a)]);
        }
        lin.push_back(comp);
    }
    MoserFactors out;
    out.lin = lin;
    DiffeoJet Psi(orbit, std::move(lin));

    FormJet cur = pullback(Psi, omega_hat);
    FormJet target = pq_form(orbit, T);
    {
        FormJet c0 = cur - target;
        for (auto& [key, j] : c0.comps())
            if (j.eval0() != 0)
                throw internal_error("moser_darboux_orbit: linear prenormalization failed");
    }

    int prev = 0;
    for (int iter = 0; iter <= T + 1; ++iter) {
        FormJet sigma = cur - target;
        if (sigma.is_zero()) break;
        if (iter == T + 1) throw internal_error("moser_darboux_orbit: Moser loop did not converge");
        int d = T + 1;
        for (auto& [key, j] : sigma.comps()) d = std::min(d, j.valuation().value_or(T + 1));
        if (getenv("HAMSEC_MOSER_DEBUG"))
            fprintf(stderr, "iter=%d d=%d sigma=%s\n", iter, d, sigma.str().c_str());
        if (d <= prev || d < 1)
            throw internal_error("moser_darboux_orbit: degree did not increase in the Moser loop");
        prev = d;

        FormJet sigma_d(orbit, 2, T + 3);
        for (auto& [key, j] : sigma.comps()) {
            Jet hp = j.homogeneous_part(d).with_order(T + 3);
            if (!hp.is_zero()) sigma_d.add_comp(key, hp);
        }
        if (!is_closed(sigma_d))
            throw internal_error("moser_darboux_orbit: inhomogeneous part not closed");

        FormJet alpha = homotopy_primitive(sigma_d);
        // gauge away the dy-component so the flow fixes y
        Jet F = integrate(alpha.comp({yi}), yi);
        FormJet alphap = alpha;
        {
            FormJet dF(orbit, 1, F.order() - 1);
            for (int a = 0; a < dim; ++a) dF.add_comp({a}, partial(F, a));
            alphap -= dF;
        }
        if (!alphap.comp({yi}).is_zero())
            throw internal_error("moser_darboux_orbit: dy-component survived the gauge");

        std::vector<Jet> W(size_t(dim), Jet::zero(orbit, T + 1));
        for (int i = 1; i <= n; ++i) {
            W[size_t(orbit.p_index(i))] = (-alphap.comp({orbit.q_index(i)})).truncated(T + 1);
            W[size_t(orbit.q_index(i))] = alphap.comp({orbit.p_index(i)}).truncated(T + 1);
        }
        check_field_valuation(W);
        // Psi <- Psi o (time-1 flow of W) and cur <- flow-pullback of cur,
        // both as Lie series (no jet composition needed)
        std::vector<Jet> comps;
        for (int a = 0; a < dim; ++a) comps.push_back(lie_series_apply(W, Psi.component(a), T + 1));
        Psi = DiffeoJet(orbit, std::move(comps));
        cur = exp_field_pullback(W, cur, T);
        out.fields.push_back(std::move(W));
    }
    out.Psi = std::move(Psi);
    return out;
}

DiffeoJet moser_straighten(const FormJet& omega_hat) {
    return moser_factors(omega_hat).Psi;
}

}  // namespace

DiffeoJet moser_darboux_orbit(const FormJet& omega_hat) {
    MoserFactors mf = moser_factors(omega_hat);
    Chart orbit = omega_hat.chart();
    int dim = orbit.dim();
    int T1 = mf.Psi.order();

    // Phi = Psi^{-1} = exp(-W_m) o ... o exp(-W_1) o lin^{-1}: appending a
    // flow factor on the right is a Lie-series application per component, so
    // only the final linear factor needs an actual composition
    std::vector<Jet> F;
    for (int a = 0; a < dim; ++a) F.push_back(Jet::variable(orbit, T1, a));
    for (auto it = mf.fields.rbegin(); it != mf.fields.rend(); ++it) {
        std::vector<Jet> neg;
        for (auto& w : *it) neg.push_back(-w);
        for (auto& f : F) f = lie_series_apply(neg, f, T1);
    }
    DiffeoJet linmap(orbit, mf.lin);
    auto Linv = mat_inverse(linmap.linear_matrix());
    if (!Linv) throw internal_error("moser_darboux_orbit: singular linear factor");
    std::vector<Jet> linv_comps;
    for (int a = 0; a < dim; ++a) {
        Jet comp(orbit, T1);
        for (int b = 0; b < dim; ++b) {
            Mono m;
            m[b] = 1;
            comp.add_coeff(m, (*Linv)[size_t(a)][size_t(b)]);
        }
        linv_comps.push_back(comp);
    }
    std::vector<Jet> phi_comps;
    for (auto& f : F) phi_comps.push_back(compose(f, linv_comps));
    DiffeoJet Phi(orbit, std::move(phi_comps));

    // independent verification in the cheap direction: dp^dq has constant
    // coefficients, so this pullback needs no jet composition
    FormJet back = pullback(Phi, pq_form(Phi.chart(), Phi.order()));
    int ord = std::min(back.order(), omega_hat.order());
    if (!(back.truncated(ord) == omega_hat.truncated(ord)))
        throw internal_error("moser_darboux_orbit: pullback verification failed");
    return Phi;
}

namespace {

struct PipelineCore {
    int k;
    std::vector<Jet> R;  // final coefficients, Orbit chart
    DiffeoJet transform; // Full chart
    Jet unit;
    int valid_order;
};

PipelineCore run_pipeline(const Jet& h_in, int k, int N) {
    int W = N + 2;
    Jet h = h_in.order() >= W ? h_in.truncated(W) : h_in.with_order(W);
    Chart full = h.chart();
    Chart orbit(full.n, Ambient::Orbit);

    WeierstrassResult prep = weierstrass_prepare(h, k, W);
    KillTopResult kt = kill_top_coefficient(prep);
    DiffeoJet Psi = moser_straighten(kt.omega_hat);

    // lift (y,p,q) -> (y,...) to the Full chart with x untouched
    std::vector<Jet> mcomps;
    mcomps.push_back(Jet::variable(full, Psi.order(), full.x_index()));
    for (int a = 0; a < orbit.dim(); ++a) mcomps.push_back(lift_chart(Psi.component(a), full));
    DiffeoJet M(full, std::move(mcomps));

    PipelineCore out;
    out.k = k;
    out.transform = kt.shift.then_inner(M);
    out.unit = M.apply(kt.unit);
    for (auto& r : kt.R) out.R.push_back(Psi.apply(r));

    // verify every PreliminaryNormalForm invariant before returning
    Jet lhs = out.unit * out.transform.apply(h);
    Jet rhs = assemble_section(out.R, k, lhs.order());
    int vo = std::min(lhs.order(), rhs.order());
    if (lhs.truncated(vo) != rhs.truncated(vo)) {
        Jet res = lhs.truncated(vo) - rhs.truncated(vo);
        throw internal_error("reduce_to_preliminary: reconstruction residual nonzero (order " +
                             std::to_string(vo) + ", residual valuation " +
                             std::to_string(res.valuation().value_or(-1)) + ", " +
                             std::to_string(res.coeffs().size()) + " terms)");
    }
    if (vo < N) throw internal_error("reduce_to_preliminary: lost too much jet order");
    out.valid_order = vo;

    if (out.transform.component(full.y_index()) !=
        Jet::variable(full, out.transform.order(), full.y_index()))
        throw internal_error("reduce_to_preliminary: transform does not preserve y");
    FormJet omega = darboux_form(full, out.transform.order());
    FormJet pb = pullback(out.transform, omega);
    if (!(pb == darboux_form(full, pb.order())))
        throw internal_error("reduce_to_preliminary: transform not symplectic");
    for (auto& r : out.R)
        if (r.eval0() != 0) throw internal_error("reduce_to_preliminary: R_i(0) != 0");
    return out;
}

}  // namespace

PreliminaryNormalForm reduce_to_preliminary(const Jet& h, int N) {
    Chart full = h.chart();
    if (!full.has_x()) throw error("reduce_to_preliminary: Full chart required");
    Jet f = Jet::variable(full, std::max(h.order(), N + 2), full.y_index());
    auto kscan = first_nonvanishing_fh(f, h.order() >= N + 2 ? h : h.with_order(N + 2), N + 2);
    if (!kscan.index)
        throw order_exhausted("reduce_to_preliminary: tangency order undetermined at order " +
                              std::to_string(kscan.exhausted_at));
    int k = *kscan.index;
    if (k == 0) throw error("reduce_to_preliminary: section is nonsingular");
    PipelineCore core = run_pipeline(h, k, N);
    return PreliminaryNormalForm{core.k, core.R, core.transform, core.unit, core.valid_order};
}

A1Form reduce_A1(const Jet& h, int N) {
    Chart full = h.chart();
    SingularityClass cls = classify_section(h.order() >= N + 2 ? h : h.with_order(N + 2), N + 2);
    if (cls.tag != SingTag::A1)
        throw error("reduce_A1: section is not A1 (got " + cls.describe() + ")");
    PipelineCore core = run_pipeline(h, 1, N);

    Chart orbit(full.n, Ambient::Orbit);
    Chart reduced(full.n, Ambient::Reduced);
    auto split = divide_by_ideal_y(core.R[0]);
    A1Form out;
    out.phi = split.phi;
    if (out.phi.eval0() == 0) throw error("reduce_A1: phi(0) = 0 violates the A1 normal form");
    out.psi = restrict_chart(split.r, reduced);
    for (int v = 0; v < reduced.dim(); ++v) {
        Mono m;
        m[v] = 1;
        if (out.psi.coeff(m) != 0) throw internal_error("reduce_A1: psi has a linear part");
    }
    RatMat Hs(size_t(reduced.dim()), RatVec(size_t(reduced.dim()), 0));
    for (int i = 0; i < reduced.dim(); ++i)
        for (int j = i; j < reduced.dim(); ++j) {
            Mono m;
            m[i] = uint8_t(m[i] + 1);
            m[j] = uint8_t(m[j] + 1);
            Rat c = out.psi.coeff(m);
            if (i == j) c *= 2;
            Hs[size_t(i)][size_t(j)] = c;
            Hs[size_t(j)][size_t(i)] = c;
        }
    if (mat_det(Hs) == 0) throw error("reduce_A1: psi is not Morse");
    out.psi_signature = sym_signature(Hs);
    out.transform = core.transform;
    out.unit = core.unit;
    out.valid_order = core.valid_order;
    return out;
}

}  // namespace hamsec
