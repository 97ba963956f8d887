#include "hamsec/whitney.hpp"

#include <functional>

#include "hamsec/poisson.hpp"

namespace hamsec {

MapJet::MapJet(Chart c, std::vector<Jet> comps_) : chart(c), comps(std::move(comps_)) {
    if (chart.ambient != Ambient::Reduced) throw error("MapJet: Reduced chart required");
    if (int(comps.size()) != 2 * chart.n) throw error("MapJet: need 2n components");
    for (auto& a : comps) {
        if (a.chart() != chart) throw error("MapJet: component chart mismatch");
        if (a.eval0() != 0) throw error("MapJet: components must vanish at the origin");
    }
}

namespace {

RatVec grad0(const Jet& a) {
    RatVec g(size_t(a.chart().dim()), 0);
    for (int v = 0; v < a.chart().dim(); ++v) {
        Mono m;
        m[v] = 1;
        g[size_t(v)] = a.coeff(m);
    }
    return g;
}

bool zero_vec(const RatVec& v) {
    for (auto& c : v)
        if (c != 0) return false;
    return true;
}

// omega(u,v) = sum u_{p_i} v_{q_i} - u_{q_i} v_{p_i} on a Reduced chart
Rat omega_vec(const RatVec& u, const RatVec& v, int n) {
    Rat s = 0;
    for (int i = 0; i < n; ++i)
        s += u[size_t(i)] * v[size_t(n + i)] - u[size_t(n + i)] * v[size_t(i)];
    return s;
}

// Poisson pairing of linear functions, {a,b} with a,b given by coefficients
Rat poisson_cov(const RatVec& a, const RatVec& b, int n) { return -omega_vec(a, b, n); }

// Extends a canonical pair (A[0], B[0]) with pair(A[0],B[0]) = 1 to n pairs
// by Gram-Schmidt over the given pairing, scanning candidates in order.
void complete_pairs(const std::function<Rat(const RatVec&, const RatVec&)>& pair,
                    std::vector<RatVec>& A, std::vector<RatVec>& B,
                    const std::vector<RatVec>& candidates, int n) {
    int dim = 2 * n;
    auto project = [&](RatVec c) {
        for (size_t k = 0; k < A.size(); ++k) {
            Rat cb = pair(c, B[k]), ca = pair(c, A[k]);
            for (int j = 0; j < dim; ++j) c[size_t(j)] += ca * B[k][size_t(j)] - cb * A[k][size_t(j)];
        }
        return c;
    };
    while (int(A.size()) < n) {
        RatVec a;
        for (auto& e : candidates) {
            RatVec c = project(e);
            if (!zero_vec(c)) {
                a = std::move(c);
                break;
            }
        }
        if (a.empty()) throw internal_error("symplectic completion: ran out of candidates");
        RatVec b;
        for (auto& e : candidates) {
            RatVec c = project(e);
            Rat w = pair(a, c);
            if (w != 0) {
                for (auto& x : c) x /= w;
                b = std::move(c);
                break;
            }
        }
        if (b.empty()) throw internal_error("symplectic completion: degenerate pairing");
        A.push_back(std::move(a));
        B.push_back(std::move(b));
    }
}

std::vector<RatVec> standard_basis(int dim, bool q_first, int n) {
    std::vector<RatVec> out;
    for (int i = 0; i < dim; ++i) {
        RatVec e(size_t(dim), 0);
        int idx = q_first ? (i < n ? n + i : i - n) : i;
        e[size_t(idx)] = 1;
        out.push_back(std::move(e));
    }
    return out;
}

// Determinant over the Jet ring by minor expansion, memoized on column sets.
Jet jet_det(const std::vector<std::vector<Jet>>& M, Chart chart, int order) {
    int m = int(M.size());
    std::map<uint32_t, Jet> memo;
    std::function<Jet(int, uint32_t)> rec = [&](int row, uint32_t used) -> Jet {
        if (row == m) return Jet::constant(chart, order, 1);
        auto it = memo.find(used);
        if (it != memo.end()) return it->second;
        Jet acc(chart, order);
        int pos = 0;
        for (int j = 0; j < m; ++j) {
            if (used & (1u << j)) continue;
            if (!M[size_t(row)][size_t(j)].is_zero()) {
                Jet t = M[size_t(row)][size_t(j)] * rec(row + 1, used | (1u << j));
                acc += (pos % 2) ? -t : t;
            }
            ++pos;
        }
        memo.emplace(used, acc);
        return acc;
    };
    return rec(0, 0);
}

}  // namespace

WhitneyClass whitney_classify(const MapJet& r, int max_i) {
    WhitneyClass out;
    int n = r.n();
    const Jet& r0 = r.comps[0];
    const Jet& r1 = r.comps[1];
    BracketScan scan = first_nonvanishing_fh(r0, r1, max_i);
    out.exhausted_at = scan.exhausted_at;
    if (!scan.index) return out;
    int s = *scan.index;
    out.s = s;
    out.witnesses.push_back({"{r0,r1}_" + std::to_string(s) + "(0)", scan.witness});

    try {
        // (a): the chain pattern is s itself; for n >= 2 and s >= 1 also
        // dr0 ^ dr1 (0) != 0
        if (s == 0 || n == 1)
            out.flag_a = true;
        else
            out.flag_a = mat_rank({grad0(r0), grad0(r1)}) == 2;

        // (b): dr0 ^ d{r0,r1} ^ ... ^ d{r0,r1}_{s-1} (0) != 0
        RatMat rows_b{grad0(r0)};
        for (int i = 0; i < s; ++i) rows_b.push_back(grad0(iterated_fh(r0, r1, i)));
        out.flag_b = mat_rank(rows_b) == s + 1;

        // (c): dr0 ^ d{r0,r1}_{s-1} ^ dr2 ^ ... ^ dr_{2n-1} (0) != 0, reading
        // {r0,r1}_{-1} as r1
        RatMat rows_c{grad0(r0), grad0(s == 0 ? r1 : iterated_fh(r0, r1, s - 1))};
        for (int i = 2; i < 2 * n; ++i) rows_c.push_back(grad0(r.comps[size_t(i)]));
        out.flag_c = mat_rank(rows_c) == 2 * n;
        out.witnesses.push_back({"independence det", mat_det(rows_c)});

        // (d): det[dr] = unit * {r0,r1} as jets
        std::vector<std::vector<Jet>> J;
        for (auto& a : r.comps) {
            std::vector<Jet> row;
            for (int v = 0; v < r.chart.dim(); ++v) row.push_back(partial(a, v));
            J.push_back(std::move(row));
        }
        Jet det = jet_det(J, r.chart, J[0][0].order());
        Jet br = bracket(r0, r1);
        if (br.is_zero()) {
            out.flag_d = det.is_zero();
        } else {
            auto u = divide_jet(det.truncated(br.order()), br);
            out.flag_d = u.has_value() && u->eval0() != 0;
        }
    } catch (const order_exhausted&) {
        out.s.reset();
        out.flag_a = out.flag_b = out.flag_c = out.flag_d = false;
    }
    return out;
}

IdealCertificate ideal_membership(const Jet& a, int i) {
    Chart c = a.chart();
    if (c.ambient != Ambient::Reduced) throw error("ideal_membership: Reduced chart required");
    if (i < 1 || i > 2 * c.n) throw error("ideal_membership: ideal index out of range");
    // generators in order q1, p1, q2, p2, ...
    std::vector<int> gens;
    for (int t = 1; t <= i; ++t)
        gens.push_back(t % 2 ? c.q_index((t + 1) / 2) : c.p_index(t / 2));
    int cord = std::max(0, a.order() - 1);
    std::map<int, Jet> cof;
    IdealCertificate out;
    for (auto& [m, coeff] : a.coeffs()) {
        int hit = -1;
        for (int g : gens)
            if (m[g] > 0) {
                hit = g;
                break;
            }
        if (hit < 0) {
            out.offending.push_back(m);
            continue;
        }
        Mono d = m;
        d[hit] -= 1;
        auto [it, ins] = cof.try_emplace(hit, Jet(c, cord));
        it->second.add_coeff(d, coeff);
    }
    out.member = out.offending.empty();
    for (int g : gens) {
        auto it = cof.find(g);
        out.cofactors.push_back({c.var_name(g), it != cof.end() ? it->second : Jet(c, cord)});
    }
    return out;
}

namespace {

struct State {
    Chart chart;
    int N;
    std::vector<Jet> r;
    std::vector<Jet> phi;  // accumulated source diffeo, r_in o phi == r
};

void apply_subst(State& st, const std::vector<Jet>& inner) {
    for (auto& a : st.r) a = compose(a, inner);
    for (auto& a : st.phi) a = compose(a, inner);
}

void apply_linear(State& st, const RatMat& A) {
    std::vector<Jet> inner;
    for (int i = 0; i < st.chart.dim(); ++i) {
        Jet c(st.chart, st.N);
        for (int j = 0; j < st.chart.dim(); ++j)
            if (A[size_t(i)][size_t(j)] != 0)
                c += Jet::variable(st.chart, st.N, j, A[size_t(i)][size_t(j)]);
        inner.push_back(std::move(c));
    }
    apply_subst(st, inner);
}

void apply_flow(State& st, const Jet& g) {
    std::vector<Jet> V = hamiltonian_field(g.with_order(st.N + 1));
    for (auto& a : st.r) a = lie_series_apply(V, a, st.N);
    for (auto& a : st.phi) a = lie_series_apply(V, a, st.N);
}

Chart sub_chart(const Chart& c, int m) { return Chart(c.n - m, Ambient::Reduced); }

// set the first m pairs to zero and renumber the remaining ones
Jet restrict_pairs(const Jet& a, int m) {
    if (m == 0) return a;
    Chart big = a.chart();
    Chart small = sub_chart(big, m);
    Jet out(small, a.order());
    for (auto& [mo, co] : a.coeffs()) {
        bool drop = false;
        for (int i = 1; i <= m; ++i)
            drop = drop || mo[big.p_index(i)] > 0 || mo[big.q_index(i)] > 0;
        if (drop) continue;
        Mono t;
        for (int i = m + 1; i <= big.n; ++i) {
            t[small.p_index(i - m)] = mo[big.p_index(i)];
            t[small.q_index(i - m)] = mo[big.q_index(i)];
        }
        out.set_coeff(t, co);
    }
    return out;
}

Jet lift_pairs(const Jet& a, Chart big, int m) {
    if (m == 0) return a;
    Chart small = a.chart();
    Jet out(big, a.order());
    for (auto& [mo, co] : a.coeffs()) {
        Mono t;
        for (int i = 1; i <= small.n; ++i) {
            t[big.p_index(i + m)] = mo[small.p_index(i)];
            t[big.q_index(i + m)] = mo[small.q_index(i)];
        }
        out.set_coeff(t, co);
    }
    return out;
}

// identity on the first m pairs, A on the rest
RatMat embed_pairs(const RatMat& A, Chart big, int m) {
    int D = big.dim();
    Chart small = sub_chart(big, m);
    RatMat M(size_t(D), RatVec(size_t(D), 0));
    for (int i = 1; i <= m; ++i) {
        M[size_t(big.p_index(i))][size_t(big.p_index(i))] = 1;
        M[size_t(big.q_index(i))][size_t(big.q_index(i))] = 1;
    }
    auto up = [&](int idx) {
        return idx < small.n ? big.p_index(idx + m + 1) : big.q_index(idx - small.n + m + 1);
    };
    for (int i = 0; i < small.dim(); ++i)
        for (int j = 0; j < small.dim(); ++j) M[size_t(up(i))][size_t(up(j))] = A[size_t(i)][size_t(j)];
    return M;
}

// Brings r[ci] to p_{m+1} on the subspace where the first m pairs vanish, by
// a symplectomorphism of the remaining pairs (a symplectic flow box).
void flow_box(State& st, int ci, int m) {
    Chart small = sub_chart(st.chart, m);
    int ns = small.n, dim = small.dim();
    Jet rho = restrict_pairs(st.r[size_t(ci)], m);
    RatVec lam = grad0(rho);
    if (zero_vec(lam)) throw genericity_error("flow box: component singular at the origin");

    // v with omega(z, v) = lam . z, then a symplectic basis with b_1 = v; the
    // resulting linear map pulls the component back to p1 + higher terms
    RatVec v(size_t(dim), 0);
    for (int i = 0; i < ns; ++i) {
        v[size_t(ns + i)] = lam[size_t(i)];
        v[size_t(i)] = -lam[size_t(ns + i)];
    }
    std::vector<RatVec> A, B;
    B.push_back(v);
    auto candidates = standard_basis(dim, false, ns);
    for (auto& e : candidates) {
        Rat w = omega_vec(e, v, ns);
        if (w != 0) {
            RatVec a = e;
            for (auto& x : a) x /= w;
            A.push_back(std::move(a));
            break;
        }
    }
    if (A.empty()) throw internal_error("flow box: kernel vector unpaired");
    auto pairing = [&](const RatVec& x, const RatVec& y) { return omega_vec(x, y, ns); };
    complete_pairs(pairing, A, B, candidates, ns);
    RatMat M(size_t(dim), RatVec(size_t(dim), 0));
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < dim; ++j) {
            M[size_t(j)][size_t(i)] = A[size_t(i)][size_t(j)];
            M[size_t(j)][size_t(ns + i)] = B[size_t(i)][size_t(j)];
        }
    apply_linear(st, embed_pairs(M, st.chart, m));

    // kill the higher terms by time-1 flows: {g, p1} = d_{q1} g
    Jet p1v = Jet::variable(small, st.N, small.p_index(1));
    int prev_d = 1;
    for (int guard = 0;; ++guard) {
        Jet rem = restrict_pairs(st.r[size_t(ci)], m) - p1v;
        if (rem.is_zero()) break;
        int d = *rem.valuation();
        if (d <= prev_d || guard > st.N + 2)
            throw internal_error("flow box: correction degree did not increase");
        prev_d = d;
        Jet g = -integrate(rem.homogeneous_part(d), small.q_index(1));
        apply_flow(st, lift_pairs(g, st.chart, m));
    }
}

// Flattens the s-singular locus of r[ci] (restricted to the last n-m pairs)
// to {q_{m+1} = 0} by symplectomorphisms fixing p_{m+1}.
void flatten(State& st, int ci, int s, int m) {
    Chart small = sub_chart(st.chart, m);
    int ns = small.n, dim = small.dim();
    int q1i = small.q_index(1), p1i = small.p_index(1);
    auto u_of = [&]() {
        Jet u = restrict_pairs(st.r[size_t(ci)], m);
        for (int j = 0; j < s; ++j) u = partial(u, q1i);
        return u;
    };
    Jet u = u_of();
    if (u.eval0() != 0) throw genericity_error("flatten: locus does not pass through the origin");
    Mono mq;
    mq[q1i] = 1;
    Rat c1 = u.coeff(mq);
    if (c1 == 0) throw genericity_error("flatten: singular locus tangent to the flow direction");

    // linear step: canonical coordinate functions with P1 = p1, Q1 = du(0)/c1
    RatVec Q1 = grad0(u);
    for (auto& x : Q1) x /= c1;
    RatVec P1(size_t(dim), 0);
    P1[size_t(p1i)] = 1;
    std::vector<RatVec> A{Q1}, B{P1};
    auto pairing = [&](const RatVec& x, const RatVec& y) { return poisson_cov(x, y, ns); };
    complete_pairs(pairing, A, B, standard_basis(dim, true, ns), ns);
    RatMat T(size_t(dim), RatVec(size_t(dim), 0));
    for (int i = 0; i < ns; ++i) {
        T[size_t(small.p_index(i + 1))] = B[size_t(i)];
        T[size_t(small.q_index(i + 1))] = A[size_t(i)];
    }
    auto Tinv = mat_inverse(T);
    if (!Tinv) throw internal_error("flatten: canonical system not invertible");
    apply_linear(st, embed_pairs(*Tinv, st.chart, m));

    // flows of q1-free Hamiltonians: {g, q1} = -d_{p1} g, {g, p1} = 0
    int prev_d = 1;
    for (int guard = 0;; ++guard) {
        u = u_of();
        auto pw = collect_powers(u, q1i);
        Jet e = pw.empty() ? Jet(small, u.order()) : pw[0];
        if (e.is_zero()) break;
        int d = *e.valuation();
        if (d <= prev_d || guard > st.N + 2)
            throw internal_error("flatten: correction degree did not increase");
        prev_d = d;
        Jet g = integrate(e.homogeneous_part(d), p1i) * (Rat(1) / c1);
        apply_flow(st, lift_pairs(g, st.chart, m));
    }
}

State make_state(const MapJet& r, int N) {
    State st{r.chart, N, {}, {}};
    for (auto& a : r.comps) st.r.push_back(a.with_order(N));
    for (int i = 0; i < r.chart.dim(); ++i) st.phi.push_back(Jet::variable(r.chart, N, i));
    return st;
}

void require_class(const MapJet& r, int s, const char* who) {
    WhitneyClass cls = whitney_classify(r, s);
    if (!cls.s || *cls.s != s)
        throw genericity_error(std::string(who) + ": map is not an S_s singularity for the given s");
    if (!cls.flag_a || !cls.flag_b || !cls.flag_c)
        throw genericity_error(std::string(who) + ": differential independence conditions fail");
}

void verify_reconstruction(const MapJet& r, const State& st, const char* who) {
    for (size_t i = 0; i < st.r.size(); ++i)
        if (compose(r.comps[i].with_order(st.N), st.phi) != st.r[i])
            throw internal_error(std::string(who) + ": transformed map does not match the diffeo");
}

}  // namespace

RReduction reduce_R(const MapJet& r, int s, int N) {
    if (s < 0 || N < s + 2) throw error("reduce_R: order too small for the given s");
    require_class(r, s, "reduce_R");
    Chart chart = r.chart;
    int n = chart.n, q1i = chart.q_index(1);
    State st = make_state(r, N);
    flow_box(st, 0, 0);

    Mono mtop;
    mtop[q1i] = uint8_t(s + 1);
    Rat c = st.r[1].coeff(mtop);
    if (c == 0) throw internal_error("reduce_R: leading coefficient vanished");

    // fibered substitutions q1 -> q1 + delta remove every q1-power >= s and
    // the non-constant part of the q1^{s+1} coefficient.  Progress is
    // measured in the weighted degree wt = deg_{q1} + (s+1) * deg_rest, which
    // strictly increases (plain degree does not: moduli coefficients times
    // delta can land back at lower total degree).
    auto weight = [&](const Mono& mo) {
        return int(mo[q1i]) + (s + 1) * (mo.deg() - int(mo[q1i]));
    };
    Jet q1v = Jet::variable(chart, N, q1i);
    int prev_w = 0;
    for (int guard = 0;; ++guard) {
        auto pw = collect_powers(st.r[1], q1i);
        Jet resid(chart, N);
        for (int j = s; j < int(pw.size()); ++j) {
            Jet part = pw[size_t(j)];
            if (j == s + 1) part -= Jet::constant(chart, N, c);
            Mono mo;
            mo[q1i] = uint8_t(j);
            Jet shift(chart, N);
            for (auto& [mm, cc] : part.coeffs()) shift.add_coeff(mm * mo, cc);
            resid += shift;
        }
        if (resid.is_zero()) break;
        int w = weight(resid.coeffs().begin()->first);
        for (auto& [mm, cc] : resid.coeffs()) w = std::min(w, weight(mm));
        if (w <= prev_w || guard > (s + 1) * N + 4)
            throw internal_error("reduce_R: correction weight did not increase");
        prev_w = w;
        Jet delta(chart, N);
        for (auto& [mm, cc] : resid.coeffs()) {
            if (weight(mm) != w) continue;
            if (mm[q1i] < s) throw internal_error("reduce_R: residual below q1^s");
            Mono d = mm;
            d[q1i] = uint8_t(mm[q1i] - s);
            delta.add_coeff(d, -cc / (Rat(s + 1) * c));
        }
        if (delta.eval0() != 0) throw internal_error("reduce_R: substitution moves the origin");
        for (auto& a : st.r) a = substitute_var(a, q1i, q1v + delta);
        for (auto& a : st.phi) a = substitute_var(a, q1i, q1v + delta);
    }

    // straighten the q1-free parts of the remaining components by a
    // diffeomorphism of the q1-complement
    std::vector<Jet> D(size_t(chart.dim()), Jet(chart, N));
    D[size_t(chart.p_index(1))] = st.r[0];
    D[size_t(q1i)] = q1v;
    for (int m = 1; m < n; ++m) {
        D[size_t(chart.p_index(m + 1))] = collect_powers(st.r[size_t(2 * m)], q1i)[0];
        D[size_t(chart.q_index(m + 1))] = collect_powers(st.r[size_t(2 * m + 1)], q1i)[0];
    }
    DiffeoJet Dinv;
    try {
        Dinv = invert(DiffeoJet(chart, std::move(D)));
    } catch (const internal_error&) {
        throw;
    } catch (const error&) {
        throw genericity_error("reduce_R: restricted components are not independent");
    }
    apply_subst(st, Dinv.components());

    RReduction out;
    out.lead = c;
    out.valid_order = N;
    if (st.r[0] != Jet::variable(chart, N, chart.p_index(1)))
        throw internal_error("reduce_R: first component is not p1");
    auto pw = collect_powers(st.r[1], q1i);
    if (int(pw.size()) != s + 2) throw internal_error("reduce_R: stray q1-powers survived");
    if (!pw[size_t(s)].is_zero() || pw[size_t(s + 1)] != Jet::constant(chart, N, c))
        throw internal_error("reduce_R: q1-profile of the second component is off");
    for (int j = 0; j < s; ++j) {
        if (pw[size_t(j)].eval0() != 0) throw internal_error("reduce_R: modulus does not vanish at 0");
        out.r1j.push_back(pw[size_t(j)]);
    }
    if (s > 0) {
        RatMat rows;
        for (auto& a : out.r1j) rows.push_back(grad0(a));
        out.moduli_independent = mat_rank(rows) == s;
    } else {
        out.moduli_independent = true;
    }
    for (int m = 1; m < n; ++m) {
        Jet te = st.r[size_t(2 * m)] - Jet::variable(chart, N, chart.p_index(m + 1));
        Jet to = st.r[size_t(2 * m + 1)] - Jet::variable(chart, N, chart.q_index(m + 1));
        if (!ideal_membership(te, 1).member || !ideal_membership(to, 1).member)
            throw internal_error("reduce_R: component tail not divisible by q1");
    }
    verify_reconstruction(r, st, "reduce_R");
    out.normal = MapJet(chart, st.r);
    out.phi = DiffeoJet(chart, st.phi);
    return out;
}

OmegaReduction reduce_R_omega(const MapJet& r, int s, int N) {
    if (s < 0 || N < s + 2) throw error("reduce_R_omega: order too small for the given s");
    require_class(r, s, "reduce_R_omega");
    Chart chart = r.chart;
    int n = chart.n, q1i = chart.q_index(1);
    State st = make_state(r, N);

    flow_box(st, 0, 0);
    flatten(st, 1, s, 0);
    for (int m = 1; m < n; ++m) {
        flow_box(st, 2 * m, m);
        flatten(st, 2 * m + 1, 0, m);
    }

    OmegaReduction out;
    out.valid_order = N - s;
    out.phi = DiffeoJet(chart, st.phi);
    FormJet pb = pullback(out.phi, pq_form(chart, N));
    if (!(pb == pq_form(chart, pb.order())))
        throw internal_error("reduce_R_omega: transform is not symplectic");
    verify_reconstruction(r, st, "reduce_R_omega");

    if (st.r[0] != Jet::variable(chart, N, chart.p_index(1)))
        throw internal_error("reduce_R_omega: first component is not p1");
    auto pw = collect_powers(st.r[1], q1i);
    if (int(pw.size()) <= s + 1 || (s < int(pw.size()) && !pw[size_t(s)].is_zero()))
        throw internal_error("reduce_R_omega: q1-profile of the second component is off");
    for (int j = 0; j < s; ++j) {
        if (pw[size_t(j)].eval0() != 0)
            throw internal_error("reduce_R_omega: modulus does not vanish at 0");
        out.moduli.r1j.push_back(pw[size_t(j)]);
    }
    if (s > 0) {
        RatMat rows;
        for (auto& a : out.moduli.r1j) rows.push_back(grad0(a));
        out.moduli.moduli_independent = mat_rank(rows) == s;
    } else {
        out.moduli.moduli_independent = true;
    }
    Jet psi(chart, N);
    for (int j = s + 1; j < int(pw.size()); ++j) {
        Mono mo;
        mo[q1i] = uint8_t(j - s - 1);
        for (auto& [mm, cc] : pw[size_t(j)].coeffs()) psi.add_coeff(mm * mo, cc);
    }
    psi = psi.truncated(std::max(0, N - s - 1));
    if (psi.eval0() == 0) throw internal_error("reduce_R_omega: unit factor vanishes at 0");
    out.moduli.psi = psi;
    for (int m = 1; m < n; ++m) {
        Mono mq;
        mq[chart.q_index(m + 1)] = 1;
        if (st.r[size_t(2 * m + 1)].coeff(mq) == 0)
            throw internal_error("reduce_R_omega: odd component lost transversality");
        Jet te = st.r[size_t(2 * m)] - Jet::variable(chart, N, chart.p_index(m + 1));
        auto ce = ideal_membership(te, 2 * m);
        auto co = ideal_membership(st.r[size_t(2 * m + 1)], 2 * m + 1);
        if (!ce.member || !co.member)
            throw internal_error("reduce_R_omega: component escaped its ideal");
        out.moduli.even_tilde.push_back(te);
        out.moduli.odd.push_back(st.r[size_t(2 * m + 1)]);
        out.moduli.even_cert.push_back(std::move(ce));
        out.moduli.odd_cert.push_back(std::move(co));
    }
    out.normal = MapJet(chart, st.r);
    return out;
}

}  // namespace hamsec
