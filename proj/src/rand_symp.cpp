#include "hamsec/rand_symp.hpp"

#include "hamsec/poisson.hpp"

namespace hamsec {

DiffeoJet hamiltonian_time1_flow(const Jet& g, int order) {
    Chart chart = g.chart();
    if (order < 1) throw error("hamiltonian_time1_flow: order must be >= 1");
    if (g.eval0() != 0 || !g.homogeneous_part(1).is_zero())
        throw error("hamiltonian_time1_flow: need g(0) = 0 and dg(0) = 0");
    for (auto& [m, c] : g.coeffs()) {
        if (chart.has_x() && m[chart.x_index()] > 0)
            throw error("hamiltonian_time1_flow: g must be x-free");
        // quadratic terms make the flow's linear part nonzero; requiring a y
        // factor keeps that linear part nilpotent, so the Lie series ends
        if (m.deg() == 2 && (!chart.has_y() || m[chart.y_index()] == 0))
            throw error("hamiltonian_time1_flow: quadratic terms of g must contain y");
    }

    // g is taken as an exact polynomial, so the field is exact at `order`
    std::vector<Jet> V = hamiltonian_field(g.with_order(order + 1));
    std::vector<Jet> comps;
    for (int i = 0; i < chart.dim(); ++i)
        comps.push_back(lie_series_apply(V, Jet::variable(chart, order, i), order));
    return DiffeoJet(chart, std::move(comps));
}

namespace {

Rat small_rat(std::mt19937& rng, bool nonzero) {
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 3);
    int a = num(rng);
    while (nonzero && a == 0) a = num(rng);
    Rat r(a, den(rng));
    r.canonicalize();
    return r;
}

// Random symplectic transvection z -> z + c*omega0(z,v)*v of the (p,q) block,
// multiplied onto S (both as 2n x 2n matrices, index 0..n-1 = p, n..2n-1 = q).
void apply_transvection(std::mt19937& rng, int n, std::vector<std::vector<Rat>>& S) {
    int m = 2 * n;
    std::uniform_int_distribution<int> ent(-2, 2);
    std::vector<Rat> v(size_t(m), 0);
    bool any = false;
    while (!any) {
        for (auto& e : v) {
            e = ent(rng);
            any |= (e != 0);
        }
    }
    Rat c = small_rat(rng, true);
    // omega0(e_j, v): v_{q_a} for j = p_a, -v_{p_a} for j = q_a
    std::vector<Rat> w(size_t(m), 0);
    for (int j = 0; j < n; ++j) w[size_t(j)] = v[size_t(n + j)];
    for (int j = n; j < m; ++j) w[size_t(j)] = -v[size_t(j - n)];
    std::vector<std::vector<Rat>> T(size_t(m), std::vector<Rat>(size_t(m), 0));
    for (int i = 0; i < m; ++i) {
        T[size_t(i)][size_t(i)] = 1;
        for (int j = 0; j < m; ++j) T[size_t(i)][size_t(j)] += c * w[size_t(j)] * v[size_t(i)];
    }
    std::vector<std::vector<Rat>> R(size_t(m), std::vector<Rat>(size_t(m), 0));
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            if (S[size_t(i)][size_t(k)] == 0) continue;
            for (int j = 0; j < m; ++j)
                R[size_t(i)][size_t(j)] += S[size_t(i)][size_t(k)] * T[size_t(k)][size_t(j)];
        }
    S = std::move(R);
}

// Sparse x-free jet with every term of total degree in [3, maxdeg].
Jet rand_cubic_plus(std::mt19937& rng, Chart chart, int order, int maxdeg, bool allow_y) {
    Jet j(chart, order);
    std::vector<int> vars;
    for (int i = 0; i < chart.dim(); ++i) {
        if (chart.has_x() && i == chart.x_index()) continue;
        if (!allow_y && chart.has_y() && i == chart.y_index()) continue;
        vars.push_back(i);
    }
    std::uniform_int_distribution<int> var(0, int(vars.size()) - 1);
    std::uniform_int_distribution<int> deg(3, std::max(3, maxdeg));
    std::uniform_int_distribution<int> terms(2, 4);
    int t = terms(rng);
    for (int s = 0; s < t; ++s) {
        Mono m;
        int d = deg(rng);
        for (int i = 0; i < d; ++i) m[vars[size_t(var(rng))]] += 1;
        j.add_coeff(m, small_rat(rng, true));
    }
    return j;
}

DiffeoJet random_symp_impl(std::mt19937& rng, Chart chart, int order, bool with_y_quadratics) {
    if (order < 2) throw error("random symplectomorphism: order must be >= 2");
    int n = chart.n;
    int m = 2 * n;

    std::vector<std::vector<Rat>> S(size_t(m), std::vector<Rat>(size_t(m), 0));
    for (int i = 0; i < m; ++i) S[size_t(i)][size_t(i)] = 1;
    std::uniform_int_distribution<int> ntrans(2, 5);
    int nt = ntrans(rng);
    for (int t = 0; t < nt; ++t) apply_transvection(rng, n, S);

    std::vector<Jet> comps;
    for (int i = 0; i < chart.dim(); ++i) comps.push_back(Jet::variable(chart, order, i));
    auto pq = [&](int r) { return r < n ? chart.p_index(r + 1) : chart.q_index(r - n + 1); };
    for (int r = 0; r < m; ++r) {
        Jet c(chart, order);
        for (int j = 0; j < m; ++j)
            if (S[size_t(r)][size_t(j)] != 0)
                c += Jet::variable(chart, order, pq(j), S[size_t(r)][size_t(j)]);
        comps[size_t(pq(r))] = std::move(c);
    }

    std::uniform_int_distribution<int> nflows(2, 4);
    int nf = nflows(rng);
    int maxdeg = std::min(order, 4);
    for (int t = 0; t < nf; ++t) {
        Jet g = rand_cubic_plus(rng, chart, order + 1, maxdeg, chart.has_y());
        if (with_y_quadratics) {
            // y * (linear in p,q): keeps the flow's linear part nilpotent
            Jet lin(chart, order + 1);
            for (int i = 1; i <= n; ++i) {
                lin += Jet::variable(chart, order + 1, chart.p_index(i), small_rat(rng, false));
                lin += Jet::variable(chart, order + 1, chart.q_index(i), small_rat(rng, false));
            }
            g += Jet::variable(chart, order + 1, chart.y_index()) * lin;
        }
        std::vector<Jet> V = hamiltonian_field(g);
        // right-compose the time-1 flow: (Phi o exp(V))^a = exp(V)(Phi^a)
        for (auto& c : comps) c = lie_series_apply(V, c, order);
    }

    DiffeoJet phi(chart, std::move(comps));
    if (!phi.fixes_origin())
        throw internal_error("random symplectomorphism: origin not fixed");
    if (chart.has_y() && phi.component(chart.y_index()) != Jet::variable(chart, order, chart.y_index()))
        throw internal_error("random symplectomorphism: y not preserved");
    FormJet pb = pullback(phi, darboux_form(chart, order));
    if (!(pb == darboux_form(chart, pb.order())))
        throw internal_error("random symplectomorphism: form not preserved");
    return phi;
}

}  // namespace

DiffeoJet random_isotropy_symplectomorphism(std::mt19937& rng, Chart full, int order) {
    if (!full.has_x()) throw error("random_isotropy_symplectomorphism: Full chart required");
    return random_symp_impl(rng, full, order, true);
}

DiffeoJet random_reduced_symplectomorphism(std::mt19937& rng, Chart reduced, int order) {
    if (reduced.ambient != Ambient::Reduced)
        throw error("random_reduced_symplectomorphism: Reduced chart required");
    return random_symp_impl(rng, reduced, order, false);
}

DiffeoJet random_polynomial_isotropy(std::mt19937& rng, Chart full, int order) {
    if (!full.has_x()) throw error("random_polynomial_isotropy: Full chart required");
    if (order < 4) throw error("random_polynomial_isotropy: order must be >= 4");
    int n = full.n, m = 2 * n;

    std::vector<std::vector<Rat>> S(size_t(m), std::vector<Rat>(size_t(m), 0));
    for (int i = 0; i < m; ++i) S[size_t(i)][size_t(i)] = 1;
    std::uniform_int_distribution<int> ntrans(1, 3);
    int nt = ntrans(rng);
    for (int t = 0; t < nt; ++t) apply_transvection(rng, n, S);

    std::vector<Jet> lcomps;
    for (int i = 0; i < full.dim(); ++i) lcomps.push_back(Jet::variable(full, order, i));
    auto pq = [&](int r) { return r < n ? full.p_index(r + 1) : full.q_index(r - n + 1); };
    for (int r = 0; r < m; ++r) {
        Jet c(full, order);
        for (int j = 0; j < m; ++j)
            if (S[size_t(r)][size_t(j)] != 0)
                c += Jet::variable(full, order, pq(j), S[size_t(r)][size_t(j)]);
        lcomps[size_t(pq(r))] = std::move(c);
    }
    // x -> x + c*y is symplectic and preserves y
    lcomps[size_t(full.x_index())] += Jet::variable(full, order, full.y_index(), small_rat(rng, false));
    DiffeoJet lin(full, std::move(lcomps));

    // G in y and one block only: the field components depend on variables the
    // flow keeps fixed, so the time-1 flow is exactly id + hamiltonian_field(G)
    std::uniform_int_distribution<int> coin(0, 1);
    bool use_q = coin(rng) == 1;
    std::vector<int> vars = {full.y_index()};
    for (int i = 1; i <= n; ++i) vars.push_back(use_q ? full.q_index(i) : full.p_index(i));
    std::uniform_int_distribution<int> var(0, int(vars.size()) - 1);
    std::uniform_int_distribution<int> deg(2, 3);
    std::uniform_int_distribution<int> terms(2, 4);
    Jet G(full, order + 1);
    int t = terms(rng);
    for (int s = 0; s < t; ++s) {
        Mono mo;
        int d = deg(rng);
        for (int i = 0; i < d; ++i) mo[vars[size_t(var(rng))]] += 1;
        G.add_coeff(mo, small_rat(rng, true));
    }
    std::vector<Jet> V = hamiltonian_field(G);
    std::vector<Jet> scomps;
    for (int i = 0; i < full.dim(); ++i)
        scomps.push_back(Jet::variable(full, order, i) + V[size_t(i)].truncated(order));
    DiffeoJet shear(full, std::move(scomps));

    DiffeoJet phi = shear.then_inner(lin);
    if (!phi.fixes_origin())
        throw internal_error("random_polynomial_isotropy: origin not fixed");
    if (phi.component(full.y_index()) != Jet::variable(full, order, full.y_index()))
        throw internal_error("random_polynomial_isotropy: y not preserved");
    FormJet pb = pullback(phi, darboux_form(full, order));
    if (!(pb == darboux_form(full, pb.order())))
        throw internal_error("random_polynomial_isotropy: form not preserved");
    return phi;
}

}  // namespace hamsec
