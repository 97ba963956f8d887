#include "hamsec/poisson.hpp"

namespace hamsec {

Jet bracket(const Jet& a, const Jet& b) {
    if (a.chart() != b.chart()) throw error("bracket: chart mismatch");
    if (a.order() < 1 || b.order() < 1)
        throw order_exhausted("bracket: jet order exhausted");
    Chart c = a.chart();
    int ord = std::min(a.order(), b.order()) - 1;
    Jet r(c, ord);
    if (c.has_x()) {
        r += partial(a, c.y_index()) * partial(b, c.x_index());
        r -= partial(a, c.x_index()) * partial(b, c.y_index());
    }
    for (int i = 1; i <= c.n; ++i) {
        r += partial(a, c.q_index(i)) * partial(b, c.p_index(i));
        r -= partial(a, c.p_index(i)) * partial(b, c.q_index(i));
    }
    return r.truncated(ord);
}

std::vector<Jet> hamiltonian_field(const Jet& a) {
    Chart c = a.chart();
    if (a.order() < 1) throw order_exhausted("hamiltonian_field: jet order exhausted");
    std::vector<Jet> V(size_t(c.dim()), Jet::zero(c, a.order() - 1));
    if (c.has_x()) {
        V[size_t(c.x_index())] = partial(a, c.y_index());
        V[size_t(c.y_index())] = -partial(a, c.x_index());
    }
    for (int i = 1; i <= c.n; ++i) {
        V[size_t(c.p_index(i))] = partial(a, c.q_index(i));
        V[size_t(c.q_index(i))] = -partial(a, c.p_index(i));
    }
    return V;
}

Jet iterated_fh(const Jet& f, const Jet& h, int i) {
    if (i < 0) throw error("iterated_fh: negative index");
    Jet g = h;
    for (int j = 0; j <= i; ++j) g = bracket(f, g);
    return g;
}

Jet iterated_hf(const Jet& h, const Jet& f, int i) {
    return iterated_fh(h, f, i);
}

namespace {

BracketScan scan(const Jet& gen, const Jet& target, int max_i) {
    BracketScan out{std::nullopt, 0, 0};
    Jet g = target;
    for (int i = 0; i <= max_i; ++i) {
        try {
            g = bracket(gen, g);
        } catch (const order_exhausted&) {
            out.exhausted_at = i;
            return out;
        }
        Rat v = g.eval0();
        if (v != 0) {
            out.index = i;
            out.witness = v;
            out.exhausted_at = i + 1;
            return out;
        }
    }
    out.exhausted_at = max_i + 1;
    return out;
}

}  // namespace

BracketScan first_nonvanishing_fh(const Jet& f, const Jet& h, int max_i) {
    return scan(f, h, max_i);
}

BracketScan first_nonvanishing_hf(const Jet& h, const Jet& f, int max_i) {
    return scan(h, f, max_i);
}

std::optional<int> flow_tangency_oracle(const Jet& generator, const Jet& target, int maxorder) {
    if (generator.chart() != target.chart()) throw error("flow_tangency_oracle: chart mismatch");
    Chart c = generator.chart();
    int dim = c.dim();
    int M = maxorder + 1;  // need t-coefficients of target(c(t)) through t^M

    // univariate t-polynomials truncated at degree M
    using TPoly = std::vector<Rat>;
    auto tmul = [&](const TPoly& a, const TPoly& b) {
        TPoly r(size_t(M) + 1, 0);
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j + i <= size_t(M) && j < b.size(); ++j)
                if (b[j] != 0) r[i + j] += a[i] * b[j];
        }
        return r;
    };
    auto eval_jet = [&](const Jet& a, const std::vector<TPoly>& curve) {
        TPoly r(size_t(M) + 1, 0);
        for (auto& [m, coef] : a.coeffs()) {
            TPoly term(size_t(M) + 1, 0);
            term[0] = coef;
            for (int v = 0; v < dim; ++v)
                for (int e = 0; e < m[v]; ++e) term = tmul(term, curve[size_t(v)]);
            for (size_t j = 0; j <= size_t(M); ++j) r[j] += term[j];
        }
        return r;
    };

    std::vector<Jet> V = hamiltonian_field(generator);
    std::vector<TPoly> curve(size_t(dim), TPoly(size_t(M) + 1, 0));
    // Picard: (m+1) c_{m+1} = [t^m] V(c(t)); coefficients up to t^m only
    // depend on curve coefficients up to t^m, so one sweep per degree.
    for (int m = 0; m < M; ++m) {
        for (int v = 0; v < dim; ++v) {
            TPoly rhs = eval_jet(V[size_t(v)], curve);
            curve[size_t(v)][size_t(m) + 1] = rhs[size_t(m)] / (m + 1);
        }
    }
    TPoly vals = eval_jet(target, curve);
    for (int j = 0; j <= M; ++j)
        if (vals[size_t(j)] != 0) return j - 1;
    return std::nullopt;
}

}  // namespace hamsec
