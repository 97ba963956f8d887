#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hamsec/poisson.hpp"
#include "hamsec/form.hpp"
#include "hamsec/parse.hpp"
#include "test_util.hpp"

using namespace hamsec;
using testutil::rand_jet;

namespace {
const Chart full1(1, Ambient::Full);
const Chart red1(1, Ambient::Reduced);

Jet P(const std::string& s, Chart c = full1, int order = 6) {
    return parse_polynomial(s, c, order);
}
}  // namespace

TEST_CASE("bracket convention anchors") {
    // {y, .} = d/dx
    CHECK(bracket(P("y"), P("x^2+y+p1")) == P("2x", full1, 5));
    Jet a = P("x^2 + y*q1");
    CHECK(bracket(a, a).is_zero());
    CHECK(bracket(P("x^2+y+p1"), P("x")) == P("1", full1, 5));
}

TEST_CASE("hamiltonian fields") {
    auto Zy = hamiltonian_field(P("y"));
    CHECK(Zy[size_t(full1.x_index())] == P("1", full1, 5));
    CHECK(Zy[size_t(full1.y_index())].is_zero());
    CHECK(Zy[size_t(full1.p_index(1))].is_zero());
    CHECK(Zy[size_t(full1.q_index(1))].is_zero());

    auto Zp = hamiltonian_field(P("p1", red1));
    CHECK(Zp[size_t(red1.q_index(1))] == P("-1", red1, 5));
    CHECK(Zp[size_t(red1.p_index(1))].is_zero());

    auto Zx = hamiltonian_field(P("x"));
    CHECK(Zx[size_t(full1.y_index())] == P("-1", full1, 5));
}

TEST_CASE("Z_a interior omega = da") {
    std::mt19937 rng(31);
    for (int t = 0; t < 20; ++t) {
        Chart c(1 + t % 2, t % 3 == 0 ? Ambient::Reduced : Ambient::Full);
        Jet a = rand_jet(rng, c, 5, 6, 4);
        if (a.order() < 1) continue;
        FormJet da(c, 1, a.order() - 1);
        for (int v = 0; v < c.dim(); ++v) da.add_comp({v}, partial(a, v));
        FormJet iw = interior(hamiltonian_field(a), darboux_form(c, a.order() - 1));
        // on Orbit charts omega has no dx^dy block, so compare only there
        if (c.ambient != Ambient::Orbit) CHECK(iw == da);
    }
}

TEST_CASE("iterated brackets on the glancing example") {
    Jet f = P("y"), h = P("x^2+y+p1");
    CHECK(iterated_fh(f, h, 0) == P("2x", full1, 5));
    CHECK(iterated_fh(f, h, 1) == P("2", full1, 4));
    CHECK(iterated_fh(f, h, 1).eval0() == 2);
    CHECK(iterated_hf(h, f, 1).eval0() == -2);
}

TEST_CASE("iterated brackets on the cusp example") {
    Jet f = P("y"), h = P("x^3+q1*x+p1");
    CHECK(iterated_fh(f, h, 2).eval0() == 6);
    CHECK(iterated_fh(f, h, 0) == P("3x^2+q1", full1, 5));
    CHECK(iterated_hf(h, f, 0) == -iterated_fh(f, h, 0));
}

TEST_CASE("bracket algebra on random jets") {
    std::mt19937 rng(32);
    for (int t = 0; t < 30; ++t) {
        Chart c(1 + t % 2, Ambient::Full);
        Jet a = rand_jet(rng, c, 4, 5, 4);
        Jet b = rand_jet(rng, c, 4, 5, 4);
        Jet g = rand_jet(rng, c, 4, 5, 4);
        CHECK(bracket(a, b) == -bracket(b, a));
        // Leibniz
        Jet lhs = bracket(a, b * g);
        Jet rhs = bracket(a, b) * g + b * bracket(a, g);
        int ord = std::min(lhs.order(), rhs.order());
        CHECK(lhs.truncated(ord) == rhs.truncated(ord));
        // Jacobi
        Jet jac = bracket(a, bracket(b, g)) + bracket(b, bracket(g, a)) + bracket(g, bracket(a, b));
        CHECK(jac.is_zero());
    }
}

TEST_CASE("order bookkeeping is strict") {
    Jet a = P("x", full1, 1);
    Jet b = P("y", full1, 1);
    CHECK(bracket(a, b).order() == 0);
    Jet c0 = Jet::constant(full1, 0, 1);
    CHECK_THROWS_AS(bracket(c0, c0), order_exhausted);
    CHECK_THROWS_AS(iterated_fh(P("y", full1, 2), P("x^2", full1, 2), 2), order_exhausted);
}

TEST_CASE("bracket scans") {
    auto s = first_nonvanishing_fh(P("y"), P("x^2+y+p1"), 5);
    REQUIRE(s.index.has_value());
    CHECK(*s.index == 1);
    CHECK(s.witness == 2);

    // x^4 truncates to zero under a short f jet before any nonzero witness
    // can appear; the scan must refuse to claim anything
    auto u = first_nonvanishing_fh(P("y", full1, 3), P("x^4", full1, 4), 6);
    CHECK(!u.index.has_value());
    CHECK(u.exhausted_at <= 4);
}

TEST_CASE("flow tangency oracle on the worked examples") {
    CHECK(flow_tangency_oracle(P("y"), P("x^2+y+p1"), 6) == 1);
    CHECK(flow_tangency_oracle(P("y"), P("x^3+q1*x+p1"), 6) == 2);
    CHECK(flow_tangency_oracle(P("x^2+y+p1"), P("y"), 6) == 1);
}

TEST_CASE("oracle agrees with the bracket route") {
    std::mt19937 rng(33);
    int checked = 0;
    while (checked < 40) {
        Chart c(1 + checked % 2, Ambient::Full);
        Jet gen = rand_jet(rng, c, 8, 4, 3, 1);
        Jet tgt = rand_jet(rng, c, 8, 4, 3, 1);
        if (gen.is_zero() || tgt.is_zero()) continue;
        auto oracle = flow_tangency_oracle(gen, tgt, 5);
        auto scan = first_nonvanishing_fh(gen, tgt, 5);
        if (!oracle.has_value() || !scan.index.has_value()) continue;
        CHECK(*oracle == *scan.index);
        ++checked;
    }
}
