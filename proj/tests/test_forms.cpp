#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hamsec/form.hpp"
#include "hamsec/parse.hpp"
#include "test_util.hpp"

using namespace hamsec;
using testutil::rand_diffeo;
using testutil::rand_jet;

namespace {
const Chart full1(1, Ambient::Full);
const Chart orbit1(1, Ambient::Orbit);
const Chart red1(1, Ambient::Reduced);

FormJet rand_form(std::mt19937& rng, Chart c, int degree, int order) {
    FormJet f(c, degree, order);
    std::uniform_int_distribution<int> var(0, c.dim() - 1);
    for (int t = 0; t < 4; ++t) {
        FormJet::Key key;
        for (int i = 0; i < degree; ++i) key.push_back(var(rng));
        f.add_comp(std::move(key), rand_jet(rng, c, order, 3, order));
    }
    return f;
}
}  // namespace

TEST_CASE("d of p1 dq1") {
    FormJet a(orbit1, 1, 4);
    a.add_comp({orbit1.q_index(1)}, parse_polynomial("p1", orbit1, 4));
    FormJet expect(orbit1, 2, 3);
    expect.add_comp({orbit1.p_index(1), orbit1.q_index(1)}, parse_polynomial("1", orbit1, 3));
    CHECK(d(a) == expect);
}

TEST_CASE("interior of the x field with dx^dy") {
    FormJet w(full1, 2, 4);
    w.add_comp({full1.x_index(), full1.y_index()}, parse_polynomial("1", full1, 4));
    std::vector<Jet> dx(size_t(full1.dim()), Jet::zero(full1, 4));
    dx[size_t(full1.x_index())] = parse_polynomial("1", full1, 4);
    FormJet got = interior(dx, w);
    FormJet expect(full1, 1, 4);
    expect.add_comp({full1.y_index()}, parse_polynomial("1", full1, 4));
    CHECK(got == expect);
}

TEST_CASE("pullback of dp^dq by a shear") {
    std::vector<Jet> comps{parse_polynomial("y", orbit1, 4), parse_polynomial("p1+y", orbit1, 4),
                           parse_polynomial("q1", orbit1, 4)};
    DiffeoJet phi(orbit1, comps);
    FormJet got = pullback(phi, pq_form(orbit1, 4));
    FormJet expect(orbit1, 2, 3);
    expect.add_comp({orbit1.p_index(1), orbit1.q_index(1)}, parse_polynomial("1", orbit1, 3));
    expect.add_comp({orbit1.y_index(), orbit1.q_index(1)}, parse_polynomial("1", orbit1, 3));
    CHECK(got == expect);
}

TEST_CASE("rank and closedness") {
    CHECK(rank_at_origin(pq_form(red1, 4)) == 2);
    CHECK(is_closed(pq_form(red1, 4)));

    FormJet w = pq_form(orbit1, 4);
    w.add_comp({orbit1.y_index(), orbit1.q_index(1)}, parse_polynomial("1", orbit1, 4));
    CHECK(rank_at_origin(w) == 2);
    CHECK(is_closed(w));

}

TEST_CASE("a non-closed scaled symplectic form") {
    FormJet w(orbit1, 2, 4);
    w.add_comp({orbit1.p_index(1), orbit1.q_index(1)}, parse_polynomial("1+y", orbit1, 4));
    CHECK(!is_closed(w));
    CHECK_THROWS_AS(homotopy_primitive(w), error);
}

TEST_CASE("homotopy primitives of the worked forms") {
    // dy^dq -> y dq
    FormJet a(orbit1, 2, 4);
    a.add_comp({orbit1.y_index(), orbit1.q_index(1)}, parse_polynomial("1", orbit1, 4));
    // the radial primitive of dy^dq is (y dq - q dy)/2; any primitive is fine
    FormJet b = homotopy_primitive(a);
    CHECK(d(b) == a.truncated(d(b).order()));

    // 2y dy -> y^2
    FormJet c(orbit1, 1, 4);
    c.add_comp({orbit1.y_index()}, parse_polynomial("2*y", orbit1, 4));
    FormJet pc = homotopy_primitive(c);
    CHECK(pc.comp({}) == parse_polynomial("y^2", orbit1, 5));

    // dp^dq -> any primitive
    FormJet pr = homotopy_primitive(pq_form(red1, 4));
    CHECK(d(pr) == pq_form(red1, 4));
}

TEST_CASE("d squared is zero") {
    std::mt19937 rng(21);
    for (int t = 0; t < 30; ++t) {
        Chart c(1 + t % 2, t % 3 == 0 ? Ambient::Reduced : Ambient::Full);
        FormJet a = rand_form(rng, c, t % 2, 4);
        CHECK(d(d(a)).is_zero());
    }
}

TEST_CASE("pullback naturality and functoriality") {
    std::mt19937 rng(22);
    for (int t = 0; t < 25; ++t) {
        Chart c(1, Ambient::Full);
        FormJet a = rand_form(rng, c, 1 + t % 2, 5);
        DiffeoJet phi = rand_diffeo(rng, c, 5);
        DiffeoJet psi = rand_diffeo(rng, c, 5);
        FormJet lhs = pullback(phi, d(a));
        FormJet rhs = d(pullback(phi, a));
        int ord = std::min(lhs.order(), rhs.order());
        CHECK(lhs.truncated(ord) == rhs.truncated(ord));

        FormJet f1 = pullback(phi.then_inner(psi), a);
        FormJet f2 = pullback(psi, pullback(phi, a));
        int ord2 = std::min(f1.order(), f2.order());
        CHECK(f1.truncated(ord2) == f2.truncated(ord2));
    }
}

TEST_CASE("pullback by identity") {
    std::mt19937 rng(23);
    FormJet a = rand_form(rng, full1, 2, 4);
    FormJet got = pullback(DiffeoJet::identity(full1, 4), a);
    CHECK(got == a.truncated(got.order()));
}

TEST_CASE("homotopy inverts d on random closed forms") {
    std::mt19937 rng(24);
    for (int t = 0; t < 25; ++t) {
        Chart c(1 + t % 2, Ambient::Full);
        FormJet beta = rand_form(rng, c, t % 2 ? 1 : 0, 5);
        FormJet a = d(beta);  // closed by construction
        if (a.is_zero()) continue;
        FormJet prim = homotopy_primitive(a);
        CHECK(d(prim) == a.truncated(d(prim).order()));
    }
}
