#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hamsec/normalize.hpp"
#include "hamsec/parse.hpp"
#include "test_util.hpp"

using namespace hamsec;
using testutil::rand_jet;
using testutil::rand_rat;

namespace {
const Chart full1(1, Ambient::Full);
const Chart orb1(1, Ambient::Orbit);
const Chart red1(1, Ambient::Reduced);
const Chart full2(2, Ambient::Full);
const Chart orb2(2, Ambient::Orbit);

Jet P(const std::string& s, Chart c = full1, int order = 8) {
    return parse_polynomial(s, c, order);
}

Jet reconstruct(const std::vector<Jet>& R, int k, Chart full, int order) {
    Jet x = Jet::variable(full, order, full.x_index());
    Jet rhs = Jet::constant(full, order, 1);
    for (int t = 0; t <= k; ++t) rhs = rhs * x;
    Jet xpow = Jet::constant(full, order, 1);
    for (size_t i = 0; i < R.size(); ++i) {
        rhs += lift_chart(R[i], full) * xpow;
        xpow = xpow * x;
    }
    return rhs;
}

// random section u * (x^{k+1} + sum R_i x^i) with unit u and x-free R_i,
// R_0 carrying a linear term so the section is honestly singular of order k
Jet rand_section(std::mt19937& rng, Chart full, int k, int order) {
    Chart orbit(full.n, Ambient::Orbit);
    std::vector<Jet> R;
    for (int i = 0; i <= k; ++i) {
        Jet r = rand_jet(rng, orbit, order, 3, 3, 1);
        R.push_back(r);
    }
    R[0] += Jet::variable(orbit, order, orbit.p_index(1));
    Jet u = Jet::constant(full, order, 1) + rand_jet(rng, full, order, 3, 2, 1);
    std::vector<Jet> lifted;
    for (auto& r : R) lifted.push_back(r);
    return u * reconstruct(lifted, k, full, order);
}
}  // namespace

TEST_CASE("Weierstrass: cusp is already prepared") {
    auto w = weierstrass_prepare(P("x^3+q1*x+p1"), 2, 8);
    CHECK(w.unit == Jet::constant(full1, 8, 1));
    REQUIRE(w.R.size() == 3);
    CHECK(w.R[0] == P("p1", orb1));
    CHECK(w.R[1] == P("q1", orb1));
    CHECK(w.R[2].is_zero());
}

TEST_CASE("Weierstrass: strips a unit factor") {
    auto w = weierstrass_prepare(P("(1+x)*(x^2+y)"), 1, 8);
    CHECK(w.R[0] == P("y", orb1));
    CHECK(w.R[1].is_zero());
    // unit = 1/(1+x)
    CHECK((w.unit * P("1+x")) == Jet::constant(full1, 8, 1));
}

TEST_CASE("Weierstrass: glancing example") {
    auto w = weierstrass_prepare(P("x^2+y+p1"), 1, 8);
    CHECK(w.unit == Jet::constant(full1, 8, 1));
    CHECK(w.R[0] == P("y+p1", orb1));
    CHECK(w.R[1].is_zero());
}

TEST_CASE("Weierstrass: precondition on the pure-x valuation") {
    CHECK_THROWS_AS(weierstrass_prepare(P("x^2+y"), 2, 8), error);
    CHECK_THROWS_AS(weierstrass_prepare(P("x^4+y"), 2, 8), error);
}

TEST_CASE("Weierstrass: division identity on random sections") {
    std::mt19937 rng(41);
    for (int t = 0; t < 15; ++t) {
        Chart full(1 + t % 2, Ambient::Full);
        int k = 1 + t % 3;
        Jet h = rand_section(rng, full, k, 8);
        auto w = weierstrass_prepare(h, k, 8);
        CHECK(w.unit.eval0() != 0);
        for (auto& r : w.R) CHECK(r.eval0() == 0);
        CHECK((w.unit * h) == reconstruct(w.R, k, full, 8));
    }
}

TEST_CASE("kill_top: no-op when R_k already vanishes") {
    auto w = weierstrass_prepare(P("x^2+y+p1"), 1, 8);
    auto kt = kill_top_coefficient(w);
    CHECK(kt.shift == DiffeoJet::identity(full1, 8));
    CHECK(kt.R[0] == P("y+p1", orb1));
    CHECK(kt.omega_hat == pq_form(orb1, kt.omega_hat.order()));
}

TEST_CASE("kill_top: linear shift twists the form") {
    // (x+q1)^2 + y = x^2 + 2q1 x + q1^2 + y
    auto w = weierstrass_prepare(P("x^2+2q1*x+q1^2+y"), 1, 8);
    CHECK(w.R[1] == P("2q1", orb1));
    auto kt = kill_top_coefficient(w);
    CHECK(kt.R[0] == P("y", orb1));
    // omega_hat = dp^dq - dq1^dy = dp^dq + dy^dq1
    FormJet expect(orb1, 2, kt.omega_hat.order());
    expect.add_comp({orb1.p_index(1), orb1.q_index(1)}, Jet::constant(orb1, kt.omega_hat.order(), 1));
    expect.add_comp({orb1.y_index(), orb1.q_index(1)}, Jet::constant(orb1, kt.omega_hat.order(), 1));
    CHECK(kt.omega_hat == expect);
}

TEST_CASE("time1_flow: quadratic shear is exact") {
    std::vector<Jet> W(3, Jet::zero(orb1, 6));
    W[size_t(orb1.q_index(1))] = P("p1^2", orb1, 6);
    auto phi = time1_flow(W, 6);
    CHECK(phi.component(orb1.q_index(1)) == P("q1+p1^2", orb1, 6));
    CHECK(phi.component(orb1.p_index(1)) == P("p1", orb1, 6));
    CHECK(phi.component(orb1.y_index()) == P("y", orb1, 6));
}

TEST_CASE("time1_flow: rejects low valuation") {
    std::vector<Jet> W(3, Jet::zero(orb1, 6));
    W[0] = P("p1", orb1, 6);
    CHECK_THROWS_AS(time1_flow(W, 6), error);
}

TEST_CASE("Moser: standard form maps to the identity") {
    auto phi = moser_darboux_orbit(pq_form(orb1, 6));
    CHECK(phi == DiffeoJet::identity(orb1, phi.order()));
}

TEST_CASE("Moser: constant twist dp^dq + dy^dq") {
    FormJet w(orb1, 2, 6);
    w.add_comp({orb1.p_index(1), orb1.q_index(1)}, Jet::constant(orb1, 6, 1));
    w.add_comp({orb1.y_index(), orb1.q_index(1)}, Jet::constant(orb1, 6, 1));
    auto phi = moser_darboux_orbit(w);
    CHECK(phi.component(orb1.y_index()) == P("y", orb1, 7));
    CHECK(phi.component(orb1.p_index(1)) == P("p1+y", orb1, 7));
    CHECK(phi.component(orb1.q_index(1)) == P("q1", orb1, 7));
    CHECK(pullback(phi, pq_form(orb1, 7)) == w.truncated(6));
}

TEST_CASE("Moser: rejects a kernel tangent to the fibers") {
    // dy^dq missing: kernel of dp^dq on the orbit chart is the y-axis, but
    // swap roles so y pairs with q and p drops out
    FormJet w(orb1, 2, 6);
    w.add_comp({orb1.y_index(), orb1.q_index(1)}, Jet::constant(orb1, 6, 1));
    CHECK_THROWS_AS(moser_darboux_orbit(w), error);
}

TEST_CASE("Moser: random exact perturbations of dp^dq") {
    std::mt19937 rng(42);
    for (int t = 0; t < 12; ++t) {
        Chart orbit(1 + t % 2, Ambient::Orbit);
        int T = 6;
        FormJet beta(orbit, 1, T + 2);
        for (int v = 0; v < orbit.dim(); ++v)
            beta.add_comp({v}, rand_jet(rng, orbit, T + 2, 3, 4, 2));
        FormJet w = pq_form(orbit, T) + d(beta).truncated(T);
        auto phi = moser_darboux_orbit(w);
        FormJet back = pullback(phi, pq_form(orbit, phi.order()));
        int ord = std::min(back.order(), w.order());
        CHECK(back.truncated(ord) == w.truncated(ord));
        // fibration preserved
        CHECK(phi.component(orbit.y_index()) ==
              Jet::variable(orbit, phi.order(), orbit.y_index()));
    }
}

TEST_CASE("reduce_to_preliminary: glancing example is a fixed point") {
    auto pre = reduce_to_preliminary(P("x^2+y+p1"), 6);
    CHECK(pre.k == 1);
    REQUIRE(pre.R.size() == 1);
    CHECK(pre.R[0] == P("y+p1", orb1));
    CHECK(pre.transform == DiffeoJet::identity(full1, pre.transform.order()));
    CHECK(pre.unit == Jet::constant(full1, pre.unit.order(), 1));
}

TEST_CASE("reduce_to_preliminary: cusp example is a fixed point") {
    auto pre = reduce_to_preliminary(P("x^3+q1*x+p1"), 6);
    CHECK(pre.k == 2);
    CHECK(pre.R[0] == P("p1", orb1));
    CHECK(pre.R[1] == P("q1", orb1));
    CHECK(pre.transform == DiffeoJet::identity(full1, pre.transform.order()));
}

TEST_CASE("reduce_to_preliminary: rejects nonsingular and exhausted input") {
    CHECK_THROWS_AS(reduce_to_preliminary(P("x+y"), 6), error);
    CHECK_THROWS_AS(reduce_to_preliminary(P("y+p1"), 6), error);
}

TEST_CASE("reduce_to_preliminary: random sections, full invariant suite") {
    std::mt19937 rng(43);
    for (int t = 0; t < 10; ++t) {
        Chart full(1 + t % 2, Ambient::Full);
        int k = 1 + t % 2;
        int N = 6;
        Jet h = rand_section(rng, full, k, N + 2);
        auto pre = reduce_to_preliminary(h, N);
        CHECK(pre.k == k);
        CHECK(pre.valid_order >= N);
        // the internal checks already enforce the invariants; recheck the
        // reconstruction independently here
        Jet lhs = pre.unit * pre.transform.apply(h);
        Jet rhs = assemble_section(pre.R, k, lhs.order());
        int ord = std::min({lhs.order(), rhs.order(), pre.valid_order});
        CHECK(lhs.truncated(ord) == rhs.truncated(ord));
        // classifier invariance across the reduction
        auto before = classify_section(h, N);
        auto after = classify_section(assemble_section(pre.R, k, N + 2), N);
        CHECK(before.tag == after.tag);
        CHECK(before.k == after.k);
        if (before.tag == SingTag::Skl) CHECK(before.l == after.l);
    }
}

TEST_CASE("reduce_to_preliminary: idempotent on normalized input") {
    std::mt19937 rng(44);
    for (int t = 0; t < 6; ++t) {
        Chart full(1 + t % 2, Ambient::Full);
        Chart orbit(full.n, Ambient::Orbit);
        int k = 1 + t % 2;
        std::vector<Jet> R;
        for (int i = 0; i < k; ++i) R.push_back(rand_jet(rng, orbit, 8, 3, 3, 1));
        R[0] += Jet::variable(orbit, 8, orbit.p_index(1));
        Jet h = assemble_section(R, k, 8);
        auto pre = reduce_to_preliminary(h, 6);
        CHECK(pre.transform == DiffeoJet::identity(full, pre.transform.order()));
        for (int i = 0; i < k; ++i)
            CHECK(pre.R[size_t(i)].truncated(6) == R[size_t(i)].truncated(6));
    }
}

TEST_CASE("reduce_A1: definite and hyperbolic Morse models") {
    auto a = reduce_A1(P("x^2+p1^2+q1^2+y"), 6);
    CHECK(a.phi == Jet::constant(orb1, a.phi.order(), 1));
    CHECK(a.psi == P("p1^2+q1^2", red1));
    CHECK(a.psi_signature.pos == 2);
    CHECK(a.psi_signature.neg == 0);

    auto b = reduce_A1(P("x^2+p1*q1+y+y^2"), 6);
    CHECK(b.psi == P("p1*q1", red1));
    CHECK(b.psi_signature.pos == 1);
    CHECK(b.psi_signature.neg == 1);
    CHECK(b.phi.eval0() == 1);
}

TEST_CASE("reduce_A1: rejects other classes") {
    CHECK_THROWS_AS(reduce_A1(P("x^2+y+p1"), 6), error);      // S(1,1)
    CHECK_THROWS_AS(reduce_A1(P("x^2+y+y*p1"), 6), error);    // degenerate
}

TEST_CASE("reduce_A1: n=2 mixed signature with a unit in front") {
    Jet h = P("(1+x+y)*(x^2+p1^2-q1^2+p2*q2+y)", full2);
    auto a = reduce_A1(h, 6);
    CHECK(a.psi_signature.pos + a.psi_signature.neg == 4);
    CHECK(a.psi_signature.zero == 0);
    CHECK(a.psi_signature.pos == 2);
    CHECK(a.psi_signature.neg == 2);
    // reconstruction: unit * (h o T) = x^2 + psi + phi*y
    Jet lhs = a.unit * a.transform.apply(h);
    Chart full = full2;
    Jet rhs = Jet::variable(full, lhs.order(), full.x_index()) *
              Jet::variable(full, lhs.order(), full.x_index());
    rhs += lift_chart(lift_chart(a.psi, orb2), full);
    rhs += lift_chart(a.phi, full) * Jet::variable(full, lhs.order(), full.y_index());
    int ord = std::min({lhs.order(), rhs.order(), a.valid_order});
    CHECK(lhs.truncated(ord) == rhs.truncated(ord));
}

TEST_CASE("normal-form conditions hold on pipeline output") {
    std::mt19937 rng(45);
    int done = 0;
    while (done < 6) {
        Chart full(1 + done % 2, Ambient::Full);
        int k = 1 + done % 2;
        Jet h = rand_section(rng, full, k, 8);
        auto cls = classify_section(h, 6);
        if (cls.tag != SingTag::Skl) continue;  // need transversality for ctr'
        auto pre = reduce_to_preliminary(h, 6);
        auto rep = check_normal_form_conditions(pre.R, pre.k);
        CHECK(rep.ok());
        REQUIRE(rep.classifier_l.has_value());
        CHECK(*rep.classifier_l == cls.l);
        if (pre.k == 1 || cls.l < pre.k) {
            REQUIRE(rep.l.has_value());
            CHECK(*rep.l == cls.l);
        }
        ++done;
    }
}

TEST_CASE("coefficient chain blind spot at l >= k is reported, not fatal") {
    // x^3 + p1*x + y + p1 is S(2,2) yet every {R_0,R_1}_i(0) vanishes: the
    // x^3 term injects a (d_y R_0(0))^2 contribution into {h,f}_2(0)
    CHECK(classify_section(P("x^3+p1*x+y+p1"), 6).tag == SingTag::Skl);
    CHECK(classify_section(P("x^3+p1*x+y+p1"), 6).l == 2);
    std::vector<Jet> R{P("y+p1", orb1), P("p1", orb1)};
    auto rep = check_normal_form_conditions(R, 2);
    CHECK(rep.ok());
    CHECK(!rep.l.has_value());
    REQUIRE(rep.classifier_l.has_value());
    CHECK(*rep.classifier_l == 2);
    CHECK(!rep.identities_agree);
}
