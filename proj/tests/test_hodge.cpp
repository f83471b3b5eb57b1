#include "wkmap/hodge.hpp"
#include "wkmap/loopeq.hpp"

#include <doctest.h>

using namespace wkm;

TEST_CASE("bernoulli numbers") {
    CHECK(bernoulli(0) == 1);
    CHECK(bernoulli(1) == rat(-1, 2));
    CHECK(bernoulli(2) == rat(1, 6));
    CHECK(bernoulli(3) == 0);
    CHECK(bernoulli(4) == rat(-1, 30));
    CHECK(bernoulli(6) == rat(1, 42));
    CHECK(bernoulli(12) == rat(-691, 2730));
}

TEST_CASE("special sigma values") {
    Poly q = Poly::var("q");
    auto s = special_sigma(q, 4);
    CHECK(s[1] == q * Rat(3));
    CHECK(s[3] == q.pow(3) * Rat(30));
    CHECK(s[5] == q.pow(5) * Rat(1512));
    CHECK(s[7] == q.pow(7) * Rat(183600));
    CHECK(s[9].is_zero());
}

TEST_CASE("fp transform at sigma = 0 is WK") {
    HodgeParams zero;
    auto F = fp_transform(5, 2, zero, 3);
    for (int g = 0; g <= 2; ++g) CHECK(F[g] == free_energy_wk(g, 5));
}

TEST_CASE("fp transform: genus zero is sigma independent, dilaton holds") {
    auto s = symbolic_sigma(2);
    auto F = fp_transform(5, 3, s, 3);
    CHECK(F[0] == free_energy_wk(0, 5));
    for (auto& r : dilaton_residual(F, 5)) CHECK(r.is_zero());
    CHECK(F[1].coeff(Monomial::var(sym("t0")) * Monomial::var(sym("sig1"))) == rat(1, 24));
}

TEST_CASE("genus-one Hodge free energy in jet form") {
    CHECK(hodge_genus_one_residual(6, symbolic_sigma(1)).is_zero());
    CHECK(hodge_genus_one_residual(6, special_sigma(Poly::var("q"), 1)).is_zero());
}

TEST_CASE("genus-two Hodge jet polynomial reduces to WK at sigma = 0") {
    Poly P = hodge_jet_polynomial(2);
    Poly at0 = P.filter([](const Monomial& m) {
        for (auto& [s, e] : m.factors())
            if (sym_info(s).family == "sig") return false;
        return true;
    });
    CHECK(at0 == wk_jet_polynomial(2));
    CHECK(P.contains(sym("sig1")));
    CHECK(P.contains(sym("sig3")));
    for (auto& [m, c] : P.terms()) {
        CHECK_FALSE(m.exponent(sym("v0")) != 0);
        CHECK(sigma_grading().weight(m) <= 3);
    }
}

TEST_CASE("Hodge-WK correspondence for the special element") {
    auto rep = verify_hodge_wk(3, 2, 3);
    REQUIRE(rep.residual.size() == 3);
    for (auto& r : rep.residual) CHECK(r.str() == "0");
}

TEST_CASE("q-sigma relations on the special element") {
    Poly q = Poly::var("q");
    auto r = q_from_sigma(special_sigma(q, 3));
    const auto& tbl = special_q_table();
    CHECK(r.q1 == q * tbl[0]);
    CHECK(r.q2 == q.pow(3) * tbl[1]);
    CHECK(r.q3.is_zero());
    CHECK(tbl[2] == 0);
    CHECK(r.q2 == r.q1.pow(3) * rat(6400, 3));
}
