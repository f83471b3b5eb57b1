#include <doctest.h>

#include "wkmap/poly.hpp"

#include <random>

using namespace wkm;

namespace {

Poly random_poly(std::mt19937& rng, int terms) {
    static const char* names[] = {"q", "a2", "a3", "x"};
    std::uniform_int_distribution<int> c(-5, 5), e(0, 2), d(1, 4);
    Poly p;
    for (int i = 0; i < terms; ++i) {
        Poly t(rat(c(rng), d(rng)));
        for (auto n : names) t = t * Poly::var(n, e(rng));
        p += t;
    }
    return p;
}

}  // namespace

TEST_CASE("rational text form") {
    CHECK(to_string(rat(6, -4)) == "-3/2");
    CHECK(to_string(rat(0, 5)) == "0");
    CHECK(parse_rat("10/4") == rat(5, 2));
    CHECK(parse_rat("-7") == Rat(-7));
}

TEST_CASE("symbol interning splits family and index") {
    auto s = sym("sig13");
    CHECK(sym_info(s).family == "sig");
    CHECK(sym_info(s).index == 13);
    CHECK(sym("sig", 13) == s);
    CHECK(sym_info(sym("q")).index == -1);
}

TEST_CASE("basic arithmetic") {
    Poly q = Poly::var("q"), x = Poly::var("x");
    CHECK((q + x) * (q - x) == q * q - x * x);
    CHECK((q + Poly(1)) - q == Poly(1));
    CHECK((q * Rat(0)).is_zero());
    CHECK(q.pow(3) == q * q * q);
    CHECK((q.pow(-2) * q.pow(2)) == Poly(1));
    CHECK((Poly(2) * q).pow(-1) == Poly(rat(1, 2)) * q.pow(-1));
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937 rng(11);
    for (int i = 0; i < 30; ++i) {
        Poly a = random_poly(rng, 4), b = random_poly(rng, 3), c = random_poly(rng, 3);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a + b) - b == a);
    }
}

TEST_CASE("derivative and Leibniz") {
    std::mt19937 rng(5);
    auto s = sym("x");
    for (int i = 0; i < 20; ++i) {
        Poly a = random_poly(rng, 4), b = random_poly(rng, 4);
        CHECK((a * b).diff(s) == a.diff(s) * b + a * b.diff(s));
    }
    CHECK(Poly::var("x", -2).diff(s) == Poly(-2) * Poly::var("x", -3));
}

TEST_CASE("truncated multiplication by weight") {
    Grading gr;
    gr.set("x", 1).set("q", 2);
    Trunc tr{&gr, 3};
    Poly x = Poly::var("x"), q = Poly::var("q");
    Poly p = (Poly(1) + x + q).mul(Poly(1) + x + q, tr);
    Poly full = (Poly(1) + x + q) * (Poly(1) + x + q);
    CHECK(p == full.truncate(tr));
    CHECK(p.coeff(Monomial::var(sym("q"), 2)) == 0);
}

TEST_CASE("substitution is a homomorphism") {
    std::mt19937 rng(3);
    std::unordered_map<SymId, Poly> img{{sym("x"), Poly::var("q") + Poly(1)}, {sym("a2"), Poly::var("a3", 2)}};
    for (int i = 0; i < 10; ++i) {
        Poly a = random_poly(rng, 3), b = random_poly(rng, 3);
        CHECK(substitute(a * b, img) == substitute(a, img) * substitute(b, img));
    }
}

TEST_CASE("derivation from images") {
    // d x = x*q, d q = 1 ; d(x^2 q) = 2x*xq*q + x^2
    SymMap d = [](SymId s) -> Poly {
        if (s == sym("x")) return Poly::var("x") * Poly::var("q");
        if (s == sym("q")) return Poly(1);
        return Poly();
    };
    Poly p = Poly::var("x", 2) * Poly::var("q");
    CHECK(apply_derivation(p, d) == Poly(2) * Poly::var("x", 2) * Poly::var("q", 2) + Poly::var("x", 2));
    CHECK(apply_derivation(Poly::var("x", -1), d) == -Poly::var("x", -1) * Poly::var("q"));
}

TEST_CASE("print and parse round trip") {
    std::mt19937 rng(17);
    for (int i = 0; i < 30; ++i) {
        Poly a = random_poly(rng, 5) * Poly::var("V1", -2);
        CHECK(parse_poly(a.str()) == a);
    }
    CHECK(parse_poly("w3/1152 - 7/1920*w1*w2 + (l1 + 1)^2") ==
          Poly::var("w3") * rat(1, 1152) - Poly::var("w1") * Poly::var("w2") * rat(7, 1920) +
              (Poly::var("l1") + Poly(1)) * (Poly::var("l1") + Poly(1)));
    CHECK(parse_poly("0").is_zero());
}

TEST_CASE("collect groups by key symbols") {
    Poly p = parse_poly("3*x^2*q + x^2*a2 + 5*q");
    auto parts = p.collect([](SymId s) { return s == sym("x"); });
    CHECK(parts.size() == 2);
    CHECK(parts[Monomial::var(sym("x"), 2)] == parse_poly("3*q + a2"));
    CHECK(parts[Monomial()] == parse_poly("5*q"));
}
