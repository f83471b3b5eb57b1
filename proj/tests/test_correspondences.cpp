#include "wkmap/correspondences.hpp"

#include <doctest.h>

using namespace wkm;

namespace {

Poly P(const char* s) { return parse_poly(s); }

Rat coeff(const Poly& p, const char* mono) { return p.coeff(P(mono).terms().at(0).first); }

}  // namespace

TEST_CASE("GUE quadratic series") {
    Poly a = gue_quadratic(4);
    CHECK(coeff(a, "x*s1") == 2);
    CHECK(coeff(a, "s1*s2") == 8);
    // A(x, s) vanishes at s = (1/2, 0, ...)
    CHECK(substitute(a, {{sym("s1"), Poly(rat(1, 2))}, {sym("s2"), Poly()}, {sym("s3"), Poly()}, {sym("s4"), Poly()}})
              .is_zero());
    CHECK(substitute(a, {{sym("s1"), Poly()}, {sym("s2"), Poly()}, {sym("s3"), Poly()}, {sym("s4"), Poly()}}) ==
          P("1/4 - x"));
}

TEST_CASE("BGW quadratic series at r = 0") {
    Poly a = bgw_quadratic(3);
    Poly z = substitute(a, {{sym("r0"), Poly()}, {sym("r1"), Poly()}, {sym("r2"), Poly()}, {sym("r3"), Poly()}});
    CHECK(z == P("x + 1/2"));
}

TEST_CASE("coordinates at the origin reduce to f_m, g_m and the dilaton shift") {
    auto zero_s = [](const Poly& p) {
        return substitute(p, {{sym("s1"), Poly()}, {sym("s2"), Poly()}, {sym("s3"), Poly()}});
    };
    CHECK(zero_s(gue_coordinate(0, 3)) == P("x - 1"));
    CHECK(zero_s(gue_coordinate(1, 3)) == P("x/2 - 1/2"));
    CHECK(zero_s(gue_coordinate(2, 3)) == P("3/4*x - 15/4"));
    CHECK(zero_s(gue_coordinate(3, 3)) == P("15/8*x - 105/8"));
    // C(3/2, 1) 2^3
    CHECK(gue_coordinate(0, 2).diff(sym("s2")) == Poly(12));
    CHECK(bgw_coordinate(0, 0) == P("x + 2 - 2*r0"));
    CHECK(bgw_coordinate(1, 0) == P("x/2 + 1"));
    CHECK(bgw_coordinate(2, 3) == P("3/4*x - 2*r2 - 2*r3"));
    CHECK(bgw_coordinate(1, 2) == P("x/2 + 1 + 2*r1 + 2*r2"));
}

TEST_CASE("B(x, eps) expansion coefficients") {
    CHECK(gue_b_coefficient(2) == rat(-53, 3840));
    CHECK(gue_b_coefficient(3) == rat(599, 64512));
}

TEST_CASE("GUE targets: leading values") {
    CHECK(correspondence_target(Correspondence::gue, 0, 3) == YSeries{rat(-3, 4), Rat(-1), Rat(0), rat(1, 6)});
    CHECK(correspondence_target(Correspondence::gue, 1, 2) == YSeries{Rat(0), rat(-5, 48), rat(5, 96)});
    CHECK(correspondence_target(Correspondence::gue, 2, 0) == YSeries{rat(-53, 7680)});
}

TEST_CASE("GUE sectors through (x-1)^5, genus <= 2") {
    auto rep = verify_correspondence(Correspondence::gue, 5, 2);
    CHECK(rep.sectors.size() == 6);
    for (auto& s : rep.sectors) {
        CHECK_MESSAGE(s.closed_form == s.target, s.name);
        CHECK_MESSAGE(s.direct == s.target, s.name);
    }
    CHECK(rep.pass());
}

TEST_CASE("GUE genus three, low order") {
    auto rep = verify_correspondence(Correspondence::gue, 2, 3);
    CHECK(rep.pass());
}

TEST_CASE("BGW sectors through (x+2)^5, genus <= 2") {
    auto rep = verify_correspondence(Correspondence::bgw, 5, 2);
    CHECK(rep.sectors.size() == 3);
    for (auto& s : rep.sectors) {
        CHECK_MESSAGE(s.closed_form == s.target, s.name);
        CHECK_MESSAGE(s.direct == s.target, s.name);
    }
    // -1/(120 x^2) at x = -2
    CHECK(rep.sectors[2].target[0] == rat(-1, 480));
}

TEST_CASE("a wrong target is detected") {
    auto rep = verify_correspondence(Correspondence::bgw, 3, 1);
    rep.sectors[1].target[2] += 1;
    CHECK_FALSE(rep.pass());
}
