#include "wkmap/hierarchy.hpp"

#include <doctest.h>

using namespace wkm;

namespace {

Poly P(const char* s) { return parse_poly(s); }

const QuasiMiura& wk2() {
    static const QuasiMiura q = quasi_miura(2);
    return q;
}

const QuasiMiura& hodge2() {
    static const QuasiMiura q = quasi_miura(2, MappingFamily::hodge);
    return q;
}

// phi = id: l_k -> 0, sq -> 1, phi^{(k)} -> delta_{k,1}
Poly at_identity(const Poly& p) {
    return substitute(p, [](SymId s, int) -> std::optional<Poly> {
        const auto& i = sym_info(s);
        if (i.family == "l") return Poly();
        if (i.name == "sq") return Poly(1);
        return std::nullopt;
    });
}

LocalOperator normal(const LocalOperator& x) {
    LocalOperator r;
    for (auto& [j, c] : x.a) {
        Poly n = ph_to_ell(c);
        if (!n.is_zero()) r.a[j] = n;
    }
    return r;
}

}  // namespace

TEST_CASE("quasi-Miura map: leading terms and inverse") {
    const JetRing& R = hierarchy_ring();
    auto parts = eps_coefficients(wk2().forward, 2);
    CHECK(parts[0].is_zero());
    CHECK(parts[1] == R.d_total(P("1/24*V2*V1^-1 + 1/16*l1*V1")));
    auto q3 = quasi_miura(3);
    // V + B(V) + Delta(V + B(V)) = V
    Poly back = q3.forward + taylor_shift(q3.inverse, q3.forward, 3);
    CHECK(back.truncate(eps_trunc(3)).is_zero());
}

TEST_CASE("taylor shift agrees with direct substitution on polynomials") {
    Poly p = P("V0^2*V1 + V2^2");
    Poly d = P("eps^2*V1");
    Poly direct = substitute(p, {{sym("V0"), P("V0 + eps^2*V1")}, {sym("V1"), P("V1 + eps^2*V2")},
                                 {sym("V2"), P("V2 + eps^2*V3")}});
    CHECK(taylor_shift(p, d, 3) == direct);
}

TEST_CASE("first flow through eps^4") {
    auto f = specialize_flow(flow(wk2()), P("V0"));
    CHECK(f[0] == P("V0*V1"));
    CHECK(f[1] == P("1/12*V3 + 1/8*l1*V1*V2 + 1/16*l2*V1^3"));
    Poly e4 = P("1/480*l1*V5 + (7/480*l2 + 1/320*l1^2)*V4*V1 + (1/48*l2 + 1/64*l1^2)*V3*V2"
                " + (9/320*l3 + 37/960*l1*l2 + 1/1440*l1^3)*V3*V1^2"
                " + (17/480*l3 + 37/480*l1*l2 + 1/720*l1^3)*V2^2*V1"
                " + (5/192*l4 + 61/960*l1*l3 + 137/1920*l2^2 + 1/192*l1^2*l2)*V2*V1^3"
                " + (1/384*l5 + 1/128*l1*l4 + 7/256*l2*l3 + 1/1280*l1^2*l3 + 1/640*l1*l2^2)*V1^5");
    CHECK(f[2] == e4);
    for (int g = 1; g <= 2; ++g)
        for (auto& [m, c] : f[g].terms()) CHECK(c > 0);
}

TEST_CASE("general S flow at eps^2 and the KdV reduction") {
    auto f = flow(wk2());
    CHECK(f[1] == P("1/12*S1*V3 + (1/6*S2 + 1/8*S1*l1)*V1*V2 + (1/24*S3 + 1/16*S2*l1 + 1/16*S1*l2)*V1^3"));
    CHECK(at_identity(f[1]) == P("1/12*S1*V3 + 1/6*S2*V1*V2 + 1/24*S3*V1^3"));
    CHECK(at_identity(f[2]) == P("1/240*S2*V5 + 1/80*S3*V4*V1 + 1/48*S3*V3*V2 + 23/1440*S4*V3*V1^2"
                                 " + 31/1440*S4*V2^2*V1 + 1/90*S5*V2*V1^3 + 1/1152*S6*V1^5"));
}

TEST_CASE("polynomiality through eps^6") {
    auto q3 = quasi_miura(3);
    auto f = flow(q3);
    for (int g = 0; g <= 3; ++g) CHECK_FALSE(has_negative_v1_power(f[g]));
    CHECK(has_negative_v1_power(q3.forward));
}

TEST_CASE("flows commute") {
    auto c = flow_commutator(wk2(), P("V0"), P("1/2*V0^2"));
    for (auto& p : c) CHECK(p.is_zero());
}

TEST_CASE("divergence form of the flows") {
    auto f = flow(wk2());
    auto h = divergence_density(f);
    const JetRing& R = hierarchy_ring();
    CHECK(h[0] == P("Sint"));
    for (int g = 0; g <= 2; ++g) CHECK(R.d_total(h[g]) == f[g]);
    // phi = id, S = u
    auto hk = divergence_density(specialize_flow({at_identity(f[0]), at_identity(f[1])}, P("V0")));
    CHECK(R.d_total(hk[1]) == P("1/12*V3"));
    CHECK_THROWS(divergence_density({P("V1^2*V2^2")}));
}

TEST_CASE("Poisson operators through eps^2") {
    auto ops = poisson_operators(quasi_miura(1));
    const JetRing& R = hierarchy_ring();
    LocalOperator d = LocalOperator::derivative();
    auto sym2 = [&](const Poly& A) {
        LocalOperator m = LocalOperator::multiplication(A);
        return normal(compose(m, d, R) + compose(d, m, R));
    };
    CHECK(normal(ops.p1[0]) == sym2(P("1/2*ph1^-1")));
    CHECK(normal(ops.p2[0]) == sym2(P("1/2*ph0*ph1^-1")));

    LocalOperator p1;
    p1.a[0] = P("(3/16*ph3^2*ph1^-3 - 1/24*ph5*ph1^-2 + 13/48*ph4*ph2*ph1^-3 - 15/16*ph3*ph2^2*ph1^-4 + 1/2*ph2^4*ph1^-5)*V1^3"
                " + (7/8*ph3*ph2*ph1^-3 - 1/6*ph4*ph1^-2 - 3/4*ph2^3*ph1^-4)*V1*V2"
                " + (1/6*ph2^2*ph1^-3 - 1/12*ph3*ph1^-2)*V3") * rat(1, 2);
    p1.a[1] = P("(3/8*ph3*ph2*ph1^-3 - 1/12*ph4*ph1^-2 - 1/4*ph2^3*ph1^-4)*V1^2"
                " + (1/3*ph2^2*ph1^-3 - 1/6*ph3*ph1^-2)*V2") * rat(1, 2);
    CHECK(normal(ops.p1[1]) == normal(p1));

    LocalOperator p2;
    p2.a[0] = P("(-1/24*ph0*ph5*ph1^-2 - 1/8*ph4*ph1^-1 + 3/16*ph0*ph3^2*ph1^-3 + 1/2*ph0*ph2^4*ph1^-5"
                " - 1/4*ph2^3*ph1^-3 + 13/48*ph0*ph4*ph2*ph1^-3 - 15/16*ph0*ph3*ph2^2*ph1^-4 + 19/48*ph3*ph2*ph1^-2)*V1^3"
                " + (-1/6*ph0*ph4*ph1^-2 - 1/3*ph3*ph1^-1 - 3/4*ph0*ph2^3*ph1^-4 + 3/8*ph2^2*ph1^-2"
                " + 7/8*ph0*ph3*ph2*ph1^-3)*V1*V2"
                " + (1/6*ph0*ph2^2*ph1^-3 - 1/12*ph0*ph3*ph1^-2 - 1/12*ph2*ph1^-1)*V3") * rat(1, 2);
    p2.a[1] = P("(-1/12*ph0*ph4*ph1^-2 - 1/6*ph3*ph1^-1 - 1/4*ph0*ph2^3*ph1^-4 + 1/8*ph2^2*ph1^-2"
                " + 3/8*ph0*ph3*ph2*ph1^-3)*V1^2"
                " + (1/3*ph0*ph2^2*ph1^-3 - 1/6*ph0*ph3*ph1^-2 - 1/6*ph2*ph1^-1)*V2") * rat(1, 2);
    p2.a[3] = Poly(rat(1, 8));
    CHECK(normal(ops.p2[1]) == normal(p2));
}

TEST_CASE("Poisson operators: skew symmetry and homogeneity") {
    auto ops = poisson_operators(quasi_miura(1));
    const JetRing& R = hierarchy_ring();
    for (auto* side : {&ops.p1, &ops.p2})
        for (int g = 0; g <= 1; ++g) {
            const LocalOperator& x = (*side)[g];
            CHECK(normal(x + adjoint(x, R)).a.empty());
            for (auto& [j, c] : x.a) {
                Poly e;
                for (int m = 1; m <= R.max_jet(c); ++m) e += P(("V" + std::to_string(m)).c_str()) * c.diff(sym("V", m)) * Rat(m);
                CHECK(e == c * Rat(2 * g + 1 - j));
            }
        }
}

TEST_CASE("Hodge mapping flow at eps^2") {
    auto f = flow(hodge2());
    CHECK(f[1] == P("1/12*S1*V3 + (1/8*l1*S1 + 1/6*S2 + 1/12*sig1*sq^2*S1)*V1*V2"
                    " + (-1/16*l1^2*S1 + 1/16*(l2 + l1^2)*S1 + 1/16*l1*S2 + 1/24*S3"
                    " + 1/24*sig1*(sq^2*l1*S1 + sq^2*S2))*V1^3"));
    CHECK_FALSE(has_negative_v1_power(f[2]));
}

TEST_CASE("standard form through eps^4") {
    auto sf = to_standard_form(hodge2(), 2);
    CHECK(sf.free.empty());
    CHECK(sf.a0 == P("sq"));
    CHECK(sf.C.at("2") == P("-1/24*sig1*sq^3"));
    // -sig1/24 sqrt(phi') phi'' + phi''^2/(24 phi'^{3/2}) - phi'''/(48 sqrt(phi'))
    CHECK(sf.C.at("1^2") == P("-1/24*sig1*sq^3*l1 + 1/24*sq*l1^2 - 1/48*sq*(l2 + l1^2)"));
    CHECK(sf.C.at("4") == P("-1/240*sig1*sq^3*l1 + 1/1920*sig1^2*sq^5 + 1/384*sq*l1^2 - 1/480*sq*(l2 + l1^2)"));
    // alpha_{2^2} = a0 a0'/240 + q1 a0^3 with a0' = l1/2 and q1 = sig1/1440
    CHECK(sf.alpha.at("2^2") == P("1/480*sq*l1 + 1/1440*sig1*sq^3"));
    // sigma_1 = 3q
    auto q = [](const Poly& p) { return substitute(p, {{sym("sig1"), P("3*q")}}); };
    CHECK(q(sf.C.at("2")) == P("-1/8*q*sq^3"));
    CHECK(q(sf.C.at("1^2")) == ph_to_ell(P("-1/8*q*sq*ph2 + 1/24*sq^-3*ph2^2 - 1/48*sq^-1*ph3")));
    // phi = id, sigma = 0
    for (auto& [name, c] : sf.C) CHECK(at_identity(substitute(c, {{sym("sig1"), Poly()}, {sym("sig3"), Poly()}})).is_zero());
}

TEST_CASE("standard form: the w_1^4 coefficient is a gauge freedom") {
    auto sf = to_standard_form(hodge2(), 2, true);
    REQUIRE(sf.free.size() == 1);
    CHECK(sf.free[0] == "cU");
    auto fixed = to_standard_form(hodge2(), 2);
    CHECK(sf.C.at("4") == fixed.C.at("4"));
    CHECK(sf.alpha.at("2^2") == fixed.alpha.at("2^2"));
}
