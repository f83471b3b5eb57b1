// One line per acceptance criterion; exit status 1 if any fails.
#include "wkmap/correspondences.hpp"
#include "wkmap/hierarchy.hpp"
#include "wkmap/hodge.hpp"
#include "wkmap/loopeq.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace wkm;

namespace {

Poly P(const char* s) { return parse_poly(s); }

struct Criterion {
    int id;
    const char* what;
    double budget_s;
    std::function<bool(std::string&)> run;
};

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

Rat small_rat(std::mt19937& rng) {
    std::uniform_int_distribution<int> n(-4, 4), d(1, 3);
    return rat(n(rng), d(rng));
}

Series1 random_element(std::mt19937& rng, int order) {
    Series1 s = identity_element(order);
    for (int k = 2; k <= order; ++k) s.set(k, Poly(small_rat(rng)));
    return s;
}

Poly random_poly(std::mt19937& rng, int terms, std::initializer_list<const char*> names) {
    std::uniform_int_distribution<int> c(-5, 5), e(0, 2), d(1, 4);
    Poly p;
    for (int i = 0; i < terms; ++i) {
        Poly t(rat(c(rng), d(rng)));
        for (auto n : names) t = t * Poly::var(n, e(rng));
        p += t;
    }
    return p;
}

// ---------------------------------------------------------------------------

bool c1(std::string&) {
    return correlator(1, {0, 2}) == rat(1, 24) && correlator(1, {0, 0, 2, 2}) == rat(1, 6) &&
           correlator(2, {4}) == rat(1, 1152) && correlator(2, {3, 2}) == rat(29, 5760) &&
           correlator(2, {2, 2, 2}) == rat(7, 240);
}

bool c2(std::string& note) {
    Series1 phi = generic_element(2, 3);
    Tuple T = act(tuple_symbols("t", 2), phi, 2);
    bool ok = T[1] == P("t1 + a2*t0") && T[2] == P("t2 + 4*a2*(t1 - 1) + (3*a3 - a2^2)*t0");
    Tuple back = act(tuple_symbols("T", 2), reversion(phi), 2);
    ok = ok && back[2] == P("T2 - 4*a2*(T1 - 1) - (3*a3 - 5*a2^2)*T0");
    std::mt19937 rng(99);
    int order = 8, bad = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Series1 a = random_element(rng, order + 1), b = random_element(rng, order + 1);
        Tuple t;
        for (int i = 0; i <= order; ++i) t[i] = Poly(small_rat(rng));
        if (!tuple_equal(act(t, compose(a, b), order), act(act(t, a, order), b, order))) ++bad;
    }
    note = std::to_string(20 - bad) + "/20 composition triples";
    return ok && bad == 0;
}

bool c3(std::string&) {
    int deg = 5;
    Series1 phi = generic_element(3, 3 * deg + 4);
    int n = 2 * deg;
    Tuple s = act(tuple_symbols("t", n), reversion(phi.truncated(n + 1)), n);
    std::unordered_map<SymId, Poly> img;
    for (int i = 0; i <= n; ++i) img[sym("t", i)] = entry(s, i);
    Poly direct = substitute(free_energy_wk(0, 2 * deg - 3), img, Trunc{&tuple_grading(), deg});
    return direct == free_energy_wk(0, deg);
}

bool c4(std::string& note) {
    auto s = solve_loop(4);
    bool ok = s[1].potential == P("w3/1152 - 7/1920*w1*w2 + w1^3/360 + l1*w2/320 - 11/3840*l1*w1^2 + 5/768*l2*w1"
                                  " + 7/2560*l1^2*w1 + l1*l2/192 + l1^3/11520 + l3/384");
    for (int g = 2; g <= 3; ++g) {
        GenusSolution v = fg_via_wk(g);
        ok = ok && v.potential == s[g - 1].potential && v.gradients == s[g - 1].gradients;
    }
    for (auto& sol : s) ok = ok && consistency_holds(sol) && gradient_weights_hold(sol);
    note = "genus 1..4";
    return ok;
}

bool c5(std::string&) {
    long p1[] = {0, 1, -4, 23, -176, 1689};
    bool ok = true;
    for (int m = 0; m <= 5; ++m) ok = ok && special_P(m, 1) == Rat(p1[m]);
    for (int m = 0; m <= 6; ++m) {
        Rat df = double_factorial_odd(m);
        ok = ok && special_P(m, 0) == (m % 2 ? -df : df);
    }
    return ok;
}

bool c6(std::string&) {
    auto qm = quasi_miura(2);
    auto fs = flow(qm);
    auto f = specialize_flow(fs, P("V0"));
    bool ok = f[1] == P("1/12*V3 + 1/8*l1*V1*V2 + 1/16*l2*V1^3");
    ok = ok && f[2] == P("1/480*l1*V5 + (7/480*l2 + 1/320*l1^2)*V4*V1 + (1/48*l2 + 1/64*l1^2)*V3*V2"
                         " + (9/320*l3 + 37/960*l1*l2 + 1/1440*l1^3)*V3*V1^2"
                         " + (17/480*l3 + 37/480*l1*l2 + 1/720*l1^3)*V2^2*V1"
                         " + (5/192*l4 + 61/960*l1*l3 + 137/1920*l2^2 + 1/192*l1^2*l2)*V2*V1^3"
                         " + (1/384*l5 + 1/128*l1*l4 + 7/256*l2*l3 + 1/1280*l1^2*l3 + 1/640*l1*l2^2)*V1^5");
    ok = ok && at_identity(fs[2]) == P("1/240*S2*V5 + 1/80*S3*V4*V1 + 1/48*S3*V3*V2 + 23/1440*S4*V3*V1^2"
                                       " + 31/1440*S4*V2^2*V1 + 1/90*S5*V2*V1^3 + 1/1152*S6*V1^5");
    auto f3 = flow(quasi_miura(3));
    for (auto& p : f3) ok = ok && !has_negative_v1_power(p);
    return ok;
}

bool c7(std::string&) {
    auto ops = poisson_operators(quasi_miura(1));
    const JetRing& R = hierarchy_ring();
    LocalOperator d = LocalOperator::derivative();
    auto sym2 = [&](const Poly& A) {
        LocalOperator m = LocalOperator::multiplication(A);
        return normal(compose(m, d, R) + compose(d, m, R));
    };
    bool ok = normal(ops.p1[0]) == sym2(P("1/2*ph1^-1")) && normal(ops.p2[0]) == sym2(P("1/2*ph0*ph1^-1"));
    LocalOperator p1;
    p1.a[0] = P("(3/16*ph3^2*ph1^-3 - 1/24*ph5*ph1^-2 + 13/48*ph4*ph2*ph1^-3 - 15/16*ph3*ph2^2*ph1^-4 + 1/2*ph2^4*ph1^-5)*V1^3"
                " + (7/8*ph3*ph2*ph1^-3 - 1/6*ph4*ph1^-2 - 3/4*ph2^3*ph1^-4)*V1*V2"
                " + (1/6*ph2^2*ph1^-3 - 1/12*ph3*ph1^-2)*V3") * rat(1, 2);
    p1.a[1] = P("(3/8*ph3*ph2*ph1^-3 - 1/12*ph4*ph1^-2 - 1/4*ph2^3*ph1^-4)*V1^2"
                " + (1/3*ph2^2*ph1^-3 - 1/6*ph3*ph1^-2)*V2") * rat(1, 2);
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
    return ok && normal(ops.p1[1]) == normal(p1) && normal(ops.p2[1]) == normal(p2);
}

bool c8(std::string&) {
    auto sf = to_standard_form(quasi_miura(2, MappingFamily::hodge), 2);
    return sf.free.empty() && sf.a0 == P("sq") && sf.C.at("2") == P("-1/24*sig1*sq^3") &&
           sf.C.at("1^2") == P("-1/24*sig1*sq^3*l1 + 1/24*sq*l1^2 - 1/48*sq*(l2 + l1^2)") &&
           sf.C.at("4") == P("-1/240*sig1*sq^3*l1 + 1/1920*sig1^2*sq^5 + 1/384*sq*l1^2 - 1/480*sq*(l2 + l1^2)");
}

bool c9(std::string& note) {
    int q_order = 5;
    auto rep = verify_hodge_wk(4, 2, q_order);
    note = "degree 4, genus <= 2, through q^" + std::to_string(q_order);
    return rep.pass();
}

bool c10(std::string&) {
    Poly q = Poly::var("q");
    auto r = q_from_sigma(special_sigma(q, 3));
    return r.q2 == r.q1.pow(3) * rat(6400, 3) && r.q3.is_zero();
}

bool c11(std::string& note) {
    auto gue = verify_correspondence(Correspondence::gue, 5, 2);
    auto bgw = verify_correspondence(Correspondence::bgw, 5, 2);
    note = "GUE " + std::to_string(gue.sectors.size()) + " sectors, BGW " + std::to_string(bgw.sectors.size()) +
           " sectors, through (x - x0)^5";
    return gue.pass() && bgw.pass();
}

bool c12(std::string& note) {
    int checks = 0, bad = 0;
    auto expect = [&](bool b) {
        ++checks;
        if (!b) ++bad;
    };
    std::mt19937 rng(12);
    // ring axioms, Leibniz
    for (int i = 0; i < 20; ++i) {
        Poly a = random_poly(rng, 4, {"q", "a2", "x"}), b = random_poly(rng, 3, {"q", "x"}),
             c = random_poly(rng, 3, {"a2", "x"});
        expect((a * b) * c == a * (b * c));
        expect(a * (b + c) == a * b + a * c);
        expect(a * b == b * a);
        expect((a * b).diff(sym("x")) == a.diff(sym("x")) * b + a * b.diff(sym("x")));
        expect(parse_poly(a.str()) == a);
    }
    // composition / reversion round trips
    for (int n = 3; n <= 8; ++n) {
        Series1 phi = random_element(rng, n), psi = reversion(phi);
        expect(compose(phi, psi) == Series1::monomial("V", n, 1));
        expect(compose(psi, phi) == Series1::monomial("V", n, 1));
    }
    // jet ring: Leibniz for d, exactness of the variational derivative
    JetRing R;
    for (int i = 0; i < 20; ++i) {
        Poly a = random_poly(rng, 3, {"V0", "V1", "V2", "l1"}), b = random_poly(rng, 3, {"V1", "V3", "sq"});
        expect(R.d_total(a * b) == R.d_total(a) * b + a * R.d_total(b));
        expect(R.variational_derivative(R.d_total(a)).is_zero());
    }
    // dimension, string and dilaton on the correlator cache
    for (int g = 0; g <= 3; ++g) free_energy_wk(g, 5);
    for (auto& [key, value] : default_table().snapshot()) {
        expect(dimension_matches(key.genus, key.indices));
        const auto& m = key.indices;
        int n = static_cast<int>(m.size());
        if (m[0] == 0 && 2 * key.genus - 3 + n > 0) {
            std::vector<int> rest(m.begin() + 1, m.end());
            Rat s = 0;
            for (std::size_t j = 0; j < rest.size(); ++j) {
                auto r = rest;
                --r[j];
                s += correlator(key.genus, r);
            }
            expect(value == s);
        }
        if (m[0] == 1 && 2 * key.genus - 3 + n > 0) {
            std::vector<int> rest(m.begin() + 1, m.end());
            expect(value == Rat(2 * key.genus - 3 + n) * correlator(key.genus, rest));
        }
    }
    note = std::to_string(checks - bad) + "/" + std::to_string(checks) + " property checks";
    return bad == 0;
}

}  // namespace

int main() {
    std::vector<Criterion> all{
        {1, "intersection values", 1, c1},
        {2, "group action formulas and composition law", 10, c2},
        {3, "genus-zero invariance", 60, c3},
        {4, "loop solver: P_2, two routes, consistency, weights", 300, c4},
        {5, "P(m,1) and P(m,0) sequences", 1, c5},
        {6, "first flow, KdV reduction, polynomiality", 600, c6},
        {7, "Poisson operators through eps^2", 300, c7},
        {8, "standard form through eps^4", 600, c8},
        {9, "Hodge-WK identity", 600, c9},
        {10, "q-sigma relations", 1, c10},
        {11, "WK-GUE and WK-BGW sectors", 300, c11},
        {12, "property suites", 120, c12},
    };
    int failed = 0;
    for (auto& c : all) {
        std::string note;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.run(note);
        } catch (const std::exception& e) {
            note = std::string("exception: ") + e.what();
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = s <= c.budget_s;
        if (!ok || !in_time) ++failed;
        std::printf("criterion %2d: %s  %s (%.2f s, budget %.0f s)%s%s\n", c.id, ok && in_time ? "PASS" : "FAIL", c.what,
                    s, c.budget_s, note.empty() ? "" : "  ", note.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
