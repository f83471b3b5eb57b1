#include <doctest.h>

#include "wkmap/intersection.hpp"

#include <cstdio>
#include <random>

using namespace wkm;

namespace {

Poly P(const char* s) { return parse_poly(s); }

Poly rename_family(const Poly& p, const char* from, const char* to, int n) {
    std::unordered_map<SymId, Poly> img;
    for (int i = 0; i <= n; ++i) img[sym(from, i)] = Poly::var(sym(to, i));
    return substitute(p, img);
}

}  // namespace

TEST_CASE("known intersection numbers") {
    CHECK(correlator(0, {0, 0, 0}) == 1);
    CHECK(correlator(1, {1}) == rat(1, 24));
    CHECK(correlator(1, {0, 2}) == rat(1, 24));
    CHECK(correlator(1, {0, 0, 3}) == rat(1, 24));
    CHECK(correlator(1, {0, 0, 0, 3}) == 0);
    CHECK(correlator(1, {0, 0, 2, 2}) == rat(1, 6));
    CHECK(correlator(2, {4}) == rat(1, 1152));
    CHECK(correlator(2, {2, 3}) == rat(29, 5760));
    CHECK(correlator(2, {2, 2, 2}) == rat(7, 240));
    CHECK(correlator(3, {7}) == rat(1, 82944));
    CHECK(correlator(2, {2, 2}) == 0);
    CHECK(correlator(1, {-1, 2}) == 0);
}

TEST_CASE("genus zero recursion agrees with the multinomial formula") {
    for (int n = 3; n <= 7; ++n) {
        std::vector<int> cur(n, 0);
        // all index vectors of length n summing to n-3
        std::function<void(int, int)> rec = [&](int pos, int left) {
            if (pos == n - 1) {
                cur[pos] = left;
                CHECK(correlator(0, cur) == genus0(cur));
                return;
            }
            for (int v = 0; v <= left; ++v) {
                cur[pos] = v;
                rec(pos + 1, left - v);
            }
        };
        rec(0, n - 3);
    }
    CHECK(genus0({0, 0, 0, 1}) == 1);
    CHECK(genus0({0, 0, 2, 2}) == 0);
}

TEST_CASE("dimension, string and dilaton identities on the cache") {
    for (int g = 0; g <= 3; ++g)
        for (int n = 1; n <= 5; ++n) free_energy_wk(g, n);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> v(0, 6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> idx(1 + trial % 4);
        for (int& x : idx) x = v(rng);
        int g = trial % 4;
        if (!dimension_matches(g, idx)) CHECK(correlator(g, idx) == 0);
    }
    auto snap = default_table().snapshot();
    CHECK(snap.size() > 50);
    for (auto& [key, value] : snap) {
        CHECK(dimension_matches(key.genus, key.indices));
        std::vector<int> m = key.indices;
        int n = static_cast<int>(m.size());
        // string: <tau_0 X> = sum_j <tau_{m_j - 1} X\j>
        if (m[0] == 0 && 2 * key.genus - 2 + (n - 1) > 0) {
            std::vector<int> rest(m.begin() + 1, m.end());
            Rat s = 0;
            for (std::size_t j = 0; j < rest.size(); ++j) {
                auto r = rest;
                --r[j];
                s += correlator(key.genus, r);
            }
            CHECK(value == s);
        }
        // dilaton: <tau_1 X> = (2g-2+n) <X>
        auto it = std::find(m.begin(), m.end(), 1);
        if (it != m.end() && 2 * key.genus - 2 + (n - 1) > 0) {
            std::vector<int> rest = m;
            rest.erase(rest.begin() + (it - m.begin()));
            CHECK(value == (2 * key.genus - 2 + n - 1) * correlator(key.genus, rest));
        }
    }
}

TEST_CASE("file cache round trip") {
    CorrelatorTable t;
    correlator(2, {2, 2, 2}, t);
    std::string path = "wkmap_cache_test.txt";
    t.save(path);
    CorrelatorTable u;
    CHECK(u.load(path) == t.size());
    CHECK(u.snapshot() == t.snapshot());
    CHECK(*u.find({2, {2, 2, 2}}) == rat(7, 240));
    std::remove(path.c_str());
}

TEST_CASE("free energies") {
    Poly f0 = free_energy_wk(0, 4);
    CHECK(f0 == P("t0^3/6 + t0^3*t1/6"));
    Poly f1 = free_energy_wk(1, 2);
    CHECK(f1 == P("t1/24 + t0*t2/24 + t1^2/48"));

    Poly F = free_energy_wk(0, 6);
    Poly euler;
    for (int i = 0; i <= 6; ++i) euler += Poly::var(sym("t", i)) * F.diff(sym("t", i));
    Poly dil = euler - F.diff(sym("t", 1)) - Poly(2) * F;
    Grading g;
    g.family("t", [](int) { return 1; });
    CHECK(dil.truncate(Trunc{&g, 5}).is_zero());
}

TEST_CASE("two-point genus zero identity") {
    int deg = 7;
    Poly F = free_energy_wk(0, deg + 2);
    Poly E = euler_lagrange(deg);
    Trunc tr{&tuple_grading(), deg - 1};
    for (int i = 0; i <= 5; ++i)
        for (int l = 0; i + l <= 5; ++l) {
            Poly lhs = F.diff(sym("t", i)).diff(sym("t", l)).truncate(tr);
            Rat c = 1;
            for (int k = 2; k <= i; ++k) c *= k;
            for (int k = 2; k <= l; ++k) c *= k;
            Poly rhs = E.pow(i + l + 1, tr) * (1 / (c * (i + l + 1)));
            INFO(i, " ", l, " ", (lhs - rhs).str());
            CHECK(lhs == rhs);
        }
}

TEST_CASE("genus zero free energy is invariant") {
    int deg = 5;
    Series1 phi = generic_element(3, 3 * deg + 4);
    Poly viaT = rename_family(free_energy_phi(phi, 0, deg), "T", "t", 40);
    CHECK(viaT == free_energy_wk(0, deg));

    // second route: substitute act(t, phi^{-1}) directly
    int n = 2 * deg;
    Tuple t = tuple_symbols("t", n);
    Tuple s = act(t, reversion(phi.truncated(n + 1)), n);
    std::unordered_map<SymId, Poly> img;
    for (int i = 0; i <= n; ++i) img[sym("t", i)] = entry(s, i);
    Poly direct = substitute(free_energy_wk(0, 2 * deg - 3), img, Trunc{&tuple_grading(), deg});
    CHECK(direct == free_energy_wk(0, deg));
}

TEST_CASE("conjugated Virasoro constraints") {
    auto all_zero = [](const std::vector<Poly>& r) {
        for (auto& p : r)
            if (!p.is_zero()) return false;
        return true;
    };
    Series1 id = identity_element(30);
    CHECK(all_zero(virasoro_check(id, -1, 5, 2)));
    CHECK(all_zero(virasoro_check(id, 0, 5, 2)));
    CHECK(all_zero(virasoro_check(id, 1, 4, 2)));

    Series1 phi = generic_element(2, 30);
    CHECK(all_zero(virasoro_check(phi, -1, 4, 1)));
    CHECK(all_zero(virasoro_check(phi, 0, 4, 1)));
    CHECK(all_zero(virasoro_check(phi, 1, 4, 1)));

    // a wrong constant is detected
    auto r = virasoro_check(id, 0, 3, 1);
    CHECK(r[1].is_zero());
}
