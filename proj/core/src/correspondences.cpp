#include "wkmap/correspondences.hpp"

#include "wkmap/hodge.hpp"

#include <functional>
#include <stdexcept>

namespace wkm {

namespace {

Rat fact(int n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return Rat(r);
}

Rat pow2(int e) {
    Rat r = 1;
    for (int i = 0; i < std::abs(e); ++i) r *= 2;
    return e >= 0 ? r : Rat(1) / r;
}

Rat rpow(const Rat& a, int e) {
    Rat r = 1;
    for (int i = 0; i < e; ++i) r *= a;
    return r;
}

// C(a, k) for rational a
Rat binom_rat(const Rat& a, int k) {
    Rat r = 1;
    for (int i = 0; i < k; ++i) r *= (a - i);
    return r / fact(k);
}

// (2m-1)!!/2^m and (2m+1)!!/2^m
Rat df_lo(int m) { return double_factorial_odd(m) / pow2(m); }
Rat df_hi(int m) { return double_factorial_odd(m + 1) / pow2(m); }

// --- truncated series in y ---

YSeries zero(int order) { return YSeries(order + 1, Rat(0)); }

YSeries linear(const Rat& a, const Rat& b, int order) {
    YSeries s = zero(order);
    s[0] = a;
    if (order >= 1) s[1] = b;
    return s;
}

YSeries& add_to(YSeries& a, const YSeries& b, const Rat& c = Rat(1)) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
    return a;
}

YSeries mul(const YSeries& a, const YSeries& b) {
    YSeries r = zero(static_cast<int>(a.size()) - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j < a.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

YSeries spow(const YSeries& a, int e) {
    YSeries r = zero(static_cast<int>(a.size()) - 1);
    r[0] = 1;
    for (int i = 0; i < e; ++i) r = mul(r, a);
    return r;
}

YSeries shift(const YSeries& a, int k) {
    YSeries r = zero(static_cast<int>(a.size()) - 1);
    for (std::size_t i = 0; i + k < a.size(); ++i) r[i + k] = a[i];
    return r;
}

// log(1 + c y)
YSeries log1p(const Rat& c, int order) {
    YSeries s = zero(order);
    Rat p = 1;
    for (int k = 1; k <= order; ++k) {
        p *= c;
        s[k] = (k % 2 ? p : -p) / k;
    }
    return s;
}

// (a + b y)^(-e), a != 0
YSeries inv_linear_pow(const Rat& a, const Rat& b, int e, int order) {
    YSeries s = zero(order);
    Rat lead = Rat(1) / rpow(a, e), ratio = b / a;
    for (int k = 0; k <= order; ++k) s[k] = lead * binom_rat(Rat(-e), k) * rpow(ratio, k);
    return s;
}

// partitions of n into positive parts, non-increasing
void partitions(int n, int max_part, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f) {
    if (n == 0) {
        f(cur);
        return;
    }
    for (int p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions(n - p, p, cur, f);
        cur.pop_back();
    }
}

void for_partitions(int n, const std::function<void(const std::vector<int>&)>& f) {
    if (n < 0) return;
    std::vector<int> cur;
    partitions(n, n, cur, f);
}

Rat mult_factorial(const std::vector<int>& lambda) {
    Rat r = 1;
    for (std::size_t i = 0; i < lambda.size();) {
        std::size_t j = i;
        while (j < lambda.size() && lambda[j] == lambda[i]) ++j;
        r *= fact(static_cast<int>(j - i));
        i = j;
    }
    return r;
}

Rat genus_factor(Correspondence c, int g) {
    if (c == Correspondence::gue) return 1;
    // (sqrt(-4) eps)^{2g-2}
    Rat r = 1;
    int e = g - 1;
    for (int i = 0; i < std::abs(e); ++i) r *= -4;
    return e >= 0 ? r : Rat(1) / r;
}

// f_m (GUE) or g_m (BGW) as a series in y
YSeries insertion_value(Correspondence c, int m, int order) {
    if (c == Correspondence::gue) return linear(df_lo(m) - df_hi(m), df_lo(m), order);
    return linear(-2 * df_lo(m), df_lo(m), order);
}

// 2/(3-x) at x = 1+y, and -2/x at x = -2+y: both 1/(1 - y/2)
YSeries dilaton_base(int order) { return inv_linear_pow(1, rat(-1, 2), 1, order); }

// Poly in x (other symbols already removed) as a series around x0
YSeries poly_in_x(const Poly& p, int x0, int order) {
    SymId x = sym("x");
    int deg = p.degree(x);
    YSeries r = zero(order);
    for (int e = 0; e <= deg; ++e) {
        Rat c = p.coeff_of(x, e).constant_term();
        if (c == 0) continue;
        // c (x0 + y)^e
        for (int k = 0; k <= std::min(e, order); ++k) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), e, k);
            r[k] += c * Rat(b) * rpow(Rat(x0), e - k);
        }
    }
    return r;
}

Poly at_origin(const Poly& p) {
    return substitute(p, [](SymId s, int) -> std::optional<Poly> {
        const auto& f = sym_info(s).family;
        if (f == "s" || f == "r") return Poly();
        return std::nullopt;
    });
}

Poly quadratic(Correspondence c, int j) { return c == Correspondence::gue ? gue_quadratic(j) : bgw_quadratic(j); }
Poly coordinate(Correspondence c, int m, int j) {
    return c == Correspondence::gue ? gue_coordinate(m, j) : bgw_coordinate(m, j);
}

std::vector<int> insertions(int zeros, int ones, const std::vector<int>& lambda) {
    std::vector<int> idx(zeros, 0);
    idx.insert(idx.end(), ones, 1);
    for (int l : lambda) idx.push_back(l + 1);
    return idx;
}

}  // namespace

Poly gue_quadratic(int j_max) {
    Poly x = Poly::var("x");
    auto shifted = [](int j) { return Poly::var(sym("s", j)) - Poly(j == 1 ? rat(1, 2) : Rat(0)); };
    auto cb = [](int j) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), 2 * j, j);
        return Rat(b);
    };
    Poly a;
    for (int j1 = 1; j1 <= j_max; ++j1)
        for (int j2 = 1; j2 <= j_max; ++j2)
            a += shifted(j1) * shifted(j2) * (rat(j1 * j2, j1 + j2) * cb(j1) * cb(j2) / 2);
    for (int j = 1; j <= j_max; ++j) a += x * shifted(j) * cb(j);
    return a;
}

Poly gue_coordinate(int m, int j_max) {
    Poly t = Poly::var("x") * rat(1, 2 * m + 1);
    if (m == 1) t += Poly(rat(2, 3));
    for (int j = 1; j <= j_max; ++j) {
        Poly sj = Poly::var(sym("s", j)) - Poly(j == 1 ? rat(1, 2) : Rat(0));
        t += sj * (binom_rat(rat(2 * m + 2 * j - 1, 2), j - 1) * pow2(2 * j - 1));
    }
    return t * df_hi(m);
}

Poly bgw_quadratic(int j_max) {
    Poly x = Poly::var("x");
    auto shifted = [](int a) { return Poly::var(sym("r", a)) - Poly(a == 0 ? 1 : 0); };
    Poly q;
    for (int a = 0; a <= j_max; ++a)
        for (int b = 0; b <= j_max; ++b) q += shifted(a) * shifted(b) * (Rat(1) / (fact(a) * fact(b) * (a + b + 1) * 2));
    for (int b = 0; b <= j_max; ++b) q -= x * shifted(b) * (Rat(1) / (fact(b) * (2 * b + 1)));
    return q;
}

Poly bgw_coordinate(int m, int j_max) {
    Poly t = Poly::var("x") * df_lo(m);
    if (m == 1) t += Poly(1);
    if (m == 0) t += Poly(2);
    for (int j = m; j <= j_max; ++j) t -= Poly::var(sym("r", j)) * (Rat(m % 2 ? -2 : 2) / fact(j - m));
    return t;
}

int base_point(Correspondence c) { return c == Correspondence::gue ? 1 : -2; }

Rat gue_b_coefficient(int g) {
    if (g < 2) throw std::invalid_argument("gue_b_coefficient needs g >= 2");
    int n = 2 * g - 2;
    Rat a = rat(1, 4);
    // z^{-n} coefficient of gamma(z + a) + gamma(z - a), n even
    Rat c = rpow(a, n + 2) * (rat(-1, n + 2) + rat(2, n + 1) - rat(1, n)) + rpow(a, n) / (6 * n);
    for (int h = 2; h <= g; ++h) {
        int m = 2 * h - 2, k = n - m;
        // C(-m, k) = (-1)^k C(m+k-1, k), k even here
        c += 2 * bernoulli(2 * h) / (2 * h * m) * binom_rat(Rat(m + k - 1), k) * rpow(a, k);
    }
    // z = x/(2 eps)
    return c * pow2(n);
}

YSeries correspondence_target(Correspondence c, int g, int order) {
    if (c == Correspondence::gue) {
        // eps -> eps/sqrt 2 multiplies the eps^{2g-2} part by 2^{1-g}
        Rat scale = pow2(1 - g);
        YSeries r = zero(order);
        if (g == 0) {
            YSeries inner = log1p(1, order);
            for (auto& v : inner) v /= 4;
            inner[0] -= rat(3, 8);
            add_to(r, mul(inner, spow(linear(1, 1, order), 2)), scale);
        } else if (g == 1) {
            add_to(r, log1p(1, order), rat(-5, 48) * scale);
        } else {
            add_to(r, inv_linear_pow(1, 1, 2 * g - 2, order), gue_b_coefficient(g) * scale);
        }
        return r;
    }
    YSeries r = zero(order);
    YSeries lg = log1p(rat(-1, 2), order);  // log(-x/2) at x = -2 + y
    if (g == 0) {
        YSeries inner = lg;
        inner[0] -= rat(3, 2);
        add_to(r, mul(inner, spow(linear(-2, 1, order), 2)), rat(1, 4));
    } else if (g == 1) {
        add_to(r, lg, rat(1, 12));
    } else {
        Rat k = -rpow(Rat(-2), g - 1) * bernoulli(2 * g) / (2 * g * (2 * g - 2));
        add_to(r, inv_linear_pow(-2, 1, 2 * g - 2, order), k);
    }
    return r;
}

YSeries correspondence_closed_form(Correspondence c, int g, int order, CorrelatorTable& table) {
    YSeries r = zero(order);
    YSeries u = dilaton_base(order);
    for (int p = 0; p <= order; ++p) {
        for_partitions(3 * g - 3 + p, [&](const std::vector<int>& lambda) {
            Rat v = correlator(g, insertions(p, 0, lambda), table);
            if (v == 0) return;
            int e = 2 * g - 2 + static_cast<int>(lambda.size()) + p;
            YSeries term = spow(u, e);
            for (int l : lambda) term = mul(term, insertion_value(c, 1 + l, order));
            add_to(r, shift(term, p), v / (fact(p) * mult_factorial(lambda)));
        });
    }
    for (auto& v : r) v *= genus_factor(c, g);
    if (g == 0) add_to(r, c == Correspondence::gue ? linear(rat(-3, 4), -1, order) : linear(rat(-3, 2), 1, order));
    if (g == 1) add_to(r, log1p(rat(-1, 2), order), rat(-1, 24));
    return r;
}

namespace {

struct DirectData {
    std::vector<YSeries> t;  // t_m(x0 + y, 0)
};

DirectData direct_coordinates(Correspondence c, int m_max, int order) {
    DirectData d;
    int x0 = base_point(c);
    for (int m = 0; m <= m_max; ++m) d.t.push_back(poly_in_x(at_origin(coordinate(c, m, 1)), x0, order));
    if (d.t[0][0] != 0 || (m_max >= 1 && d.t[1][0] != 0))
        throw std::logic_error("t_0, t_1 do not vanish at the base point");
    return d;
}

// sum over <tau_marked tau_0^p tau_1^q tau_{lambda+1}> t_0^p t_1^q prod t_{lambda+1} / autos,
// `marked` < 0 for none
YSeries direct_sum(int g, int marked, const DirectData& d, int order, CorrelatorTable& table) {
    YSeries r = zero(order);
    for (int p = 0; p <= order; ++p)
        for (int q = 0; p + q <= order; ++q) {
            int n = 3 * g - 3 + p - (marked >= 0 ? marked - 1 : 0);
            YSeries base = mul(spow(d.t[0], p), spow(d.t[1], q));
            for_partitions(n, [&](const std::vector<int>& lambda) {
                auto idx = insertions(p, q, lambda);
                if (marked >= 0) idx.push_back(marked);
                Rat v = correlator(g, idx, table);
                if (v == 0) return;
                YSeries term = base;
                for (int l : lambda) term = mul(term, d.t.at(l + 1));
                add_to(r, term, v / (fact(p) * fact(q) * mult_factorial(lambda)));
            });
        }
    return r;
}

}  // namespace

YSeries correspondence_direct(Correspondence c, int g, int order, CorrelatorTable& table) {
    DirectData d = direct_coordinates(c, std::max(1, 3 * g - 1 + order), order);
    YSeries r = direct_sum(g, -1, d, order, table);
    for (auto& v : r) v *= genus_factor(c, g);
    if (g == 0) add_to(r, poly_in_x(at_origin(quadratic(c, 1)), base_point(c), order));
    return r;
}

YSeries gue_one_point_closed_form(int g, int order, CorrelatorTable& table) {
    YSeries r = zero(order);
    YSeries u = dilaton_base(order);
    for (int p = 0; p <= order; ++p)
        for (int m = 0; m <= 3 * g - 2 + p; ++m) {
            Rat e = df_hi(m) * 2;  // (2m+1)!!/(2^{m-1} 0!)
            for_partitions(3 * g - 2 + p - m, [&](const std::vector<int>& lambda) {
                auto idx = insertions(p, 0, lambda);
                idx.push_back(m);
                Rat v = correlator(g, idx, table);
                if (v == 0) return;
                YSeries term = spow(u, 2 * g - 1 + static_cast<int>(lambda.size()) + p);
                for (int l : lambda) term = mul(term, insertion_value(Correspondence::gue, 1 + l, order));
                add_to(r, shift(term, p), e * v / (fact(p) * mult_factorial(lambda)));
            });
        }
    if (g == 0) add_to(r, linear(1, 2, order));  // C(2,1) (x - 1/2)
    return r;
}

YSeries gue_one_point_direct(int g, int order, CorrelatorTable& table) {
    int m_max = 3 * g - 2 + order;
    DirectData d = direct_coordinates(Correspondence::gue, std::max(1, m_max + 1), order);
    SymId s1 = sym("s", 1);
    YSeries r = zero(order);
    for (int m = 0; m <= m_max; ++m) {
        Rat e = at_origin(gue_coordinate(m, 1).diff(s1)).constant_term();
        add_to(r, direct_sum(g, m, d, order, table), e);
    }
    if (g == 0) add_to(r, poly_in_x(at_origin(gue_quadratic(1).diff(s1)), 1, order));
    return r;
}

YSeries gue_one_point_target(int g, int order) {
    // <phi_1>(x, eps) = x^2/(2 eps^2) - 1/8, at eps/sqrt 2
    if (g == 0) return spow(linear(1, 1, order), 2);
    YSeries r = zero(order);
    if (g == 1) r[0] = rat(-1, 8);
    return r;
}

bool CorrespondenceReport::pass() const {
    for (auto& s : sectors)
        if (!s.pass()) return false;
    return !sectors.empty();
}

CorrespondenceReport verify_correspondence(Correspondence c, int order, int g_max, CorrelatorTable& table) {
    if (order < 0 || g_max < 0) throw std::invalid_argument("order and genus must be non-negative");
    CorrespondenceReport rep{c, order, g_max, {}};
    auto label = [](int g) { return "eps^" + std::to_string(2 * g - 2); };
    for (int g = 0; g <= g_max; ++g)
        rep.sectors.push_back({label(g), 2 * g - 2, correspondence_closed_form(c, g, order, table),
                               correspondence_direct(c, g, order, table), correspondence_target(c, g, order)});
    if (c == Correspondence::gue)
        for (int g = 0; g <= g_max; ++g)
            rep.sectors.push_back({"one-point " + label(g), 2 * g - 2, gue_one_point_closed_form(g, order, table),
                                   gue_one_point_direct(g, order, table), gue_one_point_target(g, order)});
    return rep;
}

}  // namespace wkm
