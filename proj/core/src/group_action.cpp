#include "wkmap/group_action.hpp"

#include <mutex>
#include <stdexcept>

namespace wkm {

namespace {

Rat factorial(int n) {
    Rat f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// sum_i x_i V^i/i!  ->  x_i
Tuple from_egf(const Series1& s, int order) {
    Tuple t;
    for (int i = 0; i <= order; ++i) {
        Poly c = s[i] * factorial(i);
        if (!c.is_zero()) t[i] = c;
    }
    return t;
}

// sum_{m<=order} x_m phi^m/m!
Series1 egf_in(const Tuple& x, const Series1& phi, int order) {
    Series1 acc(phi.var(), order);
    Series1 pw = Series1::constant(phi.var(), order, Poly(1));
    Series1 ph = phi.truncated(order);
    for (int m = 0; m <= order; ++m) {
        if (m > 0) pw = pw * ph;
        auto it = x.find(m);
        if (it != x.end() && !it->second.is_zero()) acc = acc + (it->second * (1 / factorial(m))) * pw;
    }
    return acc;
}

void require_order(const Series1& phi, int order) {
    if (phi.order() < order + 1)
        throw std::invalid_argument("group element truncated at order " + std::to_string(phi.order()) +
                                    ", need " + std::to_string(order + 1));
}

Series1 sqrt_derivative(const Series1& phi, int order) { return series_sqrt(phi.derive().truncated(order)); }

}  // namespace

Tuple tuple_symbols(const std::string& family, int n) {
    Tuple t;
    for (int i = 0; i <= n; ++i) t[i] = Poly::var(sym(family, i));
    return t;
}

Poly entry(const Tuple& t, int i) {
    auto it = t.find(i);
    return it == t.end() ? Poly() : it->second;
}

Tuple normalized(Tuple t) {
    for (auto it = t.begin(); it != t.end();) it = it->second.is_zero() ? t.erase(it) : std::next(it);
    return t;
}

bool tuple_equal(const Tuple& a, const Tuple& b) { return normalized(a) == normalized(b); }

Series1 identity_element(int order) { return Series1::monomial("V", order, 1); }

Series1 special_element(int order, const Poly& q) {
    Series1 s("V", order);
    Poly pw(1);
    for (int k = 1; k <= order; ++k) {
        s.set(k, pw * (Rat(mpz_class(1) << (k - 1)) / factorial(k)));
        pw = pw * q;
    }
    return s;
}

Series1 generic_element(int params, int order) {
    Series1 s = identity_element(order);
    for (int k = 2; k <= params + 1 && k <= order; ++k) s.set(k, Poly::var(sym("a", k)));
    return s;
}

Series1 element_from_coeffs(const std::vector<Poly>& coeffs, int order) {
    Series1 s("V", order);
    for (int k = 0; k < static_cast<int>(coeffs.size()) && k + 1 <= order; ++k) s.set(k + 1, coeffs[k]);
    check_group_element(s);
    return s;
}

void check_group_element(const Series1& phi) {
    if (!phi[0].is_zero() || phi[1] != Poly(1)) throw std::invalid_argument("group element must be V + O(V^2)");
}

Tuple act(const Tuple& t, const Series1& phi, int order) {
    check_group_element(phi);
    require_order(phi, order);
    Series1 ph = phi.truncated(order);
    // V - sqrt(phi') (phi - sum t_i phi^i/i!)
    Series1 bt = ph - egf_in(t, phi, order);
    Series1 rhs = Series1::monomial("V", order, 1) - sqrt_derivative(phi, order) * bt;
    return from_egf(rhs, order);
}

LinearAction act_linear(const Tuple& t, const Series1& phi, int order) {
    check_group_element(phi);
    require_order(phi, order);
    Series1 sq = sqrt_derivative(phi, order);
    LinearAction r;
    r.that = from_egf(sq * egf_in(t, phi, order), order);
    r.C = from_egf(sq * phi.truncated(order), order);
    Series1 f = reversion(phi.truncated(order + 1));
    r.c = from_egf(sqrt_derivative(f, order) * f.truncated(order), order);
    return r;
}

ActionMatrices action_matrices(const Series1& phi, int size) {
    check_group_element(phi);
    require_order(phi, size - 1);
    int n = size - 1;
    Series1 sq = sqrt_derivative(phi, n);
    Series1 ph = phi.truncated(n);
    ActionMatrices a;
    a.M.assign(size, std::vector<Poly>(size));
    Series1 pw = Series1::constant("V", n, Poly(1));
    for (int m = 0; m <= n; ++m) {
        if (m > 0) pw = pw * ph;
        Series1 col = sq * pw;
        for (int i = m; i <= n; ++i) a.M[i][m] = col[i] * (factorial(i) / factorial(m));
    }
    // unit lower-triangular inverse by forward substitution
    a.N.assign(size, std::vector<Poly>(size));
    for (int m = 0; m <= n; ++m) {
        a.N[m][m] = Poly(1);
        for (int i = m + 1; i <= n; ++i) {
            Poly acc;
            for (int k = m; k < i; ++k)
                if (!a.M[i][k].is_zero() && !a.N[k][m].is_zero()) acc += a.M[i][k] * a.N[k][m];
            a.N[i][m] = -acc;
        }
    }
    return a;
}

mpz_class stirling1(int n, int k) {
    if (n < 0 || k < 0) throw std::out_of_range("negative Stirling index");
    static std::mutex mu;
    static std::vector<std::vector<mpz_class>> table{{mpz_class(1)}};
    std::lock_guard lock(mu);
    while (static_cast<int>(table.size()) <= n) {
        int r = static_cast<int>(table.size());
        std::vector<mpz_class> row(r + 1);
        for (int j = 1; j <= r; ++j) {
            mpz_class a = j - 1 < r ? table[r - 1][j - 1] : mpz_class(0);
            mpz_class b = j < r ? table[r - 1][j] : mpz_class(0);
            row[j] = a - (r - 1) * b;
        }
        table.push_back(std::move(row));
    }
    return k <= n ? table[n][k] : mpz_class(0);
}

Rat special_A(int i, int m) {
    if (m < 0 || i < 0) throw std::out_of_range("A(i,m) needs non-negative indices");
    if (m > i) return 0;
    mpz_class sum = 0, binom = 1;
    for (int j = 0; j <= m; ++j) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2 * j + 1, i);
        sum += ((m - j) % 2 ? -1 : 1) * p * binom;
        binom = binom * (m - j) / (j + 1);
    }
    return Rat(sum) / (Rat(mpz_class(1) << m) * factorial(m));
}

Rat special_P(int m, int i) {
    if (m < 0 || i < 0) throw std::out_of_range("P(m,i) needs non-negative indices");
    if (i > m) return 0;
    mpz_class sum = 0;
    for (int j = i; j <= m; ++j) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), j, i);
        mpz_class two = mpz_class(1) << (m - j);
        sum += ((m - j) % 2 ? -1 : 1) * two * b * stirling1(m, j);
    }
    return Rat((m - i) % 2 ? -sum : sum);
}

SpecialCoeffs special_coeffs(int i, int m) {
    return {special_A(i, m), special_P(m, i), stirling1(i, m)};
}

const Grading& tuple_grading() {
    static const Grading g = [] {
        Grading g;
        g.family("t", [](int) { return 1; });
        return g;
    }();
    return g;
}

Poly apply_series(const Series1& phi, const Poly& x, const Trunc& tr) {
    Poly acc = phi[phi.order()];
    for (int k = phi.order() - 1; k >= 0; --k) acc = acc.mul(x, tr) + phi[k];
    return acc.truncate(tr);
}

Poly euler_lagrange(const Tuple& t, int degree, const Grading& grading) {
    Trunc tr{&grading, degree};
    Poly t0 = entry(t, 0).truncate(tr);
    Poly e = t0;
    // each pass fixes at least one more degree
    for (int pass = 0; pass <= degree + 1; ++pass) {
        Poly next = t0, pw(1);
        for (int i = 1; i <= degree; ++i) {
            pw = pw.mul(e, tr);
            if (pw.is_zero()) break;
            Poly ti = entry(t, i);
            if (!ti.is_zero()) next += ti.mul(pw, tr) * (1 / factorial(i));
        }
        if (next == e) return e;
        e = std::move(next);
    }
    throw std::logic_error("Euler-Lagrange iteration did not stabilize");
}

Poly euler_lagrange(int degree) { return euler_lagrange(tuple_symbols("t", degree), degree); }

}  // namespace wkm
