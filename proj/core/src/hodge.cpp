#include "wkmap/hodge.hpp"

#include "wkmap/loopeq.hpp"
#include "wkmap/series.hpp"

#include <mutex>
#include <stdexcept>

namespace wkm {

namespace {

Rat binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rat(b);
}

Rat factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rat(f);
}

SymId t(int i) { return sym("t", i); }

const Grading& degree_grading() {
    static const Grading g = [] {
        Grading x;
        x.family("t", [](int) { return 1; });
        return x;
    }();
    return g;
}

Poly sigma_cut(const Poly& p, int w) {
    const Grading& gr = sigma_grading();
    return p.filter([&](const Monomial& m) { return gr.weight(m) <= w; });
}

Poly dt(const Poly& p, int i) { return p.diff(t(i)); }

}  // namespace

Rat bernoulli(int n) {
    static std::mutex mu;
    static std::vector<Rat> memo{Rat(1)};
    if (n < 0) throw std::invalid_argument("negative Bernoulli index");
    std::lock_guard lock(mu);
    while (static_cast<int>(memo.size()) <= n) {
        int m = static_cast<int>(memo.size());
        Rat acc = 0;
        for (int k = 0; k < m; ++k) acc += binom(m + 1, k) * memo[k];
        memo.push_back(-acc / (m + 1));
    }
    return memo[n];
}

Poly HodgeParams::operator[](int odd) const {
    auto it = sigma.find(odd);
    return it == sigma.end() ? Poly() : it->second;
}

int HodgeParams::max_index() const { return sigma.empty() ? 0 : sigma.rbegin()->first; }

HodgeParams symbolic_sigma(int j_max) {
    HodgeParams s;
    for (int j = 1; j <= j_max; ++j) s.sigma[2 * j - 1] = Poly::var(sym("sig", 2 * j - 1));
    return s;
}

HodgeParams special_sigma(const Poly& q, int j_max) {
    if (j_max < 1) throw std::invalid_argument("special_sigma needs j_max >= 1");
    HodgeParams s;
    for (int j = 1; j <= j_max; ++j) {
        Rat c = (Rat(mpz_class(1) << (2 * j)) - 1) * factorial(2 * j - 2);
        s.sigma[2 * j - 1] = q.pow(2 * j - 1) * c;
    }
    return s;
}

const Grading& sigma_grading() {
    static const Grading g = [] {
        Grading x;
        x.family("sig", [](int i) { return i; });
        x.set("q", 1);
        return x;
    }();
    return g;
}

std::vector<Poly> fp_transform(int degree, int g_max, const HodgeParams& s, int sigma_weight,
                               CorrelatorTable& table) {
    if (degree < 0 || g_max < 0 || sigma_weight < 0) throw std::invalid_argument("negative truncation");
    // Z(s) = exp(s X) Z^WK with X = sum_k B_2k/(2k)! sigma_{2k-1} D_k,
    // D_k = d/dt_{2k} - sum t_i d/dt_{i+2k-1} + (eps^2/2) sum (-1)^m d^2/dt_m dt_{2k-2-m}.  Writing
    // log Z(s) = sum_a s^a F^(a), the piece F^(a) has sigma-degree a, and
    // (a+1) F^(a+1) = X_lin F^(a) + (1/2) sum_{b} Q(F^(b), F^(a-b)).
    // Each step lowers the t-degree by at most 2, so piece a is kept through
    // t-degree degree + 2(A - a), A = sigma_weight.
    int A = sigma_weight;
    int kmax = (sigma_weight + 1) / 2;
    std::vector<Rat> ck(kmax + 1);
    std::vector<Poly> sk(kmax + 1);
    for (int k = 1; k <= kmax; ++k) {
        ck[k] = bernoulli(2 * k) / factorial(2 * k);
        sk[k] = s[2 * k - 1];
    }
    auto bound = [&](int a) { return degree + 2 * (A - a); };
    auto cut = [&](const Poly& p, int a) {
        return sigma_cut(p.truncate(Trunc{&degree_grading(), bound(a)}), sigma_weight);
    };
    std::vector<std::vector<Poly>> F;  // F[a][g]
    F.emplace_back();
    for (int g = 0; g <= g_max; ++g) F[0].push_back(free_energy_wk(g, bound(0), table));
    for (int a = 0; a < A; ++a) {
        std::vector<Poly> next(g_max + 1);
        int top = bound(a) + 1;
        for (int k = 1; k <= kmax; ++k) {
            if (sk[k].is_zero()) continue;
            Poly pre = sk[k] * ck[k];
            for (int g = 0; g <= g_max; ++g) {
                const Poly& f = F[a][g];
                Poly lin = dt(f, 2 * k);  // d/dt_{2k}: the t-terms then read -sum (t_i - delta_{i,1}) d/dt_{i+2k-1}
                for (int i = 0; i + 2 * k - 1 <= top; ++i) {
                    Poly d = dt(f, i + 2 * k - 1);
                    if (!d.is_zero()) lin -= Poly::var(t(i)) * d;
                }
                Poly quad;
                for (int m = 0; m <= 2 * k - 2; ++m) {
                    Rat sgn = m % 2 ? -1 : 1;
                    int n = 2 * k - 2 - m;
                    if (g >= 1) quad += dt(dt(F[a][g - 1], m), n) * sgn;
                    for (int b = 0; b <= a; ++b)
                        for (int h = 0; h <= g; ++h) {
                            Poly x = dt(F[b][h], m);
                            if (x.is_zero()) continue;
                            Poly y = dt(F[a - b][g - h], n);
                            if (!y.is_zero()) quad += x.mul(y, Trunc{&degree_grading(), bound(a + 1)}) * sgn;
                        }
                }
                next[g] += (lin + quad * rat(1, 2)) * pre;
            }
        }
        for (int g = 0; g <= g_max; ++g) next[g] = cut(next[g] * rat(1, a + 1), a + 1);
        F.push_back(std::move(next));
    }
    std::vector<Poly> out(g_max + 1);
    for (auto& piece : F)
        for (int g = 0; g <= g_max; ++g) out[g] += piece[g];
    for (auto& p : out) p = cut(p, A);
    return out;
}

std::vector<Poly> dilaton_residual(const std::vector<Poly>& F, int degree) {
    std::vector<Poly> out;
    Trunc tr{&degree_grading(), degree - 1};
    for (int g = 0; g < static_cast<int>(F.size()); ++g) {
        Poly r = dt(F[g], 1) - F[g] * Rat(2 * g - 2);
        for (SymId s : F[g].symbols())
            if (sym_info(s).family == "t") r -= Poly::var(s) * F[g].diff(s);
        if (g == 1) r -= Poly(rat(1, 24));
        out.push_back(r.truncate(tr));
    }
    return out;
}

Poly hodge_jet_polynomial(int g, CorrelatorTable& table) {
    static std::mutex mu;
    static std::map<int, Poly> memo;
    {
        std::lock_guard lock(mu);
        if (auto it = memo.find(g); it != memo.end()) return it->second;
    }
    int W = 3 * g - 3;
    HodgeParams s = symbolic_sigma((W + 1) / 2);
    // parameter monomials prod sig_{2j-1}^{e_j} of weight <= 3g-3
    std::vector<std::pair<Poly, int>> coeffs{{Poly(1), 0}};
    for (int odd = 1; odd <= W; odd += 2) {
        std::vector<std::pair<Poly, int>> more;
        for (auto& [c, w] : coeffs)
            for (int e = 1; w + e * odd <= W; ++e) more.push_back({c * s[odd].pow(e), w + e * odd});
        coeffs.insert(coeffs.end(), more.begin(), more.end());
    }
    Poly P = fit_jet_polynomial(g, coeffs, [&](int B) { return fp_transform(B, g, s, W, table)[g]; });
    std::lock_guard lock(mu);
    return memo[g] = P;
}

Poly hodge_genus_one_residual(int degree, const HodgeParams& s, CorrelatorTable& table) {
    auto F = fp_transform(degree, 1, s, 1, table);
    Grading gr;
    gr.family("t", [](int) { return 1; });
    Trunc tr{&gr, degree};
    Poly v0 = euler_lagrange(degree + 1);
    Poly v1 = v0.diff(t(0)).truncate(tr);
    Poly expect = poly_series_log1p(v1 - Poly(1), tr) * rat(1, 24) + s[1] * v0.truncate(tr) * rat(1, 24);
    return sigma_cut(F[1] - expect, 1).truncate(tr);
}

bool HodgeWkReport::pass() const {
    for (auto& r : residual)
        if (!r.is_zero()) return false;
    return !residual.empty();
}

HodgeWkReport verify_hodge_wk(int degree, int g_max, int q_order, CorrelatorTable& table) {
    HodgeWkReport rep;
    rep.degree = degree;
    rep.g_max = g_max;
    rep.q_order = q_order;
    Poly q = Poly::var("q");
    // q-degree <= q_order means at most q_order extra T factors from the shifts
    int Tdeg = degree + q_order;
    auto FH = fp_transform(Tdeg, g_max, special_sigma(q, (q_order + 1) / 2 + 1), q_order, table);
    // T_i = delta_{i,1} + sum_m A(i,m) q^{i-m} (t_m - delta_{m,1})
    std::unordered_map<SymId, Poly> img;
    for (int i = 0; i <= Tdeg + 1; ++i) {
        Poly Ti(i == 1 ? 1 : 0);
        for (int m = 0; m <= i; ++m) {
            Rat a = special_A(i, m);
            if (a == 0) continue;
            Poly tm = Poly::var(t(m)) - Poly(m == 1 ? 1 : 0);
            Ti += tm * q.pow(i - m) * a;
        }
        img[t(i)] = Ti;
    }
    Grading gr;
    gr.family("t", [&](int) { return q_order + 1; });
    gr.set("q", 1);
    Trunc tr{&gr, degree * (q_order + 1) + q_order};
    SymId qs = sym("q");
    for (int g = 0; g <= g_max; ++g) {
        Poly lhs = substitute(FH[g], img, tr).filter([&](const Monomial& m) {
            return m.exponent(qs) <= q_order && degree_grading().weight(m) <= degree;
        });
        rep.residual.push_back(lhs - free_energy_wk(g, degree, table));
    }
    return rep;
}

QSigma q_from_sigma(const HodgeParams& s) {
    Poly s1 = s[1], s3 = s[3], s5 = s[5];
    QSigma r;
    r.q1 = s1 * rat(1, 32 * 9 * 5);
    r.q2 = (s1.pow(3) * Rat(2) - s3) * rat(1, 1024 * 243 * 5);
    r.q3 = (s1.pow(5) * Rat(16) - s1.pow(2) * s3 * Rat(20) + s5) * rat(1, 8192L * 729 * 25 * 7);
    return r;
}

const std::vector<Rat>& special_q_table() {
    static const std::vector<Rat> tbl{
        Rat(1, 32 * 3 * 5),
        Rat(1, 128 * 81 * 5),
        Rat(0),
        Rat(-13, 1024L * 81 * 25 * 7 * 11),
        Rat(-59, 32L * 2187 * 25 * 49 * 11 * 13),
        Rat(19, 2048L * 81 * 5 * 49 * 11 * 13),
        Rat(1493, 512L * 2187 * 125 * 49 * 13 * 17),
    };
    return tbl;
}

}  // namespace wkm
