#include "wkmap/loopeq.hpp"

#include "wkmap/linsolve.hpp"
#include "wkmap/series.hpp"

#include <functional>
#include <mutex>
#include <stdexcept>

namespace wkm {

namespace {

const Poly& lookup(const std::map<std::pair<int, int>, Poly>& t, int a, int b) {
    static const Poly zero;
    auto it = t.find({a, b});
    return it == t.end() ? zero : it->second;
}

Poly w(int i) { return Poly::var(sym("w", i)); }
Poly l(int i) { return Poly::var(sym("l", i)); }

Rat binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rat(b);
}

// Ring for the Delta-form check: r = sqrt(Delta) with dr/dV = -phi'/(2r).
JetRing loop_ring() {
    JetRing R("V");
    R.add_function(sym("r"), Poly::var("sq", 2) * Poly::var("r", -1) * rat(-1, 2));
    return R;
}

Poly negative_r_part(const Poly& p) {
    SymId r = sym("r");
    return p.filter([r](const Monomial& m) { return m.exponent(r) < 0; });
}

void enumerate_partitions(int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        enumerate_partitions(n - p, p, cur, out);
        cur.pop_back();
    }
}

}  // namespace

const Poly& LoopTables::m(int k, int n) const { return lookup(M, k, n); }
const Poly& LoopTables::y(int k, int n) const { return lookup(Y, k, n); }
const Poly& LoopTables::q(int k, int mm) const { return lookup(Q, k, mm); }

Poly r_derivation(const Poly& p) {
    Poly w1 = w(1);
    SymMap img = [&](SymId s) -> Poly {
        const auto& info = sym_info(s);
        if (info.index < 1) return Poly();
        if (info.family == "w") return w(info.index + 1) - w1 * w(info.index) * Rat(info.index + 1);
        if (info.family == "l") return l(info.index + 1);
        return Poly();
    };
    return apply_derivation(p, img);
}

LoopTables build_tables(int g_max) {
    if (g_max < 1) throw std::invalid_argument("build_tables needs g_max >= 1");
    LoopTables t;
    t.g_max = g_max;
    int kmax = 3 * g_max - 2;  // largest k in Y_k and d^k W
    // omega_s = 2^s/(2s-1)!! gamma_s with gamma_{s+1} = (D_0 - (s+1/2) l_1) gamma_s
    Poly gamma(1);
    for (int s = 0; s <= kmax; ++s) {
        t.omega.push_back(gamma * (Rat(mpz_class(1) << s) / double_factorial_odd(s)));
        gamma = D_op(gamma, 0) - gamma * l(1) * (Rat(s) + rat(1, 2));
    }
    // M_{k+1,n} = (k w_1 + (n-1/2) l_1 + delta) M_{k,n} + (n-1/2) M_{k,n-1}
    t.M[{1, 1}] = Poly(rat(1, 2));
    for (int k = 1; k < kmax; ++k)
        for (int n = 1; n <= k + 1; ++n) {
            Poly acc;
            const Poly& a = t.m(k, n);
            if (!a.is_zero()) acc += (w(1) * Rat(k) + l(1) * (Rat(n) - rat(1, 2))) * a + r_derivation(a);
            const Poly& b = t.m(k, n - 1);
            if (!b.is_zero()) acc += b * (Rat(n) - rat(1, 2));
            if (!acc.is_zero()) t.M[{k + 1, n}] = acc;
        }
    // Y_{k,n}: W d^k W appears with weight (k+2) for k >= 1, middle terms
    // C(k+1, j+1) d^j W d^{k-j} W; only negative Delta powers are kept.
    t.Y[{0, 0}] = t.omega[0] * t.omega[0];
    for (int k = 1; k <= kmax; ++k) {
        std::map<int, Poly> acc;
        for (int n2 = 1; n2 <= k; ++n2)
            for (int s = 0; s <= n2; ++s) acc[k + s - n2] += t.omega[s] * t.m(k, n2) * Rat(k + 2);
        for (int j = 1; j <= k - 1; ++j)
            for (int n1 = 1; n1 <= j; ++n1)
                for (int n2 = 1; n2 <= k - j; ++n2)
                    acc[k - n1 - n2] += t.m(j, n1) * t.m(k - j, n2) * binom(k + 1, j + 1);
        for (auto& [n, p] : acc)
            if (!p.is_zero()) t.Y[{k, n}] = p;
    }
    // Q_{k+1,m} = (k w_1 + (m-2) l_1 + delta) Q_{k,m} + (m-1) Q_{k,m-1}
    t.Q[{0, 2}] = Poly(1);
    for (int k = 0; k < kmax; ++k)
        for (int mm = 2; mm <= k + 3; ++mm) {
            Poly acc;
            const Poly& a = t.q(k, mm);
            if (!a.is_zero()) acc += (w(1) * Rat(k) + l(1) * Rat(mm - 2)) * a + r_derivation(a);
            const Poly& b = t.q(k, mm - 1);
            if (!b.is_zero()) acc += b * Rat(mm - 1);
            if (!acc.is_zero()) t.Q[{k + 1, mm}] = acc;
        }
    return t;
}

GenusSolution genus_one() {
    GenusSolution s;
    s.g = 1;
    s.gradients = {l(1) * rat(1, 16), Poly(rat(1, 24))};
    return s;
}

GenusSolution solve_genus(int g, const LoopTables& t, const std::vector<GenusSolution>& lower) {
    if (g == 1) return genus_one();
    if (g < 1 || g > t.g_max) throw std::invalid_argument("genus outside the table range");
    if (static_cast<int>(lower.size()) < g - 1) throw std::invalid_argument("lower genera missing");
    auto P = [&](int m, int k) -> const Poly& {
        static const Poly zero;
        const auto& gr = lower[m - 1].gradients;
        return k >= 0 && k < static_cast<int>(gr.size()) ? gr[k] : zero;
    };
    int top = 3 * g - 2, prev = 3 * g - 5;
    GenusSolution s;
    s.g = g;
    s.gradients.assign(top + 1, Poly());
    // The sum over k1, k2 is independent of the unknowns: precompute.
    std::vector<std::vector<Poly>> quad(prev + 1, std::vector<Poly>(prev + 1));
    for (int k1 = 0; k1 <= prev; ++k1)
        for (int k2 = 0; k2 <= prev; ++k2) {
            Poly v = D_op(P(g - 1, k1), k2, k2 == 1 ? 2 * g - 4 - k1 : 0);
            for (int m = 1; m <= g - 1; ++m) v += P(m, k1) * P(g - m, k2);
            quad[k1][k2] = v;
        }
    auto rhs = [&](int K) {
        Poly acc;
        for (int ll = 0; ll <= prev; ++ll) {
            const Poly& q = t.q(ll + 2, K + 1);
            if (!q.is_zero() && !P(g - 1, ll).is_zero()) acc += q * P(g - 1, ll) * rat(1, 16);
        }
        for (int j = K + 1; j <= top; ++j) {
            const Poly& y = t.y(j, j - K);
            if (!y.is_zero() && !s.gradients[j].is_zero()) acc -= y * s.gradients[j];
        }
        for (int k1 = 0; k1 <= prev; ++k1)
            for (int k2 = 0; k2 <= prev; ++k2) {
                if (quad[k1][k2].is_zero()) continue;
                Poly mm;
                for (int n1 = 1; n1 <= k1 + 1; ++n1) {
                    int n2 = K - n1;
                    if (n2 < 1 || n2 > k2 + 1) continue;
                    mm += t.m(k1 + 1, n1) * t.m(k2 + 1, n2);
                }
                if (!mm.is_zero()) acc += mm * quad[k1][k2] * rat(1, 2);
            }
        return acc;
    };
    for (int K = top; K >= 0; --K) {
        Rat diag = double_factorial_odd(K + 1) / Rat(mpz_class(1) << K);
        if (t.y(K, 0) != Poly(diag)) throw std::logic_error("diagonal entry Y_{K,0} differs from (2K+1)!!/2^K");
        s.gradients[K] = rhs(K) * (1 / diag);
    }
    // equations for larger K carry no unknowns on the diagonal and must vanish
    for (int K = top + 1; K <= top + 3; ++K)
        if (!rhs(K).is_zero()) throw std::logic_error("loop equation inconsistent at y^-" + std::to_string(K));
    Poly pot = s.gradients[1];
    for (int k = 2; k <= top; ++k) pot += w(k - 1) * s.gradients[k] * Rat(k);
    s.potential = pot * rat(1, 2 * g - 2);
    if (!consistency_holds(s)) throw std::logic_error("gradients are not those of the assembled potential");
    return s;
}

std::vector<GenusSolution> solve_loop(int g_max) {
    std::vector<GenusSolution> out{genus_one()};
    if (g_max < 2) return out;
    LoopTables t = build_tables(g_max);
    for (int g = 2; g <= g_max; ++g) out.push_back(solve_genus(g, t, out));
    return out;
}

bool consistency_holds(const GenusSolution& s) {
    if (s.g < 2) return true;
    for (int k = 0; k < static_cast<int>(s.gradients.size()); ++k)
        if (D_op(s.potential, k, k == 1 ? 2 * s.g - 2 : 0) != s.gradients[k]) return false;
    for (int k = static_cast<int>(s.gradients.size()); k <= 3 * s.g + 1; ++k)
        if (!D_op(s.potential, k).is_zero()) return false;
    return true;
}

bool gradient_weights_hold(const GenusSolution& s) {
    for (int k = 0; k < static_cast<int>(s.gradients.size()); ++k) {
        const Poly& p = s.gradients[k];
        if (!p.is_zero() && r_weight(p) != 3 * s.g - 2 - k) return false;
    }
    return s.g < 2 || r_weight(s.potential) == 3 * s.g - 3;
}

Poly jet_potential(const GenusSolution& s) {
    if (s.g < 2) throw std::invalid_argument("genus one potential is logarithmic");
    return from_scaled(s.potential, 2 * s.g - 2);
}

Poly jet_gradient(const GenusSolution& s, int k) {
    if (k < 0 || k >= static_cast<int>(s.gradients.size())) return Poly();
    return from_scaled(s.gradients[k], 2 * s.g - 2 - k);
}

Poly loop_residual(int g, const std::vector<GenusSolution>& sols) {
    if (g < 1 || static_cast<int>(sols.size()) < g) throw std::invalid_argument("solutions missing");
    JetRing R = loop_ring();
    int top = 3 * g - 2;
    int kmax = top + 2;
    // gradients and second derivatives in jet form
    auto grad = [&](int h, int k) -> Poly {
        if (h < 1) return Poly();
        const GenusSolution& s = sols[h - 1];
        if (h == 1) {
            if (k == 0) return Poly::var("l1") * rat(1, 16);
            if (k == 1) return Poly::var("V1", -1) * rat(1, 24);
            return Poly();
        }
        return R.partial(jet_potential(s), k);
    };
    auto hess = [&](int h, int k, int m) -> Poly { return h < 1 ? Poly() : R.partial(grad(h, k), m); };
    // W up to s = kmax, directly from its definition
    std::vector<Poly> Wparts;
    Poly c = Poly::var("sq", -1);
    for (int s = 0; s <= kmax; ++s) {
        Wparts.push_back(c * (Rat(mpz_class(1) << s) / double_factorial_odd(s)) * Poly::var("r", 2 * s - 1));
        c = R.partial(c, 0).mul_monomial(Monomial::var(sym("sq"), -2));
    }
    auto W_upto = [&](int smax) {
        Poly acc;
        for (int s = 0; s <= smax; ++s) acc += Wparts[s];
        return acc;
    };
    std::vector<Poly> dW(kmax + 1);  // d^k W for k >= 1 is a finite sum
    dW[1] = R.d_total(W_upto(kmax));
    dW[1] = negative_r_part(dW[1]);
    for (int k = 2; k <= kmax; ++k) dW[k] = R.d_total(dW[k - 1]);

    Poly lhs;
    for (int k = 0; k <= top; ++k) {
        Poly gk = grad(g, k);
        if (gk.is_zero()) continue;
        // d^k(W^2): only W terms with s + s' <= k reach negative powers
        Poly Wk = W_upto(k);
        Poly sq2 = (Wk * Wk).filter([&](const Monomial& m) { return m.exponent(sym("r")) <= 2 * k - 2; });
        Poly term = R.d_total(sq2, k);
        for (int j = 1; j <= k; ++j) {
            Poly a = j - 1 == 0 ? W_upto(k) : dW[j - 1];
            term += a * dW[k + 1 - j] * binom(k, j);
        }
        lhs += negative_r_part(term) * gk;
    }
    Poly rhs;
    int prev = 3 * (g - 1) - 2;
    for (int k = 0; k <= prev; ++k)
        for (int m = 0; m <= prev; ++m) {
            Poly f = hess(g - 1, k, m);
            for (int h = 1; h <= g - 1; ++h) f += grad(h, k) * grad(g - h, m);
            if (f.is_zero()) continue;
            rhs += negative_r_part(dW[k + 1] * dW[m + 1]) * f * rat(1, 2);
        }
    Poly inv4 = Poly::var("r", -4);
    for (int k = 0; k <= prev; ++k) {
        Poly gk = grad(g - 1, k);
        if (!gk.is_zero()) rhs += R.d_total(inv4, k + 2) * gk * rat(1, 16);
    }
    if (g == 1) rhs += inv4 * rat(1, 16);
    return lhs - rhs;
}

std::vector<Poly> jet_map_M(int k_max) {
    JetRing R;
    std::vector<Poly> M(k_max + 1);
    M[0] = Poly::var("ph0");
    if (k_max < 1) return M;
    Poly base = Poly::var("sq") * Poly::var("V1");  // d_x V = sqrt(phi') V_1
    std::vector<Poly> dx{base};
    M[1] = Poly::var("sq", 3) * Poly::var("V1");
    for (int k = 1; k < k_max; ++k) {
        int top = R.max_jet(M[k]);
        while (static_cast<int>(dx.size()) <= top) dx.push_back(R.d_total(dx.back()));
        Poly next;
        for (int j = 0; j <= top; ++j) {
            Poly p = R.partial(M[k], j);
            if (!p.is_zero()) next += p * dx[j];
        }
        M[k + 1] = next;
    }
    return M;
}

std::vector<Poly> jet_map(int k_max) {
    auto M = jet_map_M(k_max);
    std::vector<Poly> N(k_max + 1);
    for (int k = 1; k <= k_max; ++k) {
        Poly p = M[k].mul_monomial(Monomial::var(sym("sq"), -(k + 2)));
        if (p.contains(sym("sq"))) throw std::logic_error("jet map is not homogeneous in sqrt(phi')");
        N[k] = to_scaled(p, k);
    }
    return N;
}

Poly fit_jet_polynomial(int g, const std::vector<std::pair<Poly, int>>& coefficients,
                        const std::function<Poly(int)>& data) {
    if (g < 2) throw std::invalid_argument("jet polynomial defined for g >= 2");
    int K = 3 * g - 2;
    struct Unknown {
        Poly coeff;
        std::vector<int> parts;
    };
    std::vector<Unknown> unknowns;
    for (auto& [c, wt] : coefficients) {
        if (wt > 3 * g - 3) continue;
        std::vector<std::vector<int>> parts;
        std::vector<int> cur;
        enumerate_partitions(3 * g - 3 - wt, 3 * g - 3, cur, parts);
        for (auto& lam : parts) unknowns.push_back({c, lam});
    }
    int n = static_cast<int>(unknowns.size());

    // Tuple t = (x, 0, t_2, t_3, ...); grading x -> 1, t_k -> k - 1.
    Grading gr;
    gr.set("x", 1);
    gr.family("t", [](int k) { return k - 1; });
    for (int B = 3 * g - 3 + 2;; B += 2) {
        Trunc tr{&gr, B};
        // every t_k of weight <= B + K can reach the truncated x-jets
        Tuple tup{{0, Poly::var("x")}};
        for (int k = 2; k <= B + K + 1; ++k) tup[k] = Poly::var(sym("t", k));
        Poly E = euler_lagrange(tup, B + K, gr);
        std::vector<Poly> v(K + 1);
        v[0] = E;
        for (int k = 1; k <= K; ++k) v[k] = v[k - 1].diff(sym("x"));
        for (auto& x : v) x = x.truncate(tr);
        Poly v1inv = poly_series_inverse(v[1], tr);

        std::map<std::vector<int>, Poly> cache;
        auto value = [&](const std::vector<int>& lam) {
            if (auto it = cache.find(lam); it != cache.end()) return it->second;
            Poly val(1);
            int e = 2 * g - 2;
            for (int p : lam) {
                val = val.mul(v[p + 1], tr);
                e -= p + 1;
            }
            val = e >= 0 ? val.mul(v[1].pow(e, tr), tr) : val.mul(v1inv.pow(-e, tr), tr);
            return cache[lam] = val;
        };
        // F_g(x, 0, t_2, ...) truncated at weight B; only weight-B-complete data enters
        std::unordered_map<SymId, Poly> img{{sym("t", 0), Poly::var("x")}, {sym("t", 1), Poly()}};
        Poly F = substitute(data(B), img).truncate(tr);  // t_0 has weight -1 under gr

        std::map<Monomial, int> row_of;
        std::vector<std::vector<Rat>> rows;
        std::vector<Rat> rhs;
        auto row = [&](const Monomial& m) {
            auto [it, fresh] = row_of.emplace(m, static_cast<int>(rows.size()));
            if (fresh) {
                rows.emplace_back(n, Rat(0));
                rhs.emplace_back(0);
            }
            return it->second;
        };
        for (int i = 0; i < n; ++i) {
            Poly col = unknowns[i].coeff * value(unknowns[i].parts);
            for (auto& [m, c] : col.terms()) rows[row(m)][i] += c;
        }
        for (auto& [m, c] : F.terms()) rhs[row(m)] = c;
        LinearSolution sol = solve_linear(rows, rhs, n);
        if (sol.rank < n) {
            if (B > 3 * g - 3 + 4 * K) throw std::runtime_error("jet fit underdetermined");
            continue;
        }
        if (!sol.consistent) throw std::runtime_error("jet fit inconsistent: no (3g-2)-jet representation found");
        Poly P;
        for (int i = 0; i < n; ++i) {
            Poly mono = unknowns[i].coeff * sol.x[i];
            for (int p : unknowns[i].parts) mono = mono * w(p);
            P += mono;
        }
        return P;
    }
}

Poly wk_jet_polynomial(int g, CorrelatorTable& table) {
    static std::mutex mu;
    static std::map<int, Poly> memo;
    {
        std::lock_guard lock(mu);
        if (auto it = memo.find(g); it != memo.end()) return it->second;
    }
    Poly P = fit_jet_polynomial(g, {{Poly(1), 0}}, [&](int B) { return free_energy_wk(g, B, table); });
    std::lock_guard lock(mu);
    return memo[g] = P;
}

GenusSolution fg_via_wk(int g, CorrelatorTable& table) {
    std::vector<Poly> N = jet_map(std::max(3 * g - 2, 2));
    GenusSolution s;
    s.g = g;
    if (g == 1) {
        // (1/24) log v_1 with v_1 = sq^3 V_1
        JetRing R;
        Poly M1 = Poly::var("sq", 3) * Poly::var("V1");
        Poly inv = M1.pow(-1);
        s.gradients = {R.partial(M1, 0) * inv * rat(1, 24), R.partial(M1, 1) * inv * rat(1, 24) * Poly::var("V1")};
        return s;
    }
    Poly Pwk = wk_jet_polynomial(g, table);
    std::unordered_map<SymId, Poly> img;
    for (int i = 1; i <= 3 * g - 3; ++i) img[sym("w", i)] = N[i + 1];
    s.potential = substitute(Pwk, img);
    for (int k = 0; k <= 3 * g - 2; ++k) s.gradients.push_back(D_op(s.potential, k, k == 1 ? 2 * g - 2 : 0));
    return s;
}

}  // namespace wkm
