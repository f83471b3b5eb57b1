#include "wkmap/intersection.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wkm {

namespace {

Rat factorial(int n) {
    Rat f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// Multiset as (value, multiplicity) pairs.
std::vector<std::pair<int, int>> runs(const std::vector<int>& sorted) {
    std::vector<std::pair<int, int>> r;
    for (int v : sorted) {
        if (!r.empty() && r.back().first == v)
            ++r.back().second;
        else
            r.emplace_back(v, 1);
    }
    return r;
}

Rat binom(int n, int k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rat(b);
}

Rat recurse(int g, std::vector<int> idx, CorrelatorTable& table);

Rat lookup(int g, std::vector<int> idx, CorrelatorTable& table) {
    if (g < 0) return 0;
    for (int v : idx)
        if (v < 0) return 0;
    std::sort(idx.begin(), idx.end());
    if (2 * g - 2 + static_cast<int>(idx.size()) <= 0) return 0;
    if (!dimension_matches(g, idx)) return 0;
    CorrelatorKey key{g, idx};
    if (auto v = table.find(key)) return *v;
    Rat v = recurse(g, idx, table);
    table.insert(key, v);
    return v;
}

Rat recurse(int g, std::vector<int> idx, CorrelatorTable& table) {
    if (g == 0 && idx == std::vector<int>{0, 0, 0}) return 1;
    if (g == 1 && idx == std::vector<int>{1}) return rat(1, 24);
    // remove tau_{k+1} with k+1 the largest index
    int top = idx.back();
    idx.pop_back();
    int k = top - 1;
    Rat acc = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        int d = idx[j];
        if (d + k < 0) continue;
        std::vector<int> next = idx;
        next[j] = d + k;
        acc += double_factorial_odd(k + d + 1) / double_factorial_odd(d) * lookup(g, next, table);
    }
    if (k >= 1) {
        auto parts = runs(idx);
        for (int a = 0; a <= k - 1; ++a) {
            int b = k - 1 - a;
            Rat w = double_factorial_odd(a + 1) * double_factorial_odd(b + 1) / 2;
            std::vector<int> next = idx;
            next.push_back(a);
            next.push_back(b);
            acc += w * lookup(g - 1, next, table);
            // splits of the remaining multiset between the two factors
            std::vector<int> choice(parts.size(), 0);
            while (true) {
                std::vector<int> left{a}, right{b};
                Rat mult = 1;
                for (std::size_t p = 0; p < parts.size(); ++p) {
                    mult *= binom(parts[p].second, choice[p]);
                    left.insert(left.end(), choice[p], parts[p].first);
                    right.insert(right.end(), parts[p].second - choice[p], parts[p].first);
                }
                for (int g1 = 0; g1 <= g; ++g1) {
                    Rat l = lookup(g1, left, table);
                    if (l == 0) continue;
                    Rat r = lookup(g - g1, right, table);
                    if (r != 0) acc += w * mult * l * r;
                }
                std::size_t p = 0;
                while (p < parts.size() && choice[p] == parts[p].second) choice[p++] = 0;
                if (p == parts.size()) break;
                ++choice[p];
            }
        }
    }
    return acc / double_factorial_odd(k + 2);
}

void enumerate_multisets(int n, int sum, int min_value, std::vector<int>& cur,
                         const std::function<void(const std::vector<int>&)>& f) {
    if (n == 0) {
        if (sum == 0) f(cur);
        return;
    }
    for (int v = min_value; v * n <= sum; ++v) {
        cur.push_back(v);
        enumerate_multisets(n - 1, sum - v, v, cur, f);
        cur.pop_back();
    }
}

}  // namespace

Rat double_factorial_odd(int n) {
    if (n < 0) throw std::out_of_range("double factorial of a negative odd number below -1");
    Rat r = 1;
    for (int k = 3; k <= 2 * n - 1; k += 2) r *= k;
    return r;
}

bool dimension_matches(int g, const std::vector<int>& indices) {
    long s = std::accumulate(indices.begin(), indices.end(), 0L);
    return s == 3L * g - 3 + static_cast<long>(indices.size());
}

std::optional<Rat> CorrelatorTable::find(const CorrelatorKey& k) const {
    std::shared_lock lock(mu_);
    auto it = data_.find(k);
    if (it == data_.end()) return std::nullopt;
    return it->second;
}

void CorrelatorTable::insert(const CorrelatorKey& k, const Rat& v) {
    if (!dimension_matches(k.genus, k.indices)) throw std::invalid_argument("correlator key violates dimension constraint");
    std::unique_lock lock(mu_);
    data_.emplace(k, v);
}

std::size_t CorrelatorTable::size() const {
    std::shared_lock lock(mu_);
    return data_.size();
}

std::map<CorrelatorKey, Rat> CorrelatorTable::snapshot() const {
    std::shared_lock lock(mu_);
    return data_;
}

std::size_t CorrelatorTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) return 0;
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto a = line.find(';'), b = line.rfind(';');
        if (a == std::string::npos || a == b) throw std::runtime_error("malformed cache line: " + line);
        CorrelatorKey k;
        k.genus = std::stoi(line.substr(0, a));
        std::stringstream idx(line.substr(a + 1, b - a - 1));
        std::string item;
        while (std::getline(idx, item, ','))
            if (!item.empty()) k.indices.push_back(std::stoi(item));
        std::sort(k.indices.begin(), k.indices.end());
        insert(k, parse_rat(line.substr(b + 1)));
        ++n;
    }
    return n;
}

void CorrelatorTable::save(const std::string& path) const {
    auto snap = snapshot();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + path);
    for (auto& [k, v] : snap) {
        out << k.genus << ';';
        for (std::size_t i = 0; i < k.indices.size(); ++i) out << (i ? "," : "") << k.indices[i];
        out << ';' << to_string(v) << '\n';
    }
}

CorrelatorTable& default_table() {
    static CorrelatorTable t;
    return t;
}

Rat genus0(const std::vector<int>& indices) {
    int n = static_cast<int>(indices.size());
    if (n < 3 || !dimension_matches(0, indices)) return 0;
    Rat r = factorial(n - 3);
    for (int i : indices) r /= factorial(i);
    return r;
}

Rat correlator(int g, std::vector<int> indices, CorrelatorTable& table) { return lookup(g, std::move(indices), table); }

Poly free_energy_wk(int g, int degree, CorrelatorTable& table) {
    Accum acc;
    for (int n = 1; n <= degree; ++n) {
        int sum = 3 * g - 3 + n;
        if (sum < 0 || 2 * g - 2 + n <= 0) continue;
        std::vector<int> cur;
        enumerate_multisets(n, sum, 0, cur, [&](const std::vector<int>& m) {
            Rat v = correlator(g, m, table);
            if (v == 0) return;
            Monomial mono;
            for (auto& [val, mult] : runs(m)) {
                v /= factorial(mult);
                mono = mono * Monomial::var(sym("t", val), mult);
            }
            acc.add(mono, v);
        });
    }
    return acc.take();
}

Poly free_energy_phi(const Series1& phi, int g, int degree, CorrelatorTable& table) {
    // t-degree needed: `degree` shifted factors plus at most 3g-3+degree
    // constant ones (dimension constraint), so indices stay below that too.
    int extra = std::max(0, 3 * g - 3 + degree);
    int t_degree = degree + extra;
    int size = 3 * g - 3 + t_degree + 2;
    ActionMatrices am = action_matrices(phi.order() >= size ? phi.truncated(size) : phi, std::min(size, phi.order()));
    int n = static_cast<int>(am.N.size());
    Poly fwk = free_energy_wk(g, t_degree, table);
    std::unordered_map<SymId, Poly> img;
    for (int m = 0; m < n; ++m) {
        Poly tm(m == 1 ? 1 : 0);
        for (int i = 0; i <= m; ++i) {
            if (am.N[m][i].is_zero()) continue;
            tm += am.N[m][i] * (Poly::var(sym("T", i)) - Poly(i == 1 ? 1 : 0));
        }
        img[sym("t", m)] = tm;
    }
    for (SymId s : fwk.symbols())
        if (!img.count(s)) throw std::invalid_argument("group element truncated too low for free_energy_phi");
    static const Grading gT = [] {
        Grading gr;
        gr.family("T", [](int) { return 1; });
        return gr;
    }();
    return substitute(fwk, img, Trunc{&gT, degree});
}

std::vector<Poly> virasoro_check(const Series1& phi, int k, int degree, int g_max, CorrelatorTable& table) {
    if (k < -1) throw std::invalid_argument("Virasoro index must be >= -1");
    static const Grading gT = [] {
        Grading gr;
        gr.family("T", [](int) { return 1; });
        return gr;
    }();
    int work = degree + 2;
    std::vector<Poly> F(g_max + 1);
    for (int g = 0; g <= g_max; ++g) F[g] = free_energy_phi(phi, g, work, table);

    int size = 0;
    for (auto& f : F)
        for (SymId s : f.symbols()) size = std::max(size, sym_info(s).index + 1);
    size = std::max(size, k + 3) + 1;
    ActionMatrices am = action_matrices(phi.truncated(std::min(phi.order(), size + k + 1)),
                                        std::min(size + k + 1, phi.order()));
    int n = static_cast<int>(am.M.size());
    auto M = [&](int m, int r) -> Poly { return (m < n && r < n) ? am.M[r][m] : Poly(); };  // M^m_r
    auto N = [&](int i, int j) -> Poly { return (i < n && j < n) ? am.N[i][j] : Poly(); };  // N^j_i
    auto dT = [](const Poly& f, int r) { return f.diff(sym("T", r)); };
    Trunc tr{&gT, degree};

    // b_{jr} Ttilde_j d/dT_r
    std::map<std::pair<int, int>, Poly> b;
    for (int i = std::max(0, -k); i < n; ++i) {
        Rat c = double_factorial_odd(i + k + 1) / (double_factorial_odd(i) * Rat(mpz_class(1) << (k + 1)));
        for (int j = 0; j <= i; ++j) {
            Poly nij = N(i, j);
            if (nij.is_zero()) continue;
            for (int r = i + k; r < n; ++r) {
                Poly mr = M(i + k, r);
                if (!mr.is_zero()) b[{j, r}] += c * nij * mr;
            }
        }
    }
    // a_{r1 r2} d^2/dT_r1 dT_r2
    std::map<std::pair<int, int>, Poly> a;
    for (int i = 0; i <= k - 1; ++i) {
        int j = k - 1 - i;
        Rat c = double_factorial_odd(i + 1) * double_factorial_odd(j + 1) / (2 * Rat(mpz_class(1) << (k + 1)));
        for (int r1 = i; r1 < n; ++r1)
            for (int r2 = j; r2 < n; ++r2) {
                Poly p = M(i, r1) * M(j, r2);
                if (!p.is_zero()) a[{r1, r2}] += c * p;
            }
    }

    std::vector<Poly> res(g_max + 1);
    for (int g = 0; g <= g_max; ++g) {
        Poly acc;
        for (auto& [jr, coef] : b) {
            Poly d = dT(F[g], jr.second);
            if (d.is_zero()) continue;
            Poly tt = Poly::var(sym("T", jr.first)) - Poly(jr.first == 1 ? 1 : 0);
            acc += (coef * tt).mul(d, tr);
        }
        for (auto& [rr, coef] : a) {
            if (g >= 1) acc += coef * dT(dT(F[g - 1], rr.first), rr.second);
            for (int g1 = 0; g1 <= g; ++g1) {
                Poly d1 = dT(F[g1], rr.first);
                if (d1.is_zero()) continue;
                acc += (coef * d1).mul(dT(F[g - g1], rr.second), tr);
            }
        }
        if (g == 0 && k == -1) acc += Poly::var(sym("T", 0), 2) * rat(1, 2);
        if (g == 1 && k == 0) acc += Poly(rat(1, 16));
        res[g] = acc.truncate(tr);
    }
    return res;
}

}  // namespace wkm
