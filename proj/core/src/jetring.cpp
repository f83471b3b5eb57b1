#include "wkmap/jetring.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace wkm {

namespace {

enum Kind { tower = 0, ell = 1, removed = 2 };

Rat binom(int n, int k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rat(b);
}

}  // namespace

JetRing::JetRing(std::string jet) : jet_(std::move(jet)) {
    towers_["l"] = ell;
    towers_["ph"] = tower;
    towers_["S"] = tower;
    singles_[sym("sq")] = Poly::var("sq") * Poly::var("l1") * rat(1, 2);
}

JetRing& JetRing::add_tower(const std::string& family) {
    towers_[family] = tower;
    return *this;
}

JetRing& JetRing::add_function(SymId s, Poly derivative) {
    singles_[s] = std::move(derivative);
    return *this;
}

JetRing& JetRing::without_builtin(const std::string& family) {
    if (family == "sq")
        singles_.erase(sym("sq"));
    else
        towers_[family] = removed;
    return *this;
}

bool JetRing::is_jet(SymId s) const {
    const auto& info = sym_info(s);
    return info.family == jet_ && info.index >= 0;
}

bool JetRing::is_function(SymId s) const {
    if (singles_.count(s)) return true;
    const auto& info = sym_info(s);
    auto it = towers_.find(info.family);
    return it != towers_.end() && it->second != removed && info.index >= 0;
}

Poly JetRing::function_derivative(SymId s) const {
    if (auto it = singles_.find(s); it != singles_.end()) return it->second;
    const auto& info = sym_info(s);
    auto it = towers_.find(info.family);
    if (it == towers_.end() || it->second == removed || info.index < 0) return Poly();
    if (it->second == ell && info.index == 0) throw std::domain_error("l0 = log phi' is not a polynomial generator");
    return Poly::var(sym(info.family, info.index + 1));
}

Poly JetRing::partial(const Poly& p, int k) const {
    Poly r = p.diff(jet_sym(k));
    if (k == 0)
        for (SymId s : p.symbols())
            if (is_function(s)) r += p.diff(s) * function_derivative(s);
    return r;
}

Poly JetRing::d_total(const Poly& p, const Trunc& tr) const {
    SymId v1 = jet_sym(1);
    SymMap image = [&](SymId s) -> Poly {
        const auto& info = sym_info(s);
        if (info.family == jet_ && info.index >= 0) return Poly::var(jet_sym(info.index + 1));
        if (is_function(s)) return function_derivative(s).mul_monomial(Monomial::var(v1));
        return Poly();
    };
    return apply_derivation(p, image, tr);
}

Poly JetRing::d_total(const Poly& p, int times, const Trunc& tr) const {
    Poly r = p;
    for (int i = 0; i < times; ++i) r = d_total(r, tr);
    return r;
}

int JetRing::max_jet(const Poly& p) const {
    int m = -1;
    for (SymId s : p.symbols())
        if (is_jet(s)) m = std::max(m, sym_info(s).index);
    return m;
}

Poly JetRing::variational_derivative(const Poly& h) const {
    int top = std::max(max_jet(h), 0);
    Poly r;
    for (int k = top; k >= 0; --k) {
        // Horner in (-d): r <- -d(r) + dh/dV_k
        r = -d_total(r) + partial(h, k);
    }
    return r;
}

const Grading& r_grading() {
    static const Grading g = [] {
        Grading gr;
        gr.family("w", [](int i) { return i; });
        gr.family("l", [](int i) { return i; });
        return gr;
    }();
    return g;
}

int r_weight(const Poly& p) {
    if (p.is_zero()) return 0;
    int w = -2;
    for (auto& [m, c] : p.terms()) {
        int x = r_grading().weight(m);
        if (w == -2) w = x;
        if (w != x) return -1;
    }
    return w;
}

Poly D_op(const Poly& p, int k, int shift) {
    if (k < 0) throw std::invalid_argument("D_k needs k >= 0");
    Poly r;
    if (k == 0) {
        for (SymId s : p.symbols()) {
            const auto& info = sym_info(s);
            if (info.family == "l" && info.index >= 1) r += p.diff(s) * Poly::var(sym("l", info.index + 1));
        }
        return r;
    }
    if (k == 1) {
        for (SymId s : p.symbols()) {
            const auto& info = sym_info(s);
            if (info.family == "w" && info.index >= 1) r -= p.diff(s) * Poly::var(s) * Rat(info.index + 1);
        }
        return r + p * Rat(shift);
    }
    return p.diff(sym("w", k - 1));
}

Poly bell_ell(int n) {
    static std::vector<Poly> memo{Poly(1)};
    static std::mutex mu;
    std::lock_guard lock(mu);
    while (static_cast<int>(memo.size()) <= n) {
        int m = static_cast<int>(memo.size());
        Poly y;
        for (int i = 0; i < m; ++i) y += memo[m - 1 - i] * Poly::var(sym("l", i + 1)) * binom(m - 1, i);
        memo.push_back(y);
    }
    return memo[n];
}

Poly ph_to_ell(const Poly& p) {
    PowerMap img = [](SymId s, int e) -> std::optional<Poly> {
        const auto& info = sym_info(s);
        if (info.family != "ph" || info.index < 1) return std::nullopt;
        if (info.index == 1) return Poly::var("sq", 2 * e);
        if (e < 0) throw std::domain_error("negative power of a higher derivative of phi");
        return (Poly::var("sq", 2) * bell_ell(info.index - 1)).pow(e);
    };
    return substitute(p, img);
}

Poly to_scaled(const Poly& jet_form, int deg, const std::string& jet) {
    SymId v1 = sym(jet, 1);
    Accum acc;
    for (auto& [m, c] : jet_form.terms()) {
        Monomial out;
        int e1 = 0;
        for (auto& [s, e] : m.factors()) {
            const auto& info = sym_info(s);
            if (info.family == jet && info.index >= 0) {
                if (info.index == 0) throw std::domain_error("explicit " + jet + "0 in jet form: " + m.str());
                if (info.index == 1) {
                    e1 += e;
                    continue;
                }
                if (e < 0) throw std::domain_error("negative power of a higher jet: " + m.str());
                out = out * Monomial::var(sym("w", info.index - 1), e);
                e1 += e * info.index;
            } else {
                out = out * Monomial::var(s, e);
            }
        }
        if (e1 != deg)
            throw std::domain_error("term " + m.str() + " has scaling degree " + std::to_string(e1) + ", expected " +
                                    std::to_string(deg));
        (void)v1;
        acc.add(out, c);
    }
    return acc.take();
}

Poly from_scaled(const Poly& r_form, int deg, const std::string& jet) {
    Accum acc;
    for (auto& [m, c] : r_form.terms()) {
        Monomial out = Monomial::var(sym(jet, 1), deg);
        for (auto& [s, e] : m.factors()) {
            const auto& info = sym_info(s);
            if (info.family == "w" && info.index >= 1)
                out = out * Monomial::var(sym(jet, info.index + 1), e) * Monomial::var(sym(jet, 1), -e * (info.index + 1));
            else
                out = out * Monomial::var(s, e);
        }
        acc.add(out, c);
    }
    return acc.take();
}

Poly LocalOperator::coeff(int j) const {
    auto it = a.find(j);
    return it == a.end() ? Poly() : it->second;
}

LocalOperator LocalOperator::operator+(const LocalOperator& o) const {
    LocalOperator r = *this;
    for (auto& [j, c] : o.a) r.a[j] += c;
    return r.normalized();
}

LocalOperator LocalOperator::operator-(const LocalOperator& o) const { return *this + o.scaled(Poly(-1)); }

LocalOperator LocalOperator::scaled(const Poly& c) const {
    LocalOperator r;
    for (auto& [j, x] : a) r.a[j] = c * x;
    return r.normalized();
}

bool LocalOperator::operator==(const LocalOperator& o) const { return normalized().a == o.normalized().a; }

LocalOperator LocalOperator::truncated(const Trunc& tr) const {
    LocalOperator r;
    for (auto& [j, x] : a) r.a[j] = x.truncate(tr);
    return r.normalized();
}

LocalOperator LocalOperator::normalized() const {
    LocalOperator r;
    for (auto& [j, x] : a)
        if (!x.is_zero()) r.a[j] = x;
    return r;
}

LocalOperator compose(const LocalOperator& x, const LocalOperator& y, const JetRing& ring, const Trunc& tr) {
    LocalOperator r;
    for (auto& [i, ai] : x.a)
        for (auto& [j, bj] : y.a) {
            Poly d = bj;
            for (int m = 0; m <= i; ++m) {
                if (m > 0) d = ring.d_total(d, tr);
                if (d.is_zero()) break;
                r.a[i - m + j] += ai.mul(d, tr) * binom(i, m);
            }
        }
    return r.normalized();
}

LocalOperator adjoint(const LocalOperator& x, const JetRing& ring, const Trunc& tr) {
    LocalOperator r;
    for (auto& [j, aj] : x.a) {
        LocalOperator term = compose(LocalOperator::derivative(j), LocalOperator::multiplication(aj), ring, tr);
        r = r + term.scaled(Poly(j % 2 ? -1 : 1));
    }
    return r;
}

Poly apply(const LocalOperator& x, const Poly& f, const JetRing& ring, const Trunc& tr) {
    Poly r, d = f;
    int top = x.a.empty() ? 0 : x.a.rbegin()->first;
    for (int j = 0; j <= top; ++j) {
        if (j > 0) d = ring.d_total(d, tr);
        Poly c = x.coeff(j);
        if (!c.is_zero()) r += c.mul(d, tr);
    }
    return r;
}

}  // namespace wkm
