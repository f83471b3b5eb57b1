#include "wkmap/poly.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <shared_mutex>

namespace wkm {

Rat rat(long num, long den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat parse_rat(std::string_view s) {
    std::string str(s);
    if (!str.empty() && str[0] == '+') str.erase(0, 1);
    Rat r;
    if (str.empty() || r.set_str(str, 10) != 0) throw std::invalid_argument("bad rational: " + std::string(s));
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + std::string(s));
    r.canonicalize();
    return r;
}

std::string to_string(const Rat& r) { return r.get_str(); }

// ---------------------------------------------------------------- symbols

namespace {

struct Registry {
    std::shared_mutex mu;
    std::deque<SymInfo> infos;
    std::unordered_map<std::string, SymId> ids;
};

Registry& registry() {
    static Registry r;
    return r;
}

SymInfo split_name(std::string_view name) {
    SymInfo info;
    info.name = std::string(name);
    std::size_t k = name.size();
    while (k > 0 && std::isdigit(static_cast<unsigned char>(name[k - 1]))) --k;
    if (k == name.size() || k == 0) {
        info.family = info.name;
        info.index = -1;
    } else {
        info.family = std::string(name.substr(0, k));
        info.index = std::stoi(std::string(name.substr(k)));
    }
    return info;
}

}  // namespace

SymId sym(std::string_view name) {
    auto& r = registry();
    {
        std::shared_lock lk(r.mu);
        auto it = r.ids.find(std::string(name));
        if (it != r.ids.end()) return it->second;
    }
    if (name.empty()) throw std::invalid_argument("empty symbol name");
    std::unique_lock lk(r.mu);
    auto it = r.ids.find(std::string(name));
    if (it != r.ids.end()) return it->second;
    SymId id = static_cast<SymId>(r.infos.size());
    r.infos.push_back(split_name(name));
    r.ids.emplace(std::string(name), id);
    return id;
}

SymId sym(std::string_view family, int index) { return sym(std::string(family) + std::to_string(index)); }

const SymInfo& sym_info(SymId id) {
    auto& r = registry();
    std::shared_lock lk(r.mu);
    if (id >= r.infos.size()) throw std::out_of_range("unknown symbol id");
    return r.infos[id];
}

std::optional<SymId> find_sym(std::string_view name) {
    auto& r = registry();
    std::shared_lock lk(r.mu);
    auto it = r.ids.find(std::string(name));
    if (it == r.ids.end()) return std::nullopt;
    return it->second;
}

// --------------------------------------------------------------- monomial

Monomial Monomial::var(SymId s, int e) {
    Monomial m;
    if (e != 0) m.f_.emplace_back(s, e);
    return m;
}

int Monomial::exponent(SymId s) const {
    for (auto& [v, e] : f_)
        if (v == s) return e;
    return 0;
}

int Monomial::total_degree() const {
    int d = 0;
    for (auto& f : f_) d += f.second;
    return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    r.f_.reserve(f_.size() + o.f_.size());
    auto a = f_.begin(), b = o.f_.begin();
    while (a != f_.end() && b != o.f_.end()) {
        if (a->first < b->first) {
            r.f_.push_back(*a++);
        } else if (b->first < a->first) {
            r.f_.push_back(*b++);
        } else {
            int e = a->second + b->second;
            if (e != 0) r.f_.emplace_back(a->first, e);
            ++a;
            ++b;
        }
    }
    r.f_.insert(r.f_.end(), a, f_.end());
    r.f_.insert(r.f_.end(), b, o.f_.end());
    return r;
}

Monomial Monomial::pow(int n) const {
    Monomial r;
    if (n == 0) return r;
    r.f_ = f_;
    for (auto& f : r.f_) f.second *= n;
    return r;
}

Monomial Monomial::without(SymId s, int e) const { return *this * var(s, -e); }

Monomial Monomial::inverse() const { return pow(-1); }

std::size_t Monomial::hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto& [v, e] : f_) {
        h ^= (static_cast<std::size_t>(v) * 0x100000001b3ULL + static_cast<std::size_t>(e + 1024)) +
             0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

namespace {

std::vector<std::pair<std::string, int>> named_factors(const Monomial& m) {
    std::vector<std::pair<std::string, int>> out;
    for (auto& [v, e] : m.factors()) out.emplace_back(sym_info(v).name, e);
    // natural order: family, then numeric index
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        auto ia = split_name(a.first), ib = split_name(b.first);
        if (ia.family != ib.family) return ia.family < ib.family;
        return ia.index < ib.index;
    });
    return out;
}

}  // namespace

std::string Monomial::str() const {
    if (f_.empty()) return "1";
    std::string s;
    for (auto& [n, e] : named_factors(*this)) {
        if (!s.empty()) s += '*';
        s += n;
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

// ---------------------------------------------------------------- grading

Grading& Grading::set(SymId s, int w) {
    explicit_[s] = w;
    cache_.clear();
    return *this;
}

Grading& Grading::family(std::string fam, std::function<int(int)> rule) {
    rules_.emplace_back(std::move(fam), std::move(rule));
    cache_.clear();
    return *this;
}

int Grading::weight(SymId s) const {
    auto c = cache_.find(s);
    if (c != cache_.end()) return c->second;
    int w = 0;
    auto it = explicit_.find(s);
    if (it != explicit_.end()) {
        w = it->second;
    } else {
        const auto& info = sym_info(s);
        for (auto& [fam, rule] : rules_)
            if (fam == info.family) {
                w = rule(info.index);
                break;
            }
    }
    cache_.emplace(s, w);
    return w;
}

int Grading::weight(const Monomial& m) const {
    int w = 0;
    for (auto& [v, e] : m.factors()) w += weight(v) * e;
    return w;
}

// ------------------------------------------------------------------- poly

Poly::Poly(long c) {
    if (c != 0) t_.emplace_back(Monomial(), Rat(c));
}

Poly::Poly(const Rat& c) {
    if (c != 0) t_.emplace_back(Monomial(), c);
}

Poly Poly::var(SymId s, int e) { return term(Monomial::var(s, e), Rat(1)); }

Poly Poly::term(const Monomial& m, const Rat& c) {
    Poly p;
    if (c != 0) p.t_.emplace_back(m, c);
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    Accum acc;
    for (auto& [m, c] : terms) acc.add(m, c);
    return acc.take();
}

bool Poly::is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].first.is_one()); }

Rat Poly::constant_term() const { return coeff(Monomial()); }

Rat Poly::coeff(const Monomial& m) const {
    auto it = std::lower_bound(t_.begin(), t_.end(), m, [](const Term& t, const Monomial& k) { return t.first < k; });
    if (it != t_.end() && it->first == m) return it->second;
    return Rat(0);
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.t_) t.second = -t.second;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.t_.empty()) return *this;
    if (t_.empty()) return *this = o;
    if (&o == this) return *this *= Rat(2);
    std::vector<Term> out;
    out.reserve(t_.size() + o.t_.size());
    auto a = t_.begin();
    auto b = o.t_.begin();
    while (a != t_.end() && b != o.t_.end()) {
        if (a->first < b->first) {
            out.push_back(std::move(*a++));
        } else if (b->first < a->first) {
            out.push_back(*b++);
        } else {
            Rat c = a->second + b->second;
            if (c != 0) out.emplace_back(std::move(a->first), std::move(c));
            ++a;
            ++b;
        }
    }
    for (; a != t_.end(); ++a) out.push_back(std::move(*a));
    for (; b != o.t_.end(); ++b) out.push_back(*b);
    t_ = std::move(out);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rat& c) {
    if (c == 0) {
        t_.clear();
        return *this;
    }
    for (auto& t : t_) t.second *= c;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) { return a.mul(b, Trunc{}); }

Poly Poly::mul(const Poly& o, const Trunc& tr) const {
    if (t_.empty() || o.t_.empty()) return Poly();
    if (o.is_constant()) return (Poly(*this) *= o.t_[0].second).truncate(tr);
    if (is_constant()) return (Poly(o) *= t_[0].second).truncate(tr);
    const Poly& small = t_.size() <= o.t_.size() ? *this : o;
    const Poly& big = t_.size() <= o.t_.size() ? o : *this;
    if (small.t_.size() == 1) {
        Poly r;
        r.t_.reserve(big.t_.size());
        for (auto& [m, c] : big.t_) {
            Monomial mm = m * small.t_[0].first;
            if (!tr.keeps(mm)) continue;
            r.t_.emplace_back(std::move(mm), c * small.t_[0].second);
        }
        std::sort(r.t_.begin(), r.t_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
        return r;
    }
    std::vector<int> wa, wb;
    if (tr.grading) {
        for (auto& t : small.t_) wa.push_back(tr.grading->weight(t.first));
        for (auto& t : big.t_) wb.push_back(tr.grading->weight(t.first));
    }
    Accum acc;
    Rat tmp;
    for (std::size_t i = 0; i < small.t_.size(); ++i) {
        for (std::size_t j = 0; j < big.t_.size(); ++j) {
            if (tr.grading && wa[i] + wb[j] > tr.max) continue;
            mpq_mul(tmp.get_mpq_t(), small.t_[i].second.get_mpq_t(), big.t_[j].second.get_mpq_t());
            acc.add(small.t_[i].first * big.t_[j].first, tmp);
        }
    }
    return acc.take();
}

Poly Poly::pow(int n, const Trunc& tr) const {
    if (n < 0) {
        if (t_.size() != 1) throw std::domain_error("negative power of a non-monomial: " + str());
        Rat c = 1;
        for (int i = 0; i < -n; ++i) c /= t_[0].second;
        return term(t_[0].first.pow(n), c).truncate(tr);
    }
    Poly result(1), base = *this;
    while (n > 0) {
        if (n & 1) result = result.mul(base, tr);
        n >>= 1;
        if (n) base = base.mul(base, tr);
    }
    return result;
}

Poly Poly::truncate(const Trunc& tr) const {
    if (!tr.grading) return *this;
    Poly r;
    for (auto& t : t_)
        if (tr.keeps(t.first)) r.t_.push_back(t);
    return r;
}

Poly Poly::mul_monomial(const Monomial& m) const {
    Poly r;
    r.t_.reserve(t_.size());
    for (auto& [mm, c] : t_) r.t_.emplace_back(mm * m, c);
    std::sort(r.t_.begin(), r.t_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    return r;
}

Poly Poly::div_term(const Poly& mono) const {
    if (mono.t_.size() != 1) throw std::domain_error("division by a non-monomial: " + mono.str());
    Poly r = mul_monomial(mono.t_[0].first.inverse());
    r *= Rat(1) / mono.t_[0].second;
    return r;
}

Poly Poly::diff(SymId s) const {
    Accum acc;
    for (auto& [m, c] : t_) {
        int e = m.exponent(s);
        if (e == 0) continue;
        acc.add(m.without(s), c * e);
    }
    return acc.take();
}

int Poly::degree(SymId s) const {
    int d = 0;
    bool first = true;
    for (auto& t : t_) {
        int e = t.first.exponent(s);
        if (first || e > d) d = e;
        first = false;
    }
    return d;
}

int Poly::min_degree(SymId s) const {
    int d = 0;
    bool first = true;
    for (auto& t : t_) {
        int e = t.first.exponent(s);
        if (first || e < d) d = e;
        first = false;
    }
    return d;
}

bool Poly::contains(SymId s) const {
    for (auto& t : t_)
        if (t.first.exponent(s) != 0) return true;
    return false;
}

std::vector<SymId> Poly::symbols() const {
    std::vector<SymId> out;
    for (auto& t : t_)
        for (auto& f : t.first.factors()) out.push_back(f.first);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Poly Poly::coeff_of(SymId s, int e) const {
    Poly r;
    for (auto& [m, c] : t_)
        if (m.exponent(s) == e) r.t_.emplace_back(m.without(s, e), c);
    std::sort(r.t_.begin(), r.t_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    return r;
}

std::map<Monomial, Poly> Poly::collect(const std::function<bool(SymId)>& keys) const {
    std::map<Monomial, Accum> groups;
    for (auto& [m, c] : t_) {
        Monomial key, rest;
        for (auto& f : m.factors()) {
            if (keys(f.first))
                key.f_.push_back(f);
            else
                rest.f_.push_back(f);
        }
        groups[key].add(rest, c);
    }
    std::map<Monomial, Poly> out;
    for (auto& [k, a] : groups) {
        Poly p = a.take();
        if (!p.is_zero()) out.emplace(k, std::move(p));
    }
    return out;
}

Poly Poly::map_coeffs(const std::function<Rat(const Rat&)>& f) const {
    Accum acc;
    for (auto& [m, c] : t_) acc.add(m, f(c));
    return acc.take();
}

Poly Poly::filter(const std::function<bool(const Monomial&)>& keep) const {
    Poly r;
    for (auto& t : t_)
        if (keep(t.first)) r.t_.push_back(t);
    return r;
}

std::string Poly::str() const {
    if (t_.empty()) return "0";
    struct Key {
        int deg;
        std::vector<std::pair<std::string, int>> f;
        const Term* term;
    };
    std::vector<Key> keys;
    keys.reserve(t_.size());
    for (auto& t : t_) keys.push_back({t.first.total_degree(), named_factors(t.first), &t});
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        if (a.deg != b.deg) return a.deg > b.deg;
        for (std::size_t i = 0; i < std::min(a.f.size(), b.f.size()); ++i) {
            auto ia = split_name(a.f[i].first), ib = split_name(b.f[i].first);
            if (ia.family != ib.family) return ia.family < ib.family;
            if (ia.index != ib.index) return ia.index < ib.index;
            if (a.f[i].second != b.f[i].second) return a.f[i].second > b.f[i].second;
        }
        return a.f.size() > b.f.size();
    });
    std::string s;
    bool first = true;
    for (auto& k : keys) {
        const Rat& c = k.term->second;
        const Monomial& m = k.term->first;
        bool neg = c < 0;
        Rat a = neg ? Rat(-c) : c;
        if (first)
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        first = false;
        if (m.is_one()) {
            s += a.get_str();
        } else if (a == 1) {
            s += m.str();
        } else {
            s += a.get_str() + "*" + m.str();
        }
    }
    return s;
}

// ------------------------------------------------------------------ accum

void Accum::add(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = m_.try_emplace(m, c);
    if (!fresh) it->second += c;
}

void Accum::add(const Poly& p, const Rat& c, const Monomial& shift) {
    if (c == 0) return;
    bool unit = c == 1;
    bool noshift = shift.is_one();
    for (auto& [m, v] : p.terms()) {
        if (unit && noshift)
            add(m, v);
        else if (noshift)
            add(m, v * c);
        else
            add(m * shift, unit ? v : Rat(v * c));
    }
}

Poly Accum::take() {
    Poly p;
    p.t_.reserve(m_.size());
    for (auto& [m, c] : m_)
        if (c != 0) p.t_.emplace_back(m, c);
    std::sort(p.t_.begin(), p.t_.end(), [](const Poly::Term& x, const Poly::Term& y) { return x.first < y.first; });
    m_.clear();
    return p;
}

// ------------------------------------------------------ derivations, subst

Poly apply_derivation(const Poly& p, const SymMap& image, const Trunc& tr) {
    std::unordered_map<SymId, Poly> cache;
    auto img = [&](SymId s) -> const Poly& {
        auto it = cache.find(s);
        if (it == cache.end()) it = cache.emplace(s, image(s)).first;
        return it->second;
    };
    Accum acc;
    for (auto& [m, c] : p.terms()) {
        for (auto& [v, e] : m.factors()) {
            const Poly& d = img(v);
            if (d.is_zero()) continue;
            Monomial rest = m.without(v);
            Rat k = c * e;
            for (auto& [dm, dc] : d.terms()) {
                Monomial mm = dm * rest;
                if (!tr.keeps(mm)) continue;
                acc.add(mm, k * dc);
            }
        }
    }
    return acc.take();
}

Poly substitute(const Poly& p, const PowerMap& image, const Trunc& tr) {
    std::map<std::pair<SymId, int>, std::optional<Poly>> cache;
    auto img = [&](SymId s, int e) -> const std::optional<Poly>& {
        auto key = std::make_pair(s, e);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, image(s, e)).first;
        return it->second;
    };
    Accum acc;
    for (auto& [m, c] : p.terms()) {
        Monomial kept;
        Poly prod(c);
        bool zero = false;
        for (auto& [v, e] : m.factors()) {
            const auto& r = img(v, e);
            if (!r) {
                kept = kept * Monomial::var(v, e);
                continue;
            }
            prod = prod.mul(*r, tr);
            if (prod.is_zero()) {
                zero = true;
                break;
            }
        }
        if (zero) continue;
        if (kept.is_one()) {
            acc.add(prod);
        } else {
            for (auto& [pm, pc] : prod.terms()) {
                Monomial mm = pm * kept;
                if (tr.keeps(mm)) acc.add(mm, pc);
            }
        }
    }
    return acc.take();
}

Poly substitute(const Poly& p, const std::unordered_map<SymId, Poly>& images, const Trunc& tr) {
    return substitute(
        p,
        [&](SymId s, int e) -> std::optional<Poly> {
            auto it = images.find(s);
            if (it == images.end()) return std::nullopt;
            if (e < 0) {
                if (it->second.size() != 1)
                    throw std::domain_error("negative power needs a monomial image for " + sym_info(s).name);
                return it->second.pow(e);
            }
            return it->second.pow(e, tr);
        },
        tr);
}

// ----------------------------------------------------------------- parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Poly parse() {
        Poly p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return p;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument(what + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    Poly expr() {
        Poly p;
        bool neg = eat('-');
        if (!neg) eat('+');
        p = term();
        if (neg) p = -p;
        while (true) {
            if (eat('+'))
                p += term();
            else if (eat('-'))
                p -= term();
            else
                break;
        }
        return p;
    }
    Poly term() {
        Poly p = factor();
        while (true) {
            if (eat('*')) {
                p = p * factor();
            } else if (eat('/')) {
                Poly d = factor();
                if (d.is_zero()) fail("division by zero");
                p = p.div_term(d);
            } else {
                break;
            }
        }
        return p;
    }
    Poly factor() {
        Poly b = base();
        if (eat('^')) {
            skip();
            bool neg = eat('-');
            skip();
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (st == pos_) fail("expected integer exponent");
            int e = std::stoi(std::string(s_.substr(st, pos_ - st)));
            b = b.pow(neg ? -e : e);
        }
        return b;
    }
    Poly base() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Poly(parse_rat(s_.substr(st, pos_ - st)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t st = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            return Poly::var(s_.substr(st, pos_ - st));
        }
        fail("unexpected character");
    }
};

}  // namespace

Poly parse_poly(std::string_view text) { return Parser(text).parse(); }

}  // namespace wkm
