// Sparse multivariate Laurent polynomials over Q with interned symbols.
#pragma once

#include <gmpxx.h>

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wkm {

using Rat = mpq_class;
using SymId = std::uint32_t;

Rat rat(long num, long den = 1);
Rat parse_rat(std::string_view s);
std::string to_string(const Rat& r);

// Symbols are interned once per process.  A name splits into a family
// (leading non-digit part) and an index (trailing digits, -1 when absent):
// "V12" -> ("V", 12), "sig3" -> ("sig", 3), "q" -> ("q", -1).
struct SymInfo {
    std::string name;
    std::string family;
    int index = -1;
};

SymId sym(std::string_view name);
SymId sym(std::string_view family, int index);
const SymInfo& sym_info(SymId id);
std::optional<SymId> find_sym(std::string_view name);

class Monomial {
public:
    using Factor = std::pair<SymId, int>;
    using Storage = boost::container::small_vector<Factor, 4>;

    Monomial() = default;
    static Monomial var(SymId s, int e = 1);

    const Storage& factors() const { return f_; }
    bool is_one() const { return f_.empty(); }
    int exponent(SymId s) const;
    int total_degree() const;

    Monomial operator*(const Monomial& o) const;
    Monomial pow(int n) const;
    // divide by s^e; the result may carry a negative exponent
    Monomial without(SymId s, int e = 1) const;
    Monomial inverse() const;

    bool operator==(const Monomial& o) const { return f_ == o.f_; }
    bool operator!=(const Monomial& o) const { return f_ != o.f_; }
    bool operator<(const Monomial& o) const { return f_ < o.f_; }

    std::size_t hash() const;
    std::string str() const;

private:
    Storage f_;
    friend class Poly;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

// Per-symbol integer weights used for truncation.  Family rules map an
// index to a weight; explicit entries win over family rules.
class Grading {
public:
    Grading& set(SymId s, int w);
    Grading& set(std::string_view name, int w) { return set(sym(name), w); }
    Grading& family(std::string fam, std::function<int(int)> rule);
    int weight(SymId s) const;
    int weight(const Monomial& m) const;

private:
    std::unordered_map<SymId, int> explicit_;
    std::vector<std::pair<std::string, std::function<int(int)>>> rules_;
    mutable std::unordered_map<SymId, int> cache_;
};

struct Trunc {
    const Grading* grading = nullptr;
    int max = 0;
    bool keeps(const Monomial& m) const { return !grading || grading->weight(m) <= max; }
};

class Poly {
public:
    using Term = std::pair<Monomial, Rat>;

    Poly() = default;
    Poly(long c);
    Poly(const Rat& c);
    static Poly var(SymId s, int e = 1);
    static Poly var(std::string_view name, int e = 1) { return var(sym(name), e); }
    static Poly term(const Monomial& m, const Rat& c);
    static Poly from_terms(std::vector<Term> terms);  // combines and sorts

    const std::vector<Term>& terms() const { return t_; }
    std::size_t size() const { return t_.size(); }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const;
    Rat constant_term() const;
    Rat coeff(const Monomial& m) const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const Rat& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rat& c) { return a *= c; }
    friend Poly operator*(const Rat& c, Poly a) { return a *= c; }
    bool operator==(const Poly& o) const { return t_ == o.t_; }
    bool operator!=(const Poly& o) const { return !(t_ == o.t_); }

    Poly mul(const Poly& o, const Trunc& tr) const;
    Poly pow(int n, const Trunc& tr = {}) const;
    Poly truncate(const Trunc& tr) const;
    Poly mul_monomial(const Monomial& m) const;
    // exact division by a single-term polynomial
    Poly div_term(const Poly& mono) const;

    Poly diff(SymId s) const;
    int degree(SymId s) const;     // max exponent, 0 for constants
    int min_degree(SymId s) const; // min exponent over terms
    bool contains(SymId s) const;
    std::vector<SymId> symbols() const;
    // coefficient of s^e (terms with other powers of s dropped)
    Poly coeff_of(SymId s, int e) const;
    // groups terms by the part of the monomial that involves `keys`
    std::map<Monomial, Poly> collect(const std::function<bool(SymId)>& keys) const;
    Poly map_coeffs(const std::function<Rat(const Rat&)>& f) const;
    Poly filter(const std::function<bool(const Monomial&)>& keep) const;

    // Canonical text: terms in name-based graded order, "p/q*x^2*y" style.
    std::string str() const;

private:
    std::vector<Term> t_;  // sorted by Monomial, no zero coefficients
    friend class Accum;
};

// Sums terms through a hash map; cheaper than repeated Poly additions.
class Accum {
public:
    void add(const Monomial& m, const Rat& c);
    void add(const Poly& p, const Rat& c = Rat(1), const Monomial& shift = Monomial());
    Poly take();

private:
    std::unordered_map<Monomial, Rat, MonomialHash> m_;
};

// A derivation is fixed by the image of each symbol (zero when unset).
using SymMap = std::function<Poly(SymId)>;
Poly apply_derivation(const Poly& p, const SymMap& image, const Trunc& tr = {});

// Ring homomorphism: `image(s, e)` returns the replacement for s^e or
// nullopt to keep the factor unchanged.
using PowerMap = std::function<std::optional<Poly>(SymId, int)>;
Poly substitute(const Poly& p, const PowerMap& image, const Trunc& tr = {});
// Convenience: replace symbols by images; negative powers need monomial images.
Poly substitute(const Poly& p, const std::unordered_map<SymId, Poly>& images,
                const Trunc& tr = {});

Poly parse_poly(std::string_view text);

}  // namespace wkm
