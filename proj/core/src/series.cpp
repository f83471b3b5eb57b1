#include "wkmap/series.hpp"

#include <stdexcept>

namespace wkm {

Series1::Series1(std::string var, int order) : var_(std::move(var)), order_(order), c_(order + 1) {
    if (order < 0) throw std::invalid_argument("negative truncation order");
}

Series1::Series1(std::string var, std::vector<Poly> coeffs, int order) : Series1(std::move(var), order) {
    for (int k = 0; k < static_cast<int>(coeffs.size()) && k <= order; ++k) c_[k] = std::move(coeffs[k]);
}

Series1 Series1::monomial(std::string var, int order, int power, const Poly& c) {
    Series1 s(std::move(var), order);
    if (power <= order) s.c_[power] = c;
    return s;
}

Series1 Series1::constant(std::string var, int order, const Poly& c) { return monomial(std::move(var), order, 0, c); }

const Poly& Series1::operator[](int k) const {
    static const Poly zero;
    if (k < 0 || k > order_) return zero;
    return c_[k];
}

void Series1::set(int k, Poly c) {
    if (k < 0 || k > order_) throw std::out_of_range("series index beyond truncation");
    c_[k] = std::move(c);
}

Series1 Series1::truncated(int order) const {
    Series1 r(var_, order);
    for (int k = 0; k <= std::min(order, order_); ++k) r.c_[k] = c_[k];
    if (order > order_) throw std::invalid_argument("cannot extend truncation order");
    return r;
}

bool Series1::operator==(const Series1& o) const { return var_ == o.var_ && order_ == o.order_ && c_ == o.c_; }

void Series1::check_same(const Series1& o) const {
    if (var_ != o.var_) throw std::invalid_argument("series variable mismatch: " + var_ + " vs " + o.var_);
}

Series1 Series1::operator-() const {
    Series1 r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

Series1 operator+(const Series1& a, const Series1& b) {
    a.check_same(b);
    int n = std::min(a.order_, b.order_);
    Series1 r(a.var_, n);
    for (int k = 0; k <= n; ++k) r.c_[k] = a.c_[k] + b.c_[k];
    return r;
}

Series1 operator-(const Series1& a, const Series1& b) { return a + (-b); }

Series1 operator*(const Series1& a, const Series1& b) {
    a.check_same(b);
    int n = std::min(a.order_, b.order_);
    Series1 r(a.var_, n);
    for (int i = 0; i <= n; ++i) {
        if (a.c_[i].is_zero()) continue;
        for (int j = 0; i + j <= n; ++j) {
            if (b.c_[j].is_zero()) continue;
            r.c_[i + j] += a.c_[i] * b.c_[j];
        }
    }
    return r;
}

Series1 operator*(const Poly& c, const Series1& a) {
    Series1 r = a;
    for (auto& x : r.c_) x = c * x;
    return r;
}

Series1 Series1::div_by_unit(const Series1& b) const {
    check_same(b);
    const Poly& b0 = b.c_[0];
    if (b0.is_zero() || !b0.is_constant()) throw std::domain_error("divisor constant term is not a unit");
    Rat inv = 1 / b0.constant_term();
    int n = std::min(order_, b.order_);
    Series1 q(var_, n);
    for (int k = 0; k <= n; ++k) {
        Poly acc = c_[k];
        for (int j = 1; j <= k; ++j)
            if (!b.c_[j].is_zero() && !q.c_[k - j].is_zero()) acc -= b.c_[j] * q.c_[k - j];
        q.c_[k] = acc * inv;
    }
    return q;
}

Series1 Series1::derive() const {
    int n = std::max(order_ - 1, 0);
    Series1 r(var_, n);
    for (int k = 1; k <= order_; ++k) r.c_[k - 1] = c_[k] * Rat(k);
    return r;
}

Series1 Series1::integrate() const {
    Series1 r(var_, order_ + 1);
    for (int k = 0; k <= order_; ++k) r.c_[k + 1] = c_[k] * rat(1, k + 1);
    return r;
}

std::string Series1::str() const {
    std::string s;
    for (int k = 0; k <= order_; ++k) {
        if (c_[k].is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + c_[k].str() + ")";
        if (k == 1) s += "*" + var_;
        if (k > 1) s += "*" + var_ + "^" + std::to_string(k);
    }
    if (s.empty()) s = "0";
    return s + " + O(" + var_ + "^" + std::to_string(order_ + 1) + ")";
}

Series1 series_arith(const Series1& a, const Series1& b, SeriesOp op) {
    switch (op) {
        case SeriesOp::add: return a + b;
        case SeriesOp::mul: return a * b;
        case SeriesOp::div_by_unit: return a.div_by_unit(b);
    }
    throw std::invalid_argument("unknown series operation");
}

Series1 compose(const Series1& outer, const Series1& inner) {
    if (!inner[0].is_zero()) throw std::domain_error("inner series has a nonzero constant term");
    int n = std::min(outer.order(), inner.order());
    Series1 in = inner.truncated(n);
    in = Series1(outer.var(), in.coeffs(), n);  // result lives in the inner variable's name below
    Series1 acc = Series1::constant(outer.var(), n, outer[n]);
    for (int k = n - 1; k >= 0; --k) acc = acc * in + Series1::constant(outer.var(), n, outer[k]);
    return Series1(inner.var(), acc.coeffs(), n);
}

Series1 reversion(const Series1& phi) {
    if (!phi[0].is_zero()) throw std::domain_error("reversion needs phi(0) = 0");
    if (phi[1] != Poly(1)) throw std::domain_error("reversion needs leading coefficient 1");
    int n = phi.order();
    Series1 ident = Series1::monomial(phi.var(), n, 1);
    if (n <= 1) return ident;
    Series1 g = ident;
    Series1 dphi = phi.derive();  // order n-1
    // Newton step g <- g - (phi(g) - V)/phi'(g).  The numerator is O(V^2),
    // so dividing numerator/V by phi'(g) at order n-1 is exact at order n.
    for (int prec = 1; prec <= n; prec *= 2) {
        Series1 num = compose(phi, g) - ident;
        std::vector<Poly> shifted(num.coeffs().begin() + 1, num.coeffs().end());
        Series1 num_v(phi.var(), shifted, n - 1);
        Series1 q = num_v.div_by_unit(compose(dphi, g.truncated(n - 1)));
        std::vector<Poly> up(1);
        up.insert(up.end(), q.coeffs().begin(), q.coeffs().end());
        g = g - Series1(phi.var(), up, n);
    }
    if (compose(phi, g) != ident) throw std::logic_error("reversion did not converge");
    return g;
}

Series1 series_pow(const Series1& s, const Rat& r) {
    if (s[0] != Poly(1)) throw std::domain_error("pow needs constant term 1");
    int n = s.order();
    Series1 g(s.var(), n);
    g.set(0, Poly(1));
    for (int m = 1; m <= n; ++m) {
        Poly acc;
        for (int k = 1; k <= m; ++k) {
            if (s[k].is_zero() || g[m - k].is_zero()) continue;
            Rat c = (r + 1) * k - m;
            if (c != 0) acc += (s[k] * g[m - k]) * c;
        }
        g.set(m, acc * rat(1, m));
    }
    return g;
}

Series1 series_sqrt(const Series1& s) { return series_pow(s, rat(1, 2)); }

Series1 series_log(const Series1& s) {
    if (s[0] != Poly(1)) throw std::domain_error("log needs constant term 1");
    return s.derive().div_by_unit(s.truncated(std::max(s.order() - 1, 0))).integrate();
}

Series1 series_exp(const Series1& s) {
    if (!s[0].is_zero()) throw std::domain_error("exp needs constant term 0");
    int n = s.order();
    Series1 g(s.var(), n);
    g.set(0, Poly(1));
    for (int m = 1; m <= n; ++m) {
        Poly acc;
        for (int k = 1; k <= m; ++k)
            if (!s[k].is_zero() && !g[m - k].is_zero()) acc += (s[k] * g[m - k]) * Rat(k);
        g.set(m, acc * rat(1, m));
    }
    return g;
}

namespace {

void require_positive(const Poly& x, const Trunc& tr) {
    if (!tr.grading) throw std::invalid_argument("multivariate series operation needs a grading");
    for (auto& [m, c] : x.terms())
        if (tr.grading->weight(m) <= 0) throw std::domain_error("series argument has a term of non-positive weight");
}

}  // namespace

Poly poly_series_inverse(const Poly& u, const Trunc& tr) {
    Rat c0 = u.constant_term();
    if (c0 == 0) throw std::domain_error("series inverse needs a nonzero constant term");
    Poly x = (u - Poly(c0)) * (1 / c0);
    require_positive(x, tr);
    Poly result(1), term(1);
    Poly mx = -x;
    while (true) {
        term = term.mul(mx, tr);
        if (term.is_zero()) break;
        result += term;
    }
    return result * (1 / c0);
}

Poly poly_series_log1p(const Poly& x, const Trunc& tr) {
    require_positive(x, tr);
    Poly result, power(1);
    for (int n = 1;; ++n) {
        power = power.mul(x, tr);
        if (power.is_zero()) break;
        result += power * rat(n % 2 ? 1 : -1, n);
    }
    return result;
}

Poly poly_series_exp(const Poly& x, const Trunc& tr) {
    require_positive(x, tr);
    Poly result(1), term(1);
    for (int n = 1;; ++n) {
        term = term.mul(x, tr) * rat(1, n);
        if (term.is_zero()) break;
        result += term;
    }
    return result;
}

}  // namespace wkm
