// Truncated power series in one variable with polynomial coefficients.
#pragma once

#include "wkmap/poly.hpp"

#include <string>
#include <vector>

namespace wkm {

class Series1 {
public:
    Series1() = default;
    Series1(std::string var, int order);  // zero series
    Series1(std::string var, std::vector<Poly> coeffs, int order);

    static Series1 monomial(std::string var, int order, int power, const Poly& c = Poly(1));
    static Series1 constant(std::string var, int order, const Poly& c);

    const std::string& var() const { return var_; }
    int order() const { return order_; }
    const Poly& operator[](int k) const;
    void set(int k, Poly c);
    const std::vector<Poly>& coeffs() const { return c_; }

    Series1 truncated(int order) const;
    bool operator==(const Series1& o) const;
    bool operator!=(const Series1& o) const { return !(*this == o); }

    Series1 operator-() const;
    friend Series1 operator+(const Series1& a, const Series1& b);
    friend Series1 operator-(const Series1& a, const Series1& b);
    friend Series1 operator*(const Series1& a, const Series1& b);
    friend Series1 operator*(const Poly& c, const Series1& a);
    Series1 div_by_unit(const Series1& b) const;

    Series1 derive() const;
    Series1 integrate() const;

    std::string str() const;

private:
    std::string var_ = "V";
    int order_ = 0;
    std::vector<Poly> c_;  // size order_+1
    void check_same(const Series1& o) const;
};

enum class SeriesOp { add, mul, div_by_unit };
Series1 series_arith(const Series1& a, const Series1& b, SeriesOp op);

// outer(inner), inner must have zero constant term
Series1 compose(const Series1& outer, const Series1& inner);
// compositional inverse of phi = V + O(V^2)
Series1 reversion(const Series1& phi);

Series1 series_pow(const Series1& s, const Rat& r);  // constant term 1
Series1 series_sqrt(const Series1& s);
Series1 series_log(const Series1& s);  // constant term 1
Series1 series_exp(const Series1& s);  // constant term 0

// Multivariate series helpers: a Poly truncated by a grading stands for a
// truncated series in several variables.
Poly poly_series_inverse(const Poly& u, const Trunc& tr);  // u has constant term != 0 and positive-weight rest
Poly poly_series_log1p(const Poly& x, const Trunc& tr);    // log(1 + x), x of positive weight
Poly poly_series_exp(const Poly& x, const Trunc& tr);      // exp(x), x of positive weight

}  // namespace wkm
