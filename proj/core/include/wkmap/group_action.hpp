// The group of series V + O(V^2) acting on coefficient tuples.
#pragma once

#include "wkmap/series.hpp"

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace wkm {

// Finitely supported t = (t_0, t_1, ...).  No shift is stored: the
// "t_1 - 1" convention only appears inside the operations.
using Tuple = std::map<int, Poly>;

Tuple tuple_symbols(const std::string& family, int n);  // t_i = family<i>, i = 0..n
Poly entry(const Tuple& t, int i);
Tuple normalized(Tuple t);  // drops zero entries
bool tuple_equal(const Tuple& a, const Tuple& b);

// Group elements are plain series phi = V + a_2 V^2 + ... in the variable V.
Series1 identity_element(int order);
Series1 special_element(int order, const Poly& q = Poly::var("q"));  // (e^{2qV}-1)/(2q)
Series1 generic_element(int params, int order);  // V + a_2 V^2 + ... + a_{params+1} V^{params+1}
Series1 element_from_coeffs(const std::vector<Poly>& coeffs, int order);  // coeffs[0] multiplies V
void check_group_element(const Series1& phi);

// B_T(V) = sqrt(phi'(V)) B_t(phi(V)), B_t(v) = v - sum t_i v^i/i!.
// phi must carry order >= order + 1.
Tuple act(const Tuple& t, const Series1& phi, int order);

struct LinearAction {
    Tuple that;  // sum T^_i V^i/i! = sqrt(phi') sum t_i phi^i/i!
    Tuple C;     // sum C_i V^i/i! = sqrt(phi') phi
    Tuple c;     // same for f = phi^{-1}
};
LinearAction act_linear(const Tuple& t, const Series1& phi, int order);

// T_i - delta_{i,1} = sum_m M[i][m] (t_m - delta_{m,1}); N = M^{-1}.
struct ActionMatrices {
    std::vector<std::vector<Poly>> M, N;
};
ActionMatrices action_matrices(const Series1& phi, int size);

// Coefficient maps for the special element.
Rat special_A(int i, int m);  // zero for m > i
Rat special_P(int m, int i);  // zero for i > m
mpz_class stirling1(int n, int k);  // signed, s(n,k)
struct SpecialCoeffs {
    Rat A, P;
    mpz_class stirling;
};
SpecialCoeffs special_coeffs(int i, int m);

// Total t-degree grading used by truncated multivariate series in the tuple.
const Grading& tuple_grading();

// E(t) solving B_t(E) = 0, i.e. E = t_0 + sum_{i>=1} t_i E^i/i!, truncated
// at total degree `degree` under `grading`.
Poly euler_lagrange(const Tuple& t, int degree, const Grading& grading = tuple_grading());
Poly euler_lagrange(int degree);  // in the symbols t0, t1, ...

// phi(x) for a Poly x of positive weight, truncated.
Poly apply_series(const Series1& phi, const Poly& x, const Trunc& tr);

}  // namespace wkm
