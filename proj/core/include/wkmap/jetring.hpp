// Differential polynomials in jets V_0, V_1, ... and the graded ring
// R = Q[w_1, w_2, ...; l_1, l_2, ...].
#pragma once

#include "wkmap/poly.hpp"

#include <map>
#include <string>

namespace wkm {

// A jet ring: jets <jet>0, <jet>1, ... plus symbols standing for functions
// of <jet>0, each with a rule for d/d<jet>0.  Built-in function families:
//   l_i  -> l_{i+1}              (l_i = (d/dV)^i log phi', i >= 1)
//   sq   -> sq*l1/2              (sq = sqrt(phi'))
//   ph_k -> ph_{k+1}             (ph0 = phi, ph_k = phi^{(k)})
//   S_k  -> S_{k+1}              (a formal flow function)
// Further towers f_k -> f_{k+1} are registered with add_tower.
class JetRing {
public:
    explicit JetRing(std::string jet = "V");

    const std::string& jet() const { return jet_; }
    SymId jet_sym(int k) const { return sym(jet_, k); }
    Poly jet_var(int k, int e = 1) const { return Poly::var(jet_sym(k), e); }

    JetRing& add_tower(const std::string& family);
    JetRing& add_function(SymId s, Poly derivative);  // single symbol with fixed d/dV0
    JetRing& without_builtin(const std::string& family);

    bool is_jet(SymId s) const;
    bool is_function(SymId s) const;
    // d/d<jet>0 of a function symbol (zero for constants)
    Poly function_derivative(SymId s) const;

    // d/dV_k including, for k = 0, the dependence through function symbols
    Poly partial(const Poly& p, int k) const;
    // total x-derivative  sum V_{k+1} d/dV_k
    Poly d_total(const Poly& p, const Trunc& tr = {}) const;
    Poly d_total(const Poly& p, int times, const Trunc& tr = {}) const;
    int max_jet(const Poly& p) const;  // -1 if no jets

    // sum_k (-d)^k dh/dV_k
    Poly variational_derivative(const Poly& h) const;

private:
    std::string jet_;
    std::map<std::string, int> towers_;  // family -> kind
    std::map<SymId, Poly> singles_;
};

// Weight on R: w_i and l_i have weight i.
const Grading& r_grading();
int r_weight(const Poly& p);  // -1 if not homogeneous, 0 for zero

// D_k operators on R (with D_1^{[m]} = D_1 + m).
Poly D_op(const Poly& p, int k, int shift = 0);

// Complete Bell polynomial Y_n(l_1, ..., l_n): phi^{(n+1)} = phi' Y_n.
Poly bell_ell(int n);
// Rewrites ph_k = phi^{(k)} (k >= 1) as sq^2 * Y_{k-1}(l); ph0 is kept.
Poly ph_to_ell(const Poly& p);

// Jet form <-> V_1^deg * P(w, l) with w_i = V_{i+1}/V_1^{i+1}.
Poly to_scaled(const Poly& jet_form, int deg, const std::string& jet = "V");
Poly from_scaled(const Poly& r_form, int deg, const std::string& jet = "V");

// Local operator sum_j A_j d^j.
struct LocalOperator {
    std::map<int, Poly> a;

    LocalOperator() = default;
    explicit LocalOperator(std::map<int, Poly> coeffs) : a(std::move(coeffs)) {}
    static LocalOperator multiplication(const Poly& f) { return LocalOperator({{0, f}}); }
    static LocalOperator derivative(int j = 1) { return LocalOperator({{j, Poly(1)}}); }

    Poly coeff(int j) const;
    LocalOperator operator+(const LocalOperator& o) const;
    LocalOperator operator-(const LocalOperator& o) const;
    LocalOperator scaled(const Poly& c) const;
    bool operator==(const LocalOperator& o) const;
    LocalOperator truncated(const Trunc& tr) const;
    LocalOperator normalized() const;
};

// (a d^i) o (b d^j) = a sum_m C(i,m) d^m(b) d^{i-m+j}
LocalOperator compose(const LocalOperator& x, const LocalOperator& y, const JetRing& ring, const Trunc& tr = {});
// formal adjoint: (sum A_j d^j)^* = sum (-d)^j o A_j
LocalOperator adjoint(const LocalOperator& x, const JetRing& ring, const Trunc& tr = {});
Poly apply(const LocalOperator& x, const Poly& f, const JetRing& ring, const Trunc& tr = {});

}  // namespace wkm
