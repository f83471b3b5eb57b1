// The WK (and Hodge) mapping hierarchy in jets of U: quasi-Miura map,
// flows D_S(U), divergence form, Poisson operators and the standard form.
//
// Everything lives in one jet ring with jets V_k.  Before the inverse
// quasi-Miura substitution they are jets of V; afterwards they stand for
// jets of U.  eps is the dispersion parameter, kept through eps^{2 g_max}.
#pragma once

#include "wkmap/jetring.hpp"

#include <map>
#include <string>
#include <vector>

namespace wkm {

// l, sq, ph and S towers plus Mf = int_0^V sqrt(phi') and Sint = int^V S.
const JetRing& hierarchy_ring();
const Grading& eps_grading();  // eps -> 1
Trunc eps_trunc(int g_max);
std::vector<Poly> eps_coefficients(const Poly& p, int g_max);  // eps^0, eps^2, ...

// p(V + delta): V_k -> V_k + d^k delta, functions of V_0 Taylor expanded.
Poly taylor_shift(const Poly& p, const Poly& delta, int g_max, const JetRing& ring = hierarchy_ring());

enum class MappingFamily { wk, hodge };

// dF_g/dx in jet form.  The Hodge family carries symbolic sig1, sig3, ...
Poly mapping_dF(int g, MappingFamily fam);

struct QuasiMiura {
    int g_max = 0;
    MappingFamily family = MappingFamily::wk;
    Poly forward;  // U - V in V-jets
    Poly inverse;  // V - U in U-jets
};
QuasiMiura quasi_miura(int g_max, MappingFamily fam = MappingFamily::wk);

// D_S(U) by powers of eps^2, with S_k = S^{(k)}(U) left symbolic.
std::vector<Poly> flow(const QuasiMiura& qm);
// S_k -> d^k s/dU^k for a function s of U (written in V0 and function symbols).
Poly specialize_flow(const Poly& p, const Poly& s);
std::vector<Poly> specialize_flow(const std::vector<Poly>& f, const Poly& s);
bool has_negative_v1_power(const Poly& p);

// h_g with d(h_g) = f_g; throws when f_g is not a total derivative.
std::vector<Poly> divergence_density(const std::vector<Poly>& f);

// [D_{s1}, D_{s2}](U) by powers of eps^2.
std::vector<Poly> flow_commutator(const QuasiMiura& qm, const Poly& s1, const Poly& s2);

struct PoissonOperators {
    std::vector<LocalOperator> p1, p2;  // eps^{2g} parts
};
PoissonOperators poisson_operators(const QuasiMiura& qm);

// w = M(U) + sum eps^{2k} C_lambda(U) U_lambda bringing D_{M(U)} to
// d(delta h/delta w), h = w^3/6 - eps^2/24 a0 w_1^2 + eps^4 alpha_{2^2} w_2^2.
// A w_1^4 term can be traded against the canonical transformation generated
// by int f(w) w_1^3, so it is set to zero unless keep_w1_4 (then it and the
// C_lambda depending on it come back with the free symbol cU0).
// Functions of w are reported at w = M(U).
struct StandardForm {
    int order = 0;
    std::map<std::string, Poly> C;      // "2", "1^2", "4", "3 1", "2^2", "2 1^2", "1^4"
    Poly a0;
    std::map<std::string, Poly> alpha;  // "2^2" (and "1^4")
    std::vector<std::string> free;      // unknowns left undetermined
};
StandardForm to_standard_form(const QuasiMiura& qm, int order, bool keep_w1_4 = false);

}  // namespace wkm
