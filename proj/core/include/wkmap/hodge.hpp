// Hodge free energies from the WK ones through the Faber-Pandharipande
// operator, the special specialization and the Hodge-WK check.
#pragma once

#include "wkmap/intersection.hpp"

#include <map>
#include <vector>

namespace wkm {

// B_n from sum_{k<=n} C(n+1,k) B_k = 0, so B_1 = -1/2.
Rat bernoulli(int n);

// sigma_{2j-1} by odd index; absent entries are zero.
struct HodgeParams {
    std::map<int, Poly> sigma;
    Poly operator[](int odd) const;
    int max_index() const;
};

HodgeParams symbolic_sigma(int j_max);                 // sig1, sig3, ..., sig_{2 j_max - 1}
HodgeParams special_sigma(const Poly& q, int j_max);   // (4^j - 1)(2j-2)! q^{2j-1}

// sig_{2j-1} -> 2j-1 and q -> 1; every other symbol weight 0.
const Grading& sigma_grading();

// log Z_Omega = sum_g eps^{2g-2} F_{Omega_g}(t), g = 0..g_max, complete through
// t-degree `degree` and sigma-weight `sigma_weight`.
std::vector<Poly> fp_transform(int degree, int g_max, const HodgeParams& s, int sigma_weight,
                               CorrelatorTable& table = default_table());

// d F_g/dt_1 - sum t_i dF_g/dt_i - (2g-2) F_g - delta_{g,1}/24, through degree-1.
std::vector<Poly> dilaton_residual(const std::vector<Poly>& F, int degree);

// F_{Omega_g}(v) = v_1^{2g-2} P(w; sig) for g >= 2, symbolic sigma.
Poly hodge_jet_polynomial(int g, CorrelatorTable& table = default_table());

// Genus-one jet form (1/24) log v_1 + (sigma_1/24) v_0 checked on series data
// through `degree`; returns the residual.
Poly hodge_genus_one_residual(int degree, const HodgeParams& s, CorrelatorTable& table = default_table());

// F_{Omega^special}(T) with T = t.phi_special minus F^WK(t), genus by genus,
// truncated at t-degree `degree` and q-degree `q_order`.
struct HodgeWkReport {
    int degree = 0, g_max = 0, q_order = 0;
    std::vector<Poly> residual;
    bool pass() const;
};
HodgeWkReport verify_hodge_wk(int degree, int g_max, int q_order, CorrelatorTable& table = default_table());

struct QSigma {
    Poly q1, q2, q3;
};
QSigma q_from_sigma(const HodgeParams& s);
// q_i for the special specialization, i = 1..7, as multiples of q^{2i-1}.
const std::vector<Rat>& special_q_table();

}  // namespace wkm
