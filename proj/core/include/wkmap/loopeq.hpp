// Loop-equation recursion for the genus-g WK mapping free energies
// F_g^phi = V_1^{2g-2} P_g(w; l) and the jet-map route through F_g^WK.
#pragma once

#include "wkmap/intersection.hpp"
#include "wkmap/jetring.hpp"

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace wkm {

// Tables in R:  d^k W = V_1^k/(sqrt(phi') sqrt(Delta)) sum_n M_{k,n} y^{-n},
// Y_k^- = V_1^k/(phi' Delta) sum_n Y_{k,n} y^{n-k},
// d^k(Delta^{-2}) = V_1^k/(phi' Delta) sum_m Q_{k,m} y^{1-m},  y = Delta/phi'.
struct LoopTables {
    int g_max = 0;
    std::vector<Poly> omega;  // W = (sqrt(phi') sqrt(Delta))^{-1} sum_s omega_s y^s
    std::map<std::pair<int, int>, Poly> M, Y, Q;

    const Poly& m(int k, int n) const;
    const Poly& y(int k, int n) const;
    const Poly& q(int k, int m) const;
};

LoopTables build_tables(int g_max);

// d/dx acting on R-polynomials, divided by V_1:
// w_i -> w_{i+1} - (i+1) w_1 w_i,  l_i -> l_{i+1}.
Poly r_derivation(const Poly& p);

struct GenusSolution {
    int g = 0;
    std::vector<Poly> gradients;  // P_{g,k}, k = 0..3g-2
    Poly potential;               // P_g for g >= 2; zero for g = 1 (log form)
};

GenusSolution genus_one();
// lower[m-1] holds genus m, for m = 1..g-1.
GenusSolution solve_genus(int g, const LoopTables& tables, const std::vector<GenusSolution>& lower);
std::vector<GenusSolution> solve_loop(int g_max);  // genus 1..g_max

// P_{g,k} = (D_k + (2g-2) delta_{k,1}) P_g
bool consistency_holds(const GenusSolution& s);
// weights: P_{g,k} in R^[3g-2-k]
bool gradient_weights_hold(const GenusSolution& s);

// Jet forms: F_g = V_1^{2g-2} P_g and dF_g/dV_k = V_1^{2g-2-k} P_{g,k}.
Poly jet_potential(const GenusSolution& s);
Poly jet_gradient(const GenusSolution& s, int k);

// Residual of the loop equation in Delta-form, written with the symbols
// r = sqrt(Delta), sq = sqrt(phi'), jets and l_i.  Zero iff genus g solves it.
Poly loop_residual(int g, const std::vector<GenusSolution>& sols);

// M_k(V_0..V_k) = x-jets of E(t) in terms of X-jets of E(T), and
// N_k = M_k / (sq^{k+2} V_1^k) in R^[k-1].  Index 0 is unused.
std::vector<Poly> jet_map_M(int k_max);
std::vector<Poly> jet_map(int k_max);

// Fits F_g(v) = v_1^{2g-2} sum_c c P_c(w) from series data.  `coefficients`
// lists parameter monomials c with their weight (P_c has weight 3g-3-wt);
// data(B) returns F_g(t) complete through t-degree B.
Poly fit_jet_polynomial(int g, const std::vector<std::pair<Poly, int>>& coefficients,
                        const std::function<Poly(int)>& data);

// P_g^WK(w) with F_g^WK(v) = v_1^{2g-2} P_g^WK(v_{i+1}/v_1^{i+1}), fitted from
// intersection numbers (g >= 2).
Poly wk_jet_polynomial(int g, CorrelatorTable& table = default_table());
GenusSolution fg_via_wk(int g, CorrelatorTable& table = default_table());

}  // namespace wkm
