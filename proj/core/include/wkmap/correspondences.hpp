// Coordinate changes relating Z^WK to the modified-even GUE and the
// generalized BGW partition functions, and their expansions at s = 0
// (resp. r = 0) in powers of y = x - x0.
#pragma once

#include "wkmap/intersection.hpp"

#include <string>
#include <vector>

namespace wkm {

// Symbols: x, s1..sJ (GUE) and x, r0..rJ (BGW).
Poly gue_quadratic(int j_max);
Poly gue_coordinate(int m, int j_max);
Poly bgw_quadratic(int j_max);
Poly bgw_coordinate(int m, int j_max);

// Coefficients of y^0..y^order.
using YSeries = std::vector<Rat>;

enum class Correspondence { gue, bgw };

// x0 = 1 for GUE, -2 for BGW
int base_point(Correspondence c);

// Coefficient of eps^{2g-2} in the right-hand side: B(x, eps/sqrt 2) for GUE,
// log Z^cBGW(x, 0; eps) for BGW.
YSeries correspondence_target(Correspondence c, int g, int order);

// Coefficient of eps^{2g-2}/x^{2g-2} in B(x, eps), g >= 2, from the
// asymptotics of gamma(z + 1/4) + gamma(z - 1/4).
Rat gue_b_coefficient(int g);

// Left-hand side through the resummed sum over partitions.
YSeries correspondence_closed_form(Correspondence c, int g, int order, CorrelatorTable& table = default_table());
// Left-hand side by substituting t(x, 0) into A/eps^2 + log Z^WK directly.
YSeries correspondence_direct(Correspondence c, int g, int order, CorrelatorTable& table = default_table());

// d/ds_1 of both sides for GUE; the target is <phi_1>(x, eps/sqrt 2).
YSeries gue_one_point_closed_form(int g, int order, CorrelatorTable& table = default_table());
YSeries gue_one_point_direct(int g, int order, CorrelatorTable& table = default_table());
YSeries gue_one_point_target(int g, int order);

struct SectorCheck {
    std::string name;
    int eps_power = 0;
    YSeries closed_form, direct, target;
    bool pass() const { return closed_form == target && direct == target; }
};

struct CorrespondenceReport {
    Correspondence which = Correspondence::gue;
    int order = 0, g_max = 0;
    std::vector<SectorCheck> sectors;
    bool pass() const;
};

// GUE: one sector per genus plus the one-point sectors; BGW: one per genus.
CorrespondenceReport verify_correspondence(Correspondence c, int order, int g_max,
                                           CorrelatorTable& table = default_table());

}  // namespace wkm
