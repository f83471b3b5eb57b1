// Exact Gaussian elimination over Q.
#pragma once

#include "wkmap/poly.hpp"

#include <optional>
#include <vector>

namespace wkm {

struct LinearSolution {
    int rank = 0;
    bool consistent = true;
    std::vector<Rat> x;  // one particular solution (free variables set to 0)
};

// Solves rows * x = rhs.  Rows are dense with `cols` entries.
LinearSolution solve_linear(std::vector<std::vector<Rat>> rows, std::vector<Rat> rhs, int cols);

}  // namespace wkm
