#include "wkmap/linsolve.hpp"

#include <stdexcept>

namespace wkm {

LinearSolution solve_linear(std::vector<std::vector<Rat>> rows, std::vector<Rat> rhs, int cols) {
    if (rows.size() != rhs.size()) throw std::invalid_argument("row/rhs size mismatch");
    int n = static_cast<int>(rows.size());
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < n; ++c) {
        int p = r;
        while (p < n && rows[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(rows[p], rows[r]);
        std::swap(rhs[p], rhs[r]);
        Rat inv = 1 / rows[r][c];
        for (int j = c; j < cols; ++j) rows[r][j] *= inv;
        rhs[r] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rat f = rows[i][c];
            for (int j = c; j < cols; ++j)
                if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
            rhs[i] -= f * rhs[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    LinearSolution s;
    s.rank = r;
    for (int i = r; i < n; ++i)
        if (rhs[i] != 0) s.consistent = false;
    s.x.assign(cols, Rat(0));
    for (int i = 0; i < r; ++i) s.x[pivot_col[i]] = rhs[i];
    return s;
}

}  // namespace wkm
