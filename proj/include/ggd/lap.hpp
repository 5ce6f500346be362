#pragma once

#include <limits>
#include <vector>

#include "ggd/graph.hpp"

namespace ggd {

/// Exact linear assignment: returns the row-to-column mapping minimizing the
/// summed cost, via the O(n^3) potential/augmenting-path form of the
/// Hungarian algorithm. Columns are scanned in increasing index order, so
/// among equally cheap augmenting steps the smallest column index wins and
/// runs are reproducible.
inline std::vector<int> solve_lap_min(const Matrix& cost) {
    const int n = static_cast<int>(cost.rows());
    if (cost.rows() != cost.cols()) throw std::invalid_argument("cost matrix must be square");
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);  // 1-indexed; 0 is a sentinel
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> min_reduced(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = match[j0], j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < min_reduced[j]) {
                    min_reduced[j] = cur;
                    way[j] = j0;
                }
                if (min_reduced[j] < delta) {
                    delta = min_reduced[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_reduced[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> assignment(n, -1);
    for (int j = 1; j <= n; ++j)
        if (match[j]) assignment[match[j] - 1] = j - 1;
    return assignment;
}

/// Maximizing variant: runs the solver on the negated score matrix.
inline std::vector<int> solve_lap_max(const Matrix& score) {
    return solve_lap_min(-score);
}

} // namespace ggd
