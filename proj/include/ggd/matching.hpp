#pragma once

#include <cmath>
#include <vector>

#include "ggd/graph.hpp"
#include "ggd/lap.hpp"
#include "ggd/spectral.hpp"

namespace ggd {

enum class Rounding { lap, greedy };

/// Cauchy kernel of bandwidth eta: 1 / ((x - y)^2 + eta^2).
inline double cauchy_weight(double x, double y, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be strictly positive");
    double gap = x - y;
    return 1.0 / (gap * gap + eta * eta);
}

/// Default bandwidth: 0.5 below 100 nodes, 0.2 above.
inline double default_eta(int n) { return n < 100 ? 0.5 : 0.2; }

/// Pairwise eigen-alignment score matrix. Entry (i, j) scores matching node i
/// of the first graph to node j of the second.
struct SimilarityMatrix {
    Matrix entries;
    double eta = 0.0;
};

/// Builds the alignment matrix from both adjacency eigensystems. With
/// J = 1*1^T every term collapses to a rank-one update, so the whole sum is
/// the O(n^3) product X = U K V^T with
/// K(i,j) = w(zeta_i, mu_j) * (u_i^T 1) * (v_j^T 1).
/// The result is invariant to eigenvector sign choices: each eigenvector
/// enters its term twice.
inline SimilarityMatrix similarity_matrix(const Matrix& a1, const Matrix& a2, double eta) {
    if (a1.rows() != a2.rows())
        throw std::invalid_argument("graphs must have equal node counts");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be strictly positive");
    const int n = static_cast<int>(a1.rows());

    EigDecomposition e1 = sym_eig(a1);
    EigDecomposition e2 = sym_eig(a2);
    Vector ones = Vector::Ones(n);
    Vector u_mass = e1.vectors.transpose() * ones;
    Vector v_mass = e2.vectors.transpose() * ones;

    Matrix k(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            k(i, j) = cauchy_weight(e1.values(i), e2.values(j), eta) * u_mass(i) * v_mass(j);
    return {e1.vectors * k * e2.vectors.transpose(), eta};
}

/// Rounds a similarity matrix to the permutation maximizing
/// sum_i X(i, pi(i)), the exact linear-assignment optimum.
inline Permutation round_lap(const SimilarityMatrix& x) {
    if (!x.entries.allFinite())
        throw std::invalid_argument("similarity matrix has non-finite entries");
    return Permutation(solve_lap_max(x.entries));
}

/// Row-wise argmax rounding; ties go to the smallest column. The result may
/// fail to be a bijection, in which case callers fall back to round_lap.
inline std::vector<int> round_greedy(const SimilarityMatrix& x) {
    const int n = static_cast<int>(x.entries.rows());
    std::vector<int> pick(n, 0);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int j = 1; j < n; ++j)
            if (x.entries(i, j) > x.entries(i, best)) best = j;
        pick[i] = best;
    }
    return pick;
}

inline bool is_bijection(const std::vector<int>& mapping) {
    std::vector<char> seen(mapping.size(), 0);
    for (int v : mapping) {
        if (v < 0 || v >= static_cast<int>(mapping.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

/// End-to-end spectral matching: similarity matrix, then rounding. Greedy
/// rounding falls back to the exact assignment when its row-argmax picks
/// collide. The returned permutation maps nodes of g1 onto nodes of g2, so
/// apply_permutation(A1, pi) is the best match to A2.
inline Permutation match_graphs(const Graph& g1, const Graph& g2, double eta,
                                Rounding rounding = Rounding::lap) {
    if (g1.node_count() != g2.node_count())
        throw InfeasibleError("graphs must have equal node counts; coarsen first");
    if (!is_connected(g1) || !is_connected(g2))
        throw InfeasibleError("matching requires connected graphs");

    SimilarityMatrix x = similarity_matrix(build_adjacency(g1), build_adjacency(g2), eta);
    if (rounding == Rounding::greedy) {
        std::vector<int> pick = round_greedy(x);
        if (is_bijection(pick)) return Permutation(std::move(pick));
    }
    return round_lap(x);
}

} // namespace ggd
