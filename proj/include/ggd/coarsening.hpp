#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "ggd/graph.hpp"
#include "ggd/spectral.hpp"

namespace ggd {

/// How edge resistances are evaluated during coarsening. `automatic` picks
/// the exact eigensystem route up to 500 nodes and order-min(n,50) Krylov
/// estimates beyond that.
struct ResistanceMode {
    enum class Kind { automatic, exact, krylov };
    Kind kind = Kind::automatic;
    int krylov_order = 50;

    static ResistanceMode exact() { return {Kind::exact, 0}; }
    static ResistanceMode krylov(int m) { return {Kind::krylov, m}; }

    bool use_exact(int n) const {
        if (kind == Kind::exact) return true;
        if (kind == Kind::krylov) return false;
        return n <= 500;
    }
    int order(int n) const {
        return std::min(n, kind == Kind::automatic ? 50 : krylov_order);
    }
};

struct CoarseningStep {
    int p = 0;
    int q = 0;
    double r_star = 0.0;
    int node_count_after = 0;
};

struct CoarseningTrace {
    std::vector<CoarseningStep> steps;
};

namespace detail {

inline void require_edge(const Graph& g, int p, int q) {
    if (p < 0 || p >= g.node_count() || q < 0 || q >= g.node_count() || p == q)
        throw std::invalid_argument("invalid node pair");
    if (!g.has_edge(p, q)) throw std::invalid_argument("edge is not present in the graph");
}

/// All edge resistances from one Laplacian eigendecomposition.
inline std::vector<double> all_edge_resistances(const Graph& g) {
    EigDecomposition eig = sym_eig(build_laplacian(build_adjacency(g)));
    const int n = g.node_count();
    const double cutoff = 1e-12 * std::max(eig.values(n - 1), 1.0);
    std::vector<double> out;
    out.reserve(g.edges().size());
    for (const auto& e : g.edges()) {
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            if (eig.values(i) <= cutoff) continue;
            double proj = eig.vectors(e.u, i) - eig.vectors(e.v, i);
            r += proj * proj / eig.values(i);
        }
        out.push_back(r);
    }
    return out;
}

inline double feature_gap(const Graph& g, int p, int q) {
    return (g.features().row(p) - g.features().row(q)).norm();
}

} // namespace detail

/// R*(p, q) = R_eff(p, q) + alpha * ||f_p - f_q||. With alpha = 0 (or no
/// features required) this is the plain effective resistance.
inline double modified_edge_resistance(const Graph& g, int p, int q, double alpha,
                                       const ResistanceMode& mode = {}) {
    detail::require_edge(g, p, q);
    if (alpha < 0.0) throw std::invalid_argument("alpha must be non-negative");
    if (alpha > 0.0 && !g.has_features())
        throw std::invalid_argument("alpha > 0 requires node features");

    const int n = g.node_count();
    double r = mode.use_exact(n) ? effective_resistance_exact(g, p, q)
                                 : effective_resistance_krylov(g, p, q, mode.order(n));
    if (alpha > 0.0) r += alpha * detail::feature_gap(g, p, q);
    return r;
}

/// Contracts edge (p, q): the two endpoints merge into one node at index
/// min(p, q), indices above max(p, q) shift down by one. Parallel edges sum
/// their weights, would-be self-loops vanish, and the merged node's feature
/// vector is the weighted-degree average of the two originals.
inline Graph contract_edge(const Graph& g, int p, int q) {
    detail::require_edge(g, p, q);
    const int lo = std::min(p, q), hi = std::max(p, q);
    const int n = g.node_count();
    auto remap = [lo, hi](int x) { return x == hi ? lo : (x > hi ? x - 1 : x); };

    std::map<std::pair<int, int>, double> merged;
    for (const auto& e : g.edges()) {
        int u = remap(e.u), v = remap(e.v);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        merged[{u, v}] += e.w;
    }
    std::vector<Edge> edges;
    edges.reserve(merged.size());
    for (const auto& [uv, w] : merged) edges.push_back({uv.first, uv.second, w});

    std::optional<Matrix> feats;
    if (g.has_features()) {
        Vector deg = g.weighted_degrees();
        Matrix f(n - 1, g.feature_dim());
        for (int i = 0; i < n; ++i) {
            if (i == hi) continue;
            f.row(remap(i)) = g.features().row(i);
        }
        double total = deg(lo) + deg(hi);
        if (total > 0.0)
            f.row(lo) = (deg(lo) * g.features().row(lo) + deg(hi) * g.features().row(hi)) / total;
        feats = std::move(f);
    }
    return Graph(n - 1, std::move(edges), std::move(feats), g.label());
}

/// Shrinks g to exactly target_n nodes by repeatedly contracting the edge of
/// minimum modified resistance (ties to lexicographically smallest pair).
/// Resistances are recomputed after every round; `batch` > 1 contracts up to
/// that many pairwise-disjoint minimum edges per round instead of one.
inline std::pair<Graph, CoarseningTrace> coarsen_to_size(const Graph& g, int target_n,
                                                         double alpha = 0.0,
                                                         const ResistanceMode& mode = {},
                                                         int batch = 1) {
    if (target_n < 1) throw std::invalid_argument("target size must be at least 1");
    if (target_n >= g.node_count())
        throw std::invalid_argument("target size must be smaller than the graph");
    if (batch < 1) throw std::invalid_argument("batch must be at least 1");
    if (!is_connected(g)) throw InfeasibleError("coarsening requires a connected graph");

    Graph current = g;
    CoarseningTrace trace;
    while (current.node_count() > target_n) {
        const int n = current.node_count();
        std::vector<double> r;
        if (mode.use_exact(n)) {
            r = detail::all_edge_resistances(current);
        } else {
            r.reserve(current.edges().size());
            for (const auto& e : current.edges())
                r.push_back(effective_resistance_krylov(current, e.u, e.v, mode.order(n)));
        }
        if (alpha > 0.0) {
            if (!current.has_features())
                throw std::invalid_argument("alpha > 0 requires node features");
            for (std::size_t i = 0; i < r.size(); ++i) {
                const auto& e = current.edges()[i];
                r[i] += alpha * detail::feature_gap(current, e.u, e.v);
            }
        }

        std::vector<int> order(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const auto& ea = current.edges()[a];
            const auto& eb = current.edges()[b];
            return std::tuple(r[a], ea.u, ea.v) < std::tuple(r[b], eb.u, eb.v);
        });

        // Up to `batch` pairwise-disjoint edges, cheapest first.
        int budget = std::min(batch, n - target_n);
        std::vector<char> touched(n, 0);
        std::vector<std::pair<Edge, double>> chosen;
        for (int idx : order) {
            if (static_cast<int>(chosen.size()) == budget) break;
            const Edge& e = current.edges()[idx];
            if (touched[e.u] || touched[e.v]) continue;
            touched[e.u] = touched[e.v] = 1;
            chosen.push_back({e, r[idx]});
        }

        for (auto& [edge, r_star] : chosen) {
            current = contract_edge(current, edge.u, edge.v);
            trace.steps.push_back({edge.u, edge.v, r_star, current.node_count()});
            // Later picks in this round see indices shift past the merge.
            int lo = std::min(edge.u, edge.v), hi = std::max(edge.u, edge.v);
            for (auto& [later, _] : chosen) {
                auto remap = [lo, hi](int x) { return x == hi ? lo : (x > hi ? x - 1 : x); };
                later.u = remap(later.u);
                later.v = remap(later.v);
            }
        }
    }
    return {std::move(current), std::move(trace)};
}

} // namespace ggd
