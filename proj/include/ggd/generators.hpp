#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ggd/graph.hpp"

namespace ggd {

/// splitmix64 step, used to derive independent per-task streams from one
/// base seed so parallel and sequential runs agree.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Graph ring(int n, double weight = 1.0) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, weight});
    return Graph(n, std::move(edges));
}

inline Graph path(int n, double weight = 1.0) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
    return Graph(n, std::move(edges));
}

inline Graph complete(int n, double weight = 1.0) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, weight});
    return Graph(n, std::move(edges));
}

/// Erdos-Renyi G(n, p), resampled until connected. The default edge
/// probability 2 ln(n) / n sits comfortably above the connectivity
/// threshold. Weights are 1, or uniform in [0.5, 1.5] when `weighted`
/// (continuously distributed weights kill graph automorphisms, which the
/// planted-permutation studies rely on).
inline Graph erdos_renyi_connected(int n, std::uint64_t seed, double p = -1.0,
                                   bool weighted = false) {
    if (n < 2) throw std::invalid_argument("need at least two nodes");
    if (p < 0.0) p = std::min(1.0, 2.0 * std::log(static_cast<double>(n)) / n);
    std::mt19937_64 rng(mix_seed(seed, 0xE5));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> weight(0.5, 1.5);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (coin(rng) < p) edges.push_back({i, j, weighted ? weight(rng) : 1.0});
        Graph g(n, std::move(edges));
        if (is_connected(g)) return g;
    }
    throw InfeasibleError("failed to sample a connected graph; p too small");
}

/// Ring plus `chords` random non-ring edges, unit weights.
inline Graph ring_with_chords(int n, int chords, std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, 0xC0));
    std::vector<std::pair<int, int>> candidates;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (j - i != 1 && !(i == 0 && j == n - 1)) candidates.push_back({i, j});
    if (chords > static_cast<int>(candidates.size()))
        throw std::invalid_argument("too many chords requested");
    for (int k = 0; k < chords; ++k) {
        std::uniform_int_distribution<int> pick(k, static_cast<int>(candidates.size()) - 1);
        std::swap(candidates[k], candidates[pick(rng)]);
    }
    Graph base = ring(n);
    std::vector<Edge> edges = base.edges();
    for (int k = 0; k < chords; ++k)
        edges.push_back({candidates[k].first, candidates[k].second, 1.0});
    return Graph(n, std::move(edges));
}

inline Permutation random_permutation(int n, std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, 0xA3));
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 0);
    std::shuffle(m.begin(), m.end(), rng);
    return Permutation(std::move(m));
}

/// Adds zero-mean Gaussian noise of the given standard deviation to every
/// edge weight, clamped away from zero to keep weights valid.
inline Graph with_edge_noise(const Graph& g, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, 0x4E));
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges) e.w = std::max(1e-9, e.w + noise(rng));
    return Graph(g.node_count(), std::move(edges), g.features_opt(), g.label());
}

} // namespace ggd
