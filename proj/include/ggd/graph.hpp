#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "ggd/errors.hpp"

namespace ggd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

/// Weighted undirected simple graph with optional per-node feature vectors
/// and an optional class label. Immutable after construction; construction
/// validates all invariants (index range, no self-loops, no duplicate pairs,
/// strictly positive finite weights, uniform feature dimension).
class Graph {
public:
    Graph(int node_count, std::vector<Edge> edges,
          std::optional<Matrix> features = std::nullopt,
          std::optional<int> label = std::nullopt)
        : n_(node_count),
          edges_(std::move(edges)),
          features_(std::move(features)),
          label_(label) {
        if (n_ < 1) throw std::invalid_argument("graph needs at least one node");
        for (auto& e : edges_) {
            if (e.u == e.v) throw std::invalid_argument("self-loops are not allowed");
            if (e.u > e.v) std::swap(e.u, e.v);
            if (e.u < 0 || e.v >= n_)
                throw std::invalid_argument("edge endpoint out of range");
            if (!(e.w > 0.0) || !std::isfinite(e.w))
                throw std::invalid_argument("edge weights must be strictly positive and finite");
        }
        std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
            return std::pair(a.u, a.v) < std::pair(b.u, b.v);
        });
        for (std::size_t i = 1; i < edges_.size(); ++i) {
            if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v)
                throw std::invalid_argument("duplicate edge for an unordered node pair");
        }
        if (features_) {
            if (features_->rows() != n_)
                throw std::invalid_argument("feature matrix must have one row per node");
            if (!features_->allFinite())
                throw std::invalid_argument("node features must be finite");
        }
    }

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_features() const { return features_.has_value(); }
    int feature_dim() const { return features_ ? static_cast<int>(features_->cols()) : 0; }
    const Matrix& features() const { return *features_; }
    const std::optional<Matrix>& features_opt() const { return features_; }

    std::optional<int> label() const { return label_; }

    bool has_edge(int u, int v) const {
        if (u > v) std::swap(u, v);
        Edge probe{u, v, 1.0};
        auto it = std::lower_bound(edges_.begin(), edges_.end(), probe,
                                   [](const Edge& a, const Edge& b) {
                                       return std::pair(a.u, a.v) < std::pair(b.u, b.v);
                                   });
        return it != edges_.end() && it->u == u && it->v == v;
    }

    /// Weighted degree of every node.
    Vector weighted_degrees() const {
        Vector d = Vector::Zero(n_);
        for (const auto& e : edges_) {
            d[e.u] += e.w;
            d[e.v] += e.w;
        }
        return d;
    }

    std::vector<std::vector<int>> neighbor_lists() const {
        std::vector<std::vector<int>> adj(n_);
        for (const auto& e : edges_) {
            adj[e.u].push_back(e.v);
            adj[e.v].push_back(e.u);
        }
        return adj;
    }

private:
    int n_;
    std::vector<Edge> edges_;
    std::optional<Matrix> features_;
    std::optional<int> label_;
};

/// Node correspondence: node i of the source graph maps to mapping[i]
/// in the target graph. Validated to be a bijection on {0..n-1}.
class Permutation {
public:
    explicit Permutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
        std::vector<int> sorted = mapping_;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] != static_cast<int>(i))
                throw std::invalid_argument("mapping is not a bijection on {0..n-1}");
        }
    }

    static Permutation identity(int n) {
        std::vector<int> m(n);
        std::iota(m.begin(), m.end(), 0);
        return Permutation(std::move(m));
    }

    int size() const { return static_cast<int>(mapping_.size()); }
    int operator[](int i) const { return mapping_[i]; }
    const std::vector<int>& mapping() const { return mapping_; }

    Permutation inverse() const {
        std::vector<int> inv(mapping_.size());
        for (std::size_t i = 0; i < mapping_.size(); ++i)
            inv[mapping_[i]] = static_cast<int>(i);
        return Permutation(std::move(inv));
    }

    /// Composition: (this ∘ other)[i] = this[other[i]].
    Permutation compose(const Permutation& other) const {
        if (size() != other.size())
            throw std::invalid_argument("permutation size mismatch");
        std::vector<int> m(mapping_.size());
        for (int i = 0; i < size(); ++i) m[i] = mapping_[other[i]];
        return Permutation(std::move(m));
    }

private:
    std::vector<int> mapping_;
};

/// Symmetric positive-definite matrix obtained as L + epsilon*I, the point
/// on the SPD cone that phase 2 operates on. Also constructible from any
/// SPD matrix for metric-level computations.
struct ModifiedLaplacian {
    Matrix entries;
    double epsilon = 0.0;

    static ModifiedLaplacian from_spd(Matrix m, double epsilon = 0.0) {
        if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
        Eigen::LLT<Matrix> llt(m);
        if (llt.info() != Eigen::Success)
            throw NumericalError("matrix is not symmetric positive definite");
        return ModifiedLaplacian{std::move(m), epsilon};
    }

    int dim() const { return static_cast<int>(entries.rows()); }
};

inline Matrix build_adjacency(const Graph& g) {
    Matrix a = Matrix::Zero(g.node_count(), g.node_count());
    for (const auto& e : g.edges()) {
        a(e.u, e.v) = e.w;
        a(e.v, e.u) = e.w;
    }
    return a;
}

/// L = D - A for a symmetric adjacency matrix.
inline Matrix build_laplacian(const Matrix& adjacency) {
    if (adjacency.rows() != adjacency.cols())
        throw std::invalid_argument("adjacency matrix must be square");
    Matrix l = -adjacency;
    l.diagonal() = adjacency.rowwise().sum();
    return l;
}

inline ModifiedLaplacian modify_laplacian(const Matrix& laplacian, double epsilon) {
    if (laplacian.rows() != laplacian.cols())
        throw std::invalid_argument("laplacian matrix must be square");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be strictly positive");
    Matrix m = laplacian;
    m.diagonal().array() += epsilon;
    return ModifiedLaplacian{std::move(m), epsilon};
}

/// Relabels nodes: entry (i, j) moves to (p[i], p[j]).
inline Matrix apply_permutation(const Matrix& a, const Permutation& p) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
    if (p.size() != a.rows())
        throw std::invalid_argument("permutation length must match matrix dimension");
    Matrix b(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) b(p[i], p[j]) = a(i, j);
    return b;
}

/// Relabels a graph's nodes in place of the matrix-level overload.
inline Graph apply_permutation(const Graph& g, const Permutation& p) {
    if (p.size() != g.node_count())
        throw std::invalid_argument("permutation length must match node count");
    std::vector<Edge> edges;
    edges.reserve(g.edges().size());
    for (const auto& e : g.edges()) edges.push_back({p[e.u], p[e.v], e.w});
    std::optional<Matrix> feats;
    if (g.has_features()) {
        Matrix f(g.node_count(), g.feature_dim());
        for (int i = 0; i < g.node_count(); ++i) f.row(p[i]) = g.features().row(i);
        feats = std::move(f);
    }
    return Graph(g.node_count(), std::move(edges), std::move(feats), g.label());
}

namespace detail {

inline std::vector<int> component_ids(const Graph& g) {
    std::vector<int> comp(g.node_count(), -1);
    auto adj = g.neighbor_lists();
    int next = 0;
    for (int s = 0; s < g.node_count(); ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[u]) {
                if (comp[v] < 0) {
                    comp[v] = next;
                    q.push(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

} // namespace detail

inline bool is_connected(const Graph& g) {
    auto comp = detail::component_ids(g);
    return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

/// Induced subgraph on the largest connected component, nodes reindexed
/// densely in original order. Ties go to the component containing the
/// smallest original node index (component ids are assigned in BFS order
/// from increasing start nodes, so the earliest component wins ties).
inline Graph giant_component(const Graph& g) {
    auto comp = detail::component_ids(g);
    int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<int> size(ncomp, 0);
    for (int c : comp) ++size[c];
    int best = 0;
    for (int c = 1; c < ncomp; ++c)
        if (size[c] > size[best]) best = c;

    std::vector<int> new_index(g.node_count(), -1);
    int next = 0;
    for (int i = 0; i < g.node_count(); ++i)
        if (comp[i] == best) new_index[i] = next++;

    std::vector<Edge> edges;
    for (const auto& e : g.edges())
        if (comp[e.u] == best && comp[e.v] == best)
            edges.push_back({new_index[e.u], new_index[e.v], e.w});

    std::optional<Matrix> feats;
    if (g.has_features()) {
        Matrix f(next, g.feature_dim());
        for (int i = 0; i < g.node_count(); ++i)
            if (new_index[i] >= 0) f.row(new_index[i]) = g.features().row(i);
        feats = std::move(f);
    }
    return Graph(next, std::move(edges), std::move(feats), g.label());
}

} // namespace ggd
