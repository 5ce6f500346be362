#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ggd/errors.hpp"
#include "ggd/graph.hpp"

namespace ggd {

/// Eigensystem of a symmetric matrix: values ascending, orthonormal columns.
struct EigDecomposition {
    Vector values;
    Matrix vectors;
};

/// Generalized eigenvalues of an SPD pencil, descending and strictly positive.
struct GeneralizedSpectrum {
    Vector values;

    int size() const { return static_cast<int>(values.size()); }
    double max() const { return values(0); }
    double min() const { return values(values.size() - 1); }
};

namespace detail {

inline void require_symmetric(const Matrix& m, double rel_tol = 1e-10) {
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
    double scale = m.cwiseAbs().maxCoeff();
    double gap = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (gap > rel_tol * std::max(scale, 1.0))
        throw std::invalid_argument("matrix is not symmetric");
}

} // namespace detail

inline EigDecomposition sym_eig(const Matrix& m) {
    detail::require_symmetric(m);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericalError("symmetric eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Eigenvalues of L1^{-1} L2 for SPD L1, L2, computed through the Cholesky
/// factor of L1 (never an explicit inverse): with L1 = R^T R the spectrum
/// equals that of the symmetric matrix R^{-T} L2 R^{-1}.
inline GeneralizedSpectrum generalized_eig_spd(const ModifiedLaplacian& l1,
                                               const ModifiedLaplacian& l2) {
    if (l1.dim() != l2.dim())
        throw std::invalid_argument("pencil matrices must have equal dimension");
    Eigen::LLT<Matrix> llt(l1.entries);
    if (llt.info() != Eigen::Success)
        throw NumericalError("Cholesky failed: first pencil matrix is not SPD");
    Matrix r = llt.matrixU();
    // M = R^{-T} L2 R^{-1} via two triangular solves.
    Matrix m = r.transpose().triangularView<Eigen::Lower>().solve(l2.entries);
    m = r.transpose().triangularView<Eigen::Lower>().solve(Matrix(m.transpose()));
    m = 0.5 * (m + m.transpose());

    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericalError("pencil eigensolver did not converge");
    Vector v = solver.eigenvalues().reverse();
    if (v(v.size() - 1) <= 0.0)
        throw NumericalError("pencil produced a non-positive eigenvalue; "
                             "second matrix is not SPD");
    return {std::move(v)};
}

/// The k largest and k smallest pencil eigenvalues, descending.
inline GeneralizedSpectrum extreme_generalized_eigs(const ModifiedLaplacian& l1,
                                                    const ModifiedLaplacian& l2, int k) {
    const int n = l1.dim();
    if (k < 1 || k > n / 2) throw std::invalid_argument("k must satisfy 1 <= k <= n/2");
    GeneralizedSpectrum full = generalized_eig_spd(l1, l2);
    Vector v(2 * k);
    v.head(k) = full.values.head(k);
    v.tail(k) = full.values.tail(k);
    return {std::move(v)};
}

/// Effective resistance between p and q from the Laplacian eigensystem:
/// sum over nonzero eigenvalues of (u_i^T b_pq)^2 / sigma_i.
inline double effective_resistance_exact(const Graph& g, int p, int q) {
    const int n = g.node_count();
    if (p < 0 || p >= n || q < 0 || q >= n)
        throw std::invalid_argument("node index out of range");
    if (p == q) return 0.0;  // limit convention
    if (!is_connected(g)) throw InfeasibleError("effective resistance needs a connected graph");

    EigDecomposition eig = sym_eig(build_laplacian(build_adjacency(g)));
    const double cutoff = 1e-12 * std::max(eig.values(n - 1), 1.0);
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
        if (eig.values(i) <= cutoff) continue;
        double proj = eig.vectors(p, i) - eig.vectors(q, i);
        r += proj * proj / eig.values(i);
    }
    return r;
}

/// Orthonormal basis of span{x, Ax, ..., A^{m-1}x}. `order` may come back
/// smaller than requested when the subspace becomes invariant (breakdown).
struct KrylovBasis {
    Matrix vectors;
    int order = 0;
    bool breakdown = false;
};

inline KrylovBasis krylov_basis(const Matrix& adjacency, const Vector& x, int m) {
    const int n = static_cast<int>(adjacency.rows());
    if (adjacency.rows() != adjacency.cols())
        throw std::invalid_argument("adjacency matrix must be square");
    if (x.size() != n) throw std::invalid_argument("start vector dimension mismatch");
    if (m < 1 || m > n) throw std::invalid_argument("order must satisfy 1 <= m <= n");
    if (x.norm() < 1e-12) throw std::invalid_argument("start vector must be nonzero");

    Matrix q(n, m);
    q.col(0) = x / x.norm();
    int order = 1;
    bool breakdown = false;
    for (int j = 1; j < m; ++j) {
        Vector w = adjacency * q.col(j - 1);
        // Twice-orthogonalized Gram-Schmidt against every previous vector.
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < order; ++i) w -= q.col(i).dot(w) * q.col(i);
        double norm = w.norm();
        if (norm < 1e-12) {
            breakdown = true;
            break;
        }
        q.col(order++) = w / norm;
    }
    return {q.leftCols(order), order, breakdown};
}

/// Krylov approximation of effective resistance: Ritz vectors of L within
/// the order-m Krylov space of the adjacency matrix feed the spectral-sum
/// formula; terms with Rayleigh quotient below 1e-12 are skipped (the
/// constant direction contributes nothing since b_pq is orthogonal to 1).
/// The start vector defaults to b_pq normalized.
inline double effective_resistance_krylov(const Graph& g, int p, int q, int m,
                                          std::optional<Vector> start = std::nullopt) {
    const int n = g.node_count();
    if (p < 0 || p >= n || q < 0 || q >= n)
        throw std::invalid_argument("node index out of range");
    if (p == q) return 0.0;
    if (m < 1 || m > n) throw std::invalid_argument("order must satisfy 1 <= m <= n");
    if (!is_connected(g)) throw InfeasibleError("effective resistance needs a connected graph");

    Vector b = Vector::Zero(n);
    b(p) = 1.0;
    b(q) = -1.0;
    Vector x = start.value_or(b);

    Matrix a = build_adjacency(g);
    KrylovBasis basis = krylov_basis(a, x, m);
    Matrix l = build_laplacian(a);

    // Rayleigh-Ritz rotation inside the Krylov space.
    Matrix t = basis.vectors.transpose() * l * basis.vectors;
    t = 0.5 * (t + t.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> ritz(t);
    if (ritz.info() != Eigen::Success)
        throw NumericalError("Ritz eigensolver did not converge");
    Matrix u = basis.vectors * ritz.eigenvectors();

    double r = 0.0;
    for (int i = 0; i < basis.order; ++i) {
        double rayleigh = ritz.eigenvalues()(i);
        if (rayleigh < 1e-12) continue;
        double proj = u.col(i).dot(b);
        r += proj * proj / rayleigh;
    }
    return r;
}

} // namespace ggd
