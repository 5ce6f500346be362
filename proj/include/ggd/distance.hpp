#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "ggd/coarsening.hpp"
#include "ggd/graph.hpp"
#include "ggd/matching.hpp"
#include "ggd/spectral.hpp"

namespace ggd {

enum class Variant { airm, lerm, airm_approx, airm_normalized };

inline std::string variant_name(Variant v) {
    switch (v) {
        case Variant::airm: return "airm";
        case Variant::lerm: return "lerm";
        case Variant::airm_approx: return "airm_approx";
        case Variant::airm_normalized: return "airm_normalized";
    }
    return "airm";
}

/// sqrt(sum log^2 lambda) over a pencil spectrum; natural logs throughout.
inline double airm_from_spectrum(const GeneralizedSpectrum& s) {
    double acc = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        double l = std::log(s.values(i));
        acc += l * l;
    }
    return std::sqrt(acc);
}

/// Affine-invariant geodesic distance ||log(L1^{-1} L2)||_F.
inline double ggd_airm(const ModifiedLaplacian& l1, const ModifiedLaplacian& l2) {
    return airm_from_spectrum(generalized_eig_spd(l1, l2));
}

/// Restriction of the geodesic sum to the k largest and k smallest pencil
/// eigenvalues. Never exceeds the full distance.
inline double ggd_approx(const ModifiedLaplacian& l1, const ModifiedLaplacian& l2, int k) {
    return airm_from_spectrum(extreme_generalized_eigs(l1, l2, k));
}

namespace detail {

inline Matrix matrix_log_spd(const Matrix& m) {
    EigDecomposition eig = sym_eig(m);
    if (eig.values(0) <= 0.0)
        throw NumericalError("matrix logarithm requires a positive definite matrix");
    Vector logged = eig.values.array().log();
    return eig.vectors * logged.asDiagonal() * eig.vectors.transpose();
}

} // namespace detail

/// Log-Euclidean distance ||log(L1) - log(L2)||_F.
inline double ggd_lerm(const ModifiedLaplacian& l1, const ModifiedLaplacian& l2) {
    if (l1.dim() != l2.dim())
        throw std::invalid_argument("matrices must have equal dimension");
    return (detail::matrix_log_spd(l1.entries) - detail::matrix_log_spd(l2.entries)).norm();
}

/// D^{-1/2} L D^{-1/2}; every node must have positive degree.
inline Matrix normalized_laplacian(const Matrix& adjacency) {
    Vector deg = adjacency.rowwise().sum();
    if ((deg.array() <= 0.0).any())
        throw InfeasibleError("normalized Laplacian requires positive degrees");
    Vector inv_sqrt = deg.array().rsqrt();
    Matrix l = build_laplacian(adjacency);
    return inv_sqrt.asDiagonal() * l * inv_sqrt.asDiagonal();
}

/// Geodesic distance over modified *normalized* Laplacians at identity
/// correspondence. Experimental: the value is highly sensitive to epsilon.
inline double ggd_normalized_variant(const Graph& g1, const Graph& g2, double epsilon) {
    if (g1.node_count() != g2.node_count())
        throw InfeasibleError("graphs must have equal node counts");
    if (!is_connected(g1) || !is_connected(g2))
        throw InfeasibleError("normalized variant requires connected graphs");
    ModifiedLaplacian l1 = modify_laplacian(normalized_laplacian(build_adjacency(g1)), epsilon);
    ModifiedLaplacian l2 = modify_laplacian(normalized_laplacian(build_adjacency(g2)), epsilon);
    return ggd_airm(l1, l2);
}

struct GgdParams {
    double epsilon = 1e-4;
    std::optional<double> eta;  // empty: 0.5 below 100 nodes, 0.2 above
    double alpha = 0.0;
    Variant variant = Variant::airm;
    std::optional<int> approx_k;  // required for airm_approx
    Rounding rounding = Rounding::lap;
    ResistanceMode resistance;
    int batch = 1;
    bool giant_component = false;
};

struct GgdResult {
    double distance = 0.0;
    GeneralizedSpectrum spectrum;
    double epsilon = 0.0;
    double eta = 0.0;
    std::optional<CoarseningTrace> coarsening_trace;
    Permutation permutation{std::vector<int>{}};
    Variant variant = Variant::airm;
    std::optional<int> approx_k;
};

namespace detail {

inline Graph prepare_input(const Graph& g, const GgdParams& params, const char* which) {
    if (is_connected(g)) return g;
    if (!params.giant_component)
        throw InfeasibleError(std::string(which) +
                              " is disconnected; pass the giant-component option to substitute "
                              "its largest component");
    return giant_component(g);
}

} // namespace detail

/// The full two-phase pipeline. The larger input is coarsened to the smaller
/// size, matched by spectral alignment, and the geodesic distance of the
/// matched modified Laplacians is returned with full provenance. The pencil
/// is oriented with the larger (or first) input as L1; by the reciprocal
/// symmetry of pencil spectra the orientation does not change the value.
inline GgdResult compute_ggd(const Graph& g1, const Graph& g2, const GgdParams& params = {}) {
    if (!(params.epsilon > 0.0))
        throw std::invalid_argument("epsilon must be strictly positive");

    Graph first = detail::prepare_input(g1, params, "first graph");
    Graph second = detail::prepare_input(g2, params, "second graph");
    if (second.node_count() > first.node_count()) std::swap(first, second);

    std::optional<CoarseningTrace> trace;
    if (first.node_count() > second.node_count()) {
        auto [coarse, t] = coarsen_to_size(first, second.node_count(), params.alpha,
                                           params.resistance, params.batch);
        first = std::move(coarse);
        trace = std::move(t);
    }

    const int n = second.node_count();
    const double eta = params.eta.value_or(default_eta(n));
    Permutation pi = match_graphs(first, second, eta, params.rounding);

    Matrix a1 = apply_permutation(build_adjacency(first), pi);
    Matrix a2 = build_adjacency(second);

    Matrix lap1, lap2;
    if (params.variant == Variant::airm_normalized) {
        lap1 = normalized_laplacian(a1);
        lap2 = normalized_laplacian(a2);
    } else {
        lap1 = build_laplacian(a1);
        lap2 = build_laplacian(a2);
    }
    ModifiedLaplacian l1 = modify_laplacian(lap1, params.epsilon);
    ModifiedLaplacian l2 = modify_laplacian(lap2, params.epsilon);

    GgdResult result;
    result.epsilon = params.epsilon;
    result.eta = eta;
    result.coarsening_trace = std::move(trace);
    result.permutation = std::move(pi);
    result.variant = params.variant;

    switch (params.variant) {
        case Variant::airm:
        case Variant::airm_normalized:
            result.spectrum = generalized_eig_spd(l1, l2);
            result.distance = airm_from_spectrum(result.spectrum);
            break;
        case Variant::airm_approx: {
            if (!params.approx_k)
                throw std::invalid_argument("airm_approx requires the pair count k");
            result.approx_k = params.approx_k;
            result.spectrum = extreme_generalized_eigs(l1, l2, *params.approx_k);
            result.distance = airm_from_spectrum(result.spectrum);
            break;
        }
        case Variant::lerm:
            // The log-Euclidean value is not a pencil-spectrum functional;
            // the spectrum is still recorded for diagnostics.
            result.spectrum = generalized_eig_spd(l1, l2);
            result.distance = ggd_lerm(l1, l2);
            break;
    }
    return result;
}

} // namespace ggd
