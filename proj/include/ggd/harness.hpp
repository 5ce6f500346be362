#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "ggd/distance.hpp"
#include "ggd/generators.hpp"
#include "ggd/graph.hpp"
#include "ggd/svm.hpp"

namespace ggd {

struct DistanceMatrix {
    Matrix values;
    GgdParams params;
};

namespace detail {

enum class ErrKind { parse, numerical, infeasible, invalid, other };

[[noreturn]] inline void rethrow(ErrKind kind, const std::string& msg) {
    switch (kind) {
        case ErrKind::parse: throw ParseError(msg);
        case ErrKind::numerical: throw NumericalError(msg);
        case ErrKind::infeasible: throw InfeasibleError(msg);
        case ErrKind::invalid: throw std::invalid_argument(msg);
        default: throw std::runtime_error(msg);
    }
}

} // namespace detail

/// Pairwise distances over a graph list. Pairs are independent, so they run
/// on `threads` workers (0 = hardware count); every pair is computed by the
/// same deterministic pipeline and written to its own slot, which keeps the
/// result identical for any thread count. A failing pair aborts the whole
/// matrix with the pair identified in the error message.
inline DistanceMatrix distance_matrix(const std::vector<Graph>& graphs,
                                      const GgdParams& params = {}, int threads = 0) {
    const int n = static_cast<int>(graphs.size());
    if (n == 0) throw std::invalid_argument("need at least one graph");
    Matrix d = Matrix::Zero(n, n);

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});

    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(pairs.size())));
    if (pairs.empty()) return {std::move(d), params};

    std::atomic<std::size_t> cursor{0};
    struct Failure {
        std::size_t pair_index;
        detail::ErrKind kind;
        std::string message;
    };
    std::vector<Failure> failures;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            std::size_t at = cursor.fetch_add(1);
            if (at >= pairs.size()) return;
            auto [i, j] = pairs[at];
            auto record = [&](detail::ErrKind kind, const std::string& what) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failures.push_back({at, kind,
                                    "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                        "): " + what});
            };
            try {
                d(i, j) = d(j, i) = compute_ggd(graphs[i], graphs[j], params).distance;
            } catch (const ParseError& e) {
                record(detail::ErrKind::parse, e.what());
            } catch (const NumericalError& e) {
                record(detail::ErrKind::numerical, e.what());
            } catch (const InfeasibleError& e) {
                record(detail::ErrKind::infeasible, e.what());
            } catch (const std::invalid_argument& e) {
                record(detail::ErrKind::invalid, e.what());
            } catch (const std::exception& e) {
                record(detail::ErrKind::other, e.what());
            }
        }
    };

    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    if (!failures.empty()) {
        auto first = std::min_element(failures.begin(), failures.end(),
                                      [](const Failure& a, const Failure& b) {
                                          return a.pair_index < b.pair_index;
                                      });
        detail::rethrow(first->kind, first->message);
    }
    return {std::move(d), params};
}

/// Elementwise exp(-gamma * d); unit diagonal for a proper distance matrix.
inline Matrix kernel_from_distances(const Matrix& d, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be strictly positive");
    return (-gamma * d).array().exp();
}

/// Sample Pearson correlation coefficient.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("zero variance");
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

struct CutMismatch {
    double max_ratio = 0.0;
    std::vector<int> subset;   // argmax S as node indices
    long infinite_cuts = 0;    // subsets where only the denominator cut vanished
};

/// Exhaustive maximum of cut_{G1}(S) / cut_{G2}(S) over all nonempty proper
/// subsets with both cuts nonzero. Exponential: refuses n > 20. Subsets whose
/// G2-cut vanishes while the G1-cut does not are counted separately and
/// excluded from the maximum.
inline CutMismatch brute_force_cut_mismatch(const Graph& g1, const Graph& g2) {
    const int n = g1.node_count();
    if (g2.node_count() != n) throw std::invalid_argument("graphs must share the node set");
    if (n > 20) throw std::invalid_argument("brute-force enumeration is limited to n <= 20");

    CutMismatch out;
    out.max_ratio = -1.0;
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        double cut1 = 0.0, cut2 = 0.0;
        for (const auto& e : g1.edges())
            if (((mask >> e.u) & 1u) != ((mask >> e.v) & 1u)) cut1 += e.w;
        for (const auto& e : g2.edges())
            if (((mask >> e.u) & 1u) != ((mask >> e.v) & 1u)) cut2 += e.w;
        if (cut2 == 0.0) {
            if (cut1 != 0.0) ++out.infinite_cuts;
            continue;
        }
        if (cut1 == 0.0) continue;
        double ratio = cut1 / cut2;
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.subset.clear();
            for (int v = 0; v < n; ++v)
                if ((mask >> v) & 1u) out.subset.push_back(v);
        }
    }
    if (out.max_ratio < 0.0) throw InfeasibleError("no subset with both cuts nonzero");
    return out;
}

enum class PerturbKind { node_drop, node_add, edge_drop, edge_add };

inline std::string perturb_kind_name(PerturbKind k) {
    switch (k) {
        case PerturbKind::node_drop: return "node_drop";
        case PerturbKind::node_add: return "node_add";
        case PerturbKind::edge_drop: return "edge_drop";
        case PerturbKind::edge_add: return "edge_add";
    }
    return "node_drop";
}

struct PerturbationSpec {
    PerturbKind kind = PerturbKind::edge_add;
    int amount = 1;  // 0 is the identity spec
    std::uint64_t seed = 0;
};

namespace detail {

inline Graph induced_subgraph(const Graph& g, const std::vector<char>& keep) {
    std::vector<int> new_index(g.node_count(), -1);
    int next = 0;
    for (int i = 0; i < g.node_count(); ++i)
        if (keep[i]) new_index[i] = next++;
    if (next == 0) throw std::invalid_argument("cannot drop every node");
    std::vector<Edge> edges;
    for (const auto& e : g.edges())
        if (keep[e.u] && keep[e.v]) edges.push_back({new_index[e.u], new_index[e.v], e.w});
    std::optional<Matrix> feats;
    if (g.has_features()) {
        Matrix f(next, g.feature_dim());
        for (int i = 0; i < g.node_count(); ++i)
            if (keep[i]) f.row(new_index[i]) = g.features().row(i);
        feats = std::move(f);
    }
    return Graph(next, std::move(edges), std::move(feats), g.label());
}

/// Flags each edge (parallel to g.edges()) that is a bridge.
inline std::vector<char> bridge_flags(const Graph& g) {
    const int n = g.node_count();
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge id)
    for (std::size_t id = 0; id < g.edges().size(); ++id) {
        const auto& e = g.edges()[id];
        adj[e.u].push_back({e.v, static_cast<int>(id)});
        adj[e.v].push_back({e.u, static_cast<int>(id)});
    }
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<char> out(g.edges().size(), 0);
    int timer = 0;
    // Iterative DFS to keep large graphs off the call stack.
    struct Frame {
        int node;
        int parent_edge;
        std::size_t next_child = 0;
    };
    for (int root = 0; root < n; ++root) {
        if (disc[root] >= 0) continue;
        std::vector<Frame> stack{{root, -1}};
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next_child < adj[f.node].size()) {
                auto [to, edge_id] = adj[f.node][f.next_child++];
                if (edge_id == f.parent_edge) continue;
                if (disc[to] >= 0) {
                    low[f.node] = std::min(low[f.node], disc[to]);
                } else {
                    disc[to] = low[to] = timer++;
                    stack.push_back({to, edge_id});
                }
            } else {
                int node = f.node, parent_edge = f.parent_edge;
                stack.pop_back();
                if (parent_edge >= 0) {
                    int parent = stack.back().node;
                    low[parent] = std::min(low[parent], low[node]);
                    if (low[node] > disc[parent]) out[parent_edge] = 1;
                }
            }
        }
    }
    return out;
}

} // namespace detail

/// Seeded structural perturbation. node_add attaches each new node to one
/// uniformly random existing node (weight 1); node_drop removes uniform
/// random nodes, resampling up to 100 times until the rest stays connected;
/// edge_add inserts uniform random non-edges (weight 1); edge_drop removes
/// uniform random non-bridge edges one at a time.
inline Graph perturb(const Graph& g, const PerturbationSpec& spec) {
    if (spec.amount < 0) throw std::invalid_argument("amount must be non-negative");
    if (spec.amount == 0) return g;
    std::mt19937_64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(spec.kind)));
    const int n = g.node_count();

    switch (spec.kind) {
        case PerturbKind::node_add: {
            std::vector<Edge> edges = g.edges();
            std::optional<Matrix> feats;
            if (g.has_features()) {
                // New nodes get zero feature vectors.
                Matrix f = Matrix::Zero(n + spec.amount, g.feature_dim());
                f.topRows(n) = g.features();
                feats = std::move(f);
            }
            for (int k = 0; k < spec.amount; ++k) {
                std::uniform_int_distribution<int> pick(0, n + k - 1);
                edges.push_back({pick(rng), n + k, 1.0});
            }
            return Graph(n + spec.amount, std::move(edges), std::move(feats), g.label());
        }
        case PerturbKind::node_drop: {
            if (spec.amount >= n)
                throw InfeasibleError("cannot drop that many nodes");
            for (int attempt = 0; attempt < 100; ++attempt) {
                std::vector<int> order(n);
                std::iota(order.begin(), order.end(), 0);
                for (int k = 0; k < spec.amount; ++k) {
                    std::uniform_int_distribution<int> pick(k, n - 1);
                    std::swap(order[k], order[pick(rng)]);
                }
                std::vector<char> keep(n, 1);
                for (int k = 0; k < spec.amount; ++k) keep[order[k]] = 0;
                Graph candidate = detail::induced_subgraph(g, keep);
                if (is_connected(candidate)) return candidate;
            }
            throw InfeasibleError("node drop left the graph disconnected in 100 attempts");
        }
        case PerturbKind::edge_add: {
            std::vector<std::pair<int, int>> candidates;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (!g.has_edge(i, j)) candidates.push_back({i, j});
            if (spec.amount > static_cast<int>(candidates.size()))
                throw InfeasibleError("not enough non-edges to add");
            std::vector<Edge> edges = g.edges();
            for (int k = 0; k < spec.amount; ++k) {
                std::uniform_int_distribution<int> pick(k, static_cast<int>(candidates.size()) - 1);
                std::swap(candidates[k], candidates[pick(rng)]);
                edges.push_back({candidates[k].first, candidates[k].second, 1.0});
            }
            return Graph(n, std::move(edges), g.features_opt(), g.label());
        }
        case PerturbKind::edge_drop: {
            Graph current = g;
            for (int k = 0; k < spec.amount; ++k) {
                auto bridges = detail::bridge_flags(current);
                std::vector<int> removable;
                for (std::size_t id = 0; id < bridges.size(); ++id)
                    if (!bridges[id]) removable.push_back(static_cast<int>(id));
                if (removable.empty())
                    throw InfeasibleError("no non-bridge edge left to drop");
                std::uniform_int_distribution<int> pick(0, static_cast<int>(removable.size()) - 1);
                int victim = removable[pick(rng)];
                std::vector<Edge> edges = current.edges();
                edges.erase(edges.begin() + victim);
                current = Graph(current.node_count(), std::move(edges), current.features_opt(),
                                current.label());
            }
            return current;
        }
    }
    throw std::invalid_argument("unknown perturbation kind");
}

/// Pearson correlation between pairwise distances before and after perturbing
/// each population member (per-graph seeds derived from spec.seed). All pairs
/// are used up to 200 graphs; larger populations fall back to a seeded sample
/// of 10^4 pairs.
inline double perturbation_study(const std::vector<Graph>& population,
                                 const PerturbationSpec& spec, const GgdParams& params = {}) {
    if (population.size() < 10)
        throw std::invalid_argument("perturbation study needs at least 10 graphs");
    if (spec.amount == 0) return 1.0;  // identity spec leaves every distance unchanged

    const int n = static_cast<int>(population.size());
    std::vector<Graph> perturbed;
    perturbed.reserve(population.size());
    for (int i = 0; i < n; ++i) {
        PerturbationSpec local = spec;
        local.seed = mix_seed(spec.seed, static_cast<std::uint64_t>(i));
        perturbed.push_back(perturb(population[i], local));
    }

    std::vector<std::pair<int, int>> pairs;
    if (n <= 200) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    } else {
        std::mt19937_64 rng(mix_seed(spec.seed, 0x9a17));
        std::set<std::pair<int, int>> chosen;
        std::uniform_int_distribution<int> pick(0, n - 1);
        while (chosen.size() < 10000) {
            int i = pick(rng), j = pick(rng);
            if (i == j) continue;
            chosen.insert({std::min(i, j), std::max(i, j)});
        }
        pairs.assign(chosen.begin(), chosen.end());
    }

    std::vector<double> before, after;
    before.reserve(pairs.size());
    after.reserve(pairs.size());
    for (auto [i, j] : pairs) {
        before.push_back(compute_ggd(population[i], population[j], params).distance);
        after.push_back(compute_ggd(perturbed[i], perturbed[j], params).distance);
    }
    return pearson(before, after);
}

struct ClassifyMethod {
    enum class Kind { knn, svm };
    Kind kind = Kind::knn;
    int knn_k = 1;
    double svm_c = 1.0;
    std::vector<double> svm_gammas = {0.01, 0.05, 0.1};  // cross-validated
};

struct ClassifyResult {
    std::vector<int> predicted;
    double accuracy = 0.0;       // NaN when test labels are absent
    double gamma_used = 0.0;     // svm only
};

/// k-nearest-neighbor vote; distance ties resolve by train index, vote ties
/// by smallest label.
inline std::vector<int> knn_predict(const Matrix& test_train_d,
                                    const std::vector<int>& train_labels, int k) {
    const int m = static_cast<int>(train_labels.size());
    if (test_train_d.cols() != m) throw std::invalid_argument("distance block shape mismatch");
    if (k < 1 || k > m) throw std::invalid_argument("k out of range");
    std::vector<int> out;
    for (int t = 0; t < test_train_d.rows(); ++t) {
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::tuple(test_train_d(t, a), a) < std::tuple(test_train_d(t, b), b);
        });
        std::map<int, int> votes;
        for (int i = 0; i < k; ++i) votes[train_labels[order[i]]]++;
        int best = votes.begin()->first, best_count = votes.begin()->second;
        for (const auto& [label, count] : votes) {
            if (count > best_count) {  // map order gives ties to the smallest label
                best = label;
                best_count = count;
            }
        }
        out.push_back(best);
    }
    return out;
}

namespace detail {

inline double svm_cv_accuracy(const Matrix& train_d, const std::vector<int>& labels,
                              double gamma, double c, int folds) {
    const int m = static_cast<int>(labels.size());
    std::vector<int> fold_of(m);
    std::map<int, int> seen;
    for (int i = 0; i < m; ++i) fold_of[i] = seen[labels[i]]++ % folds;

    Matrix kernel = kernel_from_distances(train_d, gamma);
    int hits = 0, total = 0;
    for (int f = 0; f < folds; ++f) {
        std::vector<int> tr, te;
        for (int i = 0; i < m; ++i) (fold_of[i] == f ? te : tr).push_back(i);
        if (te.empty() || tr.empty()) continue;
        std::set<int> tr_classes;
        for (int i : tr) tr_classes.insert(labels[i]);
        if (tr_classes.size() < 2) continue;

        Matrix ktr(tr.size(), tr.size());
        std::vector<int> ytr(tr.size());
        for (std::size_t a = 0; a < tr.size(); ++a) {
            ytr[a] = labels[tr[a]];
            for (std::size_t b = 0; b < tr.size(); ++b) ktr(a, b) = kernel(tr[a], tr[b]);
        }
        OneVsOneSvm machine(ktr, ytr, c);
        for (int i : te) {
            Vector row(tr.size());
            for (std::size_t a = 0; a < tr.size(); ++a) row(a) = kernel(i, tr[a]);
            hits += machine.predict(row) == labels[i] ? 1 : 0;
            ++total;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(hits) / total;
}

inline ClassifyResult classify_blocks(const Matrix& train_d, const Matrix& test_train_d,
                                      const std::vector<int>& train_labels,
                                      const std::vector<int>& test_labels,
                                      const ClassifyMethod& method) {
    ClassifyResult result;
    if (method.kind == ClassifyMethod::Kind::knn) {
        result.predicted = knn_predict(test_train_d, train_labels, method.knn_k);
    } else {
        std::map<int, int> class_counts;
        for (int l : train_labels) class_counts[l]++;
        int min_class = train_labels.size();
        for (const auto& [_, cnt] : class_counts) min_class = std::min(min_class, cnt);

        double gamma = method.svm_gammas.at(method.svm_gammas.size() / 2);
        if (min_class >= 2 && method.svm_gammas.size() > 1) {
            int folds = std::min(5, min_class);
            double best_acc = -1.0;
            for (double cand : method.svm_gammas) {
                double acc = svm_cv_accuracy(train_d, train_labels, cand, method.svm_c, folds);
                if (acc > best_acc) {
                    best_acc = acc;
                    gamma = cand;
                }
            }
        }
        result.gamma_used = gamma;
        Matrix ktr = kernel_from_distances(train_d, gamma);
        Matrix kte = kernel_from_distances(test_train_d, gamma);
        OneVsOneSvm machine(ktr, train_labels, method.svm_c);
        for (int t = 0; t < kte.rows(); ++t)
            result.predicted.push_back(machine.predict(kte.row(t).transpose()));
    }

    if (!test_labels.empty()) {
        int hits = 0;
        for (std::size_t i = 0; i < result.predicted.size(); ++i)
            hits += result.predicted[i] == test_labels[i] ? 1 : 0;
        result.accuracy = static_cast<double>(hits) / result.predicted.size();
    } else {
        result.accuracy = std::nan("");
    }
    return result;
}

} // namespace detail

/// Classification over a precomputed full distance matrix: rows/cols indexed
/// like `labels`; train/test index lists select the split.
inline ClassifyResult classify_split(const Matrix& full_d, const std::vector<int>& labels,
                                     const std::vector<int>& train_idx,
                                     const std::vector<int>& test_idx,
                                     const ClassifyMethod& method) {
    if (train_idx.empty()) throw std::invalid_argument("empty train set");
    Matrix train_d(train_idx.size(), train_idx.size());
    for (std::size_t a = 0; a < train_idx.size(); ++a)
        for (std::size_t b = 0; b < train_idx.size(); ++b)
            train_d(a, b) = full_d(train_idx[a], train_idx[b]);
    Matrix test_train_d(test_idx.size(), train_idx.size());
    for (std::size_t a = 0; a < test_idx.size(); ++a)
        for (std::size_t b = 0; b < train_idx.size(); ++b)
            test_train_d(a, b) = full_d(test_idx[a], train_idx[b]);
    std::vector<int> train_labels, test_labels;
    for (int i : train_idx) train_labels.push_back(labels[i]);
    for (int i : test_idx) test_labels.push_back(labels[i]);
    return detail::classify_blocks(train_d, test_train_d, train_labels, test_labels, method);
}

/// Classification from raw graphs; labels come from the Graph objects.
inline ClassifyResult classify(const std::vector<Graph>& train, const std::vector<Graph>& test,
                               const GgdParams& params, const ClassifyMethod& method) {
    if (train.empty()) throw std::invalid_argument("empty train set");
    std::vector<int> train_labels;
    for (const auto& g : train) {
        if (!g.label()) throw std::invalid_argument("every training graph needs a label");
        train_labels.push_back(*g.label());
    }

    Matrix train_d = Matrix::Zero(train.size(), train.size());
    if (method.kind == ClassifyMethod::Kind::svm) {
        for (std::size_t i = 0; i < train.size(); ++i)
            for (std::size_t j = i + 1; j < train.size(); ++j)
                train_d(i, j) = train_d(j, i) =
                    compute_ggd(train[i], train[j], params).distance;
    }
    Matrix test_train_d(test.size(), train.size());
    for (std::size_t i = 0; i < test.size(); ++i)
        for (std::size_t j = 0; j < train.size(); ++j)
            test_train_d(i, j) = compute_ggd(test[i], train[j], params).distance;

    std::vector<int> test_labels;
    bool all_labeled = !test.empty();
    for (const auto& g : test) all_labeled = all_labeled && g.label().has_value();
    if (all_labeled)
        for (const auto& g : test) test_labels.push_back(*g.label());

    return detail::classify_blocks(train_d, test_train_d, train_labels, test_labels, method);
}

/// Mutual-union k-NN graph from a feature matrix, spectrally sparsified:
/// edge weights are 1 / d_euc with d_euc the squared Euclidean distance, and
/// the prune_fraction of edges with the smallest distance ratio
/// rho = w * R_eff is removed, skipping any removal that would disconnect
/// the graph. Original features ride along on the nodes.
inline Graph dataset_to_graph(const Matrix& features, int k, double prune_fraction) {
    const int n = static_cast<int>(features.rows());
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (n < k + 1) throw std::invalid_argument("need at least k + 1 samples");
    if (prune_fraction < 0.0 || prune_fraction >= 1.0)
        throw std::invalid_argument("prune fraction must lie in [0, 1)");

    Matrix sq_dist(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sq_dist(i, j) = (features.row(i) - features.row(j)).squaredNorm();

    std::set<std::pair<int, int>> chosen;
    for (int i = 0; i < n; ++i) {
        std::vector<int> order;
        for (int j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::tuple(sq_dist(i, a), a) < std::tuple(sq_dist(i, b), b);
        });
        for (int r = 0; r < k; ++r) {
            int j = order[r];
            if (sq_dist(i, j) == 0.0)
                throw InfeasibleError("duplicate points produce a zero distance");
            chosen.insert({std::min(i, j), std::max(i, j)});
        }
    }

    std::vector<Edge> edges;
    for (const auto& [u, v] : chosen) edges.push_back({u, v, 1.0 / sq_dist(u, v)});
    Graph g(n, std::move(edges), features);
    if (!is_connected(g)) throw InfeasibleError("k-NN graph is disconnected; increase k");

    int to_remove = static_cast<int>(prune_fraction * static_cast<double>(g.edge_count()));
    if (to_remove == 0) return g;

    std::vector<double> rho = detail::all_edge_resistances(g);
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] *= g.edges()[i].w;
    std::vector<int> order(rho.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ea = g.edges()[a];
        const auto& eb = g.edges()[b];
        return std::tuple(rho[a], ea.u, ea.v) < std::tuple(rho[b], eb.u, eb.v);
    });

    std::vector<Edge> current = g.edges();
    std::set<std::pair<int, int>> removed;
    int removed_count = 0;
    for (int idx : order) {
        if (removed_count == to_remove) break;
        const Edge& e = g.edges()[idx];
        std::vector<Edge> trial;
        for (const auto& c : current)
            if (!(c.u == e.u && c.v == e.v)) trial.push_back(c);
        Graph candidate(n, trial);
        if (!is_connected(candidate)) continue;
        current = std::move(trial);
        ++removed_count;
    }
    return Graph(n, std::move(current), features);
}

/// Distance between two tabular datasets: each becomes a sparsified k-NN
/// graph, then the full pipeline (coarsening handles size mismatch) runs.
inline double dataset_distance(const Matrix& fa, const Matrix& fb, int k,
                               double prune_fraction, const GgdParams& params = {}) {
    Graph ga = dataset_to_graph(fa, k, prune_fraction);
    Graph gb = dataset_to_graph(fb, k, prune_fraction);
    return compute_ggd(ga, gb, params).distance;
}

} // namespace ggd
