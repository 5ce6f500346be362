#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "ggd/graph.hpp"

namespace ggd {

/// Binary support-vector machine trained by SMO-style coordinate ascent on a
/// precomputed kernel. The kernel may be indefinite (it is treated as a noisy
/// observation of a PSD one), so update directions with non-positive
/// curvature are skipped. Training stops when a full sweep leaves every
/// multiplier within `tol` of its KKT condition, or at the iteration cap.
struct BinarySvm {
    std::vector<double> alpha;
    std::vector<int> labels;  // +1 / -1 per training point
    double bias = 0.0;

    double decision(const Vector& kernel_row) const {
        double f = bias;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            if (alpha[i] > 0.0) f += alpha[i] * labels[i] * kernel_row(i);
        return f;
    }
};

inline BinarySvm train_binary_svm(const Matrix& kernel, const std::vector<int>& y,
                                  double c = 1.0, double tol = 1e-3,
                                  long iteration_cap = 100000) {
    const int m = static_cast<int>(y.size());
    if (kernel.rows() != m || kernel.cols() != m)
        throw std::invalid_argument("kernel must be square over the training set");

    BinarySvm svm;
    svm.alpha.assign(m, 0.0);
    svm.labels = y;
    double& b = svm.bias;
    auto& alpha = svm.alpha;

    auto decision = [&](int i) {
        double f = b;
        for (int j = 0; j < m; ++j)
            if (alpha[j] > 0.0) f += alpha[j] * y[j] * kernel(j, i);
        return f;
    };

    long iterations = 0;
    bool changed = true;
    while (changed && iterations < iteration_cap) {
        changed = false;
        for (int i = 0; i < m && iterations < iteration_cap; ++i) {
            double ei = decision(i) - y[i];
            bool violates = (y[i] * ei < -tol && alpha[i] < c) ||
                            (y[i] * ei > tol && alpha[i] > 0.0);
            if (!violates) continue;

            // Second index: largest error gap, ties to the smallest index.
            int j = -1;
            double best_gap = -1.0;
            for (int cand = 0; cand < m; ++cand) {
                if (cand == i) continue;
                double gap = std::abs(ei - (decision(cand) - y[cand]));
                if (gap > best_gap) {
                    best_gap = gap;
                    j = cand;
                }
            }
            if (j < 0) continue;
            ++iterations;

            double ej = decision(j) - y[j];
            double ai_old = alpha[i], aj_old = alpha[j];
            double lo, hi;
            if (y[i] != y[j]) {
                lo = std::max(0.0, aj_old - ai_old);
                hi = std::min(c, c + aj_old - ai_old);
            } else {
                lo = std::max(0.0, ai_old + aj_old - c);
                hi = std::min(c, ai_old + aj_old);
            }
            if (lo >= hi) continue;
            double eta = kernel(i, i) + kernel(j, j) - 2.0 * kernel(i, j);
            if (eta <= 0.0) continue;  // indefinite direction

            double aj = std::clamp(aj_old + y[j] * (ei - ej) / eta, lo, hi);
            if (std::abs(aj - aj_old) < 1e-7) continue;
            double ai = ai_old + y[i] * y[j] * (aj_old - aj);
            alpha[i] = ai;
            alpha[j] = aj;

            double b1 = b - ei - y[i] * (ai - ai_old) * kernel(i, i) -
                        y[j] * (aj - aj_old) * kernel(i, j);
            double b2 = b - ej - y[i] * (ai - ai_old) * kernel(i, j) -
                        y[j] * (aj - aj_old) * kernel(j, j);
            if (ai > 0.0 && ai < c)
                b = b1;
            else if (aj > 0.0 && aj < c)
                b = b2;
            else
                b = 0.5 * (b1 + b2);
            changed = true;
        }
    }
    return svm;
}

/// One-vs-one multiclass wrapper over precomputed kernels.
class OneVsOneSvm {
public:
    /// `train_kernel` is the full kernel over the training set; `labels` are
    /// arbitrary integer classes.
    OneVsOneSvm(const Matrix& train_kernel, const std::vector<int>& labels, double c = 1.0) {
        const int m = static_cast<int>(labels.size());
        std::map<int, std::vector<int>> by_class;
        for (int i = 0; i < m; ++i) by_class[labels[i]].push_back(i);
        if (by_class.size() < 2)
            throw std::invalid_argument("one-vs-one needs at least two classes");
        classes_.reserve(by_class.size());
        for (const auto& [cls, _] : by_class) classes_.push_back(cls);

        for (std::size_t a = 0; a < classes_.size(); ++a) {
            for (std::size_t bi = a + 1; bi < classes_.size(); ++bi) {
                std::vector<int> idx = by_class[classes_[a]];
                idx.insert(idx.end(), by_class[classes_[bi]].begin(),
                           by_class[classes_[bi]].end());
                std::sort(idx.begin(), idx.end());
                std::vector<int> y(idx.size());
                Matrix k(idx.size(), idx.size());
                for (std::size_t r = 0; r < idx.size(); ++r) {
                    y[r] = labels[idx[r]] == classes_[a] ? +1 : -1;
                    for (std::size_t s = 0; s < idx.size(); ++s)
                        k(r, s) = train_kernel(idx[r], idx[s]);
                }
                pairs_.push_back({static_cast<int>(a), static_cast<int>(bi), std::move(idx),
                                  train_binary_svm(k, y, c)});
            }
        }
    }

    /// `cross_row` holds kernel values between one test point and every
    /// training point. Majority vote over the pairwise machines; ties go to
    /// the smallest class label.
    int predict(const Vector& cross_row) const {
        std::map<int, int> votes;
        for (const auto& p : pairs_) {
            Vector sub(p.train_index.size());
            for (std::size_t r = 0; r < p.train_index.size(); ++r)
                sub(r) = cross_row(p.train_index[r]);
            double f = p.machine.decision(sub);
            votes[f >= 0.0 ? classes_[p.class_a] : classes_[p.class_b]]++;
        }
        int best = classes_.front(), best_votes = -1;
        for (int cls : classes_) {
            auto it = votes.find(cls);
            int v = it == votes.end() ? 0 : it->second;
            if (v > best_votes) {
                best = cls;
                best_votes = v;
            }
        }
        return best;
    }

private:
    struct PairMachine {
        int class_a;
        int class_b;
        std::vector<int> train_index;
        BinarySvm machine;
    };
    std::vector<int> classes_;  // sorted ascending via map iteration
    std::vector<PairMachine> pairs_;
};

} // namespace ggd
