#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "fs2d/classifiers.hpp"
#include "fs2d/dataset.hpp"

namespace fs2d {

/// Wrapper fitness for one optimization run: mean k-fold stratified CV
/// classification error of a feature subset. Folds are frozen at
/// construction so fitness is a pure function of the mask for the whole run.
///
/// evaluate_subset() increments the FE counter on every call (memo hits
/// included) and accumulates wall time spent evaluating (the T2 component of
/// the timing decomposition). Calls for distinct masks may run concurrently.
class CriterionContext {
public:
    CriterionContext(const Dataset& data, FoldAssignment folds,
                     ClassifierKind classifier, bool memoize = false);

    CriterionContext(const CriterionContext&) = delete;
    CriterionContext& operator=(const CriterionContext&) = delete;

    /// J(mask) = (1/k) sum of per-fold error rates. Counts one FE.
    double evaluate_subset(const Mask& mask);

    /// J over the all-ones mask; the baseline. Not counted as an FE and not
    /// added to the evaluation-time accumulator.
    double evaluate_full_set() const;

    std::uint64_t fe_count() const { return fe_count_.load(std::memory_order_relaxed); }
    double eval_seconds() const { return eval_seconds_.load(std::memory_order_relaxed); }

    const Dataset& dataset() const { return *data_; }
    const FoldAssignment& folds() const { return folds_; }
    ClassifierKind classifier() const { return classifier_; }
    bool memoize() const { return memoize_; }

private:
    double cv_error(const Mask& mask) const;

    const Dataset* data_;
    FoldAssignment folds_;
    ClassifierKind classifier_;
    bool memoize_;

    std::vector<std::vector<int>> train_rows_;  // per fold
    std::vector<std::vector<int>> test_rows_;

    std::atomic<std::uint64_t> fe_count_{0};
    std::atomic<double> eval_seconds_{0.0};
    mutable std::mutex memo_mutex_;
    std::unordered_map<std::string, double> memo_;
};

}  // namespace fs2d
