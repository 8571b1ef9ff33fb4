#pragma once

#include <span>
#include <vector>

#include "fs2d/dataset.hpp"

namespace fs2d {

struct ClassifierKind {
    enum class Tag { NaiveBayes, Knn };
    Tag tag = Tag::NaiveBayes;
    int k = 5;  // neighbors, k-NN only

    static ClassifierKind naive_bayes() { return {Tag::NaiveBayes, 0}; }
    static ClassifierKind knn(int k = 5) { return {Tag::Knn, k}; }
    const char* name() const { return tag == Tag::NaiveBayes ? "nb" : "knn"; }
};

struct Prediction {
    std::vector<int> labels;  // one per test instance, values from the training classes
};

/// Gaussian Naive Bayes: per-class per-feature mean and biased variance,
/// variance floored at 1e-9 * (per-feature global training variance + 1e-12),
/// class-frequency priors, log-space posterior. Posterior ties go to the
/// lowest class value.
Prediction nb_classify(const Dataset& train, const Dataset& test);

/// k-NN with unweighted Euclidean distance on raw values. Distance ties are
/// broken by lower training index; vote ties by the class of the nearest
/// neighbor among the tied classes.
Prediction knn_classify(const Dataset& train, const Dataset& test, int k = 5);

/// Misclassified count / total count.
double error_rate(const Prediction& pred, const std::vector<int>& truth);

namespace detail {

// Shared kernels over row/column index views, so the criterion can evaluate
// fold slices without materializing projected copies. The public classify
// functions wrap these over whole datasets.
std::vector<int> nb_predict(const Dataset& train, std::span<const int> train_rows,
                            const Dataset& test, std::span<const int> test_rows,
                            std::span<const int> cols);
std::vector<int> knn_predict(const Dataset& train, std::span<const int> train_rows,
                             const Dataset& test, std::span<const int> test_rows,
                             std::span<const int> cols, int k);

}  // namespace detail

}  // namespace fs2d
