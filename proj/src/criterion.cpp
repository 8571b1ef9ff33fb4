#include "fs2d/criterion.hpp"

#include <chrono>
#include <numeric>
#include <stdexcept>

namespace fs2d {

CriterionContext::CriterionContext(const Dataset& data, FoldAssignment folds,
                                   ClassifierKind classifier, bool memoize)
    : data_(&data),
      folds_(std::move(folds)),
      classifier_(classifier),
      memoize_(memoize) {
    if (folds_.fold_of.size() != data.n_instances())
        throw std::invalid_argument("criterion: fold/dataset size mismatch");
    if (data.missing_count() != 0)
        throw std::invalid_argument("criterion: dataset still has missing cells");
    train_rows_.resize(static_cast<std::size_t>(folds_.k));
    test_rows_.resize(static_cast<std::size_t>(folds_.k));
    for (std::size_t i = 0; i < folds_.fold_of.size(); ++i) {
        const auto f = static_cast<std::size_t>(folds_.fold_of[i]);
        for (std::size_t g = 0; g < train_rows_.size(); ++g)
            (g == f ? test_rows_[g] : train_rows_[g]).push_back(static_cast<int>(i));
    }
}

double CriterionContext::cv_error(const Mask& mask) const {
    if (mask.size() != data_->n_features())
        throw std::invalid_argument("criterion: mask length mismatch");
    if (cardinality(mask) == 0)
        throw std::invalid_argument("criterion: all-zero mask (optimizer bug)");

    // Project once so the classifier kernels walk contiguous columns.
    const Dataset proj = project(*data_, mask);
    std::vector<int> cols(proj.n_features());
    std::iota(cols.begin(), cols.end(), 0);

    double total = 0.0;
    for (std::size_t f = 0; f < test_rows_.size(); ++f) {
        const auto& test = test_rows_[f];
        const auto& train = train_rows_[f];
        std::vector<int> pred;
        if (classifier_.tag == ClassifierKind::Tag::NaiveBayes)
            pred = detail::nb_predict(proj, train, proj, test, cols);
        else
            pred = detail::knn_predict(proj, train, proj, test, cols, classifier_.k);
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < test.size(); ++i)
            if (pred[i] != proj.labels()[static_cast<std::size_t>(test[i])]) ++wrong;
        total += static_cast<double>(wrong) / static_cast<double>(test.size());
    }
    return total / static_cast<double>(test_rows_.size());
}

double CriterionContext::evaluate_subset(const Mask& mask) {
    const auto start = std::chrono::steady_clock::now();
    double value = 0.0;
    bool have = false;
    std::string key;
    if (memoize_) {
        key = mask_to_string(mask);
        std::lock_guard lock(memo_mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            value = it->second;
            have = true;
        }
    }
    if (!have) {
        value = cv_error(mask);
        if (memoize_) {
            std::lock_guard lock(memo_mutex_);
            memo_.emplace(std::move(key), value);
        }
    }
    fe_count_.fetch_add(1, std::memory_order_relaxed);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    eval_seconds_.fetch_add(elapsed.count(), std::memory_order_relaxed);
    return value;
}

double CriterionContext::evaluate_full_set() const {
    return cv_error(ones_mask(data_->n_features()));
}

}  // namespace fs2d
