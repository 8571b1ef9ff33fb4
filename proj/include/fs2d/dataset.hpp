#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fs2d/bits.hpp"
#include "fs2d/rng.hpp"

namespace fs2d {

/// File or content problem in user-supplied data (CLI exit code 2, as
/// opposed to spec/usage errors which exit 1).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Immutable numeric feature matrix plus categorical labels.  Missing cells
/// are carried as NaN until impute_missing() removes them; all search and
/// classification code requires a complete matrix.
class Dataset {
public:
    Dataset() = default;

    /// Build from explicit rows; labels are arbitrary integers (class
    /// identity only). Feature names optional.
    static Dataset from_rows(std::vector<std::vector<double>> rows,
                             std::vector<int> labels,
                             std::vector<std::string> feature_names = {});

    std::size_t n_features() const { return n_features_; }
    std::size_t n_instances() const { return labels_.size(); }

    double at(std::size_t row, std::size_t col) const {
        return cells_[row * n_features_ + col];
    }
    const double* row(std::size_t r) const { return &cells_[r * n_features_]; }

    const std::vector<int>& labels() const { return labels_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<std::string>& class_names() const { return class_names_; }

    /// Distinct label values, ascending.
    std::vector<int> class_values() const;
    std::size_t n_classes() const { return class_values().size(); }

    std::size_t missing_count() const;

    friend Dataset impute_missing(const Dataset& d);
    friend Dataset project(const Dataset& d, const Mask& mask);
    friend Dataset min_max_normalize(const Dataset& d);
    friend Dataset load_dataset(const std::filesystem::path& path,
                                const struct LoadOptions& opts);

private:
    std::vector<double> cells_;  // row-major, N x n
    std::vector<int> labels_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> class_names_;  // token per label id (CSV loads)
    std::size_t n_features_ = 0;
};

struct LoadOptions {
    std::string label_column = "last";  // "last", column name, or 0-based index
    std::string missing_token = "?";
};

/// Parse a comma-delimited numeric table with one label column.  A header
/// row is auto-detected (any non-label cell of row 1 that is neither numeric
/// nor the missing token). Labels become ids in sorted token order.
Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& opts = {});

/// Replace every missing cell with the value from the nearest complete
/// instance; distance is Euclidean over the features observed in the
/// recipient. Ties go to the lowest donor index.
Dataset impute_missing(const Dataset& d);

/// Stratified k-fold assignment: per class, instance order is shuffled and
/// members are dealt around the fold ring, so per-class and total fold
/// counts each differ by at most one.
struct FoldAssignment {
    std::vector<int> fold_of;  // length N, values in [0,k)
    int k = 0;
};
FoldAssignment stratified_folds(const Dataset& d, int k, Rng& rng);

/// Keep exactly the masked columns (original order); labels unchanged.
Dataset project(const Dataset& d, const Mask& mask);

/// Per-feature min-max rescale to [0,1]; constant columns map to 0.
Dataset min_max_normalize(const Dataset& d);

}  // namespace fs2d
