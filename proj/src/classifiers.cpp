#include "fs2d/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace fs2d {

namespace detail {

std::vector<int> nb_predict(const Dataset& train, std::span<const int> train_rows,
                            const Dataset& test, std::span<const int> test_rows,
                            std::span<const int> cols) {
    if (train_rows.empty()) throw std::invalid_argument("nb: empty training set");
    const std::size_t nc = cols.size();

    // Distinct classes present in the training rows, ascending.
    std::map<int, int> class_index;
    for (int r : train_rows) class_index.emplace(train.labels()[static_cast<std::size_t>(r)], 0);
    int next = 0;
    for (auto& [lab, idx] : class_index) idx = next++;
    const std::size_t m = class_index.size();
    std::vector<int> class_value(m);
    for (const auto& [lab, idx] : class_index) class_value[static_cast<std::size_t>(idx)] = lab;

    std::vector<double> counts(m, 0.0);
    std::vector<double> sum(m * nc, 0.0), sumsq(m * nc, 0.0);
    std::vector<double> gsum(nc, 0.0), gsumsq(nc, 0.0);
    for (int r : train_rows) {
        const auto ri = static_cast<std::size_t>(r);
        const auto c = static_cast<std::size_t>(class_index.at(train.labels()[ri]));
        counts[c] += 1.0;
        for (std::size_t j = 0; j < nc; ++j) {
            const double v = train.at(ri, static_cast<std::size_t>(cols[j]));
            sum[c * nc + j] += v;
            sumsq[c * nc + j] += v * v;
            gsum[j] += v;
            gsumsq[j] += v * v;
        }
    }

    const double n_train = static_cast<double>(train_rows.size());
    std::vector<double> mean(m * nc), var(m * nc), log_prior(m);
    for (std::size_t j = 0; j < nc; ++j) {
        const double gmean = gsum[j] / n_train;
        const double gvar = std::max(0.0, gsumsq[j] / n_train - gmean * gmean);
        const double floor = 1e-9 * (gvar + 1e-12);
        for (std::size_t c = 0; c < m; ++c) {
            const double mu = sum[c * nc + j] / counts[c];
            double v = sumsq[c * nc + j] / counts[c] - mu * mu;  // biased
            if (!(v > floor)) v = floor;
            mean[c * nc + j] = mu;
            var[c * nc + j] = v;
        }
    }
    for (std::size_t c = 0; c < m; ++c) log_prior[c] = std::log(counts[c] / n_train);

    constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5*ln(2*pi)
    std::vector<int> out;
    out.reserve(test_rows.size());
    for (int r : test_rows) {
        const auto ri = static_cast<std::size_t>(r);
        double best_lp = -std::numeric_limits<double>::infinity();
        int best_class = class_value.front();
        for (std::size_t c = 0; c < m; ++c) {
            double lp = log_prior[c];
            for (std::size_t j = 0; j < nc; ++j) {
                const double v = var[c * nc + j];
                const double diff = test.at(ri, static_cast<std::size_t>(cols[j])) - mean[c * nc + j];
                lp -= kHalfLog2Pi + 0.5 * std::log(v) + diff * diff / (2.0 * v);
            }
            if (lp > best_lp) {  // strict: posterior ties keep the lower class
                best_lp = lp;
                best_class = class_value[c];
            }
        }
        out.push_back(best_class);
    }
    return out;
}

std::vector<int> knn_predict(const Dataset& train, std::span<const int> train_rows,
                             const Dataset& test, std::span<const int> test_rows,
                             std::span<const int> cols, int k) {
    if (k < 1) throw std::invalid_argument("knn: k must be >= 1");
    if (static_cast<std::size_t>(k) > train_rows.size())
        throw std::invalid_argument("knn: k exceeds training-set size");

    const std::size_t nt = train_rows.size();
    const std::size_t kk = static_cast<std::size_t>(k);
    std::vector<int> out;
    out.reserve(test_rows.size());
    // (squared distance, position in train_rows); train_rows ascend, so the
    // pair order realizes the distance-then-lower-index tie rule.
    std::vector<std::pair<double, int>> dist(nt);

    for (int r : test_rows) {
        const auto ri = static_cast<std::size_t>(r);
        for (std::size_t t = 0; t < nt; ++t) {
            const auto ti = static_cast<std::size_t>(train_rows[t]);
            double d2 = 0.0;
            for (int cj : cols) {
                const auto j = static_cast<std::size_t>(cj);
                const double diff = test.at(ri, j) - train.at(ti, j);
                d2 += diff * diff;
            }
            dist[t] = {d2, static_cast<int>(t)};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk),
                          dist.end());

        std::map<int, int> votes;
        for (std::size_t t = 0; t < kk; ++t) {
            const auto ti = static_cast<std::size_t>(train_rows[static_cast<std::size_t>(dist[t].second)]);
            ++votes[train.labels()[ti]];
        }
        int best_count = 0;
        for (const auto& [lab, c] : votes) best_count = std::max(best_count, c);
        // Vote tie: nearest neighbor among the tied classes decides.
        int winner = -1;
        for (std::size_t t = 0; t < kk; ++t) {
            const auto ti = static_cast<std::size_t>(train_rows[static_cast<std::size_t>(dist[t].second)]);
            const int lab = train.labels()[ti];
            if (votes[lab] == best_count) {
                winner = lab;
                break;
            }
        }
        out.push_back(winner);
    }
    return out;
}

}  // namespace detail

Prediction nb_classify(const Dataset& train, const Dataset& test) {
    if (train.n_features() != test.n_features())
        throw std::invalid_argument("nb_classify: feature-count mismatch");
    std::vector<int> train_rows(train.n_instances()), test_rows(test.n_instances());
    std::iota(train_rows.begin(), train_rows.end(), 0);
    std::iota(test_rows.begin(), test_rows.end(), 0);
    std::vector<int> cols(train.n_features());
    std::iota(cols.begin(), cols.end(), 0);
    return {detail::nb_predict(train, train_rows, test, test_rows, cols)};
}

Prediction knn_classify(const Dataset& train, const Dataset& test, int k) {
    if (train.n_features() != test.n_features())
        throw std::invalid_argument("knn_classify: feature-count mismatch");
    std::vector<int> train_rows(train.n_instances()), test_rows(test.n_instances());
    std::iota(train_rows.begin(), train_rows.end(), 0);
    std::iota(test_rows.begin(), test_rows.end(), 0);
    std::vector<int> cols(train.n_features());
    std::iota(cols.begin(), cols.end(), 0);
    return {detail::knn_predict(train, train_rows, test, test_rows, cols, k)};
}

double error_rate(const Prediction& pred, const std::vector<int>& truth) {
    if (pred.labels.size() != truth.size())
        throw std::invalid_argument("error_rate: length mismatch");
    if (truth.empty()) throw std::invalid_argument("error_rate: empty inputs");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (pred.labels[i] != truth[i]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

}  // namespace fs2d
