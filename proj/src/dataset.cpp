#include "fs2d/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fs2d {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size() && std::isfinite(out);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

Dataset Dataset::from_rows(std::vector<std::vector<double>> rows,
                           std::vector<int> labels,
                           std::vector<std::string> feature_names) {
    if (rows.size() != labels.size())
        throw std::invalid_argument("from_rows: rows/labels size mismatch");
    if (rows.empty()) throw std::invalid_argument("from_rows: need at least 1 instance");
    Dataset d;
    d.n_features_ = rows.front().size();
    if (d.n_features_ == 0)
        throw std::invalid_argument("from_rows: need at least 1 feature");
    d.cells_.reserve(rows.size() * d.n_features_);
    for (const auto& r : rows) {
        if (r.size() != d.n_features_)
            throw std::invalid_argument("from_rows: ragged rows");
        d.cells_.insert(d.cells_.end(), r.begin(), r.end());
    }
    d.labels_ = std::move(labels);
    if (feature_names.empty()) {
        for (std::size_t j = 0; j < d.n_features_; ++j)
            feature_names.push_back("f" + std::to_string(j));
    } else if (feature_names.size() != d.n_features_) {
        throw std::invalid_argument("from_rows: feature_names size mismatch");
    }
    d.feature_names_ = std::move(feature_names);
    for (int v : d.class_values()) d.class_names_.push_back(std::to_string(v));
    return d;
}

std::vector<int> Dataset::class_values() const {
    std::set<int> s(labels_.begin(), labels_.end());
    return {s.begin(), s.end()};
}

std::size_t Dataset::missing_count() const {
    std::size_t c = 0;
    for (double v : cells_)
        if (std::isnan(v)) ++c;
    return c;
}

Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path.string());

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!trim(line).empty()) lines.push_back(line);
    }
    if (lines.size() < 2)
        throw DataError(path.string() + ": fewer than 2 rows");

    const auto first = split_csv_line(lines.front());
    const std::size_t n_cols = first.size();
    if (n_cols < 2)
        throw DataError(path.string() + ": need at least 2 columns");

    // Resolve the label column. A name implies a header row.
    std::size_t label_col = n_cols - 1;
    bool label_by_name = false;
    if (opts.label_column != "last") {
        double idx;
        if (parse_double(opts.label_column, idx) && idx == std::floor(idx)) {
            if (idx < 0 || idx >= static_cast<double>(n_cols))
                throw DataError("label column index out of range");
            label_col = static_cast<std::size_t>(idx);
        } else {
            label_by_name = true;
        }
    }

    bool has_header = false;
    if (label_by_name) {
        auto it = std::find(first.begin(), first.end(), opts.label_column);
        if (it == first.end())
            throw DataError("label column absent: " + opts.label_column);
        label_col = static_cast<std::size_t>(it - first.begin());
        has_header = true;
    } else {
        // Header row iff any non-label cell is neither numeric nor missing.
        for (std::size_t j = 0; j < n_cols && !has_header; ++j) {
            if (j == label_col) continue;
            double v;
            if (!parse_double(first[j], v) && first[j] != opts.missing_token)
                has_header = true;
        }
    }

    std::vector<std::string> names;
    std::size_t first_data = has_header ? 1 : 0;
    if (lines.size() - first_data < 2)
        throw DataError(path.string() + ": fewer than 2 data rows");
    for (std::size_t j = 0; j < n_cols; ++j) {
        if (j == label_col) continue;
        names.push_back(has_header ? first[j] : "f" + std::to_string(names.size()));
    }

    std::vector<std::vector<double>> rows;
    std::vector<std::string> label_tokens;
    for (std::size_t r = first_data; r < lines.size(); ++r) {
        const auto cells = split_csv_line(lines[r]);
        if (cells.size() != n_cols)
            throw DataError(path.string() + ": row " + std::to_string(r + 1) +
                                     " has " + std::to_string(cells.size()) +
                                     " cells, expected " + std::to_string(n_cols));
        std::vector<double> row;
        row.reserve(n_cols - 1);
        for (std::size_t j = 0; j < n_cols; ++j) {
            if (j == label_col) continue;
            if (cells[j] == opts.missing_token) {
                row.push_back(kMissing);
                continue;
            }
            double v;
            if (!parse_double(cells[j], v))
                throw DataError(path.string() + ": non-numeric cell '" +
                                         cells[j] + "' at row " + std::to_string(r + 1));
            row.push_back(v);
        }
        if (cells[label_col].empty() || cells[label_col] == opts.missing_token)
            throw DataError(path.string() + ": missing label at row " +
                                     std::to_string(r + 1));
        label_tokens.push_back(cells[label_col]);
        rows.push_back(std::move(row));
    }

    // Label ids in sorted token order, independent of row order.
    std::map<std::string, int> token_id;
    for (const auto& t : label_tokens) token_id.emplace(t, 0);
    int next = 0;
    for (auto& [tok, id] : token_id) id = next++;

    Dataset d;
    d.n_features_ = n_cols - 1;
    d.feature_names_ = std::move(names);
    d.cells_.reserve(rows.size() * d.n_features_);
    for (auto& r : rows) d.cells_.insert(d.cells_.end(), r.begin(), r.end());
    d.labels_.reserve(label_tokens.size());
    for (const auto& t : label_tokens) d.labels_.push_back(token_id.at(t));
    d.class_names_.resize(token_id.size());
    for (const auto& [tok, id] : token_id) d.class_names_[id] = tok;
    return d;
}

Dataset impute_missing(const Dataset& d) {
    if (d.missing_count() == 0) return d;
    const std::size_t n = d.n_features_, N = d.n_instances();

    std::vector<int> complete;
    for (std::size_t i = 0; i < N; ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j)
            if (std::isnan(d.at(i, j))) ok = false;
        if (ok) complete.push_back(static_cast<int>(i));
    }
    if (complete.empty())
        throw DataError("impute_missing: no complete donor instance");

    Dataset out = d;
    for (std::size_t i = 0; i < N; ++i) {
        std::vector<std::size_t> missing_cols;
        std::vector<std::size_t> observed_cols;
        for (std::size_t j = 0; j < n; ++j)
            (std::isnan(d.at(i, j)) ? missing_cols : observed_cols).push_back(j);
        if (missing_cols.empty()) continue;
        if (observed_cols.empty())
            throw DataError("impute_missing: instance " + std::to_string(i) +
                                     " has no observed features");

        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int c : complete) {
            double dist = 0.0;
            for (std::size_t j : observed_cols) {
                const double diff = d.at(i, j) - d.at(c, j);
                dist += diff * diff;
            }
            if (dist < best_dist) {  // strict: ties keep the lowest index
                best_dist = dist;
                best = c;
            }
        }
        for (std::size_t j : missing_cols)
            out.cells_[i * n + j] = d.at(static_cast<std::size_t>(best), j);
    }
    return out;
}

FoldAssignment stratified_folds(const Dataset& d, int k, Rng& rng) {
    const std::size_t N = d.n_instances();
    if (k < 2) throw std::invalid_argument("stratified_folds: k must be >= 2");
    if (static_cast<std::size_t>(k) > N)
        throw std::invalid_argument("stratified_folds: k exceeds instance count");

    FoldAssignment fa;
    fa.k = k;
    fa.fold_of.assign(N, -1);

    // Deal classes (ascending label value) around the fold ring; the ring
    // position carries over between classes so total fold sizes stay even.
    std::map<int, std::vector<int>> by_class;
    for (std::size_t i = 0; i < N; ++i)
        by_class[d.labels()[i]].push_back(static_cast<int>(i));

    int slot = 0;
    for (auto& [label, members] : by_class) {
        std::shuffle(members.begin(), members.end(), rng.engine());
        for (int idx : members) {
            fa.fold_of[static_cast<std::size_t>(idx)] = slot % k;
            ++slot;
        }
    }
    return fa;
}

Dataset project(const Dataset& d, const Mask& mask) {
    if (mask.size() != d.n_features_)
        throw std::invalid_argument("project: mask length mismatch");
    const auto cols = selected_columns(mask);
    if (cols.empty()) throw std::invalid_argument("project: all-zero mask");

    Dataset out;
    out.n_features_ = cols.size();
    out.labels_ = d.labels_;
    out.class_names_ = d.class_names_;
    for (int c : cols) out.feature_names_.push_back(d.feature_names_[static_cast<std::size_t>(c)]);
    out.cells_.reserve(d.n_instances() * cols.size());
    for (std::size_t i = 0; i < d.n_instances(); ++i)
        for (int c : cols) out.cells_.push_back(d.at(i, static_cast<std::size_t>(c)));
    return out;
}

Dataset min_max_normalize(const Dataset& d) {
    Dataset out = d;
    const std::size_t n = d.n_features_, N = d.n_instances();
    for (std::size_t j = 0; j < n; ++j) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < N; ++i) {
            const double v = d.at(i, j);
            if (std::isnan(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double range = hi - lo;
        for (std::size_t i = 0; i < N; ++i) {
            double& v = out.cells_[i * n + j];
            if (std::isnan(v)) continue;
            v = range > 0.0 ? (v - lo) / range : 0.0;
        }
    }
    return out;
}

}  // namespace fs2d
