#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>

#include "fs2d/dataset.hpp"

using namespace fs2d;

namespace {

std::filesystem::path write_temp_csv(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("load_dataset parses a small csv") {
    const auto path = write_temp_csv("fs2d_small.csv",
                                     "1.0,2.0,a\n"
                                     "3.0,4.0,b\n"
                                     "5.0,6.0,a\n");
    const Dataset d = load_dataset(path);
    CHECK(d.n_features() == 2);
    CHECK(d.n_instances() == 3);
    CHECK(d.labels() == std::vector<int>{0, 1, 0});
    CHECK(d.at(1, 1) == doctest::Approx(4.0));
    CHECK(d.feature_names()[0] == "f0");
}

TEST_CASE("load_dataset auto-detects a header row and named label column") {
    const auto path = write_temp_csv("fs2d_header.csv",
                                     "x,y,label\n"
                                     "1,2,0\n"
                                     "3,4,1\n");
    SUBCASE("last column default") {
        const Dataset d = load_dataset(path);
        CHECK(d.n_features() == 2);
        CHECK(d.feature_names() == std::vector<std::string>{"x", "y"});
    }
    SUBCASE("label by name, not last") {
        LoadOptions opts;
        opts.label_column = "x";
        const Dataset d = load_dataset(path, opts);
        CHECK(d.feature_names() == std::vector<std::string>{"y", "label"});
        CHECK(d.labels() == std::vector<int>{0, 1});
    }
    SUBCASE("absent name errors") {
        LoadOptions opts;
        opts.label_column = "nope";
        CHECK_THROWS_AS(load_dataset(path, opts), DataError);
    }
}

TEST_CASE("load_dataset wine corpus has the expected shape") {
    const Dataset d = load_dataset(std::filesystem::path(FS2D_DATA_DIR) / "wine.csv");
    CHECK(d.n_features() == 13);
    CHECK(d.n_instances() == 178);
    CHECK(d.n_classes() == 3);
    CHECK(d.missing_count() == 0);
}

TEST_CASE("load_dataset records missing tokens as sentinels") {
    const auto path = write_temp_csv("fs2d_missing.csv",
                                     "1.0,2.0,a\n"
                                     "?,4.0,b\n"
                                     "5.0,6.0,a\n");
    const Dataset d = load_dataset(path);
    CHECK(d.missing_count() == 1);
    CHECK(std::isnan(d.at(1, 0)));
}

TEST_CASE("load_dataset rejects bad input") {
    CHECK_THROWS_AS(load_dataset("/nonexistent/file.csv"), DataError);
    const auto one_row = write_temp_csv("fs2d_onerow.csv", "1.0,a\n");
    CHECK_THROWS_AS(load_dataset(one_row), DataError);
    const auto junk = write_temp_csv("fs2d_junk.csv", "1,2,a\nx,4,b\n");
    CHECK_THROWS_AS(load_dataset(junk), DataError);
}

TEST_CASE("impute_missing picks the nearest complete donor") {
    // A=(1,1), B=(1,?), C=(9,9): B's donor is A over the co-observed feature.
    const auto path = write_temp_csv("fs2d_impute.csv",
                                     "1,1,a\n"
                                     "1,?,b\n"
                                     "9,9,a\n");
    const Dataset d = load_dataset(path);
    const Dataset fixed = impute_missing(d);
    CHECK(fixed.missing_count() == 0);
    CHECK(fixed.at(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("impute_missing identity and idempotence") {
    const Dataset d = Dataset::from_rows({{1, 2}, {3, 4}}, {0, 1});
    const Dataset once = impute_missing(d);
    CHECK(once.at(0, 0) == d.at(0, 0));
    const auto path = write_temp_csv("fs2d_impute2.csv",
                                     "1,1,a\n"
                                     "1,?,b\n"
                                     "9,9,a\n");
    const Dataset fixed = impute_missing(load_dataset(path));
    const Dataset twice = impute_missing(fixed);
    for (std::size_t i = 0; i < fixed.n_instances(); ++i)
        for (std::size_t j = 0; j < fixed.n_features(); ++j)
            CHECK(fixed.at(i, j) == twice.at(i, j));
}

TEST_CASE("impute_missing equidistant donors resolve to the lowest index") {
    // Donors at rows 0 and 2 are symmetric around the recipient's observed value.
    const auto path = write_temp_csv("fs2d_impute_tie.csv",
                                     "2,10,a\n"
                                     "3,?,b\n"
                                     "4,20,a\n");
    const Dataset fixed = impute_missing(load_dataset(path));
    CHECK(fixed.at(1, 1) == doctest::Approx(10.0));
}

TEST_CASE("impute_missing error paths") {
    const auto all_missing = write_temp_csv("fs2d_impute_bad1.csv",
                                            "?,?,a\n"
                                            "1,2,b\n"
                                            "3,4,a\n");
    CHECK_THROWS_AS(impute_missing(load_dataset(all_missing)), DataError);
    const auto no_donor = write_temp_csv("fs2d_impute_bad2.csv",
                                         "?,2,a\n"
                                         "1,?,b\n");
    CHECK_THROWS_AS(impute_missing(load_dataset(no_donor)), DataError);
}

TEST_CASE("stratified_folds balances every class across folds") {
    SUBCASE("exact divisibility: 2 classes of 10, k=10") {
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int i = 0; i < 20; ++i) {
            rows.push_back({static_cast<double>(i)});
            labels.push_back(i % 2);
        }
        Rng rng(7);
        const auto fa = stratified_folds(Dataset::from_rows(rows, labels), 10, rng);
        std::map<std::pair<int, int>, int> count;  // (fold, class) -> n
        for (std::size_t i = 0; i < labels.size(); ++i)
            ++count[{fa.fold_of[i], labels[i]}];
        for (int f = 0; f < 10; ++f)
            for (int c = 0; c < 2; ++c) CHECK(count[{f, c}] == 1);
    }
    SUBCASE("uneven classes: per-class per-fold counts differ by at most 1") {
        // Shape mirrors the Zoo corpus: 101 instances, 7 classes, k=10.
        std::vector<int> class_sizes{41, 20, 5, 13, 4, 8, 10};
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        int c = 0;
        for (int size : class_sizes) {
            for (int i = 0; i < size; ++i) {
                rows.push_back({static_cast<double>(rows.size())});
                labels.push_back(c);
            }
            ++c;
        }
        Rng rng(3);
        const auto fa = stratified_folds(Dataset::from_rows(rows, labels), 10, rng);
        for (int cls = 0; cls < 7; ++cls) {
            int lo = 1 << 20, hi = 0, total = 0;
            for (int f = 0; f < 10; ++f) {
                int n = 0;
                for (std::size_t i = 0; i < labels.size(); ++i)
                    if (labels[i] == cls && fa.fold_of[i] == f) ++n;
                lo = std::min(lo, n);
                hi = std::max(hi, n);
                total += n;
            }
            CHECK(hi - lo <= 1);
            CHECK(total == class_sizes[static_cast<std::size_t>(cls)]);
        }
        // Every instance assigned exactly one fold in [0, k).
        for (int f : fa.fold_of) {
            CHECK(f >= 0);
            CHECK(f < 10);
        }
    }
}

TEST_CASE("stratified_folds is deterministic per seed and validates k") {
    const Dataset d = Dataset::from_rows({{1}, {2}, {3}, {4}}, {0, 1, 0, 1});
    Rng a(11), b(11), c(12);
    CHECK(stratified_folds(d, 2, a).fold_of == stratified_folds(d, 2, b).fold_of);
    Rng r(1);
    CHECK_THROWS_AS(stratified_folds(d, 1, r), std::invalid_argument);
    CHECK_THROWS_AS(stratified_folds(d, 5, r), std::invalid_argument);
}

TEST_CASE("project keeps masked columns in order") {
    const Dataset d = Dataset::from_rows({{1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}}, {0, 1});
    SUBCASE("all ones is the identity") {
        const Dataset p = project(d, ones_mask(5));
        CHECK(p.n_features() == 5);
        for (std::size_t j = 0; j < 5; ++j) CHECK(p.at(1, j) == d.at(1, j));
    }
    SUBCASE("alternating mask selects columns 1,3,5") {
        const Dataset p = project(d, mask_from_string("10101"));
        CHECK(p.n_features() == 3);
        CHECK(p.at(0, 0) == 1);
        CHECK(p.at(0, 1) == 3);
        CHECK(p.at(0, 2) == 5);
        CHECK(p.labels() == d.labels());
    }
    SUBCASE("single column") {
        const Dataset p = project(d, mask_from_string("01000"));
        CHECK(p.n_features() == 1);
        CHECK(p.at(1, 0) == 7);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(project(d, mask_from_string("00000")), std::invalid_argument);
        CHECK_THROWS_AS(project(d, mask_from_string("101")), std::invalid_argument);
    }
}

TEST_CASE("projection composes through re-indexed masks") {
    const Dataset d = Dataset::from_rows({{1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}}, {0, 1});
    const Mask m1 = mask_from_string("11011");
    const Dataset p1 = project(d, m1);
    const Mask m2_reindexed = mask_from_string("1010");      // over p1's 4 columns
    const Dataset p2 = project(p1, m2_reindexed);
    const Dataset direct = project(d, mask_from_string("10010"));  // intersection
    REQUIRE(p2.n_features() == direct.n_features());
    for (std::size_t i = 0; i < d.n_instances(); ++i)
        for (std::size_t j = 0; j < p2.n_features(); ++j)
            CHECK(p2.at(i, j) == direct.at(i, j));
}

TEST_CASE("min_max_normalize maps features to [0,1]") {
    const Dataset d = Dataset::from_rows({{0, 5, 7}, {10, 5, 14}}, {0, 1});
    const Dataset norm = min_max_normalize(d);
    CHECK(norm.at(0, 0) == doctest::Approx(0.0));
    CHECK(norm.at(1, 0) == doctest::Approx(1.0));
    CHECK(norm.at(0, 1) == doctest::Approx(0.0));  // constant column
    CHECK(norm.at(1, 1) == doctest::Approx(0.0));
    CHECK(norm.at(1, 2) == doctest::Approx(1.0));
}
