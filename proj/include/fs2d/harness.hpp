#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fs2d/algorithms.hpp"

namespace fs2d {

/// PI(%) = (J(U) - J(X)) / J(U) * 100; negative when the subset is worse
/// than the full feature set.
double performance_improvement(double j_full, double j_subset);

/// Xi(%) = (n - xi_avg) / n * 100.
double cardinality_reduction(std::size_t n_features, double xi_avg);

/// Competition ranking by descending PI: rank 1 = highest, equal PI shares a
/// rank, and the next distinct value takes (number strictly better) + 1.
/// NaN entries (not-applicable PI) rank after every finite value.
std::vector<int> rank_algorithms(std::span<const double> pi_values);

enum class TestVerdict { Better, Worse, Equal, Indeterminate };
const char* verdict_name(TestVerdict v);

struct TTestResult {
    TestVerdict verdict = TestVerdict::Indeterminate;
    double t = 0.0;
    double p = 1.0;
};

/// Classical paired t-test on a - b at significance alpha. "Better" means
/// a's values are significantly lower (these are error rates). All-zero
/// differences give Equal; zero-variance nonzero differences are significant
/// by sign.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b,
                          double alpha = 0.05);

struct AlgoSpec {
    std::string name;
    SwarmParams params;
    Topology topology{TopologyKind::Ring, 1};
};

/// Resolve an algorithm name to its reference default parameters.
AlgoSpec default_algo_spec(const std::string& name);

struct ExperimentSpec {
    std::vector<std::string> data_paths;
    std::string label_column = "last";
    std::string missing_token = "?";
    std::vector<ClassifierKind> classifiers;
    std::vector<AlgoSpec> algorithms;
    int runs = 40;
    std::uint64_t fe_budget = 6000;
    std::uint64_t master_seed = 1;
    int cv_folds = 10;
    bool normalize = false;
    bool memoize = false;
    int workers = 1;
    std::string out_dir;  // empty: no files written
};

/// Key-value experiment file with optional [algo <name>] override blocks;
/// schema documented in the README.
ExperimentSpec parse_spec_file(const std::filesystem::path& path);

struct RunRecord {
    std::uint64_t seed = 0;
    std::string mask;
    double best_fitness = 0.0;
    std::size_t cardinality = 0;
    double baseline = 0.0;  // J(U) on this run's folds
    std::uint64_t fe_used = 0;
    double t1 = 0.0, t2 = 0.0, t = 0.0;
    std::vector<double> fitness_trace;
    std::vector<std::size_t> cardinality_trace;
};

struct AlgoResult {
    std::string dataset;
    std::string classifier;
    std::string algorithm;
    std::size_t n_features = 0;
    std::vector<RunRecord> runs;
    double mean_fitness = 0.0;
    double sd_fitness = 0.0;  // population formula
    double mean_baseline = 0.0;
    double pi_percent = 0.0;  // NaN when mean_baseline == 0
    double xi_avg = 0.0;
    double xi_reduction_percent = 0.0;
    double mean_t1 = 0.0, mean_t2 = 0.0, mean_t = 0.0;
    int rank_pi = 0;
    int rank_xi = 0;
};

struct VerdictCell {
    std::string algo_a, algo_b;
    TTestResult result;
};

struct GroupReport {  // one (dataset, classifier) block
    std::string dataset;
    std::string classifier;
    std::size_t n_features = 0;
    std::vector<AlgoResult> algos;
    std::vector<VerdictCell> ttests;  // every unordered pair, first vs second
};

struct Report {
    ExperimentSpec spec;
    std::vector<GroupReport> groups;
};

/// Recompute an AlgoResult's aggregate fields from its raw runs.
void compute_aggregates(AlgoResult& result);

/// Execute the full protocol: for every (dataset, classifier, algorithm),
/// `runs` independent runs with per-run seed = master_seed + run index;
/// each run draws fresh stratified folds from its seed, records the J(U)
/// baseline on those folds, and times the search (T, T2, T1 = T - T2).
/// Runs execute concurrently up to `workers`; assembly is deterministic.
Report run_experiment(const ExperimentSpec& spec);

/// Write one JSON file of raw runs + aggregates per (dataset, classifier,
/// algorithm) and a human-readable summary table. Deterministic bytes for a
/// given Report.
void emit_report(const Report& report, const std::filesystem::path& dir);

/// Parse one emitted raw-results JSON file back into an AlgoResult.
AlgoResult load_algo_result(const std::filesystem::path& file);

}  // namespace fs2d
