#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fs2d/harness.hpp"

namespace {

using namespace fs2d;

struct CommonOpts {
    std::string data;
    std::string label_col = "last";
    std::string missing = "?";
    std::string classifier = "nb";
    int knn_k = 5;
    int folds = 10;
    std::uint64_t seed = 1;
    bool normalize = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--data", o.data, "dataset CSV path")->required();
    cmd->add_option("--label-col", o.label_col, "label column: name, 0-based index, or 'last'");
    cmd->add_option("--missing", o.missing, "missing-value token (default '?')");
    cmd->add_option("--classifier", o.classifier, "induction algorithm")
        ->check(CLI::IsMember({"nb", "knn"}));
    cmd->add_option("--knn-k", o.knn_k, "k-NN neighbor count");
    cmd->add_option("--folds", o.folds, "cross-validation folds");
    cmd->add_option("--seed", o.seed, "fold seed");
    cmd->add_flag("--normalize", o.normalize, "min-max scale features to [0,1]");
}

Dataset load_prepared(const CommonOpts& o) {
    LoadOptions opts;
    opts.label_column = o.label_col;
    opts.missing_token = o.missing;
    Dataset d = load_dataset(o.data, opts);
    if (d.missing_count() > 0) d = impute_missing(d);
    if (o.normalize) d = min_max_normalize(d);
    return d;
}

ClassifierKind to_classifier(const CommonOpts& o) {
    return o.classifier == "nb" ? ClassifierKind::naive_bayes() : ClassifierKind::knn(o.knn_k);
}

int cmd_eval(const CommonOpts& o, const std::string& mask_str) {
    const Dataset d = load_prepared(o);
    const Mask mask = mask_from_string(mask_str);
    if (mask.size() != d.n_features())
        throw std::invalid_argument("mask length " + std::to_string(mask.size()) +
                                    " does not match feature count " +
                                    std::to_string(d.n_features()));
    Rng rng(o.seed);
    CriterionContext ctx(d, stratified_folds(d, o.folds, rng), to_classifier(o));
    const double j = ctx.evaluate_subset(mask);
    std::printf("J(mask) = %.6f  cardinality = %zu/%zu  classifier = %s  folds = %d  seed = %llu\n",
                j, cardinality(mask), d.n_features(), o.classifier.c_str(), o.folds,
                static_cast<unsigned long long>(o.seed));
    return 0;
}

int cmd_baseline(const CommonOpts& o) {
    const Dataset d = load_prepared(o);
    Rng rng(o.seed);
    CriterionContext ctx(d, stratified_folds(d, o.folds, rng), to_classifier(o));
    const double j = ctx.evaluate_full_set();
    std::printf("J(U) = %.6f  n = %zu  N = %zu  classes = %zu  classifier = %s  folds = %d  seed = %llu\n",
                j, d.n_features(), d.n_instances(), d.n_classes(), o.classifier.c_str(), o.folds,
                static_cast<unsigned long long>(o.seed));
    return 0;
}

void print_report(const Report& report) {
    for (const auto& group : report.groups) {
        std::printf("dataset %s | classifier %s | n=%zu\n", group.dataset.c_str(),
                    group.classifier.c_str(), group.n_features);
        for (const auto& res : group.algos) {
            char pi[32];
            if (std::isnan(res.pi_percent))
                std::snprintf(pi, sizeof(pi), "n/a");
            else
                std::snprintf(pi, sizeof(pi), "%.1f%%", res.pi_percent);
            std::printf(
                "  %-10s mean=%.4f sd=%.3e J(U)=%.4f PI=%s rank=%d xi_avg=%.2f Xi=%.1f%% "
                "T1=%.3fs T2=%.3fs T=%.3fs\n",
                res.algorithm.c_str(), res.mean_fitness, res.sd_fitness, res.mean_baseline, pi,
                res.rank_pi, res.xi_avg, res.xi_reduction_percent, res.mean_t1, res.mean_t2,
                res.mean_t);
        }
        for (const auto& cell : group.ttests)
            std::printf("  t-test %s vs %s: %s\n", cell.algo_a.c_str(), cell.algo_b.c_str(),
                        verdict_name(cell.result.verdict));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feature-subset search with 2D-learning particle swarms"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a full experiment");
    std::string spec_file;
    std::vector<std::string> data_paths, algo_names, classifier_names;
    ExperimentSpec spec;
    int knn_k = 5;
    SwarmParams overrides;
    int radius = 1;
    run->add_option("--spec", spec_file, "experiment spec file (key = value format)");
    run->add_option("--data", data_paths, "dataset CSV path(s)");
    run->add_option("--label-col", spec.label_column, "label column");
    run->add_option("--missing", spec.missing_token, "missing-value token");
    auto* clf_opt = run->add_option("--classifier", classifier_names, "nb and/or knn")
                        ->check(CLI::IsMember({"nb", "knn"}));
    run->add_option("--knn-k", knn_k, "k-NN neighbor count");
    auto* algo_opt = run->add_option("--algo", algo_names,
                                     "algorithms: 2d-upso 2d-gpso 2d-lpso bpso chbpso");
    run->add_option("--runs", spec.runs, "independent runs per combination");
    run->add_option("--budget", spec.fe_budget, "function-evaluation budget per run");
    run->add_option("--seed", spec.master_seed, "master seed; run i uses seed+i");
    run->add_option("--folds", spec.cv_folds, "cross-validation folds");
    auto* swarm_opt = run->add_option("--swarm-size", overrides.swarm_size, "particles");
    auto* rg_opt = run->add_option("--rg", overrides.refresh_gap, "refresh gap");
    auto* us_opt = run->add_option("--u-start", overrides.u_start, "unification factor start");
    auto* ue_opt = run->add_option("--u-end", overrides.u_end, "unification factor end");
    auto* om_opt = run->add_option("--omega", overrides.omega0, "inertia weight");
    auto* c1_opt = run->add_option("--c1", overrides.c1, "cognitive acceleration");
    auto* c2_opt = run->add_option("--c2", overrides.c2, "social acceleration");
    auto* rad_opt = run->add_option("--radius", radius, "ring neighborhood radius");
    run->add_flag("--normalize", spec.normalize, "min-max scale features");
    run->add_flag("--memoize", spec.memoize, "cache subset evaluations");
    run->add_option("--out", spec.out_dir, "output directory for reports");
    run->add_option("--workers", spec.workers, "concurrent runs");

    // eval / baseline
    CommonOpts eval_opts, base_opts;
    std::string mask_str;
    auto* eval_cmd = app.add_subcommand("eval", "score one explicit feature mask");
    add_common(eval_cmd, eval_opts);
    eval_cmd->add_option("--mask", mask_str, "bit string, one char per feature")->required();
    auto* base_cmd = app.add_subcommand("baseline", "score the all-features baseline J(U)");
    add_common(base_cmd, base_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval_cmd->parsed()) return cmd_eval(eval_opts, mask_str);
        if (base_cmd->parsed()) return cmd_baseline(base_opts);

        if (!spec_file.empty()) {
            ExperimentSpec from_file = parse_spec_file(spec_file);
            // Explicit flags override file values.
            if (!data_paths.empty()) from_file.data_paths = data_paths;
            if (run->count("--label-col")) from_file.label_column = spec.label_column;
            if (run->count("--missing")) from_file.missing_token = spec.missing_token;
            if (run->count("--runs")) from_file.runs = spec.runs;
            if (run->count("--budget")) from_file.fe_budget = spec.fe_budget;
            if (run->count("--seed")) from_file.master_seed = spec.master_seed;
            if (run->count("--folds")) from_file.cv_folds = spec.cv_folds;
            if (run->count("--normalize")) from_file.normalize = spec.normalize;
            if (run->count("--memoize")) from_file.memoize = spec.memoize;
            if (run->count("--out")) from_file.out_dir = spec.out_dir;
            if (run->count("--workers")) from_file.workers = spec.workers;
            spec = std::move(from_file);
        } else {
            spec.data_paths = data_paths;
        }
        if (clf_opt->count() || spec.classifiers.empty()) {
            spec.classifiers.clear();
            if (classifier_names.empty()) classifier_names = {"nb"};
            for (const auto& name : classifier_names)
                spec.classifiers.push_back(name == "nb" ? ClassifierKind::naive_bayes()
                                                        : ClassifierKind::knn(knn_k));
        }
        if (algo_opt->count() || spec.algorithms.empty()) {
            spec.algorithms.clear();
            if (algo_names.empty()) algo_names = {"2d-upso"};
            for (const auto& name : algo_names) {
                AlgoSpec a = default_algo_spec(name);
                if (swarm_opt->count()) a.params.swarm_size = overrides.swarm_size;
                if (rg_opt->count()) a.params.refresh_gap = overrides.refresh_gap;
                if (us_opt->count()) a.params.u_start = overrides.u_start;
                if (ue_opt->count()) a.params.u_end = overrides.u_end;
                if (om_opt->count()) a.params.omega0 = a.params.omega_f = overrides.omega0;
                if (c1_opt->count()) a.params.c1 = overrides.c1;
                if (c2_opt->count()) a.params.c2 = overrides.c2;
                if (rad_opt->count()) a.topology.radius = radius;
                spec.algorithms.push_back(std::move(a));
            }
        }

        const Report report = run_experiment(spec);
        print_report(report);
        if (!spec.out_dir.empty())
            std::printf("reports written to %s\n", spec.out_dir.c_str());
        return 0;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
