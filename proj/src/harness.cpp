#include "fs2d/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

namespace fs2d {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

double performance_improvement(double j_full, double j_subset) {
    if (!(j_full > 0.0))
        throw std::domain_error("performance_improvement: J(U) must be > 0");
    return (j_full - j_subset) / j_full * 100.0;
}

double cardinality_reduction(std::size_t n_features, double xi_avg) {
    if (n_features < 1)
        throw std::invalid_argument("cardinality_reduction: n_features must be >= 1");
    const double n = static_cast<double>(n_features);
    if (xi_avg < 0.0 || xi_avg > n)
        throw std::invalid_argument("cardinality_reduction: xi_avg outside [0, n]");
    return (n - xi_avg) / n * 100.0;
}

std::vector<int> rank_algorithms(std::span<const double> pi_values) {
    if (pi_values.empty()) throw std::invalid_argument("rank_algorithms: empty input");
    std::vector<int> ranks(pi_values.size());
    for (std::size_t i = 0; i < pi_values.size(); ++i) {
        int strictly_better = 0;
        for (std::size_t j = 0; j < pi_values.size(); ++j) {
            if (j == i) continue;
            const bool i_nan = std::isnan(pi_values[i]);
            const bool j_nan = std::isnan(pi_values[j]);
            if (i_nan && !j_nan)
                ++strictly_better;  // finite beats not-applicable
            else if (!i_nan && !j_nan && pi_values[j] > pi_values[i])
                ++strictly_better;
        }
        ranks[i] = strictly_better + 1;
    }
    return ranks;
}

const char* verdict_name(TestVerdict v) {
    switch (v) {
        case TestVerdict::Better: return "better";
        case TestVerdict::Worse: return "worse";
        case TestVerdict::Equal: return "equal";
        case TestVerdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, double alpha) {
    if (a.size() != b.size()) throw std::invalid_argument("paired_t_test: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("paired_t_test: need at least 2 pairs");

    const std::size_t n = a.size();
    std::vector<double> d(n);
    bool all_zero = true;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a[i] - b[i];
        if (d[i] != 0.0) all_zero = false;
    }
    if (all_zero) return {TestVerdict::Equal, 0.0, 1.0};

    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TTestResult res;
    if (sd == 0.0) {
        // Constant nonzero shift: infinite t, significant by sign.
        res.t = mean < 0.0 ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
        res.p = 0.0;
        res.verdict = mean < 0.0 ? TestVerdict::Better : TestVerdict::Worse;
        return res;
    }
    res.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    res.p = 2.0 * boost::math::cdf(dist, -std::abs(res.t));
    if (res.p < alpha)
        res.verdict = res.t < 0.0 ? TestVerdict::Better : TestVerdict::Worse;
    else
        res.verdict = TestVerdict::Indeterminate;
    return res;
}

AlgoSpec default_algo_spec(const std::string& name) {
    for (const auto& info : algorithm_registry()) {
        if (info.name != name) continue;
        AlgoSpec spec;
        spec.name = name;
        if (name == "bpso" || name == "chbpso" || name == "cbpso")
            spec.params = params_bpso();
        else
            spec.params = params_2d();
        return spec;
    }
    throw std::invalid_argument("unknown algorithm: " + name);
}

ExperimentSpec parse_spec_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path.string());

    ExperimentSpec spec;
    spec.classifiers.clear();
    AlgoSpec* current_algo = nullptr;
    int knn_k = 5;
    std::vector<std::string> classifier_names;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']' || line.substr(1, 5) != "algo ")
                throw std::invalid_argument("spec line " + std::to_string(lineno) +
                                            ": expected [algo <name>]");
            const std::string name = trim(line.substr(6, line.size() - 7));
            spec.algorithms.push_back(default_algo_spec(name));
            current_algo = &spec.algorithms.back();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("spec line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        const std::string value = trim(line.substr(eq + 1));

        auto as_bool = [&](const std::string& v) {
            if (v == "true" || v == "1" || v == "yes") return true;
            if (v == "false" || v == "0" || v == "no") return false;
            throw std::invalid_argument("spec line " + std::to_string(lineno) +
                                        ": bad boolean '" + v + "'");
        };

        if (current_algo) {
            SwarmParams& p = current_algo->params;
            if (key == "swarm") p.swarm_size = std::stoi(value);
            else if (key == "omega" || key == "omega0") p.omega0 = p.omega_f = std::stod(value);
            else if (key == "omega_f") p.omega_f = std::stod(value);
            else if (key == "c1") p.c1 = std::stod(value);
            else if (key == "c2") p.c2 = std::stod(value);
            else if (key == "rg") p.refresh_gap = std::stoi(value);
            else if (key == "u_start") p.u_start = std::stod(value);
            else if (key == "u_end") p.u_end = std::stod(value);
            else if (key == "radius") current_algo->topology.radius = std::stoi(value);
            else if (key == "topology")
                current_algo->topology.kind =
                    value == "global" ? TopologyKind::Global : TopologyKind::Ring;
            else
                throw std::invalid_argument("spec line " + std::to_string(lineno) +
                                            ": unknown algorithm key '" + key + "'");
            continue;
        }

        if (key == "data") {
            for (auto& p : split_list(value)) spec.data_paths.push_back(p);
        } else if (key == "label_col") spec.label_column = value;
        else if (key == "missing") spec.missing_token = value;
        else if (key == "classifier") classifier_names = split_list(value);
        else if (key == "knn_k") knn_k = std::stoi(value);
        else if (key == "runs") spec.runs = std::stoi(value);
        else if (key == "budget") spec.fe_budget = std::stoull(value);
        else if (key == "seed") spec.master_seed = std::stoull(value);
        else if (key == "folds") spec.cv_folds = std::stoi(value);
        else if (key == "normalize") spec.normalize = as_bool(value);
        else if (key == "memoize") spec.memoize = as_bool(value);
        else if (key == "workers") spec.workers = std::stoi(value);
        else if (key == "out") spec.out_dir = value;
        else
            throw std::invalid_argument("spec line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }

    for (const auto& name : classifier_names) {
        if (name == "nb") spec.classifiers.push_back(ClassifierKind::naive_bayes());
        else if (name == "knn") spec.classifiers.push_back(ClassifierKind::knn(knn_k));
        else throw std::invalid_argument("unknown classifier: " + name);
    }
    return spec;
}

void compute_aggregates(AlgoResult& result) {
    const double n = static_cast<double>(result.runs.size());
    double mf = 0.0, mb = 0.0, mx = 0.0, m1 = 0.0, m2 = 0.0, mt = 0.0;
    for (const auto& r : result.runs) {
        mf += r.best_fitness;
        mb += r.baseline;
        mx += static_cast<double>(r.cardinality);
        m1 += r.t1;
        m2 += r.t2;
        mt += r.t;
    }
    result.mean_fitness = mf / n;
    result.mean_baseline = mb / n;
    result.xi_avg = mx / n;
    result.mean_t1 = m1 / n;
    result.mean_t2 = m2 / n;
    result.mean_t = mt / n;

    double ss = 0.0;
    for (const auto& r : result.runs) {
        const double d = r.best_fitness - result.mean_fitness;
        ss += d * d;
    }
    result.sd_fitness = std::sqrt(ss / n);  // population SD

    result.pi_percent = result.mean_baseline > 0.0
                            ? performance_improvement(result.mean_baseline, result.mean_fitness)
                            : kNaN;
    result.xi_reduction_percent = cardinality_reduction(result.n_features, result.xi_avg);
}

namespace {

void validate_spec(const ExperimentSpec& spec) {
    if (spec.data_paths.empty()) throw std::invalid_argument("spec: no datasets");
    if (spec.classifiers.empty()) throw std::invalid_argument("spec: no classifiers");
    if (spec.algorithms.empty()) throw std::invalid_argument("spec: no algorithms");
    if (spec.runs < 1) throw std::invalid_argument("spec: runs must be >= 1");
    if (spec.cv_folds < 2) throw std::invalid_argument("spec: folds must be >= 2");
    if (spec.workers < 1) throw std::invalid_argument("spec: workers must be >= 1");
    for (const auto& a : spec.algorithms) {
        bool known = false;
        for (const auto& info : algorithm_registry()) {
            if (info.name != a.name) continue;
            known = true;
            if (!info.implemented)
                throw std::runtime_error("algorithm '" + a.name +
                                         "' not implemented: external reference (parameters: " +
                                         info.parameters + ")");
        }
        if (!known) throw std::invalid_argument("unknown algorithm: " + a.name);
    }
}

RunResult dispatch(const AlgoSpec& algo, CriterionContext& ctx, std::uint64_t budget,
                   std::uint64_t seed) {
    if (algo.name == "2d-upso") return run_2d_upso(ctx, algo.params, algo.topology, budget, seed);
    if (algo.name == "2d-gpso") return run_2d_gpso(ctx, algo.params, budget, seed);
    if (algo.name == "2d-lpso") return run_2d_lpso(ctx, algo.params, algo.topology, budget, seed);
    if (algo.name == "bpso") return run_bpso(ctx, algo.params, budget, seed);
    if (algo.name == "chbpso") return run_chbpso(ctx, algo.params, budget, seed);
    throw std::invalid_argument("unknown algorithm: " + algo.name);
}

}  // namespace

Report run_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);

    std::vector<Dataset> datasets;
    std::vector<std::string> names;
    for (const auto& path : spec.data_paths) {
        LoadOptions opts;
        opts.label_column = spec.label_column;
        opts.missing_token = spec.missing_token;
        Dataset d = load_dataset(path, opts);
        if (d.missing_count() > 0) d = impute_missing(d);
        if (spec.normalize) d = min_max_normalize(d);
        names.push_back(std::filesystem::path(path).stem().string());
        datasets.push_back(std::move(d));
    }

    Report report;
    report.spec = spec;
    struct JobRef {
        std::size_t group, algo;
        int run;
    };
    std::vector<JobRef> jobs;
    for (std::size_t di = 0; di < datasets.size(); ++di) {
        for (const auto& clf : spec.classifiers) {
            GroupReport group;
            group.dataset = names[di];
            group.classifier = clf.name();
            group.n_features = datasets[di].n_features();
            for (const auto& algo : spec.algorithms) {
                AlgoResult res;
                res.dataset = group.dataset;
                res.classifier = group.classifier;
                res.algorithm = algo.name;
                res.n_features = group.n_features;
                res.runs.resize(static_cast<std::size_t>(spec.runs));
                group.algos.push_back(std::move(res));
            }
            report.groups.push_back(std::move(group));
        }
    }
    for (std::size_t g = 0; g < report.groups.size(); ++g)
        for (std::size_t a = 0; a < report.groups[g].algos.size(); ++a)
            for (int r = 0; r < spec.runs; ++r) jobs.push_back({g, a, r});

    const std::size_t n_classifiers = spec.classifiers.size();
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const JobRef job = jobs[j];
            GroupReport& group = report.groups[job.group];
            AlgoResult& res = group.algos[job.algo];
            try {
                const Dataset& data = datasets[job.group / n_classifiers];
                const ClassifierKind clf = spec.classifiers[job.group % n_classifiers];
                const std::uint64_t seed = spec.master_seed + static_cast<std::uint64_t>(job.run);
                Rng fold_rng(seed);
                FoldAssignment folds = stratified_folds(data, spec.cv_folds, fold_rng);
                CriterionContext ctx(data, std::move(folds), clf, spec.memoize);
                const double baseline = ctx.evaluate_full_set();
                const RunResult rr =
                    dispatch(spec.algorithms[job.algo], ctx, spec.fe_budget, seed);
                RunRecord rec;
                rec.seed = seed;
                rec.mask = mask_to_string(rr.best_mask);
                rec.best_fitness = rr.best_fitness;
                rec.cardinality = cardinality(rr.best_mask);
                rec.baseline = baseline;
                rec.fe_used = rr.fe_used;
                rec.t1 = rr.t1;
                rec.t2 = rr.t2;
                rec.t = rr.t;
                rec.fitness_trace = rr.fitness_trace;
                rec.cardinality_trace = rr.cardinality_trace;
                res.runs[static_cast<std::size_t>(job.run)] = std::move(rec);
            } catch (const std::exception& e) {
                errors[j] = "(" + group.dataset + ", " + group.classifier + ", " +
                            res.algorithm + ", run " + std::to_string(job.run) + "): " + e.what();
            }
        }
    };

    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(spec.workers), jobs.size());
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (const auto& err : errors)
        if (!err.empty()) throw std::runtime_error(err);

    for (auto& group : report.groups) {
        std::vector<double> pis, xis;
        for (auto& res : group.algos) {
            compute_aggregates(res);
            pis.push_back(res.pi_percent);
            xis.push_back(res.xi_reduction_percent);
        }
        const auto rank_p = rank_algorithms(pis);
        const auto rank_x = rank_algorithms(xis);
        for (std::size_t a = 0; a < group.algos.size(); ++a) {
            group.algos[a].rank_pi = rank_p[a];
            group.algos[a].rank_xi = rank_x[a];
        }
        if (spec.runs >= 2) {
            for (std::size_t i = 0; i < group.algos.size(); ++i) {
                for (std::size_t j = i + 1; j < group.algos.size(); ++j) {
                    std::vector<double> a, b;
                    for (const auto& r : group.algos[i].runs) a.push_back(r.best_fitness);
                    for (const auto& r : group.algos[j].runs) b.push_back(r.best_fitness);
                    group.ttests.push_back({group.algos[i].algorithm,
                                            group.algos[j].algorithm, paired_t_test(a, b)});
                }
            }
        }
    }

    if (!spec.out_dir.empty()) emit_report(report, spec.out_dir);
    return report;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson to_json(const AlgoResult& res) {
    ojson j;
    j["dataset"] = res.dataset;
    j["classifier"] = res.classifier;
    j["algorithm"] = res.algorithm;
    j["n_features"] = res.n_features;
    ojson agg;
    agg["mean_fitness"] = res.mean_fitness;
    agg["sd_fitness"] = res.sd_fitness;
    agg["mean_baseline"] = res.mean_baseline;
    agg["pi_percent"] = res.pi_percent;  // NaN serializes as null
    agg["xi_avg"] = res.xi_avg;
    agg["xi_reduction_percent"] = res.xi_reduction_percent;
    agg["mean_t1"] = res.mean_t1;
    agg["mean_t2"] = res.mean_t2;
    agg["mean_t"] = res.mean_t;
    agg["rank_pi"] = res.rank_pi;
    agg["rank_xi"] = res.rank_xi;
    j["aggregates"] = std::move(agg);
    ojson runs = ojson::array();
    for (const auto& r : res.runs) {
        ojson jr;
        jr["seed"] = r.seed;
        jr["mask"] = r.mask;
        jr["best_fitness"] = r.best_fitness;
        jr["cardinality"] = r.cardinality;
        jr["baseline"] = r.baseline;
        jr["fe_used"] = r.fe_used;
        jr["t1"] = r.t1;
        jr["t2"] = r.t2;
        jr["t"] = r.t;
        jr["fitness_trace"] = r.fitness_trace;
        jr["cardinality_trace"] = r.cardinality_trace;
        runs.push_back(std::move(jr));
    }
    j["runs"] = std::move(runs);
    return j;
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

}  // namespace

void emit_report(const Report& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    for (const auto& group : report.groups) {
        for (const auto& res : group.algos) {
            const auto file =
                dir / (res.dataset + "_" + res.classifier + "_" + res.algorithm + ".json");
            std::ofstream out(file);
            if (!out) throw std::runtime_error("cannot write " + file.string());
            out << to_json(res).dump(2) << "\n";
        }
    }

    std::ofstream out(dir / "summary.txt");
    if (!out) throw std::runtime_error("cannot write summary.txt");
    out << "# Feature-selection experiment summary\n";
    out << "# Mean/SD: best CV error over runs (SD population formula, /N).\n";
    out << "# PI(%): improvement of mean best error over the mean all-features baseline J(U).\n";
    out << "# Xi(%): mean subset-size reduction relative to all n features.\n";
    out << "# T1/T2/T: algorithm / subset-evaluation / total seconds, averaged over runs.\n";
    for (const auto& group : report.groups) {
        out << "\n== dataset " << group.dataset << " | classifier " << group.classifier
            << " | n=" << group.n_features << " | runs " << report.spec.runs << " | budget "
            << report.spec.fe_budget << " | seed " << report.spec.master_seed << " ==\n";
        char head[160];
        std::snprintf(head, sizeof(head), "%-10s %-9s %-10s %-8s %-4s %-8s %-7s %-4s %-8s %-9s %-9s\n",
                      "algorithm", "Mean", "SD", "PI(%)", "Rk", "xi_avg", "Xi(%)", "Rk", "T1(s)",
                      "T2(s)", "T(s)");
        out << head;
        for (const auto& res : group.algos) {
            char row[256];
            const std::string pi =
                std::isnan(res.pi_percent) ? "n/a" : fmt("%.1f", res.pi_percent);
            std::snprintf(row, sizeof(row),
                          "%-10s %-9s %-10s %-8s %-4d %-8s %-7s %-4d %-8s %-9s %-9s\n",
                          res.algorithm.c_str(), fmt("%.4f", res.mean_fitness).c_str(),
                          fmt("%.3e", res.sd_fitness).c_str(), pi.c_str(), res.rank_pi,
                          fmt("%.2f", res.xi_avg).c_str(),
                          fmt("%.1f", res.xi_reduction_percent).c_str(), res.rank_xi,
                          fmt("%.3f", res.mean_t1).c_str(), fmt("%.3f", res.mean_t2).c_str(),
                          fmt("%.3f", res.mean_t).c_str());
            out << row;
        }
        out << "baseline J(U) mean per algorithm:";
        for (const auto& res : group.algos)
            out << " " << res.algorithm << "=" << fmt("%.4f", res.mean_baseline);
        out << "\n";
        for (const auto& cell : group.ttests)
            out << "t-test " << cell.algo_a << " vs " << cell.algo_b << ": "
                << verdict_name(cell.result.verdict) << " (t=" << fmt("%.4f", cell.result.t)
                << ", p=" << fmt("%.6f", cell.result.p) << ")\n";
    }
}

AlgoResult load_algo_result(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    ojson j;
    in >> j;

    AlgoResult res;
    res.dataset = j.at("dataset").get<std::string>();
    res.classifier = j.at("classifier").get<std::string>();
    res.algorithm = j.at("algorithm").get<std::string>();
    res.n_features = j.at("n_features").get<std::size_t>();
    const auto& agg = j.at("aggregates");
    auto num = [](const ojson& v) { return v.is_null() ? kNaN : v.get<double>(); };
    res.mean_fitness = num(agg.at("mean_fitness"));
    res.sd_fitness = num(agg.at("sd_fitness"));
    res.mean_baseline = num(agg.at("mean_baseline"));
    res.pi_percent = num(agg.at("pi_percent"));
    res.xi_avg = num(agg.at("xi_avg"));
    res.xi_reduction_percent = num(agg.at("xi_reduction_percent"));
    res.mean_t1 = num(agg.at("mean_t1"));
    res.mean_t2 = num(agg.at("mean_t2"));
    res.mean_t = num(agg.at("mean_t"));
    res.rank_pi = agg.at("rank_pi").get<int>();
    res.rank_xi = agg.at("rank_xi").get<int>();
    for (const auto& jr : j.at("runs")) {
        RunRecord r;
        r.seed = jr.at("seed").get<std::uint64_t>();
        r.mask = jr.at("mask").get<std::string>();
        r.best_fitness = jr.at("best_fitness").get<double>();
        r.cardinality = jr.at("cardinality").get<std::size_t>();
        r.baseline = jr.at("baseline").get<double>();
        r.fe_used = jr.at("fe_used").get<std::uint64_t>();
        r.t1 = jr.at("t1").get<double>();
        r.t2 = jr.at("t2").get<double>();
        r.t = jr.at("t").get<double>();
        r.fitness_trace = jr.at("fitness_trace").get<std::vector<double>>();
        r.cardinality_trace = jr.at("cardinality_trace").get<std::vector<std::size_t>>();
        res.runs.push_back(std::move(r));
    }
    return res;
}

}  // namespace fs2d
