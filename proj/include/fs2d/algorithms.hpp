#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fs2d/criterion.hpp"
#include "fs2d/learning2d.hpp"

namespace fs2d {

enum class TopologyKind { Global, Ring };

struct Topology {
    TopologyKind kind = TopologyKind::Ring;
    int radius = 1;  // ring only: neighborhood {i-radius .. i+radius} mod ps
};

/// Swarm bookkeeping exposed to observers and white-box tests.
struct SwarmState {
    std::vector<Mask> positions;
    std::vector<Velocity2D> velocities;
    std::vector<double> fitness;       // latest evaluation (f_t)
    std::vector<double> prev_fitness;  // evaluation before that (f_{t-1})
    std::vector<Mask> pbest;
    std::vector<double> pbestval;
    Mask gbest;
    double gbestval = 0.0;
    std::vector<int> stagnation;          // iterations since last pbestval improvement
    std::vector<std::uint8_t> refreshed;  // velocity restarted this iteration
    std::uint64_t iteration = 0;          // 0 = initialization generation
};

/// Called after the initialization generation and after every iteration.
using SwarmObserver = std::function<void(const SwarmState&)>;

struct RunResult {
    Mask best_mask;
    double best_fitness = 0.0;
    std::vector<double> fitness_trace;            // gbestval per generation
    std::vector<std::size_t> cardinality_trace;   // cardinality of gbest per generation
    std::uint64_t fe_used = 0;
    double t1 = 0.0;  // algorithm time = t - t2
    double t2 = 0.0;  // time inside subset evaluation
    double t = 0.0;   // total wall time
    std::uint64_t seed = 0;
};

/// pbest of the best particle (minimal pbestval, ties to the lowest index)
/// in i's neighborhood, including i itself.
const Mask& nbest_of(const SwarmState& state, const Topology& topo, std::size_t i);

/// pbest/gbest replacement rule: strictly lower fitness wins; equal fitness
/// wins only with strictly smaller cardinality; otherwise the incumbent stays.
bool improves_best(double f_new, std::size_t card_new, double f_old, std::size_t card_old);

/// 2D-learning global PSO: velocity update learns socially from gbest.
/// Runs budget/ps generations in total, counting the initialization
/// generation, so fe_used = ps * (budget/ps).
RunResult run_2d_gpso(CriterionContext& ctx, const SwarmParams& p, std::uint64_t budget,
                      std::uint64_t seed, const SwarmObserver& observer = {});

/// 2D-learning local PSO: social exemplar is nbest under a ring topology.
RunResult run_2d_lpso(CriterionContext& ctx, const SwarmParams& p, Topology topo,
                      std::uint64_t budget, std::uint64_t seed,
                      const SwarmObserver& observer = {});

/// 2D-learning unified PSO: blends the gbest- and nbest-driven updates with
/// unification factor u(t) rising linearly from u_start to u_end over
/// budget/ps iterations.
RunResult run_2d_upso(CriterionContext& ctx, const SwarmParams& p, Topology topo,
                      std::uint64_t budget, std::uint64_t seed,
                      const SwarmObserver& observer = {});

/// Kennedy-Eberhart binary PSO baseline: scalar per-bit velocities clamped
/// to [-v_clamp, v_clamp], sigmoid sampling of bits, all-zero positions
/// resampled by forcing one random bit.
RunResult run_bpso(CriterionContext& ctx, const SwarmParams& p, std::uint64_t budget,
                   std::uint64_t seed);

/// BPSO with logistic-map inertia (w0 = 0.48).
RunResult run_chbpso(CriterionContext& ctx, const SwarmParams& p, std::uint64_t budget,
                     std::uint64_t seed);

inline double bpso_sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }
inline double logistic_map_step(double w) { return 4.0 * w * (1.0 - w); }

inline SwarmParams params_2d() { return SwarmParams{}; }
inline SwarmParams params_bpso() {
    SwarmParams p;
    p.omega0 = p.omega_f = 1.0;
    p.c1 = p.c2 = 2.0;
    return p;
}

/// Known algorithm names; the unimplemented ones are config stubs that keep
/// their reference parameter settings but refuse to run.
struct AlgorithmInfo {
    std::string name;
    bool implemented = false;
    std::string parameters;
};
const std::vector<AlgorithmInfo>& algorithm_registry();

/// Dispatch by registry name; stub entries throw std::runtime_error.
RunResult run_by_name(const std::string& name, CriterionContext& ctx, const SwarmParams& p,
                      std::uint64_t budget, std::uint64_t seed);

}  // namespace fs2d
