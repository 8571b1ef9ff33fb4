#include "fs2d/algorithms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fs2d {

namespace {

using Clock = std::chrono::steady_clock;

void validate_common(const SwarmParams& p, std::uint64_t budget) {
    if (p.swarm_size < 2) throw std::invalid_argument("swarm_size must be >= 2");
    if (p.c1 < 0.0 || p.c2 < 0.0) throw std::invalid_argument("c1/c2 must be >= 0");
    if (p.refresh_gap < 1) throw std::invalid_argument("refresh_gap must be >= 1");
    if (budget < static_cast<std::uint64_t>(p.swarm_size))
        throw std::invalid_argument("budget smaller than one generation");
}

void validate_ring(const Topology& topo, int ps) {
    if (topo.kind != TopologyKind::Ring) return;
    if (topo.radius < 1) throw std::invalid_argument("ring radius must be >= 1");
    if (2 * topo.radius + 1 >= ps)
        throw std::invalid_argument("ring neighborhood covers the whole swarm");
}

double resolve_omega(const SwarmParams& p, std::uint64_t t, std::uint64_t t_max) {
    if (p.omega0 == p.omega_f) return p.omega0;
    return p.omega0 - (p.omega0 - p.omega_f) * static_cast<double>(t) / static_cast<double>(t_max);
}

struct Timing {
    std::uint64_t fe_start;
    double t2_start;
    Clock::time_point wall_start;
};

Timing begin_timing(const CriterionContext& ctx) {
    return {ctx.fe_count(), ctx.eval_seconds(), Clock::now()};
}

void finish(RunResult& r, const CriterionContext& ctx, const Timing& tm, std::uint64_t seed) {
    r.fe_used = ctx.fe_count() - tm.fe_start;
    r.t = std::chrono::duration<double>(Clock::now() - tm.wall_start).count();
    r.t2 = ctx.eval_seconds() - tm.t2_start;
    r.t1 = r.t - r.t2;
    r.seed = seed;
}

enum class SocialMode { Global, Local, Unified };

RunResult run_2d_engine(CriterionContext& ctx, const SwarmParams& p, Topology topo,
                        SocialMode mode, std::uint64_t budget, std::uint64_t seed,
                        const SwarmObserver& observer) {
    validate_common(p, budget);
    if (mode != SocialMode::Global) {
        if (mode == SocialMode::Local && topo.kind != TopologyKind::Ring)
            throw std::invalid_argument("2d-lpso requires a ring topology");
        validate_ring(topo, p.swarm_size);
    }

    const std::size_t ps = static_cast<std::size_t>(p.swarm_size);
    const std::size_t n = ctx.dataset().n_features();
    const std::uint64_t generations = budget / ps;  // initialization included

    const Timing tm = begin_timing(ctx);
    Rng rng(seed);

    SwarmState s;
    s.positions.reserve(ps);
    for (std::size_t i = 0; i < ps; ++i) s.positions.push_back(random_mask(n, rng));
    s.velocities.reserve(ps);
    for (std::size_t i = 0; i < ps; ++i) s.velocities.push_back(random_velocity(n, rng));
    s.fitness.resize(ps);
    for (std::size_t i = 0; i < ps; ++i) s.fitness[i] = ctx.evaluate_subset(s.positions[i]);
    s.prev_fitness = s.fitness;
    s.pbest = s.positions;
    s.pbestval = s.fitness;
    s.stagnation.assign(ps, 0);
    s.refreshed.assign(ps, 0);

    s.gbest = s.pbest[0];
    s.gbestval = s.pbestval[0];
    for (std::size_t i = 1; i < ps; ++i)
        if (improves_best(s.pbestval[i], cardinality(s.pbest[i]), s.gbestval, cardinality(s.gbest))) {
            s.gbest = s.pbest[i];
            s.gbestval = s.pbestval[i];
        }

    RunResult r;
    r.fitness_trace.push_back(s.gbestval);
    r.cardinality_trace.push_back(cardinality(s.gbest));
    if (observer) observer(s);

    for (std::uint64_t t = 1; t < generations; ++t) {
        s.iteration = t;
        const double omega = resolve_omega(p, t, generations);
        const double u =
            p.u_start + (p.u_end - p.u_start) * static_cast<double>(t) / static_cast<double>(generations);

        std::fill(s.refreshed.begin(), s.refreshed.end(), 0);
        for (std::size_t i = 0; i < ps; ++i) {
            if (s.stagnation[i] >= p.refresh_gap) {
                refresh_velocity(s.velocities[i], rng);
                s.stagnation[i] = 0;
                s.refreshed[i] = 1;
            }
            const double delta = self_influence(s.fitness[i], s.prev_fitness[i], s.fitness);
            switch (mode) {
                case SocialMode::Global:
                    s.velocities[i] = update_velocity_gpso(s.velocities[i], s.positions[i],
                                                           s.pbest[i], s.gbest, omega, p.c1,
                                                           p.c2, delta, rng);
                    break;
                case SocialMode::Local:
                    s.velocities[i] = update_velocity_gpso(s.velocities[i], s.positions[i],
                                                           s.pbest[i], nbest_of(s, topo, i),
                                                           omega, p.c1, p.c2, delta, rng);
                    break;
                case SocialMode::Unified:
                    s.velocities[i] = update_velocity_upso(s.velocities[i], s.positions[i],
                                                           s.pbest[i], s.gbest,
                                                           nbest_of(s, topo, i), omega, p.c1,
                                                           p.c2, u, delta, rng);
                    break;
            }
            s.positions[i] = update_position(s.velocities[i], rng);
        }

        s.prev_fitness = s.fitness;
        for (std::size_t i = 0; i < ps; ++i) s.fitness[i] = ctx.evaluate_subset(s.positions[i]);

        for (std::size_t i = 0; i < ps; ++i) {
            const double before = s.pbestval[i];
            if (improves_best(s.fitness[i], cardinality(s.positions[i]), s.pbestval[i],
                       cardinality(s.pbest[i]))) {
                s.pbest[i] = s.positions[i];
                s.pbestval[i] = s.fitness[i];
            }
            if (s.pbestval[i] < before)
                s.stagnation[i] = 0;
            else
                ++s.stagnation[i];
        }
        for (std::size_t i = 0; i < ps; ++i)
            if (improves_best(s.pbestval[i], cardinality(s.pbest[i]), s.gbestval, cardinality(s.gbest))) {
                s.gbest = s.pbest[i];
                s.gbestval = s.pbestval[i];
            }

        r.fitness_trace.push_back(s.gbestval);
        r.cardinality_trace.push_back(cardinality(s.gbest));
        if (observer) observer(s);
    }

    r.best_mask = s.gbest;
    r.best_fitness = s.gbestval;
    finish(r, ctx, tm, seed);
    return r;
}

RunResult run_bpso_engine(CriterionContext& ctx, const SwarmParams& p, std::uint64_t budget,
                          std::uint64_t seed, bool chaotic_inertia) {
    validate_common(p, budget);
    const std::size_t ps = static_cast<std::size_t>(p.swarm_size);
    const std::size_t n = ctx.dataset().n_features();
    const std::uint64_t generations = budget / ps;
    const double v_clamp = 6.0;

    const Timing tm = begin_timing(ctx);
    Rng rng(seed);

    std::vector<Mask> x;
    x.reserve(ps);
    for (std::size_t i = 0; i < ps; ++i) x.push_back(random_mask(n, rng));
    std::vector<std::vector<double>> vel(ps, std::vector<double>(n));
    for (auto& vi : vel)
        for (double& v : vi) v = rng.uniform(-v_clamp, v_clamp);

    std::vector<double> fitness(ps);
    for (std::size_t i = 0; i < ps; ++i) fitness[i] = ctx.evaluate_subset(x[i]);
    std::vector<Mask> pbest = x;
    std::vector<double> pbestval = fitness;
    Mask gbest = pbest[0];
    double gbestval = pbestval[0];
    for (std::size_t i = 1; i < ps; ++i)
        if (improves_best(pbestval[i], cardinality(pbest[i]), gbestval, cardinality(gbest))) {
            gbest = pbest[i];
            gbestval = pbestval[i];
        }

    RunResult r;
    r.fitness_trace.push_back(gbestval);
    r.cardinality_trace.push_back(cardinality(gbest));

    double omega_state = 0.48;
    for (std::uint64_t t = 1; t < generations; ++t) {
        double omega = p.omega0;
        if (chaotic_inertia) {
            omega_state = logistic_map_step(omega_state);
            omega = omega_state;
        }
        for (std::size_t i = 0; i < ps; ++i) {
            for (std::size_t d = 0; d < n; ++d) {
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                double v = omega * vel[i][d] +
                           p.c1 * r1 * (static_cast<double>(pbest[i][d]) - x[i][d]) +
                           p.c2 * r2 * (static_cast<double>(gbest[d]) - x[i][d]);
                vel[i][d] = std::clamp(v, -v_clamp, v_clamp);
            }
            for (std::size_t d = 0; d < n; ++d)
                x[i][d] = bpso_sigmoid(vel[i][d]) > rng.uniform01() ? 1 : 0;
            if (cardinality(x[i]) == 0) x[i][rng.uniform_index(n)] = 1;
        }

        for (std::size_t i = 0; i < ps; ++i) fitness[i] = ctx.evaluate_subset(x[i]);
        for (std::size_t i = 0; i < ps; ++i)
            if (improves_best(fitness[i], cardinality(x[i]), pbestval[i], cardinality(pbest[i]))) {
                pbest[i] = x[i];
                pbestval[i] = fitness[i];
            }
        for (std::size_t i = 0; i < ps; ++i)
            if (improves_best(pbestval[i], cardinality(pbest[i]), gbestval, cardinality(gbest))) {
                gbest = pbest[i];
                gbestval = pbestval[i];
            }

        r.fitness_trace.push_back(gbestval);
        r.cardinality_trace.push_back(cardinality(gbest));
    }

    r.best_mask = gbest;
    r.best_fitness = gbestval;
    finish(r, ctx, tm, seed);
    return r;
}

}  // namespace

bool improves_best(double f_new, std::size_t card_new, double f_old, std::size_t card_old) {
    return f_new < f_old || (f_new == f_old && card_new < card_old);
}

const Mask& nbest_of(const SwarmState& state, const Topology& topo, std::size_t i) {
    const std::size_t ps = state.pbest.size();
    if (i >= ps) throw std::invalid_argument("nbest_of: particle index out of range");
    if (topo.kind == TopologyKind::Global) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < ps; ++j)
            if (state.pbestval[j] < state.pbestval[best]) best = j;
        return state.pbest[best];
    }
    std::size_t best = i;
    for (int off = -topo.radius; off <= topo.radius; ++off) {
        const std::size_t j =
            static_cast<std::size_t>(((static_cast<long>(i) + off) % static_cast<long>(ps) +
                                      static_cast<long>(ps)) %
                                     static_cast<long>(ps));
        if (state.pbestval[j] < state.pbestval[best] ||
            (state.pbestval[j] == state.pbestval[best] && j < best))
            best = j;
    }
    return state.pbest[best];
}

RunResult run_2d_gpso(CriterionContext& ctx, const SwarmParams& p, std::uint64_t budget,
                      std::uint64_t seed, const SwarmObserver& observer) {
    return run_2d_engine(ctx, p, Topology{TopologyKind::Global, 0}, SocialMode::Global, budget,
                         seed, observer);
}

RunResult run_2d_lpso(CriterionContext& ctx, const SwarmParams& p, Topology topo,
                      std::uint64_t budget, std::uint64_t seed, const SwarmObserver& observer) {
    return run_2d_engine(ctx, p, topo, SocialMode::Local, budget, seed, observer);
}

RunResult run_2d_upso(CriterionContext& ctx, const SwarmParams& p, Topology topo,
                      std::uint64_t budget, std::uint64_t seed, const SwarmObserver& observer) {
    return run_2d_engine(ctx, p, topo, SocialMode::Unified, budget, seed, observer);
}

RunResult run_bpso(CriterionContext& ctx, const SwarmParams& p, std::uint64_t budget,
                   std::uint64_t seed) {
    return run_bpso_engine(ctx, p, budget, seed, false);
}

RunResult run_chbpso(CriterionContext& ctx, const SwarmParams& p, std::uint64_t budget,
                     std::uint64_t seed) {
    return run_bpso_engine(ctx, p, budget, seed, true);
}

const std::vector<AlgorithmInfo>& algorithm_registry() {
    static const std::vector<AlgorithmInfo> registry = {
        {"2d-upso", true, "ps=30, w=0.729, c1=c2=1.49, u: 0.2->0.4, RG=3"},
        {"2d-gpso", true, "ps=30, w=0.729, c1=c2=1.49, RG=3"},
        {"2d-lpso", true, "ps=30, w=0.729, c1=c2=1.49, RG=3, ring radius 1"},
        {"bpso", true, "ps=30, w=1, c1=c2=2, v in [-6,6]"},
        {"chbpso", true, "ps=30, w=logistic map from 0.48, c1=c2=2, v in [-6,6]"},
        {"ga", false, "N=80, pc=0.45, pm=0.01"},
        {"aco", false, "as=50, a=5, rho=0.2, tau in [0.3,1.5]"},
        {"cbpso", false, "ps=30, w=1, c1=c2=2, v in [-6,6], C=ps/10, RG=3"},
        {"erfs", false, "ps=30, w=0.729, c1=c2=1.49, theta=0.6, x in [0,1]"},
        {"pso-42", false, "ps=30, w=0.729, c1=c2=1.49, theta=0.6, x in [0,1]"},
    };
    return registry;
}

RunResult run_by_name(const std::string& name, CriterionContext& ctx, const SwarmParams& p,
                      std::uint64_t budget, std::uint64_t seed) {
    if (name == "2d-upso") return run_2d_upso(ctx, p, Topology{TopologyKind::Ring, 1}, budget, seed);
    if (name == "2d-gpso") return run_2d_gpso(ctx, p, budget, seed);
    if (name == "2d-lpso") return run_2d_lpso(ctx, p, Topology{TopologyKind::Ring, 1}, budget, seed);
    if (name == "bpso") return run_bpso(ctx, p, budget, seed);
    if (name == "chbpso") return run_chbpso(ctx, p, budget, seed);
    for (const auto& info : algorithm_registry())
        if (info.name == name && !info.implemented)
            throw std::runtime_error("algorithm '" + name +
                                     "' not implemented: external reference (parameters: " +
                                     info.parameters + ")");
    throw std::invalid_argument("unknown algorithm: " + name);
}

}  // namespace fs2d
