#pragma once

#include <span>
#include <vector>

#include "fs2d/bits.hpp"
#include "fs2d/rng.hpp"

namespace fs2d {

/// 2 x n velocity: row 1 holds cardinality selection likelihoods (rho),
/// row 2 per-feature selection likelihoods (sigma). Entries are
/// non-negative and unbounded above.
struct Velocity2D {
    std::vector<double> rho;
    std::vector<double> sigma;
    std::size_t n() const { return rho.size(); }
};

/// 2 x n binary learning set extracted from an exemplar: phi is the
/// cardinality one-hot, psi the feature indicator.
struct LearningSet {
    Mask phi;
    Mask psi;
};

struct SwarmParams {
    int swarm_size = 30;
    double omega0 = 0.729;   // inertia; constant when omega0 == omega_f
    double omega_f = 0.729;  // final inertia for the linear-decay mode
    double c1 = 1.49;
    double c2 = 1.49;
    int refresh_gap = 3;     // iterations without pbest improvement before a velocity restart
    double u_start = 0.2;    // unification factor schedule (UPSO only)
    double u_end = 0.4;
};

/// One-hot string with the bit at position cardinality(s) set (1-indexed).
Mask cardinality_learning_set(const Mask& s);

/// psi = exemplar AND NOT position: features the exemplar has and the
/// particle lacks.
Mask feature_learning_set(const Mask& exemplar, const Mask& position);

LearningSet compose_learning_set(Mask phi, Mask psi);

/// Learning set of an exemplar relative to the particle position.
LearningSet exemplar_learning_set(const Mask& exemplar, const Mask& position);

/// Self learning set: phi from the position's own cardinality, psi = position.
LearningSet self_learning_set(const Mask& position);

/// Signed self-influence: delta = 1 - f_now/max(swarm_fitness), positive when
/// the particle improved (f_now < f_prev), negated otherwise. Guards: an
/// all-zero fitness vector gives delta = 0; f_prev = 0 counts as no
/// improvement.
double self_influence(double f_now, double f_prev, std::span<const double> swarm_fitness);

/// v' = omega*v + c1*r1*L_cog + c2*r2*L_soc + delta*L_self, elementwise on
/// both rows, floored at 0. One scalar r1 and one scalar r2 are drawn per
/// call (r1 first). No upper clamp.
Velocity2D update_velocity_gpso(const Velocity2D& v, const Mask& x, const Mask& pbest,
                                const Mask& gbest, double omega, double c1, double c2,
                                double delta, Rng& rng);

/// Unified update: v' = u*v_g + (1-u)*v_l where v_g learns socially from
/// gbest and v_l from nbest; the same r1/r2 draws feed both components.
/// Floored at 0 after blending. u = 1 reproduces the GPSO update exactly.
Velocity2D update_velocity_upso(const Velocity2D& v, const Mask& x, const Mask& pbest,
                                const Mask& gbest, const Mask& nbest, double omega,
                                double c1, double c2, double u, double delta, Rng& rng);

/// Roulette wheel over rho with an explicit draw in [0, sum(rho)]; returns
/// the 1-based cardinality: the smallest j with draw <= cumulative(j).
std::size_t select_cardinality(std::span<const double> rho, double draw);

/// Roulette wheel drawing internally from rng.
std::size_t select_cardinality(std::span<const double> rho, Rng& rng);

/// Rank vector tau: tau[j] = rank of feature j under descending sigma
/// (1 = largest), ties by ascending feature index.
std::vector<std::size_t> rank_features(std::span<const double> sigma);

/// Two-stage position update: roulette-select the cardinality xi from row 1,
/// then set the xi top-ranked features of row 2. Never returns an all-zero
/// mask; the result's cardinality equals xi exactly.
Mask update_position(const Velocity2D& v, Rng& rng);

/// Redraw every entry of both rows uniform in [0,1]; row 1 first, each row
/// left to right.
void refresh_velocity(Velocity2D& v, Rng& rng);

/// Fresh velocity with entries uniform in [0,1] (initialization).
Velocity2D random_velocity(std::size_t n, Rng& rng);

}  // namespace fs2d
