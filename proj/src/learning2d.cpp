#include "fs2d/learning2d.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fs2d {

Mask cardinality_learning_set(const Mask& s) {
    const std::size_t xi = cardinality(s);
    if (xi == 0)
        throw std::invalid_argument("cardinality_learning_set: zero-cardinality input");
    Mask phi(s.size(), 0);
    phi[xi - 1] = 1;
    return phi;
}

Mask feature_learning_set(const Mask& exemplar, const Mask& position) {
    if (exemplar.size() != position.size())
        throw std::invalid_argument("feature_learning_set: length mismatch");
    Mask psi(exemplar.size(), 0);
    for (std::size_t j = 0; j < exemplar.size(); ++j)
        psi[j] = static_cast<std::uint8_t>(exemplar[j] & static_cast<std::uint8_t>(!position[j]));
    return psi;
}

LearningSet compose_learning_set(Mask phi, Mask psi) {
    if (phi.size() != psi.size())
        throw std::invalid_argument("compose_learning_set: length mismatch");
    return {std::move(phi), std::move(psi)};
}

LearningSet exemplar_learning_set(const Mask& exemplar, const Mask& position) {
    return compose_learning_set(cardinality_learning_set(exemplar),
                                feature_learning_set(exemplar, position));
}

LearningSet self_learning_set(const Mask& position) {
    return compose_learning_set(cardinality_learning_set(position), position);
}

double self_influence(double f_now, double f_prev, std::span<const double> swarm_fitness) {
    if (swarm_fitness.empty())
        throw std::invalid_argument("self_influence: empty swarm fitness");
    const double worst = *std::max_element(swarm_fitness.begin(), swarm_fitness.end());
    const double delta = worst > 0.0 ? 1.0 - f_now / worst : 0.0;
    // Improvement test f_now/f_prev < 1; a zero f_prev never counts as
    // improvement (ratio treated as 1 or infinity).
    const bool improved = f_prev > 0.0 && f_now < f_prev;
    return improved ? delta : -delta;
}

namespace {

void accumulate(Velocity2D& v, const LearningSet& ls, double coeff) {
    for (std::size_t j = 0; j < v.n(); ++j) {
        if (ls.phi[j]) v.rho[j] += coeff;
        if (ls.psi[j]) v.sigma[j] += coeff;
    }
}

void clamp_floor(Velocity2D& v) {
    for (double& e : v.rho) e = std::max(0.0, e);
    for (double& e : v.sigma) e = std::max(0.0, e);
}

Velocity2D blend(const Velocity2D& v, double omega, const LearningSet& cog, double c1r1,
                 const LearningSet& soc, double c2r2, const LearningSet& self,
                 double delta) {
    Velocity2D out = v;
    for (double& e : out.rho) e *= omega;
    for (double& e : out.sigma) e *= omega;
    accumulate(out, cog, c1r1);
    accumulate(out, soc, c2r2);
    accumulate(out, self, delta);
    return out;
}

}  // namespace

Velocity2D update_velocity_gpso(const Velocity2D& v, const Mask& x, const Mask& pbest,
                                const Mask& gbest, double omega, double c1, double c2,
                                double delta, Rng& rng) {
    if (v.n() != x.size() || x.size() != pbest.size() || x.size() != gbest.size())
        throw std::invalid_argument("update_velocity_gpso: length mismatch");
    const double r1 = rng.uniform01();
    const double r2 = rng.uniform01();
    const auto cog = exemplar_learning_set(pbest, x);
    const auto soc = exemplar_learning_set(gbest, x);
    const auto self = self_learning_set(x);
    Velocity2D out = blend(v, omega, cog, c1 * r1, soc, c2 * r2, self, delta);
    clamp_floor(out);
    return out;
}

Velocity2D update_velocity_upso(const Velocity2D& v, const Mask& x, const Mask& pbest,
                                const Mask& gbest, const Mask& nbest, double omega,
                                double c1, double c2, double u, double delta, Rng& rng) {
    if (v.n() != x.size() || x.size() != pbest.size() || x.size() != gbest.size() ||
        x.size() != nbest.size())
        throw std::invalid_argument("update_velocity_upso: length mismatch");
    if (u < 0.0 || u > 1.0)
        throw std::invalid_argument("update_velocity_upso: u outside [0,1]");
    const double r1 = rng.uniform01();
    const double r2 = rng.uniform01();
    const auto cog = exemplar_learning_set(pbest, x);
    const auto soc_g = exemplar_learning_set(gbest, x);
    const auto soc_l = exemplar_learning_set(nbest, x);
    const auto self = self_learning_set(x);
    const Velocity2D vg = blend(v, omega, cog, c1 * r1, soc_g, c2 * r2, self, delta);
    const Velocity2D vl = blend(v, omega, cog, c1 * r1, soc_l, c2 * r2, self, delta);
    Velocity2D out;
    out.rho.resize(v.n());
    out.sigma.resize(v.n());
    for (std::size_t j = 0; j < v.n(); ++j) {
        out.rho[j] = u * vg.rho[j] + (1.0 - u) * vl.rho[j];
        out.sigma[j] = u * vg.sigma[j] + (1.0 - u) * vl.sigma[j];
    }
    clamp_floor(out);
    return out;
}

std::size_t select_cardinality(std::span<const double> rho, double draw) {
    double cum = 0.0;
    double total = 0.0;
    for (double e : rho) {
        if (e < 0.0) throw std::invalid_argument("select_cardinality: negative likelihood");
        total += e;
    }
    if (total <= 0.0)
        throw std::invalid_argument("select_cardinality: all-zero likelihoods");
    for (std::size_t j = 0; j < rho.size(); ++j) {
        cum += rho[j];
        if (draw <= cum) return j + 1;
    }
    return rho.size();  // draw == total modulo rounding
}

std::size_t select_cardinality(std::span<const double> rho, Rng& rng) {
    double total = 0.0;
    for (double e : rho) total += e;
    if (total <= 0.0)
        throw std::invalid_argument("select_cardinality: all-zero likelihoods");
    return select_cardinality(rho, rng.uniform(0.0, total));
}

std::vector<std::size_t> rank_features(std::span<const double> sigma) {
    const std::size_t n = sigma.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });
    std::vector<std::size_t> tau(n);
    for (std::size_t r = 0; r < n; ++r) tau[order[r]] = r + 1;
    return tau;
}

Mask update_position(const Velocity2D& v, Rng& rng) {
    const std::size_t xi = select_cardinality(v.rho, rng);
    const auto tau = rank_features(v.sigma);
    Mask x(v.n(), 0);
    for (std::size_t j = 0; j < v.n(); ++j)
        if (tau[j] <= xi) x[j] = 1;
    return x;
}

void refresh_velocity(Velocity2D& v, Rng& rng) {
    for (double& e : v.rho) e = rng.uniform01();
    for (double& e : v.sigma) e = rng.uniform01();
}

Velocity2D random_velocity(std::size_t n, Rng& rng) {
    Velocity2D v;
    v.rho.resize(n);
    v.sigma.resize(n);
    refresh_velocity(v, rng);
    return v;
}

}  // namespace fs2d
