#pragma once

#include <cstdint>
#include <random>

namespace fs2d {

// Seeded generator shared by all stochastic components.  Copyable so a test
// can clone the stream and replay the exact draws an operation will consume.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform real in [0,1).
    double uniform01() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    // Uniform index in [0, n).
    std::size_t uniform_index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    bool bernoulli(double p = 0.5) { return uniform01() < p; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace fs2d
