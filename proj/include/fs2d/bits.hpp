#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "fs2d/rng.hpp"

namespace fs2d {

// A candidate feature subset: one bit per feature, 1 = selected.
using Mask = std::vector<std::uint8_t>;

// Number of selected features (zero-norm).
inline std::size_t cardinality(const Mask& bits) {
    return static_cast<std::size_t>(
        std::accumulate(bits.begin(), bits.end(), std::size_t{0}));
}

inline Mask ones_mask(std::size_t n) { return Mask(n, 1); }

inline std::string mask_to_string(const Mask& bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

inline Mask mask_from_string(const std::string& s) {
    Mask bits(s.size(), 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            bits[i] = 1;
        else if (s[i] != '0')
            throw std::invalid_argument("mask string must contain only 0/1");
    }
    return bits;
}

// Each bit Bernoulli(0.5); an all-zero draw gets one uniformly chosen bit
// forced to 1 so the result is always a legal position.
inline Mask random_mask(std::size_t n, Rng& rng) {
    Mask bits(n, 0);
    for (std::size_t i = 0; i < n; ++i) bits[i] = rng.bernoulli() ? 1 : 0;
    if (cardinality(bits) == 0) bits[rng.uniform_index(n)] = 1;
    return bits;
}

// Column indices of the set bits, in feature order.
inline std::vector<int> selected_columns(const Mask& bits) {
    std::vector<int> cols;
    cols.reserve(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) cols.push_back(static_cast<int>(i));
    return cols;
}

}  // namespace fs2d
