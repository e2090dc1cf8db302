#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace multibid {

// Hand-rolled draws on top of mt19937_64. The standard distributions are
// implementation-defined, which would break byte-identical outputs across
// library versions; these are not.

inline double uniform01(std::mt19937_64 &g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64 &g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

/// Uniform integer in [lo, hi], inclusive. Modulo bias is irrelevant here.
inline int uniform_int(std::mt19937_64 &g, int lo, int hi) {
    return lo + static_cast<int>(g() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Standard normal via Box-Muller.
inline double normal01(std::mt19937_64 &g) {
    double u1 = uniform01(g);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Fisher-Yates; std::shuffle is implementation-defined, this is not.
template <typename T>
void shuffle(std::vector<T> &v, std::mt19937_64 &g) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
        std::swap(v[static_cast<std::size_t>(i)],
                  v[static_cast<std::size_t>(uniform_int(g, 0, i))]);
    }
}

} // namespace multibid
