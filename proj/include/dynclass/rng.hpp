#pragma once

#include <cstdint>
#include <random>

#include "dynclass/core.hpp"

namespace dynclass {

/// splitmix64 step; used both as a generator seeder and to derive independent
/// substream seeds from a master seed (counter-based splitting).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for substream `tag` of a master seed. Stages of the classification
/// pipeline use distinct tags so their draws never alias.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    return splitmix64(master ^ splitmix64(tag));
}

/// Deterministic uniform sampling. Avoids std distributions on purpose: their
/// output is implementation-defined, mt19937_64 itself is not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    Vec point_in(const Box& box) {
        Vec x(box.dim());
        for (Eigen::Index i = 0; i < box.dim(); ++i)
            x[i] = uniform(box.lo[i], box.hi[i]);
        return x;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace dynclass
