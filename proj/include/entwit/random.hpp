#pragma once

#include <cstdint>
#include <random>

#include "entwit/complex_matrix.hpp"

namespace entwit {

inline constexpr std::uint64_t kDefaultSeed = 20240917ull;

// Seeded generator with deterministic substreams. fork(k) derives an
// independent stream from the base seed, so multi-start optimizers get the
// same restart sequence regardless of evaluation order or thread count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    std::uint64_t seed() const { return seed_; }

    Rng fork(std::uint64_t stream) const {
        return Rng(mix(seed_ + 0x9e3779b97f4a7c15ull * (stream + 1)));
    }

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

    double gaussian() {
        return std::normal_distribution<double>(0.0, 1.0)(engine_);
    }

    // Haar-random unit vector in C^d.
    Vec haar_vector(std::size_t d) {
        Vec v(d);
        for (auto& z : v) z = cplx(gaussian(), gaussian());
        normalize(v);
        return v;
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace entwit
