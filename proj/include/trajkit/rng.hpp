#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace trajkit {

// Deterministic random stream (xoshiro256** seeded through splitmix64).
// The standard <random> engines are portable but the distributions are not,
// and simulation grids must be bit-reproducible across compilers, so both
// the engine and the distributions are fixed here.
//
// Substreams are derived by hashing a seed with a path of integers
// (e.g. master seed -> cell id -> run index -> draw index), which makes
// grids and hypothesis sampling order-independent and parallel-safe.
class Rng {
public:
    explicit Rng(std::uint64_t seed) { seed_state(seed); }

    /// Hash `seed` with each element of `path` into a new independent stream.
    static std::uint64_t mix(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t h = splitmix(seed);
        for (std::uint64_t p : path) {
            h ^= splitmix(p + 0x9e3779b97f4a7c15ull);
            h = splitmix(h);
        }
        return h;
    }

    static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        return Rng(mix(seed, path));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller (one value per call, no cached spare).
    double normal() {
        double u1 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi_ * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    static constexpr double pi_ = 3.14159265358979323846;

    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    void seed_state(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) {
            s = splitmix(s);
            w = s;
        }
        // All-zero state is invalid for xoshiro; splitmix never maps the
        // whole sequence to zero, but keep the guard explicit.
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t state_[4];
};

}  // namespace trajkit
