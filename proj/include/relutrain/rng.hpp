#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace relutrain {

/// splitmix64 mixing step; used to derive well-separated substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed of the `index`-th substream of a master seed. Counter-based, so the
/// k-th Monte Carlo sample sees the same stream no matter how samples are
/// scheduled or batched.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

/// Deterministic random source: mt19937_64 wrapped with the draw helpers the
/// library needs. Same seed, same platform -> identical sequences.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t master, std::uint64_t index) {
        return Rng(substream_seed(master, index));
    }

    double uniform() { return unif_(engine_); }

    double uniform(double a, double b) { return a + (b - a) * unif_(engine_); }

    double normal(double mean = 0.0, double stddev = 1.0) {
        return mean + stddev * norm_(engine_);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform point on the unit sphere S^{dim-1} in R^dim.
    std::vector<double> unit_sphere(int dim) {
        std::vector<double> v(dim);
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& x : v) {
                x = norm_(engine_);
                norm2 += x * x;
            }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : v) x *= inv;
        return v;
    }

    /// Uniform point in the closed ball of radius r in R^dim.
    std::vector<double> ball(int dim, double r) {
        auto v = unit_sphere(dim);
        const double scale = r * std::pow(unif_(engine_), 1.0 / dim);
        for (auto& x : v) x *= scale;
        return v;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> norm_{0.0, 1.0};
};

} // namespace relutrain
