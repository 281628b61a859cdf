// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace skysim {

// splitmix64 step; used to mix seed material into statistically independent
// substream keys.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random stream. All campaign randomness flows through this
// wrapper rather than <random> distributions, whose outputs are not pinned
// by the standard; results are therefore reproducible across toolchains.
//
// Substreams are derived by key, e.g. Rng::derive(seed, ue_id, cell_id),
// so links, drops and snapshots can be evaluated in any order (or in
// parallel) without changing a single draw.
class Rng {
  public:
    Rng() : engine_(0) {}
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    template <typename... Keys>
    static Rng derive(std::uint64_t seed, Keys... keys) {
        std::uint64_t s = mix64(seed);
        ((s = mix64(s ^ static_cast<std::uint64_t>(keys))), ...);
        return Rng(s);
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be >= 1.
    std::uint64_t uniform_int(std::uint64_t n) {
        // Rejection keeps the distribution exact for any n.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller. Two uniforms per draw, no cached
    // spare, so the draw sequence does not depend on call history.
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_int(i)]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace skysim
