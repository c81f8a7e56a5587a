#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mgd {

/// Deterministic random stream with cheap substream derivation.
///
/// Every stochastic component of the toolkit draws from an RngStream that is
/// derived from (master seed, stream index). Substreams are statistically
/// independent and fully reproducible, so work can be farmed out to threads
/// without the evaluation order affecting what anybody draws.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) : key_(key), engine_(expand(key)) {}

    /// Independent child stream; same (key, index) always yields the same stream.
    RngStream substream(std::uint64_t index) const {
        return RngStream(mix(key_, index));
    }

    std::uint64_t key() const { return key_; }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        // modulo bias is < 2^-40 for the n used here (population sizes, dims)
        return engine_() % n;
    }

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double normal() {
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t mix(std::uint64_t key, std::uint64_t index) {
        return splitmix64(splitmix64(key) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    }

    static std::mt19937_64 expand(std::uint64_t key) {
        return std::mt19937_64(splitmix64(key ^ 0xd1b54a32d192ed03ULL));
    }

    std::uint64_t key_;
    std::mt19937_64 engine_;
};

}  // namespace mgd
