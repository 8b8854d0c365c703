#pragma once

#include <cstdint>

namespace qrr {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (mix64(b) + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

// Counter-based generator: output k is a pure function of (key, k), so streams can be
// split by key and indexed by position without any shared state. Distributions are
// implemented here rather than via <random> so results are identical across
// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : key_(mix64(seed ^ 0x5851f42d4c957f2dULL)) {}

    std::uint64_t next() { return mix64(key_ ^ mix64(ctr_++)); }

    // The value at an absolute position; does not advance the stream.
    std::uint64_t at(std::uint64_t pos) const { return mix64(key_ ^ mix64(pos)); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform_at(std::uint64_t pos) const { return static_cast<double>(at(pos) >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), n > 0. Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                x = next();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool coin() { return (next() >> 63) != 0; }

    // Independent child stream.
    Rng split(std::uint64_t stream) const {
        Rng r;
        r.key_ = hash_combine(key_, stream);
        return r;
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

}  // namespace qrr
