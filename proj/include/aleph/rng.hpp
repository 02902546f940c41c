#pragma once

#include <cstdint>
#include <random>

namespace aleph {

// Deterministic randomness source. mt19937_64 has a standardized output
// sequence, and the bounded draw below avoids std::uniform_int_distribution,
// whose mapping is implementation-defined — replays must be byte-identical.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    // Uniform draw from [0, n). n must be positive.
    uint64_t below(uint64_t n) {
        return uint64_t((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Uniform draw from [lo, hi] inclusive.
    uint64_t between(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

private:
    std::mt19937_64 engine_;
};

}  // namespace aleph
