#include "aleph/permutation.hpp"

#include "aleph/sha256.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace aleph::crypto {

std::vector<uint32_t> common_permutation(uint64_t nonce, const std::vector<VerifyKey>& keys) {
    if (nonce < 1) throw std::invalid_argument("permutation nonce must be >= 1");
    if (keys.empty()) throw std::invalid_argument("permutation needs at least one key");
    std::set<std::array<uint8_t, 32>> seen;
    for (const auto& k : keys)
        if (!seen.insert(k.bytes).second)
            throw std::invalid_argument("duplicate keys make the permutation ill-defined");

    // Keys are already hash-width (32 bytes); a wider scheme would be
    // truncated / zero-padded here before the XOR.
    std::array<uint8_t, 32> x{};
    for (const auto& k : keys)
        for (size_t i = 0; i < 32; ++i) x[i] ^= k.bytes[i];

    std::vector<std::array<uint8_t, 32>> y(keys.size());
    for (size_t i = 0; i < keys.size(); ++i) {
        Digest h{keys[i].bytes};
        for (uint64_t r = 0; r < nonce; ++r) h = sha256d(h.bytes);
        for (size_t b = 0; b < 32; ++b) y[i][b] = h.bytes[b] ^ x[b];
    }

    std::vector<uint32_t> order(keys.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return y[a] < y[b]; });
    return order;
}

}  // namespace aleph::crypto
