#pragma once

#include "aleph/keys.hpp"

#include <vector>

namespace aleph::crypto {

// Common random permutation of process indices 0..N-1 for a nonce k >= 1.
// X is the XOR of all verification keys, X_i = sha256d^k(VK_i), and indices
// are ordered by ascending lexicographic Y_i = X_i XOR X. No party can steer
// the result without controlling every key.
//
// Throws std::invalid_argument on duplicate keys (the ordering would be
// ill-defined) or k < 1.
std::vector<uint32_t> common_permutation(uint64_t nonce, const std::vector<VerifyKey>& keys);

}  // namespace aleph::crypto
