#pragma once

#include "aleph/bytes.hpp"

namespace aleph::crypto {

Digest sha256(std::span<const uint8_t> data);

// The protocol hash: SHA-256 applied twice.
Digest sha256d(std::span<const uint8_t> data);

inline Digest sha256d(const Bytes& data) { return sha256d(std::span<const uint8_t>(data)); }

}  // namespace aleph::crypto
