#include "aleph/sha256.hpp"

#include <openssl/sha.h>

namespace aleph::crypto {

Digest sha256(std::span<const uint8_t> data) {
    Digest d;
    SHA256(data.data(), data.size(), d.bytes.data());
    return d;
}

Digest sha256d(std::span<const uint8_t> data) {
    Digest first = sha256(data);
    return sha256(first.bytes);
}

}  // namespace aleph::crypto
