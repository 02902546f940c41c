#include "aleph/bytes.hpp"

namespace aleph {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("invalid hex digit");
}
}  // namespace

std::string to_hex(std::span<const uint8_t> data) {
    std::string s;
    s.reserve(data.size() * 2);
    for (uint8_t b : data) {
        s.push_back(kHexDigits[b >> 4]);
        s.push_back(kHexDigits[b & 0xf]);
    }
    return s;
}

Bytes from_hex(const std::string& s) {
    if (s.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
    Bytes out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = uint8_t(hex_value(s[2 * i]) << 4 | hex_value(s[2 * i + 1]));
    return out;
}

std::string Digest::hex() const { return to_hex(bytes); }

Digest Digest::from_hex(const std::string& s) {
    Bytes raw = aleph::from_hex(s);
    if (raw.size() != 32) throw std::invalid_argument("digest must be 32 bytes");
    Digest d;
    std::copy(raw.begin(), raw.end(), d.bytes.begin());
    return d;
}

}  // namespace aleph
