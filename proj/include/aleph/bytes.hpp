#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aleph {

using Bytes = std::vector<uint8_t>;

// 32-byte hash value with total lexicographic order.
struct Digest {
    std::array<uint8_t, 32> bytes{};

    auto operator<=>(const Digest&) const = default;

    std::string hex() const;
    static Digest from_hex(const std::string& s);
};

struct DigestHash {
    size_t operator()(const Digest& d) const {
        size_t h;
        std::memcpy(&h, d.bytes.data(), sizeof(h));
        return h;
    }
};

std::string to_hex(std::span<const uint8_t> data);
Bytes from_hex(const std::string& s);

// Little-endian append/read helpers for canonical encodings.
inline void put_u8(Bytes& out, uint8_t v) { out.push_back(v); }
inline void put_u16(Bytes& out, uint16_t v) {
    out.push_back(uint8_t(v));
    out.push_back(uint8_t(v >> 8));
}
inline void put_u32(Bytes& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}
inline void put_u64(Bytes& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}
inline void put_bytes(Bytes& out, std::span<const uint8_t> data) {
    out.insert(out.end(), data.begin(), data.end());
}

// Cursor-style reader; throws std::runtime_error on truncated input.
class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8() { return take(1)[0]; }
    uint16_t u16() {
        auto s = take(2);
        return uint16_t(s[0]) | uint16_t(s[1]) << 8;
    }
    uint32_t u32() {
        auto s = take(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t(s[i]) << (8 * i);
        return v;
    }
    uint64_t u64() {
        auto s = take(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= uint64_t(s[i]) << (8 * i);
        return v;
    }
    Bytes bytes(size_t n) {
        auto s = take(n);
        return Bytes(s.begin(), s.end());
    }
    std::span<const uint8_t> take(size_t n) {
        if (n > data_.size() - pos_) throw std::runtime_error("byte reader: truncated input");
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == data_.size(); }
    size_t remaining() const { return data_.size() - pos_; }

private:
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

}  // namespace aleph
