#pragma once

#include "aleph/bytes.hpp"

#include <gmpxx.h>

namespace aleph::crypto {

// Prime field used for secret sharing. The modulus q = 2^255 - 18057 is a
// Sophie Germain prime: P = 2q + 1 is also prime, so commitments can live in
// the order-q subgroup of Z_P^* (see group.hpp constants below).
class FieldElem {
public:
    FieldElem() : v_(0) {}
    explicit FieldElem(unsigned long v) : v_(v) {}
    explicit FieldElem(const mpz_class& v);

    static const mpz_class& modulus();

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem inverse() const;  // throws std::domain_error on zero

    bool operator==(const FieldElem& o) const { return v_ == o.v_; }
    bool is_zero() const { return v_ == 0; }

    const mpz_class& value() const { return v_; }

    // Fixed 32-byte big-endian serialization.
    std::array<uint8_t, 32> to_bytes() const;
    static FieldElem from_bytes(std::span<const uint8_t> b);

private:
    mpz_class v_;
};

// The commitment group: quadratic residues mod P = 2q + 1, generated by g = 4.
struct Group {
    static const mpz_class& prime();      // P
    static const mpz_class& generator();  // g = 4

    // g^e mod P, with e a field element (the exponent group has order q).
    static mpz_class pow_g(const FieldElem& e);
    static mpz_class pow(const mpz_class& base, const FieldElem& e);
    static mpz_class mul(const mpz_class& a, const mpz_class& b);

    static std::array<uint8_t, 32> to_bytes(const mpz_class& e);
    static mpz_class from_bytes(std::span<const uint8_t> b);
};

}  // namespace aleph::crypto
