#include "aleph/field.hpp"

#include <stdexcept>

namespace aleph::crypto {

namespace {

const mpz_class& field_modulus() {
    // q = 2^255 - 18057
    static const mpz_class q =
        mpz_class("7fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffb977", 16);
    return q;
}

const mpz_class& group_prime() {
    // P = 2q + 1 = 2^256 - 36113
    static const mpz_class p =
        mpz_class("ffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff72ef", 16);
    return p;
}

std::array<uint8_t, 32> mpz_to_32be(const mpz_class& v) {
    std::array<uint8_t, 32> out{};
    size_t count = 0;
    mpz_export(out.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    if (count > 32) throw std::runtime_error("value does not fit in 32 bytes");
    // mpz_export writes to the front; shift right so the value is big-endian padded.
    if (count < 32) {
        std::move_backward(out.begin(), out.begin() + count, out.end());
        std::fill(out.begin(), out.begin() + (32 - count), uint8_t(0));
    }
    return out;
}

mpz_class mpz_from_be(std::span<const uint8_t> b) {
    mpz_class v;
    mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
    return v;
}

}  // namespace

FieldElem::FieldElem(const mpz_class& v) {
    mpz_mod(v_.get_mpz_t(), v.get_mpz_t(), field_modulus().get_mpz_t());
}

const mpz_class& FieldElem::modulus() { return field_modulus(); }

FieldElem FieldElem::operator+(const FieldElem& o) const { return FieldElem(mpz_class(v_ + o.v_)); }
FieldElem FieldElem::operator-(const FieldElem& o) const { return FieldElem(mpz_class(v_ - o.v_)); }
FieldElem FieldElem::operator*(const FieldElem& o) const { return FieldElem(mpz_class(v_ * o.v_)); }

FieldElem FieldElem::inverse() const {
    if (v_ == 0) throw std::domain_error("field inverse of zero");
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), v_.get_mpz_t(), field_modulus().get_mpz_t()) == 0)
        throw std::domain_error("field inverse does not exist");
    return FieldElem(r);
}

std::array<uint8_t, 32> FieldElem::to_bytes() const { return mpz_to_32be(v_); }

FieldElem FieldElem::from_bytes(std::span<const uint8_t> b) {
    return FieldElem(mpz_from_be(b));
}

const mpz_class& Group::prime() { return group_prime(); }

const mpz_class& Group::generator() {
    static const mpz_class g = 4;
    return g;
}

mpz_class Group::pow_g(const FieldElem& e) { return pow(generator(), e); }

mpz_class Group::pow(const mpz_class& base, const FieldElem& e) {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.value().get_mpz_t(), group_prime().get_mpz_t());
    return r;
}

mpz_class Group::mul(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_class prod = a * b;
    mpz_mod(r.get_mpz_t(), prod.get_mpz_t(), group_prime().get_mpz_t());
    return r;
}

std::array<uint8_t, 32> Group::to_bytes(const mpz_class& e) { return mpz_to_32be(e); }

mpz_class Group::from_bytes(std::span<const uint8_t> b) { return mpz_from_be(b); }

}  // namespace aleph::crypto
