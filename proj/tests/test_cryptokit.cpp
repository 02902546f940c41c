#include "aleph/coin.hpp"
#include "aleph/node.hpp"
#include "aleph/permutation.hpp"
#include "aleph/rng.hpp"
#include "aleph/sha256.hpp"
#include "aleph/unit.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <set>

using namespace aleph;

namespace {

nlohmann::json load_golden() {
    std::ifstream in(std::string(ALEPH_GOLDEN_DIR) + "/golden.json");
    REQUIRE(in.good());
    nlohmann::json j;
    in >> j;
    return j;
}

std::vector<crypto::BoxPublicKey> fixture_holders(uint32_t n, uint64_t seed) {
    std::vector<crypto::BoxPublicKey> keys;
    for (uint32_t i = 0; i < n; ++i)
        keys.push_back(node::ProcessKeys::derive(seed, i).box.public_key());
    return keys;
}

}  // namespace

TEST_CASE("sha256d matches reference vectors and is stable") {
    auto golden = load_golden();
    for (const auto& vec : golden["sha256d"]) {
        Bytes input = from_hex(vec["input"].get<std::string>());
        CHECK(crypto::sha256d(input).hex() == vec["sha256d"].get<std::string>());
    }
    Bytes x = from_hex("00ff17");
    CHECK(crypto::sha256d(x) == crypto::sha256d(x));
}

TEST_CASE("sha256d: any single-bit flip changes the digest") {
    Rng rng(42);
    Bytes base(64);
    for (auto& b : base) b = uint8_t(rng.next());
    Digest d0 = crypto::sha256d(base);
    for (int i = 0; i < 100; ++i) {
        Bytes flipped = base;
        size_t bit = rng.below(flipped.size() * 8);
        flipped[bit / 8] ^= uint8_t(1u << (bit % 8));
        CHECK(crypto::sha256d(flipped) != d0);
    }
}

TEST_CASE("signatures: accept the signer, reject everything else") {
    auto k1 = node::ProcessKeys::derive(7, 0).sign;
    auto k2 = node::ProcessKeys::derive(7, 1).sign;
    Bytes msg = from_hex("deadbeef00112233");
    auto sig = k1.sign(msg);

    CHECK(crypto::verify(k1.verify_key(), msg, sig));

    Bytes other = msg;
    other[0] ^= 1;
    CHECK_FALSE(crypto::verify(k1.verify_key(), other, sig));
    CHECK_FALSE(crypto::verify(k2.verify_key(), msg, sig));

    auto tampered = sig;
    tampered.bytes[10] ^= 1;
    CHECK_FALSE(crypto::verify(k1.verify_key(), msg, tampered));
}

TEST_CASE("common permutation matches the pinned fixture") {
    auto golden = load_golden();
    std::vector<crypto::VerifyKey> keys;
    for (const auto& k : golden["permutation"]["keys"]) {
        crypto::VerifyKey vk;
        Bytes raw = from_hex(k.get<std::string>());
        std::copy(raw.begin(), raw.end(), vk.bytes.begin());
        keys.push_back(vk);
    }
    CHECK(crypto::common_permutation(1, keys) ==
          golden["permutation"]["k1"].get<std::vector<uint32_t>>());
    CHECK(crypto::common_permutation(2, keys) ==
          golden["permutation"]["k2"].get<std::vector<uint32_t>>());
    // Same inputs, same output.
    CHECK(crypto::common_permutation(1, keys) == crypto::common_permutation(1, keys));
}

TEST_CASE("common permutation is a bijection for assorted sizes and nonces") {
    for (uint32_t n : {1u, 4u, 7u, 13u}) {
        node::Roster roster = node::derive_roster(99, n);
        for (uint64_t k : {1u, 2u, 9u}) {
            auto perm = crypto::common_permutation(k, roster.verify_keys);
            std::set<uint32_t> seen(perm.begin(), perm.end());
            CHECK(perm.size() == n);
            CHECK(seen.size() == n);
            if (n == 1) CHECK(perm[0] == 0);
        }
    }
}

TEST_CASE("common permutation rejects duplicate keys") {
    node::Roster roster = node::derive_roster(99, 3);
    auto keys = roster.verify_keys;
    keys.push_back(keys[0]);
    CHECK_THROWS_AS(crypto::common_permutation(1, keys), std::invalid_argument);
}

TEST_CASE("coin dealing: payload shape, determinism, honest shares verify") {
    auto holders = fixture_holders(4, 11);
    auto seed = crypto::sha256d(from_hex("aa"));
    auto payload = crypto::coin_deal(1, 3, holders, seed.bytes);

    CHECK(payload.encrypted_shares.size() == 4);
    CHECK(payload.commitments.size() == 3);
    CHECK(payload == crypto::coin_deal(1, 3, holders, seed.bytes));
    CHECK_THROWS_AS(crypto::coin_deal(1, 5, holders, seed.bytes), std::invalid_argument);

    for (uint32_t j = 0; j < 4; ++j) {
        auto sk = node::ProcessKeys::derive(11, j).box;
        auto share = crypto::coin_extract_share(payload, j, sk, 7);
        REQUIRE(share.has_value());
        CHECK(share->dealer == 1);
        CHECK(share->holder == j);
        CHECK(share->nonce == 7);
        CHECK(crypto::coin_verify_share(payload, *share));
    }
}

TEST_CASE("coin dealing: tampered ciphertext is flagged as a faulty dealer") {
    auto holders = fixture_holders(4, 11);
    auto seed = crypto::sha256d(from_hex("bb"));
    auto payload = crypto::coin_deal(0, 3, holders, seed.bytes);
    payload.encrypted_shares[2].ciphertext[5] ^= 1;

    auto sk2 = node::ProcessKeys::derive(11, 2).box;
    CHECK_FALSE(crypto::coin_extract_share(payload, 2, sk2, 1).has_value());
    // Other holders unaffected.
    auto sk1 = node::ProcessKeys::derive(11, 1).box;
    CHECK(crypto::coin_extract_share(payload, 1, sk1, 1).has_value());
}

TEST_CASE("coin share verification rejects altered values and swapped holders") {
    auto holders = fixture_holders(4, 11);
    auto seed = crypto::sha256d(from_hex("cc"));
    auto payload = crypto::coin_deal(3, 3, holders, seed.bytes);
    auto sk = node::ProcessKeys::derive(11, 1).box;
    auto share = crypto::coin_extract_share(payload, 1, sk, 2).value();

    auto bumped = share;
    auto value = crypto::FieldElem::from_bytes(bumped.value) + crypto::FieldElem(1ul);
    bumped.value = value.to_bytes();
    CHECK_FALSE(crypto::coin_verify_share(payload, bumped));

    auto swapped = share;
    swapped.holder = 2;
    CHECK_FALSE(crypto::coin_verify_share(payload, swapped));
}

TEST_CASE("coin combination: threshold consistency, exhaustive for N=4") {
    auto holders = fixture_holders(4, 13);
    auto seed = crypto::sha256d(from_hex("dd"));
    auto payload = crypto::coin_deal(2, 3, holders, seed.bytes);

    std::vector<crypto::CoinShare> shares;
    for (uint32_t j = 0; j < 4; ++j) {
        auto sk = node::ProcessKeys::derive(13, j).box;
        shares.push_back(crypto::coin_extract_share(payload, j, sk, 5).value());
    }
    int expected = crypto::coin_combine(std::span(shares).subspan(0, 3), 3, 5);
    for (uint32_t a = 0; a < 4; ++a)
        for (uint32_t b = a + 1; b < 4; ++b)
            for (uint32_t c = b + 1; c < 4; ++c) {
                std::vector<crypto::CoinShare> subset{shares[a], shares[b], shares[c]};
                CHECK(crypto::coin_combine(subset, 3, 5) == expected);
            }

    std::vector<crypto::CoinShare> two{shares[0], shares[1]};
    CHECK_THROWS_AS(crypto::coin_combine(two, 3, 5), crypto::InsufficientShares);

    auto stray = shares[2];
    stray.nonce = 6;
    std::vector<crypto::CoinShare> mixed{shares[0], shares[1], stray};
    CHECK_THROWS_AS(crypto::coin_combine(mixed, 3, 5), crypto::MixedShares);
}

TEST_CASE("coin bit sequence matches the independent interpolation script") {
    auto golden = load_golden();
    const auto& fixture = golden["coin"];
    uint32_t dealer = fixture["dealer"].get<uint32_t>();
    uint32_t coin_k = fixture["coin_k"].get<uint32_t>();
    uint32_t n = fixture["n_holders"].get<uint32_t>();
    Bytes seed = from_hex(fixture["dealer_seed"].get<std::string>());

    auto holders = fixture_holders(n, 17);
    auto payload = crypto::coin_deal(dealer, coin_k, holders, seed);

    auto expected = fixture["bits_nonce_1_to_10"].get<std::vector<int>>();
    for (uint32_t nonce = 1; nonce <= 10; ++nonce) {
        std::vector<crypto::CoinShare> shares;
        for (uint32_t j = 0; j < coin_k; ++j) {
            auto sk = node::ProcessKeys::derive(17, j).box;
            shares.push_back(crypto::coin_extract_share(payload, j, sk, nonce).value());
        }
        CHECK(crypto::coin_combine(shares, coin_k, nonce) == expected[nonce - 1]);
    }
}

TEST_CASE("canonical unit encoding round-trips and separates payloads") {
    dag::Unit genesis = dag::make_genesis(4);
    Bytes enc = dag::canonical_encode(genesis);
    CHECK(enc == dag::canonical_encode(genesis));
    CHECK(dag::canonical_decode(enc) == genesis);

    auto keys = node::ProcessKeys::derive(3, 0);
    dag::Unit u;
    u.creator = 0;
    u.parents = {dag::genesis_digest(4), dag::genesis_digest(4)};
    u.payload = from_hex("010203");
    u.dealing = crypto::coin_deal(0, 3, fixture_holders(4, 3), keys.dealer_seed);
    dag::sign_unit(u, keys.sign);

    Bytes full = dag::canonical_encode(u);
    CHECK(dag::canonical_decode(full) == u);

    dag::Unit other = u;
    other.payload = from_hex("010204");
    dag::sign_unit(other, keys.sign);
    CHECK(dag::canonical_encode(other) != full);
    CHECK(dag::hash_of(other) != dag::hash_of(u));

    // Signing preimage differs from the signed encoding only in the marker.
    Bytes presign = dag::canonical_encode(u, false);
    CHECK(presign.size() < full.size());
    CHECK(dag::verify_unit_signature(u, keys.sign.verify_key()));
}

TEST_CASE("canonical decode rejects malformed bytes") {
    dag::Unit genesis = dag::make_genesis(4);
    Bytes enc = dag::canonical_encode(genesis);
    Bytes trailing = enc;
    trailing.push_back(0);
    CHECK_THROWS(dag::canonical_decode(trailing));
    Bytes truncated(enc.begin(), enc.end() - 1);
    CHECK_THROWS(dag::canonical_decode(truncated));
    Bytes one_parent = {0, 0, 0, 0, 1};
    CHECK_THROWS(dag::canonical_decode(one_parent));
}
