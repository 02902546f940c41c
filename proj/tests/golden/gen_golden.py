#!/usr/bin/env python3
"""Independent reference implementation used to pin the golden vectors.

Recomputes, with plain python + hashlib only, the values the C++ library must
reproduce bit-exactly: sha256d test vectors, the common random permutation on
a fixed key fixture, and the threshold-coin bit sequence for a fixed dealer
seed (shares evaluated from the polynomial, then the master secret recovered
by Lagrange interpolation rather than read off the coefficients).

Run from this directory:  python3 gen_golden.py > golden.json
"""

import hashlib
import json

Q = 2**255 - 18057  # shared-secret field modulus, P = 2Q + 1 is also prime


def sha256d(b: bytes) -> bytes:
    return hashlib.sha256(hashlib.sha256(b).digest()).digest()


def le32(v: int) -> bytes:
    return v.to_bytes(4, "little")


# --- sha256d vectors --------------------------------------------------------

SHA_INPUTS = [b"", b"abc", b"aleph", bytes(range(32))]
sha_vectors = [{"input": inp.hex(), "sha256d": sha256d(inp).hex()} for inp in SHA_INPUTS]


# --- common random permutation ----------------------------------------------

KEYS = [
    bytes.fromhex("00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff"),
    bytes.fromhex("a3f1c2d4e5b697880102030405060708090a0b0c0d0e0f101112131415161718"),
    bytes.fromhex("fedcba98765432100123456789abcdeffedcba98765432100123456789abcdef"),
]


def permutation(nonce: int, keys):
    x = bytes(32)
    for k in keys:
        x = bytes(a ^ b for a, b in zip(x, k))
    ys = []
    for i, k in enumerate(keys):
        h = k
        for _ in range(nonce):
            h = sha256d(h)
        ys.append((bytes(a ^ b for a, b in zip(h, x)), i))
    return [i for _, i in sorted(ys)]


perm_fixture = {
    "keys": [k.hex() for k in KEYS],
    "k1": permutation(1, KEYS),
    "k2": permutation(2, KEYS),
}


# --- threshold coin bit sequence ---------------------------------------------

DEALER = 2
COIN_K = 3
N_HOLDERS = 4
DEALER_SEED = sha256d(b"golden dealer seed")


def coefficient(seed: bytes, index: int) -> int:
    return int.from_bytes(sha256d(seed + b"coef" + le32(index)), "big") % Q


def poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % Q
    return acc


def lagrange_at_zero(points):
    secret = 0
    for i, (xi, yi) in enumerate(points):
        num, den = 1, 1
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            num = num * xj % Q
            den = den * (xj - xi) % Q
        secret = (secret + yi * num * pow(den, Q - 2, Q)) % Q
    return secret


coeffs = [coefficient(DEALER_SEED, i) for i in range(COIN_K)]
shares = [(j + 1, poly_eval(coeffs, j + 1)) for j in range(N_HOLDERS)]
# Recover the secret from the first COIN_K shares instead of trusting a_0.
secret = lagrange_at_zero(shares[:COIN_K])
assert secret == coeffs[0]
# Every other COIN_K-subset must agree.
import itertools

for subset in itertools.combinations(shares, COIN_K):
    assert lagrange_at_zero(list(subset)) == secret

bits = []
for nonce in range(1, 11):
    buf = le32(DEALER) + secret.to_bytes(32, "big") + le32(nonce)
    bits.append(sha256d(buf)[31] & 1)

coin_fixture = {
    "dealer": DEALER,
    "coin_k": COIN_K,
    "n_holders": N_HOLDERS,
    "dealer_seed": DEALER_SEED.hex(),
    "bits_nonce_1_to_10": bits,
}

print(
    json.dumps(
        {"sha256d": sha_vectors, "permutation": perm_fixture, "coin": coin_fixture},
        indent=2,
    )
)
