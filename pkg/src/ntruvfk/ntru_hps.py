"""NTRU-HPS key generation, encryption/decryption and encap/decap.

Works in R/q = Z_q[x]/<x^N - 1> with N prime and q a power of two.
Inverses are taken modulo (q, phi_N) and (3, phi_N); the public key
satisfies h = 3 g f_q mod (q, x^N - 1), which together with g(1) = 0
gives the exact identity h * f = 3 g mod (q, x^N - 1).

The shared secret is SHA-256 over the signed-16-bit-LE encodings of the
recovered pair; decapsulation falls back to an implicit-rejection secret
derived from a per-key 256-bit seed when decryption fails.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .ring import (
    HPS,
    NotInvertibleError,
    Poly,
    RingContext,
    TernarySpec,
    centerlift,
    encode_poly,
    inverse,
    is_member,
    is_prime,
    lift3,
    mul,
    phi_n_reduce,
    sample_ternary,
)


@dataclass(frozen=True)
class HpsParams:
    """One NTRU-HPS parameter set: prime degree N, power-of-two modulus q."""

    name: str
    N: int
    q: int

    def __post_init__(self):
        if not is_prime(self.N):
            raise ValueError(f"N={self.N} must be prime")
        if self.q < 32 or self.q & (self.q - 1) != 0:
            raise ValueError(f"q={self.q} must be a power of two")
        if 3 * self.q > 16 * self.N + 48:  # q <= 16N/3 + 16
            raise ValueError(f"q={self.q} too large for N={self.N}")

    @property
    def d(self) -> int:
        return self.q // 16 - 1

    def ring(self, m=None) -> RingContext:
        return RingContext(HPS, self.N, m)

    # sample spaces: L_f = L_r = T_{N-2}, L_g = L_m = T_{N-2}(d, d)
    def space_f(self) -> TernarySpec:
        return TernarySpec.any(self.N - 2)

    def space_r(self) -> TernarySpec:
        return TernarySpec.any(self.N - 2)

    def space_g(self) -> TernarySpec:
        return TernarySpec.fixed_signs(self.N - 2, self.d, self.d)

    def space_m(self) -> TernarySpec:
        return TernarySpec.fixed_signs(self.N - 2, self.d, self.d)


@dataclass(frozen=True)
class HpsKeyPair:
    params: HpsParams
    h: Poly    # public key in R/q
    f: Poly    # ternary secret
    f3: Poly   # f^{-1} mod (3, phi_N)
    hq: Poly   # h^{-1} mod (q, phi_N)
    S: bytes   # 256-bit implicit-rejection seed


def keygen(params: HpsParams, rng) -> HpsKeyPair:
    """Sample (f, g), build h = 3 g f_q mod (q, D); resample on failure."""
    zctx = params.ring()
    qctx = params.ring(params.q)
    while True:
        f = sample_ternary(params.space_f(), rng, zctx)
        try:
            fq = inverse(f.reduce(params.q))
            f3 = inverse(f.reduce(3))
        except NotInvertibleError:
            continue
        break
    while True:
        g = sample_ternary(params.space_g(), rng, zctx)
        h = mul(g.reduce(params.q), fq).scale(3)
        try:
            hq = inverse(h)
        except NotInvertibleError:
            continue
        break
    S = rng.getrandbits(256).to_bytes(32, "little")
    return HpsKeyPair(params, h, f, f3, hq, S)


def encrypt(params: HpsParams, h: Poly, r: Poly, m: Poly) -> Poly:
    """c = h*r + Lift_3(m) mod (q, x^N - 1)."""
    if not is_member(r, params.space_r()):
        raise ValueError("r is not in the nonce sample space")
    if not is_member(m, params.space_m()):
        raise ValueError("m is not in the message sample space")
    m1 = lift3(m.reduce(3))
    return mul(h, r.reduce(params.q)) + m1.reduce(params.q)


def decrypt(kp: HpsKeyPair, c: Poly):
    """Returns (m, r, 0) on success and (0, 0, 1) on any check failure."""
    params = kp.params
    zero = params.ring().zero()
    if c.eval_at_one() != 0:  # c must vanish mod (q, x - 1)
        return zero, zero, 1
    a = centerlift(mul(c, kp.f.reduce(params.q)), params.q)
    m = lift3(mul(a.reduce(3), kp.f3))
    r = phi_n_reduce(mul(c - m.reduce(params.q), kp.hq))
    r = centerlift(r, params.q)
    if is_member(r, params.space_r()) and is_member(m, params.space_m()):
        return m, r, 0
    return zero, zero, 1


def _hash_rm(r: Poly, m: Poly) -> bytes:
    return hashlib.sha256(encode_poly(r) + encode_poly(m)).digest()


def encap(params: HpsParams, h: Poly, rng):
    """Returns (ciphertext, shared secret)."""
    zctx = params.ring()
    r = sample_ternary(params.space_r(), rng, zctx)
    m = sample_ternary(params.space_m(), rng, zctx)
    c = encrypt(params, h, r, m)
    return c, _hash_rm(r, m)


def decap(kp: HpsKeyPair, c: Poly) -> bytes:
    """Shared secret; implicit rejection hash(S || c) when decryption fails."""
    m, r, fail = decrypt(kp, c)
    if fail:
        return hashlib.sha256(kp.S + encode_poly(c)).digest()
    return _hash_rm(r, m)
