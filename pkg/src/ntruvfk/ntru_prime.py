"""Streamlined NTRU-Prime KEM over Z_q[x]/<x^p - x - 1>.

The ciphertext is Round(h*r): every coefficient is snapped to the nearest
multiple of 3 after centering mod q.  The implicit ternary message is
m = c1 - Round(c1), so ct + m = h*r holds exactly in R/q, which is the
identity the message-recovery experiments rely on.

The registered q values are all = 1 mod 3, so rounded coefficients stay
inside the centered range [-(q-1)/2, (q-1)/2].
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .ring import (
    PRIME,
    NotInvertibleError,
    Poly,
    RingContext,
    TernarySpec,
    centerlift,
    encode_poly,
    inverse,
    is_prime,
    lift3,
    mul,
    sample_ternary,
)


@dataclass(frozen=True)
class PrimeParams:
    """Streamlined NTRU-Prime parameters (p, q, w), w = 2t even.

    x^p - x - 1 must be irreducible mod q; that holds for every registered
    set and is not re-verified here (a reducible D would surface as an
    extended-Euclid failure during keygen).
    """

    name: str
    p: int
    q: int
    w: int

    def __post_init__(self):
        if not is_prime(self.p) or not is_prime(self.q):
            raise ValueError("p and q must both be prime")
        if self.w < 1 or self.w % 2 != 0:
            raise ValueError("w must be a positive even integer")
        if 2 * self.p < 3 * self.w:  # p >= 1.5 w
            raise ValueError(f"p={self.p} too small for w={self.w}")
        if self.q < 16 * self.w + 1:
            raise ValueError(f"q={self.q} too small for w={self.w}")
        if self.q % 3 == 0:
            raise ValueError("q must not be divisible by 3")

    def ring(self, m=None) -> RingContext:
        return RingContext(PRIME, self.p, m)

    def space_f(self) -> TernarySpec:
        return TernarySpec.fixed_weight(self.p - 1, self.w)

    def space_r(self) -> TernarySpec:
        return TernarySpec.fixed_weight(self.p - 1, self.w)

    def space_g(self) -> TernarySpec:
        return TernarySpec.any(self.p - 1)


@dataclass(frozen=True)
class PrimeKeyPair:
    params: PrimeParams
    h: Poly   # public key, h = g / (3f) in R/q
    f: Poly   # ternary secret, weight w
    g3: Poly  # g^{-1} mod (3, D)


def closest3(x: int) -> int:
    """Nearest multiple of 3, ties (which cannot occur on integers) away
    from zero: 3 * sgn(x) * floor(|x/3| + 0.5)."""
    if x >= 0:
        return 3 * ((x + 1) // 3)
    return -3 * ((-x + 1) // 3)


def round_poly(a: Poly) -> Poly:
    """Round = closest3 after the centered lift mod q; output over Z."""
    q = a.ctx.modulus
    if q is None or q % 2 == 0:
        raise ValueError("round_poly expects an odd modulus context")
    lifted = centerlift(a, q)
    return Poly(tuple(closest3(c) for c in lifted.coeffs), lifted.ctx)


def keygen(params: PrimeParams, rng) -> PrimeKeyPair:
    """f from T_{p-1}(w); g from T_{p-1} resampled until invertible mod 3."""
    zctx = params.ring()
    f = sample_ternary(params.space_f(), rng, zctx)
    while True:
        g = sample_ternary(params.space_g(), rng, zctx)
        try:
            g3 = inverse(g.reduce(3))
        except NotInvertibleError:
            continue
        break
    inv3f = inverse(f.reduce(params.q).scale(3))  # R/q is a field, f != 0
    h = mul(g.reduce(params.q), inv3f)
    return PrimeKeyPair(params, h, f, g3)


def _hash_shared(r: Poly, ct: Poly) -> bytes:
    return hashlib.sha256(encode_poly(r) + encode_poly(ct)).digest()


def encap(params: PrimeParams, h: Poly, rng):
    """Returns (K, ct, m, r).

    m and r are handed back for the test harness only; the wire format is
    (K, ct).  ct = Round(h*r) = c1 - m with m ternary, so ct's coefficients
    are multiples of 3 in centered form.
    """
    r = sample_ternary(params.space_r(), rng, params.ring())
    c1 = mul(h, r.reduce(params.q))
    ct = round_poly(c1)
    m = centerlift(c1, params.q) - ct
    K = _hash_shared(r, ct)
    return K, ct, m, r


def decap(kp: PrimeKeyPair, ct: Poly):
    """Shared secret K, or None when the re-encryption check fails."""
    params = kp.params
    q = params.q
    e1 = mul(ct.reduce(q), kp.f.reduce(q).scale(3))
    e2 = centerlift(e1, q)
    e = e2.reduce(3)
    r2 = mul(e, kp.g3)
    r1 = lift3(r2)
    c1 = mul(kp.h, r1.reduce(q))
    c_check = round_poly(c1)
    if c_check == ct:
        return _hash_shared(r1, c_check)
    return None
