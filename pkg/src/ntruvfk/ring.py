"""Polynomial arithmetic over Z[x]/<D(x)> for the two KEM flavors.

Two quotient rings are supported: D(x) = x^N - 1 (the "hps" flavor, where
the factor phi_N = 1 + x + ... + x^{N-1} of D matters for inversion) and
D(x) = x^p - x - 1 (the "prime" flavor, D irreducible mod q).  Polynomials
are stored as fixed-length coefficient tuples; when a context carries a
modulus m, coefficients are kept in the canonical range [0, m) and the
centered representative is produced explicitly by `centerlift`.

Coefficient moduli in play are 3, a prime q, or a power of two q = 2^e;
all values fit comfortably in 64-bit integers (q <= 5167 in every
registered parameter set).  Multiplication is schoolbook via integer
convolution, which is plenty at degrees <= 857.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

HPS = "hps"      # D(x) = x^N - 1
PRIME = "prime"  # D(x) = x^p - x - 1


class NotInvertibleError(Exception):
    """Raised when a polynomial has no inverse in the requested ring."""


@dataclass(frozen=True)
class RingContext:
    """Quotient ring descriptor: flavor of D(x), its degree, optional modulus."""

    variant: str
    n: int
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.variant not in (HPS, PRIME):
            raise ValueError(f"unknown ring variant {self.variant!r}")
        if self.n < 2:
            raise ValueError("degree of D(x) must be at least 2")
        if self.modulus is not None and self.modulus < 2:
            raise ValueError("modulus must be >= 2")

    def with_modulus(self, m: Optional[int]) -> "RingContext":
        return RingContext(self.variant, self.n, m)

    def zero(self) -> "Poly":
        return Poly((0,) * self.n, self)

    def one(self) -> "Poly":
        return Poly((1,) + (0,) * (self.n - 1), self)

    def from_coeffs(self, coeffs: Iterable[int]) -> "Poly":
        c = list(coeffs)
        if len(c) > self.n:
            raise ValueError(f"too many coefficients for degree-{self.n} quotient")
        c += [0] * (self.n - len(c))
        if self.modulus is not None:
            m = self.modulus
            c = [x % m for x in c]
        return Poly(tuple(c), self)


@dataclass(frozen=True)
class Poly:
    """Element of Z[x]/<D(x)> (optionally with coefficients mod m)."""

    coeffs: tuple
    ctx: RingContext

    def __post_init__(self):
        if len(self.coeffs) != self.ctx.n:
            raise ValueError("coefficient vector length must equal deg D")

    def __add__(self, other: "Poly") -> "Poly":
        _require_same_ctx(self, other)
        c = [a + b for a, b in zip(self.coeffs, other.coeffs)]
        return self.ctx.from_coeffs(c)

    def __sub__(self, other: "Poly") -> "Poly":
        _require_same_ctx(self, other)
        c = [a - b for a, b in zip(self.coeffs, other.coeffs)]
        return self.ctx.from_coeffs(c)

    def __neg__(self) -> "Poly":
        return self.ctx.from_coeffs([-a for a in self.coeffs])

    def __mul__(self, other: "Poly") -> "Poly":
        return mul(self, other)

    def scale(self, c: int) -> "Poly":
        return self.ctx.from_coeffs([c * a for a in self.coeffs])

    def reduce(self, m: int) -> "Poly":
        """Reinterpret modulo m, coefficients in canonical range [0, m)."""
        return self.ctx.with_modulus(m).from_coeffs(self.coeffs)

    def lift(self) -> "Poly":
        """Forget the modulus, keeping the stored representatives."""
        return Poly(self.coeffs, self.ctx.with_modulus(None))

    def eval_at_one(self) -> int:
        s = sum(self.coeffs)
        return s % self.ctx.modulus if self.ctx.modulus is not None else s

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def degree(self) -> int:
        for i in range(self.ctx.n - 1, -1, -1):
            if self.coeffs[i] != 0:
                return i
        return -1


def _require_same_ctx(a: Poly, b: Poly):
    if a.ctx != b.ctx:
        raise ValueError(f"ring context mismatch: {a.ctx} vs {b.ctx}")


def mul(a: Poly, b: Poly) -> Poly:
    """Product in Z[x]/<D(x)>, reduced by the context modulus if present.

    Schoolbook convolution; the wrap rule is x^N -> 1 for the hps flavor
    and x^p -> x + 1 for the prime flavor.
    """
    _require_same_ctx(a, b)
    n = a.ctx.n
    av = np.asarray(a.coeffs, dtype=np.int64)
    bv = np.asarray(b.coeffs, dtype=np.int64)
    full = np.convolve(av, bv)
    res = full[:n].copy()
    tail = full[n:]
    if a.ctx.variant == HPS:
        res[: len(tail)] += tail
    else:
        res[: len(tail)] += tail
        res[1 : len(tail) + 1] += tail
    if a.ctx.modulus is not None:
        res %= a.ctx.modulus
    return Poly(tuple(int(x) for x in res), a.ctx)


def phi_n_reduce(a: Poly) -> Poly:
    """Reduce an hps-flavor polynomial modulo phi_N = (x^N - 1)/(x - 1).

    Uses x^{N-1} = -(1 + x + ... + x^{N-2}), i.e. subtract the top
    coefficient from every one below it.  The result has degree <= N-2.
    """
    if a.ctx.variant != HPS:
        raise ValueError("phi_N reduction only applies to x^N - 1 quotients")
    top = a.coeffs[-1]
    if top == 0:
        return a
    c = [x - top for x in a.coeffs[:-1]] + [0]
    return a.ctx.from_coeffs(c)


def centerlift(a: Poly, m: int) -> Poly:
    """Map each coefficient to its centered representative mod m.

    The range is [-floor(m/2), ceil(m/2) - 1] for even m and
    [-(m-1)/2, (m-1)/2] for odd m; the result lives over Z.
    """
    if m < 2:
        raise ValueError("modulus must be >= 2")
    half = (m + 1) // 2
    out = []
    for c in a.coeffs:
        c %= m
        out.append(c - m if c >= half else c)
    return Poly(tuple(out), a.ctx.with_modulus(None))


def lift3(a: Poly) -> Poly:
    """Ternary representative of a mod-3 element.

    For the hps flavor this is the unique ternary polynomial of degree at
    most N-2 congruent to a mod (3, phi_N); for the prime flavor it is the
    plain coefficient-wise centerlift mod 3.
    """
    if a.ctx.variant == HPS:
        a = phi_n_reduce(a.reduce(3))
    return centerlift(a, 3)


# ---------------------------------------------------------------------------
# ternary sample spaces

T_ANY = "any"            # all ternary polynomials of degree <= a
T_FIXED_SIGNS = "signs"  # exactly d1 ones and d2 minus-ones
T_FIXED_WEIGHT = "weight"  # exactly w nonzero coefficients


@dataclass(frozen=True)
class TernarySpec:
    """One of the sample spaces T_a, T_a(d1, d2), T_a(w)."""

    max_degree: int
    kind: str
    d1: int = 0
    d2: int = 0
    w: int = 0

    def __post_init__(self):
        if self.kind not in (T_ANY, T_FIXED_SIGNS, T_FIXED_WEIGHT):
            raise ValueError(f"unknown ternary spec kind {self.kind!r}")
        slots = self.max_degree + 1
        if self.kind == T_FIXED_SIGNS and self.d1 + self.d2 > slots:
            raise ValueError("d1 + d2 exceeds the number of coefficients")
        if self.kind == T_FIXED_WEIGHT and self.w > slots:
            raise ValueError("weight exceeds the number of coefficients")

    @staticmethod
    def any(max_degree: int) -> "TernarySpec":
        return TernarySpec(max_degree, T_ANY)

    @staticmethod
    def fixed_signs(max_degree: int, d1: int, d2: int) -> "TernarySpec":
        return TernarySpec(max_degree, T_FIXED_SIGNS, d1=d1, d2=d2)

    @staticmethod
    def fixed_weight(max_degree: int, w: int) -> "TernarySpec":
        return TernarySpec(max_degree, T_FIXED_WEIGHT, w=w)


def sample_ternary(spec: TernarySpec, rng, ctx: RingContext) -> Poly:
    """Draw uniformly from the sample space described by spec.

    `rng` is a random.Random-style stream owned by the caller.  The result
    is an integer polynomial (no modulus) of length deg D.
    """
    if spec.max_degree >= ctx.n:
        raise ValueError("sample space degree exceeds the quotient degree")
    slots = spec.max_degree + 1
    if spec.kind == T_ANY:
        body = [rng.randrange(-1, 2) for _ in range(slots)]
    elif spec.kind == T_FIXED_SIGNS:
        body = [1] * spec.d1 + [-1] * spec.d2 + [0] * (slots - spec.d1 - spec.d2)
        rng.shuffle(body)
    else:
        body = [rng.choice((-1, 1)) for _ in range(spec.w)] + [0] * (slots - spec.w)
        rng.shuffle(body)
    return ctx.with_modulus(None).from_coeffs(body)


def is_member(a: Poly, spec: TernarySpec) -> bool:
    """True iff a lies in the sample space described by spec."""
    if any(c not in (-1, 0, 1) for c in a.coeffs):
        return False
    if a.degree() > spec.max_degree:
        return False
    if spec.kind == T_FIXED_SIGNS:
        ones = sum(1 for c in a.coeffs if c == 1)
        neg = sum(1 for c in a.coeffs if c == -1)
        return ones == spec.d1 and neg == spec.d2
    if spec.kind == T_FIXED_WEIGHT:
        return sum(1 for c in a.coeffs if c != 0) == spec.w
    return True


# ---------------------------------------------------------------------------
# inversion

def inverse(a: Poly) -> Poly:
    """Inverse of a in its context ring.

    The reduction polynomial is phi_N for hps contexts and D itself for
    prime contexts.  Supported coefficient moduli: 3, an odd prime q, or a
    power of two q = 2^e (extended Euclid mod 2 followed by Newton lifting).
    Raises NotInvertibleError if no inverse exists; keygen loops resample.
    """
    m = a.ctx.modulus
    if m is None:
        raise ValueError("inversion requires a modulus on the context")
    if m & (m - 1) == 0:  # power of two
        return _inverse_pow2(a)
    inv = _euclid_inverse(_reduction_target(a), _modpoly_coeffs(a.ctx), m)
    return a.ctx.from_coeffs(inv)


def _modpoly_coeffs(ctx: RingContext) -> list:
    """Little-endian coefficients of the inversion modulus polynomial."""
    n = ctx.n
    if ctx.variant == HPS:
        return [1] * n  # phi_N, degree N-1
    return [-1, -1] + [0] * (n - 2) + [1]  # x^p - x - 1, degree p


def _reduction_target(a: Poly) -> list:
    if a.ctx.variant == HPS:
        return list(phi_n_reduce(a).coeffs[:-1])
    return list(a.coeffs)


def _inverse_pow2(a: Poly) -> Poly:
    """Inverse mod (2^e, phi_N) via Hensel/Newton iteration v <- v(2 - av)."""
    q = a.ctx.modulus
    v2 = _euclid_inverse(_reduction_target(a), _modpoly_coeffs(a.ctx), 2)
    v = a.ctx.from_coeffs(v2)
    two = a.ctx.from_coeffs([2])
    t = 2
    while t < q:
        v = phi_n_reduce(mul(v, two - mul(a, v)))
        t *= t
    if phi_n_reduce(mul(a, v)) != phi_n_reduce(a.ctx.one()):
        raise NotInvertibleError("Newton lift failed; element not invertible")
    return v


def _euclid_inverse(a: Sequence[int], modpoly: Sequence[int], m: int) -> list:
    """Extended Euclid over F_m[x]: a^{-1} modulo modpoly, m prime (or 2).

    Returns little-endian coefficients padded to len(modpoly) - 1 entries.
    Raises NotInvertibleError when gcd(a, modpoly) is not a unit.
    """
    def deg(u):
        nz = np.nonzero(u)[0]
        return int(nz[-1]) if nz.size else -1

    r0 = np.asarray(modpoly, dtype=np.int64) % m
    r1 = np.zeros(len(modpoly), dtype=np.int64)
    r1[: len(a)] = np.asarray(a, dtype=np.int64) % m
    s0 = np.zeros(len(modpoly), dtype=np.int64)
    s1 = np.zeros(len(modpoly), dtype=np.int64)
    s1[0] = 1
    d1 = deg(r1)
    while d1 > 0:
        d0 = deg(r0)
        if d0 < d1:
            r0, r1, s0, s1, d1 = r1, r0, s1, s0, d0
            continue
        # kill the leading term of r0 with a shifted multiple of r1
        c = (int(r0[d0]) * pow(int(r1[d1]), -1, m)) % m
        shift = d0 - d1
        r0[shift:] = (r0[shift:] - c * r1[: len(r0) - shift]) % m
        s0[shift:] = (s0[shift:] - c * s1[: len(s0) - shift]) % m
    if d1 < 0 or int(r1[0]) % m == 0:
        raise NotInvertibleError("polynomial shares a factor with the modulus")
    cinv = pow(int(r1[0]), -1, m)
    out = (s1 * cinv) % m
    return [int(x) for x in out[: len(modpoly) - 1]]


# ---------------------------------------------------------------------------
# serialization shared by both KEMs

def encode_poly(a: Poly) -> bytes:
    """Centered coefficients as signed 16-bit little-endian values."""
    c = centerlift(a, a.ctx.modulus).coeffs if a.ctx.modulus is not None else a.coeffs
    return struct.pack(f"<{len(c)}h", *c)


def is_prime(n: int) -> bool:
    """Trial division; parameter degrees and moduli are all below 10^4."""
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True
