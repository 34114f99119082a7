import random

import pytest

from ntruvfk.ring import (
    HPS,
    PRIME,
    NotInvertibleError,
    Poly,
    RingContext,
    TernarySpec,
    centerlift,
    encode_poly,
    inverse,
    is_member,
    lift3,
    mul,
    phi_n_reduce,
    sample_ternary,
)


def test_mul_identity(rng):
    ctx = RingContext(HPS, 11, 64)
    one = ctx.one()
    b = sample_ternary(TernarySpec.any(9), rng, ctx.with_modulus(None)).reduce(64)
    assert mul(one, b) == b


def test_mul_hand_example_z3():
    # (x+1)(x^2+1) = x^3+x^2+x+1 -> x^2+x+2 after x^3 -> 1
    ctx = RingContext(HPS, 3, 3)
    a = ctx.from_coeffs([1, 1, 0])
    b = ctx.from_coeffs([1, 0, 1])
    assert mul(a, b).coeffs == (2, 1, 1)


def test_mul_prime_wrap():
    # x^{p-1} * x = x^p = x + 1
    ctx = RingContext(PRIME, 7, 101)
    xp_1 = ctx.from_coeffs([0] * 6 + [1])
    x = ctx.from_coeffs([0, 1])
    assert mul(xp_1, x).coeffs == (1, 1, 0, 0, 0, 0, 0)


def test_mul_context_mismatch():
    a = RingContext(HPS, 5, 7).zero()
    b = RingContext(HPS, 5, 11).zero()
    with pytest.raises(ValueError, match="mismatch"):
        mul(a, b)


def test_mul_commutative_and_distributive(rng):
    # randomized algebra check over both flavors
    for variant, n, m in [(HPS, 17, 64), (PRIME, 13, 101)]:
        ctx = RingContext(variant, n, m)
        zctx = ctx.with_modulus(None)
        spec = TernarySpec.any(n - 1)
        for _ in range(500):
            a = sample_ternary(spec, rng, zctx).reduce(m)
            b = sample_ternary(spec, rng, zctx).reduce(m)
            c = sample_ternary(spec, rng, zctx).reduce(m)
            assert mul(a, b) == mul(b, a)
            assert mul(a, b + c) == mul(a, b) + mul(a, c)


def test_inverse_trivial_and_x():
    N, q = 509, 2048
    ctx = RingContext(HPS, N, q)
    assert inverse(ctx.one()) == ctx.one()
    x = ctx.from_coeffs([0, 1])
    xinv = inverse(x)
    assert phi_n_reduce(mul(x, xinv)) == phi_n_reduce(ctx.one())


def test_inverse_roundtrip_all_moduli(rng):
    # q = 2^e and 3 over phi_N; prime q over D
    N, q = 101, 512
    ctx = RingContext(HPS, N)
    spec = TernarySpec.any(N - 2)
    done = 0
    while done < 5:
        a = sample_ternary(spec, rng, ctx)
        try:
            aq = inverse(a.reduce(q))
            a3 = inverse(a.reduce(3))
        except NotInvertibleError:
            continue
        done += 1
        assert phi_n_reduce(mul(a.reduce(q), aq)) == phi_n_reduce(RingContext(HPS, N, q).one())
        assert phi_n_reduce(mul(a.reduce(3), a3)) == phi_n_reduce(RingContext(HPS, N, 3).one())
    pctx = RingContext(PRIME, 17)
    done = 0
    while done < 5:
        a = sample_ternary(TernarySpec.any(16), rng, pctx)
        if a.is_zero():
            continue
        aq = inverse(a.reduce(149))  # field: always invertible when nonzero
        done += 1
        assert mul(a.reduce(149), aq) == RingContext(PRIME, 17, 149).one()


def test_inverse_rejects_noninvertible():
    ctx = RingContext(HPS, 7, 3)
    with pytest.raises(NotInvertibleError):
        inverse(ctx.zero())
    with pytest.raises(ValueError):
        inverse(ctx.zero().lift())  # no modulus on the context


def test_sample_fixed_signs_counts(rng):
    # the hps message space at N=509, q=2048: exactly 127 of each sign
    ctx = RingContext(HPS, 509)
    a = sample_ternary(TernarySpec.fixed_signs(507, 127, 127), rng, ctx)
    assert sum(1 for c in a.coeffs if c == 1) == 127
    assert sum(1 for c in a.coeffs if c == -1) == 127
    assert a.coeffs[508] == 0 and a.coeffs[507] == 0


def test_sample_fixed_weight_counts(rng):
    ctx = RingContext(PRIME, 653)
    a = sample_ternary(TernarySpec.fixed_weight(652, 288), rng, ctx)
    assert sum(1 for c in a.coeffs if c != 0) == 288


def test_sample_zero_spec(rng):
    ctx = RingContext(HPS, 11)
    a = sample_ternary(TernarySpec.fixed_signs(9, 0, 0), rng, ctx)
    assert a.is_zero()


def test_sample_passes_own_membership(rng):
    ctx = RingContext(HPS, 31)
    specs = [
        TernarySpec.any(29),
        TernarySpec.fixed_signs(29, 5, 7),
        TernarySpec.fixed_weight(29, 12),
    ]
    for spec in specs:
        for _ in range(200):
            assert is_member(sample_ternary(spec, rng, ctx), spec)


def test_centerlift_examples():
    ctx = RingContext(HPS, 3, 2048)
    assert centerlift(ctx.from_coeffs([0, 2047, 1024]), 2048).coeffs == (0, -1, -1024)
    ctx3 = RingContext(HPS, 3, 3)
    assert centerlift(ctx3.from_coeffs([0, 2, 1]), 3).coeffs == (0, -1, 1)


def test_centerlift_is_a_section(rng):
    for m in (3, 7, 2048, 4621):
        ctx = RingContext(HPS, 13, m)
        for _ in range(100):
            a = ctx.from_coeffs([rng.randrange(m) for _ in range(13)])
            back = centerlift(a, m)
            assert back.reduce(m) == a
            lo = -(m // 2)
            hi = (m + 1) // 2 - 1 if m % 2 == 0 else (m - 1) // 2
            assert all(lo <= c <= hi for c in back.coeffs)


def test_is_member_examples():
    ctx = RingContext(PRIME, 653)
    zero = ctx.zero()
    assert is_member(zero, TernarySpec.any(652))
    bad = ctx.from_coeffs([2])
    assert not is_member(bad, TernarySpec.any(652))
    w = ctx.from_coeffs([1] * 288)
    assert is_member(w, TernarySpec.fixed_weight(652, 288))
    assert not is_member(zero, TernarySpec.fixed_weight(652, 288))


def test_is_member_degree_bound():
    ctx = RingContext(HPS, 11)
    too_high = ctx.from_coeffs([0] * 10 + [1])
    assert not is_member(too_high, TernarySpec.any(9))


def test_lift3_hps_degree_and_congruence(rng):
    N = 101
    ctx3 = RingContext(HPS, N, 3)
    for _ in range(50):
        a = ctx3.from_coeffs([rng.randrange(3) for _ in range(N)])
        lifted = lift3(a)
        assert all(c in (-1, 0, 1) for c in lifted.coeffs)
        assert lifted.coeffs[N - 1] == 0  # degree at most N-2
        # congruent mod (3, phi_N)
        assert phi_n_reduce(lifted.reduce(3)) == phi_n_reduce(a)


def test_encode_poly_is_centered_int16():
    ctx = RingContext(HPS, 3, 2048)
    raw = encode_poly(ctx.from_coeffs([1, 2047, 1024]))
    assert raw == b"\x01\x00" + b"\xff\xff" + b"\x00\xfc"  # 1, -1, -1024


def test_ternary_spec_validation():
    with pytest.raises(ValueError):
        TernarySpec.fixed_signs(4, 3, 3)  # d1 + d2 > a + 1
    with pytest.raises(ValueError):
        TernarySpec.fixed_weight(4, 6)
