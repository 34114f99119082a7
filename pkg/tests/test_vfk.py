import itertools
import math

import numpy as np
import pytest

from ntruvfk import vfk

TABLE1 = {
    32: (8, 3), 64: (11, 5), 128: (16, 7), 256: (23, 11), 512: (32, 15),
    1024: (47, 21), 2048: (64, 31), 4096: (91, 45), 4621: (101, 45),
    4591: (98, 46), 5167: (106, 48),
}


def test_choose_P_examples():
    assert vfk.choose_P(64, 2048) == 31
    assert vfk.choose_P(10, 70) == 6
    assert vfk.choose_P(101, 4621) == 45


def test_choose_P_integral_beta():
    # when beta = kq/(k^2+1) is an integer the floor already returns beta
    assert vfk.choose_P(1, 4) == 2  # beta = 4/2 = 2 exactly


def test_max_k_reproduces_table(benchmark=None):
    for q, expected in TABLE1.items():
        assert vfk.max_k(q) == expected, q


def test_max_k_small_q_errors():
    with pytest.raises(ValueError):
        vfk.max_k(3)


def test_superbasis_sums_to_zero(toy_lattice):
    assert np.array_equal(
        toy_lattice.superbasis_rows().sum(axis=0), np.zeros(4, dtype=np.int64)
    )
    big = vfk.build(509, 2048, 64, 31)
    assert not big.superbasis_rows().sum(axis=0).any()


def test_cross_dot_product_value():
    # v_1 . v_{N+1} = (kP - q)k + P = -4065 for (q, k, P) = (2048, 64, 31)
    lat = vfk.build(509, 2048, 64, 31)
    assert lat.selling_entry(1, 1 + lat.N) == (64 * 31 - 2048) * 64 + 31 == -4065


def test_selling_matrix_matches_brute_force(toy_lattice):
    B = toy_lattice.superbasis_rows()
    assert np.array_equal(toy_lattice.selling_matrix(), B @ B.T)


def test_selling_entry_matches_dense(small_lattice):
    B = small_lattice.superbasis_rows()
    dense = B @ B.T
    n = small_lattice.n_superbasis
    for i in range(n):
        for j in range(n):
            assert small_lattice.selling_entry(i, j) == dense[i, j]


def test_obtuseness_of_materialized_rows(small_lattice):
    Q = small_lattice.selling_matrix()
    off = Q - np.diag(np.diag(Q))
    assert (off <= 0).all()


def test_build_rejects_non_obtuse():
    # (q=8, k=3, P=0): v_0 . v_i = -((0+3-8)*3 + 1) = 14 > 0
    with pytest.raises(ValueError):
        vfk.build(2, 8, 3, 0)


def test_basis_determinant_is_q_to_N(toy_lattice, small_lattice):
    for lat in (toy_lattice, small_lattice):
        det = round(np.linalg.det(lat.basis_rows().astype(float)))
        assert abs(det) == lat.q ** lat.N


def test_subset_sum_matches_dense(small_lattice, rng):
    B = small_lattice.superbasis_rows()
    for _ in range(100):
        t = [rng.randint(0, 1) for _ in range(small_lattice.n_superbasis)]
        dense = np.asarray(t, dtype=np.int64) @ B
        assert np.array_equal(small_lattice.subset_sum(t), dense)
        assert small_lattice.subset_sum_norm_sq(t) == int(dense @ dense)


def test_lambda1_toy_against_box_enumeration(toy_lattice):
    # exhaustive search over all lattice points with coefficients in [-8, 8]^4
    B = toy_lattice.basis_rows()
    best = None
    for u in itertools.product(range(-8, 9), repeat=4):
        v = np.asarray(u, dtype=np.int64) @ B
        n2 = int(v @ v)
        if n2 and (best is None or n2 < best):
            best = n2
    assert vfk.lambda1_squared(toy_lattice) == best == 8


def test_lambda1_matches_subset_enumeration(toy_lattice, small_lattice):
    # independent oracle: minimize over all nonempty proper superbasis subsets
    for lat in (toy_lattice, small_lattice):
        n = lat.n_superbasis
        best = min(
            lat.subset_sum_norm_sq([int(b) for b in format(mask, f"0{n}b")])
            for mask in range(1, 2**n - 1)
        )
        assert vfk.lambda1_squared(lat) == best


def test_lambda1_full_size_candidates():
    # the minimum over explicit candidate families (single rows, paired
    # rows, and v_0 combinations) upper-bounds lambda1; the min-cut search
    # must reach it, and only the published closed form disagrees
    for N, q in [(509, 2048), (653, 4621)]:
        k, P = vfk.max_k(q)
        lat = vfk.build(N, q, k, P)
        candidates = [1 + k * k, P * P + (q - P * k) ** 2,
                      (1 + P) ** 2 + (q - k * (P + 1)) ** 2]
        assert vfk.lambda1_squared(lat) == min(candidates)
        assert vfk.lambda1(lat) <= vfk.lambda1_closed_form(lat)


def test_lambda1_closed_form_value():
    lat = vfk.build(509, 2048, 64, 31)
    assert math.isclose(vfk.lambda1_closed_form(lat), math.sqrt(4097))
