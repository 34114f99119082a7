"""The attack lattice L_k and its obtuse superbasis.

L_k is generated by the rows of [[I_N, -k I_N], [0, q I_N]].  After the
unimodular change of basis U_P (P copied down the left of the second
block) the rows become

    v_i     = (e_i, -k e_i)            1 <= i <= N
    v_{N+i} = (P e_i, (q - P k) e_i)   1 <= i <= N
    v_0     = -sum of the others       = (-1-P, ..., kP+k-q, ...)

which is an obtuse superbasis whenever the three pairwise dot products
below are non-positive.  Only five distinct Selling values occur, so the
whole (2N+1) x (2N+1) Selling matrix is stored as five integers; rows are
materialized on demand.  v_i touches only coordinates i and N+i, so dot
products, flow-network edges and subset sums are all generated from that
sparsity pattern rather than dense storage.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np


def choose_P(k: int, q: int) -> int:
    """The shift P = floor(k q / (k^2 + 1)); the integer point of [alpha, beta]."""
    if k < 1 or q < 2:
        raise ValueError("need k >= 1 and q >= 2")
    return (k * q) // (k * k + 1)


def selling_values(N: int, q: int, k: int, P: int):
    """The five distinct Selling parameters of the superbasis.

    Returns (q00, r, s, diag_first, cross, diag_second):
      q00         = v_0 . v_0
      r           = v_0 . v_i                  (1 <= i <= N)
      s           = v_0 . v_{N+i}
      diag_first  = v_i . v_i         = 1 + k^2
      cross       = v_i . v_{N+i}     = (kP - q)k + P
      diag_second = v_{N+i} . v_{N+i} = P^2 + (q - Pk)^2
    All other off-diagonal pairs are orthogonal.
    """
    q00 = N * ((1 + P) ** 2 + (k * (P + 1) - q) ** 2)
    r = -((k * P + k - q) * k + P + 1)
    s = (k * P + k - q) * (q - k * P) - (P + 1) * P
    return q00, r, s, 1 + k * k, (k * P - q) * k + P, P * P + (q - P * k) ** 2


def is_obtuse(q: int, k: int, P: int) -> bool:
    """All pairwise superbasis dot products are <= 0 for these parameters."""
    _, r, s, _, cross, _ = selling_values(1, q, k, P)
    return cross <= 0 and r <= 0 and s <= 0


def max_k(q: int) -> tuple:
    """Largest multiplier of the initial run of valid k values, with its P.

    k is valid when, taking P = choose_P(k, q), the two mixed dot products
    are non-positive and v_0 . v_{N+i} (the paper's g(P)) is strictly
    negative.  Scanning stops at the first failing k: the set of valid k is
    not contiguous (e.g. q = 2048 has stray valid k beyond the first run),
    and the published parameter table corresponds to the first run.
    """
    def valid(k):
        P = choose_P(k, q)
        _, r, s, _, cross, _ = selling_values(1, q, k, P)
        return cross <= 0 and r <= 0 and s < 0

    if q < 4 or not valid(1):
        raise ValueError(f"q={q} too small: no valid multiplier")
    k = 1
    while k < q and valid(k + 1):
        k += 1
    return k, choose_P(k, q)


@dataclass(frozen=True)
class VfkLattice:
    """The 2N-dimensional lattice L_k with superbasis shift P."""

    N: int
    q: int
    k: int
    P: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        if not is_obtuse(self.q, self.k, self.P):
            raise ValueError(
                f"(q={self.q}, k={self.k}, P={self.P}) is not an obtuse configuration"
            )

    @property
    def dim(self) -> int:
        return 2 * self.N

    @property
    def n_superbasis(self) -> int:
        return 2 * self.N + 1

    def selling(self):
        return selling_values(self.N, self.q, self.k, self.P)

    def selling_entry(self, i: int, j: int) -> int:
        """q_{ij} = v_i . v_j, from the compressed representation."""
        N = self.N
        q00, r, s, diag1, cross, diag2 = self.selling()
        if i == j:
            if i == 0:
                return q00
            return diag1 if i <= N else diag2
        a, b = min(i, j), max(i, j)
        if a == 0:
            return r if b <= N else s
        if b == a + N:
            return cross
        return 0

    def selling_matrix(self) -> np.ndarray:
        """Dense (2N+1) x (2N+1) Selling matrix; intended for small N."""
        n = self.n_superbasis
        Q = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                Q[i, j] = self.selling_entry(i, j)
        return Q

    def basis_rows(self) -> np.ndarray:
        """Rows v_1 .. v_2N as a 2N x 2N integer matrix (det = q^N)."""
        N, q, k, P = self.N, self.q, self.k, self.P
        B = np.zeros((2 * N, 2 * N), dtype=np.int64)
        for i in range(N):
            B[i, i] = 1
            B[i, N + i] = -k
            B[N + i, i] = P
            B[N + i, N + i] = q - P * k
        return B

    def superbasis_rows(self) -> np.ndarray:
        """All 2N+1 superbasis rows v_0 .. v_2N; they sum to zero."""
        N, q, k, P = self.N, self.q, self.k, self.P
        top = np.concatenate(
            [np.full(N, -1 - P, dtype=np.int64), np.full(N, k * P + k - q, dtype=np.int64)]
        )
        return np.vstack([top, self.basis_rows()])

    def subset_sum(self, t) -> np.ndarray:
        """The lattice vector sum of {v_i : t_i = 1}, via the sparsity pattern."""
        N, q, k, P = self.N, self.q, self.k, self.P
        t = np.asarray(t, dtype=np.int64)
        t0, tf, ts = t[0], t[1 : N + 1], t[N + 1 :]
        first = (-1 - P) * t0 + tf + P * ts
        second = (k * P + k - q) * t0 - k * tf + (q - P * k) * ts
        return np.concatenate([first, second])

    def subset_sum_norm_sq(self, t) -> int:
        v = self.subset_sum(t)
        return int(np.dot(v, v))


def build(N: int, q: int, k: int, P: int) -> VfkLattice:
    """Construct L_k, rejecting non-obtuse parameter combinations."""
    return VfkLattice(N, q, k, P)


# representative forced pairs for the shortest-vector search: the
# simultaneous permutation of the two coordinate blocks acts transitively
# on {1..N} pairs, so six orbit representatives cover every vertex pair.
def _svp_pairs(N: int):
    pairs = [(0, 1), (0, N + 1), (1, N + 1)]
    if N >= 2:
        pairs += [(1, 2), (1, N + 2), (N + 1, N + 2)]
    return pairs


def lambda1_squared(lat: VfkLattice) -> int:
    """Exact squared length of a shortest nonzero vector of L_k.

    Shortest vectors of a first-kind lattice are relevant vectors, i.e.
    subset sums of the superbasis.  For each representative pair (a, b) a
    min-cut of the homogeneous form sum q_{ij} t_i t_j with t_a = 1 and
    t_b = 0 forced (a merged into the source, b into the sink) gives the
    constrained minimizer; the global minimum is the smallest of the six.
    """
    from .cvp import FlowNetwork, mincut  # deferred: cvp builds on this module

    N = lat.N
    n = lat.n_superbasis
    best = None
    for a, b in _svp_pairs(N):
        remaining = [i for i in range(n) if i != a and i != b]
        pos = {v: idx for idx, v in enumerate(remaining)}
        internal = []
        for i in remaining:
            if i != 0 and 0 in pos:
                w = -lat.selling_entry(0, i)
                if w:
                    internal.append((pos[0], pos[i], w))
            if 1 <= i <= N and (i + N) in pos:
                w = -lat.selling_entry(i, i + N)
                if w:
                    internal.append((pos[i], pos[i + N], w))
        # forcing t_a = 1, t_b = 0 turns the edges into a and b into
        # terminal weights with net linear term q_{ia} - q_{ib}
        terminal = [lat.selling_entry(i, a) - lat.selling_entry(i, b) for i in remaining]
        net = FlowNetwork.from_edges(len(remaining), internal, terminal)
        t_rest = mincut(net)
        t = [0] * n
        t[a] = 1
        for idx, v in enumerate(remaining):
            t[v] = t_rest[idx]
        val = lat.subset_sum_norm_sq(t)
        if best is None or val < best:
            best = val
    return best


def lambda1(lat: VfkLattice) -> float:
    """First successive minimum of L_k, from the min-cut search."""
    return sqrt(lambda1_squared(lat))


def lambda1_closed_form(lat: VfkLattice) -> float:
    """sqrt(1 + k^2) = ||v_i||, the value the published table reports.

    This is an upper bound on lambda1, not the minimum: the subset sum
    v_i + v_{N+i} = ((1+P) e_i, (q - k(P+1)) e_i) is shorter on every
    registered parameter set (e.g. (32 e_i, 0) of norm 32 at q = 2048).
    The attack's sufficient-success bound is stated in terms of this
    quantity, so it is kept alongside the computed minimum.
    """
    return sqrt(1 + lat.k * lat.k)
