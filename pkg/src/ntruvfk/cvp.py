"""Exact CVP on the attack lattice via iterated min-cut, plus baselines.

One descent step minimizes the change in squared distance

    Q(t) = sum_i s_i t_i + sum_{ij} q_{ij} t_i t_j,   t in {0,1}^{2N+1},

over all relevant-vector moves; because the superbasis is obtuse this is
a minimum s-t cut in an undirected network whose internal edge weights
are -q_{ij} and whose terminal weights encode the linear part.  The step
coordinates z of the target have denominators dividing q, so every
capacity is multiplied by q once and all flow arithmetic is exact
integer arithmetic; only the Babai baseline touches floating point.

The max-flow routine augments along breadth-first shortest paths
(level graph + blocking flow, the standard polynomial refinement of the
shortest-augmenting-path method); undirected edges are two opposed arcs
whose residual capacities are updated jointly.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .vfk import VfkLattice


class FlowNetwork:
    """Undirected capacitated s-t network over n internal vertices.

    Internal vertices are 0..n-1 (superbasis indices in the CVP use),
    source is vertex n, sink is vertex n+1.  A terminal weight s_i >= 0
    becomes a sink edge of capacity s_i, s_i < 0 a source edge of
    capacity -s_i, so at most one terminal edge exists per vertex.
    """

    def __init__(self, n_internal: int, scale: int = 1):
        self.n_internal = n_internal
        self.source = n_internal
        self.sink = n_internal + 1
        self.scale = scale
        self.head = [-1] * (n_internal + 2)
        self.to: List[int] = []
        self.nxt: List[int] = []
        self.cap: List[int] = []
        self.internal_edges: List[tuple] = []
        self.terminal: List[int] = [0] * n_internal

    @classmethod
    def from_edges(cls, n_internal, internal_edges, terminal, scale: int = 1):
        """internal_edges: (i, j, w) with w >= 0; terminal: signed s_i list."""
        net = cls(n_internal, scale)
        for i, j, w in internal_edges:
            if w < 0:
                raise ValueError("internal capacities must be non-negative")
            if w:
                net._add(i, j, w)
                net.internal_edges.append((i, j, w))
        for i, s in enumerate(terminal):
            net.terminal[i] = s
            if s > 0:
                net._add(i, net.sink, s)
            elif s < 0:
                net._add(net.source, i, -s)
        return net

    def _add(self, u: int, v: int, w: int):
        # an undirected edge is a pair of opposed arcs, both at capacity w;
        # arc e and its partner e^1 share residual bookkeeping
        self.to.append(v)
        self.cap.append(w)
        self.nxt.append(self.head[u])
        self.head[u] = len(self.to) - 1
        self.to.append(u)
        self.cap.append(w)
        self.nxt.append(self.head[v])
        self.head[v] = len(self.to) - 1

    @property
    def n_vertices(self) -> int:
        return self.n_internal + 2

    @property
    def n_internal_edges(self) -> int:
        return len(self.internal_edges)

    @property
    def n_terminal_edges(self) -> int:
        return sum(1 for s in self.terminal if s != 0)

    def cut_weight(self, t: Sequence[int]) -> int:
        """Total capacity crossing the cut ({source} + {i : t_i = 1}, rest)."""
        w = 0
        for i, j, c in self.internal_edges:
            if t[i] != t[j]:
                w += c
        for i, s in enumerate(self.terminal):
            if s > 0 and t[i] == 1:
                w += s
            elif s < 0 and t[i] == 0:
                w += -s
        return w


def mincut(net: FlowNetwork) -> List[int]:
    """Minimum-cut indicator over the internal vertices.

    Runs max-flow, then marks C = vertices reachable from the source in
    the residual network; t_i = 1 iff internal vertex i lies in C.  The
    arc scan order is fixed by construction order, so the returned cut is
    deterministic.  Mutates the network's residual capacities.
    """
    _max_flow(net)
    reach = _residual_reachable(net)
    return [1 if reach[i] else 0 for i in range(net.n_internal)]


def _max_flow(net: FlowNetwork) -> int:
    to, nxt, head, cap = net.to, net.nxt, net.head, net.cap
    s, t = net.source, net.sink
    nv = net.n_internal + 2
    total = 0
    while True:
        # breadth-first levels on the residual graph
        level = [-1] * nv
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            e = head[u]
            while e != -1:
                if cap[e] > 0:
                    v = to[e]
                    if level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
                e = nxt[e]
        if level[t] < 0:
            return total
        # blocking flow along shortest paths, with per-vertex arc cursors
        it = head.copy()
        while True:
            path = []
            u = s
            aug = 0
            while True:
                if u == t:
                    aug = min(cap[e] for e in path)
                    for e in path:
                        cap[e] -= aug
                        cap[e ^ 1] += aug
                    break
                e = it[u]
                while e != -1 and not (cap[e] > 0 and level[to[e]] == level[u] + 1):
                    e = nxt[e]
                it[u] = e
                if e == -1:
                    if u == s:
                        break
                    level[u] = -1  # dead end for this phase
                    back = path.pop()
                    u = to[back ^ 1]
                    it[u] = nxt[it[u]]
                else:
                    path.append(e)
                    u = to[e]
            if aug == 0:
                break
            total += aug


def _residual_reachable(net: FlowNetwork) -> List[bool]:
    to, nxt, head, cap = net.to, net.nxt, net.head, net.cap
    reach = [False] * (net.n_internal + 2)
    reach[net.source] = True
    queue = deque([net.source])
    while queue:
        u = queue.popleft()
        e = head[u]
        while e != -1:
            if cap[e] > 0 and not reach[to[e]]:
                reach[to[e]] = True
                queue.append(to[e])
            e = nxt[e]
    return reach


# ---------------------------------------------------------------------------
# coordinates of a target over the superbasis

def solve_coordinates(lat: VfkLattice, y: Sequence[int]) -> List[Fraction]:
    """z with y = z B, B the 2N+1 superbasis rows; z_0 is fixed to 0.

    Each coordinate pair inverts the 2x2 block of the basis (determinant
    q), so every denominator divides q.
    """
    num = _coords_scaled(lat, y)
    q = lat.q
    return [Fraction(int(v), q) for v in num]


def _coords_scaled(lat: VfkLattice, y) -> np.ndarray:
    """q * z as an integer vector: z_{N+i} = (k y_i + y_{N+i})/q and
    z_i = y_i - P z_{N+i}, z_0 = 0."""
    N, q, k, P = lat.N, lat.q, lat.k, lat.P
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (2 * N,):
        raise ValueError(f"target must have length {2 * N}")
    zs = k * y[:N] + y[N:]
    zf = q * y[:N] - P * zs
    out = np.empty(2 * N + 1, dtype=np.int64)
    out[0] = 0
    out[1 : N + 1] = zf
    out[N + 1 :] = zs
    return out


def _terminal_weights(lat: VfkLattice, pnum: np.ndarray) -> np.ndarray:
    """s_i = -2 sum_j q_{ij} p_j, scaled by q (pnum = q * p)."""
    N = lat.N
    q00, r, s, diag1, cross, diag2 = lat.selling()
    p0, pf, ps = int(pnum[0]), pnum[1 : N + 1], pnum[N + 1 :]
    out = np.empty(2 * N + 1, dtype=np.int64)
    out[0] = q00 * p0 + r * int(pf.sum()) + s * int(ps.sum())
    out[1 : N + 1] = r * p0 + diag1 * pf + cross * ps
    out[N + 1 :] = s * p0 + cross * pf + diag2 * ps
    return -2 * out


def build_flow_network(lat: VfkLattice, z, u) -> FlowNetwork:
    """Network for one descent step at p = z - u.

    Internal weights are -q_{ij} from the sparse Selling pattern (vertex 0
    joins every other vertex; i joins N+i); terminal weights follow the
    sign rule.  Every capacity is multiplied by q so the network is exact.
    """
    q = lat.q
    if len(z) != lat.n_superbasis or len(u) != lat.n_superbasis:
        raise ValueError("z and u must cover all 2N+1 superbasis indices")
    pnum = np.array(
        [_times_q_exact(zi, q) - q * int(ui) for zi, ui in zip(z, u)], dtype=np.int64
    )
    return _network_from_pnum(lat, pnum)


def _times_q_exact(zi, q: int) -> int:
    v = zi * q
    if isinstance(v, Fraction):
        if v.denominator != 1:
            raise ValueError("coordinate denominators must divide q")
        return int(v)
    return int(v)


def _network_from_pnum(lat: VfkLattice, pnum: np.ndarray) -> FlowNetwork:
    N, q = lat.N, lat.q
    _, r, s, _, cross, _ = lat.selling()
    wr, ws, wc = -r * q, -s * q, -cross * q
    edges = []
    for i in range(1, N + 1):
        if wr:
            edges.append((0, i, wr))
        if ws:
            edges.append((0, N + i, ws))
        if wc:
            edges.append((i, N + i, wc))
    terminal = [int(v) for v in _terminal_weights(lat, pnum)]
    return FlowNetwork.from_edges(2 * N + 1, edges, terminal, scale=q)


# ---------------------------------------------------------------------------
# the exact solver

@dataclass(frozen=True)
class CvpResult:
    """Outcome of one exact solve: the point, its superbasis coordinates,
    the distance to the target, and the number of min-cut rounds."""

    point: tuple
    u: tuple
    distance: float
    distance_sq: int
    iterations: int
    distance_sq_trace: tuple


def cvp_vfk(lat: VfkLattice, y: Sequence[int], record_steps: Optional[list] = None) -> CvpResult:
    """Exact closest vector of y in L_k.

    Starts from u = floor(z) and repeats: build the step network, take a
    min cut, add the indicator to u.  A constant cut (all zeros or all
    ones) encodes the zero relevant vector, and a non-negative Q(t) means
    no relevant vector improves the current point, which certifies
    optimality; both exit early.  At most 2N+1 rounds run.

    record_steps, when a list, receives (pnum, t, q_scaled) per round,
    where pnum = q*(z - u) and q_scaled = q * Q(t).
    """
    q = lat.q
    y = np.asarray(y, dtype=np.int64)
    znum = _coords_scaled(lat, y)
    u = znum // q
    pnum = znum - q * u
    trace = [_dist_sq(lat, y, u)]
    iterations = 0
    for _ in range(lat.n_superbasis):
        net = _network_from_pnum(lat, pnum)
        t = mincut(net)
        iterations += 1
        tv = np.asarray(t, dtype=np.int64)
        q_scaled = int(np.dot(net.terminal, tv)) + q * lat.subset_sum_norm_sq(t)
        if record_steps is not None:
            record_steps.append((pnum.copy(), t, q_scaled))
        if q_scaled >= 0:
            break
        u = u + tv
        pnum = pnum - q * tv
        trace.append(trace[-1] + q_scaled // q)
    dist_sq = _dist_sq(lat, y, u)
    point = _point_of(lat, u)
    return CvpResult(
        point=tuple(int(x) for x in point),
        u=tuple(int(x) for x in u),
        distance=math.sqrt(dist_sq),
        distance_sq=dist_sq,
        iterations=iterations,
        distance_sq_trace=tuple(trace),
    )


def _point_of(lat: VfkLattice, u: np.ndarray) -> np.ndarray:
    N, q, k, P = lat.N, lat.q, lat.k, lat.P
    u0, uf, us = int(u[0]), u[1 : N + 1], u[N + 1 :]
    first = (-1 - P) * u0 + uf + P * us
    second = (k * P + k - q) * u0 - k * uf + (q - P * k) * us
    return np.concatenate([first, second])


def _dist_sq(lat: VfkLattice, y: np.ndarray, u: np.ndarray) -> int:
    d = y - _point_of(lat, u)
    return int(np.dot(d, d))


# ---------------------------------------------------------------------------
# Babai nearest-plane baseline (floating point; run on the basis rows)

def gram_schmidt(basis: np.ndarray) -> tuple:
    """Classical GSO of the rows; returns (orthogonal rows, squared norms)."""
    b = np.asarray(basis, dtype=np.float64)
    n = b.shape[0]
    gs = b.copy()
    norms_sq = np.empty(n)
    for j in range(n):
        if j:
            coeffs = gs[:j] @ b[j] / norms_sq[:j]
            gs[j] = b[j] - coeffs @ gs[:j]
        norms_sq[j] = gs[j] @ gs[j]
        if norms_sq[j] <= 1e-9:
            raise ValueError(f"Gram-Schmidt degenerate at row {j}")
    return gs, norms_sq


def babai(basis: np.ndarray, y: Sequence[int], gso: Optional[tuple] = None) -> np.ndarray:
    """Nearest-plane lattice point for target y.

    c_j = floor(b . b*_j / ||b*_j||^2 + 0.5) from the last row down; the
    result is assembled as the exact integer combination sum c_j b_j, so
    the output is a lattice point even though the loop runs in floats.
    """
    basis = np.asarray(basis, dtype=np.int64)
    gs, norms_sq = gso if gso is not None else gram_schmidt(basis)
    n = basis.shape[0]
    b = np.asarray(y, dtype=np.float64).copy()
    coeffs = np.zeros(n, dtype=np.int64)
    for j in range(n - 1, -1, -1):
        c = math.floor(b @ gs[j] / norms_sq[j] + 0.5)
        coeffs[j] = c
        if c:
            b -= c * basis[j]
    return coeffs @ basis


# ---------------------------------------------------------------------------
# brute-force oracle for small instances

def cvp_bruteforce(basis: np.ndarray, y: Sequence[int], radius: Optional[float] = None) -> np.ndarray:
    """Global closest point by exhaustive coefficient enumeration.

    Only for dimension <= 12.  The search box is centered on the real
    coordinates of y with half-widths dist_bound * ||column i of B^-1||,
    where dist_bound starts from the rounded-coordinate candidate after a
    greedy +-1 descent (the bound only has to be an upper bound on the
    true distance for the box to contain the minimizer).
    """
    B = np.asarray(basis, dtype=np.int64)
    n = B.shape[0]
    if n > 12:
        raise ValueError("brute force is limited to dimension 12")
    y = np.asarray(y, dtype=np.int64)
    Binv = np.linalg.inv(B.astype(np.float64))
    z = y.astype(np.float64) @ Binv
    c = np.round(z).astype(np.int64)

    def dist_sq(cand):
        d = cand @ B - y
        return int(d @ d)

    best = dist_sq(c)
    improved = True
    while improved and best > 0:  # greedy +-1 descent tightens the box
        improved = False
        for i in range(n):
            for step in (1, -1):
                c[i] += step
                d = dist_sq(c)
                if d < best:
                    best = d
                    improved = True
                else:
                    c[i] -= step
    bound = math.sqrt(best) if radius is None else min(math.sqrt(best), radius)
    col_norms = np.linalg.norm(Binv, axis=0)
    half = bound * col_norms + 1e-6
    lo = np.ceil(z - half).astype(np.int64)
    hi = np.floor(z + half).astype(np.int64)

    best_c = c.copy()
    best_d = best
    sizes = (hi - lo + 1).astype(np.int64)
    # enumerate the box in chunks: outer coordinates looped, inner vectorized
    split = n
    inner = 1
    while split > 0 and inner * sizes[split - 1] <= 1 << 16:
        inner *= int(sizes[split - 1])
        split -= 1
    inner_grids = np.meshgrid(*[np.arange(lo[i], hi[i] + 1) for i in range(split, n)], indexing="ij") if split < n else []
    inner_pts = (
        np.stack([g.ravel() for g in inner_grids], axis=1).astype(np.int64)
        if inner_grids
        else np.zeros((1, 0), dtype=np.int64)
    )

    def outer_iter(idx, prefix):
        nonlocal best_c, best_d
        if idx == split:
            cand = np.empty((inner_pts.shape[0], n), dtype=np.int64)
            cand[:, :split] = prefix
            cand[:, split:] = inner_pts
            d = cand @ B - y
            dist = np.einsum("ij,ij->i", d, d)
            j = int(np.argmin(dist))
            if int(dist[j]) < best_d:
                best_d = int(dist[j])
                best_c = cand[j].copy()
            return
        for v in range(int(lo[idx]), int(hi[idx]) + 1):
            outer_iter(idx + 1, prefix + [v])

    outer_iter(0, [])
    return best_c @ B
