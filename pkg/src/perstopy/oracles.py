"""Slow, independent reference computations used to cross-check the fast paths."""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction

import numpy as np

from .distances import IntervalPersistentGroup, retracts_through
from .homology import INF
from .metric import as_matrix


def gh_correspondences(X, Y) -> float:
    """Half the least distortion over every correspondence (2^(|X||Y|) subsets)."""
    dx, dy = as_matrix(X), as_matrix(Y)
    nx, ny = len(dx), len(dy)
    cells = [(i, j) for i in range(nx) for j in range(ny)]
    if len(cells) > 16:
        raise ValueError("too large for exhaustive correspondence search")
    best = INF
    for mask in range(1, 1 << len(cells)):
        R = [cells[k] for k in range(len(cells)) if mask >> k & 1]
        if {i for i, _ in R} != set(range(nx)) or {j for _, j in R} != set(range(ny)):
            continue
        p = np.array(R)
        dis = np.abs(dx[np.ix_(p[:, 0], p[:, 0])] - dy[np.ix_(p[:, 1], p[:, 1])]).max()
        best = min(best, float(dis))
    return best / 2


def gh_map_pairs(X, Y, basepoints=None) -> float:
    """Half the least max(dis f, dis g, codis) over every map pair, no pruning."""
    dx, dy = as_matrix(X), as_matrix(Y)
    nx, ny = len(dx), len(dy)
    best = INF
    for f in itertools.product(range(ny), repeat=nx):
        if basepoints and f[basepoints[0]] != basepoints[1]:
            continue
        fa = np.array(f)
        dis_f = np.abs(dx - dy[np.ix_(fa, fa)]).max()
        if dis_f >= best:
            continue
        for g in itertools.product(range(nx), repeat=ny):
            if basepoints and g[basepoints[1]] != basepoints[0]:
                continue
            ga = np.array(g)
            val = max(dis_f, np.abs(dx[np.ix_(ga, ga)] - dy).max(), np.abs(dx[:, ga] - dy[fa, :]).max())
            best = min(best, float(val))
    return best / 2


def minimax_ultrametric(X) -> np.ndarray:
    """Floyd-Warshall with (min, max) in place of (min, +)."""
    U = as_matrix(X).copy()
    n = len(U)
    for k in range(n):
        U = np.minimum(U, np.maximum(U[:, k:k + 1], U[k:k + 1, :]))
    return U


def bottleneck_exhaustive(D1, D2) -> float:
    """Try every partial matching; unmatched points pay half their persistence."""
    A = [tuple(map(float, p)) for p in getattr(D1, "points", D1)]
    B = [tuple(map(float, p)) for p in getattr(D2, "points", D2)]

    def pair_cost(p, q):
        if (p[1] == INF) != (q[1] == INF):
            return INF
        if p[1] == INF:
            return abs(p[0] - q[0])
        return max(abs(p[0] - q[0]), abs(p[1] - q[1]))

    def diag_cost(p):
        return INF if p[1] == INF else (p[1] - p[0]) / 2

    best = INF
    slots = list(range(len(B))) + [None] * len(A)
    for perm in set(itertools.permutations(slots, len(A))):
        cost = 0.0
        used = set()
        for p, j in zip(A, perm):
            if j is None:
                cost = max(cost, diag_cost(p))
            else:
                used.add(j)
                cost = max(cost, pair_cost(p, B[j]))
        for j, q in enumerate(B):
            if j not in used:
                cost = max(cost, diag_cost(q))
        best = min(best, cost)
    return best


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x).limit_denominator(10**6)


@functools.lru_cache(maxsize=8)
def _upper(n: int) -> np.ndarray:
    return np.triu(np.ones((n, n), dtype=bool))


def interleaving_feasible(in_p: np.ndarray, in_q: np.ndarray, shift: int, ok_pq: bool, ok_qp: bool) -> bool:
    """Search for an interleaving with a shift of ``shift`` grid steps.

    ``in_p[k]``/``in_q[k]`` say whether grid time k lies in each interval.
    Each morphism is either zero or one fixed nonzero homomorphism
    (naturality on an interval overlap forces a single one); naturality and
    the two triangle identities are checked at every pair of grid times.
    """
    n = len(in_p) - 2 * shift
    P, Q = in_p[:n], in_q[:n]
    P1, Q1 = in_p[shift:shift + n], in_q[shift:shift + n]
    P2, Q2 = in_p[2 * shift:2 * shift + n], in_q[2 * shift:2 * shift + n]
    later = _upper(n)  # t <= t2

    def natural(src, dst_shift):
        # src(t -> t2) then map, against map then dst(t+d -> t2+d), both ends nonzero
        relevant = later & src[:, None] & dst_shift[None, :]
        return not np.any(relevant & (src[None, :] != dst_shift[:, None]))

    for f_on, g_on in itertools.product((False, True), repeat=2):
        if f_on and not natural(P, Q1):
            continue
        if g_on and not natural(Q, P1):
            continue
        both = f_on and g_on
        if np.any(P & P2 & ~(both & ok_pq & Q1)):
            continue
        if np.any(Q & Q2 & ~(both & ok_qp & P1)):
            continue
        return True
    return False


def interleaving_grid(P: IntervalPersistentGroup, Q: IntervalPersistentGroup,
                      step=Fraction(1, 16), tstep=Fraction(1, 32)) -> Fraction:
    """Least grid shift admitting an interleaving; membership is decided with exact rationals."""
    ends = [_frac(x) for I in (P, Q) if not I.empty for x in (I.a, I.b)]
    if not ends:
        return Fraction(0)
    lo, hi = min(ends), max(ends)
    # zero maps interleave once the shift reaches half of the longer bar
    horizon = max(_frac(I.length) for I in (P, Q)) / 2 + step
    ratio = step / tstep
    if ratio.denominator != 1:
        raise ValueError("step must be a multiple of tstep")
    count = int((hi - lo + 4 * horizon) / tstep) + 1
    times = [lo - 2 * horizon + k * tstep for k in range(count)]
    in_p = np.array([P.contains(t) for t in times])
    in_q = np.array([Q.contains(t) for t in times])
    ok_pq = retracts_through(P.group, Q.group)
    ok_qp = retracts_through(Q.group, P.group)
    k = 0
    while k * step <= horizon:
        if interleaving_feasible(in_p, in_q, k * ratio.numerator, ok_pq, ok_qp):
            return k * step
        k += 1
    return horizon


def betti1_by_rank(X, eps: float) -> int:
    """dim ker d1 - rank d2 with floating-point ranks (small complexes only)."""
    from .homology import chain_complex
    from .vietoris_rips import vr_skeleton

    C = chain_complex(vr_skeleton(X, eps))
    d1, d2 = C.dense()
    r1 = np.linalg.matrix_rank(d1) if d1.size else 0
    r2 = np.linalg.matrix_rank(d2) if d2.size else 0
    return len(C.edges) - r1 - r2
