"""Bottleneck and interleaving distances; dendrograms of ultrametrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .groups import GroupClass
from .homology import INF, PersistenceDiagram
from .metric import API_TOL

# -- bottleneck ----------------------------------------------------------------


def _as_points(D) -> list[tuple[float, float]]:
    pts = D.points if isinstance(D, PersistenceDiagram) else D
    return [(float(b), float(d)) for b, d in pts]


def _linf(p, q) -> float:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _perfect_matching(n: int, edges: list[tuple[int, int]]) -> bool:
    if n == 0:
        return True
    rows, cols = zip(*edges) if edges else ((), ())
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def _finite_bottleneck(A: list, B: list) -> float:
    if not A and not B:
        return 0.0
    na, nb = len(A), len(B)
    half = [(p[1] - p[0]) / 2 for p in A] + [(q[1] - q[0]) / 2 for q in B]
    cross = [_linf(p, q) for p in A for q in B]
    cands = []
    for v in sorted(half + cross + [0.0]):
        if not cands or v > cands[-1] + API_TOL:
            cands.append(v)

    def ok(delta: float) -> bool:
        # left: A then a diagonal slot per B point; right: B then a diagonal slot per A point
        t = delta + API_TOL
        edges = []
        for i, p in enumerate(A):
            for j, q in enumerate(B):
                if _linf(p, q) <= t:
                    edges.append((i, j))
            if (p[1] - p[0]) / 2 <= t:
                edges.append((i, nb + i))
        for j, q in enumerate(B):
            if (q[1] - q[0]) / 2 <= t:
                edges.append((na + j, j))
            for i in range(na):
                edges.append((na + j, nb + i))
        return _perfect_matching(na + nb, edges)

    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


def bottleneck(D1, D2) -> float:
    """Exact bottleneck distance. Points at infinity only match each other."""
    A, B = _as_points(D1), _as_points(D2)
    ainf = sorted(p[0] for p in A if p[1] == INF)
    binf = sorted(p[0] for p in B if p[1] == INF)
    if len(ainf) != len(binf):
        return INF
    # sorted pairing is optimal for the bottleneck cost on a line
    essential = max((abs(a - b) for a, b in zip(ainf, binf)), default=0.0)
    fin = _finite_bottleneck([p for p in A if p[1] != INF], [q for q in B if q[1] != INF])
    return max(essential, fin)


# -- interval persistent groups ---------------------------------------------------


@dataclass(frozen=True)
class IntervalPersistentGroup:
    """A group G on an interval from ``a`` to ``b``, the trivial group elsewhere."""

    group: GroupClass
    a: float
    b: float
    open_left: bool = False
    open_right: bool = True

    def __post_init__(self):
        if self.b < self.a:
            raise ValueError("interval endpoints out of order")
        if self.group.tag == "Unclassified":
            raise ValueError("interleaving is only defined for Trivial, Free and FreeAbelian groups")
        if self.group.tag == "Trivial" or self.a == self.b:
            object.__setattr__(self, "group", GroupClass.make("Trivial"))
            object.__setattr__(self, "a", 0.0)
            object.__setattr__(self, "b", 0.0)

    @property
    def empty(self) -> bool:
        return self.group.tag == "Trivial"

    @property
    def length(self) -> float:
        return self.b - self.a

    def contains(self, t) -> bool:
        if self.empty:
            return False
        left = t > self.a if self.open_left else t >= self.a
        right = t < self.b if self.open_right else t <= self.b
        return left and right

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "interval": [self.a, self.b],
                "open_left": self.open_left, "open_right": self.open_right}

    @classmethod
    def from_json(cls, data: dict) -> "IntervalPersistentGroup":
        a, b = data["interval"]
        return cls(GroupClass.from_json(data["group"]), float(a), float(b),
                   bool(data.get("open_left", False)), bool(data.get("open_right", True)))


def retracts_through(G: GroupClass, H: GroupClass) -> bool:
    """Whether id_G factors as G -> H -> G."""
    for g in (G, H):
        if g.tag == "Unclassified":
            raise ValueError(f"no retract rule for {g}")
    if G.tag == "Trivial":
        return True
    if H.tag == "Trivial":
        return False
    if G.tag == H.tag:
        return G.rank <= H.rank
    if G.tag == "Free" and H.tag == "FreeAbelian":
        return G.rank <= 1 <= H.rank
    return False


def interleaving_interval_groups(P: IntervalPersistentGroup, Q: IntervalPersistentGroup) -> float:
    """Interleaving distance between two interval persistent groups."""
    if P.empty and Q.empty:
        return 0.0
    pq = retracts_through(P.group, Q.group)
    qp = retracts_through(Q.group, P.group)
    a, b, c, d = P.a, P.b, Q.a, Q.b
    if pq and qp:
        if b == INF or d == INF:
            return abs(a - c) if b == d else INF
        return min(max(abs(a - c), abs(b - d)), max((b - a) / 2, (d - c) / 2))
    if pq or qp:
        if not pq:  # make P the side that retracts
            a, b, c, d = c, d, a, b
        if d == INF:
            return INF
        return max((d - c) / 2, min((b - a) / 2, max(c - a, b - d, 0.0)))
    return max((b - a) / 2, (d - c) / 2)


def interval_group_of(PP) -> IntervalPersistentGroup | None:
    """Read a persistent pi_1 as an interval group, or None if it is not one.

    It is one when the nontrivial scales are consecutive, share one class,
    and every map between them is certified bijective.
    """
    from .vietoris_rips import Verdict, detect_critical_values

    nontrivial = [i for i, g in enumerate(PP.classes()) if g.tag != "Trivial"]
    if not nontrivial:
        return IntervalPersistentGroup(GroupClass.make("Trivial"), 0.0, 0.0)
    first, last = nontrivial[0], nontrivial[-1]
    if nontrivial != list(range(first, last + 1)):
        return None
    groups = {PP.levels[i].group for i in nontrivial}
    if len(groups) != 1 or not next(iter(groups)).classified:
        return None
    verdicts = dict(detect_critical_values(PP))
    if any(verdicts[PP.scales[i]] is not Verdict.NONCRITICAL for i in range(first + 1, last + 1)):
        return None
    end = PP.scales[last + 1] if last + 1 < len(PP.scales) else INF
    return IntervalPersistentGroup(PP.levels[first].group, PP.scales[first], end)


# -- dendrograms ----------------------------------------------------------------


class NotUltrametric(ValueError):
    pass


def check_ultrametric(U) -> np.ndarray:
    U = np.asarray(U, dtype=float)
    n = len(U)
    if U.shape != (n, n) or np.abs(U - U.T).max(initial=0) > API_TOL or np.abs(np.diag(U)).max(initial=0) > API_TOL:
        raise NotUltrametric("matrix must be symmetric with zero diagonal")
    if (U < -API_TOL).any():
        raise NotUltrametric("negative entry")
    bound = np.maximum(U[:, :, None], U[None, :, :]).min(axis=1) if n else U
    if n and (U > bound + API_TOL).any():
        i, j = map(int, np.argwhere(U > bound + API_TOL)[0])
        raise NotUltrametric(f"strong triangle inequality fails for pair ({i}, {j})")
    return U


@dataclass(frozen=True)
class Dendrogram:
    """Partitions of {0..n-1} at each scale where the clustering changes."""

    n: int
    scales: tuple[float, ...]
    blocks: tuple[tuple[tuple[int, ...], ...], ...]

    def partition_at(self, t: float) -> tuple[tuple[int, ...], ...]:
        idx = int(np.searchsorted(np.asarray(self.scales), t + API_TOL, side="right")) - 1
        return self.blocks[max(idx, 0)]

    def ultrametric(self) -> np.ndarray:
        U = np.full((self.n, self.n), np.nan)
        for s, part in zip(self.scales, self.blocks):
            for blk in part:
                for i in blk:
                    for j in blk:
                        if np.isnan(U[i, j]):
                            U[i, j] = s
        return U

    def barcode(self) -> PersistenceDiagram:
        """One (0, t) bar per merge at t, one (0, inf) bar per final block."""
        pts = []
        for prev, cur, s in zip(self.blocks, self.blocks[1:], self.scales[1:]):
            pts += [(0.0, s)] * (len(prev) - len(cur))
        pts += [(0.0, INF)] * len(self.blocks[-1])
        return PersistenceDiagram(tuple(pts))

    def to_json(self) -> dict:
        return {"scales": list(self.scales), "blocks": [[list(b) for b in p] for p in self.blocks]}


def dendrogram_from_ultrametric(U) -> Dendrogram:
    U = check_ultrametric(U)
    n = len(U)
    scales = sorted({0.0} | {float(v) for v in np.round(U[np.triu_indices(n, 1)], 12)})
    blocks = []
    for s in scales:
        seen: set[int] = set()
        part = []
        for i in range(n):
            if i in seen:
                continue
            blk = tuple(int(j) for j in np.flatnonzero(U[i] <= s + API_TOL))
            seen.update(blk)
            part.append(blk)
        blocks.append(tuple(part))
    return Dendrogram(n, tuple(scales), tuple(blocks))


def dendrogram_module_interleaving(A: Dendrogram, B: Dendrogram) -> float:
    return bottleneck(A.barcode(), B.barcode())

