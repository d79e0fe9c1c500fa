"""Homology of Rips 2-skeletons, persistence diagrams in degrees 0 and 1, and mu0."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy.cluster.hierarchy import cophenet, linkage
from scipy.spatial.distance import squareform

from .metric import API_TOL, as_matrix, as_pointed
from .snf import AbelianInvariants, cokernel_invariants, invariant_factors
from .vietoris_rips import VRSkeleton2, level_for, vr_skeleton

INF = float("inf")


@dataclass(frozen=True)
class ChainComplex2:
    """Sparse integer boundary maps; rows index the higher-dimensional simplex."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]
    boundary1: tuple[dict[int, int], ...]  # edge -> {vertex position: +-1}
    boundary2: tuple[dict[int, int], ...]  # triangle -> {edge position: +-1}

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        """(d1, d2) as column-convention integer matrices: d1 is V x E, d2 is E x T."""
        d1 = np.zeros((len(self.vertices), len(self.edges)), dtype=np.int64)
        for j, col in enumerate(self.boundary1):
            for i, v in col.items():
                d1[i, j] = v
        d2 = np.zeros((len(self.edges), len(self.triangles)), dtype=np.int64)
        for j, col in enumerate(self.boundary2):
            for i, v in col.items():
                d2[i, j] = v
        return d1, d2


def chain_complex(K: VRSkeleton2) -> ChainComplex2:
    vpos = {v: i for i, v in enumerate(K.vertices)}
    epos = {e: i for i, e in enumerate(K.edges)}
    b1 = tuple({vpos[u]: -1, vpos[v]: 1} for u, v in K.edges)
    b2 = tuple({epos[(b, c)]: 1, epos[(a, c)]: -1, epos[(a, b)]: 1} for a, b, c in K.triangles)
    return ChainComplex2(K.vertices, K.edges, K.triangles, b1, b2)


def h1_integer(K: VRSkeleton2) -> AbelianInvariants:
    """ker d1 / im d2 over the integers."""
    C = chain_complex(K)
    rank_d1 = len(invariant_factors(list(C.boundary1), len(C.vertices)))
    cycles = len(C.edges) - rank_d1
    # ker d1 is a direct summand of C1, so H1 = Z^(cycles - rank d2) + torsion of coker d2
    factors = invariant_factors(list(C.boundary2), len(C.edges))
    return AbelianInvariants(cycles - len(factors), tuple(f for f in factors if f > 1))


def hurewicz_check(X, eps: float, basepoint: int | None = None) -> bool:
    """Abelianised edge-path group equals H1 of the basepoint's component."""
    Xp = as_pointed(X, basepoint)
    lv = level_for(Xp, eps)
    ab = cokernel_invariants(lv.presentation.relation_matrix(), lv.presentation.ngens)
    K = vr_skeleton(Xp.space, eps).restrict(lv.data.component)
    return ab == h1_integer(K)


# -- degree 0 ------------------------------------------------------------


def mu0_ultrametric(X) -> np.ndarray:
    """Single-linkage (minimax chain) ultrametric."""
    d = as_matrix(X)
    n = len(d)
    if n < 2:
        return np.zeros((n, n))
    return squareform(cophenet(linkage(squareform(d, checks=False), method="single")))


def _merge_heights(d: np.ndarray) -> list[float]:
    if len(d) < 2:
        return []
    return sorted(float(h) for h in linkage(squareform(d, checks=False), method="single")[:, 2])


@dataclass(frozen=True)
class PersistenceDiagram:
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple(sorted((float(b), float(d)) for b, d in self.points))
        for b, d in pts:
            if d < b - API_TOL:
                raise ValueError(f"point ({b}, {d}) dies before it is born")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def finite(self) -> list[tuple[float, float]]:
        return [p for p in self.points if p[1] != INF]

    def infinite(self) -> list[tuple[float, float]]:
        return [p for p in self.points if p[1] == INF]

    def to_csv(self) -> str:
        lines = ["birth,death"]
        for b, d in self.points:
            lines.append(f"{_fmt(b)},{'inf' if d == INF else _fmt(d)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "PersistenceDiagram":
        pts = []
        for line in text.strip().splitlines():
            line = line.strip()
            if not line or line.lower().startswith("birth"):
                continue
            b, d = line.split(",")
            pts.append((float(b), float(d)))
        return cls(tuple(pts))


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def ph0_diagram(X) -> PersistenceDiagram:
    d = as_matrix(X)
    pts = [(0.0, h) for h in _merge_heights(d)]
    if len(d):
        pts.append((0.0, INF))
    return PersistenceDiagram(tuple(pts))


# -- filtration and column reduction ---------------------------------------


def rips_filtration(X) -> list[tuple[float, int, tuple[int, ...]]]:
    """Simplices of the full 2-skeleton ordered by (value, dimension, vertices)."""
    d = as_matrix(X)
    n = len(d)
    simplices = [(0.0, 0, (i,)) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            simplices.append((float(d[i, j]), 1, (i, j)))
            for k in range(j + 1, n):
                simplices.append((float(max(d[i, j], d[i, k], d[j, k])), 2, (i, j, k)))
    simplices.sort()
    return simplices


def _faces(simplex: tuple[int, ...]) -> Iterable[tuple[tuple[int, ...], int]]:
    for k in range(len(simplex)):
        yield simplex[:k] + simplex[k + 1:], (-1) ** k


def persistence_pairs(X) -> dict[int, list[tuple[float, float]]]:
    """Diagrams in degrees 0 and 1 by standard column reduction over Q."""
    filt = rips_filtration(X)
    index = {s: k for k, (_, _, s) in enumerate(filt)}
    low_owner: dict[int, int] = {}
    reduced: dict[int, dict[int, Fraction]] = {}
    killed: set[int] = set()
    pairs: dict[int, list[tuple[float, float]]] = {0: [], 1: []}
    for j, (val, dim, s) in enumerate(filt):
        if dim == 0:
            continue
        col = {index[f]: Fraction(sign) for f, sign in _faces(s)}
        while col:
            low = max(col)
            if low not in low_owner:
                break
            other = reduced[low_owner[low]]
            factor = col[low] / other[low]
            for r, v in other.items():
                nv = col.get(r, 0) - factor * v
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
        if col:
            low = max(col)
            low_owner[low] = j
            reduced[j] = col
            killed.add(low)
            birth = filt[low][0]
            if val > birth + API_TOL:
                pairs[dim - 1].append((birth, val))
    for k, (val, dim, s) in enumerate(filt):
        if k in killed or k in reduced:
            continue
        if dim == 0:
            pairs[0].append((val, INF))
        elif dim == 1:
            pairs[1].append((val, INF))
    return pairs


def ph1_diagram(X) -> PersistenceDiagram:
    return PersistenceDiagram(tuple(persistence_pairs(X)[1]))
