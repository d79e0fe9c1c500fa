"""Finite metric spaces: validation, standard families, products and wedges."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components, shortest_path

TOL = 1e-12
API_TOL = 1e-9


class MetricError(ValueError):
    """Base class for metric-axiom failures."""


class NotSquare(MetricError):
    pass


class AsymmetricMatrix(MetricError):
    def __init__(self, i: int, j: int):
        super().__init__(f"d[{i}][{j}] != d[{j}][{i}]")
        self.pair = (i, j)


class NegativeEntry(MetricError):
    def __init__(self, i: int, j: int):
        super().__init__(f"d[{i}][{j}] < 0")
        self.pair = (i, j)


class NonzeroDiagonal(MetricError):
    def __init__(self, i: int):
        super().__init__(f"d[{i}][{i}] != 0")
        self.index = i


class TriangleViolation(MetricError):
    """d[i][j] > d[i][k] + d[k][j]; the triple is stored as (i, k, j)."""

    def __init__(self, i: int, k: int, j: int):
        super().__init__(f"triangle inequality fails: d[{i}][{j}] > d[{i}][{k}] + d[{k}][{j}]")
        self.triple = (i, k, j)


def _frozen(matrix) -> np.ndarray:
    arr = np.array(matrix, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labelled points with a distance matrix. Indices are the canonical identity."""

    labels: tuple[str, ...]
    dist: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        object.__setattr__(self, "dist", _frozen(self.dist))
        if self.dist.shape != (len(self.labels), len(self.labels)):
            raise NotSquare(f"distance matrix shape {self.dist.shape} does not match {len(self.labels)} labels")

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.dist, other.dist)

    def __hash__(self) -> int:
        return hash((self.labels, self.dist.tobytes()))

    @property
    def size(self) -> int:
        return len(self.labels)

    def pointed(self, basepoint: int = 0) -> "PointedMetricSpace":
        return PointedMetricSpace(self, basepoint)

    def scaled(self, factor: float) -> "FiniteMetricSpace":
        return FiniteMetricSpace(self.labels, self.dist * factor)


@dataclass(frozen=True)
class PointedMetricSpace:
    space: FiniteMetricSpace
    basepoint: int = 0

    def __post_init__(self):
        if not 0 <= self.basepoint < len(self.space):
            raise IndexError(f"basepoint {self.basepoint} out of range for {len(self.space)} points")

    def __len__(self) -> int:
        return len(self.space)

    @property
    def dist(self) -> np.ndarray:
        return self.space.dist

    @property
    def labels(self) -> tuple[str, ...]:
        return self.space.labels


def as_pointed(X, basepoint: int | None = None) -> PointedMetricSpace:
    """Coerce a space to a pointed one (basepoint 0 unless told otherwise)."""
    if isinstance(X, PointedMetricSpace):
        if basepoint is None or basepoint == X.basepoint:
            return X
        return PointedMetricSpace(X.space, basepoint)
    return PointedMetricSpace(as_space(X), 0 if basepoint is None else basepoint)


def as_space(X) -> FiniteMetricSpace:
    if isinstance(X, PointedMetricSpace):
        return X.space
    if isinstance(X, FiniteMetricSpace):
        return X
    return validate(X)


def as_matrix(X) -> np.ndarray:
    if isinstance(X, (FiniteMetricSpace, PointedMetricSpace)):
        return X.dist
    return np.asarray(X, dtype=float)


def _tolerance(d: np.ndarray) -> float:
    scale = float(np.max(np.abs(d))) if d.size else 0.0
    return TOL * max(1.0, scale)


def validate(matrix, labels: Sequence[str] | None = None) -> FiniteMetricSpace:
    """Check the metric axioms and wrap the matrix as a space.

    Raises the first violation found: shape, diagonal, sign, symmetry, then
    the triangle inequality (the offending triple is attached to the error).
    """
    d = np.array(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {d.shape}")
    n = d.shape[0]
    tol = _tolerance(d)
    for i in range(n):
        if abs(d[i, i]) > tol:
            raise NonzeroDiagonal(i)
    neg = np.argwhere(d < -tol)
    if len(neg):
        raise NegativeEntry(*map(int, neg[0]))
    asym = np.argwhere(np.abs(d - d.T) > tol)
    if len(asym):
        raise AsymmetricMatrix(*map(int, asym[0]))
    # via[i, k, j] = d[i, k] + d[k, j]
    if n:
        via = d[:, :, None] + d[None, :, :]
        bad = np.argwhere(d[:, None, :] > via + tol)
        if len(bad):
            i, k, j = map(int, bad[0])
            raise TriangleViolation(i, k, j)
    if labels is None:
        labels = [str(i) for i in range(n)]
    return FiniteMetricSpace(tuple(labels), d)


def cycle_graph(m: int) -> FiniteMetricSpace:
    """Vertices of the m-cycle with the shortest-path metric."""
    if m < 3:
        raise ValueError("cycle_graph needs m >= 3")
    idx = np.arange(m)
    gap = np.abs(idx[:, None] - idx[None, :])
    return FiniteMetricSpace(tuple(map(str, idx)), np.minimum(gap, m - gap).astype(float))


def star_graph(n: int) -> PointedMetricSpace:
    """Star with n vertices, centre 0 as basepoint."""
    if n < 3:
        raise ValueError("star_graph needs n >= 3")
    d = np.full((n, n), 2.0)
    d[0, :] = d[:, 0] = 1.0
    np.fill_diagonal(d, 0.0)
    return PointedMetricSpace(FiniteMetricSpace(tuple(map(str, range(n))), d), 0)


def circle_sample(n: int) -> FiniteMetricSpace:
    """n equally spaced points on the unit circle with arc-length distance."""
    if n < 3:
        raise ValueError("circle_sample needs n >= 3")
    return cycle_graph(n).scaled(2 * np.pi / n)


def uniform_space(n: int) -> FiniteMetricSpace:
    if n < 1:
        raise ValueError("uniform_space needs n >= 1")
    d = np.ones((n, n)) - np.eye(n)
    return FiniteMetricSpace(tuple(map(str, range(n))), d)


def _prufer_edges(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(u for u in range(n) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = [x for x in range(n) if degree[x] == 1]
    edges.append((u, w))
    return edges


def random_tree_metric(n: int, seed: int = 0, weighted: bool = False) -> FiniteMetricSpace:
    """Path metric of a uniformly random labelled tree (via a Prüfer sequence).

    Edges have unit length unless ``weighted``, in which case lengths are
    drawn from {1/2, 1, 3/2, 2}.
    """
    if n < 1:
        raise ValueError("random_tree_metric needs n >= 1")
    rng = np.random.default_rng(seed)
    if n == 1:
        return FiniteMetricSpace(("0",), np.zeros((1, 1)))
    seq = rng.integers(0, n, size=n - 2).tolist() if n > 2 else []
    w = np.zeros((n, n))
    for u, v in _prufer_edges(seq, n):
        w[u, v] = w[v, u] = rng.integers(1, 5) / 2 if weighted else 1.0
    d = shortest_path(w, directed=False)
    return FiniteMetricSpace(tuple(map(str, range(n))), d)


def random_metric(n: int, seed: int = 0, kind: str = "graph") -> FiniteMetricSpace:
    """Random small metric spaces for property batteries.

    ``graph``: path metric of a random connected graph with weights in {1, 2, 3}.
    ``grid``: distinct points of a 4x4 integer grid under the Euclidean metric.
    """
    rng = np.random.default_rng(seed)
    labels = tuple(map(str, range(n)))
    if kind == "grid":
        cells = rng.choice(16, size=n, replace=False)
        pts = np.stack([cells // 4, cells % 4], axis=1).astype(float)
        d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
        return FiniteMetricSpace(labels, d)
    if kind != "graph":
        raise ValueError(f"unknown kind {kind!r}")
    w = np.zeros((n, n))
    order = rng.permutation(n)
    for a in range(1, n):
        u, v = order[a], order[rng.integers(0, a)]
        w[u, v] = w[v, u] = rng.integers(1, 4)
    for u, v in itertools.combinations(range(n), 2):
        if w[u, v] == 0 and rng.random() < 0.4:
            w[u, v] = w[v, u] = rng.integers(1, 4)
    return FiniteMetricSpace(labels, shortest_path(w, directed=False))


def check_four_point(X) -> bool:
    """Four-point condition: of the three pair sums, the largest two agree."""
    d = as_matrix(X)
    tol = _tolerance(d)
    for x, y, z, w in itertools.combinations(range(len(d)), 4):
        sums = sorted((d[x, y] + d[z, w], d[x, z] + d[y, w], d[x, w] + d[y, z]))
        if sums[2] - sums[1] > tol:
            return False
    return True


def linf_product(X, Y) -> FiniteMetricSpace:
    """Cartesian product with the max metric; point (i, j) has index i*|Y| + j.

    If both factors are pointed the result is pointed at the pair of basepoints.
    """
    A, B = as_space(X), as_space(Y)
    d = np.maximum(A.dist[:, None, :, None], B.dist[None, :, None, :])
    n = len(A) * len(B)
    labels = tuple(f"({a},{b})" for a in A.labels for b in B.labels)
    prod = FiniteMetricSpace(labels, d.reshape(n, n))
    if isinstance(X, PointedMetricSpace) and isinstance(Y, PointedMetricSpace):
        return PointedMetricSpace(prod, X.basepoint * len(B) + Y.basepoint)
    return prod


def wedge_sum(X, Y) -> PointedMetricSpace:
    """Glue two pointed spaces at their basepoints.

    The glued point comes first and is the basepoint, then the remaining points
    of X, then those of Y. Cross distances pass through the glued point.
    """
    X, Y = as_pointed(X), as_pointed(Y)
    xs = [i for i in range(len(X)) if i != X.basepoint]
    ys = [j for j in range(len(Y)) if j != Y.basepoint]
    rx = X.dist[X.basepoint]
    ry = Y.dist[Y.basepoint]
    n = 1 + len(xs) + len(ys)
    d = np.zeros((n, n))
    xi = np.array([X.basepoint] + xs)
    d[: 1 + len(xs), : 1 + len(xs)] = X.dist[np.ix_(xi, xi)]
    yi = np.array(ys, dtype=int)
    d[1 + len(xs):, 1 + len(xs):] = Y.dist[np.ix_(yi, yi)]
    d[1 + len(xs):, 0] = d[0, 1 + len(xs):] = ry[yi]
    cross = rx[xs][:, None] + ry[yi][None, :]
    d[1:1 + len(xs), 1 + len(xs):] = cross
    d[1 + len(xs):, 1:1 + len(xs)] = cross.T
    labels = ("*",) + tuple(f"{X.labels[i]}_X" for i in xs) + tuple(f"{Y.labels[j]}_Y" for j in ys)
    return PointedMetricSpace(FiniteMetricSpace(labels, d), 0)


def bouquet(spaces: Sequence) -> PointedMetricSpace:
    """Iterated wedge sum."""
    return reduce(wedge_sum, [as_pointed(s) for s in spaces])


def diam(X) -> float:
    d = as_matrix(X)
    return float(d.max()) if d.size else 0.0


def ecc(X, i: int) -> float:
    return float(as_matrix(X)[i].max())


def rad(X) -> float:
    d = as_matrix(X)
    return float(d.max(axis=1).min())


def has_antipodes(X) -> bool:
    """Every point realises the diameter with some other point."""
    d = as_matrix(X)
    return bool(np.all(d.max(axis=1) >= diam(d) - API_TOL))


def is_eps_connected(X, eps: float) -> bool:
    d = as_matrix(X)
    if len(d) <= 1:
        return True
    ncomp, _ = connected_components(d <= eps + API_TOL, directed=False)
    return ncomp == 1


def distinct_distances(X, include_zero: bool = False) -> list[float]:
    """Sorted distinct off-diagonal distances, merged at tolerance 1e-9."""
    d = as_matrix(X)
    n = len(d)
    vals = sorted(float(d[i, j]) for i in range(n) for j in range(i + 1, n))
    out: list[float] = [0.0] if include_zero else []
    for v in vals:
        if not out or v > out[-1] + API_TOL:
            out.append(v)
    return out
