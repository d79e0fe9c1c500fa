"""Discrete loops: basic moves, homotopy tests, births, mu1 and the loop-class space."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .groups import WordVerdict, free_reduce, inverse, normal_form, word_problem
from .metric import API_TOL, PointedMetricSpace, as_pointed, distinct_distances
from .vietoris_rips import level_for

DEFAULT_MAX_STATES = 10**6


@dataclass(frozen=True, order=True)
class DiscreteLoop:
    """A based loop as a point sequence. Consecutive repeats are collapsed on construction."""

    points: tuple[int, ...]

    def __post_init__(self):
        pts = tuple(int(p) for p in self.points)
        if not pts:
            raise ValueError("a loop needs at least one point")
        if pts[0] != pts[-1]:
            raise ValueError("a loop must start and end at the basepoint")
        collapsed = [pts[0]]
        for p in pts[1:]:
            if p != collapsed[-1]:
                collapsed.append(p)
        object.__setattr__(self, "points", tuple(collapsed))

    @classmethod
    def constant(cls, basepoint: int = 0) -> "DiscreteLoop":
        return cls((basepoint,))

    @property
    def basepoint(self) -> int:
        return self.points[0]

    @property
    def size(self) -> int:
        return len(self.points) - 1

    def __mul__(self, other: "DiscreteLoop") -> "DiscreteLoop":
        if other.basepoint != self.basepoint:
            raise ValueError("loops based at different points")
        return DiscreteLoop(self.points + other.points[1:])

    def reverse(self) -> "DiscreteLoop":
        return DiscreteLoop(self.points[::-1])

    def __pow__(self, k: int) -> "DiscreteLoop":
        base = self if k >= 0 else self.reverse()
        out = DiscreteLoop.constant(self.basepoint)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __str__(self) -> str:
        return ".".join(map(str, self.points))


def cycle_loop(n: int, r: int, basepoint: int = 0) -> DiscreteLoop:
    """0, r, r+1, ..., n-1, 0 in the n-cycle (r = 0 gives the constant loop)."""
    if r == 0:
        return DiscreteLoop.constant(basepoint)
    return DiscreteLoop((0,) + tuple(range(r, n)) + (0,))


def _dist(X) -> np.ndarray:
    return X.dist


def birth(loop: DiscreteLoop, X) -> float:
    d = _dist(X)
    p = loop.points
    return max((float(d[a, b]) for a, b in zip(p, p[1:])), default=0.0)


def is_eps_loop(loop: DiscreteLoop, eps: float, X) -> bool:
    return birth(loop, X) <= eps + API_TOL


def _check(loop: DiscreteLoop, eps: float, X) -> None:
    if not is_eps_loop(loop, eps, X):
        raise ValueError(f"{loop} is not an {eps}-loop")


def _moves(points: tuple[int, ...], close: np.ndarray, max_size: int | None = None) -> Iterator[tuple[int, ...]]:
    """Normalised neighbours under one insertion or removal of an interior point."""
    w = points if len(points) > 1 else points * 2
    n = len(close)
    for i in range(1, len(w) - 1):
        if close[w[i - 1], w[i + 1]]:
            yield DiscreteLoop(w[:i] + w[i + 1:]).points
    if max_size is not None and len(points) - 1 >= max_size:
        return
    for i in range(len(w) - 1):
        a, b = w[i], w[i + 1]
        for p in range(n):
            if p != a and p != b and close[a, p] and close[p, b]:
                yield w[:i + 1] + (p,) + w[i + 1:]
    # inverse of a removal whose two neighbours coincide: a -> a p a
    if max_size is not None and len(points) - 1 + 2 > max_size:
        return
    for i in range(len(w) - 1):
        a = w[i]
        for p in range(n):
            if p != a and close[a, p]:
                yield DiscreteLoop(w[:i + 1] + (p, a) + w[i + 1:]).points


def basic_moves(loop: DiscreteLoop, eps: float, X) -> list[DiscreteLoop]:
    """All loops one basic move away (repeats collapsed, the input excluded).

    Removing a point whose neighbours coincide also merges those neighbours,
    so the inverse move a -> a p a is included to keep the relation symmetric.
    """
    _check(loop, eps, X)
    close = _dist(X) <= eps + API_TOL
    seen: dict[tuple[int, ...], None] = {}
    for pts in _moves(loop.points, close):
        if pts != loop.points:
            seen.setdefault(pts, None)
    return [DiscreteLoop(p) for p in seen]


class Homotopy(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class SearchResult:
    verdict: Homotopy
    states: int
    max_size: int


def bruteforce_search(alpha: DiscreteLoop, beta: DiscreteLoop, eps: float, X,
                      max_size: int | None = None, max_states: int = DEFAULT_MAX_STATES) -> SearchResult:
    """Breadth-first search over eps-loops of size <= max_size.

    A NO verdict means the component of ``alpha`` in the capped move graph was
    exhausted without meeting ``beta``.
    """
    _check(alpha, eps, X)
    _check(beta, eps, X)
    if max_size is None:
        max_size = max(alpha.size, beta.size) + len(X)
    if alpha == beta:
        return SearchResult(Homotopy.YES, 1, max_size)
    close = _dist(X) <= eps + API_TOL
    seen = {alpha.points}
    queue = deque([alpha.points])
    while queue:
        cur = queue.popleft()
        for nxt in _moves(cur, close, max_size):
            if nxt in seen or len(nxt) - 1 > max_size:
                continue
            if nxt == beta.points:
                return SearchResult(Homotopy.YES, len(seen) + 1, max_size)
            if len(seen) >= max_states:
                return SearchResult(Homotopy.UNKNOWN, len(seen), max_size)
            seen.add(nxt)
            queue.append(nxt)
    return SearchResult(Homotopy.NO, len(seen), max_size)


def homotopic_bruteforce(alpha: DiscreteLoop, beta: DiscreteLoop, eps: float, X,
                         max_size: int | None = None, max_states: int = DEFAULT_MAX_STATES) -> Homotopy:
    return bruteforce_search(alpha, beta, eps, X, max_size, max_states).verdict


def all_eps_loops(X: PointedMetricSpace, eps: float, max_size: int) -> list[tuple[int, ...]]:
    """Every collapsed eps-loop at the basepoint with size <= max_size."""
    close = X.dist <= eps + API_TOL
    n = len(X)
    x0 = X.basepoint
    # hop distance back to the basepoint prunes walks that cannot close in time
    hops = {x0: 0}
    frontier = [x0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in range(n):
                if close[u, v] and v not in hops:
                    hops[v] = hops[u] + 1
                    nxt.append(v)
        frontier = nxt
    out = [(x0,)]
    stack = [(x0,)]
    while stack:
        path = stack.pop()
        left = max_size - (len(path) - 1)
        for v in range(n):
            if v == path[-1] or not close[path[-1], v] or hops.get(v, left + 1) > left - 1:
                continue
            new = path + (v,)
            if v == x0:
                out.append(new)
            stack.append(new)
    return sorted(out)


def loop_components(X, eps: float, max_size: int) -> dict[tuple[int, ...], int]:
    """Component labels of the capped basic-move graph on all eps-loops (brute force)."""
    X = as_pointed(X)
    loops = all_eps_loops(X, eps, max_size)
    parent = {p: p for p in loops}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    close = X.dist <= eps + API_TOL
    for p in loops:
        for q in _moves(p, close, max_size):
            if len(q) - 1 <= max_size:
                a, b = find(p), find(q)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    roots = {}
    return {p: roots.setdefault(find(p), len(roots)) for p in loops}


_TO_HOMOTOPY = {WordVerdict.TRIVIAL: Homotopy.YES, WordVerdict.NONTRIVIAL: Homotopy.NO,
                WordVerdict.UNKNOWN: Homotopy.UNKNOWN}


def homotopic_via_pi1(alpha: DiscreteLoop, beta: DiscreteLoop, eps: float, X) -> Homotopy:
    """Decide alpha ~ beta at scale eps with the edge-path presentation."""
    X = as_pointed(X)
    if alpha.basepoint != X.basepoint or beta.basepoint != X.basepoint:
        raise ValueError("loops must be based at the basepoint")
    _check(alpha, eps, X)
    _check(beta, eps, X)
    lv = level_for(X, eps)
    w = lv.loop_word(alpha.points) + inverse(lv.loop_word(beta.points))
    return _TO_HOMOTOPY[word_problem(lv.simplified, lv.group, lv.simplification.project(w))]


def mu1(alpha: DiscreteLoop, beta: DiscreteLoop, X) -> float | None:
    """Smallest candidate scale at which the loops become homotopic (None if undecided)."""
    X = as_pointed(X)
    start = max(birth(alpha, X), birth(beta, X))
    for s in distinct_distances(X, include_zero=True):
        if s < start - API_TOL:
            continue
        verdict = homotopic_via_pi1(alpha, beta, s, X)
        if verdict is Homotopy.YES:
            return s
        if verdict is Homotopy.UNKNOWN:
            return None
    raise AssertionError("loops not homotopic at the diameter")


def death(loop: DiscreteLoop, X) -> float | None:
    X = as_pointed(X)
    return mu1(loop, DiscreteLoop.constant(X.basepoint), X)


# -- the space of loop classes ---------------------------------------------


@dataclass(frozen=True)
class LoopClass:
    representative: DiscreteLoop
    birth: float
    flagged: bool = False  # class could not be separated from others with certainty


def enumerate_L(X, max_size: int | None = None) -> list[LoopClass]:
    """Classes of (same birth, homotopic at that birth) among loops of size <= max_size.

    For each birth scale b a breadth-first search runs over states
    (endpoint, homotopy class of the path rel endpoints, whether a step of
    length b was used); the first path reaching a closed state is its
    shortest, then lexicographically smallest, representative.
    """
    X = as_pointed(X)
    if max_size is None:
        max_size = 2 * len(X)
    x0 = X.basepoint
    d = X.dist
    out = [LoopClass(DiscreteLoop.constant(x0), 0.0)]
    for b in distinct_distances(X):
        lv = level_for(X, b)
        S, G = lv.simplified, lv.group
        exact = G.classified
        close = d <= b + API_TOL
        n = len(X)

        def key(raw_word):
            if not exact:
                return free_reduce(raw_word)
            nf = normal_form(S, G, lv.simplification.project(raw_word))
            return nf

        start = (x0, key(()), False)
        best = {start: (x0,)}
        # raw path words are kept alongside to extend keys cheaply
        level = [(start, (x0,), ())]
        found = []
        for _ in range(max_size):
            nxt_level = []
            for (v, _, hit), path, word in level:
                for u in range(n):
                    if u == v or not close[v, u]:
                        continue
                    w = free_reduce(word + lv.data.step(v, u))
                    state = (u, key(w), hit or d[v, u] >= b - API_TOL)
                    if state in best:
                        continue
                    best[state] = path + (u,)
                    nxt_level.append((state, path + (u,), w))
                    if u == x0 and state[2]:
                        found.append(path + (u,))
            level = nxt_level
            if not level:
                break
        for p in found:
            out.append(LoopClass(DiscreteLoop(p), b, flagged=not exact))
    return sorted(out, key=lambda c: (c.birth, len(c.representative.points), c.representative.points))


def mu1_matrix(classes: Sequence[LoopClass], X) -> np.ndarray:
    """Pairwise mu1 between representatives (nan where undecided)."""
    X = as_pointed(X)
    k = len(classes)
    m = np.zeros((k, k))
    for i in range(k):
        for j in range(i, k):
            v = mu1(classes[i].representative, classes[j].representative, X)
            m[i, j] = m[j, i] = np.nan if v is None else v
    return m


@dataclass(frozen=True)
class GSubdendrogram:
    """Per scale, a partition of the representatives born by then (lists of ids)."""

    classes: tuple[LoopClass, ...]
    scales: tuple[float, ...]
    blocks: tuple[tuple[tuple[int, ...], ...], ...]

    def pseudo_ultrametric(self) -> np.ndarray:
        """First scale at which two representatives share a block (diagonal: birth)."""
        k = len(self.classes)
        m = np.full((k, k), np.nan)
        for s, part in zip(self.scales, self.blocks):
            for block in part:
                for i in block:
                    for j in block:
                        if np.isnan(m[i, j]):
                            m[i, j] = s
        return m

    def to_json(self) -> dict:
        return {
            "scales": list(self.scales),
            "blocks": [[list(b) for b in part] for part in self.blocks],
            "representatives": [list(c.representative.points) for c in self.classes],
            "births": [c.birth for c in self.classes],
            "flagged": [c.flagged for c in self.classes],
        }


def generalized_subdendrogram(X, max_size: int | None = None) -> GSubdendrogram:
    X = as_pointed(X)
    classes = enumerate_L(X, max_size)
    scales = distinct_distances(X, include_zero=True)
    blocks = []
    for s in scales:
        alive = [i for i, c in enumerate(classes) if c.birth <= s + API_TOL]
        lv = level_for(X, s)
        part: list[list[int]] = []
        keys: list = []
        for i in alive:
            rep = classes[i].representative
            nf = normal_form(lv.simplified, lv.group, lv.reduced_word(rep.points))
            placed = False
            for blk, k in zip(part, keys):
                if nf is not None:
                    same = k == nf
                else:
                    same = homotopic_via_pi1(rep, classes[blk[0]].representative, s, X) is Homotopy.YES
                if same:
                    blk.append(i)
                    placed = True
                    break
            if not placed:
                part.append([i])
                keys.append(nf)
        blocks.append(tuple(tuple(b) for b in part))
    return GSubdendrogram(tuple(classes), tuple(scales), tuple(blocks))
