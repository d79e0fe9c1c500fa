"""Vietoris-Rips 2-skeletons and persistent fundamental groups of finite spaces."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .groups import (GroupClass, GroupPresentation, Simplification, Word, classify_simplified,
                     exponent_sums, free_reduce, simplify)
from .metric import API_TOL, PointedMetricSpace, as_matrix, as_pointed, distinct_distances
from .snf import smith_normal_form

DEFAULT_EFFORT = 10_000


@dataclass(frozen=True)
class VRSkeleton2:
    eps: float
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]

    def neighbours(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for v in adj:
            adj[v].sort()
        return adj

    def component(self, root: int) -> tuple[int, ...]:
        adj = self.neighbours()
        seen = {root}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return tuple(sorted(seen))

    def restrict(self, keep: Sequence[int]) -> "VRSkeleton2":
        s = set(keep)
        return VRSkeleton2(self.eps, tuple(sorted(s)),
                           tuple(e for e in self.edges if e[0] in s),
                           tuple(t for t in self.triangles if t[0] in s))


def vr_skeleton(X, eps: float) -> VRSkeleton2:
    """Closed Rips 2-skeleton: simplices of diameter <= eps."""
    d = as_matrix(X)
    n = len(d)
    close = d <= eps + API_TOL
    edges = tuple((i, j) for i in range(n) for j in range(i + 1, n) if close[i, j])
    triangles = []
    for i, j in edges:
        for k in range(j + 1, n):
            if close[i, k] and close[j, k]:
                triangles.append((i, j, k))
    return VRSkeleton2(float(eps), tuple(range(n)), edges, tuple(triangles))


@dataclass(frozen=True)
class EdgePathPresentation:
    """Spanning-tree presentation of the edge-path group at one scale.

    ``edge_letter[(u, v)]`` (u < v) is 0 for tree edges, else the 1-based
    generator of the oriented edge u -> v.
    """

    presentation: GroupPresentation
    basepoint: int
    component: tuple[int, ...]
    parent: dict[int, int]
    edge_letter: dict[tuple[int, int], int]
    generator_edges: tuple[tuple[int, int], ...]

    def step(self, u: int, v: int) -> Word:
        if u == v:
            return ()
        key = (u, v) if u < v else (v, u)
        if key not in self.edge_letter:
            raise ValueError(f"({u}, {v}) is not an edge at this scale")
        g = self.edge_letter[key]
        if g == 0:
            return ()
        return (g,) if u < v else (-g,)

    def path_word(self, points: Sequence[int]) -> Word:
        out: list[int] = []
        for u, v in zip(points, points[1:]):
            out.extend(self.step(u, v))
        return free_reduce(out)

    def tree_path(self, v: int) -> list[int]:
        """Vertices from the basepoint down the tree to v."""
        path = [v]
        while path[-1] != self.basepoint:
            path.append(self.parent[path[-1]])
        return path[::-1]

    def generator_loop(self, g: int) -> tuple[int, ...]:
        """The based edge loop represented by generator g (1-based)."""
        u, v = self.generator_edges[g - 1]
        return tuple(self.tree_path(u) + self.tree_path(v)[::-1])


def edge_path_data(K: VRSkeleton2, basepoint: int) -> EdgePathPresentation:
    adj = K.neighbours()
    parent: dict[int, int] = {}
    seen = {basepoint}
    queue = deque([basepoint])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                parent[v] = u
                queue.append(v)
    comp = tuple(sorted(seen))
    tree = {(min(u, p), max(u, p)) for u, p in parent.items()}
    letters: dict[tuple[int, int], int] = {}
    gens: list[tuple[int, int]] = []
    for e in K.edges:
        if e[0] not in seen:
            continue
        if e in tree:
            letters[e] = 0
        else:
            gens.append(e)
            letters[e] = len(gens)

    def letter(u, v):
        g = letters[(u, v) if u < v else (v, u)]
        return () if g == 0 else ((g,) if u < v else (-g,))

    relators = []
    for a, b, c in K.triangles:
        if a in seen:
            relators.append(free_reduce(letter(a, b) + letter(b, c) + letter(c, a)))
    names = tuple(f"e{u}_{v}" for u, v in gens)
    P = GroupPresentation(names, tuple(relators))
    return EdgePathPresentation(P, basepoint, comp, parent, letters, tuple(gens))


def edge_path_presentation(K: VRSkeleton2, basepoint: int = 0) -> GroupPresentation:
    return edge_path_data(K, basepoint).presentation


def _has_cone_vertex(K: VRSkeleton2, comp: Sequence[int]) -> bool:
    """A vertex adjacent to every other vertex of the component makes the flag complex a cone."""
    if len(comp) <= 2:
        return True
    deg = {v: 0 for v in comp}
    members = set(comp)
    for u, v in K.edges:
        if u in members:
            deg[u] += 1
            deg[v] += 1
    return max(deg.values()) == len(comp) - 1


@dataclass(frozen=True)
class Pi1Level:
    """Everything known about pi_1 at one scale."""

    scale: float
    skeleton: VRSkeleton2
    data: EdgePathPresentation
    simplification: Simplification
    group: GroupClass
    # raw generator g (1-based) -> raw word at the next scale
    next_images: tuple[Word, ...] = ()

    @property
    def presentation(self) -> GroupPresentation:
        return self.data.presentation

    @property
    def simplified(self) -> GroupPresentation:
        return self.simplification.presentation

    def loop_word(self, points: Sequence[int]) -> Word:
        """Raw word of a based eps-loop."""
        return self.data.path_word(points)

    def reduced_word(self, points: Sequence[int]) -> Word:
        """Word of a based eps-loop in the simplified generators."""
        return self.simplification.project(self.data.path_word(points))

    def lift(self, word: Sequence[int]) -> Word:
        """Simplified word -> raw word (surviving generators are raw generators)."""
        kept = self.simplification.kept
        return tuple((kept[abs(x) - 1] + 1) * (1 if x > 0 else -1) for x in word)


def pi1_level(X, eps: float, basepoint: int = 0, effort: int = DEFAULT_EFFORT) -> Pi1Level:
    K = vr_skeleton(X, eps)
    data = edge_path_data(K, basepoint)
    P = data.presentation
    if _has_cone_vertex(K, data.component):
        S = Simplification(GroupPresentation((), ()), tuple(() for _ in range(P.ngens)), ())
    else:
        S = simplify(P, effort)
    return Pi1Level(float(eps), K, data, S, classify_simplified(S.presentation))


@lru_cache(maxsize=256)
def _cached_level(X: PointedMetricSpace, eps: float, effort: int) -> Pi1Level:
    return pi1_level(X.space, eps, X.basepoint, effort)


def level_for(X, eps: float, effort: int = DEFAULT_EFFORT) -> Pi1Level:
    """pi_1 data at scale eps (memoised per space, basepoint and scale)."""
    X = as_pointed(X)
    return _cached_level(X, round(float(eps), 12), effort)


class Verdict(enum.Enum):
    CRITICAL = "Critical"
    NONCRITICAL = "NonCritical"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class PersistentPi1:
    """pi_1 at scale 0 and at every distinct distance, with maps between neighbours."""

    scales: tuple[float, ...]
    levels: tuple[Pi1Level, ...] = field(repr=False)
    basepoint: int = 0

    def index(self, eps: float) -> int:
        """Level whose half-open interval [s_i, s_{i+1}) contains eps."""
        if eps < -API_TOL:
            raise ValueError("negative scale")
        i = int(np.searchsorted(np.asarray(self.scales), eps + API_TOL, side="right")) - 1
        return max(i, 0)

    def exact_index(self, eps: float) -> int:
        i = self.index(eps)
        if abs(self.scales[i] - eps) > API_TOL:
            raise ValueError(f"{eps} is not a scale of the filtration")
        return i

    def classes(self) -> list[GroupClass]:
        return [lv.group for lv in self.levels]

    def intervals(self) -> list[tuple[GroupClass, float, float]]:
        """Maximal runs of equal nontrivial class, as [start, end)."""
        runs = []
        for i, lv in enumerate(self.levels):
            if lv.group.tag == "Trivial":
                continue
            end = self.scales[i + 1] if i + 1 < len(self.scales) else float("inf")
            if runs and runs[-1][0] == lv.group and runs[-1][2] == lv.scale:
                runs[-1] = (lv.group, runs[-1][1], end)
            else:
                runs.append((lv.group, lv.scale, end))
        return runs

    def to_json(self) -> dict:
        verdicts = dict(detect_critical_values(self))
        levels = []
        for lv in self.levels:
            v = verdicts.get(lv.scale)
            levels.append({"scale": lv.scale, "group": str(lv.group), "class": lv.group.to_json(),
                           "presentation": lv.presentation.to_text(), "simplified": lv.simplified.to_text(),
                           "verdict": v.value if v else None})
        return {"basepoint": self.basepoint, "scales": list(self.scales), "levels": levels,
                "intervals": [{"group": str(g), "class": g.to_json(), "interval": [a, b]}
                              for g, a, b in self.intervals()],
                "critical_values": critical_values(self)}


def persistent_pi1(X, basepoint: int | None = None, effort: int = DEFAULT_EFFORT) -> PersistentPi1:
    X = as_pointed(X, basepoint)
    scales = distinct_distances(X, include_zero=True)
    raw = [pi1_level(X.space, s, X.basepoint, effort) for s in scales]
    levels = []
    for i, lv in enumerate(raw):
        if i + 1 < len(raw):
            nxt = raw[i + 1].data
            imgs = tuple(nxt.path_word(lv.data.generator_loop(g))
                         for g in range(1, lv.presentation.ngens + 1))
            lv = Pi1Level(lv.scale, lv.skeleton, lv.data, lv.simplification, lv.group, imgs)
        levels.append(lv)
    return PersistentPi1(tuple(scales), tuple(levels), X.basepoint)


def _raw_step(word: Word, images: Sequence[Word]) -> Word:
    out: list[int] = []
    for x in word:
        w = images[abs(x) - 1]
        out.extend(w if x > 0 else tuple(-y for y in reversed(w)))
    return free_reduce(out)


def structure_map_image(PP: PersistentPi1, eps: float, eps2: float, word: Sequence[int]) -> Word:
    """Image of a simplified-generator word at eps under the map to eps2."""
    i, j = PP.exact_index(eps), PP.exact_index(eps2)
    if i > j:
        raise ValueError("structure maps only go up in scale")
    src = PP.levels[i]
    if any(x == 0 or abs(x) > src.simplified.ngens for x in word):
        raise ValueError("word uses generators not present at this scale")
    w = src.lift(word)
    for k in range(i, j):
        w = _raw_step(w, PP.levels[k].next_images)
    return PP.levels[j].simplification.project(w)


def _abelian_image_matrix(PP: PersistentPi1, i: int) -> list[list[int]]:
    src, dst = PP.levels[i - 1], PP.levels[i]
    k = src.simplified.ngens
    rows = []
    for g in range(1, k + 1):
        img = structure_map_image(PP, src.scale, dst.scale, (g,))
        rows.append(exponent_sums(img, dst.simplified.ngens))
    return rows


def _unimodular(rows: list[list[int]]) -> bool:
    if not rows:
        return True
    if len(rows) != len(rows[0]):
        return False
    diag, _, _ = smith_normal_form(rows)
    return len(diag) == len(rows) and all(d == 1 for d in diag)


def detect_critical_values(PP: PersistentPi1) -> list[tuple[float, Verdict]]:
    out = []
    for i in range(1, len(PP.levels)):
        a, b = PP.levels[i - 1].group, PP.levels[i].group
        if not (a.classified and b.classified):
            verdict = Verdict.UNDETERMINED
        elif a != b:
            verdict = Verdict.CRITICAL
        elif a.tag == "Trivial" or _unimodular(_abelian_image_matrix(PP, i)):
            verdict = Verdict.NONCRITICAL
        else:
            verdict = Verdict.CRITICAL
        out.append((PP.scales[i], verdict))
    return out


def critical_values(PP: PersistentPi1) -> list[float]:
    return [s for s, v in detect_critical_values(PP) if v is Verdict.CRITICAL]
