"""Exact Gromov-Hausdorff distance between small finite spaces, and lower bounds.

The exact value is half the least achievable max(dis f, dis g, codis(f, g))
over map pairs f: X -> Y, g: Y -> X. Every such quantity is a difference of
a distance in X and a distance in Y, so the minimum is found by binary
search over those differences, each step a constraint-satisfaction search
with forward checking.

All functions accept pseudo-metric matrices with a nonzero diagonal (used for
loop-class spaces), in which case the diagonal terms enter the distortion.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .metric import API_TOL, as_matrix, as_pointed, diam, has_antipodes, rad

DEFAULT_BUDGET = 10**13


def default_budget() -> int:
    env = os.environ.get("PERSTOPY_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, limit: int):
        super().__init__(f"search needs {required} map pairs, budget is {limit}")
        self.required = required
        self.limit = limit


@dataclass(frozen=True)
class Correspondence:
    pairs: frozenset[tuple[int, int]]

    @classmethod
    def from_maps(cls, f, g) -> "Correspondence":
        return cls(frozenset([(x, int(y)) for x, y in enumerate(f)] + [(int(x), y) for y, x in enumerate(g)]))

    def check(self, nx: int, ny: int) -> None:
        if {i for i, _ in self.pairs} != set(range(nx)) or {j for _, j in self.pairs} != set(range(ny)):
            raise ValueError("not a correspondence: some point is uncovered")


def distortion(R: Correspondence, X, Y) -> float:
    dx, dy = as_matrix(X), as_matrix(Y)
    R.check(len(dx), len(dy))
    p = np.array(sorted(R.pairs))
    return float(np.abs(dx[np.ix_(p[:, 0], p[:, 0])] - dy[np.ix_(p[:, 1], p[:, 1])]).max())


def map_pair_distortion(f, g, X, Y) -> float:
    """max(dis f, dis g, codis(f, g)); equals the distortion of their correspondence."""
    dx, dy = as_matrix(X), as_matrix(Y)
    f, g = np.asarray(f), np.asarray(g)
    dis_f = np.abs(dx - dy[np.ix_(f, f)]).max()
    dis_g = np.abs(dx[np.ix_(g, g)] - dy).max()
    codis = np.abs(dx[:, g] - dy[f, :]).max()
    return float(max(dis_f, dis_g, codis))


def _feasible(dx, dy, delta, fixed=None):
    """Find maps with all distortion terms <= delta, or None.

    Variables 0..nx-1 are f(x) in Y; nx..nx+ny-1 are g(y) in X.
    """
    nx, ny = len(dx), len(dy)
    tol = delta + API_TOL
    domains = [np.abs(dx[x, x] - np.diag(dy)) <= tol for x in range(nx)]
    domains += [np.abs(np.diag(dx) - dy[y, y]) <= tol for y in range(ny)]
    for var, val in (fixed or {}).items():
        keep = np.zeros_like(domains[var])
        keep[val] = domains[var][val]
        domains[var] = keep

    def allowed(var, val, other):
        # values of ``other`` compatible with var = val
        if var < nx:
            x, a = var, val
            if other < nx:
                return np.abs(dx[x, other] - dy[a, :]) <= tol
            y = other - nx
            return np.abs(dx[x, :] - dy[a, y]) <= tol
        y, b = var - nx, val
        if other < nx:
            return np.abs(dx[other, b] - dy[:, y]) <= tol
        return np.abs(dx[b, :] - dy[y, other - nx]) <= tol

    assignment = [-1] * (nx + ny)

    def search(domains):
        free = [v for v in range(nx + ny) if assignment[v] < 0]
        if not free:
            return True
        var = min(free, key=lambda v: (int(domains[v].sum()), v))
        for val in np.flatnonzero(domains[var]):
            new = list(domains)
            ok = True
            for other in free:
                if other == var:
                    continue
                new[other] = domains[other] & allowed(var, val, other)
                if not new[other].any():
                    ok = False
                    break
            if ok:
                assignment[var] = int(val)
                if search(new):
                    return True
                assignment[var] = -1
        return False

    if any(not dom.any() for dom in domains):
        return None
    if search(domains):
        return assignment[:nx], assignment[nx:]
    return None


def _candidates(dx, dy) -> np.ndarray:
    a = np.unique(np.round(dx, 12))
    b = np.unique(np.round(dy, 12))
    vals = np.unique(np.round(np.abs(a[:, None] - b[None, :]), 12))
    return vals


def _check_budget(nx: int, ny: int, limit: int | None) -> None:
    limit = default_budget() if limit is None else limit
    required = nx**ny * ny**nx
    if required > limit:
        raise BudgetExceeded(required, limit)


@dataclass(frozen=True)
class GHResult:
    value: float
    f: tuple[int, ...]
    g: tuple[int, ...]


def gh_search(X, Y, limit: int | None = None, basepoints: tuple[int, int] | None = None) -> GHResult:
    """Optimal map pair and the distance it certifies."""
    dx, dy = as_matrix(X), as_matrix(Y)
    nx, ny = len(dx), len(dy)
    if nx == 0 or ny == 0:
        raise ValueError("empty space")
    _check_budget(nx, ny, limit)
    fixed = None
    if basepoints is not None:
        x0, y0 = basepoints
        fixed = {x0: y0, nx + y0: x0}
    cands = _candidates(dx, dy)
    lo, hi = 0, len(cands) - 1
    best = _feasible(dx, dy, cands[hi], fixed)
    if best is None:  # only possible with inconsistent basepoint data
        raise ValueError("no admissible map pair")
    while lo < hi:
        mid = (lo + hi) // 2
        sol = _feasible(dx, dy, cands[mid], fixed)
        if sol is None:
            lo = mid + 1
        else:
            hi, best = mid, sol
    f, g = best
    return GHResult(map_pair_distortion(f, g, dx, dy) / 2, tuple(f), tuple(g))


def gh_exact(X, Y, limit: int | None = None) -> float:
    return gh_search(X, Y, limit).value


def gh_pointed_exact(X, Y, limit: int | None = None) -> float:
    X, Y = as_pointed(X), as_pointed(Y)
    return gh_search(X.dist, Y.dist, limit, (X.basepoint, Y.basepoint)).value


# -- lower bounds ------------------------------------------------------------


@dataclass
class GHBoundsReport:
    diam_bound: float = 0.0
    radius_bound: float = 0.0
    mu0_bound: float = 0.0
    bottleneck0_bound: float = 0.0
    bottleneck1_bound: float = 0.0
    pi1_interleaving_bound: float = 0.0
    exact: float | None = None
    flags: list[str] = field(default_factory=list)

    def bounds(self) -> dict[str, float]:
        return {k: v for k, v in asdict(self).items() if k.endswith("_bound")}

    def best(self) -> float:
        return max(self.bounds().values())

    def to_json(self) -> dict:
        out = asdict(self)
        out["best_lower_bound"] = self.best()
        return out


def radius_bound(X, Y) -> float:
    """Half of diam(A) - rad(B) where A is the larger space in diameter and has antipodes."""
    best = 0.0
    for A, B in ((X, Y), (Y, X)):
        if diam(A) >= diam(B) - API_TOL and has_antipodes(A):
            best = max(best, 0.5 * (diam(A) - rad(B)))
    return best


def pi1_interleaving_bound(X, Y, pointed: bool) -> tuple[float, list[str]]:
    """Half the interleaving distance of the pi_1 interval groups.

    Pointed: at the given basepoints. Unpointed: minimum over all basepoint
    pairs, since the unpointed distance is the least pointed one.
    """
    from .distances import interval_group_of, interleaving_interval_groups
    from .vietoris_rips import persistent_pi1

    X, Y = as_pointed(X), as_pointed(Y)
    xs = [X.basepoint] if pointed else range(len(X))
    ys = [Y.basepoint] if pointed else range(len(Y))
    gx = {x: interval_group_of(persistent_pi1(X, x)) for x in xs}
    gy = {y: interval_group_of(persistent_pi1(Y, y)) for y in ys}
    if any(v is None for v in list(gx.values()) + list(gy.values())):
        return 0.0, ["pi1 is not an interval persistent group; bound set to 0"]
    best = min(interleaving_interval_groups(gx[x], gy[y]) for x in xs for y in ys)
    return 0.5 * best, []


def gh_lower_bounds(X, Y, limit: int | None = None, pointed: bool = False,
                    with_exact: bool = True) -> GHBoundsReport:
    from .distances import bottleneck
    from .homology import mu0_ultrametric, ph0_diagram, ph1_diagram

    rep = GHBoundsReport()
    rep.diam_bound = 0.5 * abs(diam(X) - diam(Y))
    rep.radius_bound = radius_bound(X, Y)
    rep.bottleneck0_bound = 0.5 * bottleneck(ph0_diagram(X), ph0_diagram(Y))
    rep.bottleneck1_bound = 0.5 * bottleneck(ph1_diagram(X), ph1_diagram(Y))
    try:
        rep.mu0_bound = gh_exact(mu0_ultrametric(X), mu0_ultrametric(Y), limit)
    except BudgetExceeded as exc:
        rep.flags.append(f"mu0_bound: {exc}")
    rep.pi1_interleaving_bound, notes = pi1_interleaving_bound(X, Y, pointed)
    rep.flags += notes
    if with_exact:
        try:
            rep.exact = gh_pointed_exact(X, Y, limit) if pointed else gh_exact(X, Y, limit)
        except BudgetExceeded as exc:
            rep.flags.append(f"exact: {exc}")
    return rep
