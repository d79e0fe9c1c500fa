"""Smith normal form over the integers, exact (Python ints throughout)."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class AbelianInvariants:
    """A finitely generated abelian group Z^rank + sum of Z/t for t in torsion."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = [f"Z^{self.rank}"] if self.rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def rationalize(a: AbelianInvariants) -> int:
    """Rank after tensoring with the rationals."""
    return a.rank


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Return (diag, U, V) with U @ A @ V diagonal, entries diag, each dividing the next.

    U and V are unimodular. ``diag`` lists the nonzero invariant factors only.
    """
    A = [[int(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row dst += c * row src
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # the pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    return diag, U, V


def invariant_factors(rows: list[dict[int, int]], ncols: int) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix given as row dicts.

    Unit pivots are eliminated sparsely first (boundary and relator matrices
    are mostly +-1); whatever is left is handed to the dense algorithm.
    """
    rows = [dict(r) for r in rows if r]
    cols: dict[int, set[int]] = {}
    for ri, r in enumerate(rows):
        for c in r:
            cols.setdefault(c, set()).add(ri)
    alive = set(range(len(rows)))
    units = 0
    while True:
        pivot = None
        for ri in sorted(alive, key=lambda k: len(rows[k])):
            for c, v in rows[ri].items():
                if v in (1, -1):
                    pivot = (ri, c)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pr, pc = pivot
        prow = rows[pr]
        pv = prow[pc]
        for ri in list(cols.get(pc, ())):
            if ri == pr:
                continue
            r = rows[ri]
            f = r[pc] * pv  # pv = +-1 so this is r[pc] / pv
            for c, v in prow.items():
                nv = r.get(c, 0) - f * v
                if nv:
                    if c not in r:
                        cols.setdefault(c, set()).add(ri)
                    r[c] = nv
                else:
                    if c in r:
                        del r[c]
                        cols[c].discard(ri)
            if not r:
                alive.discard(ri)
        # column operations clear the rest of the pivot row
        for c in prow:
            cols[c].discard(pr)
        alive.discard(pr)
        rows[pr] = {}
        units += 1
    rest = [rows[ri] for ri in sorted(alive) if rows[ri]]
    if not rest:
        return [1] * units
    used = sorted({c for r in rest for c in r})
    pos = {c: k for k, c in enumerate(used)}
    dense = [[0] * len(used) for _ in rest]
    for k, r in enumerate(rest):
        for c, v in r.items():
            dense[k][pos[c]] = v
    diag, _, _ = smith_normal_form(dense)
    return [1] * units + diag


def cokernel_invariants(rows: list[dict[int, int]], ncols: int) -> AbelianInvariants:
    """Z^ncols modulo the row span."""
    factors = invariant_factors(rows, ncols)
    return AbelianInvariants(ncols - len(factors), tuple(f for f in factors if f > 1))
