"""Finitely presented groups: words, Tietze simplification, classification.

A word is a tuple of nonzero ints: ``k`` is generator ``k - 1`` and ``-k`` its
inverse.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .snf import AbelianInvariants, cokernel_invariants, smith_normal_form

Word = tuple[int, ...]


def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1]


def canonical_relator(word: Sequence[int]) -> Word:
    """Representative of a relator up to cyclic rotation and inversion."""
    w = cyclic_reduce(word)
    if not w:
        return w
    candidates = []
    for v in (w, inverse(w)):
        candidates += [v[k:] + v[:k] for k in range(len(v))]
    return min(candidates)


def exponent_sums(word: Sequence[int], ngens: int) -> list[int]:
    v = [0] * ngens
    for x in word:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def substitute(word: Sequence[int], images: Sequence[Word]) -> Word:
    """Apply the homomorphism generator k-1 -> images[k-1]."""
    out: list[int] = []
    for x in word:
        out.extend(images[x - 1] if x > 0 else inverse(images[-x - 1]))
    return free_reduce(out)


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))
        k = len(self.generators)
        for r in self.relators:
            if any(x == 0 or abs(x) > k for x in r):
                raise ValueError(f"relator {r} uses an undeclared generator")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def relation_matrix(self) -> list[dict[int, int]]:
        """Exponent-sum rows, sparse."""
        rows = []
        for r in self.relators:
            row: dict[int, int] = {}
            for x in r:
                c = abs(x) - 1
                row[c] = row.get(c, 0) + (1 if x > 0 else -1)
            rows.append({c: v for c, v in row.items() if v})
        return rows

    def abelianization(self) -> AbelianInvariants:
        return cokernel_invariants(self.relation_matrix(), self.ngens)

    def to_text(self) -> str:
        return f"gens: {' '.join(self.generators)}; rels: " + ", ".join(
            format_word(r, self.generators) for r in self.relators)

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "relators": [list(r) for r in self.relators]}


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    return " ".join(names[abs(x) - 1] + ("-" if x < 0 else "") for x in word)


def parse_word(text: str, names: Sequence[str]) -> Word:
    index = {s: k + 1 for k, s in enumerate(names)}
    out = []
    for tok in text.split():
        sign = -1 if tok.endswith("-") else 1
        name = tok[:-1] if sign < 0 else tok
        if name not in index:
            raise ValueError(f"unknown generator {name!r}")
        out.append(sign * index[name])
    return tuple(out)


def parse_presentation(text: str) -> GroupPresentation:
    """Parse ``gens: a b; rels: a b a- b-, b b`` (relators comma separated)."""
    head, _, tail = text.partition(";")
    head, tail = head.strip(), tail.strip()
    if not head.startswith("gens:") or (tail and not tail.startswith("rels:")):
        raise ValueError("expected 'gens: ...; rels: ...'")
    names = head[len("gens:"):].split()
    body = tail[len("rels:"):] if tail else ""
    rels = [parse_word(chunk, names) for chunk in body.split(",") if chunk.strip()]
    return GroupPresentation(tuple(names), tuple(rels))


# -- Tietze simplification -------------------------------------------------


@dataclass(frozen=True)
class Simplification:
    """A simplified presentation plus the isomorphism data from the original.

    ``images[k]`` expresses original generator k in the new generators;
    ``kept[j]`` is the original index of new generator j.
    """

    presentation: GroupPresentation
    images: tuple[Word, ...]
    kept: tuple[int, ...]

    def project(self, word: Sequence[int]) -> Word:
        return substitute(word, self.images)


def _eliminable(rel: Word) -> int | None:
    """A generator (1-based) occurring exactly once in the relator."""
    counts: dict[int, int] = {}
    for x in rel:
        counts[abs(x)] = counts.get(abs(x), 0) + 1
    once = [g for g, c in counts.items() if c == 1]
    return min(once) if once else None


def _solve_for(rel: Word, g: int) -> Word:
    """Value of generator g forced by the relator (g occurs once)."""
    k = next(i for i, x in enumerate(rel) if abs(x) == g)
    rot = rel[k:] + rel[:k]  # g^e w = 1
    rest = rot[1:]
    return free_reduce(inverse(rest) if rot[0] > 0 else rest)


def _shorten_by(rel: Word, target: Word) -> Word | None:
    """Replace a long cyclic piece of ``rel`` inside ``target`` by the shorter rest."""
    n = len(rel)
    if n == 0 or len(target) < (n // 2) + 1:
        return None
    for v in (rel, inverse(rel)):
        for k in range(n):
            rot = v[k:] + v[:k]
            need = n // 2 + 1
            for piece_len in range(n, need - 1, -1):
                piece, rest = rot[:piece_len], rot[piece_len:]
                # piece * rest = 1  =>  piece = rest^-1
                t = target + target
                m = len(target)
                for s in range(m):
                    if piece_len > m:
                        break
                    if t[s:s + piece_len] == piece:
                        rotated = t[s:s + m]
                        new = cyclic_reduce(inverse(rest) + rotated[piece_len:])
                        if len(new) < m:
                            return new
    return None


def simplify(P: GroupPresentation, effort: int = 10_000) -> Simplification:
    """Tietze moves: reduce, drop trivial relators, eliminate generators, rewrite.

    ``effort`` bounds the number of relator-against-relator rewrite attempts.
    """
    k = P.ngens
    defs: dict[int, Word] = {}  # eliminated generator -> word in other generators
    rels = [cyclic_reduce(r) for r in P.relators]

    def expand(word: Word) -> Word:
        out: list[int] = []
        for x in word:
            g = abs(x)
            if g in defs:
                w = defs[g] = expand(defs[g])
                out.extend(w if x > 0 else inverse(w))
            else:
                out.append(x)
        return free_reduce(out)

    budget = effort
    changed = True
    while changed:
        changed = False
        current: dict[Word, None] = {}
        for r in rels:
            r = cyclic_reduce(expand(r))
            if r:
                current.setdefault(canonical_relator(r), None)
        rels = sorted(current, key=lambda w: (len(w), w))
        for idx, r in enumerate(rels):
            r = cyclic_reduce(expand(r))
            g = _eliminable(r) if r else None
            if g is not None:
                defs[g] = _solve_for(r, g)
                rels[idx] = ()
                changed = True
        if changed:
            continue
        # relator-against-relator rewriting, bounded
        for i in range(len(rels)):
            for j in range(len(rels)):
                if i == j or not rels[i] or not rels[j] or budget <= 0:
                    continue
                budget -= 1
                new = _shorten_by(rels[i], rels[j])
                if new is not None:
                    rels[j] = new
                    changed = True
        if changed:
            rels = [r for r in rels if r]
    kept = tuple(g for g in range(1, k + 1) if g not in defs)
    renumber = {g: j + 1 for j, g in enumerate(kept)}

    def rename(word: Word) -> Word:
        return tuple(renumber[abs(x)] * (1 if x > 0 else -1) for x in word)

    images = tuple(rename(expand((g,))) for g in range(1, k + 1))
    final: dict[Word, None] = {}
    for r in rels:
        r = cyclic_reduce(expand(r))
        if r:
            final.setdefault(canonical_relator(rename(r)), None)
    names = tuple(P.generators[g - 1] for g in kept)
    return Simplification(GroupPresentation(names, tuple(sorted(final, key=lambda w: (len(w), w)))),
                          images, tuple(g - 1 for g in kept))


def tietze_simplify(P: GroupPresentation, effort: int = 10_000) -> GroupPresentation:
    return simplify(P, effort).presentation


# -- classification --------------------------------------------------------


@dataclass(frozen=True)
class GroupClass:
    """Trivial, Free(k), FreeAbelian(k) or Unclassified with abelian invariants.

    Constructed through ``make`` so that Free(0) and FreeAbelian(0) become
    Trivial and FreeAbelian(1) becomes Free(1).
    """

    tag: str
    rank: int = 0
    torsion: tuple[int, ...] = ()

    TAGS = ("Trivial", "Free", "FreeAbelian", "Unclassified")

    @classmethod
    def make(cls, tag: str, rank: int = 0, torsion: Sequence[int] = ()) -> "GroupClass":
        if tag not in cls.TAGS:
            raise ValueError(f"unknown group tag {tag!r}")
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        if tag in ("Free", "FreeAbelian") and rank == 0:
            tag = "Trivial"
        if tag == "FreeAbelian" and rank == 1:
            tag = "Free"
        if tag == "Trivial":
            return cls("Trivial", 0, ())
        return cls(tag, rank, tuple(torsion) if tag == "Unclassified" else ())

    @property
    def classified(self) -> bool:
        return self.tag != "Unclassified"

    def __str__(self) -> str:
        if self.tag == "Trivial":
            return "0"
        if self.tag == "Free":
            return "Z" if self.rank == 1 else f"F{self.rank}"
        if self.tag == "FreeAbelian":
            return f"Z^{self.rank}"
        return f"?[{AbelianInvariants(self.rank, self.torsion)}]"

    def to_json(self) -> dict:
        out = {"tag": self.tag, "rank": self.rank}
        if self.tag == "Unclassified":
            out["torsion"] = list(self.torsion)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GroupClass":
        return cls.make(data["tag"], int(data.get("rank", 0)), data.get("torsion", ()))


def _is_commutator_set(P: GroupPresentation) -> bool:
    k = P.ngens
    want = {canonical_relator((i, j, -i, -j)) for i in range(1, k + 1) for j in range(i + 1, k + 1)}
    have = {canonical_relator(r) for r in P.relators}
    return have == want


def classify_simplified(S: GroupPresentation) -> GroupClass:
    """Classify a presentation that has already been simplified."""
    if S.ngens == 0:
        return GroupClass.make("Trivial")
    if not S.relators:
        return GroupClass.make("Free", S.ngens)
    if S.ngens >= 2 and _is_commutator_set(S):
        return GroupClass.make("FreeAbelian", S.ngens)
    ab = S.abelianization()
    return GroupClass.make("Unclassified", ab.rank, ab.torsion)


def classify_group(P: GroupPresentation, effort: int = 10_000) -> GroupClass:
    return classify_simplified(tietze_simplify(P, effort))


class WordVerdict(enum.Enum):
    TRIVIAL = "Trivial"
    NONTRIVIAL = "Nontrivial"
    UNKNOWN = "Unknown"


def normal_form(P: GroupPresentation, cls: GroupClass, word: Sequence[int]):
    """A complete invariant of the element, or None when the class gives none."""
    if cls.tag == "Trivial":
        return ()
    if cls.tag == "Free":
        return free_reduce(word)
    if cls.tag == "FreeAbelian":
        return tuple(exponent_sums(word, P.ngens))
    return None


def _in_relation_lattice(P: GroupPresentation, vec: list[int]) -> bool:
    rows = [[row.get(c, 0) for c in range(P.ngens)] for row in P.relation_matrix()]
    if not rows:
        return not any(vec)
    diag, _, V = smith_normal_form(rows)
    # vec in rowspace(A) iff vec @ V lies in rowspace(D)
    y = [sum(vec[i] * V[i][j] for i in range(P.ngens)) for j in range(P.ngens)]
    for j, yj in enumerate(y):
        if j < len(diag):
            if yj % diag[j]:
                return False
        elif yj:
            return False
    return True


def word_problem(P: GroupPresentation, cls: GroupClass, word: Sequence[int]) -> WordVerdict:
    nf = normal_form(P, cls, word)
    if nf is not None:
        return WordVerdict.TRIVIAL if not any(nf) else WordVerdict.NONTRIVIAL
    if not _in_relation_lattice(P, exponent_sums(word, P.ngens)):
        return WordVerdict.NONTRIVIAL
    if not free_reduce(word):
        return WordVerdict.TRIVIAL
    return WordVerdict.UNKNOWN
