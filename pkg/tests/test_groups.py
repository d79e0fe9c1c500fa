import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from perstopy.groups import (GroupClass, GroupPresentation, WordVerdict, canonical_relator, classify_group,
                             cyclic_reduce, free_reduce, inverse, parse_presentation, simplify, substitute,
                             tietze_simplify, word_problem)
from perstopy.snf import AbelianInvariants, cokernel_invariants, invariant_factors, rationalize, smith_normal_form


def _det(rows) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    n, det = len(m), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return int(det)


def determinantal_factors(A) -> list[int]:
    """Invariant factors from gcds of k x k minors."""
    m, n = len(A), len(A[0])
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = math.gcd(g, _det([[A[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)))


@given(matrices)
def test_snf_matches_determinantal_divisors(A):
    diag, U, V = smith_normal_form(A)
    assert diag == determinantal_factors(A)
    D = _matmul(_matmul(U, A), V)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            assert x == (diag[i] if i == j and i < len(diag) else 0)
    assert abs(_det(U)) == 1 and abs(_det(V)) == 1


@given(matrices)
def test_sparse_elimination_agrees_with_dense(A):
    rows = [{j: x for j, x in enumerate(r) if x} for r in A]
    assert invariant_factors(rows, len(A[0])) == determinantal_factors(A)


def test_cokernel_examples():
    # Z^2 / <(2, 0), (0, 3)> = Z/6, rank 0
    assert cokernel_invariants([{0: 2}, {1: 3}], 2) == AbelianInvariants(0, (6,))
    assert cokernel_invariants([{0: 2}], 3) == AbelianInvariants(2, (2,))
    assert rationalize(AbelianInvariants(2, (3,))) == 2
    assert rationalize(AbelianInvariants(0)) == 0


def test_word_helpers():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert inverse((1, -2)) == (2, -1)
    assert cyclic_reduce((-1, 2, 1)) == (2,)
    assert canonical_relator((2, 1, -2, -1)) == canonical_relator((1, -2, -1, 2))
    assert substitute((1, -2), [(3,), (1, 1)]) == (3, -1, -1)


def test_text_round_trip():
    text = "gens: a b; rels: a b a- b-"
    P = parse_presentation(text)
    assert P.relators == ((1, 2, -1, -2),)
    assert P.to_text() == text
    assert parse_presentation(P.to_text()) == P
    with pytest.raises(ValueError):
        parse_presentation("gens: a; rels: c")


@pytest.mark.parametrize("text, expected", [
    ("gens: a; rels: a", "gens: ; rels: "),
    ("gens: a b; rels: b", "gens: a; rels: "),
])
def test_tietze_examples(text, expected):
    assert tietze_simplify(parse_presentation(text)).to_text() == expected


@pytest.mark.parametrize("text, expected", [
    ("gens: a b; rels: ", GroupClass.make("Free", 2)),
    ("gens: a b; rels: a b a- b-", GroupClass.make("FreeAbelian", 2)),
    ("gens: a; rels: a a", GroupClass.make("Unclassified", 0, (2,))),
    ("gens: a b c; rels: a b a- b-, a c a- c-, b c b- c-", GroupClass.make("FreeAbelian", 3)),
    ("gens: a b; rels: a b a b-", GroupClass.make("Unclassified", 1, (2,))),
])
def test_classification(text, expected):
    assert classify_group(parse_presentation(text)) == expected


def test_class_normalisation():
    assert GroupClass.make("Free", 0).tag == "Trivial"
    assert GroupClass.make("FreeAbelian", 1) == GroupClass.make("Free", 1)
    assert str(GroupClass.make("FreeAbelian", 2)) == "Z^2"
    assert str(GroupClass.make("Free", 2)) == "F2"
    with pytest.raises(ValueError):
        GroupClass.make("Cyclic", 3)
    g = GroupClass.make("Unclassified", 1, (2, 4))
    assert GroupClass.from_json(g.to_json()) == g


@pytest.mark.parametrize("text, tag, word, verdict", [
    ("gens: a; rels: ", "Free", (1, -1), WordVerdict.TRIVIAL),
    ("gens: a b; rels: a b a- b-", "FreeAbelian", (1, 2, -1, -2), WordVerdict.TRIVIAL),
    ("gens: a b; rels: ", "Free", (1, 2, -1, -2), WordVerdict.NONTRIVIAL),
    ("gens: a; rels: a a", "Unclassified", (1,), WordVerdict.NONTRIVIAL),
    ("gens: a; rels: a a", "Unclassified", (1, 1), WordVerdict.UNKNOWN),
])
def test_word_problem(text, tag, word, verdict):
    P = parse_presentation(text)
    cls = classify_group(P)
    assert cls.tag == tag
    assert word_problem(P, cls, word) is verdict


words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=8).map(tuple)


@given(st.lists(words, max_size=4))
def test_simplification_keeps_abelianisation(rels):
    P = GroupPresentation(("a", "b", "c"), tuple(free_reduce(r) for r in rels))
    S = simplify(P)
    assert S.presentation.abelianization() == P.abelianization()
    # every original generator maps to a word in the kept ones
    assert len(S.images) == 3
    for k, g in enumerate(S.kept):
        assert S.images[g] == (k + 1,)


@given(words)
def test_free_reduction_is_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert all(x != -y for x, y in zip(r, r[1:]))
    assert free_reduce(w + inverse(w)) == ()
