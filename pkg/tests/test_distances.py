import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import diagrams, graph_metrics
from perstopy import oracles
from perstopy.distances import (Dendrogram, IntervalPersistentGroup, NotUltrametric, bottleneck,
                                dendrogram_from_ultrametric, dendrogram_module_interleaving,
                                interleaving_interval_groups, interval_group_of, retracts_through)
from perstopy.gromov_hausdorff import gh_exact
from perstopy.groups import GroupClass
from perstopy.homology import INF, mu0_ultrametric, ph1_diagram
from perstopy.metric import circle_sample, cycle_graph, uniform_space
from perstopy.vietoris_rips import persistent_pi1

Z = GroupClass.make("Free", 1)
F2 = GroupClass.make("Free", 2)
Z2 = GroupClass.make("FreeAbelian", 2)
TRIVIAL = GroupClass.make("Trivial")


def test_bottleneck_examples():
    assert math.isclose(bottleneck(ph1_diagram(circle_sample(3)), ph1_diagram(circle_sample(4))), math.pi / 4)
    D = [(0, 1), (0.5, 2), (1, INF)]
    assert bottleneck(D, D) == 0
    for eps in (0.5, 2.0):
        assert bottleneck([(0, 1 + eps), (0, INF)], [(0, 1), (0, INF)]) == min(eps, (1 + eps) / 2)


def test_bottleneck_infinite_points():
    assert bottleneck([(0, INF)], []) == INF
    assert bottleneck([(0, INF), (2, INF)], [(1, INF), (2.5, INF)]) == 1


def test_interleaving_examples():
    L = 2 * math.pi / 3
    assert math.isclose(interleaving_interval_groups(IntervalPersistentGroup(Z2, 0, L),
                                                     IntervalPersistentGroup(F2, 0, L)), math.pi / 3)
    P = IntervalPersistentGroup(Z, 1, 3)
    assert interleaving_interval_groups(P, P) == 0
    assert interleaving_interval_groups(P, IntervalPersistentGroup(TRIVIAL, 0, 0)) == 1


def test_interval_group_normalisation_and_json():
    empty = IntervalPersistentGroup(Z, 2, 2)
    assert empty.empty and empty.group == TRIVIAL
    P = IntervalPersistentGroup.from_json({"group": {"tag": "Free", "rank": 2}, "interval": [0, 1], "open_right": True})
    assert P.group == F2 and P.contains(0) and not P.contains(1)
    assert IntervalPersistentGroup.from_json(P.to_json()) == P
    with pytest.raises(ValueError):
        IntervalPersistentGroup(GroupClass.make("Unclassified", 1, (2,)), 0, 1)
    with pytest.raises(ValueError):
        IntervalPersistentGroup(Z, 2, 1)


@pytest.mark.parametrize("G, H, expected", [
    (Z, F2, True), (F2, Z, False), (Z, Z2, True), (Z2, Z, False),
    (F2, Z2, False), (Z2, F2, False), (TRIVIAL, Z, True), (Z, TRIVIAL, False),
])
def test_retract_table(G, H, expected):
    assert retracts_through(G, H) is expected


def test_interval_group_of_cycle():
    P = interval_group_of(persistent_pi1(cycle_graph(7)))
    assert (P.group, P.a, P.b) == (Z, 1.0, 3.0)
    assert interval_group_of(persistent_pi1(uniform_space(4))).empty


def test_dendrogram_examples():
    D = dendrogram_from_ultrametric(uniform_space(3).dist)
    assert D.partition_at(0.5) == ((0,), (1,), (2,))
    assert D.partition_at(1) == ((0, 1, 2),)
    C = dendrogram_from_ultrametric(mu0_ultrametric(cycle_graph(5)))
    assert C.scales == (0.0, 1.0) and C.blocks[1] == ((0, 1, 2, 3, 4),)
    one = dendrogram_from_ultrametric([[0]])
    assert one.blocks == (((0,),),) and one.partition_at(7) == ((0,),)


def test_dendrogram_rejects_non_ultrametric():
    with pytest.raises(NotUltrametric):
        dendrogram_from_ultrametric(cycle_graph(4).dist)


def test_module_interleaving_examples():
    E2 = dendrogram_from_ultrametric(uniform_space(2).dist)
    E3 = dendrogram_from_ultrametric(uniform_space(3).dist)
    assert dendrogram_module_interleaving(E2, E2) == 0
    assert dendrogram_module_interleaving(E2, E3) == 0.5
    A = dendrogram_from_ultrametric(mu0_ultrametric(circle_sample(3)))
    B = dendrogram_from_ultrametric(mu0_ultrametric(circle_sample(4)))
    assert math.isclose(dendrogram_module_interleaving(A, B), oracles.bottleneck_exhaustive(A.barcode(), B.barcode()))


@given(diagrams(), diagrams())
def test_bottleneck_matches_exhaustive_matching(A, B):
    fast, slow = bottleneck(A, B), oracles.bottleneck_exhaustive(A, B)
    assert fast == slow or abs(fast - slow) <= 1e-9


@given(diagrams(), diagrams(), diagrams())
def test_bottleneck_is_a_pseudometric(A, B, C):
    ab, bc, ac = bottleneck(A, B), bottleneck(B, C), bottleneck(A, C)
    assert bottleneck(A, A) == 0
    assert ab == bottleneck(B, A)
    assert ac <= ab + bc + 1e-9


groups = st.sampled_from([Z, F2, Z2, GroupClass.make("FreeAbelian", 3), GroupClass.make("Free", 3)])
eighths = st.integers(0, 16).map(lambda k: k / 8)


@st.composite
def interval_groups(draw, group=None):
    g = draw(groups) if group is None else group
    a = draw(eighths)
    return IntervalPersistentGroup(g, a, a + draw(eighths))


@given(interval_groups(), interval_groups())
def test_interleaving_matches_grid_search(P, Q):
    assert interleaving_interval_groups(P, Q) == float(oracles.interleaving_grid(P, Q))


@given(groups, eighths, eighths, eighths, eighths)
def test_isomorphic_case_is_the_interval_module_formula(g, a, la, c, lc):
    P, Q = IntervalPersistentGroup(g, a, a + la), IntervalPersistentGroup(g, c, c + lc)
    if P.empty or Q.empty:
        return
    standard = min(max(abs(a - c), abs(la + a - lc - c)), max(la, lc) / 2)
    assert interleaving_interval_groups(P, Q) == standard
    assert interleaving_interval_groups(P, Q) == interleaving_interval_groups(Q, P)


@given(interval_groups())
def test_against_trivial_is_half_the_bar(P):
    E = IntervalPersistentGroup(TRIVIAL, 0, 0)
    assert interleaving_interval_groups(P, E) == P.length / 2


@given(graph_metrics(min_size=1, max_size=5), graph_metrics(min_size=1, max_size=5))
def test_module_interleaving_below_gh_of_ultrametrics(X, Y):
    UX, UY = mu0_ultrametric(X), mu0_ultrametric(Y)
    A, B = dendrogram_from_ultrametric(UX), dendrogram_from_ultrametric(UY)
    assert 0.5 * dendrogram_module_interleaving(A, B) <= gh_exact(UX, UY) + 1e-9


@given(graph_metrics(min_size=1, max_size=7))
def test_dendrogram_round_trip(X):
    U = mu0_ultrametric(X)
    D = dendrogram_from_ultrametric(U)
    assert np.array_equal(D.ultrametric(), U)
    assert isinstance(D, Dendrogram) and D.blocks[0] == tuple((i,) for i in range(len(X)))
    assert len(D.blocks[-1]) == 1
