import math

import pytest
from hypothesis import given

from conftest import graph_metrics
from perstopy.groups import GroupClass, classify_group, normal_form, tietze_simplify
from perstopy.metric import (circle_sample, cycle_graph, diam, distinct_distances, linf_product, random_tree_metric,
                             star_graph, uniform_space, wedge_sum)
from perstopy.vietoris_rips import (Verdict, critical_values, detect_critical_values, edge_path_presentation,
                                    persistent_pi1, pi1_level, structure_map_image, vr_skeleton)

Z = GroupClass.make("Free", 1)
TRIVIAL = GroupClass.make("Trivial")


@pytest.mark.parametrize("X, eps, edges, triangles", [
    (cycle_graph(3), 1, 3, 1),
    (cycle_graph(4), 1, 4, 0),
    (circle_sample(4), math.pi / 2, 4, 0),
])
def test_skeleton_sizes(X, eps, edges, triangles):
    K = vr_skeleton(X, eps)
    assert len(K.edges) == edges and len(K.triangles) == triangles


def test_closed_convention():
    assert len(vr_skeleton(cycle_graph(5), 0.999).edges) == 0
    assert len(vr_skeleton(cycle_graph(5), 1.0).edges) == 5


@pytest.mark.parametrize("X, ngens, nrels, cls", [
    (cycle_graph(4), 1, 0, Z),
    (cycle_graph(3), 1, 1, TRIVIAL),
    (star_graph(4), 0, 0, TRIVIAL),
])
def test_edge_path_presentations(X, ngens, nrels, cls):
    P = edge_path_presentation(vr_skeleton(X, 1), 0)
    assert (P.ngens, len(P.relators)) == (ngens, nrels)
    assert classify_group(P) == cls


def test_cycle_five_simplifies_to_one_generator():
    S = tietze_simplify(edge_path_presentation(vr_skeleton(cycle_graph(5), 1), 0))
    assert S.ngens == 1 and not S.relators


def test_torus_grid_at_scale_one():
    lv = pi1_level(linf_product(cycle_graph(4), cycle_graph(4)), 1)
    assert lv.group == GroupClass.make("FreeAbelian", 2) or lv.group.rank == 2


@pytest.mark.parametrize("n", range(3, 13))
def test_cycle_graph_interval(n):
    top = (n + 2) // 3
    PP = persistent_pi1(cycle_graph(n))
    for s, g in zip(PP.scales, PP.classes()):
        assert g == (Z if 1 <= s < top else TRIVIAL)


def test_seven_cycle_levels_and_maps():
    PP = persistent_pi1(cycle_graph(7))
    assert PP.scales == (0.0, 1.0, 2.0, 3.0)
    assert [str(g) for g in PP.classes()] == ["0", "Z", "Z", "0"]
    lv2 = PP.levels[2]
    img = structure_map_image(PP, 1, 2, (1,))
    assert normal_form(lv2.simplified, lv2.group, img) in ((1,), (-1,))
    assert structure_map_image(PP, 1, 3, (1,)) == ()
    assert structure_map_image(PP, 1, 1, (1, 1, -1)) == (1,)
    assert critical_values(PP) == [1.0, 3.0]
    assert PP.intervals() == [(Z, 1.0, 3.0)]


def test_structure_map_errors():
    PP = persistent_pi1(cycle_graph(7))
    with pytest.raises(ValueError):
        structure_map_image(PP, 2, 1, (1,))
    with pytest.raises(ValueError):
        structure_map_image(PP, 1.5, 2, (1,))
    with pytest.raises(ValueError):
        structure_map_image(PP, 1, 2, (2,))


def test_circle_four_points():
    PP = persistent_pi1(circle_sample(4))
    assert PP.intervals() == [(Z, pytest.approx(math.pi / 2), pytest.approx(math.pi))]


@pytest.mark.parametrize("seed", range(10))
def test_trees_are_trivial(seed):
    T = random_tree_metric(2 + seed % 8, seed, weighted=seed % 2 == 1)
    assert all(g == TRIVIAL for g in persistent_pi1(T).classes())


@pytest.mark.parametrize("X", [star_graph(5), uniform_space(3)])
def test_no_critical_values_when_trivial(X):
    PP = persistent_pi1(X)
    assert critical_values(PP) == []
    assert all(v is Verdict.NONCRITICAL for _, v in detect_critical_values(PP))


def test_product_ranks_add():
    PP = persistent_pi1(linf_product(cycle_graph(5), cycle_graph(5)))
    ranks = {s: lv.simplified.abelianization().rank for s, lv in zip(PP.scales, PP.levels)}
    assert ranks == {0.0: 0, 1.0: 2, 2.0: 0}


def test_wedge_staircase():
    W = wedge_sum(cycle_graph(5).pointed(), cycle_graph(7).pointed())
    PP = persistent_pi1(W)
    got = {s: str(g) for s, g in zip(PP.scales, PP.classes())}
    assert got[1.0] == "F2" and got[2.0] == "Z"
    assert all(v == "0" for s, v in got.items() if s >= 3 or s == 0)


@given(graph_metrics(min_size=2, max_size=6))
def test_generator_and_relator_counts(X):
    for s in distinct_distances(X, include_zero=True):
        lv = pi1_level(X, s)
        comp = set(lv.data.component)
        edges = [e for e in lv.skeleton.edges if e[0] in comp]
        tris = [t for t in lv.skeleton.triangles if t[0] in comp]
        assert lv.presentation.ngens == len(edges) - (len(comp) - 1)
        assert len(lv.presentation.relators) == len(tris)
        assert lv.presentation.abelianization() == lv.simplified.abelianization()


@given(graph_metrics(min_size=1, max_size=6))
def test_trivial_from_the_diameter_on(X):
    PP = persistent_pi1(X)
    assert PP.scales[-1] == diam(X)
    assert PP.classes()[-1] == TRIVIAL


@given(graph_metrics(min_size=3, max_size=6))
def test_structure_maps_compose(X):
    PP = persistent_pi1(X)
    n = len(PP.scales)
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                lk = PP.levels[k]
                if not lk.group.classified:
                    continue
                for g in range(1, PP.levels[i].simplified.ngens + 1):
                    direct = structure_map_image(PP, PP.scales[i], PP.scales[k], (g,))
                    mid = structure_map_image(PP, PP.scales[i], PP.scales[j], (g,))
                    two = structure_map_image(PP, PP.scales[j], PP.scales[k], mid)
                    assert normal_form(lk.simplified, lk.group, direct) == normal_form(lk.simplified, lk.group, two)
