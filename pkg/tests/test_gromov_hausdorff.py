import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graph_metrics
from perstopy import oracles
from perstopy.gromov_hausdorff import (BudgetExceeded, Correspondence, default_budget, distortion, gh_exact,
                                       gh_lower_bounds, gh_pointed_exact, gh_search, map_pair_distortion)
from perstopy.metric import circle_sample, cycle_graph, diam, star_graph, uniform_space, validate

POINT = uniform_space(1)


def test_distortion_basics():
    X = cycle_graph(5)
    identity = Correspondence(frozenset((i, i) for i in range(5)))
    assert distortion(identity, X, X) == 0
    to_point = Correspondence(frozenset((i, 0) for i in range(5)))
    assert distortion(to_point, X, POINT) == diam(X)
    with pytest.raises(ValueError):
        distortion(Correspondence(frozenset({(0, 0)})), X, X)


def test_best_correspondence_between_cycle_and_star():
    res = gh_search(cycle_graph(7), star_graph(5))
    R = Correspondence.from_maps(res.f, res.g)
    assert distortion(R, cycle_graph(7), star_graph(5)) == 2 == 2 * res.value


@pytest.mark.parametrize("X, Y, expected", [
    (cycle_graph(4), POINT, 1.0),
    (circle_sample(3), circle_sample(4), math.pi / 4),
    (cycle_graph(3), star_graph(4), 0.5),
])
def test_exact_values(X, Y, expected):
    assert math.isclose(gh_exact(X, Y), expected, abs_tol=1e-12)


def test_pointed_values():
    X = cycle_graph(6).pointed(2)
    assert gh_pointed_exact(X, X) == 0
    assert gh_pointed_exact(cycle_graph(3).pointed(0), star_graph(4)) == 0.5


def test_budget():
    with pytest.raises(BudgetExceeded) as err:
        gh_exact(cycle_graph(9), cycle_graph(9), limit=1000)
    assert err.value.required == 9**18
    assert gh_exact(cycle_graph(3), star_graph(4), limit=4**3 * 3**4) == 0.5


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("PERSTOPY_BUDGET", "10")
    assert default_budget() == 10
    with pytest.raises(BudgetExceeded):
        gh_exact(cycle_graph(3), star_graph(4))


def test_radius_bound_cycle_star():
    rep = gh_lower_bounds(cycle_graph(8), star_graph(5))
    assert rep.radius_bound == 1.5
    assert rep.exact == 1.5


def test_identical_spaces_have_zero_bounds():
    X = cycle_graph(6)
    rep = gh_lower_bounds(X, X)
    assert rep.best() == 0 and rep.exact == 0


def test_circle_bounds():
    rep = gh_lower_bounds(circle_sample(3), circle_sample(4))
    assert math.isclose(rep.bottleneck1_bound, math.pi / 8)
    assert math.isclose(rep.mu0_bound, math.pi / 4)
    assert rep.best() <= rep.exact + 1e-9


def test_bounds_flag_budget_failures():
    rep = gh_lower_bounds(cycle_graph(3), star_graph(4), limit=10)
    assert rep.exact is None
    assert any(f.startswith("exact") for f in rep.flags)


def test_pseudo_metric_diagonal_enters():
    A = np.array([[1.0]])
    B = np.array([[3.0]])
    assert gh_exact(A, B) == 1.0


small = graph_metrics(min_size=1, max_size=4)


@given(small, small)
def test_agrees_with_map_pair_enumeration(X, Y):
    assert math.isclose(gh_exact(X, Y), oracles.gh_map_pairs(X, Y), abs_tol=1e-12)


@given(graph_metrics(min_size=1, max_size=4), graph_metrics(min_size=1, max_size=3), st.data())
def test_pointed_agrees_with_enumeration(X, Y, data):
    x0 = data.draw(st.integers(0, len(X) - 1))
    y0 = data.draw(st.integers(0, len(Y) - 1))
    got = gh_pointed_exact(X.pointed(x0), Y.pointed(y0))
    assert math.isclose(got, oracles.gh_map_pairs(X, Y, (x0, y0)), abs_tol=1e-12)


@given(graph_metrics(min_size=1, max_size=4), graph_metrics(min_size=1, max_size=4))
def test_agrees_with_correspondence_enumeration(X, Y):
    if len(X) * len(Y) <= 16:
        assert math.isclose(gh_exact(X, Y), oracles.gh_correspondences(X, Y), abs_tol=1e-12)


@given(graph_metrics(min_size=1, max_size=5), graph_metrics(min_size=1, max_size=5))
def test_metric_properties(X, Y):
    d = gh_exact(X, Y)
    assert d >= 0
    assert math.isclose(d, gh_exact(Y, X), abs_tol=1e-12)
    assert gh_pointed_exact(X.pointed(), Y.pointed()) >= d - 1e-12
    res = gh_search(X, Y)
    assert math.isclose(map_pair_distortion(res.f, res.g, X, Y), 2 * d, abs_tol=1e-12)
    assert math.isclose(gh_exact(X, POINT), diam(X) / 2)


def _isometric(X, Y) -> bool:
    if len(X) != len(Y):
        return False
    return any(np.array_equal(X.dist[np.ix_(p, p)], Y.dist) for p in map(list, itertools.permutations(range(len(X)))))


@given(graph_metrics(min_size=1, max_size=5), graph_metrics(min_size=1, max_size=5))
def test_zero_exactly_on_isometric_pairs(X, Y):
    assert (gh_exact(X, Y) == 0) == _isometric(X, Y)


@given(graph_metrics(min_size=1, max_size=5), st.randoms())
def test_relabelling_is_invisible(X, rnd):
    p = list(range(len(X)))
    rnd.shuffle(p)
    assert gh_exact(X, validate(X.dist[np.ix_(p, p)])) == 0


@given(graph_metrics(min_size=2, max_size=5), graph_metrics(min_size=2, max_size=5))
def test_bounds_below_exact(X, Y):
    for pointed in (False, True):
        rep = gh_lower_bounds(X.pointed(), Y.pointed(), pointed=pointed)
        assert all(v <= rep.exact + 1e-9 for v in rep.bounds().values())
