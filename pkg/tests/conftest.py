import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from scipy.sparse.csgraph import shortest_path

from perstopy.metric import validate

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graph_metrics(draw, min_size=1, max_size=5, weights=(1, 2, 3)):
    """Shortest-path metric of a connected weighted graph with small integer weights."""
    n = draw(st.integers(min_size, max_size))
    w = np.zeros((n, n))
    for i in range(1, n):
        # a random spanning edge keeps the graph connected
        j = draw(st.integers(0, i - 1))
        w[i, j] = w[j, i] = draw(st.sampled_from(weights))
    for i in range(n):
        for j in range(i + 1, n):
            if w[i, j] == 0 and draw(st.booleans()):
                w[i, j] = w[j, i] = draw(st.sampled_from(weights))
    d = shortest_path(w, directed=False) if n > 1 else np.zeros((1, 1))
    return validate(d)


@st.composite
def diagrams(draw, max_points=4, allow_infinite=True):
    pts = []
    for _ in range(draw(st.integers(0, max_points))):
        b = draw(st.integers(0, 8)) / 4
        if allow_infinite and draw(st.integers(0, 6)) == 0:
            pts.append((b, float("inf")))
        else:
            pts.append((b, b + draw(st.integers(0, 8)) / 4))
    return pts
