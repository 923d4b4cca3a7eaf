"""Shared fixtures: the builtin algebras, two hand-built variants, and a
random-graph generator for fuzz comparisons."""

import random

import pytest

from cyclichodge.algebra import parse_algebra
from cyclichodge.builtin import load_builtin
from cyclichodge.graphs import MarkedGraph


@pytest.fixture(scope="session")
def trivial():
    return load_builtin("trivial")


@pytest.fixture(scope="session")
def dual2():
    return load_builtin("dual2")


@pytest.fixture(scope="session")
def exterior2():
    return load_builtin("exterior2")


@pytest.fixture(scope="session")
def block6():
    return load_builtin("block6")


@pytest.fixture(scope="session")
def block8():
    return load_builtin("block8")


DUAL2_OBJ = {
    "dim": 2,
    "parity": [0, 0],
    "unit": 1,
    "product": [
        [1, 1, 1, "1"], [1, 2, 2, "1"], [2, 1, 2, "1"],
    ],
    "Q": [],
    "Gminus": [],
    "integral": ["0", "1"],
    "hodge": {"H0": [1, 2], "blocks": []},
}

SCALED2_OBJ = dict(DUAL2_OBJ, integral=["0", "3"])


@pytest.fixture(scope="session")
def scaled2():
    """Q[x]/(x^2) with integral(x) = 3: the pairing on H_0 differs from
    its inverse, so it separates the two pairing conventions."""
    return parse_algebra(SCALED2_OBJ, name="scaled2")


def random_connected_graph(rng, dim, couplings=True, max_vertices=3):
    """Random small connected marked multigraph over a dim-dimensional
    algebra.  With couplings=False only UNIT/B leaves appear (needed for
    algebras whose H_0 contains odd vectors)."""
    from cyclichodge.graphs import EDGE_MARKS

    nv = rng.randint(1, max_vertices)
    edges = []
    for v in range(1, nv):
        u = rng.randrange(v)
        edges.append((u, v, rng.choice([m for m in EDGE_MARKS if m != "IDLOOP"])))
    for _ in range(rng.randint(0, 2)):
        u = rng.randrange(nv)
        v = rng.randrange(nv)
        if u == v:
            mark = rng.choice(EDGE_MARKS)
        else:
            mark = rng.choice([m for m in EDGE_MARKS if m != "IDLOOP"])
        edges.append((min(u, v), max(u, v), mark))
    leaf_pool = ["UNIT"] + [f"B{i}" for i in range(1, dim + 1)]
    if couplings:
        leaf_pool += ["E0", "E0", "E1", "E2"]
    leaves = [(rng.randrange(nv), rng.choice(leaf_pool))
              for _ in range(rng.randint(0, 3))]
    return MarkedGraph(nv, edges, leaves)
