"""Shared corpus: the five worked ascending examples, rank-1 classics, and a
handful of multi-vertex graphs exercising reduction and the modular tests."""

import pytest

from gbsep.exact import IntMatrix
from gbsep.gog import Edge, LabeledGraphOfGroups

C1 = IntMatrix([[0, 1], [-2, -3]])
C2 = IntMatrix([[1, 1], [-1, 1]])
C3 = IntMatrix([[1, 2], [2, 2]])
C4 = IntMatrix([[0, 1, 1], [0, 0, 1], [5, 0, 1]])
C5 = IntMatrix([[1, 2, 1], [2, 2, 1], [0, 0, 1]])

ASCENDING_EXAMPLES = {"g1": C1, "g2": C2, "g3": C3, "g4": C4, "g5": C5}


def loop_graph(rank, incl_from, incl_to, vertex="v", edge="e"):
    return LabeledGraphOfGroups(rank, (vertex,), (Edge(edge, vertex, vertex, incl_from, incl_to),))


def ascending_graph(phi):
    return loop_graph(phi.n, IntMatrix.identity(phi.n), phi)


def rank1_loop(p, q):
    return loop_graph(1, IntMatrix([[p]]), IntMatrix([[q]]))


def scalar(x):
    return IntMatrix([[x]])


def corpus_graphs():
    i2 = IntMatrix.identity(2)
    graphs = {name: ascending_graph(m) for name, m in ASCENDING_EXAMPLES.items()}
    graphs["bs_1_3"] = rank1_loop(1, 3)
    graphs["bs_2_3"] = rank1_loop(2, 3)
    graphs["bs_2_2"] = rank1_loop(2, 2)
    graphs["auto_loop"] = loop_graph(2, i2, IntMatrix([[0, 1], [1, 0]]))
    graphs["circle_2_3"] = LabeledGraphOfGroups(1, ("p", "q"), (
        Edge("a", "p", "q", scalar(1), scalar(1)),
        Edge("b", "p", "q", scalar(2), scalar(3)),
    ))
    graphs["circle_rank2"] = LabeledGraphOfGroups(2, ("p", "q"), (
        Edge("a", "p", "q", i2, IntMatrix([[1, 1], [0, 1]])),
        Edge("b", "p", "q", IntMatrix([[2, 0], [0, 1]]), IntMatrix([[3, 0], [0, 1]])),
    ))
    graphs["amalgam"] = LabeledGraphOfGroups(1, ("p", "q"), (
        Edge("a", "p", "q", scalar(2), scalar(3)),
    ))
    graphs["double_edge_balanced"] = LabeledGraphOfGroups(2, ("p", "q"), (
        Edge("a", "p", "q", 2 * i2, 2 * i2),
        Edge("b", "p", "q", 2 * i2, IntMatrix([[2, 2], [0, 2]])),
    ))
    graphs["theta_balanced"] = LabeledGraphOfGroups(1, ("p", "q"), (
        Edge("a", "p", "q", scalar(2), scalar(2)),
        Edge("b", "p", "q", scalar(2), scalar(2)),
        Edge("c", "p", "q", scalar(2), scalar(2)),
    ))
    graphs["theta_unbalanced"] = LabeledGraphOfGroups(1, ("p", "q"), (
        Edge("a", "p", "q", scalar(2), scalar(2)),
        Edge("b", "p", "q", scalar(2), scalar(3)),
    ))
    graphs["path_with_loop"] = LabeledGraphOfGroups(2, ("a", "b", "c"), (
        Edge("e1", "a", "b", i2, IntMatrix([[1, 1], [0, 1]])),
        Edge("e2", "b", "c", IntMatrix([[1, 1], [0, 1]]), i2),
        Edge("e3", "c", "c", i2, C2),
    ))
    return graphs


@pytest.fixture(scope="session")
def corpus():
    return corpus_graphs()
