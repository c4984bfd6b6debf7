import pytest

from qpn.network import InfluenceArc, Network, Query
from qpn.signs import Sign

P, M, Z, A = Sign.PLUS, Sign.MINUS, Sign.ZERO, Sign.AMBIGUOUS


def arcs(rows):
    return [InfluenceArc(tail, head, sign) for tail, head, sign in rows]


def net(nodes, arc_rows, synergies=()):
    return Network(nodes, arcs(arc_rows), synergies)


# Canonical trade-off network: evidence H reaches interest A along
# conflicting chains; propagation leaves A ambiguous, C is the pivot,
# and the ambiguity traces back to the signs of G and I.
FIXTURE_ARCS = [
    ("H", "U", P),
    ("H", "W", M),
    ("U", "I", P),
    ("W", "I", P),
    ("I", "D", P),
    ("I", "G", P),
    ("D", "G", M),
    ("D", "C", P),
    ("G", "C", M),
    ("C", "B", P),
    ("B", "A", M),
    ("C", "A", M),
]

# Extension with nodes that exercise every relevance class: E is a
# barren child of U, J an extra parent of B, L/M hang off the observed
# evidence node.
EXTENDED_ARCS = FIXTURE_ARCS + [
    ("U", "E", P),
    ("J", "B", P),
    ("H", "L", P),
    ("L", "M", P),
]


@pytest.fixture
def fixture_net():
    return net("HUWIDGCBA", FIXTURE_ARCS)


@pytest.fixture
def extended_net():
    return net(list("HUWIDGCBA") + ["E", "J", "L", "M"], EXTENDED_ARCS)


@pytest.fixture
def fixture_query():
    return Query({}, ("H", True), "A")
