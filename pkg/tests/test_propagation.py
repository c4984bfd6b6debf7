import random

import pytest

from qpn.errors import QueryError
from qpn.network import InfluenceArc, Network, ProductSynergy, Query
from qpn.propagation import induce_intercausal, net_influence, propagate
from qpn.signs import sign_product, sign_sum

from conftest import P, M, Z, A, net
from corpus import all_sign_chains, random_dag, random_query


def test_transitivity_along_a_chain():
    chain = net("HBA", [("H", "B", P), ("B", "A", M)])
    signs, _ = propagate(chain, Query({}, ("H", True), "A"))
    assert signs["H"] is P
    assert signs["B"] is P
    assert signs["A"] is M


def test_false_evidence_seeds_minus():
    chain = net("HB", [("H", "B", P)])
    signs, _ = propagate(chain, Query({}, ("H", False), "B"))
    assert signs["B"] is M


def test_fixture_leaves_interest_ambiguous(fixture_net, fixture_query):
    signs, _ = propagate(fixture_net, fixture_query)
    rendered = {n: s.value for n, s in signs.items()}
    assert rendered == {
        "H": "+",
        "U": "+",
        "W": "-",
        "I": "?",
        "D": "?",
        "G": "?",
        "C": "?",
        "B": "?",
        "A": "?",
    }


def test_unknown_query_node_rejected(fixture_net):
    with pytest.raises(QueryError):
        propagate(fixture_net, Query({}, ("Nope", True), "A"))


def _synergy_net():
    return Network(
        "ABC",
        [InfluenceArc("A", "C", P), InfluenceArc("B", "C", P)],
        [ProductSynergy(("A", "B"), "C", True, M)],
    )


def test_intercausal_edge_induced_by_matching_observation():
    g = _synergy_net()
    edges = induce_intercausal(g, {"C": True})
    assert len(edges) == 1
    assert {edges[0].a, edges[0].b} == {"A", "B"}
    assert edges[0].sign is M


def test_no_edge_on_value_mismatch_or_without_synergies():
    g = _synergy_net()
    assert induce_intercausal(g, {"C": False}) == ()
    plain = net("AB", [("A", "B", P)])
    assert induce_intercausal(plain, {"A": True}) == ()


def test_sign_crosses_observed_child_via_intercausal_edge():
    g = _synergy_net()
    signs, _ = propagate(g, Query({"C": True}, ("A", True), "B"))
    assert signs["B"] is M
    # Without the observation that induces the edge, the collider stays
    # closed and B receives nothing.
    signs, _ = propagate(g, Query({}, ("A", True), "B"))
    assert signs["B"] is Z


def test_observed_nodes_never_receive_or_relay():
    chain = net("ABC", [("A", "B", P), ("B", "C", P)])
    signs, trace = propagate(chain, Query({"B": False}, ("A", True), "C"))
    assert signs["B"] is Z
    assert signs["C"] is Z
    assert all(m.receiver != "B" for m in trace.messages)


def test_trace_lines_format(fixture_net, fixture_query):
    _, trace = propagate(fixture_net, fixture_query)
    lines = trace.lines()
    assert lines[0] == "H -> H : +"
    assert all(" -> " in line and " : " in line for line in lines)


def test_sign_change_bound_holds_per_node(fixture_net, fixture_query):
    _, trace = propagate(fixture_net, fixture_query)
    assert max(trace.sign_changes.values()) <= 2


def test_fixpoint_is_order_independent(fixture_net, fixture_query):
    baseline, _ = propagate(fixture_net, fixture_query)
    rng = random.Random(7)
    for _ in range(3):
        order = list(fixture_net.nodes)
        rng.shuffle(order)
        permuted, _ = propagate(fixture_net, fixture_query, node_order=order)
        assert permuted == baseline


def test_net_influence_fixture_values(fixture_net):
    observed = {"H": True}
    assert net_influence(fixture_net, "C", P, "A", observed) is M
    assert net_influence(fixture_net, "I", P, "C", observed) is A
    assert net_influence(fixture_net, "C", P, "C", observed) is P


def test_net_influence_flips_with_seed(fixture_net):
    observed = {"H": True}
    assert net_influence(fixture_net, "C", M, "A", observed) is P


def test_propagation_equals_chain_sum_oracle():
    """Every node's propagated sign equals the parallel combination of
    the sign products of all open reasoning chains from the evidence,
    computed here by an independent exhaustive trail enumerator."""
    rng = random.Random(99)
    checked = 0
    for _ in range(250):
        g = random_dag(rng, n_lo=3, n_hi=8)
        query = random_query(rng, g)
        if query is None:
            continue
        signs, trace = propagate(g, query)
        assert all(count <= 2 for count in trace.sign_changes.values())
        seed = P if query.evidence_value else M
        observed = set(query.all_observations())
        for node in g.nodes:
            if node in observed:
                continue
            chains = all_sign_chains(g, query.evidence_node, node, observed)
            expected = Z
            for chain_sign in chains:
                expected = sign_sum(expected, sign_product(seed, chain_sign))
            assert signs[node] is expected, (g.to_payload(), query, node)
            checked += 1
    assert checked > 500
