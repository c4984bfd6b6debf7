import random

import pytest

from qpn.errors import AmbiguousInfluenceError, PivotOrderError
from qpn.network import Query
from qpn.pivotal import (
    articulation_nodes,
    boundary_node,
    candidate_order,
    candidate_resolvers,
    chain_signs,
    compute_pivot,
    construct_result,
    pivotal_pruning,
    pruned_network,
    resolution_frontier,
)
from qpn.propagation import net_influence, propagate, what_if
from qpn.relevance import relevant_network
from qpn.signs import Sign, sign_product

from conftest import P, M, Z, A, net
from corpus import brute_frontier, random_dag, random_query


def test_articulation_of_a_path_is_its_interior():
    g = net("ABC", [("A", "B", P), ("B", "C", P)])
    assert articulation_nodes(g) == {"B"}


def test_triangle_has_no_articulation():
    g = net("ABC", [("A", "B", P), ("B", "C", P), ("A", "C", P)])
    assert articulation_nodes(g) == set()


def test_extended_graph_articulation_set(extended_net):
    arts = articulation_nodes(extended_net)
    assert "C" in arts
    assert arts == {"B", "C", "H", "I", "L", "U"}


def test_fixture_relevant_network_articulations(fixture_net, fixture_query):
    rel = relevant_network(fixture_net, fixture_query)
    assert articulation_nodes(rel) == {"I", "C"}


def test_candidate_order_on_fixture(fixture_net, fixture_query):
    rel = relevant_network(fixture_net, fixture_query)
    assert candidate_order(rel, fixture_query) == ["I", "C", "A"]


def test_candidate_order_on_single_chain():
    g = net("EXI", [("E", "X", P), ("X", "I", P)])
    assert candidate_order(g, Query({}, ("E", True), "I")) == ["X", "I"]


def test_candidate_order_with_no_articulation_between():
    g = net("EZI", [("E", "I", P), ("E", "Z", P), ("Z", "I", M)])
    assert candidate_order(g, Query({}, ("E", True), "I")) == ["I"]


def test_candidate_order_rejects_improper_relevant_network():
    g = net("EIXY", [("E", "I", P), ("I", "X", P), ("X", "Y", P)])
    with pytest.raises(PivotOrderError):
        candidate_order(g, Query({}, ("E", True), "I"))


def test_fixture_pivot_is_c(fixture_net, fixture_query):
    rel = relevant_network(fixture_net, fixture_query)
    assert compute_pivot(rel, fixture_query) == "C"


def test_pivot_when_every_candidate_seed_determines_its_successor():
    g = net(
        "EXYPI",
        [("E", "X", P), ("E", "Y", M), ("X", "P", P), ("Y", "P", P), ("P", "I", P)],
    )
    query = Query({}, ("E", True), "I")
    rel = relevant_network(g, query)
    assert compute_pivot(rel, query) == "P"


def test_pivot_falls_on_interest_without_articulation():
    g = net("EABI", [("E", "A", P), ("E", "B", M), ("A", "I", P), ("B", "I", P)])
    query = Query({}, ("E", True), "I")
    rel = relevant_network(g, query)
    assert compute_pivot(rel, query) == "I"


def test_no_pivot_when_interest_is_unambiguous():
    g = net("EXI", [("E", "X", P), ("X", "I", P)])
    query = Query({}, ("E", True), "I")
    assert compute_pivot(g, query) is None
    assert pivotal_pruning(g, query) is None


def test_ambiguous_arcs_are_rejected():
    g = net("EXI", [("E", "X", A), ("X", "I", P)])
    query = Query({}, ("E", True), "I")
    with pytest.raises(AmbiguousInfluenceError):
        pivotal_pruning(g, query)


def test_pruned_network_drops_the_far_side(fixture_net, fixture_query):
    rel = relevant_network(fixture_net, fixture_query)
    pruned = pruned_network(rel, "C", fixture_query)
    assert set(pruned.nodes) == set("HUWIDGC")
    assert not pruned.children("C")


def test_pruned_network_with_pivot_at_interest(fixture_net, fixture_query):
    rel = relevant_network(fixture_net, fixture_query)
    assert pruned_network(rel, "A", fixture_query) == rel


def test_pruned_network_of_a_chain():
    g = net("EXP", [("E", "X", P), ("X", "P", M)])
    query = Query({}, ("E", True), "P")
    assert pruned_network(g, "P", query) == g


def test_fixture_candidate_resolvers(fixture_net, fixture_query):
    rel = relevant_network(fixture_net, fixture_query)
    signs, _ = propagate(rel, fixture_query)
    pruned = pruned_network(rel, "C", fixture_query)
    assert candidate_resolvers(pruned, "C", signs, fixture_query) == {"H", "I", "G"}


def test_resolvers_fall_back_to_evidence_alone():
    g = net("EXP", [("E", "X", P), ("X", "P", M)])
    query = Query({}, ("E", True), "P")
    signs, _ = propagate(g, query)
    assert candidate_resolvers(g, "P", signs, query) == {"E"}


def test_ambiguous_node_with_single_parent_is_not_a_resolver():
    # r inherits ambiguity from x but only one influence meets there.
    g = net(
        "EABXRP",
        [
            ("E", "A", P),
            ("E", "B", M),
            ("A", "X", P),
            ("B", "X", P),
            ("X", "R", P),
            ("R", "P", P),
        ],
    )
    query = Query({}, ("E", True), "P")
    signs, _ = propagate(g, query)
    resolvers = candidate_resolvers(g, "P", signs, query)
    assert "R" not in resolvers
    assert "X" in resolvers


def test_fixture_frontier_and_chain_signs(fixture_net, fixture_query):
    rel = relevant_network(fixture_net, fixture_query)
    signs, _ = propagate(rel, fixture_query)
    pruned = pruned_network(rel, "C", fixture_query)
    resolvers = candidate_resolvers(pruned, "C", signs, fixture_query)
    frontier = resolution_frontier(pruned, "C", resolvers, fixture_query)
    assert frontier == {"G", "I"}
    chains = chain_signs(pruned, frontier, "C", fixture_query)
    assert [(c.resolver, c.nodes, c.sign) for c in chains] == [
        ("G", ("G", "C"), M),
        ("I", ("I", "D", "C"), P),
    ]


def test_frontier_of_evidence_alone():
    g = net("EXP", [("E", "X", P), ("X", "P", M)])
    query = Query({}, ("E", True), "P")
    assert resolution_frontier(g, "P", {"E"}, query) == {"E"}


def test_resolver_behind_another_resolver_is_excluded():
    g = net(
        ["E", "a", "b", "r1", "c", "d", "r2", "P"],
        [
            ("E", "a", P),
            ("E", "b", M),
            ("a", "r1", P),
            ("b", "r1", P),
            ("r1", "c", P),
            ("r1", "d", M),
            ("c", "r2", P),
            ("d", "r2", P),
            ("r2", "P", P),
        ],
    )
    query = Query({}, ("E", True), "P")
    signs, _ = propagate(g, query)
    resolvers = candidate_resolvers(g, "P", signs, query)
    assert resolvers == {"E", "r1", "r2"}
    assert resolution_frontier(g, "P", resolvers, query) == {"r2"}


def test_chain_through_zero_arc_has_zero_sign():
    g = net("ERP", [("E", "R", P), ("E", "P", M), ("R", "P", Z)])
    query = Query({}, ("E", True), "P")
    chains = chain_signs(g, {"R", "E"}, "P", query)
    by_resolver = {(c.resolver, c.nodes): c.sign for c in chains}
    assert by_resolver[("R", ("R", "P"))] is Z


def test_fixture_branches(fixture_net, fixture_query):
    expl = pivotal_pruning(fixture_net, fixture_query, recursion_depth=0)
    assert expl.pivot == "C"
    assert expl.frontier == ("G", "I")
    assert expl.pivot_to_interest is M
    assert len(expl.branches) == 4
    by_assignment = {b.assignment: b for b in expl.branches}
    both_plus = by_assignment[(("G", P), ("I", P))]
    assert both_plus.result is None
    assert [t.nodes for t in both_plus.positive] == [("I", "D", "C")]
    assert [t.nodes for t in both_plus.negative] == [("G", "C")]
    assert by_assignment[(("G", P), ("I", M))].result is M
    assert by_assignment[(("G", M), ("I", P))].result is P
    assert by_assignment[(("G", M), ("I", M))].result is None
    assert expl.children == ()


def test_single_conflict_at_interest_explained_by_evidence():
    g = net("EABI", [("E", "A", P), ("E", "B", M), ("A", "I", P), ("B", "I", P)])
    expl = pivotal_pruning(g, Query({}, ("E", True), "I"))
    assert expl.pivot == "I"
    assert expl.frontier == ("E",)
    assert expl.pivot_to_interest is P
    # The frontier is the evidence alone, so only its actual seed sign
    # is enumerated.
    assert len(expl.branches) == 1
    assert expl.branches[0].assignment == (("E", P),)
    assert expl.branches[0].result is None


def test_recursive_explanations_for_ambiguous_frontier_members(
    fixture_net, fixture_query
):
    expl = pivotal_pruning(fixture_net, fixture_query, recursion_depth=1)
    children = {c.interest: c for c in expl.children}
    assert set(children) == {"G", "I"}
    child_i = children["I"]
    assert child_i.pivot == "I"
    assert child_i.frontier == ("H",)
    assert [(c.nodes, c.sign) for c in child_i.chains] == [
        (("H", "U", "I"), P),
        (("H", "W", "I"), M),
    ]
    assert child_i.children == ()
    child_g = children["G"]
    assert child_g.pivot == "G"
    assert child_g.frontier == ("I",)
    assert {(c.nodes, c.sign) for c in child_g.chains} == {
        (("I", "G"), P),
        (("I", "D", "G"), M),
    }


def test_zero_depth_suppresses_recursion(fixture_net, fixture_query):
    assert pivotal_pruning(fixture_net, fixture_query, recursion_depth=0).children == ()


def test_fixture_boundary_is_absent(fixture_net, fixture_query):
    rel = relevant_network(fixture_net, fixture_query)
    signs, _ = propagate(rel, fixture_query)
    assert boundary_node(rel, fixture_query, signs) is None


def test_boundary_on_unambiguous_chain():
    g = net("EXI", [("E", "X", P), ("X", "I", P)])
    query = Query({}, ("E", True), "I")
    signs, _ = propagate(g, query)
    assert boundary_node(g, query, signs) == "X"


def test_boundary_is_last_unambiguous_articulation():
    g = net(
        ["E", "K", "B1", "B2", "L", "I"],
        [
            ("E", "K", P),
            ("K", "B1", P),
            ("K", "B2", M),
            ("B1", "L", P),
            ("B2", "L", P),
            ("L", "I", P),
        ],
    )
    query = Query({}, ("E", True), "I")
    signs, _ = propagate(g, query)
    assert signs["L"] is A
    assert boundary_node(g, query, signs) == "K"


def test_construct_result_collapses_when_all_terms_agree():
    from qpn.pivotal import ChainSign

    chains = [ChainSign("R", ("R", "P"), P)]
    expl = construct_result(
        chains,
        ["R"],
        P,
        pivot="P",
        interest="I",
        evidence="E",
        evidence_sign=P,
    )
    by_assignment = {b.assignment: b for b in expl.branches}
    assert by_assignment[(("R", P),)].result is P
    assert by_assignment[(("R", M),)].result is M


# --- properties over the random corpus -----------------------------------

def _explained_cases(seed, count):
    rng = random.Random(seed)
    found = 0
    while found < count:
        g = random_dag(rng, n_lo=4, n_hi=10)
        query = random_query(rng, g)
        if query is None:
            continue
        expl = pivotal_pruning(g, query, recursion_depth=0)
        if expl is None:
            continue
        found += 1
        yield g, query, expl


def test_pivot_properties_on_random_corpus():
    rng = random.Random(4242)
    for g, query, expl in _explained_cases(4242, 60):
        rel = relevant_network(g, query)
        observations = query.all_observations()
        arts = articulation_nodes(rel)
        assert expl.pivot in arts | {query.interest}
        # Unique under permuted orderings.
        for _ in range(3):
            order = list(g.nodes)
            rng.shuffle(order)
            assert compute_pivot(rel, query, node_order=order) == expl.pivot
        # Each hypothetical pivot sign determines the interest sign.
        for seed_sign in (P, M):
            influence = net_influence(
                rel, expl.pivot, seed_sign, query.interest, observations
            )
            assert influence is sign_product(seed_sign, expl.pivot_to_interest)


def test_frontier_properties_on_random_corpus():
    for g, query, expl in _explained_cases(999, 60):
        rel = relevant_network(g, query)
        signs, _ = propagate(rel, query)
        pruned = pruned_network(rel, expl.pivot, query)
        resolvers = candidate_resolvers(pruned, expl.pivot, signs, query)
        expected = brute_frontier(
            pruned,
            query.evidence_node,
            expl.pivot,
            resolvers,
            set(query.observed_map),
        )
        assert set(expl.frontier) == expected
        assert expl.frontier
        for chain in expl.chains:
            assert chain.sign is not A
        for branch in expl.branches:
            if branch.result is not None:
                assert branch.result in (P, M)
            else:
                assert branch.positive and branch.negative
        # A single-member frontier clamped to a sign reproduces the
        # branch verdict under what-if propagation.
        if len(expl.frontier) == 1 and expl.frontier[0] != query.evidence_node:
            member = expl.frontier[0]
            for branch in expl.branches:
                assigned = dict(branch.assignment)[member]
                simulated = what_if(
                    pruned, member, assigned, query.all_observations()
                )[expl.pivot]
                if branch.result is None:
                    assert simulated is A
                else:
                    assert simulated is branch.result
