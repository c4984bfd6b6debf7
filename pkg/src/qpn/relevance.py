"""Relevance pruning: isolate the sub-network that carries the impact
of new evidence on the node of interest.

Three nested notions of relevance are distinguished for a node, given
previous observations, new evidence E and interest node I:

* structurally relevant: not d-separated from I given all observations;
* computationally relevant (requisite): its table or observed value is
  needed to compute I's posterior;
* dynamically relevant: it lies on an unblocked chain from E to I, so
  it partakes in the impact of E on I.

The dynamically relevant nodes induce the relevant network, computed by
requisite-node pruning followed by nuisance-node removal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from qpn.errors import EvidenceSeparatedError, QueryError
from qpn.network import Network, NodeId, Query
from qpn.propagation import induce_intercausal
from qpn.trails import (
    TrailGraph,
    active_trail_nodes,
    collider_openers,
    d_separated,
)

__all__ = [
    "RelevanceClass",
    "bayes_ball",
    "nuisance_nodes",
    "relevant_network",
    "classify",
]


@dataclass(frozen=True)
class RelevanceClass:
    structural: bool
    computational: bool
    dynamic: bool


def bayes_ball(
    net: Network, observed: set[NodeId], interest: NodeId
) -> set[NodeId]:
    """Requisite nodes for the interest posterior given the observed set.

    Implements the ball-bouncing rules: the ball passes through
    unobserved nodes (up and down when arriving from a child, down only
    when arriving from a parent) and bounces back into the parents of
    an observed node it reaches from a parent.  Returns the nodes whose
    tables are marked needed plus the observed nodes the ball visited.
    """
    if interest in observed:
        raise QueryError("interest node must be unobserved")
    for node in set(observed) | {interest}:
        if node not in net:
            raise QueryError(f"unknown node {node!r}")
    top: set[NodeId] = set()
    bottom: set[NodeId] = set()
    visited: set[NodeId] = set()
    seen: set[tuple[NodeId, str]] = set()
    queue: deque[tuple[NodeId, str]] = deque([(interest, "child")])
    while queue:
        node, came_from = queue.popleft()
        if (node, came_from) in seen:
            continue
        seen.add((node, came_from))
        visited.add(node)
        if came_from == "child":
            if node in observed:
                continue
            if node not in top:
                top.add(node)
                for parent in net.parents(node):
                    queue.append((parent, "child"))
            if node not in bottom:
                bottom.add(node)
                for child in net.children(node):
                    queue.append((child, "parent"))
        else:
            if node in observed:
                if node not in top:
                    top.add(node)
                    for parent in net.parents(node):
                        queue.append((parent, "child"))
            elif node not in bottom:
                bottom.add(node)
                for child in net.children(node):
                    queue.append((child, "parent"))
    return top | (set(observed) & visited)


def _reasoning_chain_nodes(net: Network, query: Query) -> set[NodeId]:
    """Nodes on some chain from the evidence to the interest node that
    previous observations do not block.

    Intercausal edges induced by any current observation count as
    chain links; blocking is evaluated against the previous
    observations only.
    """
    observations = query.all_observations()
    edges = induce_intercausal(net, observations)
    tg = TrailGraph(net, edges)
    previous = frozenset(query.observed_map)
    openers = collider_openers(net, previous)
    return active_trail_nodes(
        tg, query.evidence_node, query.interest, previous, openers
    )


def nuisance_nodes(
    net: Network, query: Query, requisite: set[NodeId]
) -> set[NodeId]:
    """Requisite nodes lying on no reasoning chain from the evidence to
    the interest node."""
    on_chain = _reasoning_chain_nodes(net, query)
    return {node for node in requisite if node not in on_chain}


def relevant_network(net: Network, query: Query) -> Network:
    """The sub-network of nodes on unblocked evidence-to-interest
    chains, with arcs and synergies restricted to them.

    Raises EvidenceSeparatedError when every chain is blocked: there is
    no impact to analyse and the relevant network would be empty.
    """
    query.check_against(net)
    requisite = bayes_ball(
        net, set(query.all_observations()), query.interest
    )
    nuisances = nuisance_nodes(net, query, requisite)
    keep = (requisite - nuisances) | {query.evidence_node}
    if query.interest not in keep:
        raise EvidenceSeparatedError(query.evidence_node, query.interest)
    return net.subnetwork(keep)


def classify(net: Network, query: Query) -> dict[NodeId, RelevanceClass]:
    """Relevance class of every node with respect to the query's
    interest node.

    The evidence node itself is d-separated from everything by being
    observed, hence structurally irrelevant, while remaining
    computationally and dynamically relevant whenever it has impact.
    """
    query.check_against(net)
    observations = set(query.all_observations())
    requisite = bayes_ball(net, observations, query.interest)
    try:
        dynamic_nodes = set(relevant_network(net, query).nodes)
    except EvidenceSeparatedError:
        dynamic_nodes = set()
    classes: dict[NodeId, RelevanceClass] = {}
    for node in net.nodes:
        if node == query.interest:
            structural = True
        else:
            structural = not d_separated(net, node, query.interest, observations)
        classes[node] = RelevanceClass(
            structural=structural,
            computational=node in requisite,
            dynamic=node in dynamic_nodes,
        )
    return classes
