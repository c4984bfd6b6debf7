"""Trade-off isolation: pivot node, resolution frontier, symbolic result.

When propagation leaves the node of interest ambiguous, the ambiguity
originates in conflicting reasoning chains somewhere between the
evidence and the interest node.  The pivot node is the node closest to
the evidence whose (hypothetical) unambiguous sign would fix the sign
of the interest node; everything beyond it can be disregarded.  The
resolution frontier is the set of nodes whose signs, together with the
relative strengths of their chains of influence on the pivot, determine
the pivot's sign.  The result is a symbolic conditional per frontier
sign assignment, never a number.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from qpn.errors import AmbiguousInfluenceError, PivotOrderError
from qpn.network import Network, NodeId, Query
from qpn.propagation import SignMap, induce_intercausal, propagate, what_if
from qpn.relevance import relevant_network
from qpn.signs import Sign, sign_product
from qpn.trails import TrailGraph, iter_active_trails

__all__ = [
    "ChainSign",
    "Branch",
    "Explanation",
    "articulation_nodes",
    "candidate_order",
    "compute_pivot",
    "pruned_network",
    "candidate_resolvers",
    "resolution_frontier",
    "chain_signs",
    "construct_result",
    "boundary_node",
    "pivotal_pruning",
]


@dataclass(frozen=True, order=True)
class ChainSign:
    """One reasoning chain from a resolver to the pivot and its sign."""

    resolver: NodeId
    nodes: tuple[NodeId, ...]
    sign: Sign


@dataclass(frozen=True)
class Branch:
    """The pivot's sign under one assignment of frontier signs.

    ``result`` is the determined sign when all contributing terms agree
    (or vanish); it is ``None`` when the branch is conditional on the
    relative strengths of the positive and negative term combinations,
    in which case equal strengths resolve to '+'.
    """

    assignment: tuple[tuple[NodeId, Sign], ...]
    positive: tuple[ChainSign, ...]
    negative: tuple[ChainSign, ...]
    result: Sign | None

    def to_payload(self) -> dict:
        return {
            "assignment": {n: s.value for n, s in self.assignment},
            "positive": [_chain_payload(t) for t in self.positive],
            "negative": [_chain_payload(t) for t in self.negative],
            "result": "conditional" if self.result is None else self.result.value,
        }


@dataclass(frozen=True)
class Explanation:
    """Symbolic account of an unresolved trade-off.

    The sign of the interest node follows from the pivot's sign via
    ``pivot_to_interest``; ``children`` recursively explain ambiguous
    frontier members.
    """

    evidence: NodeId
    interest: NodeId
    pivot: NodeId
    frontier: tuple[NodeId, ...]
    chains: tuple[ChainSign, ...]
    branches: tuple[Branch, ...]
    pivot_to_interest: Sign
    children: tuple["Explanation", ...] = ()

    def to_payload(self) -> dict:
        return {
            "evidence": self.evidence,
            "interest": self.interest,
            "pivot": self.pivot,
            "frontier": list(self.frontier),
            "chains": [_chain_payload(c) for c in self.chains],
            "branches": [b.to_payload() for b in self.branches],
            "pivot_to_interest": self.pivot_to_interest.value,
            "children": [c.to_payload() for c in self.children],
        }


def _chain_payload(chain: ChainSign) -> dict:
    return {
        "resolver": chain.resolver,
        "nodes": list(chain.nodes),
        "sign": chain.sign.value,
    }


def _reject_ambiguous_links(net: Network) -> None:
    for arc in net.arcs:
        if arc.sign is Sign.AMBIGUOUS:
            raise AmbiguousInfluenceError(
                f"arc {arc.tail}->{arc.head} has an ambiguous sign; "
                "pivot analysis requires unambiguous links"
            )
    for syn in net.synergies:
        if syn.sign is Sign.AMBIGUOUS:
            raise AmbiguousInfluenceError(
                f"synergy {{{syn.pair[0]},{syn.pair[1]}}}/{syn.child} has an "
                "ambiguous sign; pivot analysis requires unambiguous links"
            )


def articulation_nodes(net: Network, edges: Iterable = ()) -> set[NodeId]:
    """Nodes whose removal disconnects the undirected view of the net."""
    adj: dict[NodeId, set[NodeId]] = {n: set() for n in net.nodes}
    for arc in net.arcs:
        adj[arc.tail].add(arc.head)
        adj[arc.head].add(arc.tail)
    for edge in edges:
        adj[edge.a].add(edge.b)
        adj[edge.b].add(edge.a)
    neighbours = {n: tuple(sorted(peers)) for n, peers in adj.items()}

    disc: dict[NodeId, int] = {}
    low: dict[NodeId, int] = {}
    result: set[NodeId] = set()
    counter = 0
    for root in net.nodes:
        if root in disc:
            continue
        root_children = 0
        disc[root] = low[root] = counter
        counter += 1
        stack: list[tuple[NodeId, NodeId | None, Iterable[NodeId]]] = [
            (root, None, iter(neighbours[root]))
        ]
        while stack:
            node, parent, peers = stack[-1]
            advanced = False
            for peer in peers:
                if peer == parent:
                    continue
                if peer not in disc:
                    disc[peer] = low[peer] = counter
                    counter += 1
                    if node == root:
                        root_children += 1
                    stack.append((peer, node, iter(neighbours[peer])))
                    advanced = True
                    break
                low[node] = min(low[node], disc[peer])
            if not advanced:
                stack.pop()
                if stack:
                    above = stack[-1][0]
                    low[above] = min(low[above], low[node])
                    if above != root and low[node] >= disc[above]:
                        result.add(above)
        if root_children >= 2:
            result.add(root)
    return result


def candidate_order(rel_net: Network, query: Query) -> list[NodeId]:
    """Articulation nodes ordered from the evidence toward the interest
    node, with the interest node appended last.

    Every unblocked reasoning chain visits the articulation nodes of a
    relevant network in the same order, so one witness chain fixes it;
    an articulation node missing from the witness means the input was
    not a proper relevant network.
    """
    observations = query.all_observations()
    edges = induce_intercausal(rel_net, observations)
    arts = articulation_nodes(rel_net, edges)
    arts.discard(query.interest)
    tg = TrailGraph(rel_net, edges)
    witness = next(
        iter_active_trails(
            tg, query.evidence_node, query.interest, frozenset(observations)
        ),
        None,
    )
    if witness is None:
        raise PivotOrderError(
            "no unblocked reasoning chain from evidence to interest"
        )
    witness_nodes = [n for n, _ in witness]
    missing = arts - set(witness_nodes)
    if missing:
        raise PivotOrderError(
            "articulation nodes absent from a reasoning chain: "
            + ",".join(sorted(missing))
        )
    position = {n: i for i, n in enumerate(witness_nodes)}
    return sorted(arts, key=position.get) + [query.interest]


def _pivot_search(
    rel_net: Network,
    query: Query,
    rel_signs: SignMap,
    *,
    node_order: Sequence[NodeId] | None = None,
) -> tuple[NodeId, Sign]:
    """Locate the pivot and the sign it passes on to the interest node.

    Walks the candidate ordering from the interest side toward the
    evidence, seeding '+' at each candidate; the first candidate whose
    successor stays ambiguous identifies the pivot.  If every seeding
    determines its successor, the ambiguity enters at the first
    candidate, which is then the pivot.
    """
    interest = query.interest
    cands = candidate_order(rel_net, query)
    observations = query.all_observations()
    runs: dict[int, SignMap] = {}
    m = len(cands)
    for i in range(m - 2, -1, -1):
        signs_i = what_if(
            rel_net, cands[i], Sign.PLUS, observations, node_order=node_order
        )
        runs[i] = signs_i
        successor = cands[i + 1]
        if signs_i[successor] is Sign.AMBIGUOUS:
            pivot = successor
            if rel_signs[pivot] is not Sign.AMBIGUOUS:
                raise PivotOrderError(
                    f"candidate {pivot!r} is not ambiguous under the evidence"
                )
            if pivot == interest:
                return pivot, Sign.PLUS
            return pivot, runs[i + 1][interest]
        if signs_i[interest] is Sign.AMBIGUOUS:
            raise PivotOrderError(
                f"seeding {cands[i]!r} fixed its successor but left the "
                "interest node ambiguous"
            )
    pivot = cands[0]
    if rel_signs[pivot] is not Sign.AMBIGUOUS:
        raise PivotOrderError(
            f"candidate {pivot!r} is not ambiguous under the evidence"
        )
    if pivot == interest:
        return pivot, Sign.PLUS
    return pivot, runs[0][interest]


def compute_pivot(
    rel_net: Network,
    query: Query,
    *,
    node_order: Sequence[NodeId] | None = None,
) -> NodeId | None:
    """The pivot node of a relevant network, or None when the interest
    node's propagated sign is already unambiguous (nothing to explain)."""
    _reject_ambiguous_links(rel_net)
    rel_signs, _ = propagate(rel_net, query)
    if rel_signs[query.interest] is not Sign.AMBIGUOUS:
        return None
    pivot, _ = _pivot_search(rel_net, query, rel_signs, node_order=node_order)
    return pivot


def pruned_network(rel_net: Network, pivot: NodeId, query: Query) -> Network:
    """The part of the relevant network between the evidence and the
    pivot: the pivot's evidence-side component plus the pivot itself."""
    observations = query.all_observations()
    edges = induce_intercausal(rel_net, observations)
    adj: dict[NodeId, set[NodeId]] = {n: set() for n in rel_net.nodes}
    for arc in rel_net.arcs:
        adj[arc.tail].add(arc.head)
        adj[arc.head].add(arc.tail)
    for edge in edges:
        adj[edge.a].add(edge.b)
        adj[edge.b].add(edge.a)
    component = {query.evidence_node}
    stack = [query.evidence_node]
    while stack:
        node = stack.pop()
        for peer in adj[node]:
            if peer != pivot and peer not in component:
                component.add(peer)
                stack.append(peer)
    component.add(pivot)
    return rel_net.subnetwork(component)


def candidate_resolvers(
    pruned: Network, pivot: NodeId, signs: SignMap, query: Query
) -> set[NodeId]:
    """Nodes that may lie at the basis of the pivot's ambiguity: the
    evidence node, plus every other ambiguous node where two or more
    influences meet."""
    resolvers = {query.evidence_node}
    for node in pruned.nodes:
        if node == pivot:
            continue
        if signs.get(node) is Sign.AMBIGUOUS and len(pruned.parents(node)) >= 2:
            resolvers.add(node)
    return resolvers


def _grouped_chains(
    pruned: Network, pivot: NodeId, members: set[NodeId], query: Query
) -> dict[NodeId, dict[tuple[NodeId, ...], Sign]]:
    """Reasoning chains from each member to the pivot, taken as the
    member-free tails of unblocked evidence-to-pivot chains.

    Every chain is attributed to the last member it visits, so no chain
    tail passes through another member and no influence is counted
    twice.
    """
    observations = query.all_observations()
    edges = induce_intercausal(pruned, observations)
    tg = TrailGraph(pruned, edges)
    grouped: dict[NodeId, dict[tuple[NodeId, ...], Sign]] = {}
    for trail in iter_active_trails(
        tg, query.evidence_node, pivot, frozenset(observations)
    ):
        nodes = [n for n, _ in trail]
        member_positions = [i for i, n in enumerate(nodes) if n in members]
        if not member_positions:
            continue
        last = member_positions[-1]
        sign = Sign.PLUS
        for _, link in trail[last + 1 :]:
            sign = sign_product(sign, link.sign)
        grouped.setdefault(nodes[last], {})[tuple(nodes[last:])] = sign
    return grouped


def resolution_frontier(
    pruned: Network, pivot: NodeId, resolvers: set[NodeId], query: Query
) -> set[NodeId]:
    """The resolvers whose signs directly determine the separate
    influences on the pivot: those reachable as the last resolver on
    some unblocked chain from the evidence to the pivot."""
    return set(_grouped_chains(pruned, pivot, resolvers, query))


def chain_signs(
    pruned: Network, frontier: set[NodeId], pivot: NodeId, query: Query
) -> list[ChainSign]:
    """One entry per distinct reasoning chain from a frontier member to
    the pivot that passes through no other frontier member; the sign is
    the product of the link signs along the chain."""
    grouped = _grouped_chains(pruned, pivot, set(frontier), query)
    return [
        ChainSign(resolver, chain, sign)
        for resolver in sorted(grouped)
        for chain, sign in sorted(grouped[resolver].items())
    ]


def construct_result(
    chains: Sequence[ChainSign],
    frontier: Iterable[NodeId],
    pivot_to_interest: Sign,
    *,
    pivot: NodeId,
    interest: NodeId,
    evidence: NodeId,
    evidence_sign: Sign,
    children: tuple[Explanation, ...] = (),
) -> Explanation:
    """Build the symbolic conditional result for the pivot node.

    For each assignment of '+'/'-' to the frontier, the chain terms are
    split by resulting sign; opposite partitions yield a conditional on
    their relative strengths, a single surviving partition determines
    the pivot's sign outright.  When the frontier is the evidence node
    alone, only its actual seed sign is enumerated.
    """
    chains = tuple(chains)
    if not chains:
        raise ValueError("cannot construct a result without chains")
    members = tuple(sorted(frontier))
    if members == (evidence,):
        assignments: Iterable[tuple[Sign, ...]] = [(evidence_sign,)]
    else:
        assignments = itertools.product(
            (Sign.PLUS, Sign.MINUS), repeat=len(members)
        )
    branches = []
    for assigned in assignments:
        by_node = dict(zip(members, assigned))
        positive: list[ChainSign] = []
        negative: list[ChainSign] = []
        for chain in chains:
            term = sign_product(by_node[chain.resolver], chain.sign)
            if term is Sign.PLUS:
                positive.append(ChainSign(chain.resolver, chain.nodes, term))
            elif term is Sign.MINUS:
                negative.append(ChainSign(chain.resolver, chain.nodes, term))
        if positive and negative:
            result = None
        elif positive:
            result = Sign.PLUS
        elif negative:
            result = Sign.MINUS
        else:
            result = Sign.ZERO
        branches.append(
            Branch(
                assignment=tuple(zip(members, assigned)),
                positive=tuple(positive),
                negative=tuple(negative),
                result=result,
            )
        )
    return Explanation(
        evidence=evidence,
        interest=interest,
        pivot=pivot,
        frontier=members,
        chains=chains,
        branches=tuple(branches),
        pivot_to_interest=pivot_to_interest,
        children=children,
    )


def boundary_node(
    rel_net: Network, query: Query, signs: SignMap
) -> NodeId | None:
    """The articulation node closest to the interest node that already
    has an unambiguous propagated sign; None when there is none."""
    cands = candidate_order(rel_net, query)
    for node in reversed(cands[:-1]):
        if signs[node] is not Sign.AMBIGUOUS:
            return node
    return None


def pivotal_pruning(
    net: Network, query: Query, recursion_depth: int = 1
) -> Explanation | None:
    """Full trade-off analysis for one query.

    Returns None when propagation already gives the interest node an
    unambiguous sign.  Otherwise isolates the relevant network, finds
    the pivot, prunes to its evidence side, identifies the resolution
    frontier and chain signs, and builds the symbolic result; ambiguous
    frontier members are explained recursively while depth remains.
    """
    query.check_against(net)
    _reject_ambiguous_links(net)
    full_signs, _ = propagate(net, query)
    if full_signs[query.interest] is not Sign.AMBIGUOUS:
        return None
    rel_net = relevant_network(net, query)
    rel_signs, _ = propagate(rel_net, query)
    pivot, pivot_to_interest = _pivot_search(rel_net, query, rel_signs)
    pruned = pruned_network(rel_net, pivot, query)
    resolvers = candidate_resolvers(pruned, pivot, rel_signs, query)
    grouped = _grouped_chains(pruned, pivot, resolvers, query)
    frontier = tuple(sorted(grouped))
    chains = [
        ChainSign(resolver, chain, sign)
        for resolver in frontier
        for chain, sign in sorted(grouped[resolver].items())
    ]
    children: list[Explanation] = []
    if recursion_depth > 0:
        for member in frontier:
            if member == query.evidence_node:
                continue
            if rel_signs.get(member) is not Sign.AMBIGUOUS:
                continue
            child = pivotal_pruning(
                net,
                Query(query.observed_map, query.evidence, member),
                recursion_depth - 1,
            )
            if child is not None:
                children.append(child)
    evidence_sign = Sign.PLUS if query.evidence_value else Sign.MINUS
    return construct_result(
        chains,
        frontier,
        pivot_to_interest,
        pivot=pivot,
        interest=query.interest,
        evidence=query.evidence_node,
        evidence_sign=evidence_sign,
        children=tuple(children),
    )
