"""Sign propagation over a network.

Entering an observation seeds the observed node with ``+`` (true) or
``-`` (false); the seed's effect then spreads by message passing along
open reasoning chains.  A message travels one simple chain: at each
node it folds its running sign product into the node's sign and
continues over every link to a node not already on its chain and not
observed.  A message that arrived from a parent never continues to
another parent through the node itself: influence crosses a common
child only via the intercausal edges induced by product synergies on
observed children.  The fixpoint sign of a node is therefore the
parallel combination of the sign products of all open chains reaching
it, which is what makes pruning to the relevant network lossless.

A node's sign only ever moves along 0 -> {+, -} -> ?, so each node
changes sign at most twice and propagation always terminates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from qpn.errors import QueryError
from qpn.network import Network, NodeId, ProductSynergy, Query
from qpn.signs import Sign, sign_product, sign_sum
from qpn.trails import Link, TrailGraph

__all__ = [
    "IntercausalEdge",
    "TraceMessage",
    "PropagationTrace",
    "induce_intercausal",
    "propagate",
    "net_influence",
]

SignMap = dict[NodeId, Sign]


@dataclass(frozen=True, order=True)
class IntercausalEdge:
    """Undirected influence between two parents of an observed child."""

    a: NodeId
    b: NodeId
    sign: Sign
    source: ProductSynergy


@dataclass(frozen=True)
class TraceMessage:
    sender: NodeId
    receiver: NodeId
    sign: Sign


@dataclass
class PropagationTrace:
    """Delivered messages plus per-node visit and sign-change counts."""

    messages: list[TraceMessage] = field(default_factory=list)
    visits: dict[NodeId, int] = field(default_factory=dict)
    sign_changes: dict[NodeId, int] = field(default_factory=dict)

    def record(self, sender: NodeId, receiver: NodeId, sign: Sign, changed: bool):
        self.messages.append(TraceMessage(sender, receiver, sign))
        self.visits[receiver] = self.visits.get(receiver, 0) + 1
        if changed:
            self.sign_changes[receiver] = self.sign_changes.get(receiver, 0) + 1

    def lines(self) -> list[str]:
        return [
            f"{m.sender} -> {m.receiver} : {m.sign.value}" for m in self.messages
        ]


def induce_intercausal(
    net: Network, observations: Mapping[NodeId, bool]
) -> tuple[IntercausalEdge, ...]:
    """Intercausal edges induced by the given observed values.

    One edge per synergy whose child is observed with the synergy's
    recorded value; the edge carries the synergy's sign.
    """
    edges = []
    for syn in net.synergies:
        if observations.get(syn.child) == syn.child_value:
            edges.append(IntercausalEdge(syn.pair[0], syn.pair[1], syn.sign, syn))
    return tuple(sorted(edges))


def _run(
    net: Network,
    origin: NodeId,
    seed: Sign,
    observed: frozenset[NodeId],
    edges: tuple[IntercausalEdge, ...],
    node_order: Sequence[NodeId] | None,
) -> tuple[SignMap, PropagationTrace]:
    # Every message remembers the chain it travelled, so influence
    # spreads along simple reasoning chains only: a node's final sign
    # is the parallel combination of the sign products of all open
    # chains from the seeded node.  Forwarding a node's accumulated
    # sign instead (with no chain memory) lets information walk out of
    # a node and back into it over structures that carry no actual
    # influence, which both blurs results and breaks the guarantee
    # that pruning to the relevant network preserves them.
    tg = TrailGraph(net, edges)
    if node_order is None:
        rank = None
    else:
        rank = {n: i for i, n in enumerate(node_order)}
    signs: SignMap = {n: Sign.ZERO for n in net.nodes}
    trace = PropagationTrace()

    def ordered(links: tuple[Link, ...]) -> tuple[Link, ...]:
        if rank is None:
            return links
        return tuple(sorted(links, key=lambda l: (rank.get(l.peer, 0), l.peer, l.kind)))

    def deliver(sender: NodeId, node: NodeId, message: Sign, arrival: str,
                on_chain: set[NodeId]) -> None:
        updated = sign_sum(signs[node], message)
        trace.record(sender, node, message, updated != signs[node])
        signs[node] = updated
        assert trace.sign_changes.get(node, 0) <= 2
        on_chain.add(node)
        for link in ordered(tg.links(node)):
            if link.peer in on_chain or link.peer in observed:
                continue
            # A chain never crosses a common child: a message arriving
            # from a parent stops short of the other parents; observed
            # children transmit between parents only over the induced
            # intercausal edges.
            if arrival == "down" and link.kind == "in":
                continue
            outgoing = sign_product(message, link.sign)
            if outgoing is Sign.ZERO:
                continue
            deliver(node, link.peer, outgoing,
                    "down" if link.kind == "out" else "up", on_chain)
        on_chain.remove(node)

    deliver(origin, origin, seed, "seed", set())
    return signs, trace


def propagate(
    net: Network, query: Query, *, node_order: Sequence[NodeId] | None = None
) -> tuple[SignMap, PropagationTrace]:
    """Propagate the query's new evidence through the network.

    Returns the fixpoint sign of every node plus the message trace.
    The fixpoint is independent of neighbour visiting order;
    ``node_order`` only permutes the trace, which tests exploit.
    """
    for node in (query.evidence_node, query.interest):
        if node not in net:
            raise QueryError(f"query references unknown node {node!r}")
    # Observed nodes absent from the network (typically pruned away by
    # relevance restriction) cannot block anything here and are ignored.
    observations = {
        n: v for n, v in query.all_observations().items() if n in net
    }
    edges = induce_intercausal(net, observations)
    seed = Sign.PLUS if query.evidence_value else Sign.MINUS
    return _run(
        net,
        query.evidence_node,
        seed,
        frozenset(observations),
        edges,
        node_order,
    )


def what_if(
    net: Network,
    source: NodeId,
    seed: Sign,
    observed: Mapping[NodeId, bool],
    *,
    node_order: Sequence[NodeId] | None = None,
) -> SignMap:
    """Sign map resulting from a hypothetical seed at ``source``.

    The already-observed nodes block trails (their signs are not
    re-seeded) and the source itself is treated as observed so that no
    message echoes back into it.  Intercausal edges are those induced
    by the real observations.
    """
    if source not in net:
        raise QueryError(f"unknown node {source!r}")
    edges = induce_intercausal(net, observed)
    blocked = frozenset(observed) | {source}
    signs, _ = _run(net, source, seed, blocked, edges, node_order)
    return signs


def net_influence(
    net: Network,
    source: NodeId,
    seed: Sign,
    target: NodeId,
    observed: Mapping[NodeId, bool],
    *,
    node_order: Sequence[NodeId] | None = None,
) -> Sign:
    """Sign of the net influence of ``source`` on ``target``: the sign
    ``target`` receives when ``source`` is seeded by ``seed``."""
    if target not in net:
        raise QueryError(f"unknown node {target!r}")
    return what_if(net, source, seed, observed, node_order=node_order)[target]
