"""Trail-level machinery: blocking, separation, active-trail search.

A trail is a simple path over the network ignoring arc direction; it
may also traverse undirected intercausal edges.  An interior node with
both trail links pointing into it is head-to-head; every other interior
node is serial or diverging.  Blocking semantics are standard: a
serial/diverging interior node blocks when observed, a head-to-head
node blocks unless it may be traversed per the caller's collider rule.

Two collider rules are used by the engine.  Separation semantics open a
head-to-head node when it or one of its descendants is observed; they
define the relevant network.  Message semantics never traverse a
head-to-head meeting of two arcs (sign messages cross colliders only
via explicit intercausal edges); they define reasoning chains.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, NamedTuple, Sequence

from qpn.errors import QueryError
from qpn.network import Network, NodeId
from qpn.signs import Sign

__all__ = [
    "Link",
    "TrailGraph",
    "collider_openers",
    "reachable_states",
    "iter_active_trails",
    "active_trail_nodes",
    "d_separated",
    "chain_blocked",
]

# Arrival direction at a node: "down" means the last link was an arc
# pointing into the node; "up" covers out-arcs and intercausal edges.
_DOWN = "down"
_UP = "up"


class Link(NamedTuple):
    peer: NodeId
    kind: str  # "out": arc node->peer; "in": arc peer->node; "edge": undirected
    sign: Sign


class TrailGraph:
    """Adjacency view of a network plus optional intercausal edges."""

    def __init__(self, net: Network, edges: Iterable = ()):
        self.net = net
        adj: dict[NodeId, list[Link]] = {n: [] for n in net.nodes}
        for arc in net.arcs:
            adj[arc.tail].append(Link(arc.head, "out", arc.sign))
            adj[arc.head].append(Link(arc.tail, "in", arc.sign))
        for edge in edges:
            a, b, sign = edge.a, edge.b, edge.sign
            adj[a].append(Link(b, "edge", sign))
            adj[b].append(Link(a, "edge", sign))
        self.adj = {n: tuple(sorted(links)) for n, links in adj.items()}

    def links(self, node: NodeId) -> tuple[Link, ...]:
        return self.adj[node]


def collider_openers(net: Network, observed: Iterable[NodeId]) -> frozenset[NodeId]:
    """Nodes whose head-to-head meetings are open under separation
    semantics: the observed nodes and all their ancestors."""
    openers = set(observed)
    stack = [p for n in openers if n in net for p in net.parents(n)]
    while stack:
        node = stack.pop()
        if node in openers:
            continue
        openers.add(node)
        stack.extend(net.parents(node))
    return frozenset(openers)


def _arrival(link: Link) -> str:
    return _DOWN if link.kind == "out" else _UP


def _junction_open(
    node: NodeId,
    arrival: str,
    depart_kind: str,
    observed: frozenset[NodeId],
    openers: frozenset[NodeId],
) -> bool:
    if arrival == _DOWN and depart_kind == "in":
        return node in openers
    return node not in observed


def reachable_states(
    tg: TrailGraph,
    start: NodeId,
    observed: frozenset[NodeId],
    openers: frozenset[NodeId],
) -> set[tuple[NodeId, str]]:
    """All (node, arrival-direction) states on unblocked partial trails
    emanating from ``start``.  ``start`` itself is never blocked."""
    seen: set[tuple[NodeId, str]] = set()
    queue: deque[tuple[NodeId, str]] = deque()
    for link in tg.links(start):
        state = (link.peer, _arrival(link))
        if state not in seen:
            seen.add(state)
            queue.append(state)
    while queue:
        node, arrival = queue.popleft()
        for link in tg.links(node):
            if not _junction_open(node, arrival, link.kind, observed, openers):
                continue
            state = (link.peer, _arrival(link))
            if state not in seen:
                seen.add(state)
                queue.append(state)
    return seen


def iter_active_trails(
    tg: TrailGraph,
    src: NodeId,
    dst: NodeId,
    observed: Iterable[NodeId],
    openers: frozenset[NodeId] | None = None,
) -> Iterator[list[tuple[NodeId, Link | None]]]:
    """Yield every unblocked simple trail from ``src`` to ``dst``.

    ``openers`` selects the collider rule: pass the separation openers
    for d-separation semantics, or leave it empty for message
    semantics.  Trails are yielded as (node, incoming-link) pairs; the
    search is exact (simple trails only) and prunes with a reverse
    reachability sweep, so it stays fast on the sparse networks this
    engine targets.
    """
    observed_set = frozenset(observed)
    opener_set = openers if openers is not None else frozenset()
    if src == dst:
        return
    istates = reachable_states(tg, dst, observed_set, opener_set)

    def joinable(node: NodeId, arrival: str) -> bool:
        if node == dst:
            return True
        for state_node, i_arrival in (
            (node, _DOWN),
            (node, _UP),
        ):
            if (state_node, i_arrival) not in istates:
                continue
            if arrival == _DOWN and i_arrival == _DOWN:
                if node in opener_set:
                    return True
            elif node not in observed_set:
                return True
        return False

    path: list[tuple[NodeId, Link | None]] = [(src, None)]
    on_path = {src}

    def walk(node: NodeId, arrival: str | None) -> Iterator[list]:
        for link in tg.links(node):
            peer = link.peer
            if peer in on_path:
                continue
            if arrival is not None and not _junction_open(
                node, arrival, link.kind, observed_set, opener_set
            ):
                continue
            peer_arrival = _arrival(link)
            if peer == dst:
                yield path + [(peer, link)]
                continue
            if not joinable(peer, peer_arrival):
                continue
            path.append((peer, link))
            on_path.add(peer)
            yield from walk(peer, peer_arrival)
            path.pop()
            on_path.remove(peer)

    yield from walk(src, None)


def active_trail_nodes(
    tg: TrailGraph,
    src: NodeId,
    dst: NodeId,
    observed: Iterable[NodeId],
    openers: frozenset[NodeId] | None = None,
) -> set[NodeId]:
    """All nodes lying on at least one unblocked trail from ``src`` to
    ``dst``."""
    nodes: set[NodeId] = set()
    for trail in iter_active_trails(tg, src, dst, observed, openers):
        nodes.update(node for node, _ in trail)
    return nodes


def d_separated(
    net: Network, x: NodeId, y: NodeId, observed: Iterable[NodeId]
) -> bool:
    """True when every trail between ``x`` and ``y`` is blocked.

    An observed endpoint carries no dependence, so it is separated from
    everything else by convention.
    """
    if x == y:
        raise ValueError("d-separation requires two distinct nodes")
    observed_set = frozenset(observed)
    for node in (x, y):
        if node not in net:
            raise QueryError(f"unknown node {node!r}")
    if x in observed_set or y in observed_set:
        return True
    tg = TrailGraph(net)
    openers = collider_openers(net, observed_set)
    states = reachable_states(tg, x, observed_set, openers)
    return all(node != y for node, _ in states)


def chain_blocked(
    net: Network, chain: Sequence[NodeId], observed: Iterable[NodeId]
) -> bool:
    """Whether the given trail is blocked by the observed nodes.

    ``chain`` must be a simple trail over the network's arcs (direction
    ignored); anything else is an input error.
    """
    if len(chain) < 2 or len(set(chain)) != len(chain):
        raise ValueError("chain must be a simple trail of at least two nodes")
    for node in chain:
        if node not in net:
            raise QueryError(f"unknown node {node!r}")
    into = []  # whether each consecutive link points into the later node
    for a, b in zip(chain, chain[1:]):
        if net.has_arc(a, b):
            into.append(True)
        elif net.has_arc(b, a):
            into.append(False)
        else:
            raise ValueError(f"chain step {a!r}->{b!r} is not an arc")
    observed_set = frozenset(observed)
    openers = collider_openers(net, observed_set)
    for i in range(1, len(chain) - 1):
        node = chain[i]
        head_to_head = into[i - 1] and not into[i]
        if head_to_head:
            if node not in openers:
                return True
        elif node in observed_set:
            return True
    return False
