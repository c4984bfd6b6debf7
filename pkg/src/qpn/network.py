"""Network data model: nodes, signed influence arcs, product synergies.

Variables are binary.  A network is a DAG of influence arcs plus a set
of product synergies; it is immutable after construction and safe to
share across concurrent queries.  Construction is permissive so that
``validate`` can report problems as data; inference entry points expect
a network for which ``validate`` returns no violations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from qpn.errors import NetworkFormatError, QueryError
from qpn.signs import Sign

__all__ = [
    "NodeId",
    "InfluenceArc",
    "ProductSynergy",
    "Network",
    "Query",
    "validate",
    "loads",
    "dumps",
]

NodeId = str


@dataclass(frozen=True, order=True)
class InfluenceArc:
    """Directed qualitative influence of ``tail`` on ``head``."""

    tail: NodeId
    head: NodeId
    sign: Sign


@dataclass(frozen=True, order=True)
class ProductSynergy:
    """Interaction between two parents given an observed child value.

    When ``child`` is observed to have ``child_value``, the pair gains
    an undirected intercausal link carrying ``sign``.
    """

    pair: tuple[NodeId, NodeId]
    child: NodeId
    child_value: bool
    sign: Sign

    def __post_init__(self) -> None:
        object.__setattr__(self, "pair", tuple(sorted(self.pair)))


class Network:
    """Immutable DAG of binary variables with signed arcs and synergies."""

    def __init__(
        self,
        nodes: Iterable[NodeId],
        arcs: Iterable[InfluenceArc] = (),
        synergies: Iterable[ProductSynergy] = (),
    ):
        self.nodes: tuple[NodeId, ...] = tuple(sorted(set(nodes)))
        self.arcs: tuple[InfluenceArc, ...] = tuple(sorted(arcs))
        self.synergies: tuple[ProductSynergy, ...] = tuple(sorted(synergies))
        self._node_set = frozenset(self.nodes)
        self._arc_sign: dict[tuple[NodeId, NodeId], Sign] = {}
        parents: dict[NodeId, list[NodeId]] = {n: [] for n in self.nodes}
        children: dict[NodeId, list[NodeId]] = {n: [] for n in self.nodes}
        for arc in self.arcs:
            self._arc_sign[(arc.tail, arc.head)] = arc.sign
            if arc.head in parents and arc.tail in children:
                if arc.tail not in parents[arc.head]:
                    parents[arc.head].append(arc.tail)
                if arc.head not in children[arc.tail]:
                    children[arc.tail].append(arc.head)
        self._parents = {n: tuple(sorted(ps)) for n, ps in parents.items()}
        self._children = {n: tuple(sorted(cs)) for n, cs in children.items()}

    def __contains__(self, node: NodeId) -> bool:
        return node in self._node_set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.arcs == other.arcs
            and self.synergies == other.synergies
        )

    def __hash__(self) -> int:
        return hash((self.nodes, self.arcs, self.synergies))

    def __repr__(self) -> str:
        return (
            f"Network({len(self.nodes)} nodes, {len(self.arcs)} arcs, "
            f"{len(self.synergies)} synergies)"
        )

    def parents(self, node: NodeId) -> tuple[NodeId, ...]:
        return self._parents[node]

    def children(self, node: NodeId) -> tuple[NodeId, ...]:
        return self._children[node]

    def arc_sign(self, tail: NodeId, head: NodeId) -> Sign:
        return self._arc_sign[(tail, head)]

    def has_arc(self, tail: NodeId, head: NodeId) -> bool:
        return (tail, head) in self._arc_sign

    def descendants(self, node: NodeId) -> frozenset[NodeId]:
        """All nodes reachable from ``node`` along directed arcs."""
        seen: set[NodeId] = set()
        stack = list(self._children.get(node, ()))
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(self._children.get(cur, ()))
        return frozenset(seen)

    def subnetwork(self, keep: Iterable[NodeId]) -> "Network":
        """Induced sub-network on ``keep``.

        Arcs survive when both endpoints survive; synergies survive when
        the pair and the child all survive.
        """
        kept = set(keep) & self._node_set
        arcs = [a for a in self.arcs if a.tail in kept and a.head in kept]
        synergies = [
            s
            for s in self.synergies
            if s.child in kept and s.pair[0] in kept and s.pair[1] in kept
        ]
        return Network(kept, arcs, synergies)

    def to_payload(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "arcs": [
                {"from": a.tail, "to": a.head, "sign": a.sign.value}
                for a in self.arcs
            ],
            "synergies": [
                {
                    "pair": list(s.pair),
                    "child": s.child,
                    "value": s.child_value,
                    "sign": s.sign.value,
                }
                for s in self.synergies
            ],
        }

    @classmethod
    def from_payload(cls, payload: Mapping) -> "Network":
        if not isinstance(payload, Mapping):
            raise NetworkFormatError("network payload must be an object")
        if "nodes" not in payload:
            raise NetworkFormatError("network payload is missing 'nodes'")
        try:
            nodes = [str(n) for n in payload["nodes"]]
            arcs = [
                InfluenceArc(
                    str(a["from"]), str(a["to"]), Sign.from_glyph(str(a["sign"]))
                )
                for a in payload.get("arcs", ())
            ]
            synergies = [
                ProductSynergy(
                    (str(s["pair"][0]), str(s["pair"][1])),
                    str(s["child"]),
                    bool(s["value"]),
                    Sign.from_glyph(str(s["sign"])),
                )
                for s in payload.get("synergies", ())
            ]
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise NetworkFormatError(f"malformed network payload: {exc}") from exc
        return cls(nodes, arcs, synergies)


@dataclass(frozen=True)
class Query:
    """One inference question: previously observed nodes, new evidence,
    and the node of interest."""

    observed: tuple[tuple[NodeId, bool], ...]
    evidence: tuple[NodeId, bool]
    interest: NodeId

    def __init__(
        self,
        observed: Mapping[NodeId, bool] | Iterable[tuple[NodeId, bool]],
        evidence: tuple[NodeId, bool],
        interest: NodeId,
    ):
        items = dict(observed)
        object.__setattr__(self, "observed", tuple(sorted(items.items())))
        object.__setattr__(self, "evidence", (evidence[0], bool(evidence[1])))
        object.__setattr__(self, "interest", interest)
        if self.evidence[0] in items:
            raise QueryError(
                f"evidence node {self.evidence[0]!r} is already observed"
            )
        if self.interest in items or self.interest == self.evidence[0]:
            raise QueryError(
                f"interest node {self.interest!r} must be unobserved"
            )

    @property
    def observed_map(self) -> dict[NodeId, bool]:
        return dict(self.observed)

    @property
    def evidence_node(self) -> NodeId:
        return self.evidence[0]

    @property
    def evidence_value(self) -> bool:
        return self.evidence[1]

    def all_observations(self) -> dict[NodeId, bool]:
        """Previous observations plus the new evidence, as one map."""
        out = self.observed_map
        out[self.evidence[0]] = self.evidence[1]
        return out

    def check_against(self, net: Network) -> None:
        for node in list(self.observed_map) + [self.evidence[0], self.interest]:
            if node not in net:
                raise QueryError(f"query references unknown node {node!r}")


def validate(net: Network) -> list[str]:
    """Return all invariant violations of ``net``; empty means valid.

    Violations are data, not failures: each entry names the offending
    node or arc and the rule it breaks.
    """
    violations: list[str] = []
    seen_pairs: set[tuple[NodeId, NodeId]] = set()
    for arc in net.arcs:
        for endpoint in (arc.tail, arc.head):
            if endpoint not in net:
                violations.append(f"unknown-node: arc {arc.tail}->{arc.head}")
                break
        if arc.tail == arc.head:
            violations.append(f"self-loop: {arc.tail}")
        if (arc.tail, arc.head) in seen_pairs:
            violations.append(f"duplicate-arc: {arc.tail}->{arc.head}")
        seen_pairs.add((arc.tail, arc.head))

    cycle = _find_cycle(net)
    if cycle:
        violations.append("cycle: " + ",".join(cycle))

    for syn in net.synergies:
        a, b = syn.pair
        missing = [n for n in (a, b, syn.child) if n not in net]
        if missing:
            violations.append(
                f"bad-synergy: {{{a},{b}}}/{syn.child} references unknown "
                + ",".join(missing)
            )
            continue
        if a == b:
            violations.append(f"bad-synergy: pair {{{a},{b}}} is degenerate")
            continue
        for parent in (a, b):
            if not net.has_arc(parent, syn.child):
                violations.append(
                    f"bad-synergy: {parent} is not a parent of {syn.child}"
                )
    return violations


def _find_cycle(net: Network) -> list[NodeId]:
    """Return the nodes of one directed cycle, or an empty list."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in net.nodes}
    parent: dict[NodeId, NodeId] = {}
    for root in net.nodes:
        if color[root] != WHITE:
            continue
        stack: list[tuple[NodeId, int]] = [(root, 0)]
        color[root] = GRAY
        while stack:
            node, idx = stack[-1]
            kids = net.children(node)
            if idx < len(kids):
                stack[-1] = (node, idx + 1)
                kid = kids[idx]
                if color[kid] == GRAY:
                    cycle = [kid, node]
                    cur = node
                    while cur != kid and cur in parent:
                        cur = parent[cur]
                        if cur != kid:
                            cycle.append(cur)
                    return sorted(set(cycle))
                if color[kid] == WHITE:
                    color[kid] = GRAY
                    parent[kid] = node
                    stack.append((kid, 0))
            else:
                color[node] = BLACK
                stack.pop()
    return []


def loads(text: str) -> Network:
    """Parse the network file format and reject invalid networks."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(
            f"network file is not valid JSON at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}"
        ) from exc
    net = Network.from_payload(payload)
    violations = validate(net)
    if violations:
        raise NetworkFormatError(
            "network fails validation: " + "; ".join(violations)
        )
    return net


def dumps(net: Network) -> str:
    """Serialize a network to its (round-trippable) file format."""
    return json.dumps(net.to_payload(), indent=2, sort_keys=True) + "\n"
