"""Brute-force numeric verification of qualitative results.

A network is quantified with conditional probability tables that are
consistent with every arc sign (monotone in each signed parent, for
every context of the other parents) and every product synergy.  Exact
posteriors by joint enumeration then give the realized direction of the
evidence's impact on each node, which must never contradict an
unambiguous propagated sign.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Mapping

from qpn.errors import BudgetError, QuantifyError
from qpn.network import Network, NodeId, ProductSynergy, Query
from qpn.propagation import propagate
from qpn.signs import Sign

__all__ = [
    "ENUMERATION_BUDGET",
    "Quantification",
    "PosteriorDelta",
    "Counterexample",
    "SoundnessReport",
    "quantify",
    "check_quantification",
    "exact_posterior",
    "posterior_marginals",
    "direction_of",
    "check_soundness",
    "soundness_from_tables",
]

ENUMERATION_BUDGET = 12
DIRECTION_EPS = 1e-9
_SYNERGY_TOL = 1e-3
_MAX_ATTEMPTS = 500


@dataclass(frozen=True)
class Quantification:
    """Conditional probability tables for every node of a network.

    ``tables[node]`` maps an assignment of the node's (sorted) parents
    to the probability of the node being true.
    """

    parents: dict[NodeId, tuple[NodeId, ...]]
    tables: dict[NodeId, dict[tuple[bool, ...], float]]

    def p_true(self, node: NodeId, context: tuple[bool, ...]) -> float:
        return self.tables[node][context]

    def to_payload(self) -> dict:
        out = {}
        for node in sorted(self.tables):
            probs = {
                "".join("1" if v else "0" for v in ctx): p
                for ctx, p in self.tables[node].items()
            }
            out[node] = {
                "parents": list(self.parents[node]),
                "probs": dict(sorted(probs.items())),
            }
        return {"tables": out}

    @classmethod
    def from_payload(cls, payload: Mapping) -> "Quantification":
        try:
            tables_in = payload["tables"]
            parents = {}
            tables = {}
            for node, entry in tables_in.items():
                ps = tuple(entry["parents"])
                probs = {}
                for key, p in entry["probs"].items():
                    if len(key) != len(ps) or any(c not in "01" for c in key):
                        raise QuantifyError(
                            f"bad probability key {key!r} for node {node!r}"
                        )
                    probs[tuple(c == "1" for c in key)] = float(p)
                if len(probs) != 2 ** len(ps):
                    raise QuantifyError(f"incomplete table for node {node!r}")
                parents[node] = ps
                tables[node] = probs
            return cls(parents=parents, tables=tables)
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise QuantifyError(f"malformed tables payload: {exc}") from exc


@dataclass(frozen=True)
class PosteriorDelta:
    """Shift of one node's posterior caused by the new evidence."""

    node: NodeId
    before: float
    after: float
    direction: Sign


@dataclass(frozen=True)
class Counterexample:
    seed: int
    node: NodeId
    propagated: Sign
    direction: Sign
    before: float
    after: float


@dataclass
class SoundnessReport:
    trials_requested: int
    trials_run: int = 0
    skipped: int = 0
    skip_reasons: list[str] = field(default_factory=list)
    counterexamples: list[Counterexample] = field(default_factory=list)
    tradeoff_directions: dict[NodeId, set[str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def lines(self) -> list[str]:
        out = [
            f"seed={c.seed}, node={c.node}, propagated={c.propagated.value}, "
            f"direction={c.direction.value}, verdict=FAIL"
            for c in self.counterexamples
        ]
        out.append(
            f"trials: {self.trials_run} run, {self.skipped} skipped, "
            f"{len(self.counterexamples)} counterexamples"
        )
        return out


def _check_budget(net: Network) -> None:
    if len(net.nodes) > ENUMERATION_BUDGET:
        raise BudgetError(
            f"network has {len(net.nodes)} nodes; exact enumeration is "
            f"limited to {ENUMERATION_BUDGET}"
        )


def _aligned_rank(context: tuple[bool, ...], signs: tuple[Sign, ...]):
    aligned = tuple(
        value == (sign is Sign.PLUS) for value, sign in zip(context, signs)
    )
    return (sum(aligned), aligned)


def _monotone_values(
    rng: random.Random, contexts: list[tuple[bool, ...]], signs: tuple[Sign, ...]
) -> dict[tuple[bool, ...], float]:
    """Assign sampled probabilities so the table is monotone in every
    signed coordinate: sorted samples laid out along a linear extension
    of the signed dominance order."""
    samples = sorted(rng.uniform(0.05, 0.95) for _ in contexts)
    ranked = sorted(contexts, key=lambda ctx: _aligned_rank(ctx, signs))
    return {ctx: samples[i] for i, ctx in enumerate(ranked)}


def _node_synergies(net: Network, node: NodeId) -> list[ProductSynergy]:
    return [s for s in net.synergies if s.child == node]


def _sample_node_table(
    net: Network, node: NodeId, rng: random.Random
) -> dict[tuple[bool, ...], float]:
    parents = net.parents(node)
    if not parents:
        return {(): rng.uniform(0.05, 0.95)}
    signs = tuple(net.arc_sign(p, node) for p in parents)
    zero_idx = [i for i, s in enumerate(signs) if s is Sign.ZERO]
    amb_idx = [i for i, s in enumerate(signs) if s is Sign.AMBIGUOUS]
    mono_idx = [
        i for i, s in enumerate(signs) if s in (Sign.PLUS, Sign.MINUS)
    ]
    mono_signs = tuple(signs[i] for i in mono_idx)
    table: dict[tuple[bool, ...], float] = {}
    for amb_vals in itertools.product((False, True), repeat=len(amb_idx)):
        mono_ctxs = list(itertools.product((False, True), repeat=len(mono_idx)))
        values = _monotone_values(rng, mono_ctxs, mono_signs)
        for mono_vals in mono_ctxs:
            p = values[mono_vals]
            for zero_vals in itertools.product(
                (False, True), repeat=len(zero_idx)
            ):
                ctx = [False] * len(parents)
                for i, v in zip(amb_idx, amb_vals):
                    ctx[i] = v
                for i, v in zip(mono_idx, mono_vals):
                    ctx[i] = v
                for i, v in zip(zero_idx, zero_vals):
                    ctx[i] = v
                table[tuple(ctx)] = p
    return table


def _multiplicative_node_table(
    net: Network, node: NodeId, synergy: ProductSynergy, rng: random.Random
) -> dict[tuple[bool, ...], float]:
    """Table whose synergy determinant is exactly zero for the given
    pair: the probability of the synergy's child value factorizes into
    independent per-parent terms."""
    parents = net.parents(node)
    a, b = synergy.pair
    ai, bi = parents.index(a), parents.index(b)
    other_idx = [i for i in range(len(parents)) if i not in (ai, bi)]
    other_signs = tuple(net.arc_sign(parents[i], node) for i in other_idx)
    if not synergy.child_value:
        # The factorized quantity is P(node = false), so every
        # monotonicity direction flips.
        other_signs = tuple(_flip(s) for s in other_signs)

    def factor(sign: Sign) -> dict[bool, float]:
        lo, hi = sorted((rng.uniform(0.3, 0.95), rng.uniform(0.3, 0.95)))
        effective = sign if synergy.child_value else _flip(sign)
        if effective is Sign.PLUS:
            return {False: lo, True: hi}
        if effective is Sign.MINUS:
            return {False: hi, True: lo}
        if effective is Sign.ZERO:
            mid = rng.uniform(0.3, 0.95)
            return {False: mid, True: mid}
        return {False: rng.uniform(0.3, 0.95), True: rng.uniform(0.3, 0.95)}

    f = factor(net.arc_sign(a, node))
    g = factor(net.arc_sign(b, node))
    other_ctxs = list(itertools.product((False, True), repeat=len(other_idx)))
    base = _monotone_values(rng, other_ctxs, other_signs)
    base = {ctx: 0.1 + 0.8 * v for ctx, v in base.items()}
    table: dict[tuple[bool, ...], float] = {}
    for ctx in itertools.product((False, True), repeat=len(parents)):
        other_vals = tuple(ctx[i] for i in other_idx)
        q = base[other_vals] * f[ctx[ai]] * g[ctx[bi]]
        table[ctx] = q if synergy.child_value else 1.0 - q
    return table


def _flip(sign: Sign) -> Sign:
    if sign is Sign.PLUS:
        return Sign.MINUS
    if sign is Sign.MINUS:
        return Sign.PLUS
    return sign


def _synergy_determinants(
    net: Network,
    node: NodeId,
    table: dict[tuple[bool, ...], float],
    synergy: ProductSynergy,
) -> list[float]:
    parents = net.parents(node)
    a, b = synergy.pair
    ai, bi = parents.index(a), parents.index(b)
    other_idx = [i for i in range(len(parents)) if i not in (ai, bi)]
    dets = []
    for other_vals in itertools.product((False, True), repeat=len(other_idx)):
        def q(av: bool, bv: bool) -> float:
            ctx = [False] * len(parents)
            for i, v in zip(other_idx, other_vals):
                ctx[i] = v
            ctx[ai], ctx[bi] = av, bv
            p = table[tuple(ctx)]
            return p if synergy.child_value else 1.0 - p

        dets.append(q(True, True) * q(False, False) - q(True, False) * q(False, True))
    return dets


def _table_satisfies_synergies(
    net: Network, node: NodeId, table: dict[tuple[bool, ...], float]
) -> bool:
    for synergy in _node_synergies(net, node):
        for det in _synergy_determinants(net, node, table, synergy):
            if synergy.sign is Sign.PLUS and det < _SYNERGY_TOL:
                return False
            if synergy.sign is Sign.MINUS and det > -_SYNERGY_TOL:
                return False
            if synergy.sign is Sign.ZERO and abs(det) > 1e-12:
                return False
    return True


def quantify(net: Network, seed: int) -> Quantification:
    """Sample sign-consistent probability tables for the whole network.

    Deterministic per seed.  Raises QuantifyError when a node's synergy
    constraints cannot be met after bounded attempts (for instance a
    non-zero synergy over a zero-signed arc, which forces a zero
    determinant).
    """
    _check_budget(net)
    rng = random.Random(seed)
    parents = {n: net.parents(n) for n in net.nodes}
    tables: dict[NodeId, dict[tuple[bool, ...], float]] = {}
    for node in net.nodes:
        synergies = _node_synergies(net, node)
        zero_synergies = [s for s in synergies if s.sign is Sign.ZERO]
        table = None
        for _ in range(_MAX_ATTEMPTS):
            if zero_synergies:
                candidate = _multiplicative_node_table(
                    net, node, zero_synergies[0], rng
                )
            else:
                candidate = _sample_node_table(net, node, rng)
            if _table_satisfies_synergies(net, node, candidate):
                table = candidate
                break
        if table is None:
            detail = ", ".join(
                f"{{{s.pair[0]},{s.pair[1]}}}/{s.child}={s.sign.value}"
                for s in synergies
            )
            raise QuantifyError(
                f"could not satisfy synergy constraints on node {node!r}: "
                f"{detail}"
            )
        tables[node] = table
    result = Quantification(parents=parents, tables=tables)
    violations = check_quantification(net, result)
    if violations:
        raise QuantifyError(
            "sampled tables violate constraints: " + "; ".join(violations)
        )
    return result


def check_quantification(net: Network, q: Quantification) -> list[str]:
    """All constraint violations of a quantification against a network's
    signs; empty means consistent."""
    violations: list[str] = []
    for node in net.nodes:
        if node not in q.tables:
            violations.append(f"missing-table: {node}")
            continue
        parents = net.parents(node)
        if q.parents[node] != parents:
            violations.append(f"parent-mismatch: {node}")
            continue
        table = q.tables[node]
        for ctx in itertools.product((False, True), repeat=len(parents)):
            if ctx not in table:
                violations.append(f"missing-row: {node}{ctx}")
                break
            if not (0.0 < table[ctx] < 1.0):
                violations.append(f"degenerate-probability: {node}{ctx}")
        for i, parent in enumerate(parents):
            sign = net.arc_sign(parent, node)
            if sign is Sign.AMBIGUOUS:
                continue
            rest = [j for j in range(len(parents)) if j != i]
            for rest_vals in itertools.product((False, True), repeat=len(rest)):
                ctx_hi = [False] * len(parents)
                for j, v in zip(rest, rest_vals):
                    ctx_hi[j] = v
                ctx_lo = list(ctx_hi)
                ctx_hi[i], ctx_lo[i] = True, False
                hi, lo = table[tuple(ctx_hi)], table[tuple(ctx_lo)]
                if sign is Sign.PLUS and hi < lo - 1e-12:
                    violations.append(f"monotonicity: {parent}->{node}")
                elif sign is Sign.MINUS and hi > lo + 1e-12:
                    violations.append(f"monotonicity: {parent}->{node}")
                elif sign is Sign.ZERO and abs(hi - lo) > 1e-12:
                    violations.append(f"zero-influence: {parent}->{node}")
    for synergy in net.synergies:
        if synergy.child not in q.tables:
            continue
        if synergy.sign is Sign.AMBIGUOUS:
            continue
        for det in _synergy_determinants(
            net, synergy.child, q.tables[synergy.child], synergy
        ):
            label = f"synergy: {{{synergy.pair[0]},{synergy.pair[1]}}}/{synergy.child}"
            if synergy.sign is Sign.PLUS and det <= 0:
                violations.append(label)
            elif synergy.sign is Sign.MINUS and det >= 0:
                violations.append(label)
            elif synergy.sign is Sign.ZERO and abs(det) > 1e-9:
                violations.append(label)
    return sorted(set(violations))


def posterior_marginals(
    net: Network, q: Quantification, evidence: Mapping[NodeId, bool]
) -> dict[NodeId, float]:
    """P(node = true | evidence) for every node, by joint enumeration."""
    _check_budget(net)
    nodes = net.nodes
    index = {n: i for i, n in enumerate(nodes)}
    parent_idx = {
        n: tuple(index[p] for p in q.parents[n]) for n in nodes
    }
    fixed: dict[int, bool] = {}
    for node, value in evidence.items():
        if node not in index:
            raise QuantifyError(f"evidence names unknown node {node!r}")
        fixed[index[node]] = value
    free = [i for i in range(len(nodes)) if i not in fixed]
    assignment = [False] * len(nodes)
    for i, value in fixed.items():
        assignment[i] = value
    total = 0.0
    mass = [0.0] * len(nodes)
    tables = [q.tables[n] for n in nodes]
    for combo in itertools.product((False, True), repeat=len(free)):
        for i, value in zip(free, combo):
            assignment[i] = value
        weight = 1.0
        for i, node in enumerate(nodes):
            ctx = tuple(assignment[j] for j in parent_idx[node])
            p = tables[i][ctx]
            weight *= p if assignment[i] else 1.0 - p
        total += weight
        for i in range(len(nodes)):
            if assignment[i]:
                mass[i] += weight
    if total <= 0.0:
        raise QuantifyError("evidence has probability zero")
    return {node: mass[i] / total for i, node in enumerate(nodes)}


def exact_posterior(
    net: Network,
    q: Quantification,
    evidence: Mapping[NodeId, bool],
    target: NodeId,
) -> float:
    """P(target = true | evidence) by full joint enumeration."""
    return posterior_marginals(net, q, evidence)[target]


def direction_of(before: float, after: float, eps: float = DIRECTION_EPS) -> Sign:
    if after > before + eps:
        return Sign.PLUS
    if after < before - eps:
        return Sign.MINUS
    return Sign.ZERO


def _consistent(propagated: Sign, direction: Sign) -> bool:
    if propagated is Sign.AMBIGUOUS:
        return True
    if propagated is Sign.ZERO:
        return direction is Sign.ZERO
    if propagated is Sign.PLUS:
        return direction in (Sign.PLUS, Sign.ZERO)
    return direction in (Sign.MINUS, Sign.ZERO)


def _compare(
    propagated: Mapping[NodeId, Sign],
    q: Quantification,
    qnet: Network,
    query: Query,
    seed: int,
    report: SoundnessReport,
    eps: float,
) -> None:
    before = posterior_marginals(qnet, q, query.observed_map)
    after = posterior_marginals(qnet, q, query.all_observations())
    for node in qnet.nodes:
        direction = direction_of(before[node], after[node], eps)
        if propagated[node] is Sign.AMBIGUOUS and direction in (
            Sign.PLUS,
            Sign.MINUS,
        ):
            report.tradeoff_directions.setdefault(node, set()).add(
                direction.value
            )
        if not _consistent(propagated[node], direction):
            report.counterexamples.append(
                Counterexample(
                    seed=seed,
                    node=node,
                    propagated=propagated[node],
                    direction=direction,
                    before=before[node],
                    after=after[node],
                )
            )


def check_soundness(
    net: Network,
    query: Query,
    trials: int = 100,
    seed: int = 0,
    *,
    quantify_from: Network | None = None,
    eps: float = DIRECTION_EPS,
) -> SoundnessReport:
    """Compare propagated signs against exact posterior directions over
    many sampled quantifications.

    A propagated '+' permits realized directions {+, 0}, '-' permits
    {-, 0}, '0' requires 0, and '?' is unconstrained.  Tables are
    sampled from ``quantify_from`` when given (it must share the node
    and parent structure), which lets tests pit a corrupted network's
    propagation against tables drawn for the original signs.
    """
    qnet = quantify_from if quantify_from is not None else net
    _check_budget(net)
    _check_budget(qnet)
    if set(qnet.nodes) != set(net.nodes):
        raise QuantifyError("table source and network must share nodes")
    query.check_against(net)
    propagated, _ = propagate(net, query)
    report = SoundnessReport(trials_requested=trials)
    for t in range(trials):
        trial_seed = seed + t
        try:
            q = quantify(qnet, trial_seed)
            _compare(propagated, q, qnet, query, trial_seed, report, eps)
            report.trials_run += 1
        except QuantifyError as exc:
            report.skipped += 1
            report.skip_reasons.append(f"seed={trial_seed}: {exc}")
    return report


def soundness_from_tables(
    net: Network,
    query: Query,
    q: Quantification,
    *,
    eps: float = DIRECTION_EPS,
) -> SoundnessReport:
    """One deterministic soundness comparison against explicit tables."""
    _check_budget(net)
    violations = [
        v
        for v in check_quantification(net, q)
        if v.startswith(("missing-table", "parent-mismatch", "missing-row"))
    ]
    if violations:
        raise QuantifyError("tables do not fit network: " + "; ".join(violations))
    query.check_against(net)
    propagated, _ = propagate(net, query)
    report = SoundnessReport(trials_requested=1)
    _compare(propagated, q, net, query, 0, report, eps)
    report.trials_run = 1
    return report
