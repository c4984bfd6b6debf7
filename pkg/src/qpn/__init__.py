"""Qualitative probabilistic network engine.

A qualitative probabilistic network is a directed acyclic graph over
binary variables whose arcs carry signs instead of numbers.  This
package propagates signs, isolates the sub-network responsible for an
unresolved trade-off, finds the pivot node and resolution frontier, and
emits a symbolic conditional result describing what information would
resolve the ambiguity.  A brute-force numeric oracle quantifies networks
with sign-consistent probability tables to verify qualitative results.
"""

from qpn.errors import (
    AmbiguousInfluenceError,
    BudgetError,
    EvidenceSeparatedError,
    NetworkFormatError,
    PivotOrderError,
    QpnError,
    QuantifyError,
    QueryError,
)
from qpn.network import (
    InfluenceArc,
    Network,
    ProductSynergy,
    Query,
    dumps,
    loads,
    validate,
)
from qpn.oracle import (
    PosteriorDelta,
    Quantification,
    SoundnessReport,
    check_soundness,
    exact_posterior,
    posterior_marginals,
    quantify,
)
from qpn.pivotal import (
    Branch,
    ChainSign,
    Explanation,
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
from qpn.propagation import (
    IntercausalEdge,
    PropagationTrace,
    induce_intercausal,
    net_influence,
    propagate,
)
from qpn.relevance import (
    RelevanceClass,
    bayes_ball,
    classify,
    nuisance_nodes,
    relevant_network,
)
from qpn.signs import Sign, sign_product, sign_sum
from qpn.trails import chain_blocked, d_separated

__all__ = [
    "AmbiguousInfluenceError",
    "Branch",
    "BudgetError",
    "ChainSign",
    "EvidenceSeparatedError",
    "Explanation",
    "InfluenceArc",
    "IntercausalEdge",
    "Network",
    "NetworkFormatError",
    "PivotOrderError",
    "PosteriorDelta",
    "ProductSynergy",
    "PropagationTrace",
    "QpnError",
    "Quantification",
    "QuantifyError",
    "Query",
    "QueryError",
    "RelevanceClass",
    "Sign",
    "SoundnessReport",
    "articulation_nodes",
    "bayes_ball",
    "boundary_node",
    "candidate_order",
    "candidate_resolvers",
    "chain_blocked",
    "chain_signs",
    "check_soundness",
    "classify",
    "compute_pivot",
    "construct_result",
    "d_separated",
    "dumps",
    "exact_posterior",
    "induce_intercausal",
    "loads",
    "net_influence",
    "nuisance_nodes",
    "pivotal_pruning",
    "posterior_marginals",
    "propagate",
    "pruned_network",
    "quantify",
    "relevant_network",
    "resolution_frontier",
    "sign_product",
    "sign_sum",
    "validate",
]
