"""Deterministic plain-text rendering of service responses.

Works on the wire payloads so that local and remote runs of the
command-line client print byte-identical output.
"""

from __future__ import annotations

__all__ = [
    "render_signs",
    "render_explanation",
]


def render_signs(signs: dict[str, str]) -> list[str]:
    width = max((len(n) for n in signs), default=0)
    return [f"{node:<{width}}  {sign}" for node, sign in sorted(signs.items())]


def _chain_label(term: dict) -> str:
    return f"{term['resolver']}:{term['sign']} via " + "->".join(term["nodes"])


def _combination(terms: list[dict]) -> str:
    return " (+) ".join(_chain_label(t) for t in terms)


def _branch_line(branch: dict, pivot: str) -> str:
    assignment = ", ".join(
        f"{node}={sign}" for node, sign in sorted(branch["assignment"].items())
    )
    if branch["result"] == "conditional":
        body = (
            f"if |{_combination(branch['positive'])}| >= "
            f"|{_combination(branch['negative'])}| "
            f"then sign[{pivot}]=+ else sign[{pivot}]=-"
        )
    else:
        body = f"sign[{pivot}]={branch['result']}"
    return f"[{assignment}] {body}"


def render_explanation(payload: dict, indent: str = "") -> list[str]:
    pivot = payload["pivot"]
    interest = payload["interest"]
    lines = [
        f"{indent}pivot: {pivot}",
        f"{indent}frontier: " + ", ".join(payload["frontier"]),
        f"{indent}chains:",
    ]
    for chain in payload["chains"]:
        lines.append(f"{indent}  {_chain_label(chain)}")
    lines.append(f"{indent}branches:")
    for branch in payload["branches"]:
        lines.append(f"{indent}  {_branch_line(branch, pivot)}")
    lines.append(
        f"{indent}sign[{interest}] = sign[{pivot}] (x) "
        + payload["pivot_to_interest"]
    )
    lines.append(
        f"{indent}note: a 0 sign for a frontier node zeroes its terms "
        "(drop that node from the comparison)"
    )
    for child in payload["children"]:
        lines.append(f"{indent}resolver {child['interest']}:")
        lines.extend(render_explanation(child, indent + "  "))
    return lines
