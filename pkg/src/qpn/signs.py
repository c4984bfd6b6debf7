"""Four-valued qualitative signs and their combination algebra.

A sign describes the direction of a shift in a variable's probability
distribution: ``+`` (toward true), ``-`` (toward false), ``0`` (no
shift), ``?`` (unknown direction).  Two operators combine signs:
``sign_product`` chains influences along a path and ``sign_sum`` merges
parallel influences arriving at the same node.
"""

from __future__ import annotations

from enum import Enum

__all__ = ["Sign", "sign_product", "sign_sum"]

# U+2212 (minus sign) is accepted as an input alias for '-'.
_GLYPH_ALIASES = {"−": "-"}


class Sign(str, Enum):
    PLUS = "+"
    MINUS = "-"
    ZERO = "0"
    AMBIGUOUS = "?"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def from_glyph(cls, glyph: str) -> "Sign":
        """Parse a sign glyph; exactly four canonical glyphs exist."""
        normalized = _GLYPH_ALIASES.get(glyph, glyph)
        try:
            return cls(normalized)
        except ValueError:
            raise ValueError(f"unknown sign glyph {glyph!r}") from None


_P, _M, _Z, _A = Sign.PLUS, Sign.MINUS, Sign.ZERO, Sign.AMBIGUOUS

# Chaining: zero absorbs, plus is the identity, minus flips, '?' stays
# unknown unless annihilated by zero.
_PRODUCT = {
    (_P, _P): _P, (_P, _M): _M, (_P, _Z): _Z, (_P, _A): _A,
    (_M, _P): _M, (_M, _M): _P, (_M, _Z): _Z, (_M, _A): _A,
    (_Z, _P): _Z, (_Z, _M): _Z, (_Z, _Z): _Z, (_Z, _A): _Z,
    (_A, _P): _A, (_A, _M): _A, (_A, _Z): _Z, (_A, _A): _A,
}

# Parallel combination: zero is the identity, conflicting directions
# produce '?', and '?' absorbs everything.
_SUM = {
    (_P, _P): _P, (_P, _M): _A, (_P, _Z): _P, (_P, _A): _A,
    (_M, _P): _A, (_M, _M): _M, (_M, _Z): _M, (_M, _A): _A,
    (_Z, _P): _P, (_Z, _M): _M, (_Z, _Z): _Z, (_Z, _A): _A,
    (_A, _P): _A, (_A, _M): _A, (_A, _Z): _A, (_A, _A): _A,
}


def sign_product(a: Sign, b: Sign) -> Sign:
    """Combine two signs along a serial chain."""
    return _PRODUCT[(a, b)]


def sign_sum(a: Sign, b: Sign) -> Sign:
    """Combine two signs arriving in parallel at the same node."""
    return _SUM[(a, b)]
