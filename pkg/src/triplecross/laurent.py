"""Integer Laurent polynomials in the two variables ``a`` and ``z``."""

from __future__ import annotations

import re
from typing import Mapping

__all__ = ["LaurentPoly2", "parse_poly"]


class LaurentPoly2:
    """Sparse polynomial ``sum c * a^i * z^j`` with ``i, j`` any integers.

    Instances are immutable and hashable; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        self._terms = {k: v for k, v in (terms or {}).items() if v}
        self._hash = None

    @classmethod
    def const(cls, c: int) -> LaurentPoly2:
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c: int = 1, i: int = 0, j: int = 0) -> LaurentPoly2:
        return cls({(i, j): c})

    @property
    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly2.const(other)
        return isinstance(other, LaurentPoly2) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other) -> LaurentPoly2:
        if isinstance(other, int):
            other = LaurentPoly2.const(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly2(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly2:
        return LaurentPoly2({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> LaurentPoly2:
        if isinstance(other, int):
            other = LaurentPoly2.const(other)
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly2:
        return (-self) + other

    def __mul__(self, other) -> LaurentPoly2:
        if isinstance(other, int):
            return LaurentPoly2({k: v * other for k, v in self._terms.items()})
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly2(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly2:
        if k < 0:
            raise ValueError("negative powers are only defined for monomials; use shift")
        out = LaurentPoly2.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, da: int = 0, dz: int = 0) -> LaurentPoly2:
        """Multiply by ``a^da z^dz``."""
        return LaurentPoly2({(i + da, j + dz): v for (i, j), v in self._terms.items()})

    def mirror(self) -> LaurentPoly2:
        """Substitute ``a -> a^-1``."""
        return LaurentPoly2({(-i, j): v for (i, j), v in self._terms.items()})

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return "+".join(f"{self._terms[k]} a^{k[0]} z^{k[1]}" for k in sorted(self._terms))

    def __repr__(self) -> str:
        return f"LaurentPoly2({str(self)!r})"


_TERM = re.compile(r"\s*(-?\d+)\s*a\^(-?\d+)\s*z\^(-?\d+)\s*")


def parse_poly(text: str) -> LaurentPoly2:
    """Inverse of ``str``: terms ``c a^i z^j`` joined by ``+``."""
    text = text.strip()
    if text == "0":
        return LaurentPoly2()
    terms: dict[tuple[int, int], int] = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m:
            raise ValueError(f"bad polynomial term at position {pos}: {text[pos:pos + 20]!r}")
        k = (int(m.group(2)), int(m.group(3)))
        terms[k] = terms.get(k, 0) + int(m.group(1))
        pos = m.end()
        if pos < len(text):
            if text[pos] != "+":
                raise ValueError(f"expected '+' at position {pos}")
            pos += 1
    return LaurentPoly2(terms)
