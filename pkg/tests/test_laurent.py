from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from triplecross.laurent import LaurentPoly2, parse_poly

terms = st.dictionaries(st.tuples(st.integers(-6, 6), st.integers(-3, 6)), st.integers(-5, 5), max_size=6)


def test_format_sorted_by_exponents():
    p = LaurentPoly2({(2, 0): -1, (-1, 1): 3, (-1, -1): 2})
    assert str(p) == "2 a^-1 z^-1+3 a^-1 z^1+-1 a^2 z^0"
    assert str(LaurentPoly2()) == "0"


def test_arithmetic():
    a = LaurentPoly2.monomial(1, 1, 0)
    z = LaurentPoly2.monomial(1, 0, 1)
    assert (a + z) * (a - z) == a * a - z * z
    assert (a + 1) ** 2 == a * a + 2 * a + 1
    assert a.shift(-1) == 1
    assert (a + z).mirror() == LaurentPoly2.monomial(1, -1, 0) + z
    with pytest.raises(ValueError):
        a ** -1


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_poly("1 a^2 z^0 - 3 a^1 z^0")


@given(terms)
def test_round_trip(t):
    p = LaurentPoly2(t)
    assert parse_poly(str(p)) == p
    assert hash(parse_poly(str(p))) == hash(p)


@given(terms, terms, terms)
def test_ring_laws(x, y, w):
    p, q, r = LaurentPoly2(x), LaurentPoly2(y), LaurentPoly2(w)
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p - p == 0
    assert (p * q).mirror() == p.mirror() * q.mirror()
