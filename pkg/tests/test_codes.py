from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triplecross.codes import (
    CodeError,
    SPdCode,
    TripleCrossing,
    ccw_entry,
    components,
    parse_code,
    parse_pd,
    parse_spd,
    pd_components,
    renumber,
)
from triplecross.generate import contract
from triplecross.maps import isomorphic, map_from_code

FIG17_PD = "PD[X[1,4,2,5],X[3,8,4,9],X[12,6,13,5],X[13,16,14,1],X[9,14,10,15],X[15,10,16,11],X[6,12,7,11],X[7,2,8,3]]"
FIG17_SPD = "sPD[eX[1,4,2,12,6,13],eX[4,9,3,3,7,2],eX[15,10,16,6,12,7],eX[1,13,16,10,15,9]]"


def test_parse_trefoil_code():
    code = parse_spd("sPD[eY[4,2,5,5,1,6],eY[3,1,2,4,6,3]]")
    assert len(code) == 2
    assert code.names == ["eY", "eY"]
    assert str(code) == "sPD[eY[4,2,5,5,1,6],eY[3,1,2,4,6,3]]"


def test_parse_ignores_whitespace():
    assert str(parse_spd(" sPD[ eX[1, 1, 3, 2, 2, 3] ] ")) == "sPD[eX[1,1,3,2,2,3]]"


def test_parse_multiplicity_error():
    with pytest.raises(CodeError, match="1,2,3,4"):
        parse_spd("sPD[eX[1,2,3,4,5,5]]")


@pytest.mark.parametrize("text", ["sPD[eZ[1,1,2,2,3,3]]", "sPD[eX[1,1,2,2,3]]", "sPD[eX[1,1,2,2,3,3]", "sPD[]x", "PD[X[1,2,3]]"])
def test_parse_errors(text):
    with pytest.raises(CodeError):
        parse_code(text)


def test_parse_error_has_position():
    with pytest.raises(CodeError) as info:
        parse_spd("sPD[eX[1,1,2,2,3,3],eQ[1,2,3,4,5,6]]")
    assert info.value.pos is not None


def test_parse_pd():
    code = parse_pd(FIG17_PD)
    assert len(code) == 8
    assert code.labels == list(range(1, 17))
    assert len(parse_pd("PD[X[1,2,1,2]]")) == 1


def test_parse_code_dispatch():
    assert isinstance(parse_code(FIG17_SPD), SPdCode)
    assert not isinstance(parse_code(FIG17_PD), SPdCode)


def test_json_round_trip():
    code = parse_spd(FIG17_SPD)
    assert SPdCode.from_json(code.to_json()) == code


def test_ccw_entry():
    assert ccw_entry("eX", (1, 2, 3, 4, 5, 6)) == (1, 2, 3, 4, 5, 6)
    assert ccw_entry("eY", (1, 2, 3, 4, 5, 6)) == (1, 6, 5, 4, 3, 2)


def test_loops():
    assert parse_spd("sPD[eX[1,1,3,2,2,3]]").loops() == [(0, 0), (0, 3)]


def test_fig17_contraction_exact():
    out = contract(parse_pd(FIG17_PD), {5, 8, 11, 14}, renumbered=False)
    assert str(out) == FIG17_SPD


def test_fig17_contraction_renumbered_is_isomorphic():
    raw = contract(parse_pd(FIG17_PD), {5, 8, 11, 14}, renumbered=False)
    ren = contract(parse_pd(FIG17_PD), {5, 8, 11, 14})
    assert ren.labels == list(range(1, 13))
    assert isomorphic(map_from_code(raw), map_from_code(ren)) is not None


def test_component_counts(code_of):
    assert components(parse_spd(code_of["3_1"])).component_count == 1
    assert components(parse_spd(code_of["8^4_1"])).component_count == 4
    assert components(parse_spd(FIG17_SPD)).component_count == 3
    assert pd_components(parse_pd(FIG17_PD)).component_count == 1


def test_components_cover_labels(rows):
    for r in rows:
        code = parse_spd(r["spd"])
        comps = components(code).components
        assert sorted(x for c in comps for x in c) == code.labels


def test_table_codes_are_renumbering_fixed_points(rows):
    for r in rows:
        code = parse_spd(r["spd"])
        assert renumber(code) == code, r["name"]


def _strands_oracle(code: SPdCode) -> list[list[int]]:
    """Follow strands by opposite-position pairing, written independently."""
    where = {}
    for i, c in enumerate(code.crossings):
        for p, x in enumerate(c.edges):
            where.setdefault(x, []).append((i, p))
    seen, out = set(), []
    for lab in sorted(where):
        if lab in seen:
            continue
        strand, cur, end = [], lab, where[lab][0]
        while cur not in seen:
            seen.add(cur)
            strand.append(cur)
            a, b = where[cur]
            far = b if a == end else a
            i, p = far
            nxt = code.crossings[i].edges[(p + 3) % 6]
            ends = where[nxt]
            end = (i, (p + 3) % 6) if (i, (p + 3) % 6) in ends else ends[0]
            cur = nxt
        out.append(strand)
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 111))
def test_renumber_scrambled_labels(seed, row_index):
    from conftest import table_rows

    rows = table_rows()
    code = parse_spd(rows[row_index % len(rows)]["spd"])
    rng = random.Random(seed)
    labels = code.labels
    image = rng.sample(range(10, 10 * (len(labels) + 10), 10), len(labels))
    mp = dict(zip(labels, image))
    scrambled = SPdCode(tuple(TripleCrossing(c.name, tuple(mp[x] for x in c.edges)) for c in code.crossings))
    out = renumber(scrambled)
    assert out.labels == list(range(1, 3 * len(code) + 1))
    # every strand of the result is numbered consecutively along itself
    for strand in _strands_oracle(out):
        s = sorted(strand)
        assert s == list(range(s[0], s[0] + len(s)))
    assert renumber(out) == out
    assert isomorphic(map_from_code(out), map_from_code(code)) is not None
