from __future__ import annotations

import pytest

from triplecross import generate as G
from triplecross.codes import parse_spd
from triplecross.diagrams import TripleDiagram, diagram_from_code, expand
from triplecross.identify import (
    check_c2_3c3,
    classify,
    crossing_number_of,
    identify_diagram,
    load_reference,
    match,
    mirror_key,
)
from triplecross.kauffman import kauffman_f, unoriented_key


def test_reference_contents(ref, ref_ext):
    names = set(ref.names())
    assert {"0_1", "3_1", "10_165", "2^2_1", "9^3_21", "L10a174", "L10n113"} <= names
    assert "10_166" not in names  # the duplicated Perko pair appears once
    assert len(ref_ext) > len(ref)
    assert {"K11n38", "K11n139", "K12n462"} <= set(ref_ext.names())
    for e in ref.entries[:40]:
        assert e.components == e.pd.component_count


def test_knot_polynomials_are_distinct(ref):
    knots = [e for e in ref.entries if e.components == 1]
    keys = {mirror_key(e.poly) for e in knots}
    assert len(keys) == len(knots)
    flagged = {n for g in ref.collisions for n in g}
    assert all(n.startswith("L10") for n in flagged)


def test_entry_polynomial_is_f_for_knots(ref):
    for e in ref.entries[:30]:
        if e.components == 1:
            assert e.poly == kauffman_f(e.pd)


def test_malformed_reference(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text('name,components,pd\n3_1,1,"PD[X[1,5,2]]"\n')
    with pytest.raises(ValueError, match=":2:"):
        load_reference(bad)
    wrong = tmp_path / "wrong.csv"
    wrong.write_text("name,pd\n3_1,PD[]\n")
    with pytest.raises(ValueError, match="header"):
        load_reference(wrong)
    count = tmp_path / "count.csv"
    count.write_text('name,components,pd\n3_1,2,"PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]"\n')
    with pytest.raises(ValueError, match="components"):
        load_reference(count)


def test_match_up_to_mirror(ref, by_name):
    pd = by_name["3_1"].pd
    assert match(ref, kauffman_f(pd), 1).names == ("3_1",)
    assert match(ref, kauffman_f(pd.mirror()), 1).names == ("3_1",)
    assert match(ref, kauffman_f(pd), 2).names == ()


def test_collisions_reported_ambiguous(ref):
    group = ref.collisions[0]
    entry = next(e for e in ref.entries if e.name == group[0])
    res = match(ref, entry.poly, entry.components)
    assert res.ambiguous and set(res.names) == set(group)
    # the crossing bound cannot separate names of equal crossing number
    assert match(ref, entry.poly, entry.components, crossing_bound=10).ambiguous


def test_tie_break_by_crossing_bound():
    from triplecross.identify import ReferenceTable

    table = ReferenceTable([], {(1, "k"): ["5_1", "K11n38"]}, [["5_1", "K11n38"]])
    from triplecross.laurent import LaurentPoly2

    import triplecross.identify as I

    key = LaurentPoly2.const(7)
    table.index = {(1, I.mirror_key(key)): ["5_1", "K11n38"]}
    res = match(table, key, 1, crossing_bound=9)
    assert res.names == ("5_1",) and not res.ambiguous and res.tie_break


def test_crossing_number_of():
    assert crossing_number_of("8^2_15") == 8
    assert crossing_number_of("10_132") == 10
    assert crossing_number_of("K11n38") == 11
    assert crossing_number_of("L12n2150") == 12
    assert crossing_number_of("0_1") == 0


def test_table_codes_identify(rows, ref_ext):
    for r in rows:
        if r["name"] == "2^2_1":
            continue  # see test_hopf_row below
        res = identify_diagram(ref_ext, diagram_from_code(parse_spd(r["spd"])))
        assert res.names == (r["name"],), r["name"]


def test_hopf_row(ref, code_of):
    """The published one-crossing Hopf code names its lone strand as the top one.

    Read with the convention every other table code follows, that strand can
    be lifted off and the diagram is a split two-component unlink. The same
    projection with the lone strand in the middle is the Hopf link.
    """
    d = diagram_from_code(parse_spd(code_of["2^2_1"]))
    pd = expand(d)
    assert pd.component_count == 2
    assert unoriented_key(pd) == unoriented_key(pd.__class__((), (), 2))
    assert identify_diagram(ref, d).names == ()
    fixed = TripleDiagram(d.projection, ((0, 2, 1),))
    assert identify_diagram(ref, fixed).names == ("2^2_1",)


def test_one_crossing_unknot_expansion(ref):
    d = TripleDiagram(G.one_crossing_projections()[0], ((0, 1, 2),))
    assert identify_diagram(ref, d).names == ("0_1",)


def test_classify_small(ref):
    res = classify(ref, 3)
    assert res.links(1) == ["2^2_1"] and res.knots(1) == []
    assert res.knots(2) == ["3_1", "4_1"]
    assert res.links(2) == ["4^2_1", "6^3_3"]
    assert res.knots(3) == ["5_2", "6_1"]
    assert len(res.links(3)) == 11
    assert "0_1" not in res.c3
    for name, n in res.c3.items():
        assert len(parse_spd(res.witness[name])) == n
        assert not res.ambiguous[name]
    rows = res.rows()
    assert list(rows[0]) == ["name", "c3", "witness_spd", "ambiguous"]


def test_classify_is_monotone(ref):
    small = classify(ref, 2)
    big = classify(ref, 3)
    for name, n in small.c3.items():
        assert big.c3[name] == n


def test_witnesses_reidentify(ref):
    res = classify(ref, 2)
    for name, w in res.witness.items():
        assert name in identify_diagram(ref, diagram_from_code(parse_spd(w))).names


def test_c2_3c3_small():
    rep = check_c2_3c3(3)
    assert rep["projections"] == 1 and rep["single_component"] == 0
