from __future__ import annotations

import json

import pytest

from triplecross import generate as G
from triplecross import maps as M
from triplecross.codes import components, parse_pd, renumber
from conftest import STRETCH


@pytest.mark.parametrize("c,count", [(4, 2), (6, 9), (8, 62)])
def test_shadow_counts(catalogs, c, count):
    assert len(catalogs.get("Sh", c)) == count


@pytest.mark.parametrize("kind,n,count", [
    ("Ta", 2, 14), ("Ta", 3, 108), ("Tb", 2, 4), ("Tb", 3, 18),
    ("Th", 2, 3), ("Th", 3, 9), ("Th0", 2, 1), ("Th0", 3, 1),
    ("Gr", 2, 2), ("Gr", 3, 4), ("TD", 2, 108), ("TD", 3, 1944),
])
def test_small_counts(catalogs, kind, n, count):
    assert len(catalogs.get(kind, n)) == count


def test_shadows_are_prime_and_spherical(catalogs):
    for code in catalogs.get("Sh", 6).items:
        m = M.map_from_code(code)
        assert m.euler() == 2
        assert G.is_prime_shadow(m)
        assert all(len(set(t)) == 4 for t in code.crossings)  # no loops


def test_contraction_keeps_euler(catalogs):
    for shadow in catalogs.get("Sh", 4).items:
        m = M.map_from_code(shadow)
        for matching in G.contraction_candidates(shadow):
            out = G.contract(shadow, matching)
            t = M.map_from_code(out)
            assert len(t.vertices()) == len(m.vertices()) - 2
            assert t.e == m.e - 2
            assert len(t.faces()) == len(m.faces())


def test_contraction_errors():
    shadow = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]")
    assert G.contraction_candidates(shadow) == []  # odd number of crossings
    with pytest.raises(ValueError):
        G.contract(shadow, [4])
    with pytest.raises(ValueError):
        G.contract(parse_pd("PD[X[1,1,2,3],X[2,4,4,3]]"), [1, 2])


def test_candidates_are_perfect_matchings(catalogs):
    for shadow in catalogs.get("Sh", 6).items:
        for matching in G.contraction_candidates(shadow):
            ends = [i for lab in matching for i, t in enumerate(shadow.crossings) if lab in t]
            assert sorted(ends) == list(range(len(shadow.crossings)))


def test_th_orbits_cover_tb(catalogs):
    th = catalogs.get("Th", 3)
    assert sum(th.meta["orbit_sizes"]) == th.meta["single_loop_Tb"]
    for code in th.items:
        assert G.max_loops_per_crossing(code) <= 1


def test_m2_on_projection_is_an_involution(catalogs):
    for code in catalogs.get("Th", 3).items:
        for i, p in code.loops():
            once = G.apply_m2_projection(code, i, p)
            back = [s for s in once.loops() if s[0] == i]
            assert any(G.projection_key(G.apply_m2_projection(once, *s)) == G.projection_key(code) for s in back)


def test_th0_is_loop_free_subset(catalogs):
    th0 = catalogs.get("Th0", 3).items
    assert all(not c.loops() for c in th0)
    keys = {G.projection_key(c) for c in catalogs.get("Th", 3).items}
    assert all(G.projection_key(c) in keys for c in th0)


def test_gr_faces(catalogs):
    for item in catalogs.get("Gr", 3).items:
        g = M.map_from_tuples(item["vertices"])
        assert set(g.face_degrees()) <= {4, 6}
        assert len(g.faces()) == 3


def test_one_crossing_projections():
    th, th0 = G.gen_Th(1)
    assert len(th) == 2 and len(th0) == 0
    assert [components(renumber(c)).component_count for c in th.items] == [1, 2]


def test_catalog_round_trip(tmp_path, catalogs):
    cat = catalogs.get("Th", 2)
    path = G.save_catalog(cat, tmp_path)
    assert path.name == "catalog_Th_2.jsonl"
    header = json.loads(path.read_text().splitlines()[0])["header"]
    assert header["count"] == 3 and header["version"] == G.GENERATOR_VERSION
    back = G.load_catalog(tmp_path, "Th", 2)
    assert [str(c) for c in back.items] == [str(c) for c in cat.items]


def test_catalog_version_invalidates(tmp_path, catalogs):
    path = G.save_catalog(catalogs.get("Tb", 2), tmp_path)
    lines = path.read_text().splitlines()
    head = json.loads(lines[0])
    head["header"]["version"] = "old"
    path.write_text("\n".join([json.dumps(head)] + lines[1:]) + "\n")
    assert G.load_catalog(tmp_path, "Tb", 2) is None
    assert G.load_catalog(tmp_path, "Tb", 3) is None


def test_generation_cap():
    with pytest.raises(G.ResourceLimit):
        G.gen_shadows(6, cap=3)


def test_generation_is_deterministic():
    a = [str(c) for c in G.gen_Th(3)[0].items]
    b = [str(c) for c in G.gen_Th(3)[0].items]
    assert a == b


@pytest.mark.skipif(not STRETCH, reason="set TRIPLECROSS_STRETCH=1 for the n = 5 run")
def test_stretch_counts(catalogs):
    assert len(catalogs.get("Sh", 10)) == 803
    assert len(catalogs.get("Ta", 5)) == 29198
    assert len(catalogs.get("Th0", 5)) == 12
