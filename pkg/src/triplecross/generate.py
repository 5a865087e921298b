"""Catalogs of shadows and triple-crossing projections.

Pipeline for ``n`` triple crossings:

* ``Sh_{2n}``: prime, loop-free 4-valent spherical shadows with ``2n``
  crossings up to isotopy and mirror image. They are produced as medial maps
  of nonseparable planar maps with ``2n`` edges.
* ``Ta_n``: every contraction of a perfect matching of every shadow.
* ``Tb_n``: ``Ta_n`` up to isotopy and mirror image.
* ``Th_n``: ``Tb_n`` minus projections with two loops at one crossing,
  taken up to the loop slide ``M2``; ``Th0_n`` are its loop-free members.
* ``Gr_n``: duals of loop-stripped ``Th_n`` projections that are simple.
* ``TD_n``: every height labelling of every ``Th_n`` projection.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from . import maps as M
from .codes import PdCode, SPdCode, TripleCrossing, renumber

__all__ = [
    "GENERATOR_VERSION",
    "ResourceLimit",
    "Catalog",
    "nonseparable_maps",
    "medial",
    "is_prime_shadow",
    "gen_shadows",
    "contraction_candidates",
    "contract",
    "gen_Ta",
    "gen_Tb",
    "gen_Th",
    "gen_Gr",
    "gen_TD",
    "apply_m2_projection",
    "one_crossing_projections",
    "map_to_tuples",
    "save_catalog",
    "load_catalog",
]

GENERATOR_VERSION = "1"
KINDS = ("Sh", "Ta", "Tb", "Th", "Th0", "Gr", "TD")


class ResourceLimit(RuntimeError):
    """A generation step exceeded its configured cap."""


@dataclass
class Catalog:
    kind: str
    n: int
    items: list
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.items)

    def header(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "count": len(self.items),
            "version": GENERATOR_VERSION,
            "meta": self.meta,
        }


def _check_cap(count: int, cap: int | None, what: str) -> None:
    if cap is not None and count > cap:
        raise ResourceLimit(f"{what}: more than {cap} items")


# ---------------------------------------------------------------------------
# maps <-> label tuples
# ---------------------------------------------------------------------------


def map_to_tuples(m: M.CombMap) -> list[tuple[int, ...]]:
    """Vertex rotation tuples with edges labelled 1..e in dart order."""
    label = [0] * m.n_darts
    nxt = 1
    for d in range(m.n_darts):
        if label[d] == 0:
            label[d] = label[m.alpha[d]] = nxt
            nxt += 1
    return [tuple(label[d] for d in cyc) for cyc in m.vertices()]


def _tuples_map(tuples) -> M.CombMap:
    return M.map_from_tuples([tuple(t) for t in tuples])


# ---------------------------------------------------------------------------
# nonseparable maps and their medials
# ---------------------------------------------------------------------------


def _add_edge_variants(m: M.CombMap) -> Iterator[M.CombMap]:
    """Every way to draw one new edge inside a face between two distinct vertices."""
    n = m.n_darts
    vert = m.vertex_of()
    inv = [0] * n
    for d in range(n):
        inv[m.rot[d]] = d
    for face in m.faces():
        k = len(face)
        # the corner before dart face[i] sits at that dart's vertex
        for i in range(k):
            for j in range(i + 1, k):
                u, v = face[i], face[j]
                if vert[u] == vert[v]:
                    continue
                x, y = n, n + 1
                rot = list(m.rot) + [0, 0]
                alpha = list(m.alpha) + [y, x]
                pu, pv = inv[u], inv[v]
                rot[pu], rot[x] = x, u
                rot[pv], rot[y] = y, v
                yield M.CombMap(tuple(rot), tuple(alpha))


def nonseparable_maps(e_max: int, cap: int | None = None) -> dict[int, list[M.CombMap]]:
    """Nonseparable planar maps with 2..e_max edges, up to isotopy and mirror.

    Grown from the digon by adding an edge inside a face or, dually, by
    splitting a vertex. Every nonseparable map with at least three edges has
    an edge whose deletion or contraction stays nonseparable, so the growth
    reaches all of them.
    """
    digon = M.CombMap((1, 0, 3, 2), (2, 3, 0, 1))
    levels = {2: [digon]}
    for e in range(2, e_max):
        seen: dict = {}
        for m in levels[e]:
            for cand in _add_edge_variants(m):
                key = M.canonical_form(cand, True)
                seen.setdefault(key, cand)
            dm = M.dual(m)
            for cand in _add_edge_variants(dm):
                back = M.dual(cand)
                key = M.canonical_form(back, True)
                seen.setdefault(key, back)
            _check_cap(len(seen), cap, f"nonseparable maps with {e + 1} edges")
        levels[e + 1] = list(seen.values())
    return levels


def medial(m: M.CombMap) -> M.CombMap:
    """Medial map: one 4-valent vertex per edge, one edge per corner."""
    n = m.n_darts
    rot = [0] * (2 * n)
    alpha = [0] * (2 * n)
    done = [False] * n
    for d in range(n):
        if done[d]:
            continue
        d2 = m.alpha[d]
        done[d] = done[d2] = True
        cyc = (2 * d2 + 1, 2 * d, 2 * d + 1, 2 * d2)
        for k in range(4):
            rot[cyc[k]] = cyc[(k + 1) % 4]
    for x in range(n):
        a, b = 2 * x, 2 * m.rot[x] + 1
        alpha[a], alpha[b] = b, a
    return M.CombMap(tuple(rot), tuple(alpha))


def _edges(m: M.CombMap) -> list[tuple[int, int]]:
    return [(d, m.alpha[d]) for d in range(m.n_darts) if d < m.alpha[d]]


def _connected_without(nv: int, edges, skip: set[int]) -> bool:
    adj: list[list[int]] = [[] for _ in range(nv)]
    for k, (u, v) in enumerate(edges):
        if k not in skip:
            adj[u].append(v)
            adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == nv


def is_prime_shadow(m: M.CombMap) -> bool:
    """Connected, loop-free and without a 2-edge cut (no separating circle
    meeting the shadow twice)."""
    vert = m.vertex_of()
    nv = len(m.vertices())
    edges = [(vert[a], vert[b]) for a, b in _edges(m)]
    if any(u == v for u, v in edges):
        return False
    if not _connected_without(nv, edges, set()):
        return False
    k = len(edges)
    for i in range(k):
        for j in range(i + 1, k):
            if not _connected_without(nv, edges, {i, j}):
                return False
    return True


def gen_shadows(c: int, cap: int | None = None, maps_cache=None) -> Catalog:
    """``Sh_c``: prime loop-free shadows with ``c`` crossings (as PD codes)."""
    t0 = time.perf_counter()
    if c < 2:
        raise ValueError("shadows need at least two crossings")
    levels = maps_cache if maps_cache is not None else nonseparable_maps(c, cap)
    seen: dict = {}
    for m in levels[c]:
        sh = medial(m)
        if not is_prime_shadow(sh):
            continue
        seen.setdefault(M.canonical_form(sh, True), sh)
        _check_cap(len(seen), cap, f"Sh_{c}")
    items = sorted((PdCode(tuple(map_to_tuples(sh))) for sh in seen.values()), key=str)
    return Catalog("Sh", c, items, {"seconds": round(time.perf_counter() - t0, 3)})


# ---------------------------------------------------------------------------
# contraction
# ---------------------------------------------------------------------------


def _pd_tuples(shadow) -> list[tuple[int, ...]]:
    if isinstance(shadow, PdCode):
        return [tuple(c) for c in shadow.crossings]
    if isinstance(shadow, M.CombMap):
        return map_to_tuples(shadow)
    return [tuple(c) for c in shadow]


def contraction_candidates(shadow) -> list[frozenset[int]]:
    """All perfect matchings of the crossings by non-loop edges (edge labels)."""
    tuples = _pd_tuples(shadow)
    where: dict[int, list[int]] = {}
    for i, t in enumerate(tuples):
        for x in t:
            where.setdefault(x, []).append(i)
    incident: list[list[tuple[int, int]]] = [[] for _ in tuples]
    for lab, (i, j) in sorted(where.items()):
        if i != j:
            incident[i].append((lab, j))
            incident[j].append((lab, i))
    out: list[frozenset[int]] = []
    matched = [False] * len(tuples)

    def rec(chosen: list[int]) -> None:
        try:
            u = matched.index(False)
        except ValueError:
            out.append(frozenset(chosen))
            return
        matched[u] = True
        for lab, v in incident[u]:
            if not matched[v]:
                matched[v] = True
                chosen.append(lab)
                rec(chosen)
                chosen.pop()
                matched[v] = False
        matched[u] = False

    if len(tuples) % 2 == 0:
        rec([])
    return out


def contract(shadow, matching: Iterable[int], renumbered: bool = True) -> SPdCode:
    """Merge the two ends of every matched edge into one six-valent crossing.

    The new tuple lists the three edge-ends following the edge at the
    lower-indexed crossing, then the three following it at the other one.
    Crossings appear in order of their contracted labels. With
    ``renumbered=False`` the original labels are kept.
    """
    tuples = _pd_tuples(shadow)
    labels = sorted(set(matching))
    used: set[int] = set()
    out = []
    for lab in labels:
        ends = [(i, p) for i, t in enumerate(tuples) for p, x in enumerate(t) if x == lab]
        if len(ends) != 2:
            raise ValueError(f"edge {lab} is not in the shadow")
        (i, p), (j, q) = sorted(ends)
        if i == j:
            raise ValueError(f"edge {lab} is a loop")
        if i in used or j in used:
            raise ValueError(f"edge {lab} shares a crossing with another matched edge")
        used.update((i, j))
        ti, tj = tuples[i], tuples[j]
        out.append(tuple(ti[(p + k) % 4] for k in (1, 2, 3)) + tuple(tj[(q + k) % 4] for k in (1, 2, 3)))
    if len(used) != len(tuples):
        raise ValueError("matching does not cover every crossing")
    code = SPdCode.from_tuples(out)
    return renumber(code) if renumbered else code


def _projection_map(code: SPdCode) -> M.CombMap:
    return M.map_from_tuples(code.tuples)


def projection_key(code: SPdCode) -> M.CanonicalForm:
    return M.canonical_form(_projection_map(code), True)


def gen_Ta(n: int, cap: int | None = None, shadows: Catalog | None = None) -> Catalog:
    t0 = time.perf_counter()
    if n == 1:
        items = one_crossing_projections()
        return Catalog("Ta", 1, items, {"seconds": 0.0})
    sh = shadows if shadows is not None else gen_shadows(2 * n, cap)
    items = []
    for s in sh.items:
        for mt in contraction_candidates(s):
            items.append(contract(s, mt))
            _check_cap(len(items), cap, f"Ta_{n}")
    return Catalog("Ta", n, items, {"seconds": round(time.perf_counter() - t0, 3), "shadows": len(sh)})


def _dedupe(codes: Iterable[SPdCode]) -> dict:
    seen: dict = {}
    for c in codes:
        seen.setdefault(projection_key(c), c)
    return seen


def gen_Tb(n: int, cap: int | None = None, ta: Catalog | None = None) -> Catalog:
    t0 = time.perf_counter()
    ta = ta if ta is not None else gen_Ta(n, cap)
    seen = _dedupe(ta.items)
    items = [seen[k] for k in sorted(seen, key=lambda k: k.code)]
    return Catalog("Tb", n, items, {"seconds": round(time.perf_counter() - t0, 3), "Ta": len(ta)})


# ---------------------------------------------------------------------------
# loops, M2 and Th
# ---------------------------------------------------------------------------


def _loop_slots(t: Sequence[int]) -> list[int]:
    return [p for p in range(6) if t[p] == t[(p + 1) % 6]]


def max_loops_per_crossing(code: SPdCode) -> int:
    return max((len(_loop_slots(t)) for t in code.tuples), default=0)


def apply_m2_projection(code: SPdCode, crossing: int, slot: int) -> SPdCode:
    """Slide the loop at ``(crossing, slot)`` to the opposite side.

    With the crossing rotated so that the loop is first, ``(L,L,a,b,c,d)``
    becomes ``(c,d,a,b,L,L)``.
    """
    t = code.tuples[crossing]
    if t[slot] != t[(slot + 1) % 6]:
        raise ValueError("no loop at this site")
    r = [t[(slot + k) % 6] for k in range(6)]
    new = (r[4], r[5], r[2], r[3], r[0], r[1])
    tuples = list(code.tuples)
    tuples[crossing] = new
    return SPdCode.from_tuples(tuples, code.names)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb, key=lambda k: k.code)] = min(ra, rb, key=lambda k: k.code)


def gen_Th(n: int, cap: int | None = None, tb: Catalog | None = None) -> tuple[Catalog, Catalog]:
    """``(Th_n, Th0_n)``.

    Projections with two or more loops at one crossing are dropped first;
    the rest are grouped into orbits of the loop slide and one member
    (the one with the smallest canonical form) represents each orbit.
    """
    t0 = time.perf_counter()
    if n == 1:
        items = one_crossing_projections()
        th = Catalog("Th", 1, items, {"note": "direct enumeration of one-vertex projections"})
        th0 = Catalog("Th0", 1, [c for c in items if not c.loops()], {})
        return th, th0
    tb = tb if tb is not None else gen_Tb(n, cap)
    keep = {projection_key(c): c for c in tb.items if max_loops_per_crossing(c) <= 1}
    uf = _UnionFind()
    for key, code in keep.items():
        uf.find(key)
        for i, p in code.loops():
            other = renumber(apply_m2_projection(code, i, p))
            okey = projection_key(other)
            if okey in keep:
                uf.union(key, okey)
    reps = sorted({uf.find(k) for k in keep}, key=lambda k: k.code)
    orbit_sizes: dict = {}
    for k in keep:
        r = uf.find(k)
        orbit_sizes[r] = orbit_sizes.get(r, 0) + 1
    items = [keep[r] for r in reps]
    meta = {
        "seconds": round(time.perf_counter() - t0, 3),
        "Tb": len(tb),
        "single_loop_Tb": len(keep),
        "orbit_sizes": [orbit_sizes[r] for r in reps],
    }
    th = Catalog("Th", n, items, meta)
    th0 = Catalog("Th0", n, [c for c in items if not c.loops()], {})
    return th, th0


def one_crossing_projections() -> list[SPdCode]:
    """The two one-vertex six-valent spherical projections.

    A single vertex carries a non-crossing pairing of its six edge-ends:
    either three petals, or one strand closing through the crossing with a
    petal on each side.
    """
    return [
        SPdCode.from_tuples([(1, 1, 2, 2, 3, 3)]),
        SPdCode.from_tuples([(1, 2, 2, 1, 3, 3)]),
    ]


# ---------------------------------------------------------------------------
# the graph family Gr
# ---------------------------------------------------------------------------


def strip_loops(code: SPdCode) -> M.CombMap:
    tuples = []
    for t in code.tuples:
        slots = set()
        for p in _loop_slots(t):
            slots.update((p, (p + 1) % 6))
        tuples.append(tuple(x for q, x in enumerate(t) if q not in slots))
    return M.map_from_tuples(tuples)


def _is_simple(m: M.CombMap) -> bool:
    vert = m.vertex_of()
    pairs = set()
    for a, b in _edges(m):
        u, v = sorted((vert[a], vert[b]))
        if u == v or (u, v) in pairs:
            return False
        pairs.add((u, v))
    return True


def gen_Gr(f: int, cap: int | None = None, th: Catalog | None = None) -> Catalog:
    """Simple spherical graphs with ``f`` faces, all quadrangles or hexagons."""
    t0 = time.perf_counter()
    th = th if th is not None else gen_Th(f, cap)[0]
    seen: dict = {}
    for code in th.items:
        g = M.dual(strip_loops(code))
        if not _is_simple(g) or not g.is_connected():
            continue
        if min(g.degrees()) < 2 or any(d not in (4, 6) for d in g.face_degrees()):
            continue
        seen.setdefault(M.canonical_form(g, True), g)
    graphs = [seen[k] for k in sorted(seen, key=lambda k: k.code)]
    items = []
    counter: dict = {}
    for g in graphs:
        fd = g.face_degrees()
        q, h = fd.count(4), fd.count(6)
        counter[(q, h)] = counter.get((q, h), 0) + 1
        items.append({"name": f"g^{{{q},{h}}}_{counter[(q, h)]}", "vertices": map_to_tuples(g)})
    return Catalog("Gr", f, items, {"seconds": round(time.perf_counter() - t0, 3)})


def gen_TD(n: int, cap: int | None = None, th: Catalog | None = None) -> Catalog:
    """Every height labelling of every ``Th_n`` projection, as named codes."""
    from .diagrams import enumerate_labelings, name_crossings

    t0 = time.perf_counter()
    th = th if th is not None else gen_Th(n, cap)[0]
    items = []
    for proj in th.items:
        for d in enumerate_labelings(proj):
            items.append(name_crossings(d))
            _check_cap(len(items), cap, f"TD_{n}")
    return Catalog("TD", n, items, {"seconds": round(time.perf_counter() - t0, 3), "Th": len(th)})


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------


def _item_to_json(item):
    if isinstance(item, (SPdCode, PdCode)):
        return {"code": str(item)}
    return item


def _item_from_json(obj):
    from .codes import parse_code

    if "code" in obj:
        return parse_code(obj["code"])
    if "vertices" in obj:
        obj = dict(obj)
        obj["vertices"] = [tuple(v) for v in obj["vertices"]]
    return obj


def catalog_path(cache_dir: str | Path, kind: str, n: int) -> Path:
    return Path(cache_dir) / f"catalog_{kind}_{n}.jsonl"


def save_catalog(cat: Catalog, cache_dir: str | Path) -> Path:
    path = catalog_path(cache_dir, cat.kind, cat.n)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        fh.write(json.dumps({"header": cat.header()}, sort_keys=True) + "\n")
        for item in cat.items:
            fh.write(json.dumps(_item_to_json(item), sort_keys=True) + "\n")
    tmp.replace(path)
    return path


def load_catalog(cache_dir: str | Path, kind: str, n: int) -> Catalog | None:
    """Read a cached catalog; ``None`` if missing or stamped by another version."""
    path = catalog_path(cache_dir, kind, n)
    if not path.exists():
        return None
    with open(path) as fh:
        header = json.loads(fh.readline())["header"]
        if header.get("version") != GENERATOR_VERSION:
            return None
        items = [_item_from_json(json.loads(line)) for line in fh if line.strip()]
    if len(items) != header["count"]:
        return None
    return Catalog(header["kind"], header["n"], items, header.get("meta", {}))
