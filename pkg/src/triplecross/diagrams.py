"""Triple-crossing diagrams: heights, crossing names, expansion and local moves.

At every triple crossing the strand through positions ``s`` and ``s + 3``
(``s = 0, 1, 2``) carries a height: ``B = 0``, ``M = 1``, ``T = 2``.

A diagram keeps its projection with counterclockwise entries. Naming: start
each crossing at the incoming end of the bottom strand and write the labels
in the direction that meets the strands in the order B, M, T. That direction
is counterclockwise for ``eX`` and clockwise for ``eY``. The name therefore
records the cyclic order of the heights, independently of how the bottom
strand is oriented. Strands are oriented by increasing edge labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

from .codes import CodeError, SPdCode, TripleCrossing, ccw_entry, components, edge_heads
from .kauffman import DecoratedPd, decorated_pd

__all__ = [
    "B",
    "M",
    "T",
    "TripleDiagram",
    "PatternError",
    "enumerate_labelings",
    "name_crossings",
    "diagram_from_code",
    "expand",
    "mirror_diagram",
    "loop_sites",
    "apply_m2",
    "detect_m1",
    "reduce_t1",
    "t1_applicable",
    "clasp_sites",
    "clasp_convert",
    "ClaspConversion",
]

B, M, T = 0, 1, 2
# heights of the strands at counterclockwise positions (0, 1, 2)
_NAME_HEIGHTS = {"eX": (B, M, T), "eY": (B, T, M)}


class PatternError(ValueError):
    """The requested local pattern is not present at the given site."""


@dataclass(frozen=True)
class TripleDiagram:
    projection: SPdCode
    heights: tuple[tuple[int, int, int], ...]
    free_circles: int = 0

    def __post_init__(self):
        if len(self.heights) != len(self.projection.crossings):
            raise ValueError("one height triple per crossing is required")
        for h in self.heights:
            if sorted(h) != [B, M, T]:
                raise ValueError(f"heights {h} are not a permutation of B, M, T")

    @property
    def n(self) -> int:
        return len(self.heights)

    @property
    def tuples(self) -> list[tuple[int, ...]]:
        return self.projection.tuples


def enumerate_labelings(projection: SPdCode) -> list[TripleDiagram]:
    """All ``6^n`` height assignments over one projection."""
    perms = list(itertools.permutations((B, M, T)))
    return [
        TripleDiagram(projection, tuple(choice))
        for choice in itertools.product(perms, repeat=len(projection.crossings))
    ]


def mirror_diagram(d: TripleDiagram) -> TripleDiagram:
    """Exchange top and bottom everywhere (the mirror image)."""
    return replace(d, heights=tuple(tuple(2 - h for h in hs) for hs in d.heights))


def name_crossings(d: TripleDiagram) -> SPdCode:
    """Named code: each crossing starts at the incoming bottom end.

    The projection is expected to be numbered along its strands (see
    ``codes.renumber``).
    """
    tuples = d.tuples
    heads = edge_heads(d.projection)
    short = {x for comp in components(d.projection).components if len(comp) <= 2 for x in comp}
    out = []
    for i, (t, hs) in enumerate(zip(tuples, d.heights)):
        s = hs.index(B)
        if t[s] in short:
            # a strand of two edges reads the same both ways; start at the
            # smaller label
            q = s if t[s] <= t[s + 3] else s + 3
        else:
            q = s if heads[t[s]] == (i, s) else s + 3
            if heads[t[q]] != (i, q):
                raise CodeError(f"bottom strand at crossing {i + 1} has no incoming end")
        rotated = tuple(t[(q + k) % 6] for k in range(6))
        if hs[(q + 1) % 3] == M:
            out.append(TripleCrossing("eX", rotated))
        else:
            out.append(TripleCrossing("eY", ccw_entry("eY", rotated)))
    return SPdCode(tuple(out))


def diagram_from_code(code: SPdCode) -> TripleDiagram:
    """Read heights off the crossing names (position 0 is always bottom)."""
    proj = SPdCode.from_tuples(code.ccw_tuples)
    return TripleDiagram(proj, tuple(_NAME_HEIGHTS[c.name] for c in code.crossings))


# ---------------------------------------------------------------------------
# expansion into classical crossings
# ---------------------------------------------------------------------------


def expand(d: TripleDiagram, variant: int = 0) -> DecoratedPd:
    """Split every triple crossing into three classical ones.

    With lines ``L0 = (p0, p3)``, ``L1 = (p1, p4)``, ``L2 = (p2, p5)`` and new
    edges ``ea, eb, ec`` the crossings are ``(p0, p1, ec, ea)``,
    ``(ec, p2, p3, eb)`` and ``(ea, eb, p4, p5)``, all counterclockwise; the
    higher line passes over. ``variant=1`` builds the small triangle on the
    opposite side (the two choices differ by a third Reidemeister move).
    """
    tuples = d.tuples
    if not tuples:
        return DecoratedPd((), (), max(d.free_circles, 1))
    heads = edge_heads(d.projection)
    nxt = max(max(t) for t in tuples) + 1
    crossings = []
    signs = []
    for i, (t, hs) in enumerate(zip(tuples, d.heights)):
        off = 3 if variant else 0
        p = [t[(k + off) % 6] for k in range(6)]
        # direction of each line in the rotated frame: True when it enters at p[s]
        fwd = []
        for s in range(3):
            q = (s + off) % 6
            fwd.append(heads[t[q]] == (i, q))
        h = [hs[(s + off) % 3] for s in range(3)]
        ea, eb, ec = nxt, nxt + 1, nxt + 2
        nxt += 3
        # (tuple, line at even positions, line at odd positions, incoming
        # position of each when the line runs forward / backward)
        local = [
            ((p[0], p[1], ec, ea), 0, 1, (0, 2), (1, 3)),
            ((ec, p[2], p[3], eb), 0, 2, (0, 2), (1, 3)),
            ((ea, eb, p[4], p[5]), 1, 2, (0, 2), (1, 3)),
        ]
        for tup, le, lo, (fe, be), (fo, bo) in local:
            e_in = fe if fwd[le] else be
            o_in = fo if fwd[lo] else bo
            if h[le] < h[lo]:
                under_in, over_in, rot = e_in, o_in, 0
            else:
                under_in, over_in, rot = o_in, e_in, 1
            new = tuple(tup[(k + rot) % 4] for k in range(4))
            under_in = (under_in - rot) % 4
            over_in = (over_in - rot) % 4
            crossings.append(new)
            signs.append(1 if over_in == (under_in + 3) % 4 else -1)
    return DecoratedPd(tuple(crossings), tuple(signs), d.free_circles)


# ---------------------------------------------------------------------------
# local moves
# ---------------------------------------------------------------------------


def loop_sites(d: TripleDiagram | SPdCode) -> list[tuple[int, int]]:
    code = d.projection if isinstance(d, TripleDiagram) else d
    return code.loops()


def detect_m1(projection: SPdCode) -> list[int]:
    """Crossings carrying two or more loops (sites of the move M1)."""
    out = []
    for i, t in enumerate(projection.tuples):
        if sum(1 for p in range(6) if t[p] == t[(p + 1) % 6]) >= 2:
            out.append(i)
    return out


def _check_loop(d: TripleDiagram, site: tuple[int, int]) -> tuple[int, int, tuple[int, ...]]:
    i, slot = site
    if not 0 <= i < d.n:
        raise PatternError(f"no crossing {i}")
    t = d.tuples[i]
    if t[slot % 6] != t[(slot + 1) % 6]:
        raise PatternError(f"no loop at crossing {i}, slot {slot}")
    return i, slot % 6, t


def apply_m2(d: TripleDiagram, site: tuple[int, int]) -> TripleDiagram:
    """Slide the loop at ``site`` across its crossing.

    Rotated so the loop is first, ``(L,L,a,b,c,d)`` becomes ``(c,d,a,b,L,L)``.
    With ``P``, ``Q``, ``S`` the strands at slots ``(0,3)``, ``(1,4)`` and
    ``(2,5)``, the new strands at ``(0,3)``, ``(2,5)`` and ``(1,4)`` receive
    the heights of ``S``, ``Q`` and ``P``.
    """
    i, slot, t = _check_loop(d, site)
    r = [t[(slot + k) % 6] for k in range(6)]
    new_r = (r[4], r[5], r[2], r[3], r[0], r[1])
    new_t = [0] * 6
    for k in range(6):
        new_t[(slot + k) % 6] = new_r[k]
    hs = d.heights[i]
    hP, hQ, hS = hs[slot % 3], hs[(slot + 1) % 3], hs[(slot + 2) % 3]
    new_h = [0, 0, 0]
    new_h[slot % 3] = hS
    new_h[(slot + 2) % 3] = hQ
    new_h[(slot + 1) % 3] = hP
    tuples = list(d.tuples)
    tuples[i] = tuple(new_t)
    heights = list(d.heights)
    heights[i] = tuple(new_h)
    proj = SPdCode.from_tuples(tuples, d.projection.names)
    return TripleDiagram(proj, tuple(heights), d.free_circles)


def t1_applicable(d: TripleDiagram, site: tuple[int, int]) -> bool:
    """The loop strand is the middle one, so the loop undoes by itself."""
    i, slot, _ = _check_loop(d, site)
    hs = d.heights[i]
    return M in (hs[slot % 3], hs[(slot + 1) % 3])


def reduce_t1(d: TripleDiagram, site: tuple[int, int]) -> TripleDiagram:
    """Remove a crossing whose loop strand is ``M``.

    The loop disappears, the straight strand ``a - d`` passes through and the
    arc ``b - c`` is pulled off to one side.
    """
    if not t1_applicable(d, site):
        raise PatternError("the loop strand is not the middle one")
    i, slot, t = _check_loop(d, site)
    r = [t[(slot + k) % 6] for k in range(6)]
    a, b, c, dd = r[2], r[3], r[4], r[5]
    rest = [list(x) for k, x in enumerate(d.tuples) if k != i]
    pending = [(a, dd), (b, c)]
    circles = 0
    while pending:
        x, y = pending.pop(0)
        if x == y:
            circles += 1
            continue
        for tt in rest:
            for k, v in enumerate(tt):
                if v == y:
                    tt[k] = x
        pending = [(x if u == y else u, x if w == y else w) for u, w in pending]
    names = [n for k, n in enumerate(d.projection.names) if k != i]
    heights = tuple(h for k, h in enumerate(d.heights) if k != i)
    proj = SPdCode.from_tuples([tuple(x) for x in rest], names)
    return TripleDiagram(proj, heights, d.free_circles + circles)


# ---------------------------------------------------------------------------
# clasps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClaspConversion:
    """A clasp replaced by one triple crossing with a loop.

    ``fragment`` is the new crossing's six edge labels (loop first) and
    ``heights`` its strand heights; ``pd`` is the whole diagram with that
    crossing split back into classical crossings.
    """

    fragment: tuple[int, ...]
    heights: tuple[int, int, int]
    pd: DecoratedPd


def clasp_sites(pd: DecoratedPd) -> list[tuple[int, int]]:
    """Pairs of crossings bounding a bigon in which neither strand stays on top."""
    cr = pd.crossings
    out = []
    for c1 in range(len(cr)):
        for c2 in range(c1 + 1, len(cr)):
            if _clasp_geometry(pd, c1, c2) is not None:
                out.append((c1, c2))
    return out


def _clasp_geometry(pd: DecoratedPd, c1: int, c2: int):
    t1, t2 = pd.crossings[c1], pd.crossings[c2]
    for px in range(4):
        py = (px + 1) % 4
        x, y = t1[px], t1[py]
        if x == y:
            continue
        if list(t2).count(x) != 1 or list(t2).count(y) != 1 or t1.count(x) != 1 or t1.count(y) != 1:
            continue
        qx, qy = t2.index(x), t2.index(y)
        if (qy - qx) % 4 != 3:
            continue
        # a bigon face: x then y counterclockwise at c1, y then x at c2
        over_x_at_1 = px % 2 == 1
        over_x_at_2 = qx % 2 == 1
        if over_x_at_1 == over_x_at_2:
            continue  # a strand stays on top: that is a Reidemeister II bigon
        return px, py, qx, qy
    return None


def clasp_convert(pd: DecoratedPd, site: tuple[int, int]) -> ClaspConversion:
    """Trade the clasp at ``site`` for a triple crossing carrying a loop.

    The arc that turns back becomes the looped strand, the other strand is
    the middle one, and the loop's upper half sits where the arc passed over.
    """
    c1, c2 = site
    geo = _clasp_geometry(pd, c1, c2)
    if geo is None:
        raise PatternError("no clasp between these crossings")
    px, py, qx, qy = geo
    t1, t2 = pd.crossings[c1], pd.crossings[c2]
    # outer ends, counterclockwise around the clasp disc
    ends = [(t1[(px + 2) % 4], "x", c1), (t1[(py + 2) % 4], "y", c1),
            (t2[(qy + 2) % 4], "y", c2), (t2[(qx + 2) % 4], "x", c2)]
    # the y-strand's ends are adjacent (positions 1, 2): it is the arc
    a, b, c, dd = ends[0], ends[1], ends[2], ends[3]
    y_over_at_b = (py if b[2] == c1 else qy) % 2 == 1
    hP, hQ = (T, B) if y_over_at_b else (B, T)
    L = max(max(t) for t in pd.crossings) + 1
    frag = (L, L, a[0], b[0], c[0], dd[0])
    heights = (hP, hQ, M)
    rest = [t for k, t in enumerate(pd.crossings) if k not in (c1, c2)]
    # expand the new crossing with the same local model as ``expand``
    p = frag
    nxt = L + 1
    ea, eb, ec = nxt, nxt + 1, nxt + 2
    local = [((p[0], p[1], ec, ea), 0, 1), ((ec, p[2], p[3], eb), 0, 2), ((ea, eb, p[4], p[5]), 1, 2)]
    new_cr = []
    for tup, le, lo in local:
        new_cr.append(tup if heights[le] < heights[lo] else tuple(tup[(k + 1) % 4] for k in range(4)))
    crossings = rest + new_cr
    # any consistent orientation will do: the comparisons made after a clasp
    # conversion (self-writhe, unoriented polynomial) ignore orientations
    return ClaspConversion(frag, heights, decorated_pd(crossings, None, pd.free_loops))

