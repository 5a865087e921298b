"""The two-variable Kauffman polynomial of classical link diagrams.

``Lambda`` is the regular-isotopy invariant of unoriented diagrams with

* ``Lambda(O) = 1``,
* ``Lambda`` of a positive curl is ``a`` times ``Lambda`` without it,
* ``Lambda(D+) + Lambda(D-) = z (Lambda(D0) + Lambda(Dinf))``,

and ``F = a^-w Lambda`` is the ambient-isotopy invariant of the oriented
diagram. Crossingless unlinks of ``k`` circles evaluate to
``delta^(k-1)`` with ``delta = (a + a^-1) z^-1 - 1``.

Evaluation reduces curls and bigons (Reidemeister I and II), splits
disjoint pieces, and unrolls the skein relation along a descending
traversal: switching the crossings that are first met from below turns the
diagram into a stacked unlink. Connected pieces are memoised under their
mirror-aware canonical map code.

Diagrams use the under-first convention: each crossing lists its four
edge labels counterclockwise and the under strand occupies positions 0 and 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import _kernels
from .codes import CodeError, PdCode, _ends, _walk, parse_pd
from .laurent import LaurentPoly2

__all__ = [
    "DecoratedPd",
    "CrossingCapExceeded",
    "DELTA",
    "decorated_pd",
    "parse_decorated_pd",
    "kauffman_lambda",
    "kauffman_f",
    "unoriented_key",
    "mirror_poly",
    "simplify_pd",
    "unlink_value",
    "clear_memo",
]

ONE = LaurentPoly2.const(1)
DELTA = LaurentPoly2({(1, -1): 1, (-1, -1): 1, (0, 0): -1})
DEFAULT_CAP = 16


class CrossingCapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# decorated PD codes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecoratedPd:
    """Oriented classical diagram.

    ``crossings`` are counterclockwise 4-tuples with the under strand at
    positions 0 and 2; ``signs`` are the crossing signs of the stored
    orientation; ``free_loops`` counts crossingless circles.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    signs: tuple[int, ...]
    free_loops: int = 0

    def __post_init__(self):
        if len(self.signs) != len(self.crossings):
            raise CodeError("one sign per crossing is required")
        if any(s not in (1, -1) for s in self.signs):
            raise CodeError("signs must be +1 or -1")
        if self.crossings:
            PdCode(self.crossings)  # arity and multiplicity checks

    def __len__(self) -> int:
        return len(self.crossings)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def strand_components(self) -> list[tuple[int, ...]]:
        if not self.crossings:
            return []
        ends = _ends(self.crossings)
        seen: set[int] = set()
        out = []
        for lab in sorted(ends):
            if lab not in seen:
                walk = tuple(x for x, _ in _walk(self.crossings, ends, lab, ends[lab][0]))
                seen.update(walk)
                out.append(walk)
        return out

    @property
    def component_count(self) -> int:
        return len(self.strand_components()) + self.free_loops

    def self_writhe(self) -> int:
        comp = {}
        for k, walk in enumerate(self.strand_components()):
            for x in walk:
                comp[x] = k
        return sum(s for c, s in zip(self.crossings, self.signs) if comp[c[0]] == comp[c[1]])

    def mirror(self) -> DecoratedPd:
        """Switch every crossing (the mirror image)."""
        cr = tuple((c[1], c[2], c[3], c[0]) for c in self.crossings)
        return DecoratedPd(cr, tuple(-s for s in self.signs), self.free_loops)

    def __str__(self) -> str:
        body = ",".join("X[" + ",".join(map(str, c)) + "]" for c in self.crossings)
        return f"PD[{body}]"

    def to_text(self) -> str:
        """PD text followed by the sign vector (and free loops, if any)."""
        out = f"{self} S[{','.join('%+d' % s for s in self.signs)}]"
        if self.free_loops:
            out += f" O[{self.free_loops}]"
        return out


def _infer_signs(crossings: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Orient each strand so that under-passes enter at position 0 where
    possible (the usual PD convention); strands that are never under follow
    increasing labels."""
    if not crossings:
        return ()
    crossings = [tuple(c) for c in crossings]
    ends = _ends(crossings)
    under_in: dict[int, int] = {}
    over_in: dict[int, int] = {}
    seen: set[int] = set()
    for lab in sorted(ends):
        if lab in seen:
            continue
        options = []
        for start in ends[lab]:
            walk = list(_walk(crossings, ends, lab, start))
            score = sum(1 for _, (i, p) in walk if p == 0) - sum(1 for _, (i, p) in walk if p == 2)
            nxt = crossings[start[0]][(start[1] + 2) % 4]
            options.append((-score, nxt, walk))
        options.sort(key=lambda o: (o[0], o[1]))
        walk = options[0][2]
        seen.update(x for x, _ in walk)
        for _, (i, p) in walk:
            (under_in if p % 2 == 0 else over_in)[i] = p
    return tuple(1 if over_in[i] == (under_in[i] + 3) % 4 else -1 for i in range(len(crossings)))


def decorated_pd(crossings, signs=None, free_loops: int = 0) -> DecoratedPd:
    crossings = tuple(tuple(c) for c in crossings)
    if signs is None:
        signs = _infer_signs(crossings)
    return DecoratedPd(crossings, tuple(signs), free_loops)


def parse_decorated_pd(text: str) -> DecoratedPd:
    """``PD[X[...],...]`` optionally followed by ``S[+1,-1,...]`` and ``O[k]``.

    ``PD[]`` is the crossingless unknot. Without ``S[...]`` the signs follow
    the orientation in which every under-pass enters at position 0.
    """
    text = text.strip()
    free = 0
    signs = None
    parts = text.split(" ")
    pd_text = parts[0]
    for extra in parts[1:]:
        if not extra:
            continue
        if extra.startswith("S[") and extra.endswith("]"):
            body = extra[2:-1]
            signs = tuple(int(x) for x in body.split(",")) if body else ()
        elif extra.startswith("O[") and extra.endswith("]"):
            free = int(extra[2:-1])
        else:
            raise CodeError(f"unexpected decoration {extra!r}", text.index(extra))
    if pd_text.replace(" ", "") == "PD[]":
        return DecoratedPd((), (), max(free, 1))
    code = parse_pd(pd_text)
    return decorated_pd(code.crossings, signs, free)


# ---------------------------------------------------------------------------
# internal dart form
# ---------------------------------------------------------------------------
#
# A diagram with n crossings has darts 0..4n-1; dart 4c+p is position p of
# crossing c (counterclockwise, under strand at even positions). link[d] is the
# dart at the other end of d's edge.

_STRAIGHT = (2, 3, 0, 1)
_SMOOTH_A = (1, 0, 3, 2)
_SMOOTH_B = (3, 2, 1, 0)


def _to_link(pd: DecoratedPd) -> list[int]:
    ends: dict[int, list[int]] = {}
    for i, c in enumerate(pd.crossings):
        for p, x in enumerate(c):
            ends.setdefault(x, []).append(4 * i + p)
    link = [0] * (4 * len(pd.crossings))
    for a, b in ends.values():
        link[a], link[b] = b, a
    return link


def _rewire(link: list[int], removed: dict[int, Sequence[int]]):
    """Delete crossings, joining their positions by the given pairings.

    Returns ``(new_link, closed_loops, kept)``, ``kept`` listing the old
    index of every surviving crossing.
    """
    n = len(link) // 4
    kept = [c for c in range(n) if c not in removed]
    index = {c: k for k, c in enumerate(kept)}
    new = [-1] * (4 * len(kept))
    used: set[int] = set()
    for c in kept:
        for p in range(4):
            nd = 4 * index[c] + p
            if new[nd] >= 0:
                continue
            x = link[4 * c + p]
            while (x >> 2) in removed:
                used.add(x)
                y = (x & ~3) | removed[x >> 2][x & 3]
                used.add(y)
                x = link[y]
            nx = 4 * index[x >> 2] + (x & 3)
            new[nd] = nx
            new[nx] = nd
    loops = 0
    for c in removed:
        for p in range(4):
            x = 4 * c + p
            if x in used:
                continue
            loops += 1
            while x not in used:
                used.add(x)
                y = (x & ~3) | removed[x >> 2][x & 3]
                used.add(y)
                x = link[y]
    return new, loops, kept


def _find_curl(link: list[int]):
    for d, e in enumerate(link):
        if (e >> 2) == (d >> 2) and d < e:
            p, q = d & 3, e & 3
            if (q - p) % 4 in (1, 3):
                lo = p if (q - p) % 4 == 1 else q
                return d >> 2, (1 if lo % 2 == 0 else -1)
    return None


def _find_bigon(link: list[int]):
    for d in range(len(link)):
        x = link[d]
        if (x >> 2) == (d >> 2) or (x & 1) != (d & 1):
            continue
        e = (x & ~3) | ((x + 1) & 3)
        y = link[e]
        if (y & ~3) | ((y + 1) & 3) == d and (e >> 2) != (d >> 2):
            return d >> 2, x >> 2
    return None


def _simplify(link: list[int], track: list[int] | None = None):
    """Remove curls and bigons until none is left.

    Returns ``(link, a_exponent, loops, track)``; ``track`` follows the
    surviving crossings' original ids.
    """
    aexp = 0
    loops = 0
    track = list(track) if track is not None else list(range(len(link) // 4))
    while link:
        hit = _find_curl(link)
        if hit is not None:
            c, s = hit
            aexp += s
            link, lp, kept = _rewire(link, {c: _STRAIGHT})
        else:
            hit2 = _find_bigon(link)
            if hit2 is None:
                break
            c1, c2 = hit2
            link, lp, kept = _rewire(link, {c1: _STRAIGHT, c2: _STRAIGHT})
        loops += lp
        track = [track[k] for k in kept]
    return link, aexp, loops, track


def _pieces(link: list[int]) -> list[list[int]]:
    n = len(link) // 4
    comp = [-1] * n
    out = []
    for s in range(n):
        if comp[s] >= 0:
            continue
        members = [s]
        comp[s] = s
        k = 0
        while k < len(members):
            c = members[k]
            k += 1
            for p in range(4):
                o = link[4 * c + p] >> 2
                if comp[o] < 0:
                    comp[o] = s
                    members.append(o)
        if len(members) == n:
            return [link]
        members.sort()
        index = {c: i for i, c in enumerate(members)}
        sub = [0] * (4 * len(members))
        for c in members:
            for p in range(4):
                x = link[4 * c + p]
                sub[4 * index[c] + p] = 4 * index[x >> 2] + (x & 3)
        out.append(sub)
    return out


def _canonical(link: list[int]):
    n = len(link)
    rot = [(d & ~3) | ((d + 1) & 3) for d in range(n)]
    color = [d & 1 for d in range(n)]
    return _kernels.canonical_code(rot, link, color, allow_mirror=True)


def _switch(link: list[int], c: int) -> list[int]:
    """Exchange over and under at crossing ``c``."""

    def f(x):
        return x if (x >> 2) != c else (x & ~3) | ((x - 1) & 3)

    new = [0] * len(link)
    for x, y in enumerate(link):
        new[f(x)] = f(y)
    return new


def _strands(link: list[int]) -> list[list[int]]:
    """Closed strands as lists of entering darts."""
    seen: set[int] = set()
    out = []
    for d in range(len(link)):
        if d in seen:
            continue
        walk = []
        x = d
        while x not in seen:
            seen.add(x)
            seen.add(x ^ 2)
            walk.append(x)
            x = link[x ^ 2]
        out.append(walk)
    return out


def _sign(under_in: int, over_in: int) -> int:
    return 1 if (over_in & 3) == ((under_in & 3) + 3) & 3 else -1


def _descending_plan(link: list[int]):
    """Choose base points, directions and a stacking order.

    Returns ``(bad, self_writhe, k)``: crossings first met from below (in
    traversal order), the self-writhe after switching them, and the number
    of strands.
    """
    strands = _strands(link)
    k = len(strands)
    comp_of = {}
    for s, walk in enumerate(strands):
        for x in walk:
            comp_of[x >> 2] = comp_of.get(x >> 2, set()) | {s}
    chosen = []
    for s, walk in enumerate(strands):
        L = len(walk)
        best = None
        for rev in (0, 1):
            seq = walk if not rev else [x ^ 2 for x in reversed(walk)]
            for start in range(L):
                order = seq[start:] + seq[:start]
                first: dict[int, int] = {}
                bad = 0
                for x in order:
                    c = x >> 2
                    if len(comp_of[c]) == 1 and c not in first:
                        first[c] = x
                        if (x & 1) == 0:
                            bad += 1
                if best is None or bad < best[0]:
                    best = (bad, order)
        chosen.append(best[1])
    # stacking order between strands
    cost = [[0] * k for _ in range(k)]
    for s, order in enumerate(chosen):
        for x in order:
            c = x >> 2
            if len(comp_of[c]) == 2 and (x & 1) == 0:
                (t,) = comp_of[c] - {s}
                cost[s][t] += 1
    if k <= 6:
        perms = itertools.permutations(range(k))
        best_perm = min(
            perms, key=lambda pm: sum(cost[pm[i]][pm[j]] for i in range(k) for j in range(i + 1, k))
        )
    else:
        rest = set(range(k))
        best_perm = []
        while rest:
            s = min(rest, key=lambda s: sum(cost[s][t] for t in rest if t != s))
            best_perm.append(s)
            rest.remove(s)
    seen: dict[int, int] = {}
    bad_list = []
    under_in: dict[int, int] = {}
    over_in: dict[int, int] = {}
    for s in best_perm:
        for x in chosen[s]:
            c = x >> 2
            if c not in seen:
                seen[c] = x
                if (x & 1) == 0:
                    bad_list.append(c)
            (under_in if (x & 1) == 0 else over_in)[c] = x
    bad_set = set(bad_list)
    sw = 0
    for c, comps in comp_of.items():
        if len(comps) == 1:
            s = _sign(under_in[c], over_in[c])
            sw += -s if c in bad_set else s
    return bad_list, sw, k


class _Engine:
    def __init__(self, memo: dict | None, simplify: bool):
        self.memo = memo
        self.simplify = simplify

    def evaluate(self, link: list[int], loops: int = 0) -> LaurentPoly2:
        aexp = 0
        if self.simplify:
            link, aexp, lp, _ = _simplify(link)
            loops += lp
        pieces = _pieces(link) if link else []
        parts = len(pieces) + loops
        if parts == 0:
            raise ValueError("empty diagram")
        out = DELTA ** (parts - 1)
        for piece in pieces:
            out = out * self.connected(piece)
        return out.shift(da=aexp)

    def connected(self, link: list[int]) -> LaurentPoly2:
        if self.memo is not None:
            key, mirrored = _canonical(link)
            hit = self.memo.get(key)
            if hit is not None:
                return hit.mirror() if mirrored else hit
        value = self._skein(link)
        if self.memo is not None:
            self.memo[key] = value.mirror() if mirrored else value
        return value

    def _skein(self, link: list[int]) -> LaurentPoly2:
        bad, sw, k = _descending_plan(link)
        total = LaurentPoly2()
        current = link
        sign = 1
        for c in bad:
            a, la, _ = _rewire(current, {c: _SMOOTH_A})
            b, lb, _ = _rewire(current, {c: _SMOOTH_B})
            term = (self.evaluate(a, la) + self.evaluate(b, lb)).shift(dz=1)
            total = total + term * sign
            current = _switch(current, c)
            sign = -sign
        base = (DELTA ** (k - 1)).shift(da=sw)
        return total + base * sign


_MEMO: dict = {}


def clear_memo() -> None:
    _MEMO.clear()


def kauffman_lambda(pd: DecoratedPd, memo: bool | dict = True, simplify: bool = True,
                    cap: int | None = DEFAULT_CAP) -> LaurentPoly2:
    """Regular-isotopy polynomial ``Lambda`` of the unoriented diagram."""
    if cap is not None and len(pd.crossings) > cap:
        raise CrossingCapExceeded(f"{len(pd.crossings)} crossings exceed the cap of {cap}")
    store = _MEMO if memo is True else (memo if isinstance(memo, dict) else None)
    engine = _Engine(store, simplify)
    loops = pd.free_loops
    if not pd.crossings:
        return DELTA ** (max(loops, 1) - 1)
    return engine.evaluate(_to_link(pd), loops)


def kauffman_f(pd: DecoratedPd, memo: bool | dict = True, cap: int | None = DEFAULT_CAP) -> LaurentPoly2:
    """``F = a^-w Lambda`` for the stored orientation."""
    return kauffman_lambda(pd, memo=memo, cap=cap).shift(da=-pd.writhe)


def unoriented_key(pd: DecoratedPd, memo: bool | dict = True, cap: int | None = DEFAULT_CAP) -> LaurentPoly2:
    """``a^-(self-writhe) Lambda``: an invariant of the unoriented link.

    It equals ``F`` for knots; for links it does not depend on the relative
    orientation of the components.
    """
    return kauffman_lambda(pd, memo=memo, cap=cap).shift(da=-pd.self_writhe())


def mirror_poly(p: LaurentPoly2) -> LaurentPoly2:
    return p.mirror()


def unlink_value(k: int) -> LaurentPoly2:
    return DELTA ** (k - 1)


def simplify_pd(pd: DecoratedPd) -> DecoratedPd:
    """Apply crossing-removing Reidemeister I and II moves exhaustively."""
    if not pd.crossings:
        return pd
    link, _, loops, track = _simplify(_to_link(pd))
    return _from_link(link, [pd.signs[t] for t in track], pd.free_loops + loops)


def _from_link(link: list[int], signs: Sequence[int], free_loops: int) -> DecoratedPd:
    label = [0] * len(link)
    nxt = 1
    for d in range(len(link)):
        if label[d] == 0:
            label[d] = label[link[d]] = nxt
            nxt += 1
    crossings = tuple(tuple(label[4 * c + p] for p in range(4)) for c in range(len(link) // 4))
    return DecoratedPd(crossings, tuple(signs), free_loops)
