"""PD and sPD codes: parsing, serialization, strand traversal and renumbering.

A classical PD code lists, per double crossing, its four edge labels in
counterclockwise order. An sPD code lists, per triple crossing, a name
(``eX`` or ``eY``) and its six edge labels; positions ``i`` and ``i + 3``
belong to the same strand. The name fixes the direction in which the labels
are written: ``eX`` entries run counterclockwise, ``eY`` entries clockwise.
Bare projections (no heights) are written as ``eX``.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "CodeError",
    "PdCode",
    "SPdCode",
    "TripleCrossing",
    "StrandDecomposition",
    "parse_pd",
    "parse_spd",
    "parse_code",
    "components",
    "renumber",
    "natural_parity",
    "label_walks",
    "ccw_entry",
    "edge_heads",
]


class CodeError(ValueError):
    """Malformed or invalid code. ``pos`` is the character offset, if known."""

    def __init__(self, message: str, pos: int | None = None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


@dataclass(frozen=True)
class TripleCrossing:
    name: str
    edges: tuple[int, int, int, int, int, int]

    def __str__(self) -> str:
        return f"{self.name}[{','.join(map(str, self.edges))}]"


def _check_multiplicity(tuples: Iterable[Sequence[int]]) -> None:
    counts = Counter(x for t in tuples for x in t)
    bad = sorted(k for k, v in counts.items() if v != 2)
    if bad:
        shown = ",".join(map(str, bad[:8]))
        raise CodeError(f"labels must occur exactly twice; offending labels: {shown}")
    if any(k <= 0 for k in counts):
        raise CodeError("edge labels must be positive integers")


@dataclass(frozen=True)
class PdCode:
    """Classical planar diagram code (4-valent)."""

    crossings: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        for c in self.crossings:
            if len(c) != 4:
                raise CodeError(f"PD crossing must have 4 entries, got {len(c)}")
        _check_multiplicity(self.crossings)

    def __len__(self) -> int:
        return len(self.crossings)

    def __str__(self) -> str:
        return "PD[" + ",".join("X[" + ",".join(map(str, c)) + "]" for c in self.crossings) + "]"

    @property
    def labels(self) -> list[int]:
        return sorted({x for c in self.crossings for x in c})

    def to_json(self) -> dict:
        return {"crossings": [{"name": "X", "edges": list(c)} for c in self.crossings]}


def ccw_entry(name: str, edges: Sequence[int]) -> tuple[int, ...]:
    """Counterclockwise order of a written entry (``eY`` is written clockwise)."""
    e = tuple(edges)
    if name == "eY":
        return (e[0], e[5], e[4], e[3], e[2], e[1])
    return e


@dataclass(frozen=True)
class SPdCode:
    """Six-valent planar diagram code (triple crossings)."""

    crossings: tuple[TripleCrossing, ...]

    def __post_init__(self):
        for c in self.crossings:
            if c.name not in ("eX", "eY"):
                raise CodeError(f"unknown crossing name {c.name!r}")
            if len(c.edges) != 6:
                raise CodeError(f"sPD crossing must have 6 entries, got {len(c.edges)}")
        _check_multiplicity(c.edges for c in self.crossings)

    @classmethod
    def from_tuples(cls, tuples: Iterable[Sequence[int]], names: Iterable[str] | None = None) -> SPdCode:
        tuples = [tuple(t) for t in tuples]
        names = list(names) if names is not None else ["eX"] * len(tuples)
        return cls(tuple(TripleCrossing(n, t) for n, t in zip(names, tuples)))

    def __len__(self) -> int:
        return len(self.crossings)

    def __str__(self) -> str:
        return "sPD[" + ",".join(str(c) for c in self.crossings) + "]"

    @property
    def tuples(self) -> list[tuple[int, ...]]:
        return [c.edges for c in self.crossings]

    @property
    def ccw_tuples(self) -> list[tuple[int, ...]]:
        """Edge labels in counterclockwise order, starting at the written first."""
        return [ccw_entry(c.name, c.edges) for c in self.crossings]

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.crossings]

    @property
    def labels(self) -> list[int]:
        return sorted({x for c in self.crossings for x in c.edges})

    def loops(self) -> list[tuple[int, int]]:
        """``(crossing, position)`` of every loop, position being its first slot."""
        out = []
        for i, c in enumerate(self.crossings):
            e = c.edges
            for p in range(6):
                if e[p] == e[(p + 1) % 6]:
                    out.append((i, p))
        return out

    def to_json(self) -> dict:
        return {"crossings": [{"name": c.name, "edges": list(c.edges)} for c in self.crossings]}

    @classmethod
    def from_json(cls, obj: dict) -> SPdCode:
        return cls(tuple(TripleCrossing(c["name"], tuple(c["edges"])) for c in obj["crossings"]))


@dataclass(frozen=True)
class StrandDecomposition:
    components: tuple[tuple[int, ...], ...]

    @property
    def component_count(self) -> int:
        return len(self.components)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<word>[A-Za-z]+)|(?P<sym>[\[\],]))")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            rest = self.text[self.pos:]
            if rest.strip() == "":
                return None, None, len(self.text)
            return "bad", rest.strip()[0], self.pos + len(rest) - len(rest.lstrip())
        kind = m.lastgroup
        return kind, m.group(kind), m.start(kind)

    def peek(self):
        return self._peek()[:2]

    def take(self, kind=None, value=None):
        k, v, start = self._peek()
        if k is None:
            raise CodeError("unexpected end of input", start)
        if (kind and k != kind) or (value and v != value):
            raise CodeError(f"expected {value or kind}, found {v!r}", start)
        m = _TOKEN.match(self.text, self.pos)
        self.pos = m.end()
        return v, start

    def at_end(self) -> bool:
        return self._peek()[0] is None


def _parse(text: str, head: str, entry_names: tuple[str, ...], arity: int):
    lex = _Lexer(text)
    lex.take("word", head)
    lex.take("sym", "[")
    entries = []
    while True:
        name, start = lex.take("word")
        if name not in entry_names:
            raise CodeError(f"unknown crossing name {name!r}", start)
        lex.take("sym", "[")
        values = []
        while True:
            v, vpos = lex.take("int")
            if int(v) <= 0:
                raise CodeError("edge labels must be positive", vpos)
            values.append(int(v))
            sym, _ = lex.take("sym")
            if sym == "]":
                break
            if sym != ",":
                raise CodeError("expected ',' or ']'", lex.pos)
        if len(values) != arity:
            raise CodeError(f"crossing {name} has {len(values)} entries, expected {arity}", start)
        entries.append((name, tuple(values)))
        sym, spos = lex.take("sym")
        if sym == "]":
            break
        if sym != ",":
            raise CodeError("expected ',' or ']'", spos)
    if not lex.at_end():
        raise CodeError("trailing characters", lex._peek()[2])
    return entries


def parse_spd(text: str) -> SPdCode:
    """Parse ``sPD[eX[...],eY[...],...]``."""
    entries = _parse(text, "sPD", ("eX", "eY"), 6)
    return SPdCode(tuple(TripleCrossing(n, e) for n, e in entries))


def parse_pd(text: str) -> PdCode:
    """Parse ``PD[X[...],...]``."""
    entries = _parse(text, "PD", ("X",), 4)
    return PdCode(tuple(e for _, e in entries))


def parse_code(text: str) -> PdCode | SPdCode:
    stripped = text.lstrip()
    if stripped.startswith("sPD"):
        return parse_spd(text)
    if stripped.startswith("PD"):
        return parse_pd(text)
    if stripped.startswith("{"):
        obj = json.loads(text)
        names = {c["name"] for c in obj["crossings"]}
        if names <= {"X"}:
            return PdCode(tuple(tuple(c["edges"]) for c in obj["crossings"]))
        return SPdCode.from_json(obj)
    raise CodeError("code must start with 'PD' or 'sPD'", 0)


# ---------------------------------------------------------------------------
# strands
# ---------------------------------------------------------------------------


def _ends(tuples: Sequence[Sequence[int]]) -> dict[int, list[tuple[int, int]]]:
    ends: dict[int, list[tuple[int, int]]] = {}
    for i, t in enumerate(tuples):
        for p, x in enumerate(t):
            ends.setdefault(x, []).append((i, p))
    return ends


def _other_end(ends, label, end):
    a, b = ends[label]
    return b if a == end else a


def _walk(tuples, ends, start_label, toward):
    """Follow a strand entering ``toward`` along ``start_label``.

    Yields ``(label, entry_end)`` pairs until the strand closes up.
    """
    k = len(tuples[0]) // 2
    label, end = start_label, toward
    while True:
        yield label, end
        i, p = end
        q = (p + k) % (2 * k)
        nxt = tuples[i][q]
        end = _other_end(ends, nxt, (i, q))
        label = nxt
        if label == start_label and end == toward:
            return


def natural_parity(code: SPdCode | Sequence[Sequence[int]]) -> list[int]:
    """Parity of the incoming positions at each crossing.

    The orientation is the natural one (in-out alternating at every
    crossing). Of the two natural orientations, the one agreeing with the
    label order on most strands of three or more edges is used.
    """
    tuples = code.tuples if isinstance(code, SPdCode) else [tuple(t) for t in code]
    parity, _ = _orient(tuples)
    return parity


def _orient(tuples):
    ends = _ends(tuples)
    n = len(tuples)
    half = len(tuples[0]) // 2 if tuples else 3
    # one walk per component, each in an arbitrary starting direction
    walks = []
    comp_of: dict[int, int] = {}
    for label in sorted(ends):
        if label in comp_of:
            continue
        e0, e1 = ends[label]

        def next_label(end):
            i, p = end
            return tuples[i][(p + half) % (2 * half)]

        # head towards the smaller neighbouring label (relevant for the anchor)
        start = min((e0, e1), key=lambda e: (next_label(e), e))
        walk = list(_walk(tuples, ends, label, start))
        for lab, _ in walk:
            comp_of[lab] = len(walks)
        walks.append(walk)
    # flip[c] reverses component c; reversing swaps the parity of every entry
    flip: list[int | None] = [None] * len(walks)
    parity: list[int | None] = [None] * n
    at_crossing: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for c, walk in enumerate(walks):
        for _, (i, p) in walk:
            at_crossing[i].append((c, p % 2))
    for root in range(len(walks)):
        if flip[root] is not None:
            continue
        flip[root] = 0
        queue = [root]
        while queue:
            c = queue.pop()
            for _, (i, p) in walks[c]:
                want = (p % 2) ^ flip[c]
                if parity[i] is None:
                    parity[i] = want
                elif parity[i] != want:
                    raise CodeError("projection admits no natural orientation")
                for c2, q in at_crossing[i]:
                    f = q ^ parity[i]
                    if flip[c2] is None:
                        flip[c2] = f
                        queue.append(c2)
                    elif flip[c2] != f:
                        raise CodeError("projection admits no natural orientation")
    # natural orientations come in reversed pairs; keep the one along which
    # most long strands already read upwards
    score = sum((1 if not flip[c] else -1) for c, w in enumerate(walks) if len(w) >= 3)
    if score < 0:
        flip = [1 - f for f in flip]
        parity = [1 - q for q in parity]
    oriented = []
    for c, walk in enumerate(walks):
        if flip[c]:
            lab0, _ = walk[0]
            e0, e1 = ends[lab0]
            other = e1 if walk[0][1] == e0 else e0
            walk = list(_walk(tuples, ends, lab0, other))
        oriented.append(walk)
    return parity, oriented


def components(code: SPdCode) -> StrandDecomposition:
    """Split edge labels into closed strands (opposite positions continue)."""
    tuples = code.tuples
    ends = _ends(tuples)
    seen: set[int] = set()
    comps = []
    for label in sorted(ends):
        if label in seen:
            continue
        walk = [lab for lab, _ in _walk(tuples, ends, label, ends[label][0])]
        seen.update(walk)
        comps.append(tuple(walk))
    return StrandDecomposition(tuple(comps))


def pd_components(code: PdCode) -> StrandDecomposition:
    tuples = [tuple(c) for c in code.crossings]
    ends = _ends(tuples)
    seen: set[int] = set()
    comps = []
    for label in sorted(ends):
        if label in seen:
            continue
        walk = [lab for lab, _ in _walk(tuples, ends, label, ends[label][0])]
        seen.update(walk)
        comps.append(tuple(walk))
    return StrandDecomposition(tuple(comps))


def label_walks(tuples) -> list[list[tuple[int, int]]]:
    """One walk per component, following increasing labels.

    Components are visited by smallest label; each walk starts on that label
    and heads toward the smaller of its two neighbours, so a strand that is
    already numbered consecutively is traversed in label order.
    """
    ends = _ends(tuples)
    half = len(tuples[0]) // 2 if tuples else 3
    walks = []
    seen: set[int] = set()
    for label in sorted(ends):
        if label in seen:
            continue

        def next_label(end):
            i, p = end
            return tuples[i][(p + half) % (2 * half)]

        start = min(ends[label], key=lambda e: (next_label(e), e))
        walk = list(_walk(tuples, ends, label, start))
        seen.update(lab for lab, _ in walk)
        walks.append(walk)
    return walks


def renumber(code: SPdCode) -> SPdCode:
    """Relabel edges 1..3n, increasing along every strand.

    Strands are visited from the smallest unvisited original label and keep
    the direction in which their old labels increase.
    """
    new: dict[int, int] = {}
    for walk in label_walks(code.tuples):
        for lab, _ in walk:
            new[lab] = len(new) + 1
    return SPdCode(
        tuple(TripleCrossing(c.name, tuple(new[x] for x in c.edges)) for c in code.crossings)
    )


def edge_heads(code: SPdCode, natural: bool = False) -> dict[int, tuple[int, int]]:
    """The end ``(crossing, position)`` each edge points into.

    By default strands are oriented by increasing labels; with ``natural``
    the in-out alternating orientation is used instead.
    """
    walks = _orient(code.tuples)[1] if natural else label_walks(code.tuples)
    return {lab: end for walk in walks for lab, end in walk}
