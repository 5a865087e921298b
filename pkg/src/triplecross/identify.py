"""Identify triple-crossing diagrams against a reference table of named links.

Each reference PD code is evaluated with the same Kauffman engine. A diagram
matches a name when the component counts agree and the unoriented
polynomial ``a^-(self-writhe) Lambda`` agrees up to ``a -> a^-1``.
"""

from __future__ import annotations

import csv
import functools
import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from . import generate as G
from .codes import SPdCode, components, renumber
from .diagrams import TripleDiagram, enumerate_labelings, expand, name_crossings, t1_applicable
from .kauffman import DEFAULT_CAP, DecoratedPd, parse_decorated_pd, simplify_pd, unoriented_key
from .laurent import LaurentPoly2

__all__ = [
    "ReferenceEntry",
    "ReferenceTable",
    "MatchResult",
    "ClassificationResult",
    "load_reference",
    "default_reference_path",
    "mirror_key",
    "match",
    "identify_diagram",
    "classify",
    "identify_projection",
    "ProjectionReport",
    "check_c2_3c3",
    "crossing_number_of",
]

log = logging.getLogger(__name__)

UNKNOT = "0_1"


def default_reference_path(extended: bool = False) -> Path:
    name = "reference_extended.csv" if extended else "reference.csv"
    return Path(str(resources.files("triplecross") / "data" / name))


def mirror_key(poly: LaurentPoly2) -> str:
    """One string for a polynomial and its mirror image."""
    return min(str(poly), str(poly.mirror()))


def crossing_number_of(name: str) -> int | None:
    """Crossing number encoded in a table name (``8^2_15``, ``K11n38``, ``L10n7``)."""
    m = re.match(r"^(?:[KL])?(\d+)[an_^]", name)
    return int(m.group(1)) if m else None


@dataclass(frozen=True)
class ReferenceEntry:
    name: str
    components: int
    pd: DecoratedPd
    poly: LaurentPoly2

    @property
    def crossings(self) -> int | None:
        return crossing_number_of(self.name)


@dataclass
class ReferenceTable:
    entries: list[ReferenceEntry]
    index: dict[tuple[int, str], list[str]]
    collisions: list[list[str]]
    path: str = ""

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def load_reference(path: str | Path | None = None, cap: int | None = DEFAULT_CAP) -> ReferenceTable:
    """Read ``name,components,pd`` rows and compute every polynomial.

    Names sharing a polynomial (and component count) are reported in
    ``collisions``; this is not an error.
    """
    path = Path(path) if path is not None else default_reference_path()
    entries: list[ReferenceEntry] = []
    index: dict[tuple[int, str], list[str]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames[:3]] != ["name", "components", "pd"]:
            raise ValueError(f"{path}: header must be name,components,pd")
        for line, row in enumerate(reader, start=2):
            try:
                pd = parse_decorated_pd(row["pd"])
                comps = int(row["components"])
            except ValueError as exc:
                raise ValueError(f"{path}:{line}: {exc}") from exc
            if pd.component_count != comps:
                raise ValueError(f"{path}:{line}: {row['name']} has {pd.component_count} components, not {comps}")
            poly = unoriented_key(pd, cap=cap)
            entries.append(ReferenceEntry(row["name"], comps, pd, poly))
            index.setdefault((comps, mirror_key(poly)), []).append(row["name"])
    collisions = [names for names in index.values() if len(names) > 1]
    return ReferenceTable(entries, index, collisions, str(path))


@dataclass(frozen=True)
class MatchResult:
    names: tuple[str, ...]
    ambiguous: bool
    tie_break: str = ""

    @property
    def name(self) -> str | None:
        return self.names[0] if len(self.names) == 1 else None


def match(ref: ReferenceTable, poly: LaurentPoly2, n_components: int,
          crossing_bound: int | None = None) -> MatchResult:
    """Names whose polynomial equals ``poly`` up to mirror image.

    With several candidates, those whose crossing number exceeds
    ``crossing_bound`` (a diagram's simplified crossing count) are dropped;
    the result stays flagged as ambiguous if more than one name is left.
    """
    names = tuple(ref.index.get((n_components, mirror_key(poly)), ()))
    if len(names) <= 1:
        return MatchResult(names, False)
    note = ""
    if crossing_bound is not None:
        kept = tuple(n for n in names if (crossing_number_of(n) or 0) <= crossing_bound)
        if kept and len(kept) < len(names):
            note = f"crossing bound {crossing_bound} keeps {','.join(kept)} of {','.join(names)}"
            log.info("tie-break: %s", note)
            names = kept
    return MatchResult(names, len(names) > 1, note)


def identify_diagram(ref: ReferenceTable, d: TripleDiagram, cap: int | None = DEFAULT_CAP) -> MatchResult:
    pd = expand(d)
    comps = components(d.projection).component_count + d.free_circles if d.n else d.free_circles
    poly = unoriented_key(pd, cap=cap)
    res = match(ref, poly, comps)
    if res.ambiguous:
        res = match(ref, poly, comps, crossing_bound=len(simplify_pd(pd).crossings))
    return res


@dataclass
class ClassificationResult:
    """c3 per identified name, with a witness code and an ambiguity flag."""

    c3: dict[str, int] = field(default_factory=dict)
    witness: dict[str, str] = field(default_factory=dict)
    ambiguous: dict[str, bool] = field(default_factory=dict)
    components: dict[str, int] = field(default_factory=dict)
    unmatched: dict[int, int] = field(default_factory=dict)
    tie_breaks: list[str] = field(default_factory=list)
    diagrams: dict[int, int] = field(default_factory=dict)

    def knots(self, n: int) -> list[str]:
        return sorted((k for k, v in self.c3.items() if v == n and self.components[k] == 1), key=_name_key)

    def links(self, n: int) -> list[str]:
        return sorted((k for k, v in self.c3.items() if v == n and self.components[k] > 1), key=_name_key)

    def rows(self) -> list[dict]:
        out = []
        for name in sorted(self.c3, key=lambda k: (self.c3[k], self.components[k] > 1, _name_key(k))):
            out.append({
                "name": name,
                "c3": self.c3[name],
                "witness_spd": self.witness[name],
                "ambiguous": int(self.ambiguous[name]),
            })
        return out

    def summary(self) -> dict:
        ns = sorted(set(self.c3.values()) | set(self.diagrams))
        return {
            str(n): {
                "K": len(self.knots(n)),
                "L": len(self.links(n)),
                "knots": self.knots(n),
                "links": self.links(n),
                "diagrams_evaluated": self.diagrams.get(n, 0),
                "unmatched": self.unmatched.get(n, 0),
            }
            for n in ns
        }


def _name_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def _diagrams_to_check(projection: SPdCode) -> Iterable[TripleDiagram]:
    """Labelings worth evaluating.

    The top/bottom exchange gives the mirror image, so only the smaller of
    each mirror pair is kept. A diagram with a loop whose strand is the
    middle one loses that crossing by itself, so it cannot be the first
    appearance of its link and is skipped.
    """
    loops = projection.loops()
    for d in enumerate_labelings(projection):
        mirrored = tuple(tuple(2 - h for h in hs) for hs in d.heights)
        if mirrored < d.heights:
            continue
        if any(t1_applicable(d, site) for site in loops):
            continue
        yield d


@dataclass(frozen=True)
class ProjectionReport:
    """Identification results for every labeling worth checking on one projection.

    ``hits`` holds ``(witness code, names, ambiguous, tie-break note,
    components)`` for each matched diagram.
    """

    evaluated: int
    unmatched: int
    hits: tuple[tuple[str, tuple[str, ...], bool, str, int], ...]


def identify_projection(ref: ReferenceTable, projection: SPdCode, cap: int | None = DEFAULT_CAP) -> ProjectionReport:
    evaluated = unmatched = 0
    hits = []
    comps = components(projection).component_count
    for d in _diagrams_to_check(projection):
        evaluated += 1
        m = identify_diagram(ref, d, cap)
        if not m.names:
            unmatched += 1
            continue
        hits.append((str(name_crossings(d)), m.names, m.ambiguous, m.tie_break, comps + d.free_circles))
    return ProjectionReport(evaluated, unmatched, tuple(hits))


def classify(ref: ReferenceTable, n_max: int, projections: dict[int, list[SPdCode]] | None = None,
             cap: int | None = DEFAULT_CAP, mapper=None) -> ClassificationResult:
    """Smallest ``n`` with a diagram of each reference name (excluding the unknot).

    ``projections`` maps ``n`` to the ``Th_n`` list; missing entries are
    generated. ``mapper(fn, items)`` may be a parallel ``map``; results are
    merged in projection order, so the outcome does not depend on it.
    """
    mapper = mapper or map
    res = ClassificationResult()
    for n in range(1, n_max + 1):
        projs = projections.get(n) if projections else None
        if projs is None:
            projs = G.gen_Th(n)[0].items
        reports = list(mapper(functools.partial(identify_projection, ref, cap=cap), projs))
        res.diagrams[n] = sum(r.evaluated for r in reports)
        res.unmatched[n] = sum(r.unmatched for r in reports)
        for rep in reports:
            for witness, names, ambiguous, note, comps in rep.hits:
                if note:
                    res.tie_breaks.append(f"n={n}: {note}")
                for name in names:
                    if name == UNKNOT or name in res.c3:
                        continue
                    res.c3[name] = n
                    res.witness[name] = witness
                    res.ambiguous[name] = ambiguous
                    res.components[name] = comps
    return res


def check_c2_3c3(n: int, th0: list[SPdCode] | None = None) -> dict:
    """Count one-component projections among the loop-free ``Th0_n``.

    A knot with ``c2 = 3 c3 = 3n`` needs a loop-free minimal projection made
    of a single strand, so ``single == 0`` rules such knots out.
    """
    if th0 is None:
        th0 = G.gen_Th(n)[1].items
    counts = [components(renumber(c)).component_count for c in th0]
    return {
        "n": n,
        "projections": len(th0),
        "single_component": sum(1 for k in counts if k == 1),
        "component_counts": counts,
    }
