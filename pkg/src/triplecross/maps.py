"""Spherical combinatorial maps.

Darts are numbered ``0..2e-1``. ``rot`` sends a dart to the next dart
counterclockwise around its vertex and ``alpha`` to the other end of its edge.
The permutation pair of the isotopy test is derived from these: ``tau`` is
``rot`` and ``sigma = alpha o rot^-1`` (so ``sigma o tau = alpha`` has order
two); cycles of ``tau`` are vertices, cycles of ``sigma`` are faces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import _kernels
from .codes import PdCode, SPdCode

__all__ = [
    "MapError",
    "CombMap",
    "CanonicalForm",
    "map_from_code",
    "mirror",
    "dual",
    "faces",
    "canonical_form",
    "isomorphic",
    "all_isomorphisms",
    "relabel",
    "cycles",
]


class MapError(ValueError):
    pass


def cycles(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(perm)
    out = []
    for d in range(len(perm)):
        if seen[d]:
            continue
        cyc = []
        x = d
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        out.append(tuple(cyc))
    return out


def _inverse(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


@dataclass(frozen=True)
class CombMap:
    rot: tuple[int, ...]
    alpha: tuple[int, ...]
    color: tuple[int, ...] | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        n = len(self.rot)
        if n == 0 or n % 2 or len(self.alpha) != n:
            raise MapError("a map needs an even, positive number of darts")
        if sorted(self.rot) != list(range(n)) or sorted(self.alpha) != list(range(n)):
            raise MapError("rot and alpha must be permutations")
        if any(self.alpha[d] == d or self.alpha[self.alpha[d]] != d for d in range(n)):
            raise MapError("alpha must be a fixed-point-free involution")

    @property
    def n_darts(self) -> int:
        return len(self.rot)

    @property
    def e(self) -> int:
        return len(self.rot) // 2

    @property
    def tau(self) -> tuple[int, ...]:
        return self.rot

    @property
    def sigma(self) -> tuple[int, ...]:
        inv = _inverse(self.rot)
        return tuple(self.alpha[inv[d]] for d in range(self.n_darts))

    def vertices(self) -> list[tuple[int, ...]]:
        return cycles(self.rot)

    def faces(self) -> list[tuple[int, ...]]:
        # rot o alpha walks each face with the face on the left
        return cycles(tuple(self.rot[self.alpha[d]] for d in range(self.n_darts)))

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            d = stack.pop()
            for x in (self.rot[d], self.alpha[d]):
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        return len(seen) == self.n_darts

    def euler(self) -> int:
        return len(self.vertices()) - self.e + len(self.faces())

    def vertex_of(self) -> list[int]:
        out = [0] * self.n_darts
        for v, cyc in enumerate(self.vertices()):
            for d in cyc:
                out[d] = v
        return out

    def degrees(self) -> list[int]:
        return sorted(len(c) for c in self.vertices())

    def face_degrees(self) -> list[int]:
        return sorted(len(c) for c in self.faces())


@dataclass(frozen=True)
class CanonicalForm:
    code: tuple[int, ...]
    mirror_flag: bool

    def __hash__(self):
        return hash(self.code)

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.code == other.code


def map_from_tuples(tuples: Sequence[Sequence[int]], color=None) -> CombMap:
    """Map whose vertices are the given counterclockwise label tuples."""
    if not tuples:
        raise MapError("empty code has no map")
    rot: list[int] = []
    where: dict[int, list[int]] = {}
    d = 0
    for t in tuples:
        k = len(t)
        for p, x in enumerate(t):
            rot.append(d + (p + 1) % k)
            where.setdefault(x, []).append(d + p)
        d += k
    alpha = [0] * d
    for x, ds in where.items():
        if len(ds) != 2:
            raise MapError(f"label {x} does not occur exactly twice")
        a, b = ds
        alpha[a], alpha[b] = b, a
    return CombMap(tuple(rot), tuple(alpha), tuple(color) if color is not None else None)


def map_from_code(code: PdCode | SPdCode, check: bool = True) -> CombMap:
    """Map of a PD (4-valent) or sPD (6-valent) code; darts follow code order."""
    tuples = code.ccw_tuples if isinstance(code, SPdCode) else [tuple(c) for c in code.crossings]
    m = map_from_tuples(tuples)
    if check:
        if not m.is_connected():
            raise MapError("code is not connected")
        if m.euler() != 2:
            raise MapError(f"code is not spherical (Euler characteristic {m.euler()})")
    return m


def relabel(m: CombMap, perm: Sequence[int]) -> CombMap:
    """Conjugate by ``perm``: dart ``d`` becomes ``perm[d]``."""
    n = m.n_darts
    rot = [0] * n
    alpha = [0] * n
    color = [0] * n if m.color is not None else None
    for d in range(n):
        rot[perm[d]] = perm[m.rot[d]]
        alpha[perm[d]] = perm[m.alpha[d]]
        if color is not None:
            color[perm[d]] = m.color[d]
    return CombMap(tuple(rot), tuple(alpha), tuple(color) if color is not None else None)


def mirror(m: CombMap) -> CombMap:
    """Reflect the sphere: every vertex rotation is reversed."""
    return CombMap(_inverse(m.rot), m.alpha, m.color)


def dual(m: CombMap) -> CombMap:
    """Dual map on the same darts; ``dual(dual(m)) == m`` exactly."""
    return CombMap(tuple(m.rot[m.alpha[d]] for d in range(m.n_darts)), m.alpha)


def faces(m: CombMap) -> list[tuple[int, ...]]:
    return m.faces()


def canonical_form(m: CombMap, allow_mirror: bool = True) -> CanonicalForm:
    key = ("cf", allow_mirror)
    cached = m._cache.get(key)
    if cached is None:
        code, flag = _kernels.canonical_code(m.rot, m.alpha, m.color, allow_mirror)
        cached = CanonicalForm(code, flag)
        m._cache[key] = cached
    return cached


def _witness(m1: CombMap, m2: CombMap, root2: int, flip: bool) -> tuple[int, ...] | None:
    l1 = _kernels.bfs_labels(m1.rot, m1.alpha, 0, False)
    target = mirror(m2) if flip else m2
    l2 = _kernels.bfs_labels(target.rot, target.alpha, root2, False)
    if min(l2) < 0:
        return None
    by_label = [0] * m2.n_darts
    for d, lab in enumerate(l2):
        by_label[lab] = d
    s = tuple(by_label[l1[d]] for d in range(m1.n_darts))
    for d in range(m1.n_darts):
        if target.rot[s[d]] != s[m1.rot[d]] or target.alpha[s[d]] != s[m1.alpha[d]]:
            return None
        if m1.color is not None and (target.color is None or target.color[s[d]] != m1.color[d]):
            return None
    return s


def all_isomorphisms(m1: CombMap, m2: CombMap, allow_mirror: bool = False):
    """Yield ``(s, mirrored)`` for every dart bijection carrying m1 onto m2."""
    if m1.n_darts != m2.n_darts:
        return
    for flip in ((False, True) if allow_mirror else (False,)):
        for root in range(m2.n_darts):
            s = _witness(m1, m2, root, flip)
            if s is not None:
                yield s, flip


def isomorphic(m1: CombMap, m2: CombMap, allow_mirror: bool = False) -> tuple[int, ...] | None:
    """A witness ``s`` with ``s tau1 s^-1 = tau2`` and ``s sigma1 s^-1 = sigma2``.

    With ``allow_mirror`` the comparison may be against ``mirror(m2)``.
    Returns ``None`` when the maps are not isomorphic.
    """
    if m1.n_darts != m2.n_darts:
        return None
    if canonical_form(m1, allow_mirror) != canonical_form(m2, allow_mirror):
        return None
    for s, _ in all_isomorphisms(m1, m2, allow_mirror):
        return s
    return None


def format_cycles(perm: Sequence[int], one_based: bool = True) -> str:
    """Cycle notation such as ``(1,6,5,4,3,2)(7,12,11,10,9,8)``; fixed points dropped."""
    off = 1 if one_based else 0
    return "".join(
        "(" + ",".join(str(x + off) for x in c) + ")" for c in cycles(perm) if len(c) > 1
    )
