"""Hot loops shared by the map and polynomial code.

Every kernel exists twice: a numba ``@njit`` version working on int32 arrays
and a plain Python version with identical semantics. The pure path is used
when numba is missing or when ``TRIPLECROSS_DISABLE_NUMBA`` is set to a
non-empty value other than ``0``; ``BACKEND`` records which one is active.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("TRIPLECROSS_DISABLE_NUMBA", "") not in ("", "0")

try:  # pragma: no cover - exercised implicitly by the backend in use
    if _DISABLED:
        raise ImportError("numba disabled by environment")
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None


# ---------------------------------------------------------------------------
# canonical BFS code
# ---------------------------------------------------------------------------
#
# A map on darts 0..D-1 is given by ``rot`` (next dart counterclockwise at the
# same vertex) and ``alpha`` (the other end of the same edge). ``color`` is an
# extra per-dart tag that must be preserved (over/under, strand heights, ...).
# For a root dart and an orientation the darts are numbered in BFS order,
# exploring rot (or rot^-1) before alpha; the code lists, per new label,
# (label of rot-neighbour, label of alpha-neighbour, color). The minimum over
# all roots (and both orientations when mirrors are identified) is canonical.


def _canonical_py(rot, alpha, color, allow_mirror):
    n = len(rot)
    inv = [0] * n
    for d in range(n):
        inv[rot[d]] = d
    best = None
    best_flag = 0
    orientations = (0, 1) if allow_mirror else (0,)
    for o in orientations:
        nxt = rot if o == 0 else inv
        for root in range(n):
            label = [-1] * n
            order = [root]
            label[root] = 0
            code = []
            worse = False
            better = best is None
            pos = 0
            k = 0
            while k < len(order):
                d = order[k]
                k += 1
                a = nxt[d]
                if label[a] < 0:
                    label[a] = len(order)
                    order.append(a)
                b = alpha[d]
                if label[b] < 0:
                    label[b] = len(order)
                    order.append(b)
                for v in (label[a], label[b], color[d]):
                    if not better:
                        bv = best[pos]
                        if v > bv:
                            worse = True
                            break
                        if v < bv:
                            better = True
                    code.append(v)
                    pos += 1
                if worse:
                    break
            if worse or len(order) != n:
                continue
            if better:
                best = code
                best_flag = o
    return best, best_flag


def _bfs_labels_py(rot, alpha, root, mirror):
    n = len(rot)
    if mirror:
        nxt = [0] * n
        for d in range(n):
            nxt[rot[d]] = d
    else:
        nxt = rot
    label = [-1] * n
    order = [root]
    label[root] = 0
    k = 0
    while k < len(order):
        d = order[k]
        k += 1
        for e in (nxt[d], alpha[d]):
            if label[e] < 0:
                label[e] = len(order)
                order.append(e)
    return label


if njit is not None:

    @njit(cache=True)
    def _canonical_nb(rot, alpha, color, allow_mirror):
        n = rot.shape[0]
        inv = np.empty(n, np.int32)
        for d in range(n):
            inv[rot[d]] = d
        best = np.empty(3 * n, np.int32)
        code = np.empty(3 * n, np.int32)
        label = np.empty(n, np.int32)
        order = np.empty(n, np.int32)
        have_best = False
        best_flag = 0
        n_orient = 2 if allow_mirror else 1
        for o in range(n_orient):
            for root in range(n):
                for d in range(n):
                    label[d] = -1
                label[root] = 0
                order[0] = root
                size = 1
                k = 0
                pos = 0
                worse = False
                better = not have_best
                while k < size:
                    d = order[k]
                    k += 1
                    a = rot[d] if o == 0 else inv[d]
                    if label[a] < 0:
                        label[a] = size
                        order[size] = a
                        size += 1
                    b = alpha[d]
                    if label[b] < 0:
                        label[b] = size
                        order[size] = b
                        size += 1
                    for t in range(3):
                        if t == 0:
                            v = label[a]
                        elif t == 1:
                            v = label[b]
                        else:
                            v = color[d]
                        if not better:
                            bv = best[pos]
                            if v > bv:
                                worse = True
                                break
                            if v < bv:
                                better = True
                        code[pos] = v
                        pos += 1
                    if worse:
                        break
                if worse or size != n:
                    continue
                if better:
                    best[:] = code
                    best_flag = o
                    have_best = True
        if not have_best:
            return best[:0], -1
        return best, best_flag

    @njit(cache=True)
    def _bfs_labels_nb(rot, alpha, root, mirror):
        n = rot.shape[0]
        nxt = np.empty(n, np.int32)
        if mirror:
            for d in range(n):
                nxt[rot[d]] = d
        else:
            for d in range(n):
                nxt[d] = rot[d]
        label = np.full(n, -1, np.int32)
        order = np.empty(n, np.int32)
        label[root] = 0
        order[0] = root
        size = 1
        k = 0
        while k < size:
            d = order[k]
            k += 1
            a = nxt[d]
            if label[a] < 0:
                label[a] = size
                order[size] = a
                size += 1
            b = alpha[d]
            if label[b] < 0:
                label[b] = size
                order[size] = b
                size += 1
        return label

BACKEND = "numba" if njit is not None else "python"


def canonical_code(rot, alpha, color=None, allow_mirror=False, backend=None):
    """Return ``(code, mirrored)`` for a connected map.

    ``code`` is a tuple of ints; ``mirrored`` tells whether the minimum came
    from the reversed orientation. Raises ``ValueError`` on a disconnected map.
    """
    backend = backend or BACKEND
    n = len(rot)
    if color is None:
        color = [0] * n
    if backend == "numba":
        if njit is None:
            raise RuntimeError("numba backend requested but numba is unavailable")
        code, flag = _canonical_nb(
            np.asarray(rot, dtype=np.int32),
            np.asarray(alpha, dtype=np.int32),
            np.asarray(color, dtype=np.int32),
            bool(allow_mirror),
        )
        if flag < 0:
            raise ValueError("map is not connected")
        return tuple(code.tolist()), bool(flag)
    code, flag = _canonical_py(list(rot), list(alpha), list(color), allow_mirror)
    if code is None:
        raise ValueError("map is not connected")
    return tuple(code), bool(flag)


def bfs_labels(rot, alpha, root, mirror=False, backend=None):
    """BFS numbering of darts from ``root`` (the labelling behind a code)."""
    backend = backend or BACKEND
    if backend == "numba":
        return _bfs_labels_nb(
            np.asarray(rot, dtype=np.int32), np.asarray(alpha, dtype=np.int32), root, mirror
        ).tolist()
    return _bfs_labels_py(list(rot), list(alpha), root, mirror)
