from __future__ import annotations

import os
import random
import subprocess
import sys

import pytest

from oracles import random_connected_map
from triplecross import _kernels


@pytest.mark.skipif(_kernels.njit is None, reason="numba disabled")
def test_backends_agree():
    rng = random.Random(11)
    for _ in range(200):
        m = random_connected_map(rng.randint(1, 10), rng)
        color = [rng.randint(0, 2) for _ in range(m.n_darts)]
        for mirror in (False, True):
            a = _kernels.canonical_code(m.rot, m.alpha, color, mirror, backend="numba")
            b = _kernels.canonical_code(m.rot, m.alpha, color, mirror, backend="python")
            assert a == b
        root = rng.randrange(m.n_darts)
        assert _kernels.bfs_labels(m.rot, m.alpha, root, True, "numba") == _kernels.bfs_labels(m.rot, m.alpha, root, True, "python")


def test_disconnected_map_rejected():
    rot, alpha = (0, 1, 2, 3), (1, 0, 3, 2)
    for backend in (["python", "numba"] if _kernels.njit is not None else ["python"]):
        with pytest.raises(ValueError):
            _kernels.canonical_code(rot, alpha, backend=backend)


def test_environment_switch_selects_python():
    env = dict(os.environ, TRIPLECROSS_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from triplecross import _kernels; print(_kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
