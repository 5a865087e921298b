from __future__ import annotations

import csv
import os
import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from triplecross import generate as G  # noqa: E402
from triplecross.identify import default_reference_path, load_reference  # noqa: E402

STRETCH = os.environ.get("TRIPLECROSS_STRETCH", "") not in ("", "0")


def table_rows() -> list[dict]:
    with resources.files("triplecross").joinpath("data/minimal_diagrams.csv").open() as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="session")
def rows():
    return table_rows()


@pytest.fixture(scope="session")
def code_of(rows):
    return {r["name"]: r["spd"] for r in rows}


@pytest.fixture(scope="session")
def ref():
    return load_reference()


@pytest.fixture(scope="session")
def ref_ext():
    return load_reference(default_reference_path(extended=True))


@pytest.fixture(scope="session")
def by_name(ref_ext):
    return {e.name: e for e in ref_ext.entries}


class Catalogs:
    """Session-wide catalogs built once, each level reusing the previous one."""

    def __init__(self):
        self._c = {}
        self._maps = None

    def get(self, kind: str, n: int) -> G.Catalog:
        key = (kind, n)
        if key not in self._c:
            self._c[key] = self._build(kind, n)
        return self._c[key]

    def _build(self, kind, n):
        if kind == "Sh":
            if self._maps is None or n not in self._maps:
                self._maps = G.nonseparable_maps(max(n, 8))
            return G.gen_shadows(n, None, self._maps)
        if kind == "Ta":
            return G.gen_Ta(n, None, self.get("Sh", 2 * n))
        if kind == "Tb":
            return G.gen_Tb(n, None, self.get("Ta", n))
        if kind in ("Th", "Th0"):
            th, th0 = G.gen_Th(n, None, self.get("Tb", n) if n > 1 else None)
            self._c[("Th", n)], self._c[("Th0", n)] = th, th0
            return th if kind == "Th" else th0
        if kind == "Gr":
            return G.gen_Gr(n, None, self.get("Th", n))
        if kind == "TD":
            return G.gen_TD(n, None, self.get("Th", n))
        raise KeyError(kind)


@pytest.fixture(scope="session")
def catalogs():
    return Catalogs()


# One verdict per acceptance criterion, filled in by test_acceptance.py and
# printed at the end of the run.
ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def record(number: int, title: str, status: str, detail: str = "") -> None:
    ACCEPTANCE[number] = (title, status, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, status, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] {number}. {title}" + (f": {detail}" if detail else ""))
