"""Command-line front end: catalogs, classification, polynomials and checks."""

from __future__ import annotations

import argparse
import concurrent.futures as cf
import csv
import io
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import generate as G
from . import maps as Mp
from .codes import CodeError, parse_spd, renumber
from .diagrams import (
    PatternError,
    apply_m2,
    clasp_convert,
    clasp_sites,
    detect_m1,
    diagram_from_code,
    expand,
    name_crossings,
    reduce_t1,
    t1_applicable,
)
from .identify import (
    ClassificationResult,
    ReferenceTable,
    check_c2_3c3,
    classify,
    default_reference_path,
    identify_diagram,
    identify_projection,
    load_reference,
)
from .kauffman import DEFAULT_CAP, CrossingCapExceeded, DecoratedPd, kauffman_f, parse_decorated_pd, unoriented_key

log = logging.getLogger("triplecross")

CACHE_ENV = "TRIPLECROSS_CACHE"
KIND_NAMES = {"shadows": "Sh", "ta": "Ta", "tb": "Tb", "th": "Th", "th0": "Th0", "gr": "Gr", "td": "TD"}
# largest index reproduced by default; bigger runs need --stretch
DESK_LIMIT = {"Sh": 8, "Ta": 4, "Tb": 4, "Th": 4, "Th0": 4, "Gr": 4, "TD": 4}
TABLE1 = {
    "Sh": {4: 2, 6: 9, 8: 62, 10: 803},
    "Ta": {2: 14, 3: 108, 4: 1312, 5: 29198},
    "Tb": {2: 4, 3: 18, 4: 222},
    "Gr": {2: 2, 3: 4, 4: 20},
    "Th0": {2: 1, 3: 1, 4: 5, 5: 12},
    "Th": {2: 3, 3: 9, 4: 57},
    "TD": {2: 108, 3: 1944, 4: 73872},
}


@dataclass
class RunConfig:
    cache_dir: Path
    reference_path: Path | None
    threads: int
    cap_crossings: int | None
    cap_items: int | None
    fmt: str
    stretch: bool = False

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError("--threads must be at least 1")
        for cap in (self.cap_crossings, self.cap_items):
            if cap is not None and cap <= 0:
                raise ValueError("caps must be positive")


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "triplecross"


# ---------------------------------------------------------------------------
# catalogs with caching
# ---------------------------------------------------------------------------


class CatalogStore:
    """Builds catalogs on demand, reusing anything found in the cache."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self._mem: dict[tuple[str, int], G.Catalog] = {}
        self._maps = None

    def get(self, kind: str, n: int) -> G.Catalog:
        key = (kind, n)
        if key in self._mem:
            return self._mem[key]
        cat = G.load_catalog(self.cfg.cache_dir, kind, n)
        if cat is None:
            cat = self._build(kind, n)
            G.save_catalog(cat, self.cfg.cache_dir)
            log.info("wrote %s", G.catalog_path(self.cfg.cache_dir, kind, n))
        self._mem[key] = cat
        return cat

    def _build(self, kind: str, n: int) -> G.Catalog:
        cap = self.cfg.cap_items
        if kind == "Sh":
            if self._maps is None or n not in self._maps:
                self._maps = G.nonseparable_maps(n, cap)
            return G.gen_shadows(n, cap, self._maps)
        if kind == "Ta":
            return G.gen_Ta(n, cap, self.get("Sh", 2 * n))
        if kind == "Tb":
            return G.gen_Tb(n, cap, self.get("Ta", n))
        if kind in ("Th", "Th0"):
            th, th0 = G.gen_Th(n, cap, self.get("Tb", n) if n > 1 else None)
            other = th0 if kind == "Th" else th
            if G.load_catalog(self.cfg.cache_dir, other.kind, n) is None:
                G.save_catalog(other, self.cfg.cache_dir)
            self._mem[(other.kind, n)] = other
            return th if kind == "Th" else th0
        if kind == "Gr":
            return G.gen_Gr(n, cap, self.get("Th", n))
        if kind == "TD":
            return G.gen_TD(n, cap, self.get("Th", n))
        raise ValueError(f"unknown catalog kind {kind!r}")


def _check_scale(kind: str, n: int, stretch: bool) -> None:
    if n > DESK_LIMIT[kind] and not stretch:
        raise SystemExit(f"error: {kind} with n = {n} is a stretch run; pass --stretch to allow it")


# ---------------------------------------------------------------------------
# worker plumbing for classification
# ---------------------------------------------------------------------------

_WORKER_REF: ReferenceTable | None = None
_WORKER_CAP: int | None = None


def _worker_init(ref: ReferenceTable, cap: int | None) -> None:
    global _WORKER_REF, _WORKER_CAP
    _WORKER_REF, _WORKER_CAP = ref, cap


def _worker_identify(code_text: str):
    return identify_projection(_WORKER_REF, parse_spd(code_text), cap=_WORKER_CAP)


def run_classification(cfg: RunConfig, ref: ReferenceTable, n_max: int, store: CatalogStore) -> ClassificationResult:
    projections = {n: store.get("Th", n).items for n in range(1, n_max + 1)}
    if cfg.threads == 1:
        return classify(ref, n_max, projections, cap=cfg.cap_crossings)
    with cf.ProcessPoolExecutor(cfg.threads, initializer=_worker_init, initargs=(ref, cfg.cap_crossings)) as pool:
        def mapper(_fn, items):
            # workers hold their own copy of the reference, so only codes travel
            return pool.map(_worker_identify, [str(c) for c in items], chunksize=4)

        return classify(ref, n_max, projections, cap=cfg.cap_crossings, mapper=mapper)


def classification_csv(res: ClassificationResult) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, ["name", "c3", "witness_spd", "ambiguous"], lineterminator="\n")
    w.writeheader()
    for row in res.rows():
        w.writerow(row)
    return buf.getvalue()


def classification_json(res: ClassificationResult, n_max: int, ref: ReferenceTable) -> str:
    obj = {
        "n_max": n_max,
        "reference": Path(ref.path).name,
        "reference_collisions": ref.collisions,
        "per_n": res.summary(),
        "tie_breaks": res.tie_breaks,
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------


def _read_diagram(text: str) -> DecoratedPd:
    """A named sPD code (expanded) or a classical PD code."""
    text = text.strip()
    if text.startswith("sPD"):
        return expand(diagram_from_code(parse_spd(text)))
    return parse_decorated_pd(text)


def _emit(rows: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "csv":
        if not rows:
            return
        w = csv.DictWriter(out, list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        out.write(json.dumps(rows, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_generate(args, cfg: RunConfig) -> int:
    kind = KIND_NAMES[args.kind]
    _check_scale(kind, args.n, cfg.stretch)
    store = CatalogStore(cfg)
    t0 = time.perf_counter()
    cat = store.get(kind, args.n)
    path = G.catalog_path(cfg.cache_dir, kind, args.n)
    log.info("%s_%d: %d items in %.1fs", kind, args.n, len(cat), time.perf_counter() - t0)
    if args.format is None:
        print(len(cat))
    else:
        _emit([{"kind": kind, "n": args.n, "count": len(cat), "path": str(path)}], args.format)
    return 0


def _load_ref(cfg: RunConfig) -> ReferenceTable:
    path = cfg.reference_path or default_reference_path()
    if not Path(path).is_file():
        raise FileNotFoundError(f"reference file {path} not found")
    ref = load_reference(path, cap=cfg.cap_crossings)
    if ref.collisions:
        log.warning("%d groups of reference names share a polynomial (listed in the JSON summary)", len(ref.collisions))
    for group in ref.collisions:
        log.info("shared polynomial: %s", ", ".join(group))
    return ref


def cmd_classify(args, cfg: RunConfig) -> int:
    if args.n_max < 1:
        raise SystemExit("error: n_max must be at least 1")
    _check_scale("Th", args.n_max, cfg.stretch)
    ref = _load_ref(cfg)
    store = CatalogStore(cfg)
    res = run_classification(cfg, ref, args.n_max, store)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_text = classification_csv(res)
    json_text = classification_json(res, args.n_max, ref)
    (out / f"classification_{args.n_max}.csv").write_text(csv_text)
    (out / f"classification_{args.n_max}.json").write_text(json_text)
    if args.format == "csv":
        sys.stdout.write(csv_text)
    elif args.format == "json":
        sys.stdout.write(json_text)
    else:
        for n, info in res.summary().items():
            print(f"c3={n}: K ({info['K']}) {','.join(info['knots'])}")
            print(f"c3={n}: L ({info['L']}) {','.join(info['links'])}")
            if info["unmatched"]:
                print(f"c3={n}: {info['unmatched']} diagrams outside the reference")
    return 0


def cmd_poly(args, cfg: RunConfig) -> int:
    pd = _read_diagram(args.code)
    poly = unoriented_key(pd, cap=cfg.cap_crossings) if args.unoriented else kauffman_f(pd, cap=cfg.cap_crossings)
    if args.format is None:
        print(poly)
    else:
        _emit([{"code": args.code, "crossings": len(pd), "poly": str(poly)}], args.format)
    return 0


def cmd_dual(args, cfg: RunConfig) -> int:
    code = parse_spd(args.code)
    m = Mp.map_from_code(code)
    d = Mp.dual(m)
    row = {
        "vertices": len(d.vertices()),
        "edges": d.e,
        "faces": len(d.faces()),
        "vertex_degrees": sorted(d.degrees()),
        "face_degrees": sorted(d.face_degrees()),
        "sigma": Mp.format_cycles(d.sigma),
        "tau": Mp.format_cycles(d.tau),
    }
    _emit([row], args.format or "json")
    return 0


def cmd_moves(args, cfg: RunConfig) -> int:
    """Every local move available on a named code, with a polynomial check."""
    code = parse_spd(args.code)
    d = diagram_from_code(code)
    pd = expand(d)
    base = unoriented_key(pd, cap=cfg.cap_crossings)
    rows = []
    for i in detect_m1(d.projection):
        rows.append({"move": "M1", "site": f"{i + 1}", "result": "", "poly_equal": ""})
    for i, slot in d.projection.loops():
        after = apply_m2(d, (i, slot))
        same = unoriented_key(expand(after), cap=cfg.cap_crossings) == base
        rows.append({"move": "M2", "site": f"{i + 1}:{slot}", "result": str(name_crossings(after)), "poly_equal": same})
        if t1_applicable(d, (i, slot)):
            red = reduce_t1(d, (i, slot))
            same = unoriented_key(expand(red), cap=cfg.cap_crossings) == base
            text = str(name_crossings(red)) if red.n else "sPD[]"
            if red.free_circles:
                text += f" + {red.free_circles} circle(s)"
            rows.append({"move": "T1", "site": f"{i + 1}:{slot}", "result": text, "poly_equal": same})
    for site in clasp_sites(pd):
        conv = clasp_convert(pd, site)
        same = unoriented_key(conv.pd, cap=cfg.cap_crossings) == base
        rows.append({"move": "clasp", "site": f"{site[0] + 1},{site[1] + 1}", "result": str(conv.pd), "poly_equal": same})
    _emit(rows, args.format or "json")
    return 0 if all(r["poly_equal"] in (True, "") for r in rows) else 1


@dataclass
class Check:
    label: str
    status: str  # PASS, FAIL, ERRATUM or SKIP
    detail: str = ""

    def line(self) -> str:
        return f"{self.status:7s} {self.label}" + (f"  ({self.detail})" if self.detail else "")


# A published code whose own naming convention gives a different link;
# documented in the decisions ledger and the README.
KNOWN_ERRATA = {
    "2^2_1": "the lone strand sits at written position 2, which the B,M,T "
             "convention makes the top strand, so the code describes a split link",
}


def verify_tables(cfg: RunConfig, n_max: int, store: CatalogStore | None = None) -> list[Check]:
    store = store or CatalogStore(cfg)
    checks: list[Check] = []
    for kind, table in TABLE1.items():
        for n, want in table.items():
            tn = n // 2 if kind == "Sh" else n
            if tn > n_max or n > (DESK_LIMIT[kind] if not cfg.stretch else 99):
                continue
            got = len(store.get(kind, n))
            checks.append(Check(f"Table 1 {kind}_{n} = {want}", "PASS" if got == want else "FAIL", f"got {got}"))

    ref = _load_ref(cfg)
    from importlib import resources

    with resources.files("triplecross").joinpath("data/minimal_diagrams.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    in_ref = {e.name for e in ref.entries}
    for row in rows:
        code = parse_spd(row["spd"])
        fixed = renumber(code)
        same = Mp.isomorphic(Mp.map_from_code(code), Mp.map_from_code(fixed))
        if row["name"] not in in_ref:
            status = "SKIP" if same else "FAIL"
            checks.append(Check(f"table code {row['name']}", status,
                                "renumbers isomorphically; name not in the reference" if same else "renumbering changed the map"))
            continue
        names = identify_diagram(ref, diagram_from_code(code), cfg.cap_crossings).names
        ok = same and row["name"] in names
        status = "PASS" if ok else ("ERRATUM" if row["name"] in KNOWN_ERRATA else "FAIL")
        detail = "" if ok else KNOWN_ERRATA.get(row["name"], f"identified as {','.join(names) or 'nothing'}")
        checks.append(Check(f"table code {row['name']}", status, detail))

    res = run_classification(cfg, ref, min(n_max, 4), store)
    expected = {
        1: ([], ["2^2_1"]),
        2: (["3_1", "4_1"], ["4^2_1", "6^3_3"]),
        3: (["5_2", "6_1"], ["5^2_1", "6^2_1", "6^2_3", "6^3_1", "7^2_7", "7^2_8",
                             "8^2_15", "8^2_16", "8^3_7", "8^3_8", "9^2_49"]),
    }
    for n, (k, l) in expected.items():
        if n > n_max:
            continue
        for label, want, got in (("K", k, res.knots(n)), ("L", l, res.links(n))):
            checks.append(Check(f"{label}_{n} = {{{', '.join(want)}}}", "PASS" if sorted(want) == sorted(got) else "FAIL",
                                "" if sorted(want) == sorted(got) else f"got {got}"))
    if n_max >= 4:
        want = sorted(TABLE3_C3_4)
        want_here = [x for x in want if x in in_ref]
        got = sorted(res.knots(4))
        checks.append(Check(f"K_4 = Table 3 row within the reference ({len(want_here)} names)",
                            "PASS" if sorted(want_here) == got else "FAIL", "" if sorted(want_here) == got else f"got {got}"))

    for n in (4, 5):
        if n > n_max and not (n == 5 and cfg.stretch):
            continue
        rep = check_c2_3c3(n, store.get("Th0", n).items)
        ok = rep["single_component"] == 0 if n == 5 else rep["single_component"] >= 1
        checks.append(Check(f"Th0_{n} single-component projections {'= 0' if n == 5 else '>= 1'}",
                            "PASS" if ok else "FAIL", f"{rep['single_component']} of {rep['projections']}"))
    return checks


TABLE3_C3_4 = (
    "5_1", "6_2", "6_3", "7_2", "7_4", "7_6", "7_7", "8_1", "8_3", "8_12", "8_20", "8_21",
    "9_42", "9_44", "9_45", "9_46", "9_48", "10_132", "10_136", "10_137", "10_140",
    "K11n38", "K11n139", "K12n462",
)


def cmd_verify_tables(args, cfg: RunConfig) -> int:
    _check_scale("Th", args.n_max, cfg.stretch)
    checks = verify_tables(cfg, args.n_max)
    if args.format in ("json", "csv"):
        _emit([{"check": c.label, "status": c.status, "detail": c.detail} for c in checks], args.format)
    else:
        for c in checks:
            print(c.line())
        counts = {s: sum(1 for c in checks if c.status == s) for s in ("PASS", "FAIL", "ERRATUM", "SKIP")}
        print(f"{counts['PASS']} passed, {counts['FAIL']} failed, {counts['ERRATUM']} published errata, "
              f"{counts['SKIP']} skipped (not in the reference)")
    return 1 if any(c.status == "FAIL" for c in checks) else 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", type=Path, default=None,
                        help=f"catalog cache directory (default: ${CACHE_ENV} or ~/.cache/triplecross)")
    common.add_argument("--ref", type=Path, default=None, help="reference CSV (name,components,pd)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker processes for classification")
    common.add_argument("--cap-crossings", type=int, default=DEFAULT_CAP,
                        help="refuse polynomial evaluations above this many classical crossings")
    common.add_argument("--cap-items", type=int, default=None, help="refuse catalogs larger than this")
    common.add_argument("--format", choices=("json", "csv"), default=None, help="machine-readable output")
    common.add_argument("--stretch", action="store_true", help="allow runs beyond the n = 4 desk scale")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="triplecross", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="build a catalog and print its size")
    g.add_argument("kind", choices=sorted(KIND_NAMES))
    g.add_argument("n", type=int, help="classical crossings for shadows, triple crossings otherwise")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("classify", parents=[common], help="triple-crossing numbers up to n_max")
    c.add_argument("n_max", type=int)
    c.add_argument("--out", default=".", help="directory for classification_<n>.csv/json")
    c.set_defaults(func=cmd_classify)

    q = sub.add_parser("poly", parents=[common], help="Kauffman polynomial of an sPD or PD code")
    q.add_argument("code")
    q.add_argument("--unoriented", action="store_true", help="print a^-(self-writhe) Lambda instead of F")
    q.set_defaults(func=cmd_poly)

    d = sub.add_parser("dual", parents=[common], help="dual map of an sPD projection")
    d.add_argument("code")
    d.set_defaults(func=cmd_dual)

    m = sub.add_parser("moves", parents=[common], help="local moves on a named sPD code")
    m.add_argument("code")
    m.set_defaults(func=cmd_moves)

    v = sub.add_parser("verify-tables", parents=[common], help="re-run the published table checks")
    v.add_argument("n_max", type=int)
    v.set_defaults(func=cmd_verify_tables)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        cfg = RunConfig(
            cache_dir=args.cache or default_cache_dir(),
            reference_path=args.ref,
            threads=args.threads,
            cap_crossings=args.cap_crossings,
            cap_items=args.cap_items,
            fmt=args.format or "",
            stretch=args.stretch,
        )
        return args.func(args, cfg)
    except (CodeError, PatternError, CrossingCapExceeded, G.ResourceLimit, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
