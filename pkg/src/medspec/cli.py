"""Command-line interface: ``medspec {generate,spectrum,check,certify,plot,search}``.

Exit codes: 0 all checks pass, 1 violation or certification failure,
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from . import bounds, certification, generators
from .errors import CertificationError, MedspecError
from .exact import ORACLE_MAX_N, eigenvalues_oracle
from .graph import Graph, from_graph6, to_graph6
from .polynomials import build_magic
from .rng import SplitMix64
from .spectral import eigenvalues, median_eigenvalues, moment_report, summarize

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
SEED_ENV = "MEDSPEC_SEED"


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    fmt: str = "json"
    seed: int = 0
    d: int | None = None
    trials: int = 0
    tolerance: float | None = None
    jobs: int = 1

    @property
    def tol(self) -> float:
        return self.tolerance if self.tolerance is not None else bounds.SLACK_TOL


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw, 0) if raw else 0


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


# -- graph6 input ---------------------------------------------------------------


def _read_lines(paths: list[str]) -> Iterator[bytes]:
    if not paths:
        paths = ["-"]
    for p in paths:
        stream = sys.stdin.buffer if p == "-" else open(p, "rb")
        try:
            for line in stream:
                line = line.strip()
                if line:
                    yield line
        finally:
            if stream is not sys.stdin.buffer:
                stream.close()


def _parse(lines: Iterable[bytes]) -> Iterator[tuple[int, bytes, Graph | str]]:
    for i, line in enumerate(lines):
        try:
            yield i, line, from_graph6(line)
        except MedspecError as exc:
            yield i, line, f"{type(exc).__name__}: {exc}"


def _pool_map(fn, items, jobs: int):
    """Ordered map, optionally across worker processes."""
    if jobs <= 1:
        yield from map(fn, items)
        return
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        yield from ex.map(fn, items, chunksize=8)


class _Emitter:
    def __init__(self, fmt: str, out, extra: dict | None = None) -> None:
        self.fmt = fmt
        self.out = out
        self.extra = extra or {}
        self.writer = None

    def emit(self, rec: dict) -> None:
        rec = {**rec, **self.extra}
        if self.fmt == "json":
            self.out.write(json.dumps(rec) + "\n")
        elif self.fmt == "csv":
            flat = {k: (json.dumps(v) if isinstance(v, (list, dict)) else v)
                    for k, v in rec.items()}
            if self.writer is None:
                self.writer = csv.DictWriter(self.out, fieldnames=list(flat),
                                             extrasaction="ignore", lineterminator="\n")
                self.writer.writeheader()
            self.writer.writerow(flat)
        else:
            self.out.write("  ".join(f"{k}={_fmt_text(v)}" for k, v in rec.items()) + "\n")


def _emitter(cfg: RunConfig) -> _Emitter:
    # a tolerance override travels with every report it influenced
    extra = {"tolerance": cfg.tolerance} if cfg.tolerance is not None else None
    return _Emitter(cfg.fmt, sys.stdout, extra)


def _fmt_text(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


# -- generate -------------------------------------------------------------------


def _generate(args) -> list[Graph]:
    fam = args.family
    if fam == "plane":
        return [generators.projective_plane_incidence(args.q)]
    if fam == "heawood":
        return [generators.heawood()]
    if fam == "circulant":
        s = set(_int_list(args.set))
        s |= {(-x) % args.n for x in s}  # listing one of +-s is enough
        return [generators.circulant(args.n, s)]
    if fam in ("random", "bipartite"):
        rng = SplitMix64(args.seed)
        out = []
        for _ in range(args.count):
            seed = rng.next_u64()
            if fam == "random":
                out.append(generators.random_bounded_degree(args.n, args.d, seed, args.max_edges))
            else:
                out.append(generators.random_bipartite(args.a, args.b, args.d, seed,
                                                       args.max_edges))
        return out
    params = {
        "cycle": (args.n,), "path": (args.n,), "complete": (args.n,), "empty": (args.n,),
        "matching": (args.k,), "complete_bipartite": (args.a, args.b),
        "triangle_union": (args.a, args.b),
    }[fam]
    return [generators.elementary(fam, *params)]


def cmd_generate(args) -> int:
    graphs = _generate(args)
    data = b"".join(to_graph6(g) + b"\n" for g in graphs)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("ascii"))
    return EXIT_OK


# -- spectrum -------------------------------------------------------------------


def _spectrum_record(item) -> dict:
    i, line, g, with_values = item
    if isinstance(g, str):
        return {"index": i, "graph6": line.decode("ascii", "replace"), "error": g}
    s = eigenvalues(g)
    summ = summarize(g, s)
    rec = {
        "index": i,
        "graph6": line.decode("ascii"),
        "n": g.n,
        "max_degree": g.max_degree,
        "h": summ.h,
        "l": summ.l,
        "lambda_h": summ.lambda_h,
        "lambda_l": summ.lambda_l,
        "avg_energy": summ.avg_energy,
        "p1": summ.power_sums[0],
        "p2": summ.power_sums[1],
        "p3": summ.power_sums[2],
        "p4": summ.power_sums[3],
        "triangles": summ.triangle_count,
    }
    try:
        mr = moment_report(g, s)
        rec["moments_ok"] = True
        rec["p4_slack"] = mr.p4_slack
    except AssertionError as exc:
        rec["moments_ok"] = False
        rec["moment_error"] = str(exc)
    if with_values:
        rec["eigenvalues"] = [float(v) for v in s.values]
    return rec


def cmd_spectrum(args, cfg: RunConfig) -> int:
    em = _emitter(cfg)
    items = ((i, line, g, args.eigenvalues) for i, line, g in _parse(_read_lines(cfg.inputs)))
    status = EXIT_OK
    for rec in _pool_map(_spectrum_record, items, cfg.jobs):
        if rec.get("moments_ok") is False:
            status = EXIT_VIOLATION
        em.emit(rec)
    return status


# -- check ----------------------------------------------------------------------


def _check_records(item) -> list[dict]:
    i, line, g, d, tol = item
    if isinstance(g, str):
        return [{"index": i, "graph6": line.decode("ascii", "replace"), "error": g}]
    reports = bounds.check_all(g, d, tol=tol)
    base = {"index": i, "graph6": line.decode("ascii"), "d": d, "max_degree": g.max_degree}
    return [{**base, **r.to_json()} for r in reports]


def cmd_check(args, cfg: RunConfig) -> int:
    em = _emitter(cfg)
    items = ((i, line, g, cfg.d, cfg.tol) for i, line, g in _parse(_read_lines(cfg.inputs)))
    min_slack: dict[str, float] = {}
    nviol = ngraphs = nerr = 0
    for recs in _pool_map(_check_records, items, cfg.jobs):
        for rec in recs:
            if "error" in rec:
                nerr += 1
            else:
                if not rec["satisfied"]:
                    nviol += 1
                if rec["applicable"]:
                    tid = rec["theorem_id"]
                    min_slack[tid] = min(min_slack.get(tid, math.inf), rec["slack"])
            em.emit(rec)
        ngraphs += 1
    summary = {"graphs": ngraphs, "parse_errors": nerr, "violations": nviol,
               "tolerance": cfg.tol, "min_slack": min_slack}
    sys.stderr.write(json.dumps({"summary": summary}) + "\n")
    if nviol:
        sys.stderr.write(f"VIOLATION: {nviol} report(s) failed; this indicates a bug or a "
                         "remarkable graph\n")
        return EXIT_VIOLATION
    return EXIT_OK


# -- certify --------------------------------------------------------------------


def cmd_certify(args, cfg: RunConfig) -> int:
    lo, hi = args.d_from, args.d_to
    if lo < certification.MIN_D or hi < lo:
        sys.stderr.write(f"need {certification.MIN_D} <= --from <= --to\n")
        return EXIT_USAGE
    status = EXIT_OK
    em = _emitter(cfg)
    for d in range(lo, hi + 1):
        rec = certification.objective_closed_form(d)
        row = rec.to_json()
        if not rec.certified:
            status = EXIT_VIOLATION
        if args.chain and d >= certification.REGIME2_D:
            try:
                a = certification.certify_asymptotic(d)
                ok = True
            except CertificationError:
                a, ok = None, False
                status = EXIT_VIOLATION
            if a is not None:
                row.update(factor1=a.factors[0], factor2=a.factors[1], factor3=a.factors[2],
                           chain_product=a.product)
            row["chain_ok"] = ok
        if args.oracle:
            res = certification.grid_oracle(d, rec.delta, args.resolution)
            row["oracle_max"] = res.max_value
            row["oracle_ok"] = res.below_one and res.max_value <= rec.objective + 10 / args.resolution
            if not row["oracle_ok"]:
                status = EXIT_VIOLATION
        em.emit(row)
    return status


# -- plot -----------------------------------------------------------------------


def plot_rows(d: int, samples: int) -> list[tuple[float, float, str]]:
    """Samples of the magic polynomial on [-d, alpha], special points marked."""
    p = build_magic(d)
    marks = {-float(d): "root:-d", -p.eps0: "root:-eps0", p.eps0: "level:f(d)",
             float(d): "level:f(d)", p.alpha: "root:alpha"}
    xs = {float(x): "" for x in np.linspace(-d, p.alpha, samples)}
    xs[-float(d)] = xs[p.alpha] = ""
    if samples > 2:
        xs.update(dict.fromkeys(marks, ""))
    rows = []
    for x in sorted(xs):
        mark = next((m for mx, m in marks.items() if abs(mx - x) <= 1e-12 * max(1, abs(x))), "")
        rows.append((x, float(p(x)), mark))
    return rows


def cmd_plot(args, cfg: RunConfig) -> int:
    if args.d < 3:
        sys.stderr.write("plot needs d >= 3\n")
        return EXIT_USAGE
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", "f", "mark"])
    for x, fx, mark in plot_rows(args.d, args.samples):
        w.writerow([repr(x), repr(fx), mark])
    sys.stdout.write(out.getvalue())
    return EXIT_OK


# -- search ---------------------------------------------------------------------


@dataclass
class SearchRecord:
    graph6: str
    n: int
    d: int
    lambda_h: float
    lambda_l: float
    slack_upper: float
    slack_lower: float
    timestamp: float = 0.0

    @classmethod
    def from_graph(cls, g: Graph, d: int, timestamp: float = 0.0) -> "SearchRecord":
        lh, ll = median_eigenvalues(eigenvalues(g))
        e0 = math.sqrt(d - 1)
        return cls(to_graph6(g).decode("ascii"), g.n, d, lh, ll, e0 - lh, ll + e0, timestamp)

    def key(self):
        return (self.slack_lower, self.graph6)


def load_leaderboard(path: Path) -> list[SearchRecord]:
    if not path.exists():
        return []
    out = []
    for line in path.read_text().splitlines():
        if line.strip():
            out.append(SearchRecord(**json.loads(line)))
    return out


def update_leaderboard(path: Path, new: list[SearchRecord], top: int) -> list[SearchRecord]:
    """Append, then compact to the ``top`` records with smallest lower slack."""
    with open(path, "a") as fh:
        for r in new:
            fh.write(json.dumps(asdict(r)) + "\n")
    best: dict[tuple[str, int], SearchRecord] = {}
    for r in load_leaderboard(path):
        k = (r.graph6, r.d)
        if k not in best or r.key() < best[k].key():
            best[k] = r
    kept = sorted(best.values(), key=SearchRecord.key)[:top]
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text("".join(json.dumps(asdict(r)) + "\n" for r in kept))
    os.replace(tmp, path)
    return kept


def _search_graphs(args, cfg: RunConfig) -> Iterator[Graph]:
    rng = SplitMix64(cfg.seed)
    span = args.n_max - args.n_min + 1
    for _ in range(cfg.trials):
        n = args.n_min + rng.below(span)
        yield generators.random_bounded_degree(n, cfg.d, rng.next_u64())
    if args.input:
        for _, _, g in _parse(_read_lines(args.input)):
            if isinstance(g, Graph) and g.max_degree <= cfg.d:
                yield g


def _search_record(item) -> SearchRecord:
    g, d = item
    return SearchRecord.from_graph(g, d)


def cmd_search(args, cfg: RunConfig) -> int:
    d = cfg.d
    records = list(_pool_map(_search_record, ((g, d) for g in _search_graphs(args, cfg)),
                             cfg.jobs))
    records.sort(key=SearchRecord.key)
    seen: set[str] = set()
    top = []
    for r in records:
        if r.graph6 not in seen and len(top) < args.top:
            seen.add(r.graph6)
            top.append(r)
    status = EXIT_OK
    claims = []
    for r in records:
        if r.slack_lower >= -10 * cfg.tol and r.slack_upper >= -10 * cfg.tol:
            break
        g = from_graph6(r.graph6)
        if g.n <= ORACLE_MAX_N:
            lh, ll = median_eigenvalues(eigenvalues_oracle(g))
            e0 = math.sqrt(d - 1)
            verified = ll + e0 < -10 * cfg.tol or e0 - lh < -10 * cfg.tol
            claims.append({"graph6": r.graph6, "verified": verified})
            if verified:
                status = EXIT_VIOLATION
        else:
            claims.append({"graph6": r.graph6, "verified": None})
    if args.leaderboard:
        now = time.time()
        for r in top:
            r.timestamp = now
        update_leaderboard(Path(args.leaderboard), top, args.top)
    em = _emitter(cfg)
    for r in top:
        rec = asdict(r)
        rec.pop("timestamp")
        em.emit(rec)
    summary = {
        "d": d,
        "graphs": len(records),
        "min_slack_lower": min((r.slack_lower for r in records), default=None),
        "min_slack_upper": min((r.slack_upper for r in records), default=None),
        "max_abs_median": max((max(abs(r.lambda_h), abs(r.lambda_l)) for r in records),
                              default=None),
        "counterexample_claims": claims,
    }
    sys.stderr.write(json.dumps({"summary": summary}) + "\n")
    return status


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="medspec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, fmt=True):
        if fmt:
            sp.add_argument("--format", dest="fmt", choices=["json", "csv", "text"],
                            default="json")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes")
        sp.add_argument("--tolerance", type=_positive_float, default=None,
                        help=f"slack tolerance (default {bounds.SLACK_TOL})")

    g = sub.add_parser("generate", help="write graph6 lines for a graph family")
    g.add_argument("family", choices=["plane", "heawood", "circulant", "random", "bipartite",
                                      "cycle", "path", "complete", "empty", "matching",
                                      "complete_bipartite", "triangle_union"])
    g.add_argument("--q", type=int, default=2)
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--d", type=int, default=3)
    g.add_argument("--a", type=int, default=1)
    g.add_argument("--b", type=int, default=1)
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--set", default="1")
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--max-edges", type=int, default=None)
    g.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    g.add_argument("--out", default=None)

    s = sub.add_parser("spectrum", help="median eigenvalues, energy and moments per graph")
    s.add_argument("inputs", nargs="*")
    s.add_argument("--eigenvalues", action="store_true", help="include the full spectrum")
    common(s)

    c = sub.add_parser("check", help="run every applicable theorem check")
    c.add_argument("inputs", nargs="*")
    c.add_argument("--d", type=int, required=True)
    common(c)

    ce = sub.add_parser("certify", help="closed-form certification for a range of d")
    ce.add_argument("--from", dest="d_from", type=int, default=75)
    ce.add_argument("--to", dest="d_to", type=int, default=139)
    ce.add_argument("--chain", action="store_true", help="three-factor chain for d >= 140")
    ce.add_argument("--oracle", action="store_true", help="also run the grid oracle")
    ce.add_argument("--resolution", type=int, default=certification.DEFAULT_RESOLUTION)
    ce.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default="csv")

    pl = sub.add_parser("plot", help="CSV samples of the magic polynomial")
    pl.add_argument("--d", type=int, default=3)
    pl.add_argument("--samples", type=int, default=500)

    se = sub.add_parser("search", help="random search for small median slack")
    se.add_argument("--d", type=int, required=True)
    se.add_argument("--trials", type=int, default=1000)
    se.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    se.add_argument("--n-min", type=int, default=5)
    se.add_argument("--n-max", type=int, default=30)
    se.add_argument("--input", action="append", default=[], help="extra graph6 corpus")
    se.add_argument("--leaderboard", default=None, help="persisted JSON-lines leaderboard")
    se.add_argument("--top", type=int, default=20)
    common(se)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = _default_seed()
        if hasattr(args, "seed"):
            args.seed = seed
    cfg = RunConfig(
        subcommand=args.subcommand,
        inputs=getattr(args, "inputs", []),
        fmt=getattr(args, "fmt", "json"),
        seed=seed,
        d=getattr(args, "d", None),
        trials=getattr(args, "trials", 0),
        tolerance=getattr(args, "tolerance", None),
        jobs=getattr(args, "jobs", 1),
    )
    try:
        if args.subcommand == "generate":
            return cmd_generate(args)
        handler = {"spectrum": cmd_spectrum, "check": cmd_check, "certify": cmd_certify,
                   "plot": cmd_plot, "search": cmd_search}[args.subcommand]
        return handler(args, cfg)
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_USAGE
    except MedspecError as exc:
        if isinstance(exc, CertificationError):
            sys.stderr.write(f"certification failure: {exc}\n")
            return EXIT_VIOLATION
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
