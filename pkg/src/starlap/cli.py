"""Command-line front end with subcommands spectrum, recover, verify, plotdata and dump-matrix.

Exit codes: 0 pass, 1 verification or root-finding failure, 2 usage error,
3 oracle non-convergence.

JSON floats are written with ``repr`` (shortest round-trip form), CSV files
use a header row, commas and LF line endings. Identical flags produce
byte-identical artifacts.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import __version__
from .errors import OracleNonConvergence, StarlapError
from .graph import EdgeSignature
from .oracle import discretize_B, write_matrix
from .spectrum import (
    RootFindingError,
    SpectralKind,
    bracket,
    eta_mu,
    recover_ratio,
    secular_residual,
    spectrum_A,
    spectrum_B,
)
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3

# recover rejects eta1 within this relative distance of pi^2: such inputs
# cannot be told apart from the pole and give ratios below ~1.6e-6
RECOVER_REL_GUARD = 1e-6

SPECTRUM_COLUMNS = [
    "operator", "value", "multiplicity", "kind", "k",
    "bracket_lo", "bracket_hi", "secular_residual",
]
VERIFY_COLUMNS = ["suite", "cases", "max_residual", "pass"]
PLOT_COLUMNS = ["kind", "mu", "neg_cot", "ratio_coth", "k"]


class UsageError(StarlapError):
    """Flags that parse but violate the run configuration invariants."""


@dataclass
class RunConfig:
    command: str
    n_plus: int = 2
    n_minus: int = 1
    k_max: int = 10
    mesh: int = 2000
    tol: float = 1e-11
    fmt: str = "json"
    output: str | None = None
    seed: int = 0
    operator: str = "B"
    suites: list = field(default_factory=lambda: ["all"])
    eta1: float | None = None
    mu_max: float = 15.0
    samples: int = 1500
    order: str = "second"

    def __post_init__(self):
        if self.n_plus < 1 or self.n_minus < 1:
            raise UsageError("--n-plus and --n-minus must be >= 1")
        if self.k_max < 1:
            raise UsageError("--k-max must be >= 1")
        if self.mesh < 8:
            raise UsageError("--mesh must be >= 8")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.fmt not in ("json", "csv"):
            raise UsageError("--format must be json or csv")
        if not (self.mu_max > 0 and math.isfinite(self.mu_max)):
            raise UsageError("--mu-max must be positive and finite")
        if self.samples < 2:
            raise UsageError("--samples must be >= 2")

    @property
    def signature(self):
        return EdgeSignature(self.n_plus, self.n_minus)

    @property
    def suite_names(self):
        if "all" in self.suites:
            return list(SUITES)
        # keep canonical order, drop repeats
        return [s for s in SUITES if s in self.suites]


def schema(name):
    """Parsed JSON schema shipped with the package: spectrum, verify or plotdata."""
    text = resources.files("starlap").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dump_json(doc) -> str:
    return json.dumps(_plain(doc), indent=2, allow_nan=False) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def dump_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in _plain(rows):
        w.writerow([_cell(r[c]) for c in columns])
    return buf.getvalue()


def _coerce(text, types):
    if text == "":
        if "null" in types:
            return None
        raise ValueError("empty cell in a non-nullable column")
    if "boolean" in types:
        return {"true": True, "false": False}[text]
    if "integer" in types:
        return int(text)
    if "number" in types:
        return float(text)
    return text


def load_csv(text, name):
    """Parse a CSV artifact back into JSON-typed rows using the schema's row types."""
    sch = schema(name)
    props = sch["$defs"]["row"]["properties"]
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for rec in reader:
        row = {}
        for key, val in rec.items():
            t = props[key].get("type", "string")
            row[key] = _coerce(val, t if isinstance(t, list) else [t])
        rows.append(row)
    return rows


def _emit(cfg, text):
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)


# spectrum

def spectrum_rows(cfg: RunConfig):
    sig = cfg.signature
    rows = []
    if cfg.operator in ("A", "both"):
        for p in spectrum_A(sig, cfg.k_max):
            rows.append(_point_row("A", sig, p))
    if cfg.operator in ("B", "both"):
        for p in spectrum_B(sig, cfg.k_max, cfg.tol):
            rows.append(_point_row("B", sig, p))
    return rows


def _point_row(op, sig, p):
    row = {
        "operator": op, "value": p.value, "multiplicity": p.multiplicity,
        "kind": p.kind.value, "k": p.k,
        "bracket_lo": None, "bracket_hi": None, "secular_residual": None,
    }
    if p.kind == SpectralKind.WEYL_ZERO:
        lo, hi = bracket(p.k)
        row.update(bracket_lo=lo, bracket_hi=hi, secular_residual=secular_residual(sig, p.k, p.value))
    return row


def cmd_spectrum(cfg: RunConfig) -> int:
    try:
        rows = spectrum_rows(cfg)
    except RootFindingError as exc:
        print(f"starlap spectrum: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if cfg.fmt == "csv":
        _emit(cfg, dump_csv(SPECTRUM_COLUMNS, rows))
    else:
        _emit(cfg, dump_json({
            "command": "spectrum", "n_plus": cfg.n_plus, "n_minus": cfg.n_minus,
            "k_max": cfg.k_max, "operator": cfg.operator, "points": rows,
        }))
    return EXIT_OK


# recover

def recover_range():
    """Open interval of accepted ``--eta1`` values.

    The first positive Weyl zero solves ``cot(mu) < 0``, so it lies in
    ``(pi^2/4, pi^2)``; below ``pi^2/4`` the formula returns a negative ratio.
    """
    return math.pi**2 / 4, math.pi**2 * (1 - RECOVER_REL_GUARD)


def cmd_recover(cfg: RunConfig) -> int:
    eta1 = cfg.eta1
    lo, hi = recover_range()
    if eta1 is None or not math.isfinite(eta1) or not lo < eta1 < hi:
        print(f"starlap recover: --eta1 must lie in ({lo!r}, {hi!r}), got {eta1!r}", file=sys.stderr)
        return EXIT_USAGE
    _emit(cfg, f"{recover_ratio(eta1):#.12g}\n")
    return EXIT_OK


# verify

def _threads():
    raw = os.environ.get("STARLAP_THREADS")
    if raw is None or raw == "":
        return os.cpu_count() or 1
    n = int(raw)
    if n < 1:
        raise ValueError
    return n


def _run_one(name, cfg):
    try:
        return run_suite(name, cfg.signature, cfg.mesh, cfg.seed).as_dict(), None
    except OracleNonConvergence as exc:
        err, msg = EXIT_NONCONVERGENCE, str(exc)
    except StarlapError as exc:
        err, msg = EXIT_FAIL, str(exc)
    return {"suite": name, "cases": 0, "max_residual": None, "pass": False,
            "details": {"error": msg}}, err


def cmd_verify(cfg: RunConfig) -> int:
    try:
        workers = _threads()
    except ValueError:
        print("starlap verify: STARLAP_THREADS must be a positive integer", file=sys.stderr)
        return EXIT_USAGE
    names = cfg.suite_names
    with ThreadPoolExecutor(max_workers=max(1, min(workers, len(names)))) as pool:
        outcomes = list(pool.map(lambda s: _run_one(s, cfg), names))
    results = [r for r, _ in outcomes]
    errors = {e for _, e in outcomes if e is not None}
    ok = all(r["pass"] for r in results)
    if cfg.fmt == "csv":
        _emit(cfg, dump_csv(VERIFY_COLUMNS, results))
    else:
        _emit(cfg, dump_json({
            "command": "verify", "n_plus": cfg.n_plus, "n_minus": cfg.n_minus,
            "mesh": cfg.mesh, "seed": cfg.seed, "pass": ok, "suites": results,
        }))
    for r in results:
        status = "pass" if r["pass"] else "FAIL"
        print(f"{r['suite']:<12} {status}  max_residual={r['max_residual']}", file=sys.stderr)
    if EXIT_NONCONVERGENCE in errors:
        return EXIT_NONCONVERGENCE
    return EXIT_OK if ok else EXIT_FAIL


# plotdata

def plot_rows(cfg: RunConfig):
    """Rows for the curves ``-cot(mu)`` and ``(n_plus/n_minus) coth(mu)`` on ``(0, mu_max]``.

    ``pole`` rows sit exactly at ``mu = k pi`` with an empty ``neg_cot`` cell
    and break the cotangent branch. ``intersection`` rows are the crossings
    of the two curves; they solve ``n_minus cot + n_plus coth = 0`` and are
    therefore ``sqrt|eta_k|`` for the negative indices ``k``.
    """
    sig = cfg.signature
    ratio = sig.n_plus / sig.n_minus
    mu = np.linspace(0, cfg.mu_max, cfg.samples + 1)[1:]
    rows = []
    poles = [k * math.pi for k in range(1, int(cfg.mu_max / math.pi) + 1)]
    for x in mu:
        x = float(x)
        if any(x == p for p in poles):
            continue
        rows.append({"kind": "sample", "mu": x, "neg_cot": -1.0 / math.tan(x),
                     "ratio_coth": ratio / math.tanh(x), "k": None})
    for k, p in enumerate(poles, start=1):
        rows.append({"kind": "pole", "mu": p, "neg_cot": None,
                     "ratio_coth": ratio / math.tanh(p), "k": k})
    k = 1
    while (k - 1) * math.pi < cfg.mu_max:
        x = eta_mu(sig, -k, cfg.tol)
        if x > cfg.mu_max:
            break
        rows.append({"kind": "intersection", "mu": x, "neg_cot": -1.0 / math.tan(x),
                     "ratio_coth": ratio / math.tanh(x), "k": -k})
        k += 1
    order = {"sample": 0, "pole": 1, "intersection": 2}
    rows.sort(key=lambda r: (r["mu"], order[r["kind"]]))
    return rows


def cmd_plotdata(cfg: RunConfig) -> int:
    try:
        rows = plot_rows(cfg)
    except RootFindingError as exc:
        print(f"starlap plotdata: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if cfg.fmt == "csv":
        _emit(cfg, dump_csv(PLOT_COLUMNS, rows))
    else:
        _emit(cfg, dump_json({
            "command": "plotdata", "n_plus": cfg.n_plus, "n_minus": cfg.n_minus,
            "mu_max": cfg.mu_max, "columns": PLOT_COLUMNS, "rows": rows,
        }))
    return EXIT_OK


# dump-matrix

def cmd_dump_matrix(cfg: RunConfig) -> int:
    if cfg.output is None:
        print("starlap dump-matrix: --output is required", file=sys.stderr)
        return EXIT_USAGE
    write_matrix(discretize_B(cfg.signature, cfg.mesh, cfg.order), cfg.output)
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "recover": cmd_recover,
    "verify": cmd_verify,
    "plotdata": cmd_plotdata,
    "dump-matrix": cmd_dump_matrix,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-plus", type=int, default=2)
    common.add_argument("--n-minus", type=int, default=1)
    common.add_argument("--k-max", type=int, default=10)
    common.add_argument("--mesh", type=int, default=2000, help="cells per edge")
    common.add_argument("--tol", type=float, default=1e-11, help="secular residual tolerance")
    common.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")
    common.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(
        prog="starlap",
        description="Spectral toolkit for the indefinite Kirchhoff Laplacian on a star graph.",
        epilog="exit codes: 0 pass, 1 failure, 2 usage error, 3 oracle non-convergence",
    )
    p.add_argument("--version", action="version", version=f"starlap {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalues of A and/or B")
    s.add_argument("--operator", choices=["A", "B", "both"], default="B")

    r = sub.add_parser("recover", parents=[common], help="n_plus/n_minus from the first eigenvalue")
    r.add_argument("--eta1", type=float, required=True)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", dest="suites", action="append",
                   choices=list(SUITES) + ["all"], default=None)

    d = sub.add_parser("plotdata", parents=[common], help="secular-equation curve data")
    d.add_argument("--mu-max", type=float, default=15.0)
    d.add_argument("--samples", type=int, default=1500)

    m = sub.add_parser("dump-matrix", parents=[common], help="write the discretized J L")
    m.add_argument("--order", choices=["first", "second"], default="second")
    return p


def parse_config(argv=None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    kw = {k: v for k, v in vars(ns).items() if v is not None}
    try:
        return RunConfig(**kw)
    except UsageError as exc:
        parser.error(str(exc))


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
