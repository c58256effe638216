"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 state
validation failure, 4 numerical failure.

CSV outputs start with ``#`` comment lines echoing the resolved run
configuration; hull outputs end with a ``#`` breakpoint manifest.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .concurrence import max_concurrence, ppt_ccnr_terms, purity_terms
from .curves import METHODS, curve_values, named_curve, pattern_shapes
from .hulls import DEFAULT_GRID, MIN_GRID, HullCache, HullError, bounds_from_concurrence, evaluate_bounds
from .qstate import (
    TOL_HERM,
    TOL_PSD,
    TOL_TRACE,
    NumericalError,
    Tolerances,
    as_density,
    load_state,
    renyi_entropy,
    validate_density,
)
from .states import example2_closed_forms, example2_state, werner, werner_concurrence
from .verify import SUITES, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3, 4
FLOAT_FMT = ".12g"


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    alpha: float | None = None
    m: int | None = None
    kind: str = "both"
    method: str = "enumeration"
    grid: int | None = None
    seed: int = 0
    tol_herm: float = TOL_HERM
    tol_psd: float = TOL_PSD
    tol_trace: float = TOL_TRACE
    state: str | None = None
    family: str | None = None
    param_grid: list[float] = field(default_factory=list)
    suite: str = "quick"
    workers: int = 1
    out: str | None = None

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances(self.tol_herm, self.tol_trace, self.tol_psd)

    def validate(self) -> "RunConfig":
        if self.alpha is not None and not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise InputError("--alpha must be a finite nonnegative number")
        if self.method not in METHODS:
            raise InputError(f"--method must be one of {METHODS}")
        if self.method == "paper" and self.alpha is not None and self.alpha == 0:
            raise InputError("--method paper needs alpha > 0")
        if self.m is not None and self.m < 2:
            raise InputError("--m must be at least 2")
        if self.grid is not None and self.grid < 2:
            raise InputError("--grid must be at least 2")
        for name in ("tol_herm", "tol_psd", "tol_trace"):
            if not getattr(self, name) > 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.workers < 1:
            raise InputError("--workers must be positive")
        if self.command in ("hull", "sweep", "bounds") and self.alpha is None:
            raise InputError("--alpha is required")
        if self.command == "bounds" and not self.state:
            raise InputError("--state is required")
        if self.command == "sweep":
            if self.family not in ("werner", "example2"):
                raise InputError("--family must be werner or example2")
            lo, hi = (-1.0, 1.0) if self.family == "werner" else (0.0, 1.0)
            if not self.param_grid:
                raise InputError("--param-grid is required")
            if any(not lo <= p <= hi for p in self.param_grid):
                raise InputError(f"--param-grid values must lie in [{lo}, {hi}]")
        if self.command == "verify" and self.suite not in SUITES:
            raise InputError(f"--suite must be one of {SUITES}")
        if self.grid is None:
            self.grid = DEFAULT_GRID
        if self.m is None and self.command in ("hull", "sweep"):
            self.m = 3
        return self

    def header(self) -> list[str]:
        keep = _COMMON_FIELDS + _COMMAND_FIELDS[self.command]
        lines = []
        for k, v in asdict(self).items():
            if k not in keep or v is None:
                continue
            if isinstance(v, list):
                v = ",".join(format(x, FLOAT_FMT) for x in v)
            lines.append(f"# {k}: {v}")
        return lines


_COMMON_FIELDS = ("command", "method", "grid", "seed", "tol_herm", "tol_psd", "tol_trace", "out")
_COMMAND_FIELDS = {
    "bounds": ("alpha", "state"),
    "hull": ("alpha", "m", "kind"),
    "sweep": ("alpha", "family", "param_grid", "m"),
    "verify": ("suite",),
}


def parse_param_grid(text: str) -> list[float]:
    """``start:stop:num`` (inclusive linspace) or a comma list."""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            n = int(num)
            if n < 1:
                raise ValueError
            return [float(x) for x in np.linspace(float(start), float(stop), n)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad parameter grid {text!r}") from exc


def _fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    return "nan" if math.isnan(x) else format(x, FLOAT_FMT)


def _emit(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv(header: list[str], columns: list[str], rows, footer: list[str] = ()) -> str:
    buf = io.StringIO()
    for line in header:
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    for line in footer:
        buf.write(line + "\n")
    return buf.getvalue()


# --- bounds ---------------------------------------------------------------


def cmd_bounds(cfg: RunConfig) -> int:
    try:
        state = load_state(cfg.state)
    except OSError as exc:
        raise InputError(f"cannot read {cfg.state}: {exc}") from exc
    rho = as_density(state)
    report = validate_density(rho)
    if not report.ok(cfg.tolerances):
        sys.stderr.write("state validation failed: " + "; ".join(report.failures(cfg.tolerances)) + "\n")
        return EXIT_VALIDATION
    grid = max(cfg.grid, MIN_GRID)
    rep = evaluate_bounds(rho, cfg.alpha, cfg.method, grid)
    br = rep.bracket
    lines = cfg.header() + [
        f"dims: {rep.dims[0]} {rep.dims[1]}",
        f"relabeled: {rho.relabeled}",
        f"herm_residual: {_fmt(report.herm_residual)}",
        f"min_eigenvalue: {_fmt(report.min_eigenvalue)}",
        f"trace_residual: {_fmt(report.trace_residual)}",
    ]
    lines += [f"{k}: {_fmt(v)}" for k, v in br.terms.items()]
    lines += [
        f"c_lower: {_fmt(br.lower)} ({br.lower_source})",
        f"c_upper: {_fmt(br.upper)} ({br.upper_source})",
        f"e_low: {_fmt(rep.e_low)}",
        f"e_up: {_fmt(rep.e_up)}",
    ]
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


# --- hull -----------------------------------------------------------------


def _shape_label(n1: int, n2: int) -> str:
    return f"R_{n1}{n2}" if n1 < 10 and n2 < 10 else f"R_{n1}_{n2}"


def hull_table(cfg: RunConfig):
    """Columns and rows of the hull sweep plus the manifest lines."""
    m, alpha = cfg.m, cfg.alpha
    npts = cfg.grid
    cmax = max_concurrence(m)
    kinks = [max_concurrence(d) for d in range(2, m + 1)]
    c = np.unique(np.concatenate([np.linspace(0.0, cmax, npts), kinks]))
    cache = HullCache()
    hgrid = max(cfg.grid, MIN_GRID)
    hulls = {k: cache.get_hull(k, alpha, m, cfg.method, hgrid) for k in ("co", "ca")}
    cols = {
        "c": c,
        "R_L": curve_values(c, alpha, m, "min", cfg.method),
        "R_U": curve_values(c, alpha, m, "max", cfg.method),
        "co": hulls["co"](c),
        "ca": hulls["ca"](c),
    }
    if cfg.method == "paper":
        for n1, n2 in pattern_shapes(m):
            cols[_shape_label(n1, n2)] = named_curve(n1, n2, c, alpha)
    kinds = ("co", "ca") if cfg.kind == "both" else (cfg.kind,)
    manifest = []
    for k in kinds:
        h = hulls[k]
        for (bc, bv), seg in zip(h.breakpoints, h.segments + ["end"]):
            manifest.append(f"# breakpoint {k}: c={bc!r} value={bv!r} next={seg}")
        for ch in h.chords():
            manifest.append(
                f"# chord {k}: ({ch.start[0]!r}, {ch.start[1]!r}) -> ({ch.end[0]!r}, {ch.end[1]!r}) "
                f"slope_bits={ch.slope!r} slope_nats={ch.slope * math.log(2)!r} tangent={ch.refined}"
            )
        for slope, cstar in h.tangents:
            manifest.append(
                f"# tangency {k}: c_star={cstar!r} slope_bits={slope!r} slope_nats={slope * math.log(2)!r}"
            )
        manifest += [f"# warning {k}: {w}" for w in h.warnings]
    names = list(cols)
    rows = zip(*(cols[n] for n in names))
    return names, rows, manifest


def cmd_hull(cfg: RunConfig) -> int:
    names, rows, manifest = hull_table(cfg)
    _emit(_csv(cfg.header(), names, rows, manifest), cfg.out)
    return EXIT_OK


# --- sweep ----------------------------------------------------------------

_WORKER_CACHE = HullCache()

WERNER_COLUMNS = [
    "f", "c_exact", "e_low", "e_up", "closed_form_low",
    "c_lower_matrix", "c_upper_matrix", "e_low_matrix", "e_up_matrix",
]
EXAMPLE2_COLUMNS = [
    "a", "C1_closed", "C2_closed", "C3_closed", "Cbar_closed",
    "C1", "C2", "C3", "Cbar",
    "e_low_C1", "e_low_C2", "e_low_C3", "e_low", "e_up",
]


def _werner_row(args):
    f, alpha, d, method, grid = args
    c = werner_concurrence(f)
    lo, hi = bounds_from_concurrence(c, c, alpha, d, method, grid, _WORKER_CACHE)
    r = math.sqrt(1.0 - f * f)
    closed = renyi_entropy([(1 + r) / 2, (1 - r) / 2], alpha)
    rep = evaluate_bounds(werner(d, f), alpha, method, grid, _WORKER_CACHE)
    return [f, c, lo, hi, closed, rep.bracket.lower, rep.bracket.upper, rep.e_low, rep.e_up]


def _example2_row(args):
    a, alpha, method, grid = args
    rho = example2_state(a, 0.1)
    closed = example2_closed_forms(a)
    sep, pur = ppt_ccnr_terms(rho), purity_terms(rho)
    c1, c2, c3, cbar = pur["lower_A"], sep["ppt"], sep["ccnr"], pur["upper_A"]
    cmax = max_concurrence(3)
    lows = [
        bounds_from_concurrence(min(x, cbar, cmax), min(cbar, cmax), alpha, 3, method, grid, _WORKER_CACHE)[0]
        for x in (c1, c2, c3)
    ]
    _, hi = bounds_from_concurrence(0.0, min(cbar, cmax), alpha, 3, method, grid, _WORKER_CACHE)
    return [a, closed["C1"], closed["C2"], closed["C3"], closed["Cbar"],
            c1, c2, c3, cbar, *lows, max(lows), hi]


def cmd_sweep(cfg: RunConfig) -> int:
    grid = max(cfg.grid, MIN_GRID)
    if cfg.family == "werner":
        d = cfg.m
        jobs = [(f, cfg.alpha, d, cfg.method, grid) for f in cfg.param_grid]
        fn, cols = _werner_row, WERNER_COLUMNS
    else:
        jobs = [(a, cfg.alpha, cfg.method, grid) for a in cfg.param_grid]
        fn, cols = _example2_row, EXAMPLE2_COLUMNS
    if cfg.workers > 1:
        # map() keeps grid order regardless of completion order
        with ProcessPoolExecutor(cfg.workers) as pool:
            rows = list(pool.map(fn, jobs))
    else:
        rows = [fn(j) for j in jobs]
    _emit(_csv(cfg.header(), cols, rows), cfg.out)
    return EXIT_OK


# --- verify ---------------------------------------------------------------


def cmd_verify(cfg: RunConfig) -> int:
    checks = run_suite(cfg.suite, cfg.seed, cfg.tolerances)
    lines = cfg.header()
    failed = 0
    for ch in checks:
        tag = "PASS" if ch.passed else "FAIL"
        if not ch.mandatory:
            tag = "INFO"
        failed += ch.mandatory and not ch.passed
        lines.append(f"{tag} [{ch.suite}] {ch.name}" + (f": {ch.detail}" if ch.detail else ""))
    lines.append(f"# mandatory failures: {failed}")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {"bounds": cmd_bounds, "hull": cmd_hull, "sweep": cmd_sweep, "verify": cmd_verify}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="renyibounds", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="also write the output to this file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol-herm", type=float, default=TOL_HERM)
        sp.add_argument("--tol-psd", type=float, default=TOL_PSD)
        sp.add_argument("--tol-trace", type=float, default=TOL_TRACE)
        sp.add_argument("--method", choices=METHODS, default="enumeration")
        sp.add_argument("--grid", type=int, help=f"hull construction grid, at least {MIN_GRID} (hull: also the number of output rows; default {DEFAULT_GRID})")

    b = sub.add_parser("bounds", help="concurrence bracket and entropy bounds of a state file")
    b.add_argument("--state", required=True)
    b.add_argument("--alpha", type=float, required=True)
    common(b)

    h = sub.add_parser("hull", help="extremal curves and their hulls over the concurrence range")
    h.add_argument("--alpha", type=float, required=True)
    h.add_argument("--m", type=int, default=3)
    h.add_argument("--kind", choices=("co", "ca", "both"), default="both")
    common(h)

    s = sub.add_parser("sweep", help="bounds along a one-parameter family")
    s.add_argument("--family", choices=("werner", "example2"), required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--param-grid", type=parse_param_grid, required=True,
                   help="start:stop:num or a comma list")
    s.add_argument("--m", type=int, help="Werner local dimension (default 3)")
    s.add_argument("--workers", type=int, default=1)
    common(s)

    v = sub.add_parser("verify", help="run the property suites")
    v.add_argument("--suite", choices=SUITES, default="quick")
    common(v)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        alpha=getattr(ns, "alpha", None),
        m=getattr(ns, "m", None),
        kind=getattr(ns, "kind", "both"),
        method=ns.method,
        grid=ns.grid,
        seed=ns.seed,
        tol_herm=ns.tol_herm,
        tol_psd=ns.tol_psd,
        tol_trace=ns.tol_trace,
        state=getattr(ns, "state", None),
        family=getattr(ns, "family", None),
        param_grid=getattr(ns, "param_grid", None) or [],
        suite=getattr(ns, "suite", "quick"),
        workers=getattr(ns, "workers", 1),
        out=ns.out,
    ).validate()


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (NumericalError, HullError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
