"""Command-line front end.

    sqseries eval     --fn gsq --q 0.2 --c 0.5 --z 1
    sqseries compare  --fn theta_u --i 3 --u 0.7 --q 0.1
    sqseries sweep    --fn gsq --q 0.05,0.1,0.2 --c -0.5,0.5 --z 0.9 --jobs 4
    sqseries constants
    sqseries bench    --fn esq --q 0.5 --r 2 --z 0.5 --repeat 15
    sqseries selftest --seed 7

Function parameters are passed as ``--name value``; complex values use
``re``, ``re+imi`` or ``imi``.  Exit codes: 0 ok, 1 selftest failure,
2 usage or domain error, 3 region violation, 4 no convergence.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import itertools
import json
import os
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence, TextIO

from . import __version__
from . import special as sp
from .errors import (
    DomainError,
    InvalidConfig,
    NoConvergence,
    NonFiniteIntegrand,
    RegionViolation,
    SquareSeriesError,
)
from .quadrature import EvalResult, QuadratureConfig
from .registry import REGISTRY, FunctionEntry, format_complex, parse_value
from .verify import CHECKS, run_checks

__all__ = ["OutputRow", "main", "run", "build_parser", "load_config_file"]

EXIT_OK, EXIT_SELFTEST, EXIT_USAGE, EXIT_REGION, EXIT_CONVERGENCE = 0, 1, 2, 3, 4
FORMATS = ("text", "csv", "json-lines")
U64_MAX = 2**64 - 1


class UsageError(Exception):
    pass


# -- rows -------------------------------------------------------------------


@dataclass(frozen=True)
class OutputRow:
    function: str
    params: str
    integral_re: float
    integral_im: float
    oracle_re: float
    oracle_im: float
    abs_err: float
    rel_err: float
    nodes_used: int
    elapsed_ns: int

    @classmethod
    def build(cls, function: str, params: str, integral: EvalResult, oracle: complex, elapsed_ns: int) -> "OutputRow":
        v, o = complex(integral.value), complex(oracle)
        abs_err = abs(v - o)
        return cls(function, params, v.real, v.imag, o.real, o.imag, abs_err, abs_err / max(abs(o), 1e-300),
                   integral.nodes_used, elapsed_ns)


OUTPUT_COLUMNS = tuple(f.name for f in dataclasses.fields(OutputRow))


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, complex):
        return format_complex(v)
    if isinstance(v, (tuple, list)):
        return "|".join(map(str, v))
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, tuple):
        return list(v)
    return v


class Emitter:
    """Writes homogeneous records as text, CSV or JSON lines."""

    def __init__(self, fmt: str, out: TextIO, columns: Sequence[str]):
        self.fmt, self.out, self.columns = fmt, out, tuple(columns)
        self._csv = None
        self._rows: list[list[str]] = []
        if fmt == "csv":
            self._csv = csv.writer(out, lineterminator="\n")
            self._csv.writerow(self.columns)

    def emit(self, record: dict[str, Any]) -> None:
        if self.fmt == "csv":
            self._csv.writerow([_cell(record[c]) for c in self.columns])
        elif self.fmt == "json-lines":
            self.out.write(json.dumps({c: _jsonable(record[c]) for c in self.columns}) + "\n")
        else:
            self._rows.append([_cell(record[c]) for c in self.columns])
        self.out.flush()

    def close(self) -> None:
        if self.fmt != "text" or not self._rows:
            return
        if len(self._rows) == 1:
            width = max(map(len, self.columns))
            for c, v in zip(self.columns, self._rows[0]):
                self.out.write(f"{c:<{width}}  {v}\n")
            return
        widths = [max(len(c), *(len(r[i]) for r in self._rows)) for i, c in enumerate(self.columns)]
        self.out.write("  ".join(c.ljust(w) for c, w in zip(self.columns, widths)).rstrip() + "\n")
        for r in self._rows:
            self.out.write("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() + "\n")


# -- configuration ----------------------------------------------------------

_CFG_FIELDS = {f.name: f for f in dataclasses.fields(QuadratureConfig)}
_CFG_FLAGS = {
    "method": ("--method", str),
    "abs_tol": ("--abs-tol", float),
    "rel_tol": ("--rel-tol", float),
    "max_nodes": ("--max-nodes", int),
    "truncation_T": ("--truncation-T", float),
    "refine_limit": ("--refine-limit", int),
    "magnitude_bound": ("--magnitude-bound", float),
    "panel_order": ("--panel-order", int),
    "initial_panels": ("--initial-panels", int),
}


def _coerce_cfg(key: str, text: str) -> Any:
    if key not in _CFG_FIELDS:
        raise UsageError(f"unknown quadrature setting {key!r}")
    if key == "strict":
        low = text.strip().lower()
        if low not in ("true", "false", "1", "0", "yes", "no"):
            raise UsageError(f"strict must be a boolean, got {text!r}")
        return low in ("true", "1", "yes")
    if key == "truncation_T" and text.strip().lower() in ("", "none"):
        return None
    conv = _CFG_FLAGS[key][1]
    try:
        return conv(text.strip())
    except ValueError:
        raise UsageError(f"bad value for {key}: {text!r}") from None


def load_config_file(path: str) -> dict[str, Any]:
    """``key = value`` lines; ``#`` starts a comment.  Keys are QuadratureConfig fields."""
    out: dict[str, Any] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = _coerce_cfg(key.replace("-", "_"), value)
    return out


def _make_config(args: argparse.Namespace) -> QuadratureConfig:
    settings = load_config_file(args.config) if args.config else {}
    for key in _CFG_FLAGS:
        v = getattr(args, key)
        if v is not None:
            settings[key] = v
    if args.strict is not None:
        settings["strict"] = args.strict
    return QuadratureConfig(**settings)


# -- parsing ----------------------------------------------------------------


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v <= U64_MAX:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=FORMATS, default="text")
    g.add_argument("--config", metavar="PATH", help="key = value file of quadrature defaults")
    g.add_argument("--override-region", action="store_true",
                   help="evaluate outside the proven region (results flagged unconverged)")
    g.add_argument("--seed", type=_seed, default=0, help="seed for randomized sampling (u64)")
    q = p.add_argument_group("quadrature")
    for key, (flag, conv) in _CFG_FLAGS.items():
        kw: dict[str, Any] = {"dest": key, "type": conv, "default": None}
        if key == "method":
            kw["choices"] = ("truncated_adaptive", "hermite")
        q.add_argument(flag, **kw)
    q.add_argument("--strict", dest="strict", action="store_true", default=None)
    q.add_argument("--no-strict", dest="strict", action="store_false")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    # abbreviation off: function parameters like --c must not match --config
    parser = argparse.ArgumentParser(prog="sqseries", description="Square-series integrals and their oracles.",
                                     allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    fn_help = "function name (see `sqseries list`)"
    for name, help_ in (("eval", "evaluate one integral"), ("compare", "integral vs oracle, one row"),
                        ("sweep", "Cartesian grid of comma-separated values")):
        sp_ = sub.add_parser(name, parents=[common], help=help_, allow_abbrev=False)
        sp_.add_argument("--fn", required=True, help=fn_help)
        if name == "sweep":
            sp_.add_argument("--jobs", type=int, default=1, help="worker processes")
    b = sub.add_parser("bench", parents=[common], help="median timings, integral vs series", allow_abbrev=False)
    b.add_argument("--fn", required=True, help=fn_help)
    b.add_argument("--repeat", type=int, default=7)
    sub.add_parser("constants", parents=[common], help="closed-form special values", allow_abbrev=False)
    st = sub.add_parser("selftest", parents=[common], help="run every oracle check", allow_abbrev=False)
    st.add_argument("--only", action="append", choices=list(CHECKS), help="restrict to named checks")
    sub.add_parser("list", parents=[common], help="registered functions and their parameters", allow_abbrev=False)
    return parser


def _split_params(extra: Sequence[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--") or len(tok) < 3:
            raise UsageError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        else:
            try:
                value = next(it)
            except StopIteration:
                raise UsageError(f"missing value for --{key}") from None
        key = key.replace("-", "_")
        if key in out:
            raise UsageError(f"parameter --{key} given twice")
        out[key] = value
    return out


def _entry(name: str) -> FunctionEntry:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UsageError(f"unknown function {name!r}; try `sqseries list`") from None


def _parse_params(entry: FunctionEntry, raw: dict[str, str], *, lists: bool) -> dict[str, list[Any]]:
    """Validate names and parse values; with ``lists`` each value may be a comma list."""
    unknown = set(raw) - set(entry.param_names())
    if unknown:
        raise UsageError(f"{entry.name}: unknown parameter(s) {', '.join(sorted(unknown))}")
    out: dict[str, list[Any]] = {}
    for p in entry.params:
        if p.name not in raw:
            if p.required:
                raise UsageError(f"{entry.name}: missing required parameter --{p.name}")
            out[p.name] = [p.default]
            continue
        texts = raw[p.name].split(",") if lists else [raw[p.name]]
        try:
            out[p.name] = [parse_value(p.kind, t) for t in texts]
        except ValueError as exc:
            raise UsageError(f"--{p.name}: {exc}") from None
    return out


def _format_params(entry: FunctionEntry, values: dict[str, Any]) -> str:
    return ";".join(f"{p.name}={_cell(values[p.name])}" for p in entry.params)


# -- commands ---------------------------------------------------------------


def _compare_point(name: str, values: dict[str, Any], cfg: QuadratureConfig, override: bool) -> OutputRow:
    entry = REGISTRY[name]
    start = time.perf_counter_ns()
    res = entry.integral(cfg, override, **values)
    elapsed = time.perf_counter_ns() - start
    oracle = entry.oracle(**values)
    return OutputRow.build(name, _format_params(entry, values), res, oracle, elapsed)


def _cmd_eval(args, cfg, entry, params, out) -> int:
    values = {k: v[0] for k, v in params.items()}
    res = entry.integral(cfg, args.override_region, **values)
    cols = ("function", "params", "value_re", "value_im", "error_estimate", "nodes_used", "converged", "warnings")
    em = Emitter(args.format, out, cols)
    v = complex(res.value)
    em.emit(dict(function=entry.name, params=_format_params(entry, values), value_re=v.real, value_im=v.imag,
                 error_estimate=float(res.error_estimate), nodes_used=res.nodes_used, converged=res.converged,
                 warnings=tuple(res.warnings)))
    em.close()
    return EXIT_OK


def _cmd_compare(args, cfg, entry, params, out) -> int:
    row = _compare_point(entry.name, {k: v[0] for k, v in params.items()}, cfg, args.override_region)
    em = Emitter(args.format, out, OUTPUT_COLUMNS)
    em.emit(dataclasses.asdict(row))
    em.close()
    return EXIT_OK


def _cmd_sweep(args, cfg, entry, params, out) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    names = list(params)
    grid = [dict(zip(names, combo)) for combo in itertools.product(*(params[n] for n in names))]
    em = Emitter(args.format, out, OUTPUT_COLUMNS)
    if args.jobs == 1 or len(grid) == 1:
        rows: Iterable[OutputRow] = (_compare_point(entry.name, g, cfg, args.override_region) for g in grid)
        for row in rows:
            em.emit(dataclasses.asdict(row))
    else:
        # map() yields in submission order, so output order is the grid order
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            n = len(grid)
            for row in pool.map(_compare_point, [entry.name] * n, grid, [cfg] * n, [args.override_region] * n):
                em.emit(dataclasses.asdict(row))
    em.close()
    return EXIT_OK


def _cmd_bench(args, cfg, entry, params, out) -> int:
    if args.repeat < 1:
        raise UsageError("--repeat must be >= 1")
    values = {k: v[0] for k, v in params.items()}
    t_int, t_ser = [], []
    for _ in range(args.repeat):
        t0 = time.perf_counter_ns()
        res = entry.integral(cfg, args.override_region, **values)
        t1 = time.perf_counter_ns()
        oracle = entry.oracle(**values)
        t2 = time.perf_counter_ns()
        t_int.append(t1 - t0)
        t_ser.append(t2 - t1)
    cols = ("function", "params", "repeat", "integral_median_ns", "series_median_ns", "ratio", "abs_err", "nodes_used")
    em = Emitter(args.format, out, cols)
    mi, ms = int(statistics.median(t_int)), int(statistics.median(t_ser))
    em.emit(dict(function=entry.name, params=_format_params(entry, values), repeat=args.repeat,
                 integral_median_ns=mi, series_median_ns=ms, ratio=mi / max(ms, 1),
                 abs_err=abs(complex(res.value) - complex(oracle)), nodes_used=res.nodes_used))
    em.close()
    return EXIT_OK


REPORT_COLUMNS = ("name", "computed_re", "computed_im", "reference_re", "reference_im", "abs_err", "rel_err",
                  "within_tol", "tol")


def _constants(cfg: QuadratureConfig) -> list[sp.SpecialValueReport]:
    reports = [sp.phi_exp_value(k, cfg) for k in (1, 2, 3, 5)]
    reports += [sp.psi_exp_value(k, cfg) for k in (1.0, 2.0, 0.5)]
    for s in (4.0, 6.0):
        for i in (2, 3, 4):
            reports.append(sp.mellin_theta(s, i, cfg))
    return reports


def _cmd_constants(args, cfg, out) -> int:
    em = Emitter(args.format, out, REPORT_COLUMNS)
    for r in _constants(cfg):
        em.emit(dict(name=r.name, computed_re=r.computed.real, computed_im=r.computed.imag,
                     reference_re=r.reference.real, reference_im=r.reference.imag, abs_err=r.abs_err,
                     rel_err=r.rel_err, within_tol=bool(r.within_tol), tol=r.tol))
    em.close()
    return EXIT_OK


def _cmd_selftest(args, cfg, out) -> int:
    cols = ("check", "passed", "worst", "tol", "cases", "elapsed_s", "detail")
    em = Emitter(args.format, out, cols)
    failed = 0
    for r in run_checks(args.seed, cfg, args.only):
        failed += not r.passed
        em.emit(dict(check=r.name, passed=r.passed, worst=r.worst, tol=r.tol, cases=r.cases,
                     elapsed_s=round(r.elapsed_s, 3), detail=r.detail))
    em.close()
    if args.format == "text":
        out.write("selftest: " + ("FAILED" if failed else "ok") + f" ({failed} failing)\n")
    return EXIT_SELFTEST if failed else EXIT_OK


def _cmd_list(args, out) -> int:
    em = Emitter(args.format, out, ("function", "params", "summary"))
    for e in REGISTRY.values():
        ps = ";".join(p.name + ":" + p.kind + ("" if p.required else "=" + _cell(p.default)) for p in e.params)
        em.emit(dict(function=e.name, params=ps, summary=e.summary))
    em.close()
    return EXIT_OK


_FN_COMMANDS = {"eval": _cmd_eval, "compare": _cmd_compare, "sweep": _cmd_sweep, "bench": _cmd_bench}


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    """Parse ``argv`` and execute; returns the exit code instead of exiting."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    try:
        if args.command not in _FN_COMMANDS and extra:
            raise UsageError(f"unrecognized arguments: {' '.join(extra)}")
        cfg = _make_config(args)
        if args.command in _FN_COMMANDS:
            entry = _entry(args.fn)
            params = _parse_params(entry, _split_params(extra), lists=args.command == "sweep")
            return _FN_COMMANDS[args.command](args, cfg, entry, params, out)
        if args.command == "constants":
            return _cmd_constants(args, cfg, out)
        if args.command == "selftest":
            return _cmd_selftest(args, cfg, out)
        return _cmd_list(args, out)
    except (UsageError, InvalidConfig) as exc:
        err.write(f"sqseries: error: {exc}\n")
        return EXIT_USAGE
    except RegionViolation as exc:
        err.write(f"sqseries: region violation: {exc} (use --override-region to evaluate anyway)\n")
        return EXIT_REGION
    except (NoConvergence, NonFiniteIntegrand) as exc:
        err.write(f"sqseries: {type(exc).__name__}: {exc}\n")
        return EXIT_CONVERGENCE
    except (DomainError, SquareSeriesError, ValueError, ZeroDivisionError) as exc:
        err.write(f"sqseries: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


def main(argv: Sequence[str] | None = None) -> None:
    try:
        code = run(argv)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
