"""Self-check suite: every integral representation against an independent oracle.

Each check returns a :class:`CheckResult`.  Random sampling is driven by a
single ``numpy.random.Generator`` so the whole suite is deterministic for a
given seed.
"""

from __future__ import annotations

import cmath
import decimal
import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from . import special as sp
from . import stirling as st
from . import transforms as tr
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, half_normal_moment, hermite_rule
from .sequences import (
    BilateralSpec,
    BinomialPowExponential,
    Exponential,
    FourierCos,
    FourierSin,
    Geometric,
    bilateral_direct,
    square_series_sum,
)

__all__ = ["CheckResult", "CHECKS", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float  # worst observed error (relative unless the check says otherwise)
    tol: float
    cases: int
    elapsed_s: float
    detail: str = ""


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _series(kind, q, z) -> complex:
    return square_series_sum(kind, q, z).value


class _Tally:
    def __init__(self, tol: float):
        self.tol = tol
        self.worst = 0.0
        self.cases = 0
        self.where = ""

    def add(self, err: float, label: str) -> None:
        self.cases += 1
        if math.isnan(err) or err > self.worst:
            self.worst, self.where = (math.inf if math.isnan(err) else err), label

    @property
    def ok(self) -> bool:
        return self.cases > 0 and self.worst <= self.tol


Check = Callable[[np.random.Generator, QuadratureConfig], _Tally]


def _geometric(rng, cfg) -> _Tally:
    t = _Tally(1e-10)
    for q in (0.05, 0.1, 0.2, 0.3):
        for c in (-0.9, -0.5, 0.5, 0.9):
            for z in (0.3, 0.9):
                t.add(_rel(tr.gsq(q, c, z, cfg).value, _series(Geometric(c), q, z)), f"q={q} c={c} z={z}")
    return t


def _phi_values(rng, cfg) -> _Tally:
    t = _Tally(1e-8)
    for k in sp.PHI_CLOSED_FORMS:
        t.add(sp.phi_exp_value(k, cfg).rel_err, f"k={k}")
    return t


def _psi_values(rng, cfg) -> _Tally:
    t = _Tally(1e-8)
    for k in sp.PSI_CLOSED_FORMS:
        t.add(sp.psi_exp_value(k, cfg).rel_err, f"k={k}")
    return t


def _thetas(rng, cfg) -> _Tally:
    t = _Tally(1e-9)
    for q in (0.1, 0.2, 0.45):
        t.add(_rel(sp.theta2(q, cfg).value, sp.theta_series(2, 0.0, q)), f"theta2 q={q}")
    for q in (0.05, 0.1, 0.2):
        t.add(_rel(sp.theta3(q, cfg).value, sp.theta_series(3, 0.0, q)), f"theta3 q={q}")
        t.add(_rel(sp.theta4(q, cfg).value, sp.theta_series(4, 0.0, q)), f"theta4 q={q}")
    return t


def _numerator_table(rng, cfg) -> _Tally:
    # absolute error; real s needs the extended evaluation
    t = _Tally(1e-12)
    s = rng.uniform(-3, 3, 1000)
    y = rng.uniform(-0.9, 0.9, 1000)
    for k in range(5):
        d = np.abs(tr.numerator_poly(k, s, y, "extended") - 2 * tr.numerator_table(k, s, y, "extended"))
        t.add(float(d.max()), f"k={k} real s")
        d = np.abs(tr.numerator_poly(k, 1j * s, y) - 2 * tr.numerator_table(k, 1j * s, y))
        t.add(float(d.max()), f"k={k} imaginary s")
    return t


def _stirling(rng, cfg) -> _Tally:
    t = _Tally(1e-10)
    for n in range(41):
        for k in range(n + 1):
            t.add(0.0 if st.stirling2(n, k) == st.stirling2_explicit(n, k) else math.inf, f"S({n},{k})")
    for m in range(1, 9):
        for x in (-0.8, -0.3, 0.2, 0.8):
            brute = _brute_polylog(m, x)
            t.add(_rel(st.neg_polylog(m, x), brute), f"neg_polylog m={m} x={x}")
    for j in range(7):
        for w in (0.3, 1.0, 1j, 0.6 - 0.8j):
            closed = ((cmath.exp(w) - 1) ** j + (cmath.exp(-w) - 1) ** j) / (2 * math.factorial(j))
            t.add(abs(st.stirling_egf_partial(j, w, 40) - closed), f"egf j={j} w={w}")
    return t


def _brute_polylog(m: int, x: float, N: int = 3000) -> float:
    # alternating x makes the float sum cancel ~1e9-sized terms; sum in 50 digits
    with decimal.localcontext() as ctx:
        ctx.prec = 50
        X = decimal.Decimal(x)
        return float(sum(decimal.Decimal(n) ** m * X**n for n in range(1, N)))


def _binomial(rng, cfg) -> _Tally:
    t = _Tally(1e-6)
    for c, d, q, r in ((1, 1, 0.5, 0.5), (1, 2, 0.5, 0.4), (0.7, -0.3, 0.3, 0.6)):
        for n in range(7):
            exact = sum(math.comb(n, k) * c**k * q ** (k * k) * d ** (n - k) * r ** ((n - k) ** 2) for k in range(n + 1))
            t.add(abs(tr.binomial_analog(n, c, q, d, r, cfg).value - exact), f"n={n} (c,d,q,r)={(c, d, q, r)}")
    return t


def _euler(rng, cfg) -> _Tally:
    t = _Tally(1e-7)
    q = 0.05
    ref = sp.euler_product(q)
    t.add(abs(sp.euler_qp(q, cfg).value - ref), "two-integral q=0.05")
    t.add(abs(sp.euler_qp_theta2_form(q, cfg).value - ref), "theta2 form q=0.05")
    t.add(abs(sp.bilateral_eval(BilateralSpec(0, 1, 3, 1, 0, q), cfg).value - ref), "bilateral q=0.05")
    for q in (0.1, 0.3):
        cube = sp.euler_qp_cubed(q, cfg).value
        t.add(abs(cube - sp.euler_product(q) ** 3), f"cubed q={q}")
        d1 = sp.theta_deriv(1, 1, math.sqrt(q), cfg, override=True).value / (2 * q**0.125)
        t.add(abs(cube - d1) * 10, f"cubed vs theta1' q={q} (scaled to 1e-8)")
    return t


def _ramanujan_f(rng, cfg) -> _Tally:
    t = _Tally(1e-8)
    for a, b in ((0.3, 0.2), (0.4, 0.1), (0.25, 0.25)):
        v = sp.ramanujan_f(a, b, cfg).value
        t.add(_rel(v, sp.ramanujan_f_series(a, b)), f"f({a},{b})")
        t.add(_rel(v, sp.ramanujan_f(b, a, cfg).value) * 100, f"swap f({a},{b}) (scaled to 1e-10)")
    return t


def _mellin(rng, cfg) -> _Tally:
    t = _Tally(1e-4)
    for i in (2, 3, 4):
        t.add(sp.mellin_theta(4.0, i, cfg).rel_err, f"s=4 i={i}")
    return t


def _exponential(rng, cfg) -> _Tally:
    t = _Tally(1e-9)
    for q, r, z in ((0.8, 1, 1), (0.5, 2, 0.5)):
        t.add(_rel(tr.esq(q, r, z, cfg).value, _series(Exponential(r), q, z)), f"esq {(q, r, z)}")
    for q, r, z in ((0.5, 1, 1), (0.5, -1, 1)):
        t.add(_rel(tr.etilde(q, r, z, cfg).value, _series(BinomialPowExponential(r), q, z)), f"etilde {(q, r, z)}")
    # etilde(q, r, z) = esq(sqrt q, r/sqrt q, z)
    for q, r, z in ((0.5, 1, 1), (0.3, 0.7, 0.9)):
        a = tr.etilde(q, r, z, cfg).value
        b = tr.esq(math.sqrt(q), r / math.sqrt(q), z, cfg).value
        t.add(_rel(a, b) * 1e3, f"etilde/esq identity {(q, r, z)} (scaled to 1e-12)")
    t.add(_rel(sp.chromatic_mk(2, 0.5, cfg).value, sp.chromatic_series(2, 0.5)) * 0.1, "chromatic k=2 z=0.5 (scaled to 1e-8)")
    return t


def _fourier(rng, cfg) -> _Tally:
    t = _Tally(1e-9)
    for _ in range(50):
        alpha, beta = rng.uniform(-math.pi, math.pi, 2)
        q = rng.uniform(0.01, 0.3)
        c = rng.uniform(-0.8, 0.8)
        for fn, kind, name in ((tr.fourier_cos, FourierCos, "cos"), (tr.fourier_sin, FourierSin, "sin")):
            ref = _series(kind(alpha, beta, c), q, 1)
            v = fn(alpha, beta, q, c, 1, cfg).value
            t.add(abs(v - ref) / max(abs(ref), 1.0), f"{name} a={alpha:.3f} b={beta:.3f} q={q:.3f} c={c:.3f}")
            if abs(math.sin(alpha)) > 1e-3:
                comp = tr.fourier_compact(name, alpha, beta, q, c, 1, cfg).value
                t.add(abs(comp - v) / max(abs(v), 1.0) * 10, f"compact {name} a={alpha:.3f} (scaled to 1e-10)")
    for i, q in ((1, 0.2), (2, 0.2), (3, 0.1), (4, 0.1)):
        for u in (0.3, 0.7, 1.1):
            ref = sp.theta_series(i, u, q)
            t.add(abs(sp.theta_u(i, u, q, cfg).value - ref) / max(abs(ref), 1.0) * 0.1, f"theta{i}(u={u}) (scaled to 1e-8)")
    return t


def _derivatives(rng, cfg) -> _Tally:
    t = _Tally(1e-7)
    q = 0.15
    for i, j in ((1, 1), (1, 3), (2, 2), (3, 2), (4, 2)):
        ref = sp.theta_deriv_series(i, j, q)
        t.add(_rel(sp.theta_deriv(i, j, q, cfg).value, ref), f"theta{i}^({j})")
    for i, j in ((1, 2), (2, 1), (3, 1), (4, 3)):
        t.add(0.0 if sp.theta_deriv(i, j, q, cfg).value == 0 else math.inf, f"parity zero theta{i}^({j})")
    return t


def _zagier(rng, cfg) -> _Tally:
    t = _Tally(1e-7)
    for q, z in ((0.3, 0.5), (0.1, 1.0)):
        t.add(sp.zagier_first(q, z, cfg).rel_err, f"q={q} z={z}")
    return t


def _quadrature(rng, cfg) -> _Tally:
    t = _Tally(1e-12)
    for n in (4, 16, 64):
        x, w = hermite_rule(n)
        for k in range(0, 2 * n, max(1, n // 8)):
            t.add(_rel(float(np.dot(w, x**k)), half_normal_moment(k)), f"n={n} moment {k}")
    return t


def _bilateral(rng, cfg) -> _Tally:
    t = _Tally(1e-9)
    for a, b, r2, r1, r0 in ((0, 1, 2, 0, 0), (1, 2, 3, -5, 1), (0, 1, 1, 1, 0)):
        for q in (0.1, 0.3):
            spec = BilateralSpec(a, b, r2, r1, r0, q)
            ref = bilateral_direct(spec)
            t.add(abs(sp.bilateral_eval(spec, cfg).value - ref) / max(abs(ref), 1.0), f"T={(a, b, r2, r1, r0)} q={q}")
    return t


CHECKS: dict[str, Check] = {
    "geometric grid": _geometric,
    "phi closed forms": _phi_values,
    "psi closed forms": _psi_values,
    "theta oracles": _thetas,
    "numerator table": _numerator_table,
    "stirling": _stirling,
    "binomial analog": _binomial,
    "euler function": _euler,
    "ramanujan f": _ramanujan_f,
    "mellin": _mellin,
    "exponential": _exponential,
    "fourier": _fourier,
    "theta derivatives": _derivatives,
    "zagier": _zagier,
    "half-range rule": _quadrature,
    "bilateral": _bilateral,
}


def run_checks(
    seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG, names: Iterable[str] | None = None
) -> Iterator[CheckResult]:
    """Run the named checks (all by default) in a fixed order."""
    rng = np.random.default_rng(seed)
    for name in names or CHECKS:
        start = time.perf_counter()
        try:
            tally = CHECKS[name](rng, cfg)
        except Exception as exc:  # a crash is a failure, reported not raised
            yield CheckResult(name, False, math.inf, math.nan, 0, time.perf_counter() - start, f"{type(exc).__name__}: {exc}")
            continue
        yield CheckResult(name, bool(tally.ok), float(tally.worst), tally.tol, tally.cases, time.perf_counter() - start, tally.where)
