"""Name -> (integral, oracle) table used by the command line front end."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from . import special as sp
from . import transforms as tr
from .quadrature import EvalResult
from .sequences import (
    AffineGeometric,
    BilateralSpec,
    BinomialPowExponential,
    Exponential,
    FallingExponential,
    FallingGeometric,
    FourierCos,
    FourierSin,
    Geometric,
    PolyPowGeometric,
    bilateral_direct,
    qpow,
    square_series_sum,
)

__all__ = ["Param", "FunctionEntry", "REGISTRY", "parse_complex", "parse_value", "format_complex"]

REQUIRED = object()

def parse_complex(text: str) -> complex:
    """Parse ``"re"``, ``"re+imi"``, ``"imi"`` or ``"re-imi"``."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if s.endswith("i"):
        s = s[:-1] + "j"
        if s in ("j", "+j", "-j"):
            s = s.replace("j", "1j")
    elif "j" in s:
        raise ValueError(f"use 'i' for the imaginary unit: {text!r}")
    try:
        return complex(s)
    except ValueError:
        raise ValueError(f"not a complex literal: {text!r}") from None


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


_PARSERS: dict[str, Callable[[str], Any]] = {
    "complex": parse_complex,
    "float": float,
    "int": int,
    "rational": lambda s: Fraction(s),
    "str": str,
}


def parse_value(kind: str, text: str):
    try:
        return _PARSERS[kind](text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse {text!r} as {kind}: {exc}") from None


@dataclass(frozen=True)
class Param:
    name: str
    kind: str = "complex"
    default: Any = REQUIRED

    @property
    def required(self) -> bool:
        return self.default is REQUIRED


@dataclass(frozen=True)
class FunctionEntry:
    name: str
    params: tuple[Param, ...]
    integral: Callable[..., EvalResult]  # (cfg, override, **params)
    oracle: Callable[..., complex]  # (**params)
    summary: str = ""

    def param_names(self) -> list[str]:
        return [p.name for p in self.params]


def _series(kind, q, z) -> complex:
    return square_series_sum(kind, q, z).value


def _binomial_sum(n, c, q, d, r) -> complex:
    return sum(math.comb(n, k) * c**k * q ** (k * k) * d ** (n - k) * r ** ((n - k) ** 2) for k in range(n + 1))


def _P(*names: str, kind: str = "complex") -> tuple[Param, ...]:
    return tuple(Param(n, kind) for n in names)


def _entries() -> list[FunctionEntry]:
    qcz = _P("q", "c", "z")
    e = []

    def add(name, params, integral, oracle, summary):
        e.append(FunctionEntry(name, tuple(params), integral, oracle, summary))

    add("gsq", qcz, lambda cfg, ov, q, c, z: tr.gsq(q, c, z, cfg, override=ov),
        lambda q, c, z: _series(Geometric(c), q, z), "sum q^{n^2} (cz)^n")
    add("theta_shifted", (Param("d", "int"),) + qcz,
        lambda cfg, ov, d, q, c, z: tr.theta_shifted(d, q, c, z, cfg, override=ov),
        lambda d, q, c, z: _series(Geometric(c), q, z) - sum(q ** (i * i) * (c * z) ** i for i in range(d)),
        "sum_{n>=d} q^{n^2} (cz)^n")
    add("qab", _P("a", "b") + qcz, lambda cfg, ov, a, b, q, c, z: tr.qab(a, b, q, c, z, cfg, override=ov),
        lambda a, b, q, c, z: _series(AffineGeometric(a, b, c), q, z), "sum (an+b) q^{n^2} (cz)^n")
    add("gsq_pm", (Param("p", "rational"), Param("m", "rational"), Param("q"), Param("c"), Param("sign", "int", 1)),
        lambda cfg, ov, p, m, q, c, sign: tr.gsq_pm(p, m, q, c, sign, cfg, override=ov),
        lambda p, m, q, c, sign: _series(Geometric(sign * c * qpow(q, m)), qpow(q, p), 1),
        "sum (q^p)^{n^2} (+-c q^m)^n")
    add("theta_poly_power", (Param("m", "int"),) + qcz,
        lambda cfg, ov, m, q, c, z: tr.theta_poly_power(m, q, c, z, cfg, override=ov),
        lambda m, q, c, z: _series(PolyPowGeometric(1, 0, m, c), q, z), "sum n^m q^{n^2} (cz)^n")
    add("theta_affine_power", _P("alpha", "beta") + (Param("m", "int"),) + qcz,
        lambda cfg, ov, alpha, beta, m, q, c, z: tr.theta_affine_power(alpha, beta, m, q, c, z, cfg, override=ov),
        lambda alpha, beta, m, q, c, z: _series(PolyPowGeometric(alpha, beta, m, c), q, z),
        "sum (alpha n + beta)^m q^{n^2} (cz)^n")
    add("esq", _P("q", "r", "z"), lambda cfg, ov, q, r, z: tr.esq(q, r, z, cfg, override=ov),
        lambda q, r, z: _series(Exponential(r), q, z), "sum q^{n^2} (rz)^n / n!")
    add("etilde", _P("q", "r", "z"), lambda cfg, ov, q, r, z: tr.etilde(q, r, z, cfg, override=ov),
        lambda q, r, z: _series(BinomialPowExponential(r), q, z), "sum q^{n(n-1)/2} (rz)^n / n!")
    fparams = _P("alpha", "beta", kind="float") + qcz
    add("fourier_cos", fparams, lambda cfg, ov, alpha, beta, q, c, z: tr.fourier_cos(alpha, beta, q, c, z, cfg, override=ov),
        lambda alpha, beta, q, c, z: _series(FourierCos(alpha, beta, c), q, z), "sum q^{n^2} cos(alpha n + beta) (cz)^n")
    add("fourier_sin", fparams, lambda cfg, ov, alpha, beta, q, c, z: tr.fourier_sin(alpha, beta, q, c, z, cfg, override=ov),
        lambda alpha, beta, q, c, z: _series(FourierSin(alpha, beta, c), q, z), "sum q^{n^2} sin(alpha n + beta) (cz)^n")
    add("fourier_compact", (Param("which", "str"),) + fparams,
        lambda cfg, ov, which, alpha, beta, q, c, z: tr.fourier_compact(which, alpha, beta, q, c, z, cfg, override=ov),
        lambda which, alpha, beta, q, c, z: _series(
            (FourierCos if which == "cos" else FourierSin)(alpha, beta, c), q, z),
        "Fourier-type series, single-coefficient form")
    add("binomial_analog", (Param("n", "int"),) + _P("c", "q", "d", "r"),
        lambda cfg, ov, n, c, q, d, r: tr.binomial_analog(n, c, q, d, r, cfg, override=ov),
        _binomial_sum, "sum_k C(n,k) c^k q^{k^2} d^{n-k} r^{(n-k)^2}")
    for i, fn in ((2, sp.theta2), (3, sp.theta3), (4, sp.theta4)):
        add(f"theta{i}", _P("q"), (lambda f: lambda cfg, ov, q: f(q, cfg, override=ov))(fn),
            (lambda k: lambda q: sp.theta_series(k, 0.0, q))(i), f"theta_{i}(0, q)")
    add("theta_deriv", (Param("i", "int"), Param("j", "int"), Param("q")),
        lambda cfg, ov, i, j, q: sp.theta_deriv(i, j, q, cfg, override=ov),
        lambda i, j, q: sp.theta_deriv_series(i, j, q), "d^j/du^j theta_i(u, q) at u = 0")
    add("theta_u", (Param("i", "int"), Param("u", "float"), Param("q")),
        lambda cfg, ov, i, u, q: sp.theta_u(i, u, q, cfg, override=ov),
        lambda i, u, q: sp.theta_series(i, u, q), "theta_i(u, q)")
    add("ramanujan_phi", _P("q"), lambda cfg, ov, q: sp.ramanujan_phi(q, cfg, override=ov),
        lambda q: sp.theta_series(3, 0.0, q), "phi(q)")
    add("ramanujan_psi", _P("q"), lambda cfg, ov, q: sp.ramanujan_psi(q, cfg, override=ov),
        lambda q: _series(Geometric(qpow(q, Fraction(1, 2))), qpow(q, Fraction(1, 2)), 1), "psi(q)")
    add("euler_qp", _P("q"), lambda cfg, ov, q: sp.euler_qp(q, cfg, override=ov),
        lambda q: sp.euler_product(q), "(q; q)_inf, two-integral form")
    add("euler_qp_cubed", _P("q"), lambda cfg, ov, q: sp.euler_qp_cubed(q, cfg, override=ov),
        lambda q: sp.euler_product(q) ** 3, "(q; q)_inf^3")
    add("euler_qp_theta2_form", _P("q"), lambda cfg, ov, q: sp.euler_qp_theta2_form(q, cfg, override=ov),
        lambda q: sp.euler_product(q), "(q; q)_inf via theta_2(pi/6, q^{1/6})")
    add("ramanujan_f", _P("a", "b"), lambda cfg, ov, a, b: sp.ramanujan_f(a, b, cfg, override=ov),
        sp.ramanujan_f_series, "f(a, b)")
    add("zagier_first", _P("q", "z"), lambda cfg, ov, q, z: sp.zagier_rhs(q, z, cfg),
        sp.zagier_lhs, "sum (z; q)_{n+1} z^n")
    add("chromatic_mk", (Param("k", "int"), Param("z")), lambda cfg, ov, k, z: sp.chromatic_mk(k, z, cfg),
        sp.chromatic_series, "(sum z^n / (2^{C(n,2)} n!))^k")
    add("labeled_graph_edges", (Param("kind", "str"), Param("z"), Param("q"), Param("c", "complex", 2**-0.5),
                                Param("r", "complex", 1.0)),
        lambda cfg, ov, kind, z, q, c, r: sp.labeled_graph_edges(kind, z, cfg, q=q, c=c, r=r, override=ov),
        lambda kind, z, q, c, r: 0.25 * _series(
            FallingGeometric(2, c) if kind == "ordinary" else FallingExponential(2, r), q, z),
        "(1/4) sum n(n-1) q^{n^2} ... (q-generic form)")
    add("bilateral_eval", _P("a", "b", "r2", "r1", "r0", kind="rational") + (Param("q"),),
        lambda cfg, ov, a, b, r2, r1, r0, q: sp.bilateral_eval(BilateralSpec(a, b, r2, r1, r0, q), cfg),
        lambda a, b, r2, r1, r0, q: bilateral_direct(BilateralSpec(a, b, r2, r1, r0, q)),
        "sum over Z of (-1)^n (an+b) q^{(r2 n^2 + r1 n + r0)/2}")
    add("mellin_theta", (Param("s", "float"), Param("i", "int")),
        lambda cfg, ov, s, i: sp.mellin_integral(s, i, cfg), sp.mellin_reference,
        "int_0^inf x^{s-1} theta_i(e^{-pi x^2}) dx")
    return e


REGISTRY: dict[str, FunctionEntry] = {entry.name: entry for entry in _entries()}
