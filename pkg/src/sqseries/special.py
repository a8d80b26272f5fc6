"""Named special functions built from the square-series integrals.

Jacobi theta functions use the nome convention

    theta_1(u, q) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) u)
    theta_2(u, q) = 2 sum_{n>=0} q^{(n+1/2)^2} cos((2n+1) u)
    theta_3(u, q) = 1 + 2 sum_{n>=1} q^{n^2} cos(2 n u)
    theta_4(u, q) = 1 + 2 sum_{n>=1} (-1)^n q^{n^2} cos(2 n u)

and ``theta_i(q)`` means ``theta_i(0, q)``.  Functions ending in ``_series``
or ``_product`` are direct-summation oracles and never use quadrature.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DIVERGENT, REGION_OVERRIDE, DomainError, NoConvergence, RegionViolation, UnsupportedOrder
from .quadrature import DEFAULT_CONFIG, EvalResult, QuadratureConfig
from .sequences import (
    BilateralSpec,
    FallingExponential,
    FallingGeometric,
    Geometric,
    bilateral_fold,
    qpow,
    square_series_sum,
)
from .transforms import (
    RegionConstraint,
    is_positive_real,
    _finish,
    _geometric_integral,
    etilde,
    fourier_cos,
    fourier_sin,
    generic_square_integral,
    gsq_pm,
    theta_affine_power,
)

__all__ = [
    "SpecialValueReport",
    "theta2",
    "theta3",
    "theta4",
    "theta_deriv",
    "theta_u",
    "ramanujan_phi",
    "ramanujan_psi",
    "phi_exp_value",
    "psi_exp_value",
    "PHI_CLOSED_FORMS",
    "PSI_CLOSED_FORMS",
    "gamma_ref",
    "euler_qp",
    "euler_qp_cubed",
    "euler_qp_theta2_form",
    "ramanujan_f",
    "mellin_theta",
    "mellin_integral",
    "mellin_reference",
    "zagier_first",
    "zagier_rhs",
    "chromatic_mk",
    "labeled_graph_edges",
    "bilateral_eval",
    "theta_series",
    "theta_deriv_series",
    "euler_product",
    "ramanujan_f_series",
    "chromatic_series",
    "zagier_lhs",
]


@dataclass(frozen=True)
class SpecialValueReport:
    name: str
    computed: complex
    reference: complex
    abs_err: float
    rel_err: float
    within_tol: bool
    tol: float = 1e-8

    @classmethod
    def build(cls, name: str, computed: complex, reference: complex, tol: float) -> "SpecialValueReport":
        abs_err = abs(computed - reference)
        rel_err = abs_err / max(abs(reference), 1e-300)
        return cls(name, complex(computed), complex(reference), abs_err, rel_err, rel_err <= tol, tol)


def _region(ok: bool, message: str, override: bool) -> tuple[str, ...]:
    if ok:
        return ()
    if not override:
        raise RegionViolation(message)
    return (REGION_OVERRIDE,)


def _q_region(q, bound: float, name: str, override: bool) -> tuple[str, ...]:
    if q == 0:
        raise DomainError(f"{name} needs q != 0")
    ok = abs(q) < bound and is_positive_real(q)
    return _region(ok, f"{name} requires real 0 < q < {bound:.6g}, got q = {complex(q):.6g}", override)


# -- Jacobi theta -----------------------------------------------------------


def theta2(q, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``theta_2(q) = 2 q^{1/4} G(q, q, 1)`` for ``0 < |q| < 1/2``."""
    warns = _q_region(q, 0.5, "theta2", override)
    inner = gsq_pm(1, 1, q, 1, 1, cfg, override=override)
    return _finish(2 * qpow(q, Fraction(1, 4)) * inner, warns)


def theta3(q, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``theta_3(q) = 1 + 2 q G(q, q^2, 1)`` for ``0 < |q| < 1/4``."""
    warns = _q_region(q, 0.25, "theta3", override)
    return _finish(1 + 2 * q * gsq_pm(1, 2, q, 1, 1, cfg, override=override), warns)


def theta4(q, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``theta_4(q) = 1 - 2 q G(q, -q^2, 1)`` for ``0 < |q| < 1/4``."""
    warns = _q_region(q, 0.25, "theta4", override)
    return _finish(1 - 2 * q * gsq_pm(1, 2, q, 1, -1, cfg, override=override), warns)


_THETA_BOUND = {1: 0.5, 2: 0.5, 3: 0.25, 4: 0.25}


def _check_index(i: int) -> None:
    if i not in (1, 2, 3, 4):
        raise DomainError("theta index must be 1, 2, 3 or 4")


def theta_deriv(i: int, j: int, q, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``d^j/du^j theta_i(u, q)`` at ``u = 0``.

    Zero (exactly) unless ``j`` is odd for ``i = 1`` or even for ``i = 2, 3, 4``.
    The nonzero cases are affine-power square series:

    * ``theta_1^(j) = (-1)^((j-1)/2) 2 q^{1/4} sum (2n+1)^j q^{n^2} (-q)^n``
    * ``theta_2^(j) = (-1)^(j/2) 2 q^{1/4} sum (2n+1)^j q^{n^2} q^n``
    * ``theta_3^(j) = [j=0] + (-1)^(j/2) 2 q sum (2n+2)^j q^{n^2} (q^2)^n``
    * ``theta_4^(j) = [j=0] - (-1)^(j/2) 2 q sum (2n+2)^j q^{n^2} (-q^2)^n``
    """
    _check_index(i)
    if not 0 <= j <= 15:
        raise UnsupportedOrder("derivative order must lie in 0..15")
    if (i == 1) != (j % 2 == 1):
        return EvalResult(0j, 0.0, 0)
    warns = _q_region(q, _THETA_BOUND[i], f"theta_{i}", override)
    q = complex(q)
    if i in (1, 2):
        sign = (-1) ** ((j - 1) // 2) if i == 1 else (-1) ** (j // 2)
        z = -1 if i == 1 else 1
        series = theta_affine_power(2, 1, j, q, q, z, cfg, override=override)
        out = sign * 2 * qpow(q, Fraction(1, 4)) * series
    else:
        sign = (-1) ** (j // 2)
        z = 1 if i == 3 else -1
        series = theta_affine_power(2, 2, j, q, q * q, z, cfg, override=override)
        out = (1 if j == 0 else 0) + (sign if i == 3 else -sign) * 2 * q * series
    return _finish(out, warns)


def theta_u(i: int, u: float, q, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``theta_i(u, q)`` through Fourier-type square series.

    * ``theta_1 = 2 q^{1/4} F_sin(2u, u; q, q, -1)``
    * ``theta_2 = 2 q^{1/4} F_cos(2u, u; q, q, 1)``
    * ``theta_3 = 1 + 2 q F_cos(2u, 2u; q, q^2, 1)``
    * ``theta_4 = 1 - 2 q F_cos(2u, 2u; q, q^2, -1)``
    """
    _check_index(i)
    if q == 0:
        raise DomainError("theta_u needs q != 0")
    q = complex(q)
    if i == 1:
        return 2 * qpow(q, Fraction(1, 4)) * fourier_sin(2 * u, u, q, q, -1, cfg, override=override)
    if i == 2:
        return 2 * qpow(q, Fraction(1, 4)) * fourier_cos(2 * u, u, q, q, 1, cfg, override=override)
    if i == 3:
        return 1 + 2 * q * fourier_cos(2 * u, 2 * u, q, q * q, 1, cfg, override=override)
    return 1 - 2 * q * fourier_cos(2 * u, 2 * u, q, q * q, -1, cfg, override=override)


def theta_series(i: int, u: float, q, N: int = 60) -> complex:
    """Classical Fourier series for ``theta_i(u, q)`` (oracle)."""
    _check_index(i)
    q = complex(q)
    parts = []
    for n in range(N):
        if i == 1:
            parts.append(2 * (-1) ** n * qpow(q, Fraction((2 * n + 1) ** 2, 4)) * math.sin((2 * n + 1) * u))
        elif i == 2:
            parts.append(2 * qpow(q, Fraction((2 * n + 1) ** 2, 4)) * math.cos((2 * n + 1) * u))
        elif n >= 1:
            s = 1 if i == 3 else (-1) ** n
            parts.append(2 * s * qpow(q, n * n) * math.cos(2 * n * u))
    total = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    return total + (1 if i in (3, 4) else 0)


def theta_deriv_series(i: int, j: int, q, N: int = 60) -> complex:
    """Term-wise ``j``-th ``u``-derivative of :func:`theta_series` at ``u = 0`` (oracle)."""
    _check_index(i)
    q = complex(q)
    parts = []
    for n in range(N):
        if i in (1, 2):
            k = 2 * n + 1
            trig = math.sin(j * math.pi / 2) if i == 1 else math.cos(j * math.pi / 2)
            s = (-1) ** n if i == 1 else 1
            parts.append(2 * s * qpow(q, Fraction(k * k, 4)) * k**j * round(trig))
        elif n >= 1:
            k = 2 * n
            s = 1 if i == 3 else (-1) ** n
            parts.append(2 * s * qpow(q, n * n) * k**j * round(math.cos(j * math.pi / 2)))
    total = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    return total + (1 if i in (3, 4) and j == 0 else 0)


# -- Ramanujan phi and psi --------------------------------------------------


def ramanujan_phi(q, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``phi(q) = 1 + 2 q G(q, q^2, 1)``."""
    warns = _q_region(q, 1.0, "phi", override)
    return _finish(1 + 2 * q * gsq_pm(1, 2, q, 1, 1, cfg, override=override), warns)


def ramanujan_psi(q, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``psi(q) = G(sqrt q, sqrt q, 1) = sum q^{n(n+1)/2}``."""
    warns = _q_region(q, 1.0, "psi", override)
    return _finish(gsq_pm(Fraction(1, 2), Fraction(1, 2), q, 1, 1, cfg, override=override), warns)


def gamma_ref(x: float) -> float:
    """Gamma function on ``0 < x <= 10`` (backed by :func:`math.gamma`)."""
    if not 0 < x <= 10:
        raise DomainError("gamma_ref supports 0 < x <= 10")
    return math.gamma(x)


def _phi_base() -> float:
    return math.pi**0.25 / gamma_ref(0.75)


PHI_CLOSED_FORMS = {
    1: lambda: _phi_base(),
    2: lambda: _phi_base() * math.sqrt(math.sqrt(2) + 2) / 2,
    3: lambda: _phi_base() * math.sqrt(math.sqrt(3) + 1) / (2**0.25 * 3**0.375),
    5: lambda: _phi_base() * math.sqrt(5 + 2 * math.sqrt(5)) / 5**0.75,
}

PSI_CLOSED_FORMS = {
    1.0: lambda: _phi_base() * math.exp(math.pi / 8) / 2**0.625,
    2.0: lambda: _phi_base() * math.exp(math.pi / 4) / 2**1.25,
    0.5: lambda: _phi_base() * (math.sqrt(2) + 1) ** 0.25 * math.exp(math.pi / 16) / 2**0.4375,
}


def phi_exp_value(k: float, cfg: QuadratureConfig = DEFAULT_CONFIG, tol: float = 1e-8) -> SpecialValueReport:
    """Compare ``phi(e^{-k pi})`` from the integral with its closed form (or series)."""
    if not k > 0:
        raise DomainError("k must be positive")
    q = math.exp(-k * math.pi)
    computed = ramanujan_phi(q, cfg).value
    if k in PHI_CLOSED_FORMS:
        ref, label = PHI_CLOSED_FORMS[k](), "closed form"
    else:
        ref, label = 2 * square_series_sum(Geometric(1.0), q, 1).value - 1, "series"
    return SpecialValueReport.build(f"phi(exp(-{k:g} pi)) [{label}]", computed, ref, tol)


def psi_exp_value(k: float, cfg: QuadratureConfig = DEFAULT_CONFIG, tol: float = 1e-8) -> SpecialValueReport:
    """Compare ``psi(e^{-k pi})`` from the integral with its closed form (or series)."""
    if not k > 0:
        raise DomainError("k must be positive")
    q = math.exp(-k * math.pi)
    computed = ramanujan_psi(q, cfg).value
    if float(k) in PSI_CLOSED_FORMS:
        ref, label = PSI_CLOSED_FORMS[float(k)](), "closed form"
    else:
        sq = math.sqrt(q)
        ref, label = square_series_sum(Geometric(sq), sq, 1).value, "series"
    return SpecialValueReport.build(f"psi(exp(-{k:g} pi)) [{label}]", computed, ref, tol)


# -- Euler function ---------------------------------------------------------


def euler_product(q, N: int = 200) -> complex:
    """``prod_{n=1}^{N} (1 - q^n)`` (oracle)."""
    out = 1.0 + 0j
    for n in range(1, N + 1):
        out *= 1 - complex(q) ** n
    return out


def euler_qp(q, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``(q)_inf = 1 - q G(q^{3/2}, -q^{5/2}) - q^2 G(q^{3/2}, -q^{7/2})`` for ``0 < |q| < 1/9``."""
    warns = _q_region(q, 1 / 9, "euler_qp", override)
    q = complex(q)
    w = cmath.sqrt(3 * cmath.log(q))
    first = _geometric_integral(w, -qpow(q, Fraction(5, 2)), 0, 1, cfg)
    second = _geometric_integral(w, -qpow(q, Fraction(7, 2)), 0, 1, cfg)
    return _finish(1 - q * first - q * q * second, warns)


def euler_qp_cubed(q, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``(q)_inf^3 = 1 - q sum (2n+3) (q^{1/2})^{n^2} (-q^{3/2})^n`` for ``0 < |q| < 2^{-2/3}``."""
    warns = _q_region(q, 2 ** (-2 / 3), "euler_qp_cubed", override)
    q = complex(q)
    w = cmath.sqrt(cmath.log(q))
    inner = _geometric_integral(w, -qpow(q, Fraction(3, 2)), 2, 3, cfg)
    return _finish(1 - q * inner, warns)


def euler_qp_theta2_form(q, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``(q)_inf = (2/sqrt 3) sum q^{n(n+1)/6} cos((2n+1) pi/6)`` as a Fourier-type integral."""
    warns = _q_region(q, 1.0, "euler_qp_theta2_form", override)
    q6 = qpow(complex(q), Fraction(1, 6))
    inner = fourier_cos(math.pi / 3, math.pi / 6, q6, q6, 1, cfg, override=override)
    return _finish((2 / math.sqrt(3)) * inner, warns)


# -- two-variable theta -----------------------------------------------------


def ramanujan_f(a, b, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``f(a, b) = 1 + a G(sqrt(ab), a sqrt(ab), 1) + b G(sqrt(ab), b sqrt(ab), 1)``."""
    a, b = complex(a), complex(b)
    if a == 0 or b == 0:
        raise DomainError("ramanujan_f needs a != 0 and b != 0")
    ab = a * b
    root = cmath.sqrt(ab)
    ok = is_positive_real(ab) and abs(ab) < 1 and abs(a * root) < 1 - 1e-9 and abs(b * root) < 1 - 1e-9
    warns = _region(ok, "ramanujan_f requires real 0 < ab < 1, |a sqrt(ab)| < 1, |b sqrt(ab)| < 1", override)
    w = cmath.sqrt(cmath.log(ab))
    out = 1 + a * _geometric_integral(w, a * root, 0, 1, cfg) + b * _geometric_integral(w, b * root, 0, 1, cfg)
    return _finish(out, warns)


def ramanujan_f_series(a, b, N: int = 200) -> complex:
    """Two-sided sum of ``a^{n(n+1)/2} b^{n(n-1)/2}`` over ``|n| <= N`` (oracle)."""
    a, b = complex(a), complex(b)
    parts = []
    for n in range(-N, N + 1):
        ea, eb = n * (n + 1) // 2, n * (n - 1) // 2
        try:
            parts.append(a**ea * b**eb)
        except OverflowError:
            continue
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


# -- Mellin transforms ------------------------------------------------------


def _zeta(s: float) -> float:
    even = {4: math.pi**4 / 90, 6: math.pi**6 / 945, 8: math.pi**8 / 9450}
    if s in even:
        return even[s]
    # partial sum with an Euler-Maclaurin tail
    N = 64
    head = math.fsum(n**-s for n in range(1, N))
    tail = N ** (1 - s) / (s - 1) + 0.5 * N**-s + s * N ** (-s - 1) / 12 - s * (s + 1) * (s + 2) * N ** (-s - 3) / 720
    return head + tail


def mellin_reference(s: float, i: int) -> float:
    """Closed form of ``int_0^inf x^{s-1} theta_i(e^{-pi x^2}) dx`` (``theta_3 - 1``, ``1 - theta_4``)."""
    if i not in (2, 3, 4):
        raise DomainError("i must be 2, 3 or 4")
    base = math.pi ** (-s / 2) * math.gamma(s / 2) * _zeta(s)
    return {2: 2**s - 1, 3: 1.0, 4: 1 - 2 ** (1 - s)}[i] * base


def _mellin_inner(i: int, x: float, cfg: QuadratureConfig) -> EvalResult:
    q = math.exp(-math.pi * x * x)
    w = 1j * math.sqrt(2 * math.pi) * x
    if i == 2:
        return 2 * q**0.25 * _geometric_integral(w, q, 0, 1, cfg)
    if i == 3:
        return 2 * q * _geometric_integral(w, q * q, 0, 1, cfg)
    return 2 * q * _geometric_integral(w, -q * q, 0, 1, cfg)


def mellin_integral(
    s: float, i: int, cfg: QuadratureConfig = DEFAULT_CONFIG, budget_s: float = 30.0
) -> EvalResult:
    """Mellin transform of ``theta_i(0 | i x^2)`` as an (x, t) double integral.

    The inner ``t`` integral is the theta kernel at ``q = exp(-pi x^2)``; the
    outer ``x`` integral is composite Gauss-Legendre with panel doubling.
    Below ``x_lo`` the theta value is replaced by its leading small-``x``
    behaviour (``1/x`` for ``theta_2``, ``1/x - 1`` for ``theta_3 - 1``, ``1``
    for ``1 - theta_4``), which is exact up to ``O(exp(-pi / (4 x^2)) / x)``.
    """
    if not s > 2:
        raise DomainError("s must exceed 2")
    if i not in (2, 3, 4):
        raise DomainError("i must be 2, 3 or 4")
    start = time.monotonic()
    inner_cfg = cfg.with_(abs_tol=1e-13, rel_tol=1e-12)
    x_lo = 0.14
    if i == 2:
        head = x_lo ** (s - 1) / (s - 1)
    elif i == 3:
        head = x_lo ** (s - 1) / (s - 1) - x_lo**s / s
    else:
        head = x_lo**s / s
    kappa = 0.25 if i == 2 else 1.0
    x_hi = 1.0
    while (s - 1) * math.log(x_hi) + math.log(2) - kappa * math.pi * x_hi * x_hi > math.log(1e-18):
        x_hi += 0.25
    xg, wg = np.polynomial.legendre.leggauss(16)
    previous = None
    panels = 4
    nodes = 0
    while True:
        edges = np.linspace(x_lo, x_hi, panels + 1)
        total = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            xs = 0.5 * (hi - lo) * (xg + 1) + lo
            for x, wt in zip(xs, 0.5 * (hi - lo) * wg):
                inner = _mellin_inner(i, x, inner_cfg)
                nodes += inner.nodes_used
                total.append(wt * x ** (s - 1) * inner.value.real)
                if time.monotonic() - start > budget_s:
                    raise NoConvergence(f"Mellin transform exceeded {budget_s} s budget")
        value = head + math.fsum(total)
        if previous is not None and abs(value - previous) <= 1e-10 * abs(value):
            return EvalResult(complex(value), abs(value - previous), nodes, True)
        previous = value
        panels *= 2
        if panels > 512:
            raise NoConvergence("Mellin outer integral did not converge", value, abs(value - previous))


def mellin_theta(
    s: float, i: int, cfg: QuadratureConfig = DEFAULT_CONFIG, tol: float = 1e-4, budget_s: float = 30.0
) -> SpecialValueReport:
    """Report comparing :func:`mellin_integral` with the Gamma-zeta closed form."""
    value = mellin_integral(s, i, cfg, budget_s).value
    return SpecialValueReport.build(f"Mellin theta_{i} at s={s:g}", value, mellin_reference(s, i), tol)


# -- Zagier, chromatic, labeled graphs, bilateral ---------------------------


def zagier_lhs(q, z, tol: float = 1e-17, n_cap: int = 200_000) -> complex:
    """``sum_{n>=0} (z; q)_{n+1} z^n`` for ``|z| < 1``; the ``z -> 1`` limit ``(q)_inf`` at ``z = 1``."""
    q, z = complex(q), complex(z)
    if z == 1:
        return euler_product(q, 400)
    if not abs(z) < 1:
        raise RegionViolation("the left-hand side needs |z| < 1 (or z = 1 as a limit)")
    poch = 1 - z
    zn = 1.0 + 0j
    parts = [poch]
    for n in range(1, n_cap):
        poch *= 1 - z * q**n
        zn *= z
        t = poch * zn
        parts.append(t)
        if abs(t) < tol:
            break
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def zagier_rhs(q, z, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """``1 - q z^2 G(q^{3/2}, -q^{5/2} z^3) - q^2 z^3 G(q^{3/2}, -q^{7/2} z^3)`` with ``w = sqrt(3 Log q)``."""
    q, z = complex(q), complex(z)
    if not (is_positive_real(q) and abs(q) < 1):
        raise RegionViolation("zagier_first requires real 0 < q < 1")
    if abs(z) > 1 + 1e-15:
        raise RegionViolation("zagier_first requires |z| <= 1")
    w = cmath.sqrt(3 * cmath.log(q))
    z3 = z**3
    return (
        1
        - q * z * z * _geometric_integral(w, -qpow(q, Fraction(5, 2)) * z3, 0, 1, cfg)
        - q * q * z3 * _geometric_integral(w, -qpow(q, Fraction(7, 2)) * z3, 0, 1, cfg)
    )


def zagier_first(q, z, cfg: QuadratureConfig = DEFAULT_CONFIG, tol: float = 1e-7) -> SpecialValueReport:
    """Compare the integral side of the identity with ``sum (z;q)_{n+1} z^n``."""
    rhs = zagier_rhs(q, z, cfg)
    lhs = zagier_lhs(q, z)
    q, z = complex(q), complex(z)
    return SpecialValueReport.build(f"zagier q={q.real:g} z={z.real:g}", rhs.value, lhs, tol)


def chromatic_series(k: int, z, N: int = 60) -> complex:
    """``(sum_n z^n / (2^{C(n,2)} n!))^k`` via Cauchy products of truncated coefficients (oracle)."""
    base = [math.exp(-(n * (n - 1) / 2) * math.log(2) - math.lgamma(n + 1)) for n in range(N)]
    coeffs = [1.0] + [0.0] * (N - 1)
    for _ in range(k):
        coeffs = [math.fsum(coeffs[i] * base[n - i] for i in range(n + 1)) for n in range(N)]
    z = complex(z)
    return sum(c * z**n for n, c in enumerate(coeffs))


def chromatic_mk(k: int, z, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """``M_k(z) = (sum_n z^n / (2^{C(n,2)} n!))^k`` as the ``k``-th power of one integral."""
    if not 1 <= k <= 8:
        raise DomainError("k must lie in 1..8")
    if abs(z) > 4:
        raise DomainError("chromatic_mk supports |z| <= 4")
    return etilde(0.5, 1, z, cfg) ** k


def _edges_partial_sum(kind: str, z: complex) -> EvalResult:
    """Partial sums of the divergent series with ``e(n) = n(n-1) 2^{n(n-1)/2} / 4``."""
    parts = []
    logz = math.log(abs(z))
    for n in range(2, 400):
        log_mag = math.log(n * (n - 1) / 4) + n * (n - 1) / 2 * math.log(2) + n * logz
        if kind == "exponential":
            log_mag -= math.lgamma(n + 1)
        if log_mag > 690:
            break
        parts.append(cmath.exp(log_mag) * cmath.exp(1j * n * cmath.phase(z)))
    value = sum(parts)
    return EvalResult(value, math.inf, len(parts), False, (DIVERGENT,))


def labeled_graph_edges(
    kind: str,
    z,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    *,
    q=None,
    c=2**-0.5,
    r=1.0,
    override: bool = False,
) -> EvalResult:
    """Edge-count generating functions for labeled graphs.

    With ``q=None`` the coefficients are ``e(n) = n(n-1) 2^{n(n-1)/2} / 4``,
    i.e. ``q = sqrt 2`` outside every convergence region: the series
    diverges for ``z != 0`` and a flagged partial sum is returned.  With
    ``|q| < 1`` the generic forms ``(1/4) sum n(n-1) q^{n^2} (cz)^n`` and
    ``(1/4) sum n(n-1) q^{n^2} (rz)^n / n!`` are evaluated by the integral.
    """
    if kind not in ("ordinary", "exponential"):
        raise DomainError("kind must be 'ordinary' or 'exponential'")
    z = complex(z)
    if q is None:
        if z == 0:
            return EvalResult(0j, 0.0, 0)
        return _edges_partial_sum(kind, z)
    seq = FallingGeometric(2, c) if kind == "ordinary" else FallingExponential(2, r)
    if kind == "ordinary":
        RegionConstraint().check(q, complex(c) * z, override=override)
    return 0.25 * generic_square_integral(seq, q, z, cfg, override=override)


def bilateral_eval(spec: BilateralSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """Bilateral sum via folding into two affine square series, each evaluated by its integral.

    Leading terms are moved into a finite head when needed so that each
    folded half has geometric ratio inside the unit disk.
    """
    q = spec.q
    if q == 0:
        return EvalResult(qpow(0, spec.r0 / 2) * complex(spec.b), 0.0, 0)
    if not is_positive_real(q):
        raise RegionViolation("bilateral_eval requires a positive real q")
    fold = bilateral_fold(spec, into_disk=True)
    w = cmath.sqrt(float(spec.r2) * cmath.log(q))
    out = EvalResult(fold.head, 0.0, 0)
    for half in fold.halves:
        kind = half.kind
        out = out + half.prefactor * _geometric_integral(w, complex(kind.c), complex(kind.a), complex(kind.b), cfg)
    return out
