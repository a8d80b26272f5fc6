"""Gaussian-kernel integral representations of square series.

The common mechanism: for ``W = sqrt(2 Log q)`` and ``phi`` the standard
normal density,

    sum_n f_n q^{n^2} z^n = int_0^inf phi(t) sum_{b=+-1} F(e^{b t W} z) dt,

where ``F`` is the ordinary generating function of ``f_n``.  For real
``q`` in ``(0, 1)`` the factor ``e^{b t W}`` is unimodular and ``cosh(t W)``
reduces to ``cos(t sqrt(2 |log q|))``.

Every public function returns an :class:`~sqseries.quadrature.EvalResult`.
Inputs outside a formula's region raise :class:`RegionViolation` unless
``override=True``, in which case the result carries ``REGION_OVERRIDE`` and
``converged=False``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import (
    NEAR_POLE,
    REGION_OVERRIDE,
    DegenerateAlpha,
    DomainError,
    RegionViolation,
    UnsupportedOrder,
)
from .quadrature import DEFAULT_CONFIG, EvalResult, QuadratureConfig, gauss_double, gauss_halfline
from .sequences import SequenceKind, qpow
from .stirling import stirling2_row

__all__ = [
    "MARGIN",
    "RegionConstraint",
    "is_positive_real",
    "SqrtLogBranch",
    "generic_square_integral",
    "taylor_square_integral",
    "gsq",
    "gsq_w",
    "theta_shifted",
    "qab",
    "gsq_pm",
    "numerator_poly",
    "numerator_table",
    "theta_poly_power",
    "theta_affine_power",
    "esq",
    "etilde",
    "fourier_cos",
    "fourier_sin",
    "fourier_compact",
    "binomial_analog",
]

MARGIN = 1e-9
_POLE_TOL = 1e-9


@dataclass(frozen=True)
class RegionConstraint:
    """Bounds checked before an integral is evaluated.

    ``q_abs_max`` bounds ``|q|`` (exclusive) and ``cz_abs_max`` bounds the
    effective geometric ratio (exclusive, with :data:`MARGIN`).  ``extra``
    is a human-readable description of any further condition.
    """

    q_abs_max: float = 1.0
    cz_abs_max: float = 1.0
    extra: str = ""
    real_q: bool = True

    def check(self, q: complex | None = None, cz=(), *, override: bool = False) -> tuple[str, ...]:
        problems = []
        if q is not None:
            if q == 0:
                raise DomainError("q = 0 has no logarithm; the series reduces to f_0")
            if not abs(q) < self.q_abs_max:
                problems.append(f"|q| = {abs(q):.6g} not below {self.q_abs_max:.6g}")
            if self.real_q and not is_positive_real(q):
                problems.append(f"q = {complex(q):.6g} is not a positive real")
        for x in np.atleast_1d(cz):
            if not abs(x) < self.cz_abs_max - MARGIN:
                problems.append(f"|cz| = {abs(x):.6g} not below {self.cz_abs_max:.6g}")
        if not problems:
            return ()
        msg = "; ".join(problems) + (f" ({self.extra})" if self.extra else "")
        if not override:
            raise RegionViolation(msg)
        return (REGION_OVERRIDE,)


UNIT = RegionConstraint()


def is_positive_real(q) -> bool:
    """True when ``sqrt(2 Log q)`` is purely imaginary (or zero).

    For other ``q`` the kernel poles in ``t`` cross the real line and the
    integrals pick up residue terms, so they no longer equal the series.
    """
    q = complex(q)
    return q.imag == 0 and q.real > 0


@dataclass(frozen=True)
class SqrtLogBranch:
    """Principal ``w = sqrt(scale * Log q)``; ``scale=2`` is the usual case."""

    q: complex
    scale: float = 2.0

    @property
    def w(self) -> complex:
        if self.q == 0:
            raise DomainError("Log 0 is undefined")
        return cmath.sqrt(self.scale * cmath.log(self.q))


def _w(q: complex, scale: float = 2.0) -> complex:
    return SqrtLogBranch(complex(q), scale).w


def _cosh(t: np.ndarray, w: complex) -> np.ndarray:
    if w.real == 0.0:
        return np.cos(t * w.imag)
    return np.cosh(t * w)


def _exp(t: np.ndarray, w: complex) -> np.ndarray:
    if w.real == 0.0:
        return np.exp(1j * (t * w.imag))
    return np.exp(t * w)


def _finish(res: EvalResult, warnings: tuple[str, ...]) -> EvalResult:
    if not warnings:
        return res
    return res.with_warnings(*warnings, converged=False if REGION_OVERRIDE in warnings else None)


def _pole_warnings(w: complex, ys, cfg: QuadratureConfig) -> tuple[str, ...]:
    """Scan ``|y^2 - 2 y cosh(t w) + 1|`` on a fine grid for near-zeros."""
    t = np.linspace(0.0, cfg.cutoff, 4001)
    C = _cosh(t, w)
    for y in np.atleast_1d(ys):
        if np.min(np.abs(y * y - 2 * y * C + 1)) < _POLE_TOL:
            return (NEAR_POLE,)
    return ()


# -- generic transform ------------------------------------------------------


def _as_provider(provider) -> Callable[[np.ndarray], np.ndarray]:
    fn = provider.ogf if isinstance(provider, SequenceKind) else provider

    def call(x: np.ndarray) -> np.ndarray:
        try:
            out = np.asarray(fn(x), dtype=complex)
            if out.shape == x.shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.array([complex(fn(complex(v))) for v in x.ravel()]).reshape(x.shape)

    return call


def generic_square_integral(
    provider, q: complex, z: complex, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False
) -> EvalResult:
    """``int_0^inf phi(t) sum_b F(e^{b t W} z) dt`` for an OGF provider ``F``.

    ``provider`` is a :class:`SequenceKind` (its ``ogf`` is used) or any
    callable ``z -> F(z)``, preferably vectorized.
    """
    warns = UNIT.check(q, override=override)
    w = _w(q)
    F = _as_provider(provider)
    z = complex(z)

    def integrand(t):
        e = _exp(t, w)
        return F(e * z) + F(z / e)

    return _finish(gauss_halfline(integrand, cfg), warns)


def taylor_square_integral(
    kind: SequenceKind, q: complex, z: complex, j_max: int = 12, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> EvalResult:
    """Truncated first form of the transform (diagnostic).

    Integrates ``sum_b sum_{j<=j_max} z^j F^(j)(z) / j! (e^{b t W} - 1)^j``.
    Only accurate when the Taylor expansion of ``F`` about ``z`` converges
    fast on the circle ``|z'| = |z|``.
    """
    if not 0 <= j_max <= 12:
        raise UnsupportedOrder("j_max must lie in 0..12")
    UNIT.check(q)
    w = _w(q)
    z = complex(z)
    coeffs = [z**j * complex(kind.ogf_deriv(z, j)) / math.factorial(j) for j in range(j_max + 1)]

    def integrand(t):
        total = np.zeros_like(t, dtype=complex)
        for e in (_exp(t, w), _exp(t, -w)):
            total += np.polynomial.polynomial.polyval(e - 1, coeffs)
        return total

    return gauss_halfline(integrand, cfg)


# -- geometric family -------------------------------------------------------


def _geometric_integral(
    w: complex, y: complex, a: complex, b: complex, cfg: QuadratureConfig
) -> EvalResult:
    """``sum (a n + b) Q^{n^2} y^n`` with ``w = sqrt(2 Log Q)``."""
    y = complex(y)
    if y == 0:
        # only the n = 0 term survives
        return EvalResult(complex(b), 0.0, 0)

    def integrand(t):
        C = _cosh(t, w)
        D = y * y - 2 * y * C + 1
        out = 2 * b * (1 - y * C) / D
        if a != 0:
            out = out + 2 * a * y * ((y * y + 1) * C - 2 * y) / (D * D)
        return out

    return _finish(gauss_halfline(integrand, cfg), _pole_warnings(w, y, cfg))


def gsq(q, c, z, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """Geometric square series ``sum_n q^{n^2} (cz)^n``.

    Examples
    --------
    >>> round(gsq(0.2, 0.5, 1).real, 10)
    1.100400064
    """
    y = complex(c) * complex(z)
    warns = UNIT.check(q, y, override=override)
    return _finish(_geometric_integral(_w(q), y, 0, 1, cfg), warns)


def gsq_w(w: complex, y: complex, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """Geometric kernel with an explicit ``w = sqrt(2 Log Q)``; no region checks.

    Useful when ``Q`` is a fractional power such as ``q^{3/2}`` and the
    branch should follow ``sqrt(3 Log q)`` rather than ``Log(q^{3/2})``.
    """
    return _geometric_integral(complex(w), y, 0, 1, cfg)


def theta_shifted(d: int, q, c, z, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """Tail ``sum_{n>=d} q^{n^2} (cz)^n`` as ``(q^d cz)^d G(q, q^{2d} c, z)``."""
    if d < 1:
        raise DomainError("d must be a positive integer")
    y = complex(c) * complex(z)
    limit = abs(q) ** (-2 * d) if q != 0 else 1.0
    warns = RegionConstraint(cz_abs_max=limit, extra="|q^(2d) cz| < 1").check(q, y, override=override)
    qd = qpow(q, d)
    pre = (qd * y) ** d
    if pre == 0:
        return _finish(EvalResult(0j, 0.0, 0), warns)
    inner = _geometric_integral(_w(q), qd * qd * y, 0, 1, cfg)
    return _finish(pre * inner, warns)


def qab(a, b, q, c, z, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """Affine geometric square series ``sum_n (a n + b) q^{n^2} (cz)^n``."""
    y = complex(c) * complex(z)
    warns = UNIT.check(q, y, override=override)
    return _finish(_geometric_integral(_w(q), y, complex(a), complex(b), cfg), warns)


def gsq_pm(p, m, q, c, sign: int = 1, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``G(p, m; q, +-c) = sum_n (q^p)^{n^2} (+-c q^m)^n``.

    The kernel uses ``w = sqrt(2 p Log q)`` so fractional ``p`` follows the
    principal branch of ``Log q``.
    """
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if q == 0:
        raise DomainError("q = 0 has no logarithm")
    p, m = Fraction(p), Fraction(m)
    if p <= 0:
        raise DomainError("p must be positive")
    qp = qpow(q, p)
    y = sign * complex(c) * qpow(q, m)
    warns = RegionConstraint(extra="|q^p| < 1 and |q^m c| < 1").check(qp, y, override=override)
    w = cmath.sqrt(2 * float(p) * cmath.log(q))
    return _finish(_geometric_integral(w, y, 0, 1, cfg), warns)


_PRECISION = {"double": (np.complex128, np.float64), "extended": (np.clongdouble, np.longdouble)}


def _cast(x, precision: str):
    try:
        ctype, rtype = _PRECISION[precision]
    except KeyError:
        raise ValueError(f"precision must be one of {sorted(_PRECISION)}") from None
    x = np.asarray(x)
    return x.astype(rtype if np.isrealobj(x) else ctype)


def _unbox(out: np.ndarray):
    if out.ndim:
        return out
    return complex(out) if np.iscomplexobj(out) else float(out)


def numerator_poly(k: int, w, y, precision: str = "double"):
    """``Num_k(w, y) = sum_{b=+-1} e^{-b k w} (1 - e^{b w} y)^{k+1}``.

    Vectorized over ``w`` and ``y``.  ``precision="extended"`` evaluates in
    the platform long double (64-bit mantissa on x86), which keeps the two
    large cancelling terms accurate for real ``w`` of moderate size.
    """
    if not 0 <= k <= 43:
        raise UnsupportedOrder("numerator_poly supports 0 <= k <= 43")
    w = _cast(w, precision)
    y = _cast(y, precision)
    ep = np.exp(w)
    em = np.exp(-w)
    out = em**k * (1 - ep * y) ** (k + 1) + ep**k * (1 - em * y) ** (k + 1)
    if precision == "double" and np.isrealobj(out):
        out = out.astype(complex)
    return _unbox(out)


def numerator_table(k: int, s, y, precision: str = "double"):
    """Half of ``Num_k(s, y)`` as an explicit cosh polynomial, ``0 <= k <= 4``."""
    if not 0 <= k <= 4:
        raise UnsupportedOrder("numerator_table lists 0 <= k <= 4")
    s = _cast(s, precision)
    y = _cast(y, precision)
    c1, c2, c3, c4 = (np.cosh(j * s) for j in range(1, 5))
    rows = (
        lambda: 1 - y * c1,
        lambda: -2 * y + (y**2 + 1) * c1,
        lambda: 3 * y**2 - (y**3 + 3 * y) * c1 + c2,
        lambda: -4 * y**3 + (y**4 + 6 * y**2) * c1 - 4 * y * c2 + c3,
        lambda: 5 * y**4 - (y**5 + 10 * y**3) * c1 + 10 * y**2 * c2 - 5 * y * c3 + c4,
    )
    return _unbox(np.asarray(rows[k]()))


def _power_kernel_integral(weights: list[complex], w: complex, y: complex, cfg: QuadratureConfig) -> EvalResult:
    """``int phi sum_k weights[k] y^k Num_k(t w, y) / D^{k+1}``."""

    def integrand(t):
        tw = t * w
        C = _cosh(t, w)
        D = y * y - 2 * y * C + 1
        total = np.zeros_like(t, dtype=complex)
        for k, wk in enumerate(weights):
            if wk != 0:
                total += wk * y**k * numerator_poly(k, tw, y) / D ** (k + 1)
        return total

    return _finish(gauss_halfline(integrand, cfg), _pole_warnings(w, y, cfg))


def theta_poly_power(m: int, q, c, z, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``theta_{0,m}(q, c, z) = sum_n n^m q^{n^2} (cz)^n`` via Stirling-weighted kernels."""
    if not 0 <= m <= 20:
        raise UnsupportedOrder("m must lie in 0..20")
    y = complex(c) * complex(z)
    warns = UNIT.check(q, y, override=override)
    row = stirling2_row(m)
    weights = [complex(row[k] * math.factorial(k)) for k in range(m + 1)]
    if y == 0:
        return _finish(EvalResult(complex(weights[0]), 0.0, 0), warns)
    return _finish(_power_kernel_integral(weights, _w(q), y, cfg), warns)


def _exact(x) -> tuple[Fraction, Fraction]:
    x = complex(x)
    return Fraction(x.real), Fraction(x.imag)


def _cmul(u, v):
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _affine_weights(alpha, beta, m: int) -> list[complex]:
    """Forward differences ``sum_i C(k,i) (-1)^{k-i} (alpha i + beta)^m`` in exact arithmetic."""
    a, b = _exact(alpha), _exact(beta)
    powers = []
    for i in range(m + 1):
        base = (a[0] * i + b[0], a[1] * i + b[1])
        acc = (Fraction(1), Fraction(0))
        for _ in range(m):
            acc = _cmul(acc, base)
        powers.append(acc)
    out = []
    for k in range(m + 1):
        re = sum(math.comb(k, i) * (-1) ** (k - i) * powers[i][0] for i in range(k + 1))
        im = sum(math.comb(k, i) * (-1) ** (k - i) * powers[i][1] for i in range(k + 1))
        out.append(complex(float(re), float(im)))
    return out


def theta_affine_power(
    alpha, beta, m: int, q, c, z, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False
) -> EvalResult:
    """``sum_n (alpha n + beta)^m q^{n^2} (cz)^n`` via the double binomial sum of kernels."""
    if not 0 <= m <= 20:
        raise UnsupportedOrder("m must lie in 0..20")
    y = complex(c) * complex(z)
    warns = UNIT.check(q, y, override=override)
    weights = _affine_weights(alpha, beta, m)
    if y == 0:
        return _finish(EvalResult(weights[0], 0.0, 0), warns)
    return _finish(_power_kernel_integral(weights, _w(q), y, cfg), warns)


# -- exponential family -----------------------------------------------------

_EXP_REGION = RegionConstraint(q_abs_max=1.0 + 1e-15, extra="|q| <= 1")


def _exp_integral(w: complex, x: complex, cfg: QuadratureConfig) -> EvalResult:
    def integrand(t):
        e = _exp(t, w)
        return np.exp(e * x) + np.exp(x / e)

    return gauss_halfline(integrand, cfg)


def esq(q, r, z, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """Exponential square series ``sum_n q^{n^2} (rz)^n / n!``."""
    warns = _EXP_REGION.check(q, override=override)
    return _finish(_exp_integral(_w(q), complex(r) * complex(z), cfg), warns)


def etilde(q, r, z, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """Binomial-exponent variant ``sum_n q^{n(n-1)/2} (rz)^n / n!``.

    Uses ``w = sqrt(Log q)`` and the argument ``rz / sqrt(q)``.
    """
    warns = _EXP_REGION.check(q, override=override)
    x = complex(r) * complex(z) / cmath.sqrt(q)
    return _finish(_exp_integral(_w(q, 1.0), x, cfg), warns)


# -- Fourier type -----------------------------------------------------------


def _half_kernel_sum(pairs: list[tuple[complex, complex]], w: complex, cfg: QuadratureConfig) -> EvalResult:
    """``int phi sum_(coef, Y) coef (1 - Y cosh) / (Y^2 - 2 Y cosh + 1)``."""

    def integrand(t):
        C = _cosh(t, w)
        total = np.zeros_like(t, dtype=complex)
        for coef, Y in pairs:
            total += coef * (1 - Y * C) / (Y * Y - 2 * Y * C + 1)
        return total

    return _finish(gauss_halfline(integrand, cfg), _pole_warnings(w, [Y for _, Y in pairs], cfg))


def _fourier(which: str, alpha, beta, q, c, z, cfg, override) -> EvalResult:
    y = complex(c) * complex(z)
    warns = UNIT.check(q, y, override=override)
    u = cmath.exp(1j * alpha)
    eb = cmath.exp(1j * beta)
    if which == "cos":
        pairs = [(eb, u * y), (1 / eb, y / u)]
    else:
        pairs = [(eb / 1j, u * y), (-1 / (eb * 1j), y / u)]
    return _finish(_half_kernel_sum(pairs, _w(q), cfg), warns)


def fourier_cos(alpha: float, beta: float, q, c, z, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``sum_n q^{n^2} cos(alpha n + beta) (cz)^n``."""
    return _fourier("cos", alpha, beta, q, c, z, cfg, override)


def fourier_sin(alpha: float, beta: float, q, c, z, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``sum_n q^{n^2} sin(alpha n + beta) (cz)^n``."""
    return _fourier("sin", alpha, beta, q, c, z, cfg, override)


def fourier_compact(
    which: str, alpha: float, beta: float, q, c, z, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False
) -> EvalResult:
    """Fourier-type series through the single-coefficient form.

    The weight on the ``e^{b i alpha}`` kernel is
    ``2 b e^{i alpha} (e^{b i alpha} sc(beta) - sc(beta - alpha)) / (e^{2 i alpha} - 1)``
    with ``sc`` the cosine or sine.
    """
    if which not in ("cos", "sin"):
        raise DomainError("which must be 'cos' or 'sin'")
    denom = cmath.exp(2j * alpha) - 1
    if abs(denom) < 1e-8:
        raise DegenerateAlpha("exp(2i alpha) = 1; use the two-term form")
    y = complex(c) * complex(z)
    warns = UNIT.check(q, y, override=override)
    sc = math.cos if which == "cos" else math.sin
    ea = cmath.exp(1j * alpha)
    pairs = []
    for b in (1, -1):
        eba = cmath.exp(1j * b * alpha)
        coef = 2 * b * ea * (eba * sc(beta) - sc(beta - alpha)) / denom
        pairs.append((coef, eba * y))
    return _finish(_half_kernel_sum(pairs, _w(q), cfg), warns)


# -- binomial analog --------------------------------------------------------


def binomial_analog(n: int, c, q, d, r, cfg: QuadratureConfig = DEFAULT_CONFIG, *, override: bool = False) -> EvalResult:
    """``sum_k C(n,k) c^k q^{k^2} d^{n-k} r^{(n-k)^2}`` as a double integral."""
    if not 0 <= n <= 20:
        raise UnsupportedOrder("n must lie in 0..20")
    warns = _EXP_REGION.check(q, override=override) + _EXP_REGION.check(r, override=override)
    if n == 0:
        return _finish(EvalResult(1.0 + 0j, 0.0, 0), warns)
    wq, wr = _w(q), _w(r)
    c, d = complex(c), complex(d)

    def integrand(t, s):
        et, es = _exp(t, wq), _exp(s, wr)
        out = 0j
        for u in (c * et, c / et):
            for v in (d * es, d / es):
                out = out + (u + v) ** n
        return out

    return _finish(gauss_double(integrand, cfg), warns)
