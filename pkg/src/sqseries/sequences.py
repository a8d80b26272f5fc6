"""Coefficient sequences, their generating functions, and direct-summation oracles.

A *square series* is ``sum_{n>=0} f_n q^{e(n)} z^n`` with ``e(n) = n^2`` for
every kind except :class:`BinomialPowExponential`, where ``e(n) = n(n-1)/2``.
The summation routines here never touch the integral representations, so
they serve as the reference values for everything in :mod:`.transforms`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .errors import DIVERGENT, NO_CONVERGENCE, DomainError, UnsupportedDerivative
from .quadrature import EvalResult
from .stirling import stirling2

__all__ = [
    "SequenceKind",
    "Geometric",
    "AffineGeometric",
    "PolyPowGeometric",
    "FallingGeometric",
    "Exponential",
    "FallingExponential",
    "BinomialPowExponential",
    "FourierCos",
    "FourierSin",
    "Custom",
    "term",
    "ogf",
    "ogf_deriv",
    "qpow",
    "SquareSeriesParams",
    "square_series_sum",
    "BilateralSpec",
    "FoldedHalf",
    "BilateralFold",
    "bilateral_fold",
    "bilateral_sum",
    "bilateral_direct",
]

POLE_MARGIN = 1e-9


def qpow(q: complex, e) -> complex:
    """Principal power ``q**e`` with ``0**0 == 1``."""
    if q == 0:
        if e == 0:
            return 1.0 + 0j
        if e > 0:
            return 0j
        raise DomainError("negative power of q = 0")
    if isinstance(q, (int, float)) and q > 0:
        return complex(float(q) ** float(e))
    return cmath.exp(float(e) * cmath.log(q))


class SequenceKind:
    """Base class: a coefficient sequence ``f_n`` with optional closed-form OGF."""

    def term(self, n: int) -> complex:
        raise NotImplementedError

    def iter_terms(self) -> Iterator[complex]:
        n = 0
        while True:
            yield self.term(n)
            n += 1

    def exponent(self, n: int) -> int:
        return n * n

    def ogf(self, z):
        raise UnsupportedDerivative(f"{type(self).__name__} has no closed-form generating function")

    def ogf_deriv(self, z, j: int):
        if j == 0:
            return self.ogf(z)
        raise UnsupportedDerivative(f"{type(self).__name__} has no derivative provider")


def _check_n(n: int) -> None:
    if n < 0:
        raise DomainError("n must be non-negative")


def _check_disk(x) -> None:
    if np.max(np.abs(x)) >= 1 - POLE_MARGIN:
        raise DomainError("generating function evaluated outside |cz| < 1")


# -- geometric family -------------------------------------------------------


class _GeometricFamily(SequenceKind):
    """``f_n = h(n) c^n`` with ``h`` a polynomial stored in the falling-factorial basis."""

    c: complex

    def _h(self, n: int) -> complex:
        raise NotImplementedError

    def falling_coefficients(self) -> tuple[complex, ...]:
        raise NotImplementedError

    def term(self, n: int) -> complex:
        _check_n(n)
        return self._h(n) * complex(self.c) ** n

    def ogf(self, z):
        x = self.c * np.asarray(z, dtype=complex)
        _check_disk(x)
        total = 0j
        for p, a in enumerate(self.falling_coefficients()):
            if a:
                total = total + a * math.factorial(p) * x**p / (1 - x) ** (p + 1)
        return _scalarize(total)

    def ogf_deriv(self, z, j: int):
        if j < 0:
            raise DomainError("derivative order must be non-negative")
        x = self.c * np.asarray(z, dtype=complex)
        _check_disk(x)
        total = 0j
        for p, a in enumerate(self.falling_coefficients()):
            if not a:
                continue
            for i in range(min(j, p) + 1):
                coef = math.comb(j, i) * math.factorial(p) // math.factorial(p - i) * math.factorial(p + j - i)
                total = total + a * coef * x ** (p - i) / (1 - x) ** (p + 1 + j - i)
        return _scalarize(total * complex(self.c) ** j)


def _scalarize(v):
    if isinstance(v, np.ndarray) and v.ndim == 0:
        return complex(v)
    return v


@dataclass(frozen=True)
class Geometric(_GeometricFamily):
    """``f_n = c^n``."""

    c: complex

    def _h(self, n):
        return 1.0

    def falling_coefficients(self):
        return (1.0,)


@dataclass(frozen=True)
class AffineGeometric(_GeometricFamily):
    """``f_n = (a n + b) c^n``."""

    a: complex
    b: complex
    c: complex

    def _h(self, n):
        return self.a * n + self.b

    def falling_coefficients(self):
        return (complex(self.b), complex(self.a))


@dataclass(frozen=True)
class PolyPowGeometric(_GeometricFamily):
    """``f_n = (alpha n + beta)^m c^n``."""

    alpha: complex
    beta: complex
    m: int
    c: complex

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("m must be non-negative")

    def _h(self, n):
        return (self.alpha * n + self.beta) ** self.m

    def falling_coefficients(self):
        m = self.m
        coeffs = []
        for p in range(m + 1):
            coeffs.append(
                sum(
                    math.comb(m, l) * complex(self.alpha) ** l * complex(self.beta) ** (m - l) * stirling2(l, p)
                    for l in range(p, m + 1)
                )
            )
        return tuple(coeffs)


@dataclass(frozen=True)
class FallingGeometric(_GeometricFamily):
    """``f_n = n (n-1) ... (n-k+1) c^n``."""

    k: int
    c: complex

    def _h(self, n):
        return math.perm(n, self.k) if n >= self.k else 0

    def falling_coefficients(self):
        return (0.0,) * self.k + (1.0,)


# -- exponential family -----------------------------------------------------


class _ExponentialFamily(SequenceKind):
    """``f_n = h(n) r^n / n!`` with ``h`` in the falling-factorial basis."""

    r: complex

    def _h(self, n: int):
        return 1.0

    def falling_coefficients(self) -> tuple[complex, ...]:
        return (1.0,)

    def term(self, n: int) -> complex:
        _check_n(n)
        t = 1.0 + 0j
        for i in range(1, n + 1):
            t *= self.r / i
        return self._h(n) * t

    def iter_terms(self):
        t = 1.0 + 0j
        n = 0
        while True:
            yield self._h(n) * t
            n += 1
            t *= self.r / n

    def ogf(self, z):
        return self.ogf_deriv(z, 0)

    def ogf_deriv(self, z, j: int):
        if j < 0:
            raise DomainError("derivative order must be non-negative")
        z = np.asarray(z, dtype=complex)
        r = complex(self.r)
        e = np.exp(r * z)
        total = 0j
        for p, a in enumerate(self.falling_coefficients()):
            if not a:
                continue
            for i in range(min(j, p) + 1):
                total = total + a * math.comb(j, i) * math.perm(p, i) * z ** (p - i) * r ** (p + j - i)
        return _scalarize(total * e)


@dataclass(frozen=True)
class Exponential(_ExponentialFamily):
    """``f_n = r^n / n!``."""

    r: complex


@dataclass(frozen=True)
class FallingExponential(_ExponentialFamily):
    """``f_n = n (n-1) ... (n-k+1) r^n / n!``."""

    k: int
    r: complex

    def _h(self, n):
        return math.perm(n, self.k) if n >= self.k else 0

    def falling_coefficients(self):
        return (0.0,) * self.k + (1.0,)


@dataclass(frozen=True)
class BinomialPowExponential(_ExponentialFamily):
    """``f_n = r^n / n!`` paired with the exponent ``n(n-1)/2``."""

    r: complex

    def exponent(self, n):
        return n * (n - 1) // 2


# -- Fourier type -----------------------------------------------------------


class _FourierFamily(SequenceKind):
    alpha: float
    beta: float
    c: complex
    _sign: float  # +1 for cos, -1 for sin after dividing by i

    def _pair(self):
        # f_n = A e^{i alpha n} c^n + B e^{-i alpha n} c^n
        raise NotImplementedError

    def term(self, n: int) -> complex:
        _check_n(n)
        (A, u), (B, v) = self._pair()
        return (A * u**n + B * v**n) * complex(self.c) ** n

    def ogf(self, z):
        return self.ogf_deriv(z, 0)

    def ogf_deriv(self, z, j: int):
        if j < 0:
            raise DomainError("derivative order must be non-negative")
        z = np.asarray(z, dtype=complex)
        total = 0j
        for coef, u in self._pair():
            x = u * self.c * z
            _check_disk(x)
            total = total + coef * (u * self.c) ** j * math.factorial(j) / (1 - x) ** (j + 1)
        return _scalarize(total)


@dataclass(frozen=True)
class FourierCos(_FourierFamily):
    """``f_n = cos(alpha n + beta) c^n``."""

    alpha: float
    beta: float
    c: complex

    def _pair(self):
        u = cmath.exp(1j * self.alpha)
        return ((cmath.exp(1j * self.beta) / 2, u), (cmath.exp(-1j * self.beta) / 2, 1 / u))


@dataclass(frozen=True)
class FourierSin(_FourierFamily):
    """``f_n = sin(alpha n + beta) c^n``."""

    alpha: float
    beta: float
    c: complex

    def _pair(self):
        u = cmath.exp(1j * self.alpha)
        return ((cmath.exp(1j * self.beta) / 2j, u), (-cmath.exp(-1j * self.beta) / 2j, 1 / u))


# -- user supplied ----------------------------------------------------------


@dataclass(frozen=True)
class Custom(SequenceKind):
    """Arbitrary coefficients ``term_fn(n)`` with optional OGF and derivative providers.

    ``deriv_fn(z, j)`` must return the ``j``-th derivative of the OGF.
    """

    term_fn: Callable[[int], complex]
    ogf_fn: Callable | None = None
    deriv_fn: Callable | None = None

    def term(self, n):
        _check_n(n)
        return complex(self.term_fn(n))

    def ogf(self, z):
        if self.ogf_fn is not None:
            return self.ogf_fn(z)
        if self.deriv_fn is not None:
            return self.deriv_fn(z, 0)
        return super().ogf(z)

    def ogf_deriv(self, z, j):
        if self.deriv_fn is not None:
            return self.deriv_fn(z, j)
        if j == 0:
            return self.ogf(z)
        raise UnsupportedDerivative("Custom sequence has no derivative provider")


def term(kind: SequenceKind, n: int) -> complex:
    return kind.term(n)


def ogf(kind: SequenceKind, z):
    return kind.ogf(z)


def ogf_deriv(kind: SequenceKind, z, j: int):
    return kind.ogf_deriv(z, j)


# -- direct summation -------------------------------------------------------


@dataclass(frozen=True)
class SquareSeriesParams:
    kind: SequenceKind
    q: complex
    z: complex

    def __post_init__(self):
        if abs(self.q) > 1:
            raise DomainError("square series requires |q| <= 1")

    def sum(self, **kw) -> EvalResult:
        return square_series_sum(self.kind, self.q, self.z, **kw)


def square_series_sum(
    kind: SequenceKind, q: complex, z: complex, *, abs_tol: float = 1e-17, n_cap: int = 10_000
) -> EvalResult:
    """Sum ``sum_n f_n q^{e(n)} z^n`` directly.

    Stops once three consecutive terms fall below ``abs_tol * max(1, |partial|)``.
    The error estimate is the magnitude of the last term kept.  Hitting
    ``n_cap`` yields ``converged=False``.
    """
    if abs(q) > 1:
        raise DomainError("square series requires |q| <= 1")
    log_q = None if q == 0 else cmath.log(q)
    re_parts: list[float] = []
    im_parts: list[float] = []
    partial = 0j
    small = 0
    last = 0.0
    for n, f in enumerate(kind.iter_terms()):
        e = kind.exponent(n)
        if log_q is None:
            qe = 1.0 if e == 0 else 0.0
        else:
            qe = cmath.exp(e * log_q) if e * log_q.real > -745 else 0.0
        zn = complex(z) ** n if z != 0 else (1.0 if n == 0 else 0.0)
        t = complex(f) * qe * zn
        if not cmath.isfinite(t):
            return EvalResult(partial, math.inf, n, False, (DIVERGENT,))
        re_parts.append(t.real)
        im_parts.append(t.imag)
        partial += t
        last = abs(t)
        if last <= abs_tol * max(1.0, abs(partial)):
            small += 1
            if small >= 3:
                value = complex(math.fsum(re_parts), math.fsum(im_parts))
                return EvalResult(value, last, n + 1, True)
        else:
            small = 0
        if n + 1 >= n_cap:
            break
    value = complex(math.fsum(re_parts), math.fsum(im_parts))
    return EvalResult(value, last, n_cap, False, (NO_CONVERGENCE,))


# -- bilateral sums ---------------------------------------------------------


def _rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(1_000_000)
    return Fraction(x)


@dataclass(frozen=True)
class BilateralSpec:
    """``sum_{n in Z} (-1)^n (a n + b) q^{(r2 n^2 + r1 n + r0)/2}``."""

    a: Fraction
    b: Fraction
    r2: Fraction
    r1: Fraction
    r0: Fraction
    q: complex

    def __init__(self, a, b, r2, r1, r0, q):
        for name, v in zip("a b r2 r1 r0".split(), (a, b, r2, r1, r0)):
            object.__setattr__(self, name, _rational(v))
        object.__setattr__(self, "q", complex(q))
        if not abs(self.q) < 1:
            raise DomainError("bilateral sums require |q| < 1")
        if self.r2 <= 0:
            raise DomainError("bilateral sums require r2 > 0")


@dataclass(frozen=True)
class FoldedHalf:
    """``prefactor * sum_{n>=0} (a n + b) q_eff^{n^2} c^n``."""

    prefactor: complex
    q_eff: complex
    kind: AffineGeometric

    @property
    def c(self) -> complex:
        return complex(self.kind.c)

    def series(self, **kw) -> EvalResult:
        return self.prefactor * square_series_sum(self.kind, self.q_eff, 1.0, **kw)


@dataclass(frozen=True)
class BilateralFold:
    head: complex
    halves: tuple[FoldedHalf, FoldedHalf]


def _half_power(q: complex, r: Fraction) -> complex:
    return qpow(q, r / 2)


def _shift_half(half: FoldedHalf, s: Fraction, r2: Fraction, q: complex) -> tuple[complex, FoldedHalf]:
    """Move leading terms into a finite head until the geometric ratio is small."""
    a, b = half.kind.a, half.kind.b
    d = 0
    while True:
        c = -_half_power(q, 2 * d * r2 + s)
        if abs(c) <= 0.5 or (d >= 64 and abs(c) < 1 - 1e-6) or d >= 4096:
            break
        d += 1
    if d == 0:
        return 0j, half
    Q = half.q_eff
    c0 = half.c
    head = half.prefactor * sum((a * m + b) * qpow(Q, m * m) * c0**m for m in range(d))
    pre = half.prefactor * qpow(Q, d * d) * c0**d
    return head, FoldedHalf(pre, Q, AffineGeometric(a, a * d + b, c))


def bilateral_fold(spec: BilateralSpec, *, into_disk: bool = False) -> BilateralFold:
    """Split a bilateral sum into two one-sided affine square series.

    The non-negative indices give
    ``q^{r0/2} sum (a n + b) (q^{r2/2})^{n^2} (-q^{r1/2})^n`` and the negative
    ones give ``q^{(r2-r1+r0)/2} sum (a n + a - b) (q^{r2/2})^{n^2} (-q^{(2 r2 - r1)/2})^n``.

    With ``into_disk=True`` a few leading terms of each half are moved into
    ``head`` so that both geometric ratios satisfy ``|c| < 1``.
    """
    q = spec.q
    a, b = complex(spec.a), complex(spec.b)
    Q = _half_power(q, spec.r2)
    first = FoldedHalf(_half_power(q, spec.r0), Q, AffineGeometric(a, b, -_half_power(q, spec.r1)))
    second = FoldedHalf(
        _half_power(q, spec.r2 - spec.r1 + spec.r0),
        Q,
        AffineGeometric(a, a - b, -_half_power(q, 2 * spec.r2 - spec.r1)),
    )
    if not into_disk:
        return BilateralFold(0j, (first, second))
    h1, first = _shift_half(first, spec.r1, spec.r2, q)
    h2, second = _shift_half(second, 2 * spec.r2 - spec.r1, spec.r2, q)
    return BilateralFold(h1 + h2, (first, second))


def bilateral_sum(spec: BilateralSpec, *, abs_tol: float = 1e-17) -> EvalResult:
    """Bilateral sum through the fold and direct summation of each half."""
    fold = bilateral_fold(spec)
    h1, h2 = fold.halves
    return h1.series(abs_tol=abs_tol) + h2.series(abs_tol=abs_tol)


def bilateral_direct(spec: BilateralSpec, N: int = 200) -> complex:
    """Two-sided truncated sum over ``-N <= n <= N`` (independent oracle)."""
    re, im = [], []
    for n in range(-N, N + 1):
        e = (spec.r2 * n * n + spec.r1 * n + spec.r0) / 2
        t = (-1) ** n * (complex(spec.a) * n + complex(spec.b)) * qpow(spec.q, e)
        re.append(t.real)
        im.append(t.imag)
    return complex(math.fsum(re), math.fsum(im))
