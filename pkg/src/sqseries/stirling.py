"""Stirling numbers of the second kind and the transforms built on them."""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, LengthMismatch

__all__ = [
    "stirling2",
    "stirling2_explicit",
    "stirling2_row",
    "ogf_power_transform",
    "neg_polylog",
    "stirling_egf_partial",
]

_TABLE_MAX = 64
_rows: list[list[int]] = [[1]]
_lock = threading.Lock()


def _extend(n: int) -> None:
    with _lock:
        while len(_rows) <= n:
            prev = _rows[-1]
            m = len(_rows)
            row = [0] * (m + 1)
            for k in range(1, m + 1):
                below = prev[k] if k < len(prev) else 0
                row[k] = k * below + prev[k - 1]
            _rows.append(row)


def stirling2_row(n: int) -> tuple[int, ...]:
    """Row ``S(n, 0..n)`` from the triangular recurrence (memoized)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if n >= len(_rows):
        _extend(max(n, _TABLE_MAX))
    return tuple(_rows[n])


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind ``S(n, k)``.

    ``S(0, 0) = 1`` and ``S(n, k) = 0`` for ``k > n`` or ``k < 0``.

    >>> stirling2(5, 2)
    15
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    if k < 0 or k > n:
        return 0
    return stirling2_row(n)[k]


def stirling2_explicit(n: int, k: int) -> int:
    """``S(n, k)`` from the inclusion-exclusion formula, in exact integers."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if k < 0 or k > n:
        return 0
    total = sum((-1) ** (k - i) * math.comb(k, i) * i**n for i in range(k + 1))
    return total // math.factorial(k)


def ogf_power_transform(derivs: Sequence[complex], z: complex, k: int) -> complex:
    """``sum_j S(k, j) z^j F^(j)(z)`` given ``derivs[j] = F^(j)(z)`` for ``j = 0..k``.

    This is the generating function of ``n^k f_n`` when ``F`` generates ``f_n``.
    """
    if len(derivs) != k + 1:
        raise LengthMismatch(f"need {k + 1} derivatives, got {len(derivs)}")
    row = stirling2_row(k)
    return sum(row[j] * z**j * derivs[j] for j in range(k + 1))


def _neg_polylog_exact(row: tuple[int, ...], x: complex) -> complex:
    # x is a pair of binary fractions, so the closed form can be summed exactly
    # and rounded once; the float sum cancels badly for Re x < 0 and large m
    a, b = Fraction(x.real), Fraction(x.imag)
    den = (1 - a) ** 2 + b**2
    vr, vi = (1 - a) / den, b / den  # 1 / (1 - x)
    ur, ui = a * vr - b * vi, a * vi + b * vr  # x / (1 - x)
    pr, pi = Fraction(1), Fraction(0)
    tr = ti = Fraction(0)
    for j in range(1, len(row)):
        pr, pi = pr * ur - pi * ui, pr * ui + pi * ur
        c = row[j] * math.factorial(j)
        tr += c * pr
        ti += c * pi
    return complex(float(tr * vr - ti * vi), float(tr * vi + ti * vr))


def neg_polylog(m: int, x):
    """``Li_{-m}(x) = sum_{n>=1} n^m x^n`` in closed form.

    Uses ``sum_j S(m, j) j! x^j / (1 - x)^(j + 1)`` (valid for ``|x| < 1``),
    summed in exact rational arithmetic so the result is correctly rounded
    up to the final conversion.  ``x`` may be an array.

    >>> neg_polylog(2, 0.5)
    6.0
    """
    if not 1 <= m <= 20:
        raise DomainError("m must satisfy 1 <= m <= 20")
    xa = np.asarray(x)
    if np.any(~np.isfinite(xa)) or np.any(np.abs(xa) > 1 - 1e-9):
        raise DomainError("neg_polylog requires |x| < 1")
    row = stirling2_row(m)
    flat = [_neg_polylog_exact(row, complex(v)) for v in xa.ravel()]
    if np.iscomplexobj(xa):
        out = np.array(flat, dtype=complex).reshape(xa.shape)
    else:
        out = np.array([v.real for v in flat], dtype=float).reshape(xa.shape)
    return out.item() if out.ndim == 0 else out


def stirling_egf_partial(j: int, w: complex, K: int) -> complex:
    """``sum_{k=0}^{K} S(2k, j) w^(2k) / (2k)!``.

    As ``K`` grows this tends to ``((e^w - 1)^j + (e^{-w} - 1)^j) / (2 j!)``.
    """
    if j < 0 or K < 0:
        raise DomainError("j and K must be non-negative")
    total = 0j
    for k in range(K + 1):
        s = stirling2(2 * k, j)
        if s:
            total += (s / math.factorial(2 * k)) * w ** (2 * k)
    return total
