"""Quadrature against the half-normal density on [0, inf).

Every integral representation in this package has the form

    I = int_0^inf phi(t) g(t) dt,    phi(t) = exp(-t^2/2) / sqrt(2 pi),

or its two-dimensional tensor analogue.  Two rules are provided:

``"truncated_adaptive"``
    Composite Gauss-Legendre on ``[0, T]`` with the panel count doubled each
    round.  This is the default because the kernels used downstream are
    periodic in ``t`` and can be sharply peaked, which a global Gauss rule
    resolves poorly.
``"hermite"``
    A true Gauss rule for the half-range weight, doubled each round.

Both report the difference between the last two rounds as the error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import NO_CONVERGENCE, InvalidConfig, NoConvergence, NonFiniteIntegrand, UnsupportedOrder

__all__ = [
    "QuadratureConfig",
    "EvalResult",
    "RoundInfo",
    "DEFAULT_CONFIG",
    "hermite_rule",
    "half_normal_moment",
    "gauss_halfline",
    "gauss_double",
    "refinement_rounds",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_METHODS = ("truncated_adaptive", "hermite")
_HERMITE_MAX = 512


@dataclass(frozen=True)
class QuadratureConfig:
    """Knobs for :func:`gauss_halfline` and :func:`gauss_double`.

    Parameters
    ----------
    method : {"truncated_adaptive", "hermite"}
    max_nodes : int
        Cap on integrand evaluations in a single round.
    truncation_T : float or None
        Upper limit for the truncated rule.  ``None`` picks
        ``max(8, sqrt(2 log(magnitude_bound / abs_tol)))``.
    abs_tol, rel_tol : float
        Stop when successive rounds differ by at most
        ``max(abs_tol, rel_tol * |value|)``.
    refine_limit : int
        Maximum number of doublings.
    magnitude_bound : float
        Assumed bound on ``|g|``, only used to choose ``T``.
    strict : bool
        Raise :class:`NoConvergence` when the budget runs out.  Otherwise the
        last estimate is returned with ``converged=False``.
    """

    method: str = "truncated_adaptive"
    max_nodes: int = 1 << 20
    truncation_T: float | None = None
    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    refine_limit: int = 14
    magnitude_bound: float = 1e6
    strict: bool = True
    panel_order: int = 16
    initial_panels: int = 8

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise InvalidConfig(f"method must be one of {_METHODS}, got {self.method!r}")
        if self.max_nodes < 4:
            raise InvalidConfig("max_nodes must be >= 4")
        if self.truncation_T is not None and not self.truncation_T >= 4:
            raise InvalidConfig("truncation_T must be >= 4")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InvalidConfig("abs_tol and rel_tol must be positive")
        if self.refine_limit < 1:
            raise InvalidConfig("refine_limit must be >= 1")
        if not self.magnitude_bound > 0:
            raise InvalidConfig("magnitude_bound must be positive")
        if self.panel_order < 2 or self.initial_panels < 1:
            raise InvalidConfig("panel_order must be >= 2 and initial_panels >= 1")

    @property
    def cutoff(self) -> float:
        if self.truncation_T is not None:
            return float(self.truncation_T)
        return max(8.0, math.sqrt(2.0 * math.log(self.magnitude_bound / self.abs_tol)))

    def with_(self, **changes) -> "QuadratureConfig":
        return replace(self, **changes)


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class EvalResult:
    """Value of an integral together with its bookkeeping.

    Results combine linearly: ``a + b``, ``k * a`` and ``-a`` propagate the
    error estimates (absolute values add), node counts, convergence flags and
    warnings.
    """

    value: complex
    error_estimate: float
    nodes_used: int
    converged: bool = True
    warnings: tuple[str, ...] = field(default=())

    def __complex__(self) -> complex:
        return complex(self.value)

    @property
    def real(self) -> float:
        return complex(self.value).real

    @property
    def imag(self) -> float:
        return complex(self.value).imag

    def with_warnings(self, *codes: str, converged: bool | None = None) -> "EvalResult":
        merged = tuple(dict.fromkeys(self.warnings + tuple(codes)))
        conv = self.converged if converged is None else converged
        return replace(self, warnings=merged, converged=conv)

    def _merge(self, other: "EvalResult", value: complex) -> "EvalResult":
        return EvalResult(
            value=value,
            error_estimate=self.error_estimate + other.error_estimate,
            nodes_used=self.nodes_used + other.nodes_used,
            converged=self.converged and other.converged,
            warnings=tuple(dict.fromkeys(self.warnings + other.warnings)),
        )

    def __add__(self, other):
        if isinstance(other, EvalResult):
            return self._merge(other, self.value + other.value)
        return replace(self, value=self.value + complex(other))

    __radd__ = __add__

    def __neg__(self) -> "EvalResult":
        return replace(self, value=-self.value)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, EvalResult):
            value = self.value * other.value
            err = abs(self.value) * other.error_estimate + abs(other.value) * self.error_estimate
            return replace(self._merge(other, value), error_estimate=err)
        k = complex(other)
        return replace(self, value=self.value * k, error_estimate=self.error_estimate * abs(k))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "EvalResult":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        if k == 0:
            return replace(self, value=1.0 + 0j, error_estimate=0.0)
        value = self.value**k
        err = k * abs(self.value) ** (k - 1) * self.error_estimate
        return replace(self, value=value, error_estimate=err)


@dataclass(frozen=True)
class RoundInfo:
    nodes: int
    value: complex
    error_estimate: float


def half_normal_moment(k: int) -> float:
    """``int_0^inf t^k phi(t) dt``."""
    return 2.0 ** ((k - 1) / 2.0) * math.gamma((k + 1) / 2.0) / _SQRT_2PI


# -- half-range Gauss rule --------------------------------------------------


@lru_cache(maxsize=1)
def _discretized_measure() -> tuple[np.ndarray, np.ndarray]:
    # geometric grading near 0 resolves the endpoint clustering of high-degree rules
    x, w = np.polynomial.legendre.leggauss(32)
    graded = 0.25 * 2.0 ** -np.arange(24, 0, -1)
    edges = np.concatenate([[0.0], graded, np.arange(0.25, 40.0 + 1e-12, 0.25)])
    a, b = edges[:-1, None], edges[1:, None]
    t = (0.5 * (b - a) * x + 0.5 * (a + b)).ravel()
    wt = (0.5 * (b - a) * w).ravel() * np.exp(-0.5 * t * t) / _SQRT_2PI
    keep = wt > 0
    return t[keep], wt[keep]


@lru_cache(maxsize=1)
def _recurrence(n: int = _HERMITE_MAX + 1) -> tuple[np.ndarray, np.ndarray]:
    """Jacobi coefficients of the half-normal weight via Lanczos with reorthogonalization.

    Returns ``alpha[0:n]`` and ``beta[0:n]`` with ``beta[0] = 0`` and
    ``beta[k] p_k = (x - alpha[k-1]) p_{k-1} - beta[k-1] p_{k-2}``
    for the orthonormal family.
    """
    t, w = _discretized_measure()
    s = np.sqrt(w)
    basis = np.zeros((n, t.size))
    alpha = np.zeros(n)
    beta = np.zeros(n)
    basis[0] = s / np.linalg.norm(s)
    for k in range(n):
        r = t * basis[k]
        alpha[k] = basis[k] @ r
        r -= alpha[k] * basis[k]
        if k > 0:
            r -= beta[k] * basis[k - 1]
        r -= basis[: k + 1].T @ (basis[: k + 1] @ r)
        if k + 1 < n:
            beta[k + 1] = np.linalg.norm(r)
            basis[k + 1] = r / beta[k + 1]
    return alpha, beta


def _orthonormal_eval(x: np.ndarray, n: int, alpha: np.ndarray, beta: np.ndarray):
    """Return ``p_n(x)``, ``p_n'(x)`` and ``log sum_{k<n} p_k(x)^2``."""
    p_prev = np.zeros_like(x)
    p = np.full_like(x, math.sqrt(2.0))  # 1/sqrt(mass), mass = 1/2
    d_prev = np.zeros_like(x)
    d = np.zeros_like(x)
    acc = p * p
    log_scale = np.zeros_like(x)
    for k in range(n):
        b_next = beta[k + 1]
        p_next = ((x - alpha[k]) * p - beta[k] * p_prev) / b_next
        d_next = (p + (x - alpha[k]) * d - beta[k] * d_prev) / b_next
        p_prev, p, d_prev, d = p, p_next, d, d_next
        if k < n - 1:
            acc = acc + p * p
        big = np.abs(p) > 1e100
        if big.any():
            f = np.where(big, 1e-100, 1.0)
            p_prev, p, d_prev, d = p_prev * f, p * f, d_prev * f, d * f
            acc = acc * f * f
            log_scale = log_scale + np.where(big, 200.0 * math.log(10.0), 0.0)
    return p, d, np.log(acc) + log_scale


@lru_cache(maxsize=64)
def _hermite_rule_cached(n: int) -> tuple[np.ndarray, np.ndarray]:
    alpha, beta = _recurrence()
    x = eigh_tridiagonal(alpha[:n], beta[1:n], eigvals_only=True)
    for _ in range(3):
        p, d, _ = _orthonormal_eval(x, n, alpha, beta)
        x = x - p / d
    _, _, log_sum = _orthonormal_eval(x, n, alpha, beta)
    w = np.exp(-log_sum)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def hermite_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``n``-point Gauss rule for ``phi`` on ``[0, inf)``.

    The rule integrates ``t^k`` exactly (to rounding) for ``k <= 2n - 1`` and
    its weights sum to ``1/2``.  For ``n`` above roughly 150 the outermost
    weights underflow to zero in double precision.

    Parameters
    ----------
    n : int
        Number of nodes, ``2 <= n <= 512``.
    """
    if not isinstance(n, (int, np.integer)) or not 2 <= n <= _HERMITE_MAX:
        raise UnsupportedOrder(f"hermite_rule supports 2 <= n <= {_HERMITE_MAX}, got {n}")
    return _hermite_rule_cached(int(n))


# -- composite Gauss-Legendre -----------------------------------------------


@lru_cache(maxsize=8)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _panel_rule(T: float, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _legendre(order)
    h = T / panels
    left = h * np.arange(panels)[:, None]
    t = (left + 0.5 * h * (x + 1.0)).ravel()
    wt = np.tile(0.5 * h * w, panels) * np.exp(-0.5 * t * t) / _SQRT_2PI
    return t, wt


def _rules(cfg: QuadratureConfig, dim: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    if cfg.method == "hermite":
        n = 16
        for _ in range(cfg.refine_limit + 1):
            if n > _HERMITE_MAX or n**dim > cfg.max_nodes:
                return
            yield hermite_rule(n)
            n *= 2
    else:
        panels = cfg.initial_panels
        T = cfg.cutoff
        for _ in range(cfg.refine_limit + 1):
            if (panels * cfg.panel_order) ** dim > cfg.max_nodes:
                return
            yield _panel_rule(T, panels, cfg.panel_order)
            panels *= 2


def _evaluate(f, *grids) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        g = np.asarray(f(*grids), dtype=complex)
    if g.shape != np.broadcast_shapes(*(np.shape(a) for a in grids)):
        g = np.broadcast_to(g, np.broadcast_shapes(*(np.shape(a) for a in grids)))
    if not np.all(np.isfinite(g)):
        raise NonFiniteIntegrand("integrand returned NaN or infinity")
    return g


def refinement_rounds(
    f: Callable[[np.ndarray], np.ndarray], cfg: QuadratureConfig = DEFAULT_CONFIG, dim: int = 1
) -> Iterator[RoundInfo]:
    """Yield the estimate after each refinement round.

    ``f`` takes one array (``dim=1``) or two broadcastable arrays (``dim=2``).
    The first round reports an infinite error estimate.
    """
    previous = None
    for t, w in _rules(cfg, dim):
        if dim == 1:
            value = complex(np.dot(_evaluate(f, t), w))
            nodes = t.size
        else:
            g = _evaluate(f, t[:, None], t[None, :])
            value = complex(w @ g @ w)
            nodes = t.size**2
        err = math.inf if previous is None else abs(value - previous)
        yield RoundInfo(nodes, value, err)
        previous = value


def _run(f, cfg: QuadratureConfig, dim: int) -> EvalResult:
    total = 0
    last = None
    for r, info in enumerate(refinement_rounds(f, cfg, dim)):
        total += info.nodes
        last = info
        if r >= 2 and info.error_estimate <= max(cfg.abs_tol, cfg.rel_tol * abs(info.value)):
            return EvalResult(info.value, info.error_estimate, total, True)
    if last is None:
        raise InvalidConfig("max_nodes too small for a single round")
    msg = f"no convergence after {total} evaluations (error estimate {last.error_estimate:.3g})"
    if cfg.strict:
        raise NoConvergence(msg, last.value, last.error_estimate)
    return EvalResult(last.value, last.error_estimate, total, False, (NO_CONVERGENCE,))


def gauss_halfline(
    f: Callable[[np.ndarray], np.ndarray], cfg: QuadratureConfig = DEFAULT_CONFIG
) -> EvalResult:
    """Approximate ``int_0^inf phi(t) f(t) dt`` for a vectorized ``f``.

    Examples
    --------
    >>> round(gauss_halfline(lambda t: np.ones_like(t)).real, 14)
    0.5
    """
    return _run(f, cfg, 1)


def gauss_double(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray], cfg: QuadratureConfig = DEFAULT_CONFIG
) -> EvalResult:
    """Approximate ``int_0^inf int_0^inf phi(t) phi(s) f(t, s) ds dt`` (tensor product)."""
    return _run(f, cfg, 2)
