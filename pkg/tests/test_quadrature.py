import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqseries import (
    EvalResult,
    InvalidConfig,
    NoConvergence,
    NonFiniteIntegrand,
    QuadratureConfig,
    UnsupportedOrder,
)
from sqseries.errors import NO_CONVERGENCE
from sqseries.quadrature import (
    gauss_double,
    gauss_halfline,
    half_normal_moment,
    hermite_rule,
    refinement_rounds,
)

HERMITE = QuadratureConfig(method="hermite")


def cos_halfline(a):
    # int_0^inf phi(t) cos(a t) dt = exp(-a^2/2) / 2
    return math.exp(-a * a / 2) / 2


@pytest.mark.parametrize("cfg", [QuadratureConfig(), HERMITE], ids=["panels", "hermite"])
class TestHalfline:
    def test_unit_mass(self, cfg):
        assert gauss_halfline(lambda t: np.ones_like(t), cfg).value == pytest.approx(0.5, abs=1e-14)

    def test_second_moment(self, cfg):
        assert gauss_halfline(lambda t: t**2, cfg).value == pytest.approx(0.5, abs=1e-13)

    def test_cos_sqrt_2pi(self, cfg):
        a = math.sqrt(2 * math.pi)
        res = gauss_halfline(lambda t: np.cos(a * t), cfg)
        assert res.value == pytest.approx(0.5 * math.exp(-math.pi), rel=1e-12)
        assert 0.0216 < res.real < 0.0217
        assert res.converged

    def test_converged_implies_tolerance(self, cfg):
        res = gauss_halfline(lambda t: np.exp(1j * 1.7 * t), cfg)
        assert res.converged
        assert res.error_estimate <= max(cfg.abs_tol, cfg.rel_tol * abs(res.value))


@pytest.mark.parametrize("cfg", [QuadratureConfig(), HERMITE], ids=["panels", "hermite"])
class TestDouble:
    def test_unit(self, cfg):
        assert gauss_double(lambda t, s: np.ones(np.broadcast_shapes(t.shape, s.shape)), cfg).value == pytest.approx(
            0.25, abs=1e-14
        )

    def test_second_moments(self, cfg):
        assert gauss_double(lambda t, s: t**2 * s**2, cfg).value == pytest.approx(0.25, abs=1e-13)

    def test_cos_cos(self, cfg):
        v = gauss_double(lambda t, s: np.cos(t) * np.cos(s), cfg).value
        assert v == pytest.approx((math.exp(-0.5) / 2) ** 2, rel=1e-12)
        assert abs(v - 0.09197) < 1e-5


class TestHermiteRule:
    def test_two_point_mass(self):
        _, w = hermite_rule(2)
        assert abs(w.sum() - 0.5) <= 1e-13

    def test_fourth_moment_32(self):
        # E[t^4] = 3 for the full Gaussian; the half line carries half of it
        x, w = hermite_rule(32)
        assert abs(np.dot(w, x**4) - 1.5) <= 1e-12

    def test_t63_stable_between_32_and_64(self):
        x1, w1 = hermite_rule(32)
        x2, w2 = hermite_rule(64)
        a, b = np.dot(w1, x1**63), np.dot(w2, x2**63)
        assert abs(a - b) <= 1e-9 * abs(b)

    @pytest.mark.parametrize("n", [2, 3, 5, 8, 16, 31, 64, 100])
    def test_polynomial_exactness(self, n):
        x, w = hermite_rule(n)
        for k in range(2 * n):
            assert np.dot(w, x**k) == pytest.approx(half_normal_moment(k), rel=1e-12), k

    @pytest.mark.parametrize("n", [2, 7, 16, 64, 128])
    def test_nodes_increasing_weights_positive(self, n):
        x, w = hermite_rule(n)
        assert np.all(np.diff(x) > 0)
        assert np.all(w > 0)
        assert x[0] > 0

    @pytest.mark.parametrize("n", [2, 50, 256, 512])
    def test_mass(self, n):
        assert abs(hermite_rule(n)[1].sum() - 0.5) <= 1e-13

    @pytest.mark.parametrize("n", [0, 1, 513, 1000, -3])
    def test_unsupported(self, n):
        with pytest.raises(UnsupportedOrder):
            hermite_rule(n)

    def test_read_only(self):
        x, w = hermite_rule(8)
        with pytest.raises(ValueError):
            x[0] = 1.0

    def test_moment_oracle_values(self):
        # Gaussian moments halved: 1/2, 1/sqrt(2 pi), 1/2, 2/sqrt(2 pi), 3/2
        ref = [0.5, 1 / math.sqrt(2 * math.pi), 0.5, 2 / math.sqrt(2 * math.pi), 1.5]
        assert [half_normal_moment(k) for k in range(5)] == pytest.approx(ref, rel=1e-15)


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            {"abs_tol": 0},
            {"rel_tol": -1e-3},
            {"max_nodes": 3},
            {"truncation_T": 3.9},
            {"method": "simpson"},
            {"refine_limit": 0},
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(InvalidConfig):
            QuadratureConfig(**kw)

    def test_default_cutoff(self):
        cfg = QuadratureConfig()
        assert cfg.cutoff == max(8.0, math.sqrt(2 * math.log(1e6 / 1e-13)))
        assert QuadratureConfig(truncation_T=4).cutoff == 4.0

    def test_with(self):
        assert QuadratureConfig().with_(abs_tol=1e-9).abs_tol == 1e-9


class TestRefinement:
    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 3.5, 5.0])
    def test_monotone_error(self, a):
        errs = [r.error_estimate for r in refinement_rounds(lambda t: np.cos(a * t))]
        errs = errs[1:6]
        floor = 1e-15
        for e0, e1 in zip(errs, errs[1:]):
            assert e1 <= max(e0, floor)

    def test_oscillation_safety(self):
        q = 0.05
        a = math.sqrt(2 * math.log(1 / q))
        assert 2.44 < a < 2.46
        ref = cos_halfline(a)
        # one 256-node composite round
        rounds = list(refinement_rounds(lambda t: np.cos(a * t)))
        r256 = next(r for r in rounds if r.nodes == 256)
        assert abs(r256.value - ref) <= 1e-11 * ref
        # and the half-range Gauss rule at 64 nodes
        x, w = hermite_rule(64)
        assert abs(np.dot(w, np.cos(a * x)) - ref) <= 1e-11 * ref

    def test_determinism(self):
        f = lambda t: np.exp(1j * 2.1 * t) / (1.3 - np.cos(t))  # noqa: E731
        a, b = gauss_halfline(f), gauss_halfline(f)
        assert a.value == b.value and a.error_estimate == b.error_estimate

    def test_no_convergence_strict(self):
        cfg = QuadratureConfig(refine_limit=1)
        with pytest.raises(NoConvergence) as info:
            gauss_halfline(lambda t: np.cos(40 * t), cfg)
        assert info.value.value is not None

    def test_no_convergence_lenient(self):
        cfg = QuadratureConfig(refine_limit=1, strict=False)
        res = gauss_halfline(lambda t: np.cos(40 * t), cfg)
        assert not res.converged and NO_CONVERGENCE in res.warnings

    def test_non_finite(self):
        with pytest.raises(NonFiniteIntegrand), np.errstate(divide="ignore"):
            gauss_halfline(lambda t: 1 / (t - t))
        with pytest.raises(NonFiniteIntegrand):
            gauss_double(lambda t, s: np.where(s > 3, np.nan, 1.0) * t)


class TestEvalResult:
    def test_arithmetic(self):
        a = EvalResult(1 + 1j, 1e-14, 10)
        b = EvalResult(2.0, 2e-14, 20, False, ("X",))
        c = a + b
        assert c.value == 3 + 1j and c.nodes_used == 30 and not c.converged and c.warnings == ("X",)
        assert (3 * a).error_estimate == pytest.approx(3e-14)
        assert (a - 1).value == 1j
        assert (a**2).value == (1 + 1j) ** 2
        assert (a**0).value == 1


@settings(max_examples=40, deadline=None)
@given(a=st.floats(0, 5), b=st.floats(-2, 2))
def test_halfline_matches_closed_form(a, b):
    # linearity plus the cosine closed form
    res = gauss_halfline(lambda t: np.cos(a * t) * math.cos(b))
    assert abs(res.value - math.cos(b) * cos_halfline(a)) <= 1e-12
