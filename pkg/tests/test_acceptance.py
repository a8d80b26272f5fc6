"""Acceptance criteria 1-15.

Each test prints one ``PASS/FAIL criterion N: ...`` line (collected again in
the terminal summary by ``conftest.py``).  Oracles are direct sums and
products written here, independent of the package internals.
"""

import cmath
import math
import subprocess
import sys
import time
from decimal import Decimal, getcontext
from math import comb, factorial

import mpmath
import numpy as np
import pytest

from sqseries.quadrature import QuadratureConfig
from sqseries.sequences import BilateralSpec
from sqseries.special import (
    chromatic_mk,
    euler_qp,
    euler_qp_cubed,
    euler_qp_theta2_form,
    bilateral_eval,
    mellin_integral,
    ramanujan_f,
    ramanujan_phi,
    ramanujan_psi,
    theta2,
    theta3,
    theta4,
    theta_deriv,
    theta_u,
    zagier_rhs,
)
from sqseries.stirling import neg_polylog, stirling2, stirling2_explicit, stirling_egf_partial
from sqseries.transforms import (
    binomial_analog,
    esq,
    etilde,
    fourier_compact,
    fourier_cos,
    fourier_sin,
    gsq,
    numerator_poly,
    numerator_table,
)

pytestmark = pytest.mark.acceptance


# -- oracles ----------------------------------------------------------------


def theta_sum(i, u, q, j=0, N=80):
    """j-th u-derivative of theta_i(u, q) by termwise differentiation."""
    total = 0.0
    if i in (1, 2):
        for n in range(N):
            k = 2 * n + 1
            # d^j sin(ku) = k^j sin(ku + j pi/2), same for cos
            trig = math.sin if i == 1 else math.cos
            sign = (-1) ** n if i == 1 else 1
            total += 2 * sign * q ** ((n + 0.5) ** 2) * k**j * trig(k * u + j * math.pi / 2)
        return total
    total = 1.0 if j == 0 else 0.0
    for n in range(1, N):
        sign = (-1) ** n if i == 4 else 1
        total += 2 * sign * q ** (n * n) * (2 * n) ** j * math.cos(2 * n * u + j * math.pi / 2)
    return total


def product(q, N=200):
    out = 1.0
    for n in range(1, N + 1):
        out *= 1 - q**n
    return out


def rel(a, b):
    return abs(a - b) / abs(b)


# -- criteria ---------------------------------------------------------------


def test_c01_geometric_grid(report):
    worst, slowest = 0.0, 0.0
    for q in (0.05, 0.1, 0.2, 0.3):
        for c in (-0.9, -0.5, 0.5, 0.9):
            for z in (0.3, 0.9):
                t0 = time.perf_counter()
                v = gsq(q, c, z).value
                slowest = max(slowest, time.perf_counter() - t0)
                ref = sum(q ** (n * n) * (c * z) ** n for n in range(60))
                worst = max(worst, rel(v, ref))
    ok = worst <= 1e-10 and slowest < 1.0
    report(1, ok, f"gsq grid of 32 points, max rel {worst:.2e} (<= 1e-10), slowest {slowest:.3f} s (< 1 s)")
    assert ok


PHI_REF = {
    1: lambda b: b,
    2: lambda b: b * math.sqrt(2 + math.sqrt(2)) / 2,
    3: lambda b: b * math.sqrt(1 + math.sqrt(3)) / (2**0.25 * 3**0.375),
    5: lambda b: b * math.sqrt(5 + 2 * math.sqrt(5)) / 5**0.75,
}


def test_c02_phi_values(report):
    base = math.pi**0.25 / math.gamma(0.75)
    errs = {k: rel(ramanujan_phi(math.exp(-k * math.pi)).value, f(base)) for k, f in PHI_REF.items()}
    worst = max(errs.values())
    ok = worst <= 1e-8 and abs(base - 1.0864348112) < 1e-10
    report(2, ok, f"phi(e^(-k pi)) k=1,2,3,5 vs closed forms, max rel {worst:.2e} (<= 1e-8)")
    assert ok


def test_c03_psi_values(report):
    base = math.pi**0.25 / math.gamma(0.75)
    refs = {
        1: base * math.exp(math.pi / 8) / 2**0.625,
        2: base * math.exp(math.pi / 4) / 2**1.25,
        0.5: base * (1 + math.sqrt(2)) ** 0.25 * math.exp(math.pi / 16) / 2**0.4375,
    }
    errs = {k: rel(ramanujan_psi(math.exp(-k * math.pi)).value, ref) for k, ref in refs.items()}
    # the closed forms themselves are checked against the series definition
    series = {k: sum(math.exp(-k * math.pi) ** (n * (n + 1) / 2) for n in range(80)) for k in refs}
    worst = max(errs.values())
    ok = worst <= 1e-8 and all(rel(series[k], refs[k]) <= 1e-12 for k in refs)
    report(3, ok, f"psi(e^(-k pi)) k=1,2,1/2 vs closed forms, max rel {worst:.2e} (<= 1e-8)")
    assert ok


def test_c04_theta_values(report):
    errs = [rel(theta2(q).value, theta_sum(2, 0, q)) for q in (0.1, 0.2, 0.45)]
    errs += [rel(theta3(q).value, theta_sum(3, 0, q)) for q in (0.05, 0.1, 0.2)]
    errs += [rel(theta4(q).value, theta_sum(4, 0, q)) for q in (0.05, 0.1, 0.2)]
    worst = max(errs)
    ok = worst <= 1e-9
    report(4, ok, f"theta_2/3/4 at 9 nomes vs series, max rel {worst:.2e} (<= 1e-9)")
    assert ok


def test_c05_numerator_table(report):
    rng = np.random.default_rng(20240605)
    s = rng.uniform(-3, 3, 1000)
    y = rng.uniform(-0.9, 0.9, 1000)
    worst = 0.0
    for k in range(5):
        a = numerator_poly(k, s, y, "extended")
        b = 2 * numerator_table(k, s, y, "extended")
        worst = max(worst, float(np.max(np.abs(a - b))))
    ok = worst <= 1e-12
    report(5, ok, f"Num_k = 2 x table, k=0..4, 1000 seeded (s, y), max abs {worst:.2e} (<= 1e-12)")
    assert ok


def brute_neg_polylog(m, x, N=4000):
    getcontext().prec = 50
    xd, total, power = Decimal(x), Decimal(0), Decimal(1)
    for n in range(1, N):
        power *= xd
        total += Decimal(n) ** m * power
    return float(total)


def test_c06_stirling(report):
    exact = all(stirling2(n, k) == stirling2_explicit(n, k) for n in range(41) for k in range(n + 1))

    poly_err = 0.0
    xs = [round(0.1 * i, 1) for i in range(-8, 9)]
    for m in range(1, 9):
        for x in xs:
            poly_err = max(poly_err, abs(neg_polylog(m, x) - brute_neg_polylog(m, x)))
    mpmath.mp.dps = 40
    for m in range(1, 9):
        for x in (0.5j, 0.4 + 0.6j, -0.7 + 0.2j, 0.8 * cmath.exp(2j)):
            ref = complex(mpmath.polylog(-m, mpmath.mpc(x)))
            poly_err = max(poly_err, abs(neg_polylog(m, x) - ref))
    mpmath.mp.dps = 15

    egf_err = 0.0
    for j in range(7):
        for w in (0.3, 1.0, -0.7 + 0.4j, 2.0):
            closed = ((cmath.exp(w) - 1) ** j + (cmath.exp(-w) - 1) ** j) / (2 * factorial(j))
            egf_err = max(egf_err, abs(stirling_egf_partial(j, w, 60) - closed))
    ok = exact and poly_err <= 1e-10 and egf_err <= 1e-10
    report(
        6, ok,
        f"S(n,k) exact for n<=40: {exact}; neg_polylog max abs {poly_err:.2e}; EGF identity max abs {egf_err:.2e} (<= 1e-10)",
    )
    assert ok


def test_c07_binomial(report):
    worst, slowest = 0.0, 0.0
    for c, d, q, r in ((1, 1, 0.5, 0.5), (1, 2, 0.5, 0.4), (0.7, -0.3, 0.3, 0.6)):
        for n in range(7):
            t0 = time.perf_counter()
            v = binomial_analog(n, c, q, d, r).value
            slowest = max(slowest, time.perf_counter() - t0)
            ref = sum(comb(n, k) * c**k * q ** (k * k) * d ** (n - k) * r ** ((n - k) ** 2) for k in range(n + 1))
            worst = max(worst, abs(v - ref))
    ok = worst <= 1e-6 and slowest < 10
    report(7, ok, f"binomial analog n<=6, 3 sets, max abs {worst:.2e} (<= 1e-6), slowest {slowest:.2f} s (< 10 s)")
    assert ok


def test_c08_euler(report):
    q = 0.05
    ref = product(q)
    routes = [euler_qp(q).value, euler_qp_theta2_form(q).value, bilateral_eval(BilateralSpec(0, 1, 3, 1, 0, q)).value]
    route_err = max(abs(v - ref) for v in routes)
    lenient = QuadratureConfig(strict=False)
    cube_err, theta_err = 0.0, 0.0
    for q in (0.1, 0.3):
        v = euler_qp_cubed(q).value
        cube_err = max(cube_err, abs(v - product(q) ** 3))
        sq = math.sqrt(q)
        d1 = theta_deriv(1, 1, sq, lenient, override=sq >= 0.5).value
        theta_err = max(theta_err, abs(v - d1 / (2 * q**0.125)))
    ok = route_err <= 1e-7 and cube_err <= 1e-7 and theta_err <= 1e-8
    report(
        8, ok,
        f"(q)_inf three routes max abs {route_err:.2e} (<= 1e-7); cubed vs product^3 {cube_err:.2e} (<= 1e-7), "
        f"vs theta_1' form {theta_err:.2e} (<= 1e-8)",
    )
    assert ok


def test_c09_ramanujan_f(report):
    def series(a, b, N=200):
        return sum(a ** (n * (n + 1) / 2) * b ** (n * (n - 1) / 2) for n in range(N)) + sum(
            a ** (n * (n - 1) / 2) * b ** (n * (n + 1) / 2) for n in range(1, N)
        )

    pairs = ((0.3, 0.2), (0.4, 0.1), (0.25, 0.25))
    err = max(abs(ramanujan_f(a, b).value - series(a, b)) for a, b in pairs)
    swap = max(abs(ramanujan_f(a, b).value - ramanujan_f(b, a).value) for a, b in pairs)
    ok = err <= 1e-8 and swap <= 1e-10
    report(9, ok, f"f(a,b) vs two-sided series max abs {err:.2e} (<= 1e-8); swap {swap:.2e} (<= 1e-10)")
    assert ok


def test_c10_mellin(report):
    s = 4
    base = math.pi ** (-s / 2) * math.gamma(s / 2) * float(mpmath.zeta(s))
    refs = {2: (2**s - 1) * base, 3: base, 4: (1 - 2 ** (1 - s)) * base}
    errs, times = {}, {}
    for i, ref in refs.items():
        t0 = time.perf_counter()
        errs[i] = rel(mellin_integral(s, i).value.real, ref)
        times[i] = time.perf_counter() - t0
    ok = max(errs.values()) <= 1e-4 and max(times.values()) <= 30
    report(
        10, ok,
        f"Mellin s=4, i=2,3,4 max rel {max(errs.values()):.2e} (<= 1e-4), slowest {max(times.values()):.2f} s (<= 30 s)",
    )
    assert ok


def test_c11_exponential(report):
    def esq_ref(q, r, z):
        out, term = 0.0, 1.0
        for n in range(120):
            out += q ** (n * n) * term
            term *= r * z / (n + 1)
        return out

    def etilde_ref(q, r, z):
        out, term = 0.0, 1.0
        for n in range(120):
            out += q ** (n * (n - 1) / 2) * term
            term *= r * z / (n + 1)
        return out

    errs = [abs(esq(q, r, z).value - esq_ref(q, r, z)) for q, r, z in ((0.8, 1, 1), (0.5, 2, 0.5))]
    errs += [abs(etilde(q, r, z).value - etilde_ref(q, r, z)) for q, r, z in ((0.5, 1, 1), (0.5, -1, 1))]
    series_err = max(errs)

    ident = 0.0
    for q, r, z in ((0.5, 1, 1), (0.5, -1, 1), (0.3, 0.7, -1.2), (0.8, 2, 0.4)):
        rq = math.sqrt(q)
        ident = max(ident, abs(etilde(q, r, z).value - esq(rq, r / rq, z).value))

    # Cauchy product of the truncated coefficient list, squared
    coeff = [2.0 ** (-n * (n - 1) / 2) / factorial(n) for n in range(40)]
    sq = [math.fsum(coeff[i] * coeff[n - i] for i in range(n + 1)) for n in range(40)]
    chrom_ref = sum(a * 0.5**n for n, a in enumerate(sq))
    chrom_err = abs(chromatic_mk(2, 0.5).value - chrom_ref)
    ok = series_err <= 1e-9 and ident <= 1e-12 and chrom_err <= 1e-8
    report(
        11, ok,
        f"esq/etilde vs series max abs {series_err:.2e} (<= 1e-9); etilde/esq identity {ident:.2e} (<= 1e-12); "
        f"chromatic M_2(0.5) {chrom_err:.2e} (<= 1e-8)",
    )
    assert ok


def test_c12_fourier(report):
    rng = np.random.default_rng(7)
    worst = 0.0
    compact = 0.0
    for _ in range(50):
        alpha, beta = rng.uniform(-math.pi, math.pi, 2)
        q = rng.uniform(0.01, 0.3)
        c = rng.uniform(-0.8, 0.8)
        ns = range(40)
        cos_ref = sum(q ** (n * n) * math.cos(alpha * n + beta) * c**n for n in ns)
        sin_ref = sum(q ** (n * n) * math.sin(alpha * n + beta) * c**n for n in ns)
        fc, fs = fourier_cos(alpha, beta, q, c, 1).value, fourier_sin(alpha, beta, q, c, 1).value
        worst = max(worst, abs(fc - cos_ref), abs(fs - sin_ref))
        if abs(math.sin(alpha)) > 1e-3:
            compact = max(
                compact,
                abs(fourier_compact("cos", alpha, beta, q, c, 1).value - fc),
                abs(fourier_compact("sin", alpha, beta, q, c, 1).value - fs),
            )
    theta_err = 0.0
    for i, q in ((1, 0.2), (2, 0.2), (3, 0.1), (4, 0.1)):
        for u in (0.3, 0.7, 1.1):
            theta_err = max(theta_err, abs(theta_u(i, u, q).value - theta_sum(i, u, q)))
    ok = worst <= 1e-9 and compact <= 1e-10 and theta_err <= 1e-8
    report(
        12, ok,
        f"Fourier 50 seeded points max abs {worst:.2e} (<= 1e-9); compact form {compact:.2e} (<= 1e-10); "
        f"theta_i(u,q) {theta_err:.2e} (<= 1e-8)",
    )
    assert ok


def test_c13_derivatives(report):
    q = 0.15
    err = max(abs(theta_deriv(i, j, q).value - theta_sum(i, 0, q, j)) for i, j in ((1, 1), (1, 3), (2, 2), (3, 2), (4, 2)))
    zeros = all(theta_deriv(i, j, q).value == 0 for i, j in ((1, 0), (1, 2), (2, 1), (3, 1), (4, 3), (2, 5)))
    ok = err <= 1e-7 and zeros
    report(13, ok, f"theta derivatives at q=0.15 max abs {err:.2e} (<= 1e-7); parity zeros exact: {zeros}")
    assert ok


def test_c14_zagier(report):
    def lhs(q, z, N=400):
        if z == 1:
            return product(q, N)
        out, poch = 0.0, 1.0
        for n in range(N):
            poch *= 1 - z * q**n
            out += poch * z**n
        return out

    err = max(abs(zagier_rhs(q, z).value - lhs(q, z)) for q, z in ((0.3, 0.5), (0.1, 1)))
    ok = err <= 1e-7
    report(14, ok, f"Zagier identity at (0.3,0.5), (0.1,1) max abs {err:.2e} (<= 1e-7)")
    assert ok


def test_c15_selftest(report):
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "sqseries", "selftest"], capture_output=True, text=True, timeout=600, check=False
    )
    elapsed = time.perf_counter() - t0
    ok = proc.returncode == 0 and elapsed < 300
    report(15, ok, f"selftest exit {proc.returncode} in {elapsed:.1f} s (< 300 s)")
    assert ok, proc.stdout[-2000:] + proc.stderr[-2000:]
