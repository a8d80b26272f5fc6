# Where the integral representation holds, and what happens outside.
# Run: python3 demos/02_region_and_conditioning.py
import cmath

from sqseries.errors import RegionViolation
from sqseries.quadrature import QuadratureConfig
from sqseries.sequences import Geometric, square_series_sum
from sqseries.transforms import gsq, theta_poly_power

ref = lambda q, y: square_series_sum(Geometric(y), q, 1).value  # noqa: E731

# inside: real 0 < q < 1 and |cz| < 1
print("gsq(0.3, 0.9, 0.9) err", abs(gsq(0.3, 0.9, 0.9).value - ref(0.3, 0.81)))

# complex q is refused by default
try:
    gsq(0.3j, 0.5, 1)
except RegionViolation as exc:
    print("refused:", exc)

# override evaluates anyway and flags the result; the value drifts from the series
lenient = QuadratureConfig(strict=False)
for arg in (0.05, 0.1, 1.0):
    q = 0.3 * cmath.exp(1j * arg)
    r = gsq(q, 0.5, 1, lenient, override=True)
    print(f"arg q = {arg}: warnings {r.warnings} converged {r.converged} err {abs(r.value - ref(q, 0.5)):.1e}")

# power kernels: high order at large |y| loses digits through cancellation
for m in (2, 6, 10):
    r = theta_poly_power(m, 0.2, 0.9, 1, lenient)
    exact = sum(n**m * 0.2 ** (n * n) * 0.9**n for n in range(60))
    print(f"m={m:2d} converged {r.converged} rel err {abs(r.value - exact) / abs(exact):.1e}")
