# Stirling numbers, OGF derivative transforms and exponential square series.
# Run: python3 demos/03_stirling_and_exponential.py
import math

from sqseries.special import chromatic_mk, chromatic_series
from sqseries.stirling import neg_polylog, stirling2_row
from sqseries.transforms import esq, etilde

for n in range(7):
    print(n, stirling2_row(n))

# sum n^m x^n, exact rational evaluation rounded once
print("Li_{-3}(1/2) =", neg_polylog(3, 0.5))

# sum q^{n^2} (rz)^n / n! and the binomial-exponent variant
print("esq(0.8, 1, 1)   ", esq(0.8, 1, 1).value.real)
print("etilde(0.5, -1, 1)", etilde(0.5, -1, 1).value.real)
# etilde(q, r, z) = esq(sqrt q, r / sqrt q, z)
q, r = 0.5, 1.0
print("identity gap", abs(etilde(q, r, 1).value - esq(math.sqrt(q), r / math.sqrt(q), 1).value))

# connected-graph style generating function, squared
print("M_2(0.5)", chromatic_mk(2, 0.5).value.real, "Cauchy product", chromatic_series(2, 0.5).real)
