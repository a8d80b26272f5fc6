# Theta values, closed-form constants and the Euler function.
# Run: python3 demos/01_theta_and_constants.py
import math

from sqseries.special import (
    euler_qp,
    euler_qp_cubed,
    phi_exp_value,
    psi_exp_value,
    theta2,
    theta3,
    theta4,
    theta_series,
)

# theta functions at a few nomes, integral vs plain series
for q in (0.05, 0.1, 0.2):
    for name, fn, i in (("theta2", theta2, 2), ("theta3", theta3, 3), ("theta4", theta4, 4)):
        r = fn(q)
        print(f"{name}({q}) = {r.value.real:.15f}  series diff {abs(r.value - theta_series(i, 0, q)):.1e}  nodes {r.nodes_used}")

# phi(e^{-k pi}) and psi(e^{-k pi}) against their closed forms
for k in (1, 2, 3, 5):
    rep = phi_exp_value(k)
    print(f"{rep.name:32s} {rep.computed.real:.12f} rel err {rep.rel_err:.1e}")
for k in (1, 2, 0.5):
    rep = psi_exp_value(k)
    print(f"{rep.name:32s} {rep.computed.real:.12f} rel err {rep.rel_err:.1e}")

# (q; q)_inf from two integrals, and its cube from one
q = 0.05
prod = math.prod(1 - q**n for n in range(1, 200))
print("euler_qp(0.05)", euler_qp(q).value.real, "product", prod)
print("euler_qp_cubed(0.3)", euler_qp_cubed(0.3).value.real)
