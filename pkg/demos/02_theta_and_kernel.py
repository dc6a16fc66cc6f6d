"""
Splitting function and the kernel coefficients B_mu
===================================================

theta(t) = exp(pi (t - t^p)) with pi^(p-1) = -p.  Its coefficients b_i are
exact elements of Q(pi); their valuations drive every estimate on the
operator.
"""
from fractions import Fraction

from dworkseries import dwork_family, hexagon, theta_coeffs
from dworkseries.dwork import ThetaTable, bmu_polynomial, b_pm1_polynomial
from dworkseries.hypergeom import phi1_series
from dworkseries.series import reduce_mod

p = 3
t = theta_coeffs(p, 14)
for i in range(14):
    # pi-order next to the linear lower bound i(p-1)/p^2 (in pi units)
    print(i, t[i], "  pi-order", t.pi_order(i), "  bound", ThetaTable.lower_bound(p, i) * (p - 1))

# note: b_4 = 27/8 has pi-order 6, and b_11 has pi-order 7

cfg = dwork_family(2)
print(bmu_polynomial(cfg, (2, 2, 2), t).poly.to_text())    # -3 (1/2 + t1 t2)

# B_{(p-1) a0} / p reduces to Phi_1 mod p
for cfg in (dwork_family(2), hexagon()):
    for p in (3, 5):
        B = b_pm1_polynomial(cfg, p)
        lhs = reduce_mod(B.scale(Fraction(1, p)), p)
        rhs = reduce_mod(phi1_series(cfg, p).retruncate(B.degree), p)
        print(cfg.N, p, lhs == rhs, "constant term", B[(0,) * cfg.N])
