"""
The operator alpha* and the contraction beta
=============================================

Elements are finite maps rho -> series in t.  alpha* multiplies by the
kernel, applies Frobenius and keeps the interior cone points; beta divides
by the a0-slot.  Iterating beta from the seed converges to the explicit
eigenvector divided by Phi.
"""
from dworkseries import DworkOperator, dwork_family
from dworkseries.dwork import eigen_check, normalize_by_slot

cfg = dwork_family(2)
op = DworkOperator(cfg, p=3, wmax=4, degree=9)
print(len(op.interior), "interior cone points of weight <= 4")

# tail bounds: every dropped term has at least this valuation
print({k: str(v) for k, v in sorted(op.alpha_star(op.seed()).tails.items())})

# alpha*(xi) = p xi for the explicit eigenvector
xi = op.explicit_eigenvector()
print("eigen margin / tolerance:", eigen_check(op, xi, precision=3))

fp = op.iterate_to_fixed_point(precision=4)
print("difference valuations:", [str(d) for d in fp.decay])
print("measured contraction:", fp.contraction_ratio)

ref = normalize_by_slot(xi, cfg.a0_hat)
print("fixed point vs xi / Phi:", (fp.element - ref).valuation())
for rho in fp.element.support()[:4]:
    s = fp.element[rho]
    print(rho, [str(s[(k, k)]) for k in range(3)])
