"""
H = pG and the Boyarsky evaluation
==================================

In one variable the eigenvector of the operator is explicit.  Its
coefficients must come out as p (-1)^l l!; the l = p - 1 case is the
p-adic Gamma value -p Gamma_p(p) = (-1)^(p+1) p!.
"""
from dworkseries import boyarsky_check, g_identity_check

for row in g_identity_check(3, 8, 4):
    print(row.index, row.terms, "terms, margin", row.margin, "(raw", row.raw_margin, ")")

for p in (3, 5, 7):
    sums = boyarsky_check(p, 12)
    print(p, [str(m) for _, _, m in sums])
