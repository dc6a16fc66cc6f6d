"""
Specializing t to integers
==========================

Phi itself does not converge at |t| = 1, but the ratio Phi(t)/Phi(t^p) is
congruent to the polynomial Phi_1 mod p, so its value mod p is stable once
Phi_1(t) is a unit.  Points where Phi_1 vanishes mod p are rejected.
"""
from dworkseries import dwork_family
from dworkseries.congruence import OutsideDomainError, Specialization, specialize_and_check

cfg = dwork_family(2)
for vals in [(0, 0), (1, 2), (1, 1), (2, 2)]:
    try:
        c = specialize_and_check(cfg, Specialization(3, vals), [9, 18, 27])
        print(vals, "residues mod 3:", c.details["residues"])
    except OutsideDomainError as exc:
        print(vals, "rejected:", exc)

# mod 9 the truncations disagree; only the mod p statement is proved
c = specialize_and_check(cfg, Specialization(3, (1, 2), 2), [9, 18, 27])
print("mod 9:", c.details["residues"])
