"""
The series Phi and its mod-p ratio
==================================

For the Dwork family in dimension 2 the series Phi is the generating
function of the central binomial coefficients in u = t_1 t_2.  Here we build
it from the point configuration and check the congruence
Phi(t) = Phi_1(t) Phi(t^p) mod p.
"""
from dworkseries import dwork_family, phi_series, phi1_series, relation_lattice_basis
from dworkseries.congruence import verify_mod_p_ratio

cfg = dwork_family(2)
print("points:", cfg.points)
print("relations:", relation_lattice_basis(cfg))   # one relation, (-2, 1, 1)

phi = phi_series(cfg, 12)
print([phi[(l, l)] for l in range(7)])              # 1, 2, 6, 20, 70, ...

# Phi_1 keeps only total degree <= p - 1
for p in (3, 5, 7):
    print(p, dict(phi1_series(cfg, p).terms))

# the congruence, degree by degree; margin = min ord_p of the difference
for p in (3, 5, 7):
    c = verify_mod_p_ratio(cfg, p, 40)
    print(p, c.passed, c.details["per_degree"][:12])
