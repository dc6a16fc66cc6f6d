"""Exact pi-adic tools for A-hypergeometric series and Dwork's operator.

The main entry points::

    from dworkseries import dwork_family, phi_series, DworkOperator

Submodules: ``padic`` (the ring Q(pi) with pi^(p-1) = -p), ``lattice``
(cones and interior points), ``series`` (truncated power series),
``hypergeom`` (Phi, Phi_1, GKZ residuals), ``dwork`` (theta, B_mu, alpha*,
beta), ``congruence`` (reports) and ``cli``.
"""
from .congruence import CongruenceReport, Specialization, full_report, verify_mod_p_ratio
from .dwork import (DworkOperator, SElement, ThetaTable, bmu_polynomial, boyarsky_check,
                    build_xi_explicit, g_identity_check, theta_coeffs)
from .hypergeom import enumerate_Lplus, phi1_series, phi_series
from .lattice import (ConeData, GateFailure, PointConfiguration, dwork_family, hexagon,
                      relation_lattice_basis, unique_interior_gate)
from .padic import PiAdicNumber, make_pi_power, truncate_precision
from .series import TruncatedSeries, divide_by_unit

__version__ = "0.1.0"
