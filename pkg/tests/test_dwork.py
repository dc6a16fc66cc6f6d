import math
import random
from fractions import Fraction

import pytest

from dworkseries.dwork import (DworkOperator, NonContractionError, SElement, ThetaTable,
                               bmu_polynomial, boyarsky_check, build_xi_explicit,
                               crude_tail_bound, eigen_check, g_identity_check, kernel_table,
                               b_pm1_polynomial, normalize_by_slot, tail_bound, theta_coeffs)
from dworkseries.hypergeom import phi1_series, phi_series
from dworkseries.lattice import GateFailure, PointConfiguration, dwork_family, hexagon
from dworkseries.padic import INF, PiAdicNumber, make_pi_power
from dworkseries.series import PiAdicRing, TruncatedSeries, to_piadic

# pi-orders of b_0..b_13 at p = 3, from an independent series expansion
P3_PI_ORDERS = [0, 1, 2, 3, 6, 5, 10, 9, 8, 5, 6, 7, 8, 11]


def theta_by_recurrence(p, size):
    """b_i from theta' = pi (1 - p t^(p-1)) theta."""
    pi = make_pi_power(p, 1)
    b = [PiAdicNumber.one(p)]
    for i in range(size):
        rhs = b[i]
        if i - p + 1 >= 0:
            rhs = rhs - b[i - p + 1].scale(p)
        b.append((pi * rhs).scale(Fraction(1, i + 1)))
    return b


@pytest.mark.parametrize("p", [3, 5, 7])
def test_theta_against_recurrence(p):
    t = theta_coeffs(p, 40)
    assert [t[i] for i in range(41)] == theta_by_recurrence(p, 40)


def test_theta_small_indices():
    for p in (3, 5, 7):
        t = theta_coeffs(p, p)
        assert t[0] == PiAdicNumber.one(p)
        for i in range(p):
            assert t[i] == make_pi_power(p, i).scale(Fraction(1, math.factorial(i)))


def test_theta_p3_orders():
    t = theta_coeffs(3, 13)
    assert [t.pi_order(i) for i in range(14)] == P3_PI_ORDERS


@pytest.mark.parametrize("p", [3, 5, 7])
def test_theta_lower_bound(p):
    t = theta_coeffs(p, 60)
    assert all(t.valuation(i) >= ThetaTable.lower_bound(p, i) for i in range(61))


def test_theta_text_round_trip():
    t = ThetaTable(5, 12)
    assert ThetaTable.from_text(5, t.to_text()).coeffs == t.coeffs


def test_bmu_examples():
    cfg = dwork_family(2)
    theta = theta_coeffs(3, 10)
    assert bmu_polynomial(cfg, (0, 0, 0), theta).poly == TruncatedSeries.constant(PiAdicRing(3), 2, 0)
    b = bmu_polynomial(cfg, (2, 2, 2), theta)
    want = {(0, 0): Fraction(-3, 2), (1, 1): Fraction(-3)}
    assert {e: c for e, c in b.poly.terms.items()} == {
        e: PiAdicNumber.from_rational(3, q) for e, q in want.items()}
    assert sorted(b.solutions) == [(0, 1, 1), (2, 0, 0)]
    assert bmu_polynomial(cfg, (1, 1, 0), theta).empty


@pytest.mark.parametrize("p", [3, 5, 7])
def test_b_constant_term(p):
    for cfg in (dwork_family(2), hexagon()):
        B = b_pm1_polynomial(cfg, p)
        c0 = B[(0,) * cfg.N]
        assert c0 == PiAdicNumber.from_rational(p, Fraction(-p, math.factorial(p - 1)))


@pytest.mark.parametrize("cfg,p,w", [(dwork_family(2), 3, 11), (hexagon(), 3, 5),
                                     (dwork_family(3), 5, 9)], ids=["dwork2", "hexagon", "dwork3"])
def test_kernel_table_matches_direct(cfg, p, w):
    theta = theta_coeffs(p, w)
    table = kernel_table(cfg, theta, w, w)
    for mu, s in table.items():
        direct = bmu_polynomial(cfg, mu, theta, degree=w)
        assert direct.poly == s
        assert all(sum(nu) == mu[0] for nu in direct.solutions)
        assert s.valuation() >= Fraction(mu[0] * (p - 1), p * p)


def _random_element(op, rng, zero_a0=False):
    p = op.p
    comps = {}
    for rho in op.interior:
        if zero_a0 and rho == op.a0_hat:
            continue
        terms = {}
        for _ in range(3):
            e = tuple(rng.randint(0, 1) for _ in range(op.config.N))
            c = [Fraction(rng.randint(-9, 9), rng.choice([1, 2, 5])) * p ** rng.randint(0, 2)
                 for _ in range(p - 1)]
            terms[e] = PiAdicNumber(p, c)
        comps[rho] = TruncatedSeries(PiAdicRing(p), op.config.N, op.degree, terms)
    return SElement(p, op.config.N, op.degree, comps)


def test_alpha_basics():
    op = DworkOperator(dwork_family(2), 3, 2, 4)
    assert op.alpha_star(op.zero()).element.valuation() == INF
    eta = op.alpha_star(op.seed()).element
    assert eta[op.a0_hat] == b_pm1_polynomial(op.config, 3).retruncate(4)


def test_alpha_norm_bound():
    rng = random.Random(7)
    op = DworkOperator(hexagon(), 3, 2, 2)
    for _ in range(10):
        xi = _random_element(op, rng)
        assert op.alpha_star(xi).element.valuation() >= xi.valuation() + 1
        xi = _random_element(op, rng, zero_a0=True)
        assert op.alpha_star(xi).element.valuation() > xi.valuation() + 1


def test_eta_a0_reduces_to_phi1():
    rng = random.Random(3)
    cfg = dwork_family(2)
    op = DworkOperator(cfg, 3, 3, 6)
    phi1 = to_piadic(phi1_series(cfg, 3).retruncate(6), 3)
    for _ in range(5):
        xi = _random_element(op, rng)
        xi.components[op.a0_hat] = TruncatedSeries.constant(PiAdicRing(3), 2, 6)
        xi = xi.map(lambda s: s.map_coefficients(lambda c: c if c.valuation() >= 0 else c.scale(27)))
        assert xi.in_T(op.a0_hat)
        u = op.alpha_star(xi).element[op.a0_hat].scale(Fraction(1, 3))
        assert u.valuation() == 0
        assert (u - phi1).valuation() >= 1


def test_tail_bound_is_rigorous():
    cfg = dwork_family(2)
    small, big = DworkOperator(cfg, 3, 2, 6), DworkOperator(cfg, 3, 6, 6)
    xi = normalize_by_slot(big.explicit_eigenvector(), cfg.a0_hat)
    full = big.alpha_star(xi).element
    cut = small.alpha_star(xi)
    for rho, s in cut.element.components.items():
        assert (full[rho] - s).valuation() >= cut.tails[rho[0]]
    for r0 in (1, 2):
        assert tail_bound(3, 2, r0, 3) >= crude_tail_bound(3, 2, r0)


def test_eigenvector_identity():
    op = DworkOperator(dwork_family(2), 3, 4, 9)
    xi = op.explicit_eigenvector()
    assert xi[op.a0_hat] == to_piadic(phi_series(op.config, 9), 3)
    margin, tol = eigen_check(op, xi, precision=3)
    assert tol == 3 and margin >= tol


def test_fixed_point():
    op = DworkOperator(dwork_family(2), 3, 4, 9)
    fp = op.iterate_to_fixed_point(precision=4)
    finite = [d for d in fp.decay if d != INF]
    assert finite == sorted(set(finite))
    assert fp.contraction_ratio < 1
    ref = normalize_by_slot(op.explicit_eigenvector(), op.a0_hat)
    assert (fp.element - ref).valuation() >= 3
    again = op.iterate_to_fixed_point(seed=fp.element, precision=4)
    assert again.steps == 0


def test_beta_normalizes():
    op = DworkOperator(dwork_family(2), 3, 2, 6)
    out = op.beta(op.seed())
    assert out[op.a0_hat] == TruncatedSeries.constant(PiAdicRing(3), 2, 6)


def test_non_contraction_alarm(monkeypatch):
    op = DworkOperator(dwork_family(2), 3, 2, 4)
    flip = [op.seed().scale(2), op.seed()]
    calls = iter(range(100))
    monkeypatch.setattr(op, "beta", lambda x, precision=None: flip[next(calls) % 2])
    with pytest.raises(NonContractionError):
        op.iterate_to_fixed_point(max_iters=5)


def test_gate_required():
    with pytest.raises(GateFailure):
        DworkOperator(PointConfiguration(((0,), (0,), (1,))), 3, 2, 2)


def test_g_identity():
    rows = g_identity_check(3, 8, 4)
    assert rows[0].target == PiAdicNumber.from_rational(3, 3)
    assert all(r.margin >= 4 for r in rows)
    rows5 = g_identity_check(5, 4, 3)
    assert all(r.margin >= 3 for r in rows5)


def test_boyarsky():
    sums = boyarsky_check(3, 12)
    assert sums[0][1] == PiAdicNumber.from_rational(3, -3)
    assert sums[0][2] >= 1
    assert sums[-1][2] > 3
    for p in (5, 7):
        assert boyarsky_check(p, 8)[-1][2] >= 3


def test_xi_explicit_is_integral():
    xi = build_xi_explicit(hexagon(), 2, 4, 5)
    assert xi.valuation() == 0
    assert len(xi.support()) == 8
