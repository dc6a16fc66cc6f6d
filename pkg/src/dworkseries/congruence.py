"""Congruence checks tying Phi, Phi_1, B_mu and alpha* together.

Every check produces a :class:`Check` with an achieved margin (a valuation),
the tolerance it is held to, and a pass flag.  :class:`CongruenceReport`
collects checks and renders them as aligned text or as JSON.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .dwork import DworkOperator, b_pm1_polynomial, normalize_by_slot
from .hypergeom import phi1_series, phi_series
from .lattice import PointConfiguration, unique_interior_gate
from .padic import INF, check_prime, ord_p
from .series import TruncatedSeries, divide_by_unit, reduce_mod, to_piadic


class OutsideDomainError(ValueError):
    """Phi_1 does not evaluate to a unit mod p at the requested point."""


def _fmt(v) -> str:
    if v is None:
        return "-"
    if v == INF:
        return "inf"
    return str(Fraction(v))


def _json_val(v):
    if v is None:
        return None
    if v == INF:
        return "inf"
    return str(Fraction(v))


@dataclass
class Check:
    name: str
    margin: object
    tolerance: object
    passed: bool
    digest: str = ""
    details: dict = field(default_factory=dict)
    informational: bool = False

    def as_dict(self) -> dict:
        d = {"check": self.name, "margin": _json_val(self.margin),
             "tolerance": _json_val(self.tolerance), "pass": self.passed}
        if self.digest:
            d["inputs"] = self.digest
        if self.informational:
            d["informational"] = True
        if self.details:
            d["details"] = self.details
        return d


@dataclass
class CongruenceReport:
    checks: list = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks):
        for c in checks:
            self.add(c)

    @property
    def passed(self) -> bool:
        # informational entries never fail a report
        return all(c.passed for c in self.checks if not c.informational)

    def sorted_checks(self) -> list:
        return sorted(self.checks, key=lambda c: c.name)

    def to_text(self) -> str:
        rows = [("check", "margin", "tolerance", "pass")]
        for c in self.sorted_checks():
            flag = "PASS" if c.passed else "FAIL"
            if c.informational:
                flag += " (info)"
            rows.append((c.name, _fmt(c.margin), _fmt(c.tolerance), flag))
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        lines = ["  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip() for r in rows]
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)

    def to_structured(self) -> str:
        payload = {"pass": self.passed,
                   "checks": [c.as_dict() for c in self.sorted_checks()]}
        return json.dumps(payload, indent=2, sort_keys=True)

    def render(self, fmt: str = "text") -> str:
        if fmt == "text":
            return self.to_text()
        if fmt in ("structured", "json"):
            return self.to_structured()
        raise ValueError(f"unknown report format {fmt!r}")


def inputs_digest(config: PointConfiguration, p: int, **bounds) -> str:
    blob = json.dumps({"p": p, "points": config.points, **bounds}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


# -- mod p ratio ----------------------------------------------------------------

def per_degree_margins(diff: TruncatedSeries, p: int) -> list:
    """min ord_p over each homogeneous layer of an integer series."""
    out = []
    for k in range(diff.degree + 1):
        layer = diff.layer(k)
        out.append(min((ord_p(c, p) for c in layer.values()), default=INF))
    return out


def verify_mod_p_ratio(config: PointConfiguration, p: int, degree: int,
                       require_gate: bool = True, allow_p2: bool = False) -> Check:
    """Phi == Phi_1 * Phi(t^p) mod p through total degree ``degree``, over Z."""
    check_prime(p, allow_two=allow_p2)
    if require_gate:
        unique_interior_gate(config)
    phi = phi_series(config, degree)
    phi1 = phi1_series(config, p).retruncate(degree)
    diff = phi - phi1 * phi.frobenius(p)
    margins = per_degree_margins(diff, p)
    margin = min(margins)
    name = f"mod-p ratio congruence (p={p}, degree<={degree})"
    if p == 2:
        name += " [experimental, unproven for p=2]"
    return Check(name, margin, 1, margin >= 1, inputs_digest(config, p, degree=degree),
                 {"per_degree": [_json_val(m) for m in margins]},
                 informational=(p == 2))


def ratio_series(config: PointConfiguration, p: int, degree: int) -> TruncatedSeries:
    """Phi(t) / Phi(t^p) over Z, truncated at ``degree``."""
    phi = phi_series(config, degree)
    return divide_by_unit(phi, phi.frobenius(p))


# -- operator route -------------------------------------------------------------

def operator_ratio(op: DworkOperator):
    """eta_{a0} / p for xi = explicit eigenvector normalized by Phi, with its tolerance.

    alpha* is Frobenius-semilinear, so on xi / Phi it returns
    p Phi / Phi(t^p) times the normalized element; the a0-slot therefore
    carries the ratio.
    """
    xi = normalize_by_slot(op.explicit_eigenvector(), op.a0_hat)
    res = op.alpha_star(xi)
    eta = res.element[op.a0_hat].scale(Fraction(1, op.p))
    return eta, res.tails.get(1, INF) - 1


def verify_ratio_via_operator(config: PointConfiguration, p: int, wmax: int,
                              degree: int) -> Check:
    op = DworkOperator(config, p, wmax, degree)
    eta, tol = operator_ratio(op)
    direct = to_piadic(ratio_series(config, p, degree), p)
    margin = (eta - direct).valuation()
    return Check(f"operator vs direct ratio (p={p}, D_x={wmax}, degree<={degree})",
                 margin, tol, margin >= tol,
                 inputs_digest(config, p, wmax=wmax, degree=degree))


def margin_growth(config: PointConfiguration, p: int, degree: int, small: int,
                  large: int) -> Check:
    """The operator-route margin at weight bound ``large`` beats the one at ``small``."""
    if large <= small:
        raise ValueError("need large > small")
    direct = to_piadic(ratio_series(config, p, degree), p)
    ms = []
    for w in (small, large):
        eta, _ = operator_ratio(DworkOperator(config, p, w, degree))
        ms.append((eta - direct).valuation())
    return Check(f"operator margin grows with D_x ({small} -> {large}, p={p})",
                 ms[1] - ms[0] if INF not in ms else INF, 0, ms[1] > ms[0],
                 inputs_digest(config, p, degree=degree, small=small, large=large),
                 {"margins": [_json_val(m) for m in ms]})


def verify_seed_reduction(config: PointConfiguration, p: int, degree: int) -> Check:
    """(eta_{a0} / p) at the seed element reduces to Phi_1 mod p."""
    op = DworkOperator(config, p, 1, degree)
    eta = op.alpha_star(op.seed()).element[op.a0_hat].scale(Fraction(1, p))
    target = to_piadic(phi1_series(config, p).retruncate(degree), p)
    margin = (eta - target).valuation()
    return Check(f"seed eta / p == Phi_1 mod p (p={p})", margin, 1, margin >= 1,
                 inputs_digest(config, p, degree=degree))


# -- B_{(p-1) a0} -----------------------------------------------------------------

def verify_b_congruence(config: PointConfiguration, p: int) -> Check:
    """p^-1 B_{(p-1)a0}(1, t) == Phi_1 mod p, coefficient by coefficient."""
    B = b_pm1_polynomial(config, p)
    lhs = reduce_mod(B.scale(Fraction(1, p)), p)
    rhs = reduce_mod(phi1_series(config, p).retruncate(B.degree), p)
    diff = lhs - rhs
    ok = diff.is_zero()
    return Check(f"B_(p-1)a0 / p == Phi_1 mod p (p={p})", INF if ok else 0, 1, ok,
                 inputs_digest(config, p))


def verify_b_valuations(config: PointConfiguration, p: int) -> Check:
    """All coefficients of B_{(p-1)a0}(1, t) have valuation >= 1, constant term -p/(p-1)!."""
    B = b_pm1_polynomial(config, p)
    margin = B.valuation()
    c0 = B[(0,) * config.N]
    expected = Fraction(-p, math.factorial(p - 1))
    exact = (not any(c0.coeffs[1:])) and c0.coeffs[0] == expected and c0.valuation() == 1
    return Check(f"B_(p-1)a0 valuations >= 1, constant -p/(p-1)! (p={p})", margin, 1,
                 margin >= 1 and exact, inputs_digest(config, p),
                 {"constant_term": c0.to_text()})


# -- specializations --------------------------------------------------------------

@dataclass(frozen=True)
class Specialization:
    p: int
    values: tuple
    s: int = 1

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.s < 1:
            raise ValueError("modulus power must be >= 1")


def phi1_value(config: PointConfiguration, sp: Specialization) -> int:
    return phi1_series(config, sp.p).evaluate(sp.values) % sp.p


def in_domain(config: PointConfiguration, sp: Specialization) -> bool:
    return phi1_value(config, sp) % sp.p != 0


def specialize_and_check(config: PointConfiguration, sp: Specialization,
                         degrees: Sequence[int]) -> Check:
    """Evaluate Phi(t)/Phi(t^p) at integer t mod p^s for several truncations.

    Mod p the ratio series is congruent to the polynomial Phi_1, so the
    evaluated residue must not depend on the truncation and must be a unit.
    For s > 1 the result is reported but not held to anything.
    """
    if len(sp.values) != config.N:
        raise ValueError(f"need {config.N} values, got {len(sp.values)}")
    p, s = sp.p, sp.s
    if not in_domain(config, sp):
        raise OutsideDomainError(
            f"Phi_1{sp.values} = {phi1_series(config, p).evaluate(sp.values)} "
            f"is divisible by {p}")
    mod = p ** s
    residues = []
    for D in degrees:
        r = ratio_series(config, p, D)
        residues.append(r.evaluate(sp.values) % mod)
    stable = len(set(residues)) == 1
    unit = residues[0] % p != 0 and residues[0] % p == phi1_value(config, sp)
    name = f"specialized residue t={sp.values} mod {p}^{s}"
    return Check(name, None, None, stable and unit,
                 inputs_digest(config, p, values=sp.values, s=s, degrees=list(degrees)),
                 {"residues": residues, "degrees": list(degrees)},
                 informational=(s > 1))


def rejection_check(config: PointConfiguration, sp: Specialization) -> Check:
    """A failed entry for a specialization outside the unit domain of Phi_1."""
    v = phi1_series(config, sp.p).evaluate(sp.values)
    return Check(f"specialized residue t={sp.values}: outside domain", None, None, False,
                 inputs_digest(config, sp.p, values=sp.values),
                 {"phi1_value": v, "divisible_by_p": v % sp.p == 0})


# -- bundles ----------------------------------------------------------------------

def permutation_invariance(config: PointConfiguration, p: int, degree: int,
                           perm: Sequence[int]) -> Check:
    a = verify_mod_p_ratio(config, p, degree)
    b = verify_mod_p_ratio(config.permuted(perm), p, degree)
    same = a.details["per_degree"] == b.details["per_degree"] and a.passed == b.passed
    return Check(f"mod-p ratio invariant under relabeling {tuple(perm)}", None, None, same,
                 inputs_digest(config, p, degree=degree, perm=list(perm)))


def full_report(config: PointConfiguration, p: int, degree: int, wmax: int,
                allow_p2: bool = False) -> CongruenceReport:
    """Everything that can be checked for one configuration and prime."""
    report = CongruenceReport()
    if p == 2:
        if not allow_p2:
            check_prime(p)
        report.add(verify_mod_p_ratio(config, p, degree, allow_p2=True))
        return report
    unique_interior_gate(config)
    report.add(verify_mod_p_ratio(config, p, degree))
    report.add(verify_b_congruence(config, p))
    report.add(verify_b_valuations(config, p))
    report.add(verify_seed_reduction(config, p, min(degree, p - 1)))
    report.add(verify_ratio_via_operator(config, p, wmax, degree))
    return report
