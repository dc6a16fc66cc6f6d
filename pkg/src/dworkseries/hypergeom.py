"""The A-hypergeometric series Phi, its truncation Phi_1, and GKZ residuals."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .lattice import PointConfiguration, nonnegative_solutions
from .series import ZZ, TruncatedSeries


def _difference_columns(config: PointConfiguration) -> list:
    a0 = config.a0
    return [tuple(x - y for x, y in zip(a, a0)) for a in config.points[1:]]


def multinomial(parts: Sequence[int]) -> int:
    """(sum parts)! / prod(parts!) as an exact integer."""
    out = math.factorial(sum(parts))
    for k in parts:
        out //= math.factorial(k)
    return out


def enumerate_Lplus(config: PointConfiguration, degree: int) -> list:
    """Elements l of L_+ with l_1 + ... + l_N <= degree, as (l_0, ..., l_N).

    A vector l_1..l_N >= 0 extends to an element of L exactly when
    sum l_i (a_i - a_0) = 0; then l_0 = -(l_1 + ... + l_N).
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    sols = nonnegative_solutions(_difference_columns(config), (0,) * config.n, degree)
    return [(-sum(l),) + l for l in sols]


def contiguous_series(config: PointConfiguration, rho: Sequence[int], degree: int,
                      ring=ZZ) -> TruncatedSeries:
    """Integer series attached to a cone point rho (weight rho_0 >= 1).

    Sums (-1)^(rho_0 - 1 + |l|) (rho_0 - 1 + |l|)! / prod l_i! * t^l over
    l >= 0 with sum l_i (a_i - a_0) = rho_0 a_0 - (rho_1, ..., rho_n).  For
    rho = (1, a_0) this is Phi.
    """
    rho0 = rho[0]
    if rho0 < 1:
        raise ValueError("rho must have positive weight")
    rhs = tuple(rho0 * a - r for a, r in zip(config.a0, rho[1:]))
    terms = {}
    for l in nonnegative_solutions(_difference_columns(config), rhs, degree):
        k = rho0 - 1 + sum(l)
        c = math.factorial(k)
        for x in l:
            c //= math.factorial(x)
        terms[l] = (-1) ** k * c
    s = TruncatedSeries(ZZ, config.N, degree, terms)
    return s if ring == ZZ else s.change_ring(ring)


def phi_series(config: PointConfiguration, degree: int, ring=ZZ) -> TruncatedSeries:
    """Phi(t) = sum over L_+ of (-1)^|l| |l|! / prod l_i! * t^l, |l| <= degree."""
    terms = {}
    for l in enumerate_Lplus(config, degree):
        tail = l[1:]
        k = sum(tail)
        terms[tail] = (-1) ** k * multinomial(tail)
    s = TruncatedSeries(ZZ, config.N, degree, terms)
    return s if ring == ZZ else s.change_ring(ring)


def phi1_series(config: PointConfiguration, p: int) -> TruncatedSeries:
    """The part of Phi of total degree <= p - 1 (a polynomial)."""
    return phi_series(config, p - 1)


# -- GKZ operators -----------------------------------------------------------

@dataclass(frozen=True)
class HypergeometricOperator:
    """Either a box operator for a relation l or the Euler operator Z_i."""

    kind: str
    data: tuple

    @classmethod
    def box(cls, l) -> "HypergeometricOperator":
        return cls("box", tuple(l))

    @classmethod
    def euler(cls, i: int) -> "HypergeometricOperator":
        return cls("euler", (i,))


@dataclass
class OperatorResidual:
    """Residual of an operator applied to lambda_0^-1 Phi.

    ``terms`` maps full exponent vectors (e_0, ..., e_N) to integers;
    ``reliable`` holds the exponents whose value is fully determined by the
    truncated input.
    """

    terms: dict
    reliable: set = field(default_factory=set)
    checked: int = 0

    def reliable_nonzero(self) -> dict:
        return {e: c for e, c in self.terms.items() if e in self.reliable and c}

    def is_zero_on_reliable(self) -> bool:
        return not self.reliable_nonzero()


def _falling(x: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= x - j
    return out


def solution_terms(config: PointConfiguration, degree: int) -> dict:
    """lambda_0^-1 Phi as {(e_0, ..., e_N): coefficient} over the full lambda's."""
    out = {}
    for l in enumerate_Lplus(config, degree):
        k = -l[0]
        out[(l[0] - 1,) + l[1:]] = (-1) ** k * multinomial(l[1:])
    return out


def apply_operator(op: HypergeometricOperator, config: PointConfiguration,
                   degree: int) -> OperatorResidual:
    terms = solution_terms(config, degree)
    N = config.N
    if op.kind == "euler":
        (i,) = op.data
        out = {}
        for e, c in terms.items():
            if i == 0:
                eig = sum(e) + 1
            else:
                eig = sum(config.points[j][i - 1] * e[j] for j in range(N + 1)) + config.a0[i - 1]
            out[e] = eig * c
        return OperatorResidual(out, set(out), len(out))
    if op.kind != "box":
        raise ValueError(f"unknown operator kind {op.kind!r}")
    l = op.data
    if len(l) != N + 1:
        raise ValueError("relation vector has wrong length")
    plus = tuple(max(x, 0) for x in l)
    minus = tuple(max(-x, 0) for x in l)
    out: dict = {}
    for e, c in terms.items():
        for part, sign in ((plus, 1), (minus, -1)):
            coef = c
            for ei, k in zip(e, part):
                if k:
                    coef *= _falling(ei, k)
                    if not coef:
                        break
            if coef:
                f = tuple(a - b for a, b in zip(e, part))
                out[f] = out.get(f, 0) + sign * coef
    reliable = set()
    for f in out:
        # both partner source terms must lie inside the truncation
        if (sum(f[1:]) + sum(plus[1:]) <= degree) and (sum(f[1:]) + sum(minus[1:]) <= degree):
            reliable.add(f)
    return OperatorResidual(out, reliable, len(reliable))
