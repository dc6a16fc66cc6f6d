"""Dwork's kernel F(lambda, x), the operator alpha*, its normalization beta,
and the explicit eigenvector built from contiguous hypergeometric series.

Elements of the series space are modelled by :class:`SElement`: a finite map
from interior cone points rho (weight rho_0 <= ``wmax``) to truncated series
in t = lambda / lambda_0 with pi-adic coefficients.  The coefficient attached
to rho is the one multiplying (pi lambda_0)^(-rho_0) x^(-rho).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .hypergeom import contiguous_series
from .lattice import ConeData, PointConfiguration, unique_interior_gate
from .padic import INF, PiAdicNumber, check_prime, make_pi_power, truncate_precision
from .series import PiAdicRing, TruncatedSeries, divide_by_unit, to_piadic

log = logging.getLogger(__name__)


class NonContractionError(RuntimeError):
    pass


# -- theta ---------------------------------------------------------------------

class ThetaTable:
    """Coefficients b_i of theta(t) = exp(pi (t - t^p)) = sum b_i t^i."""

    def __init__(self, p: int, size: int | None = None):
        check_prime(p, allow_two=True)
        self.p = p
        self.coeffs: list = []
        if size is not None:
            self.extend(size)

    def extend(self, size: int) -> "ThetaTable":
        p = self.p
        for i in range(len(self.coeffs), size + 1):
            b = PiAdicNumber.zero(p)
            for k in range(i // p + 1):
                j = i - p * k
                b = b + make_pi_power(p, j + k).scale(
                    Fraction((-1) ** k, math.factorial(j) * math.factorial(k)))
            self.coeffs.append(b)
        return self

    def __getitem__(self, i: int) -> PiAdicNumber:
        if i >= len(self.coeffs):
            self.extend(i)
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def valuation(self, i: int):
        return self[i].valuation()

    def pi_order(self, i: int):
        return self[i].pi_order()

    @staticmethod
    def lower_bound(p: int, i: int) -> Fraction:
        return Fraction(i * (p - 1), p * p)

    def to_text(self) -> str:
        return "\n".join(f"{i} : {b.to_text()}" for i, b in enumerate(self.coeffs))

    @classmethod
    def from_text(cls, p: int, text: str) -> "ThetaTable":
        table = cls(p)
        for ln in text.strip().splitlines():
            i, rhs = ln.split(" : ", 1)
            if int(i) != len(table.coeffs):
                raise ValueError("theta table rows out of order")
            table.coeffs.append(PiAdicNumber.from_text(rhs))
        return table


_THETA_CACHE: dict = {}


def theta_coeffs(p: int, size: int) -> ThetaTable:
    """b_0..b_size, shared per prime."""
    table = _THETA_CACHE.get(p)
    if table is None:
        table = _THETA_CACHE[p] = ThetaTable(p)
    table.extend(size)
    return table


# -- B_mu ----------------------------------------------------------------------

@dataclass
class BmuPolynomial:
    """B_mu(1, t_1, ..., t_N) together with the solutions nu it was built from."""

    mu: tuple
    poly: TruncatedSeries
    solutions: list = field(default_factory=list)

    @property
    def weight(self) -> int:
        return self.mu[0]

    @property
    def empty(self) -> bool:
        return not self.solutions


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def bmu_polynomial(config: PointConfiguration, mu, theta: ThetaTable,
                   degree: int | None = None) -> BmuPolynomial:
    """B_mu(1, t) from all nu >= 0 with sum nu_i lift_i = mu.

    A point outside M has no solutions and gives the zero polynomial; the
    result's ``empty`` flag reports that.
    """
    mu = tuple(mu)
    w = mu[0]
    degree = w if degree is None else degree
    p = theta.p
    lifts = config.lifts
    terms: dict = {}
    sols = []
    if w >= 0:
        for nu in _compositions(w, config.N + 1):
            if tuple(sum(k * a[c] for k, a in zip(nu, lifts)) for c in range(config.n + 1)) != mu:
                continue
            sols.append(nu)
            if sum(nu[1:]) > degree:
                continue
            c = PiAdicNumber.one(p)
            for k in nu:
                if k:
                    c = c * theta[k]
            e = nu[1:]
            terms[e] = terms[e] + c if e in terms else c
    if not sols:
        log.warning("mu=%s has no solutions; B_mu is zero", mu)
    return BmuPolynomial(mu, TruncatedSeries(PiAdicRing(p), config.N, degree, terms), sols)


def kernel_table(config: PointConfiguration, theta: ThetaTable, max_weight: int,
                 degree: int) -> dict:
    """All nonzero B_mu(1, t) with mu_0 <= max_weight, truncated at ``degree``.

    One pass over nu in Z_{>=0}^(N+1), grouped by mu = sum nu_i lift_i.
    Every contributing nu has sum(nu) == mu_0 by construction.
    """
    p = theta.p
    theta.extend(max_weight)
    lifts = config.lifts
    dim = config.n + 1
    N1 = config.N + 1
    raw: dict = {}
    one = PiAdicNumber.one(p)
    # iterate weight by weight so every nu has sum == w
    for w in range(max_weight + 1):
        stack = [(0, w, (0,) * dim, one, ())]
        while stack:
            i, budget, vec, coef, expo = stack.pop()
            if i == N1 - 1:
                k = budget
                vec2 = tuple(v + k * a for v, a in zip(vec, lifts[i]))
                c = coef * theta[k] if k else coef
                e = expo + ((k,) if i > 0 else ())
                if sum(e) > degree or c.is_zero():
                    continue
                bucket = raw.setdefault(vec2, {})
                bucket[e] = bucket[e] + c if e in bucket else c
                continue
            for k in range(budget + 1):
                vec2 = tuple(v + k * a for v, a in zip(vec, lifts[i]))
                c = coef * theta[k] if k else coef
                e = expo + ((k,) if i > 0 else ())
                if sum(e) > degree:
                    break
                stack.append((i + 1, budget - k, vec2, c, e))
    ring = PiAdicRing(p)
    return {mu: TruncatedSeries(ring, config.N, degree, t) for mu, t in raw.items()}


# -- S elements ----------------------------------------------------------------

@dataclass
class SElement:
    """Finite model of sum_rho xi_rho(lambda) (pi lambda_0)^(-rho_0) x^(-rho)."""

    p: int
    nvars: int
    degree: int
    components: dict = field(default_factory=dict)

    def __getitem__(self, rho) -> TruncatedSeries:
        rho = tuple(rho)
        s = self.components.get(rho)
        if s is None:
            return TruncatedSeries.zero(PiAdicRing(self.p), self.nvars, self.degree)
        return s

    def support(self) -> list:
        return sorted((r for r, s in self.components.items() if not s.is_zero()),
                      key=lambda r: (r[0], r))

    def valuation(self):
        """-log_p of the norm (min over components of Gauss valuations)."""
        return min((s.valuation() for s in self.components.values()), default=INF)

    def norm(self) -> float:
        v = self.valuation()
        return 0.0 if v == INF else float(self.p) ** (-float(v))

    def _combine(self, other: "SElement", sign: int) -> "SElement":
        keys = set(self.components) | set(other.components)
        out = {}
        for r in keys:
            s = self[r] + other[r] if sign > 0 else self[r] - other[r]
            out[r] = s
        return SElement(self.p, self.nvars, min(self.degree, other.degree), out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "SElement":
        return SElement(self.p, self.nvars, self.degree,
                        {r: s.scale(c) for r, s in self.components.items()})

    def map(self, f) -> "SElement":
        return SElement(self.p, self.nvars, self.degree,
                        {r: f(s) for r, s in self.components.items()})

    def truncate(self, K) -> "SElement":
        if K is None:
            return self
        return self.map(lambda s: s.map_coefficients(lambda c: truncate_precision(c, K)))

    def restrict(self, max_weight: int) -> "SElement":
        return SElement(self.p, self.nvars, self.degree,
                        {r: s for r, s in self.components.items() if r[0] <= max_weight})

    def in_T(self, a0_hat) -> bool:
        """Slot a_0 is exactly 1 and the norm is exactly 1."""
        one = TruncatedSeries.constant(PiAdicRing(self.p), self.nvars, self.degree)
        return self[a0_hat] == one and self.valuation() == 0

    def to_text(self) -> str:
        parts = [f"# S-element p={self.p} nvars={self.nvars} degree={self.degree}"]
        for r in self.support():
            parts.append(f"## rho = {' '.join(map(str, r))}")
            parts.append(self.components[r].to_text())
        return "\n".join(parts)


def seed_element(p: int, config: PointConfiguration, degree: int) -> SElement:
    """The element with slot a_0 equal to 1 and every other slot 0."""
    one = TruncatedSeries.constant(PiAdicRing(p), config.N, degree)
    return SElement(p, config.N, degree, {config.a0_hat: one})


# -- tail bounds ---------------------------------------------------------------

def crude_tail_bound(p: int, wmax: int, rho0: int) -> Fraction:
    """Valuation bound on the dropped terms of eta_rho, from ord b_i >= i(p-1)/p^2.

    Terms with nu_0 >= wmax + 1 have valuation at least
    nu_0((p-1)/p - 1/(p-1)) + rho_0(1/(p-1) - (p-1)/p^2) over |xi|.
    """
    c1 = Fraction(p - 1, p) - Fraction(1, p - 1)
    c2 = Fraction(1, p - 1) - Fraction(p - 1, p * p)
    return (wmax + 1) * c1 + rho0 * c2


def _min_plus_parts(vals: list, nparts: int) -> list:
    """best[w] = min over <= nparts parts summing to w of sum vals[part]."""
    W = len(vals)
    best = [INF] * W
    best[0] = Fraction(0)
    for _ in range(nparts):
        nxt = list(best)
        for w in range(W):
            for i in range(1, w + 1):
                if best[w - i] != INF and vals[i] != INF:
                    v = best[w - i] + vals[i]
                    if v < nxt[w]:
                        nxt[w] = v
        best = nxt
    return best


def tail_bound(p: int, wmax: int, rho0: int, nparts: int,
               theta: ThetaTable | None = None) -> Fraction:
    """Rigorous valuation bound on the terms of eta_rho dropped by the weight cut.

    Uses the exact valuations of b_i while they beat the linear bound and
    switches to :func:`crude_tail_bound` once that alone dominates.
    """
    theta = theta or theta_coeffs(p, 0)
    c1 = Fraction(p - 1, p) - Fraction(1, p - 1)
    c2 = Fraction(1, p - 1) - Fraction(p - 1, p * p)
    best = None
    nu0 = wmax + 1
    table_w = -1
    mins: list = []
    while True:
        crude = nu0 * c1 + rho0 * c2
        if best is not None and crude >= best:
            return best
        w = p * nu0 - rho0
        if w > table_w:
            table_w = max(2 * w, 16)
            theta.extend(table_w)
            mins = _min_plus_parts([theta[i].valuation() for i in range(table_w + 1)], nparts)
        v = Fraction(rho0 - nu0, p - 1) + mins[w]
        best = v if best is None else min(best, v)
        nu0 += 1


# -- the operator ----------------------------------------------------------------

@dataclass
class AlphaResult:
    element: SElement
    tails: dict

    def tail(self):
        return min(self.tails.values(), default=INF)


class DworkOperator:
    """alpha* and beta for a configuration, a prime and truncation bounds.

    ``wmax`` bounds the weight of the support (rho_0 <= wmax), ``degree`` is
    the total-degree bound in t.
    """

    def __init__(self, config: PointConfiguration, p: int, wmax: int, degree: int,
                 require_gate: bool = True, allow_p2: bool = False):
        check_prime(p, allow_two=allow_p2)
        if wmax < 1:
            raise ValueError("weight bound must be >= 1")
        self.config = config
        self.p = p
        self.wmax = wmax
        self.degree = degree
        if require_gate:
            unique_interior_gate(config)
        self.cone = ConeData(config)
        self.a0_hat = config.a0_hat
        self.interior = [cp.mu for w in range(1, wmax + 1)
                         for cp in self.cone.points_of_weight(w) if cp.interior]
        self.theta = theta_coeffs(p, p * wmax)
        self._kernel = None

    @property
    def kernel(self) -> dict:
        if self._kernel is None:
            self._kernel = kernel_table(self.config, self.theta,
                                        self.p * self.wmax - 1, self.degree)
        return self._kernel

    def bmu(self, mu) -> TruncatedSeries:
        s = self.kernel.get(tuple(mu))
        if s is None:
            return TruncatedSeries.zero(PiAdicRing(self.p), self.config.N, self.degree)
        return s

    def zero(self) -> SElement:
        return SElement(self.p, self.config.N, self.degree, {})

    def seed(self) -> SElement:
        return seed_element(self.p, self.config, self.degree)

    def tail_bound(self, rho0: int) -> Fraction:
        return tail_bound(self.p, self.wmax, rho0, self.config.N + 1, self.theta)

    def alpha_star(self, xi: SElement) -> AlphaResult:
        p = self.p
        frob = {nu: s.retruncate(self.degree).frobenius(p)
                for nu, s in xi.components.items() if not s.is_zero() and nu[0] <= self.wmax}
        ring = PiAdicRing(p)
        out = {}
        for rho in self.interior:
            acc = TruncatedSeries.zero(ring, self.config.N, self.degree)
            for nu, fs in frob.items():
                mu = tuple(p * a - b for a, b in zip(nu, rho))
                if mu[0] < 0:
                    continue
                B = self.kernel.get(mu)
                if B is None:
                    continue
                acc = acc + (B * fs).scale(make_pi_power(p, rho[0] - nu[0]))
            if not acc.is_zero():
                out[rho] = acc
        v = xi.valuation()
        tails = {}
        for r0 in {r[0] for r in self.interior}:
            tails[r0] = self.tail_bound(r0) + v if v != INF else INF
        return AlphaResult(SElement(p, self.config.N, self.degree, out), tails)

    def beta(self, xi: SElement, precision=None) -> SElement:
        """alpha*(xi) / eta_{a0}, computed as (eta / p) / (eta_{a0} / p)."""
        eta = self.alpha_star(xi).element
        p = self.p
        unit = eta[self.a0_hat].scale(Fraction(1, p))
        out = {}
        for rho, s in eta.components.items():
            out[rho] = divide_by_unit(s.scale(Fraction(1, p)), unit)
        res = SElement(p, self.config.N, self.degree, out)
        return res.truncate(precision)

    def iterate_to_fixed_point(self, seed: SElement | None = None, max_iters: int = 50,
                               target_valuation=None, precision=None) -> "FixedPointResult":
        x = (seed or self.seed()).truncate(precision)
        target = target_valuation if target_valuation is not None else precision
        decay = []
        for _ in range(max_iters):
            y = self.beta(x, precision)
            d = (y - x).valuation()
            if decay and d != INF and d <= decay[-1]:
                raise NonContractionError(
                    f"difference valuation did not increase: {decay[-1]} -> {d}")
            decay.append(d)
            x = y
            log.debug("beta step %d: difference valuation %s", len(decay), d)
            if d == INF or (target is not None and d >= target):
                break
        return FixedPointResult(x, decay, self.p)

    def explicit_eigenvector(self) -> SElement:
        return build_xi_explicit(self.config, self.wmax, self.degree, self.p, self.cone)


@dataclass
class FixedPointResult:
    element: SElement
    decay: list
    p: int

    @property
    def steps(self) -> int:
        return sum(1 for d in self.decay if d != INF)

    @property
    def converged(self) -> bool:
        return bool(self.decay)

    def ratios(self) -> list:
        """|d_{k+1}| / |d_k| for consecutive finite differences."""
        out = []
        for a, b in zip(self.decay, self.decay[1:]):
            if a != INF and b != INF:
                out.append(float(self.p) ** (-float(b - a)))
        return out

    @property
    def contraction_ratio(self):
        r = self.ratios()
        return max(r) if r else 0.0


def build_xi_explicit(config: PointConfiguration, wmax: int, degree: int, p: int,
                      cone: ConeData | None = None, ring=None) -> SElement:
    """Slots xi_rho from the contiguous series for every interior rho, rho_0 <= wmax.

    Slot a_0 is Phi.  The series have integer coefficients; they are moved
    into the pi-adic ring unless ``ring`` says otherwise.
    """
    cone = cone or ConeData(config)
    comps = {}
    for w in range(1, wmax + 1):
        for cp in cone.points_of_weight(w):
            if cp.interior:
                s = contiguous_series(config, cp.mu, degree)
                comps[cp.mu] = s if ring is not None else to_piadic(s, p)
    return SElement(p, config.N, degree, comps)


def normalize_by_slot(xi: SElement, rho0_slot) -> SElement:
    """xi / xi_{slot}, slotwise."""
    d = xi[rho0_slot]
    return xi.map(lambda s: divide_by_unit(s, d))


# -- the G / H identity and the Boyarsky evaluation --------------------------------

@dataclass
class IdentityRow:
    index: int
    value: PiAdicNumber
    target: PiAdicNumber
    terms: int
    cutoff: Fraction

    @property
    def raw_margin(self):
        return (self.value - self.target).valuation()

    @property
    def margin(self):
        # the omitted terms are only known to have valuation >= cutoff
        return min(self.raw_margin, self.cutoff)


def _factorial_lower(m: int, p: int) -> Fraction:
    # ord_p(m!) >= floor(m / p) >= (m - p + 1) / p
    return max(Fraction(0), Fraction(m - p + 1, p))


def g_identity_check(p: int, L: int, K) -> list:
    """Coefficients of (pi u)^(-1-l) in gamma_-(theta(u) G(u^p)) against p (-1)^l l!.

    The infinite sum over m is cut once every remaining term provably has
    valuation >= K: the lower bound used for term m is nondecreasing in m
    (slope 1 - 1/(p-1) > 0), so a margin of K or more means "at least K".
    """
    K = Fraction(K)
    rows = []
    theta = theta_coeffs(p, 0)
    for l in range(L + 1):
        total = PiAdicNumber.zero(p)
        m = max(0, -((-(1 + l)) // p) - 1)
        used = 0
        while True:
            i = p * (1 + m) - 1 - l
            lb = (Fraction(i * (p - 1), p * p) + Fraction(l - m, p - 1)
                  + _factorial_lower(m, p))
            if lb >= K:
                break
            term = theta[i] * make_pi_power(p, l - m)
            total = total + term.scale((-1) ** m * math.factorial(m))
            used += 1
            m += 1
        target = PiAdicNumber.from_rational(p, p * (-1) ** l * math.factorial(l))
        rows.append(IdentityRow(l, total, target, used, K))
    return rows


def boyarsky_check(p: int, M_terms: int) -> list:
    """Partial sums S_M = -p sum_{l<=M} b_{pl} (-1)^l l! pi^(-l) and their margins.

    Returns (M, S_M, valuation of S_M - (-1)^(p+1) p!).
    """
    theta = theta_coeffs(p, p * M_terms)
    target = PiAdicNumber.from_rational(p, (-1) ** (p + 1) * math.factorial(p))
    acc = PiAdicNumber.zero(p)
    out = []
    for l in range(M_terms + 1):
        acc = acc + (theta[p * l] * make_pi_power(p, -l)).scale(-p * (-1) ** l * math.factorial(l))
        out.append((l, acc, (acc - target).valuation()))
    return out


def eigen_check(op: DworkOperator, xi: SElement | None = None, precision=None):
    """(margin, tolerance) for alpha*(xi) - p xi with xi the explicit eigenvector."""
    xi = xi or op.explicit_eigenvector()
    res = op.alpha_star(xi)
    diff = res.element - xi.scale(op.p)
    tol = res.tail()
    if precision is not None:
        tol = min(tol, Fraction(precision))
    return diff.valuation(), tol


def b_pm1_polynomial(config: PointConfiguration, p: int) -> TruncatedSeries:
    """B_{(p-1) a0_hat}(1, t) as a pi-adic polynomial."""
    theta = theta_coeffs(p, p - 1)
    mu = tuple((p - 1) * c for c in config.a0_hat)
    return bmu_polynomial(config, mu, theta).poly
