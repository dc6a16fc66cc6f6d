"""Sparse multivariate power series truncated at a total degree.

A :class:`TruncatedSeries` stores ``{exponent tuple: coefficient}`` for the
variables ``t_i = lambda_i / lambda_0`` and drops everything of total degree
above ``degree``.  Coefficients live in one of three rings: the integers,
the integers modulo ``p**s``, or :class:`~dworkseries.padic.PiAdicNumber`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .padic import INF, PiAdicNumber, ord_p


class NotInvertibleError(ArithmeticError):
    pass


class IntegerRing:
    name = "ZZ"
    zero = 0
    one = 1

    def normalize(self, c):
        return c

    def coerce(self, c):
        return int(c)

    def is_unit(self, c) -> bool:
        return c in (1, -1)

    def inverse(self, c):
        if not self.is_unit(c):
            raise NotInvertibleError(f"{c} is not a unit in ZZ")
        return c

    def valuation(self, c, p):
        return ord_p(c, p)

    def to_text(self, c) -> str:
        return str(c)

    def from_text(self, s: str):
        return int(s)

    def __eq__(self, other):
        return type(other) is IntegerRing

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "ZZ"


class IntegerModRing:
    """Z / p^s Z with balanced representatives."""

    def __init__(self, p: int, s: int):
        if s < 1:
            raise ValueError("modulus exponent must be >= 1")
        self.p, self.s = p, s
        self.modulus = p ** s
        self.name = f"ZZ/{p}^{s}"
        self.zero, self.one = 0, 1 % self.modulus

    def normalize(self, c):
        m = self.modulus
        r = c % m
        return r - m if 2 * r > m else r

    def coerce(self, c):
        if isinstance(c, Fraction):
            return self.normalize(c.numerator * pow(c.denominator, -1, self.modulus))
        return self.normalize(int(c))

    def is_unit(self, c) -> bool:
        return c % self.p != 0

    def inverse(self, c):
        if not self.is_unit(c):
            raise NotInvertibleError(f"{c} is not a unit mod {self.p}^{self.s}")
        return self.normalize(pow(c, -1, self.modulus))

    def valuation(self, c, p=None):
        c = self.normalize(c)
        if c == 0:
            return self.s
        return ord_p(c, self.p)

    def to_text(self, c) -> str:
        return str(c)

    def from_text(self, s: str):
        return self.normalize(int(s))

    def __eq__(self, other):
        return isinstance(other, IntegerModRing) and (other.p, other.s) == (self.p, self.s)

    def __hash__(self):
        return hash(("mod", self.p, self.s))

    def __repr__(self):
        return self.name


class PiAdicRing:
    """Coefficients in Q(pi); units are the elements of valuation 0."""

    def __init__(self, p: int):
        self.p = p
        self.name = f"Qp(pi),p={p}"
        self.zero = PiAdicNumber.zero(p)
        self.one = PiAdicNumber.one(p)

    def normalize(self, c):
        return c

    def coerce(self, c):
        if isinstance(c, PiAdicNumber):
            return c
        return PiAdicNumber.from_rational(self.p, c)

    def is_unit(self, c) -> bool:
        return not c.is_zero() and c.valuation() == 0

    def inverse(self, c):
        if not self.is_unit(c):
            raise NotInvertibleError(f"{c!r} is not a unit")
        return c.inverse()

    def valuation(self, c, p=None):
        return c.valuation()

    def to_text(self, c) -> str:
        return c.to_text()

    def from_text(self, s: str):
        return PiAdicNumber.from_text(s)

    def __eq__(self, other):
        return isinstance(other, PiAdicRing) and other.p == self.p

    def __hash__(self):
        return hash(("pi", self.p))

    def __repr__(self):
        return self.name


ZZ = IntegerRing()


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, PiAdicNumber) else c == 0


class TruncatedSeries:
    """Power series in ``nvars`` variables known up to total degree ``degree``."""

    __slots__ = ("ring", "nvars", "degree", "terms")

    def __init__(self, ring, nvars: int, degree: int, terms: Mapping | None = None):
        if degree < 0:
            raise ValueError("degree bound must be >= 0")
        self.ring = ring
        self.nvars = nvars
        self.degree = degree
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length (expected {nvars})")
            if sum(e) > degree:
                continue
            c = ring.normalize(c)
            if not _is_zero(c):
                clean[e] = c
        self.terms = clean

    # -- construction -------------------------------------------------------
    @classmethod
    def constant(cls, ring, nvars, degree, c=None):
        c = ring.one if c is None else ring.coerce(c)
        return cls(ring, nvars, degree, {(0,) * nvars: c})

    @classmethod
    def zero(cls, ring, nvars, degree):
        return cls(ring, nvars, degree)

    def copy_with(self, terms) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.nvars, self.degree, terms)

    def change_ring(self, ring, convert: Callable | None = None) -> "TruncatedSeries":
        convert = convert or ring.coerce
        return TruncatedSeries(ring, self.nvars, self.degree,
                               {e: convert(c) for e, c in self.terms.items()})

    def retruncate(self, degree: int) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.nvars, degree, self.terms)

    # -- basic queries ------------------------------------------------------
    def __getitem__(self, e):
        return self.terms.get(tuple(e), self.ring.zero)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        return self[(0,) * self.nvars]

    def layer(self, k: int) -> dict:
        return {e: c for e, c in self.terms.items() if sum(e) == k}

    def _check(self, other: "TruncatedSeries"):
        if self.ring != other.ring or self.nvars != other.nvars:
            raise ValueError(f"incompatible series: {self.ring}/{self.nvars} vs "
                             f"{other.ring}/{other.nvars}")

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.ring == other.ring and self.nvars == other.nvars
                and self.degree == other.degree and self.terms == other.terms)

    def __repr__(self):
        return f"TruncatedSeries({self.ring}, deg<={self.degree}, {len(self.terms)} terms)"

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        self._check(other)
        deg = min(self.degree, other.degree)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return TruncatedSeries(self.ring, self.nvars, deg, out)

    def __neg__(self):
        return self.copy_with({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        if isinstance(c, PiAdicNumber) or isinstance(self.ring, PiAdicRing):
            c = self.ring.coerce(c)
        return self.copy_with({e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        deg = min(self.degree, other.degree)
        out: dict = {}
        right = [(e, sum(e), c) for e, c in other.terms.items()]
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            room = deg - d1
            if room < 0:
                continue
            for e2, d2, c2 in right:
                if d2 > room:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return TruncatedSeries(self.ring, self.nvars, deg, out)

    __rmul__ = __mul__

    def map_coefficients(self, f: Callable) -> "TruncatedSeries":
        return self.copy_with({e: f(c) for e, c in self.terms.items()})

    # -- p-adic size ----------------------------------------------------------
    def valuation(self, p: int | None = None):
        """Minimum coefficient valuation (``inf`` for the zero series)."""
        best = INF
        for c in self.terms.values():
            v = self.ring.valuation(c, p)
            if v < best:
                best = v
        return best

    def gauss_norm(self, p: int | None = None) -> float:
        p = p or getattr(self.ring, "p", None)
        v = self.valuation(p)
        return 0.0 if v == INF else float(p) ** (-float(v))

    # -- substitution ---------------------------------------------------------
    def frobenius(self, p: int) -> "TruncatedSeries":
        """Substitute t_i -> t_i^p; exact through the same degree bound."""
        out = {}
        for e, c in self.terms.items():
            if p * sum(e) <= self.degree:
                out[tuple(p * x for x in e)] = c
        return self.copy_with(out)

    def evaluate(self, values: Iterable, reduce: Callable | None = None):
        """Evaluate at ``t = values`` (ring elements or ints)."""
        values = list(values)
        total = self.ring.zero
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * (v ** k)
            total = total + term
        return self.ring.normalize(total) if reduce is None else reduce(total)

    # -- serialization --------------------------------------------------------
    def to_text(self) -> str:
        head = f"# series ring={self.ring.name} nvars={self.nvars} degree={self.degree}"
        lines = [head]
        for e, c in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            lines.append(" ".join(map(str, e)) + " : " + self.ring.to_text(c))
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str, ring) -> "TruncatedSeries":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = dict(tok.split("=", 1) for tok in lines[0].split()[2:])
        if head["ring"] != ring.name:
            raise ValueError(f"ring mismatch: file has {head['ring']}, expected {ring.name}")
        nvars, degree = int(head["nvars"]), int(head["degree"])
        terms = {}
        for ln in lines[1:]:
            lhs, rhs = ln.split(" : ", 1)
            e = tuple(int(x) for x in lhs.split()) if lhs.strip() else ()
            terms[e] = ring.from_text(rhs)
        return cls(ring, nvars, degree, terms)


def _layers(s: TruncatedSeries) -> list:
    layers = [dict() for _ in range(s.degree + 1)]
    for e, c in s.terms.items():
        layers[sum(e)][e] = c
    return layers


def _mul_layers(x: dict, y: dict, acc: dict):
    for e1, c1 in x.items():
        for e2, c2 in y.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = c1 * c2
            acc[e] = acc[e] + v if e in acc else v


def divide_by_unit(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Return q with q * b == a through total degree min(deg a, deg b).

    Solved one homogeneous layer at a time, so only the constant term of
    ``b`` needs to be inverted.
    """
    a._check(b)
    ring = a.ring
    deg = min(a.degree, b.degree)
    b0 = b.constant_term()
    if _is_zero(b0) or not ring.is_unit(b0):
        raise NotInvertibleError("constant term of the divisor is not a unit")
    inv0 = ring.inverse(b0)
    al = _layers(a.retruncate(deg))
    bl = _layers(b.retruncate(deg))
    ql: list = []
    for k in range(deg + 1):
        acc = dict(al[k])
        rest: dict = {}
        for j in range(1, k + 1):
            if bl[j] and ql[k - j]:
                _mul_layers(ql[k - j], bl[j], rest)
        for e, c in rest.items():
            acc[e] = acc[e] - c if e in acc else -c
        layer = {}
        for e, c in acc.items():
            c = ring.normalize(c * inv0)
            if not _is_zero(c):
                layer[e] = c
        ql.append(layer)
    out = {}
    for layer in ql:
        out.update(layer)
    return TruncatedSeries(ring, a.nvars, deg, out)


def series_arith(a: TruncatedSeries, b: TruncatedSeries, op: str) -> TruncatedSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "sub":
        return a - b
    raise ValueError(f"unknown series operation {op!r}")


def frobenius_substitute(a: TruncatedSeries, p: int) -> TruncatedSeries:
    return a.frobenius(p)


def frobenius_guarantee(degree: int, p: int) -> int:
    """Highest input degree that feeds the Frobenius image below ``degree``."""
    return degree // p


def monomial(ring, nvars, degree, e, c=None) -> TruncatedSeries:
    return TruncatedSeries(ring, nvars, degree, {tuple(e): ring.one if c is None else ring.coerce(c)})


def to_piadic(s: TruncatedSeries, p: int) -> TruncatedSeries:
    ring = PiAdicRing(p)
    if s.ring == ring:
        return s
    return s.change_ring(ring, lambda c: PiAdicNumber.from_rational(p, c))


def reduce_mod(s: TruncatedSeries, p: int, power: int = 1) -> TruncatedSeries:
    """Image of an integer (or p-integral pi-adic rational) series in Z/p^power."""
    ring = IntegerModRing(p, power)

    def conv(c):
        if isinstance(c, PiAdicNumber):
            if any(c.coeffs[1:]):
                raise ValueError("coefficient is not rational; cannot reduce mod p^s")
            c = c.coeffs[0]
        c = Fraction(c)
        if ord_p(c.denominator, p) > 0:
            raise ValueError(f"{c} is not p-integral")
        return ring.coerce(c)

    return s.change_ring(ring, conv)
