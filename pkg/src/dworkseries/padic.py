"""Exact arithmetic in Q(pi) with pi^(p-1) = -p.

An element is stored as ``sum(q[m] * pi**m for m in range(p - 1))`` with
rational ``q[m]``.  Because the powers ``pi**0 .. pi**(p-2)`` have pairwise
distinct valuations modulo 1, the valuation of a sum is the minimum of the
valuations of its terms, which makes ``valuation`` exact and cheap.

Valuations are normalized so that ``ord(p) == 1`` and ``ord(pi) == 1/(p-1)``.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

INF = math.inf

Rational = Union[int, Fraction]


class PrecisionError(ArithmeticError):
    """Raised when a precision cap leaves no usable digits."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int, allow_two: bool = False) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be a prime, got {p!r}")
    if p == 2 and not allow_two:
        raise ValueError("p = 2 is excluded: the contraction argument needs an odd prime")


def ord_p(x: Rational, p: int) -> Union[int, float]:
    """p-adic order of a rational number (``inf`` for zero)."""
    x = Fraction(x)
    if x == 0:
        return INF
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _balanced_mod(a: int, m: int) -> int:
    r = a % m
    if 2 * r > m:
        r -= m
    return r


def reduce_rational(q: Fraction, p: int, e: int) -> Fraction:
    """Balanced representative of ``q`` modulo ``p**e`` (``e`` may be negative).

    The result ``r`` satisfies ``ord_p(q - r) >= e`` and is canonical: two
    rationals congruent modulo ``p**e`` give the same ``r``.
    """
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    num, den = q.numerator, q.denominator
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    # q = num / (den * p^k) with den prime to p
    mod_exp = e + k
    if mod_exp <= 0:
        return Fraction(0)
    m = p ** mod_exp
    r = _balanced_mod(num * pow(den, -1, m), m)
    return Fraction(r, p ** k)


class PiAdicNumber:
    """Element of Q(pi), pi^(p-1) = -p, with an optional precision cap.

    ``cap`` (a rational or ``None``) means the value is only known modulo
    elements of valuation ``>= cap``.
    """

    __slots__ = ("p", "coeffs", "cap")

    def __init__(self, p: int, coeffs: Iterable[Rational] = (), cap=None):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > p - 1:
            coeffs = _fold(p, coeffs)
        coeffs += [Fraction(0)] * (p - 1 - len(coeffs))
        self.p = p
        self.coeffs = tuple(coeffs)
        self.cap = None if cap is None or cap == INF else Fraction(cap)

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_rational(cls, p: int, q: Rational) -> "PiAdicNumber":
        return cls(p, [q])

    @classmethod
    def zero(cls, p: int) -> "PiAdicNumber":
        return cls(p)

    @classmethod
    def one(cls, p: int) -> "PiAdicNumber":
        return cls(p, [1])

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, PiAdicNumber):
            return self.p == other.p and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "PiAdicNumber":
        if isinstance(other, PiAdicNumber):
            if other.p != self.p:
                raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return PiAdicNumber(self.p, [other])
        raise TypeError(f"cannot combine PiAdicNumber with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        cap = _min_cap(self.cap, other.cap)
        return PiAdicNumber(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)], cap)

    __radd__ = __add__

    def __neg__(self):
        return PiAdicNumber(self.p, [-a for a in self.coeffs], self.cap)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        p = self.p
        n = p - 1
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                k = i + j
                if k >= n:
                    out[k - n] -= p * a * b
                else:
                    out[k] += a * b
        cap = None
        if self.cap is not None:
            cap = self.cap + other.valuation_lower()
        if other.cap is not None:
            c2 = other.cap + self.valuation_lower()
            cap = c2 if cap is None else min(cap, c2)
        return PiAdicNumber(p, out, cap)

    __rmul__ = __mul__

    def scale(self, q: Rational) -> "PiAdicNumber":
        q = Fraction(q)
        cap = None if self.cap is None else self.cap + ord_p(q, self.p)
        return PiAdicNumber(self.p, [q * a for a in self.coeffs], cap)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(Fraction(1) / Fraction(other))
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = PiAdicNumber.one(self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "PiAdicNumber":
        """Exact inverse in Q(pi); X^(p-1) + p is Eisenstein, so Q(pi) is a field."""
        if self.is_zero():
            raise ZeroDivisionError("inversion of 0")
        p = self.p
        n = p - 1
        # columns of the multiplication-by-self matrix on the basis pi^j
        cols = []
        for j in range(n):
            cols.append((self * make_pi_power(p, j)).coeffs)
        mat = [[cols[j][i] for j in range(n)] + [Fraction(int(i == 0))] for i in range(n)]
        sol = _solve(mat)
        cap = None
        if self.cap is not None:
            v = self.valuation()
            cap = self.cap - 2 * v
            if cap <= -v:
                raise PrecisionError("precision exhausted while inverting")
        return PiAdicNumber(p, sol, cap)

    invert_unit = inverse

    # -- valuations -----------------------------------------------------
    def valuation(self):
        """Exact valuation of the stored representative, capped at ``cap``.

        Returns ``inf`` for an uncapped zero; for a capped value whose
        representative reaches the cap, returns the cap (meaning "at least").
        """
        v = self._rep_valuation()
        if self.cap is not None and v >= self.cap:
            return self.cap
        return v

    def _rep_valuation(self):
        n = self.p - 1
        best = INF
        for m, q in enumerate(self.coeffs):
            if q:
                v = ord_p(q, self.p) + Fraction(m, n)
                if v < best:
                    best = v
        return best

    def valuation_lower(self):
        return self.valuation()

    def pi_order(self):
        """Valuation measured in units of ord(pi)."""
        v = self.valuation()
        return v if v == INF else v * (self.p - 1)

    def norm(self) -> float:
        v = self.valuation()
        return 0.0 if v == INF else float(self.p) ** (-float(v))

    def truncate(self, K) -> "PiAdicNumber":
        return truncate_precision(self, K)

    # -- rendering ------------------------------------------------------
    def to_text(self) -> str:
        terms = [f"{q}*pi^{m}" for m, q in enumerate(self.coeffs) if q]
        body = " + ".join(terms) if terms else "0"
        cap = "inf" if self.cap is None else str(self.cap)
        return f"[p={self.p}] {body} (mod val >= {cap})"

    @classmethod
    def from_text(cls, text: str) -> "PiAdicNumber":
        m = _TEXT_RE.fullmatch(text.strip())
        if not m:
            raise ValueError(f"malformed pi-adic literal: {text!r}")
        p = int(m.group("p"))
        coeffs = [Fraction(0)] * (p - 1)
        body = m.group("body").strip()
        if body != "0":
            for term in body.split(" + "):
                q, e = term.split("*pi^")
                coeffs[int(e)] += Fraction(q)
        cap = m.group("cap")
        return cls(p, coeffs, None if cap == "inf" else Fraction(cap))

    def __repr__(self) -> str:
        terms = []
        for m, q in enumerate(self.coeffs):
            if not q:
                continue
            if m == 0:
                terms.append(str(q))
            else:
                coef = "" if q == 1 else ("-" if q == -1 else f"{q}*")
                terms.append(f"{coef}pi" + (f"^{m}" if m > 1 else ""))
        s = " + ".join(terms) if terms else "0"
        if self.cap is not None:
            s += f" + O(val {self.cap})"
        return s


_TEXT_RE = re.compile(r"\[p=(?P<p>\d+)\] (?P<body>.*) \(mod val >= (?P<cap>[-0-9/]+|inf)\)")


def _min_cap(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _fold(p: int, coeffs: list) -> list:
    """Reduce a coefficient list of any length using pi^(p-1) = -p."""
    n = p - 1
    out = [Fraction(0)] * n
    for k, c in enumerate(coeffs):
        if c:
            q, r = divmod(k, n)
            out[r] += c * (-p) ** q
    return out


def _solve(mat: list) -> list:
    """Gauss-Jordan elimination on an augmented square system over Q."""
    n = len(mat)
    for col in range(n):
        piv = next(r for r in range(col, n) if mat[r][col] != 0)
        mat[col], mat[piv] = mat[piv], mat[col]
        inv = 1 / mat[col][col]
        mat[col] = [x * inv for x in mat[col]]
        for r in range(n):
            if r != col and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    return [mat[r][n] for r in range(n)]


@lru_cache(maxsize=None)
def make_pi_power(p: int, e: int) -> PiAdicNumber:
    """Normal-form representative of pi**e (negative ``e`` allowed)."""
    check_prime(p, allow_two=True)
    n = p - 1
    q, r = divmod(e, n)
    # pi^e = (pi^n)^q * pi^r = (-p)^q * pi^r, valid for negative q too
    coeffs = [Fraction(0)] * n
    coeffs[r] = Fraction(-p) ** q
    return PiAdicNumber(p, coeffs)


def valuation(x) -> Union[Fraction, float]:
    if isinstance(x, PiAdicNumber):
        return x.valuation()
    raise TypeError(f"valuation needs a PiAdicNumber, got {type(x).__name__}")


def truncate_precision(x: PiAdicNumber, K) -> PiAdicNumber:
    """Canonical representative of ``x`` modulo elements of valuation ``>= K``."""
    K = Fraction(K)
    if K < 0:
        raise ValueError("precision must be non-negative")
    p, n = x.p, x.p - 1
    out = []
    for m, q in enumerate(x.coeffs):
        # q*pi^m vanishes mod K iff ord_p(q) >= K - m/n
        e = math.ceil(K - Fraction(m, n))
        out.append(reduce_rational(q, p, e))
    cap = K if x.cap is None else min(K, x.cap)
    return PiAdicNumber(p, out, cap)
