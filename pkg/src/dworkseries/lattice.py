"""Exact integer and rational geometry of a lifted point configuration.

Every routine works on plain tuples of Python ints and ``Fraction`` so the
results are exact and deterministic.  Interiors are always relative: the
interior of the hull of ``a_1..a_N`` is taken inside its affine hull and the
faces of the cone are taken inside its linear span.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

Vector = tuple


class GeometryError(ValueError):
    pass


class DegenerateConeError(GeometryError):
    pass


class GateFailure(GeometryError):
    """The hull of a_1..a_N does not have a_0 as its unique interior lattice point."""

    def __init__(self, interior_points, a0):
        self.interior_points = list(interior_points)
        self.a0 = a0
        super().__init__(
            f"interior lattice points {self.interior_points} are not exactly [{a0}]"
        )


@dataclass(frozen=True)
class PointConfiguration:
    """Points a_0..a_N in Z^n; ``points[0]`` is the distinguished point a_0.

    a_1..a_N must be pairwise distinct.  a_0 may coincide with one of them,
    which is allowed so that degenerate inputs can still reach the gate.
    """

    points: tuple

    def __post_init__(self):
        pts = tuple(tuple(int(c) for c in row) for row in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise GeometryError("need a_0 and at least one further point (N >= 1)")
        n = len(pts[0])
        if n < 1:
            raise GeometryError("dimension must be positive")
        bad = [i for i, row in enumerate(pts) if len(row) != n]
        if bad:
            raise GeometryError(f"rows {bad} do not have length {n}")
        rest = pts[1:]
        if len(set(rest)) != len(rest):
            raise GeometryError("points a_1..a_N must be pairwise distinct")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "PointConfiguration":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.points[0])

    @property
    def N(self) -> int:
        return len(self.points) - 1

    @property
    def a0(self) -> Vector:
        return self.points[0]

    @property
    def lifts(self) -> tuple:
        return tuple((1,) + p for p in self.points)

    @property
    def a0_hat(self) -> Vector:
        return (1,) + self.a0

    def permuted(self, perm: Sequence[int]) -> "PointConfiguration":
        """Relabel a_1..a_N: new a_{i+1} = old a_{perm[i]+1}."""
        return PointConfiguration((self.a0,) + tuple(self.points[1 + k] for k in perm))


def dwork_family(n: int) -> PointConfiguration:
    """a_0 = (1,..,1) and a_i = n * e_i: the Dwork family in dimension n."""
    pts = [(1,) * n]
    for i in range(n):
        pts.append(tuple(n if j == i else 0 for j in range(n)))
    return PointConfiguration(tuple(pts))


def hexagon() -> PointConfiguration:
    return PointConfiguration(((0, 0), (1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)))


# -- linear algebra over Q and Z ---------------------------------------------

def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def rref(rows: Sequence[Sequence]) -> tuple[list, list]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def rational_nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of {x in Q^ncols : rows . x = 0}."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(x)
    return basis


def primitive(v: Sequence) -> tuple:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def hermite_rows(rows: Sequence[Sequence[int]]) -> list:
    """Row-style Hermite normal form of the Z-span of ``rows`` (zero rows dropped)."""
    mat = [list(r) for r in rows]
    if not mat:
        return []
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        # gcd-reduce column c among rows r.. with unimodular row operations
        while True:
            nz = [i for i in range(r, len(mat)) if mat[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(mat[i][c]))
            mat[r], mat[i0] = mat[i0], mat[r]
            done = True
            for i in range(r + 1, len(mat)):
                if mat[i][c]:
                    q = mat[i][c] // mat[r][c]
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[r])]
                    if mat[i][c]:
                        done = False
            if done:
                break
        if r < len(mat) and mat[r][c] != 0:
            if mat[r][c] < 0:
                mat[r] = [-a for a in mat[r]]
            for i in range(r):
                q = mat[i][c] // mat[r][c]
                if q:
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[r])]
            r += 1
            if r == len(mat):
                break
    return [tuple(row) for row in mat[:r]]


def _pivot_col(row) -> int:
    return next(i for i, x in enumerate(row) if x)


def lattice_contains(hnf: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    v = list(v)
    for row in hnf:
        c = _pivot_col(row)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int) -> list:
    """Z-basis of {x in Z^ncols : matrix . x = 0}, Hermite-reduced from the right.

    The basis is normalized by taking the Hermite form of the reversed
    coordinates, so each vector has a positive last nonzero entry.
    """
    nrows = len(matrix)
    # rows of [A^T | I]; integer row reduction of the left block
    aug = [[matrix[i][j] for i in range(nrows)] + [int(k == j) for k in range(ncols)]
           for j in range(ncols)]
    red = hermite_rows(aug) if nrows else []
    kernel = [row[nrows:] for row in red if not any(row[:nrows])]
    rev = hermite_rows([tuple(reversed(v)) for v in kernel])
    return [tuple(reversed(v)) for v in rev]


# -- configuration data --------------------------------------------------------

@dataclass(frozen=True)
class SpanBasis:
    """Linear span of the lifts (RREF over Q) and a Hermite basis of ZA."""

    dim: int
    rational_basis: tuple
    pivots: tuple
    lattice_basis: tuple

    def in_span(self, v) -> bool:
        return rank(list(self.rational_basis) + [list(v)]) == self.dim

    def in_lattice(self, v) -> bool:
        return lattice_contains(self.lattice_basis, v)


def lift_and_span(config: PointConfiguration) -> SpanBasis:
    basis, pivots = rref(config.lifts)
    hnf = hermite_rows(config.lifts)
    return SpanBasis(len(basis), tuple(tuple(r) for r in basis), tuple(pivots), tuple(hnf))


def _cone_normals(generators: Sequence[Vector]) -> list:
    gens = sorted(set(generators))
    basis, _ = rref(gens)
    d = len(basis)
    if d == 1:
        return []
    normals = set()
    for subset in itertools.combinations(gens, d - 1):
        # h = sum c_k basis_k with h . g = 0 for g in subset
        eqs = [[dot(b, g) for b in basis] for g in subset]
        null = rational_nullspace(eqs, d)
        if len(null) != 1:
            continue
        h = [sum(c * b[i] for c, b in zip(null[0], basis)) for i in range(len(gens[0]))]
        h = primitive(h)
        vals = [dot(h, g) for g in gens]
        if all(v >= 0 for v in vals):
            normals.add(h)
        elif all(v <= 0 for v in vals):
            normals.add(tuple(-x for x in h))
    if not normals:
        raise DegenerateConeError("cone has no facets inside its span")
    return sorted(normals)


@dataclass(frozen=True)
class FacetSystem:
    """Cone facet normals h (h . lift >= 0) and affine facets of Delta.

    ``delta_inequalities`` holds normals h on (1, a); a point a lies in Delta
    iff (1, a) is in the affine span and every h . (1, a) >= 0.
    """

    cone_normals: tuple
    delta_inequalities: tuple = field(default=())


def cone_facets(config: PointConfiguration, span: SpanBasis | None = None) -> FacetSystem:
    cone = _cone_normals(config.lifts)
    delta = _cone_normals(config.lifts[1:])
    return FacetSystem(tuple(cone), tuple(delta))


def interior_lattice_points(config: PointConfiguration) -> list:
    """Lattice points in the relative interior of the hull of a_1..a_N."""
    rest = config.points[1:]
    lifts = config.lifts[1:]
    basis, _ = rref(lifts)
    normals = _cone_normals(lifts)
    lo = [min(p[i] for p in rest) for i in range(config.n)]
    hi = [max(p[i] for p in rest) for i in range(config.n)]
    found = []
    for a in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        v = (1,) + a
        if rank(list(basis) + [v]) != len(basis):
            continue
        if all(dot(h, v) > 0 for h in normals):
            found.append(a)
    return found


def unique_interior_gate(config: PointConfiguration) -> Vector:
    """Return a_0 if it is the unique interior lattice point of Delta, else raise."""
    found = interior_lattice_points(config)
    if found != [config.a0]:
        raise GateFailure(found, config.a0)
    return config.a0


@dataclass(frozen=True, order=True)
class ConePoint:
    mu: tuple
    interior: bool = False

    @property
    def weight(self) -> int:
        return self.mu[0]


class ConeData:
    """Cached span, lattice and facets of the cone C over the lifts."""

    def __init__(self, config: PointConfiguration):
        self.config = config
        self.span = lift_and_span(config)
        self.facets = cone_facets(config, self.span)
        self._lo = [min(p[i] for p in config.points) for i in range(config.n)]
        self._hi = [max(p[i] for p in config.points) for i in range(config.n)]

    def classify(self, mu) -> ConePoint | None:
        """ConePoint for ``mu`` if it lies in M = C cap ZA, else None."""
        if mu[0] < 0:
            return None
        pairings = [dot(h, mu) for h in self.facets.cone_normals]
        if any(v < 0 for v in pairings):
            return None
        if not self.span.in_lattice(mu):
            return None
        if mu[0] == 0:
            # only the origin sits at weight 0 of a pointed cone
            return ConePoint(tuple(mu), False) if not any(mu) else None
        return ConePoint(tuple(mu), all(v > 0 for v in pairings))

    def in_M(self, mu) -> bool:
        return self.classify(mu) is not None

    def in_M_interior(self, mu) -> bool:
        cp = self.classify(mu)
        return cp is not None and cp.interior

    def points_of_weight(self, w: int) -> Iterator[ConePoint]:
        ranges = [range(w * l, w * h + 1) for l, h in zip(self._lo, self._hi)]
        for m in itertools.product(*ranges):
            cp = self.classify((w,) + m)
            if cp is not None:
                yield cp


def enumerate_M(config: PointConfiguration, span: SpanBasis | None = None,
                facets: FacetSystem | None = None, weight_bound: int = 0,
                interior_only: bool = False, cone: ConeData | None = None) -> list:
    """All points of M (or of its interior) with weight <= ``weight_bound``.

    Sorted by weight, then lexicographically.
    """
    if weight_bound < 0:
        raise ValueError("weight_bound must be >= 0")
    cone = cone or ConeData(config)
    out = []
    for w in range(weight_bound + 1):
        for cp in cone.points_of_weight(w):
            if cp.interior or not interior_only:
                out.append(cp)
    return out


def relation_lattice_basis(config: PointConfiguration) -> list:
    """Z-basis of L = {l : sum l_j lift_j = 0}."""
    lifts = config.lifts
    rows = [[lifts[j][i] for j in range(len(lifts))] for i in range(config.n + 1)]
    return integer_kernel(rows, len(lifts))


def nonnegative_solutions(columns: Sequence[Sequence[int]], rhs: Sequence[int],
                          max_total: int) -> list:
    """All l in Z_{>=0}^N with sum_i l_i columns[i] = rhs and sum(l) <= max_total.

    Row-reduces the system over Q, enumerates the free variables inside the
    simplex sum <= max_total and back-solves the pivot variables in integers.
    Output is sorted by (sum(l), l).
    """
    N = len(columns)
    n = len(rhs)
    rows = [[columns[i][r] for i in range(N)] + [rhs[r]] for r in range(n)]
    red, pivots = rref(rows) if n else ([], [])
    if N in pivots:
        return []
    free = [c for c in range(N) if c not in pivots]
    # integer form: den * l_pivot = num - sum_f coef_f * l_f
    int_rows = []
    for row in red:
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        int_rows.append((den, int(row[N] * den), [int(row[f] * den) for f in free]))
    out = []
    nf = len(free)
    assign = [0] * N

    def rec(k, budget, resid):
        if k == nf:
            total = max_total - budget
            vals = []
            for (den, _, _), r in zip(int_rows, resid):
                if r < 0 or r % den:
                    return
                v = r // den
                total += v
                vals.append(v)
            if total > max_total:
                return
            for pc, v in zip(pivots, vals):
                assign[pc] = v
            out.append(tuple(assign))
            return
        f = free[k]
        for x in range(budget + 1):
            assign[f] = x
            rec(k + 1, budget - x,
                [r - coefs[k] * x for r, (_, _, coefs) in zip(resid, int_rows)])
        assign[f] = 0

    rec(0, max_total, [num for _, num, _ in int_rows])
    out.sort(key=lambda l: (sum(l), l))
    return out
