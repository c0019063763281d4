"""Exact integer and rational linear algebra for lattices.

Matrices are plain lists of row lists; everything is computed with Python
integers and fractions, so every result is exact.  The module covers Smith
and Hermite normal forms, kernels, saturation, sublattice indices, covolumes
and l1 successive minima by ellipsoid-pruned enumeration.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, List, Optional, Sequence, Tuple

IntMatrix = List[List[int]]
IntVector = Tuple[int, ...]


class NotASublatticeError(ValueError):
    """lattice_index was handed a pair without containment."""


class RankExceededError(ValueError):
    """More successive minima requested than the lattice rank."""


def identity(m: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(m)] for i in range(m)]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            c = ai[k]
            if c:
                bk = b[k]
                for j in range(cols):
                    oi[j] += c * bk[j]
    return out


def mat_vec(a: Sequence[Sequence[int]], v: Sequence[int]) -> List[int]:
    return [sum(r[j] * v[j] for j in range(len(v))) for r in a]


def transpose(a: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(col) for col in zip(*a)] if a else []


def vec_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = vec_gcd(v)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


# ---------------------------------------------------------------------------
# determinants and rational elimination
# ---------------------------------------------------------------------------

def det_int(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def det_frac(m: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def rref(a: List[List[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form (in place on a copy) plus pivot columns."""
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank_frac(a: Sequence[Sequence[Fraction]]) -> int:
    if not a:
        return 0
    _, p = rref([list(r) for r in a])
    return len(p)


def solve_frac(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One solution of A x = b over Q, or None if inconsistent.

    Free variables are set to 0, which makes the output deterministic.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(rows)]
    m, pivots = rref(aug)
    for i in range(len(pivots), rows):
        if m[i][cols]:
            return None
    if pivots and pivots[-1] == cols:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = m[r][cols]
    return x


def nullspace_frac(a: Sequence[Sequence[Fraction]], cols: int) -> List[List[Fraction]]:
    """Basis of {x : A x = 0} over Q, deterministic."""
    if not a:
        return [[Fraction(1) if j == i else Fraction(0) for j in range(cols)] for i in range(cols)]
    m, pivots = rref([list(r) for r in a])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -m[r][fc]
        basis.append(v)
    return basis


def clear_denominators(v: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (same ray)."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    w = [int(x * den) for x in v]
    return primitive(w)


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------

def smith_normal_form(mat: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: U @ M @ V = D with U, V unimodular.

    D is diagonal with nonnegative entries d1 | d2 | ...; the pivot choice is
    deterministic (smallest absolute value, then row, then column), so the
    output is a function of the input alone.
    """
    a = [list(map(int, row)) for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for r in a:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):
        # row[dst] += q * row[src]
        for k in range(cols):
            a[dst][k] += q * a[src][k]
        for k in range(rows):
            u[dst][k] += q * u[src][k]

    def add_col(src, dst, q):
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # deterministic pivot: min |entry| over the trailing block
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # enforce divisibility of the trailing block by the pivot
        d = a[t][t]
        fixed = True
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % d:
                    add_row(i, t, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            if a[t][t] < 0:
                for k in range(cols):
                    a[t][k] = -a[t][k]
                for k in range(rows):
                    u[t][k] = -u[t][k]
            t += 1
    return u, a, v


def hermite_normal_form(rows_in: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """Canonical row-style HNF basis of the lattice spanned by the rows.

    Pivots are positive, strictly to the right as one moves down, and the
    entries above each pivot are reduced into [0, pivot).  Zero rows are
    dropped, so the output is a canonical basis.
    """
    a = [list(map(int, r)) for r in rows_in if any(r)]
    if not a:
        return []
    cols = len(a[0])
    r = 0
    for c in range(cols):
        if r == len(a):
            break
        if all(a[i][c] == 0 for i in range(r, len(a))):
            continue
        while True:
            piv = min(
                (i for i in range(r, len(a)) if a[i][c]),
                key=lambda i: (abs(a[i][c]), i),
            )
            a[r], a[piv] = a[piv], a[r]
            others = [i for i in range(r + 1, len(a)) if a[i][c]]
            if not others:
                break
            for i in others:
                q = a[i][c] // a[r][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return [tuple(row) for row in a[:r]]


def kernel_basis_of_matrix(mat: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """Canonical basis of {x in Z^cols : M x = 0}; saturated by construction."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    if rows == 0:
        return [tuple(r) for r in identity(cols)]
    _, d, v = smith_normal_form(mat)
    rank = sum(1 for i in range(min(rows, cols)) if d[i][i])
    cols_v = [tuple(v[i][j] for i in range(cols)) for j in range(rank, cols)]
    return hermite_normal_form(cols_v)


# ---------------------------------------------------------------------------
# the Lattice value type
# ---------------------------------------------------------------------------

class Lattice:
    """A sublattice of Z^m given by an independent integer basis (maybe empty)."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: int, basis: Iterable[Sequence[int]] = ()):
        rows = [tuple(map(int, b)) for b in basis]
        for b in rows:
            if len(b) != ambient:
                raise ValueError("basis vector has wrong length")
        canon = hermite_normal_form(rows)
        if len(canon) != len([r for r in rows if any(r)]):
            raise ValueError("basis vectors are linearly dependent")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", tuple(canon))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Lattice is immutable")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], ambient: Optional[int] = None) -> "Lattice":
        """Lattice spanned by possibly dependent rows."""
        if ambient is None:
            if not rows:
                raise ValueError("cannot infer ambient dimension")
            ambient = len(rows[0])
        return Lattice(ambient, hermite_normal_form(rows))

    @staticmethod
    def full(m: int) -> "Lattice":
        return Lattice(m, identity(m))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        c = self.coordinates_of(v)
        return c is not None

    def coordinates_of(self, v: Sequence[int]) -> Optional[Tuple[int, ...]]:
        """Integer coordinates of v in the basis, or None."""
        if not self.basis:
            return () if not any(v) else None
        a = [[Fraction(self.basis[i][j]) for i in range(self.rank)] for j in range(self.ambient)]
        x = solve_frac(a, [Fraction(t) for t in v])
        if x is None or any(q.denominator != 1 for q in x):
            return None
        return tuple(int(q) for q in x)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Lattice(ambient={self.ambient}, basis={list(self.basis)})"


def lattice_index(sub: Lattice, sup: Lattice):
    """Index [sup : sub]; an int, or the string 'infinite' when ranks differ.

    Raises NotASublatticeError when sub is not contained in sup.
    """
    if sub.ambient != sup.ambient:
        raise NotASublatticeError("ambient dimensions differ")
    coords = []
    for b in sub.basis:
        c = sup.coordinates_of(b)
        if c is None:
            raise NotASublatticeError(f"{b} is not in the candidate superlattice")
        coords.append(list(c))
    if sub.rank != sup.rank:
        return "infinite"
    return abs(det_int(coords)) if coords else 1


def orthogonal_complement(lat: Lattice) -> Lattice:
    """Saturated lattice of integer vectors orthogonal to every basis vector."""
    if not lat.basis:
        return Lattice.full(lat.ambient)
    ker = kernel_basis_of_matrix([list(b) for b in lat.basis])
    return Lattice(lat.ambient, ker)


def saturate(lat: Lattice) -> Lattice:
    """Smallest saturated sublattice of Z^m containing lat."""
    return orthogonal_complement(orthogonal_complement(lat))


def is_saturated(lat: Lattice) -> bool:
    return lattice_index(lat, saturate(lat)) == 1


def covolume_sq(lat: Lattice) -> Fraction:
    """Gram determinant of a basis: the squared covolume of the lattice."""
    if lat.rank == 0:
        raise ValueError("covolume of the zero lattice")
    g = [[sum(a * b for a, b in zip(r1, r2)) for r2 in lat.basis] for r1 in lat.basis]
    return Fraction(det_int(g))


# ---------------------------------------------------------------------------
# successive minima for the l1 norm
# ---------------------------------------------------------------------------

def _l1(v: Sequence[int]) -> int:
    return sum(abs(x) for x in v)


def _sign_canonical(v: Sequence[int]) -> Tuple[int, ...]:
    for x in v:
        if x > 0:
            return tuple(v)
        if x < 0:
            return tuple(-y for y in v)
    return tuple(v)


def _gram_cholesky(g: List[List[Fraction]]):
    """Rational decomposition Q(c) = sum_i d_i (c_i + sum_{j>i} mu[i][j] c_j)^2.

    Classic reduction of a positive definite quadratic form to a weighted sum
    of squares, done over Q so the enumeration bounds below are exact.
    """
    r = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    for i in range(r):
        for j in range(i + 1, r):
            a[j][i] = a[i][j]
            a[i][j] = a[i][j] / a[i][i]
        for k in range(i + 1, r):
            for l in range(k, r):
                a[k][l] = a[k][l] - a[k][i] * a[i][l]
    d = [a[i][i] for i in range(r)]
    mu = [[a[i][k] if k > i else Fraction(0) for k in range(r)] for i in range(r)]
    return d, mu


def _isqrt_frac_floor(x: Fraction) -> int:
    """floor(sqrt(x)) for a nonnegative rational."""
    if x < 0:
        return -1
    n, m = x.numerator, x.denominator
    r = isqrt(n * m) // m
    while (r + 1) * (r + 1) <= x:
        r += 1
    while r * r > x:
        r -= 1
    return r


def enumerate_l2_bounded(basis: Sequence[Sequence[int]], radius_sq: Fraction) -> List[Tuple[int, ...]]:
    """All nonzero lattice vectors with ||v||_2^2 <= radius_sq (one per +-pair).

    Fincke-Pohst enumeration with an exact rational Cholesky decomposition of
    the Gram matrix; used with radius = l1 bound since ||v||_2 <= ||v||_1.
    """
    r = len(basis)
    g = [[Fraction(sum(a * b for a, b in zip(r1, r2))) for r2 in basis] for r1 in basis]
    d, mu = _gram_cholesky(g)
    out: List[Tuple[int, ...]] = []
    coeff = [0] * r

    def rec(i: int, remaining: Fraction):
        if i < 0:
            if any(coeff):
                v = [0] * len(basis[0])
                for c, b in zip(coeff, basis):
                    if c:
                        for k in range(len(v)):
                            v[k] += c * b[k]
                out.append(_sign_canonical(v))
            return
        # center of the allowed interval for coeff[i]
        shift = sum(mu[i][j] * coeff[j] for j in range(i + 1, r))
        half = remaining / d[i]
        bound = _isqrt_frac_floor(half)
        base = -shift
        # integers c with (c - base)^2 <= half
        c_lo = int(base) - bound - 2
        c_hi = int(base) + bound + 2
        for c in range(c_lo, c_hi + 1):
            t = Fraction(c) - base
            t2 = t * t * d[i]
            if t2 <= remaining:
                coeff[i] = c
                rec(i - 1, remaining - t2)
        coeff[i] = 0

    rec(r - 1, Fraction(radius_sq))
    # canonical deterministic order and +-deduplication
    return sorted(set(out), key=lambda v: (_l1(v), v))


def successive_minima_l1(lat: Lattice, k: int) -> List[Tuple[Fraction, Tuple[int, ...]]]:
    """Exact l1 successive minima with independent, lexicographically least witnesses.

    Enumerates lattice points in growing l1 balls, pruning candidates through
    the euclidean ball of the same radius (||v||_2 <= ||v||_1).  The i-th
    reported value is the least nu with i independent vectors of norm <= nu.
    """
    if k < 1 or k > lat.rank:
        raise RankExceededError(f"requested {k} minima from a rank-{lat.rank} lattice")
    basis = [list(b) for b in lat.basis]
    norms = sorted(_l1(b) for b in basis)
    radius = norms[0]
    r_max = norms[-1]
    while True:
        cands = [v for v in enumerate_l2_bounded(basis, Fraction(radius * radius)) if _l1(v) <= radius]
        chosen: List[Tuple[int, ...]] = []
        vals: List[Tuple[Fraction, Tuple[int, ...]]] = []
        frac_rows: List[List[Fraction]] = []
        for v in cands:
            test = frac_rows + [[Fraction(x) for x in v]]
            if rank_frac(test) > len(frac_rows):
                frac_rows = test
                chosen.append(v)
                vals.append((Fraction(_l1(v)), v))
                if len(chosen) == k:
                    return vals
        if radius >= r_max:
            raise AssertionError("enumeration failed below the basis norm bound")
        radius = min(2 * radius, r_max)


def l1_ball_cross_section_volume(lat: Lattice) -> Fraction:
    """Normalized volume of (unit l1 ball) ∩ span(lat) w.r.t. the lattice covolume.

    Returns Vol_r(B1 ∩ span) / covolume(lat): both the section volume and the
    covolume are rational multiples of the same Gram-root normalization, so
    the quotient is an exact rational.  Vertices of the section are the
    intersections of the subspace with the (m-r)-faces of the cross-polytope.
    """
    from itertools import combinations, product as iproduct
    from .polytope import Polytope

    r = lat.rank
    m = lat.ambient
    if r == 0:
        raise ValueError("zero-rank lattice has no cross-section")
    basis = [list(b) for b in lat.basis]
    verts: set = set()
    # faces of the l1 unit ball spanned by m-r+1 signed unit vectors
    for idx in combinations(range(m), m - r + 1):
        for signs in iproduct((1, -1), repeat=m - r + 1):
            # x = sum t_s * sign_s e_{idx_s}, t >= 0, sum t = 1, x in span(basis)
            # span condition: x orthogonal to complement of basis row space
            # solve via coordinates: x = c . basis  ->  match entries
            # unknowns: t (m-r+1) and c (r); equations: m entry matches + sum t = 1
            cols = (m - r + 1) + r
            a = []
            b = []
            for j in range(m):
                row = [Fraction(0)] * cols
                for s, (i0, sg) in enumerate(zip(idx, signs)):
                    if i0 == j:
                        row[s] = Fraction(sg)
                for cc in range(r):
                    row[m - r + 1 + cc] = Fraction(-basis[cc][j])
                a.append(row)
                b.append(Fraction(0))
            a.append([Fraction(1)] * (m - r + 1) + [Fraction(0)] * r)
            b.append(Fraction(1))
            sol = solve_frac(a, b)
            if sol is None:
                continue
            t = sol[: m - r + 1]
            if any(x < 0 for x in t):
                continue
            c = tuple(sol[m - r + 1:])
            verts.add(c)
    if not verts:
        return Fraction(0)
    poly = Polytope.from_points([list(v) for v in verts])
    if poly.affine_dim < r:
        return Fraction(0)
    # coordinates are already relative to the lattice basis, so plain
    # euclidean volume in c-space is exactly Vol(section)/covolume(lat)
    return poly.volume()
