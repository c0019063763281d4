"""Shared generators and independent oracles for the test suite.

The oracles here deliberately avoid the library's algorithms: successive
minima are re-derived by column-wise enumeration over an echelon basis,
volumes by Ehrhart lattice-point scaling and by a fan decomposition from a
different apex vertex.
"""

from fractions import Fraction
from itertools import product
from math import comb, factorial
from random import Random

from toricinv.exactnum import AlgScalar, LogLinear
from toricinv.toric import ExponentConfig


def rand_full_rank_config(rng: Random, n: int, npts: int, lo: int, hi: int) -> ExponentConfig:
    """A random configuration whose difference lattice is all of Z^n."""
    while True:
        pts = {tuple(rng.randint(lo, hi) for _ in range(n)) for _ in range(npts)}
        pts = sorted(pts)
        if len(pts) < n + 1:
            continue
        cfg = ExponentConfig(pts)
        if cfg.is_reduced:
            return cfg


def rand_rational_tau(rng: Random, m: int, max_den: int, lo: int, hi: int):
    return [
        LogLinear.rational(Fraction(rng.randint(lo, hi), rng.randint(1, max_den)))
        for _ in range(m)
    ]


def rand_alpha(rng: Random, m: int, max_val: int = 6, max_den: int = 4):
    out = []
    for _ in range(m):
        num = rng.randint(1, max_val)
        den = rng.randint(1, max_den)
        out.append(AlgScalar.from_rational(Fraction(num, den)))
    return out


# ---------------------------------------------------------------------------
# l1 successive minima oracle (column-wise echelon enumeration)
# ---------------------------------------------------------------------------

def _rank_of(rows):
    mat = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    used = [False] * len(mat)
    for c in range(cols):
        piv = None
        for i, r in enumerate(mat):
            if not used[i] and r[c]:
                piv = i
                break
        if piv is None:
            continue
        used[piv] = True
        rank += 1
        for i, r in enumerate(mat):
            if i != piv and r[c]:
                f = r[c] / mat[piv][c]
                mat[i] = [a - f * b for a, b in zip(r, mat[piv])]
    return rank


def l1_minima_oracle(basis_rows, k: int, radius: int):
    """First k l1 successive minima by complete enumeration below ``radius``.

    The basis rows must be in echelon form (strictly increasing pivot
    columns), which the library's canonical HNF bases satisfy.  Enumerates
    coefficients column by column: once the rows below are all zero in a
    column, that coordinate is final and prunes the partial l1 norm.
    """
    rows = [list(r) for r in basis_rows]
    r = len(rows)
    m = len(rows[0])
    pivots = [next(j for j, x in enumerate(row) if x) for row in rows]
    assert pivots == sorted(pivots)
    found = []

    def rec(i, partial):
        if i == r:
            v = tuple(partial)
            if any(v) and sum(abs(x) for x in v) <= radius:
                found.append(v)
            return
        p = pivots[i]
        a = rows[i][p]
        assert a > 0
        # |partial[p] + c*a| <= radius
        lo = -((radius + partial[p]) // a)
        hi = (radius - partial[p]) // a
        nxt = pivots[i + 1] if i + 1 < r else m
        for c in range(lo, hi + 1):
            newpart = [partial[t] + c * rows[i][t] for t in range(m)]
            if sum(abs(newpart[t]) for t in range(nxt)) > radius:
                continue
            rec(i + 1, newpart)

    rec(0, [0] * m)
    canon = set()
    for v in found:
        for x in v:
            if x > 0:
                canon.add(v)
                break
            if x < 0:
                canon.add(tuple(-y for y in v))
                break
    ordered = sorted(canon, key=lambda v: (sum(abs(x) for x in v), v))
    chosen = []
    vals = []
    for v in ordered:
        if _rank_of(chosen + [list(v)]) > len(chosen):
            chosen.append(list(v))
            vals.append((sum(abs(x) for x in v), v))
            if len(vals) == k:
                break
    return vals


# ---------------------------------------------------------------------------
# volume oracles
# ---------------------------------------------------------------------------

def ehrhart_volume(poly) -> Fraction:
    """Leading Ehrhart coefficient of a full-dimensional lattice polytope.

    Counts lattice points of k*P for k = 0..d through the facet inequalities
    and recovers d! * Vol as the d-th finite difference; triangulation-free.
    """
    d = poly.ambient
    assert poly.affine_dim == d
    facets = [(f.normal, f.offset) for f in poly.facets()]
    verts = poly.vertices
    counts = [1]
    for k in range(1, d + 1):
        los = [min(int(v[i]) * k for v in verts) for i in range(d)]
        his = [max(int(v[i]) * k for v in verts) for i in range(d)]
        cnt = 0
        for pt in product(*[range(lo, hi + 1) for lo, hi in zip(los, his)]):
            ok = True
            for normal, offset in facets:
                if sum(a * b for a, b in zip(pt, normal)) < -offset * k:
                    ok = False
                    break
            if ok:
                cnt += 1
        counts.append(cnt)
    lead = sum((-1) ** (d - j) * comb(d, j) * counts[j] for j in range(d + 1))
    return Fraction(lead, factorial(d))


def fan_volume(poly, apex_rank: int = -1) -> Fraction:
    """Volume by coning facets from a different vertex than the library uses.

    The library triangulates from the lexicographically least vertex; this
    oracle cones the facet pyramids from the lexicographically greatest one
    (or any other by rank), using only facet data.
    """
    d = poly.ambient
    assert poly.affine_dim == d
    verts = sorted(poly.vertices)
    apex = verts[apex_rank]
    total = Fraction(0)
    for f in poly.facets():
        pts = [poly.points[i] for i in sorted(f.incidence)]
        if apex in pts:
            continue
        from toricinv.polytope import Polytope

        base = Polytope(pts)
        total += _pyramid_volume(base, apex, f.normal, f.offset)
    return total


def _pyramid_volume(base, apex, normal, offset) -> Fraction:
    d = base.ambient
    # height along the primitive normal: |<apex, v> + m| / ||v||, and the
    # (d-1)-volume of the base carries the matching 1/||v|| normalization;
    # combining through determinants avoids square roots entirely
    total = Fraction(0)
    for simplex in base.triangulate():
        mat = [[x - y for x, y in zip(p, simplex[0])] for p in list(simplex[1:]) + [apex]]
        det = _det(mat)
        total += abs(det)
    return total / factorial(d)


def _det(mat):
    m = [[Fraction(x) for x in row] for row in mat]
    n = len(m)
    out = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if m[i][k]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            out = -out
        out *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return out
