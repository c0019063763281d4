"""Upper envelopes of lifted point sets and their piecewise-affine calculus.

A roof is the concave upper envelope of points (a_i, t_i) where the base
points a_i are rational and each lift t_i is a LogLinear number.  Every hull
predicate used here expands to a rational linear combination of the lifts, so
decisions reduce to certified LogLinear signs and never multiply two
transcendental values.  Cells are discovered by pivoting a supporting affine
function across the walls of the cells already found, which merges cofacial
pans into single non-simplicial cells automatically.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .exactnum import LogLinear, ll_max
from .lattice import clear_denominators, nullspace_frac, rank_frac
from .polytope import (
    DimensionMismatchError,
    Point,
    Polytope,
    _dot,
    _pt,
    _sub,
)


class RoofCell:
    """One top-dimensional cell of the induced regular subdivision.

    ``gradient``/``constant`` give the affine function of the pan in the
    roof's working coordinates; ``indices`` are the input points lying on the
    pan.  ``normal()`` recovers the primitive integer pan normal
    (v_P, w_P), w_P < 0, whenever the gradient is rational (it always is for
    rational weight vectors; for genuinely transcendental weights no integer
    normal exists and the exact certificate is the affine function itself).
    """

    __slots__ = ("indices", "vertices", "gradient", "constant", "sample_index")

    def __init__(self, indices, vertices, gradient, constant, sample_index):
        self.indices: FrozenSet[int] = indices
        self.vertices: Tuple[Point, ...] = vertices
        self.gradient: Tuple[LogLinear, ...] = gradient
        self.constant: LogLinear = constant
        self.sample_index: int = sample_index

    def value(self, x: Sequence[Fraction]) -> LogLinear:
        acc = self.constant
        for g, c in zip(self.gradient, x):
            acc = acc + g * Fraction(c)
        return acc

    def normal(self) -> Optional[Tuple[Tuple[int, ...], int]]:
        if not all(g.is_rational() for g in self.gradient):
            return None
        grads = [g.rational_value() for g in self.gradient]
        den = 1
        for q in grads:
            den = den * q.denominator // gcd(den, q.denominator)
        v = [int(q * den) for q in grads]
        w = -den
        g = 0
        for x in v + [w]:
            g = gcd(g, x)
        return tuple(x // g for x in v), w // g

    def __repr__(self):
        return f"RoofCell(points={sorted(self.indices)})"


class RoofFunction:
    """A concave piecewise-affine function given by the cells of its roof."""

    def __init__(self, points: Sequence[Sequence], lifts: Sequence[LogLinear]):
        if len(points) != len(lifts):
            raise ValueError("one lift per point is required")
        self.points: Tuple[Point, ...] = tuple(_pt(p) for p in points)
        self.lifts: Tuple[LogLinear, ...] = tuple(lifts)
        self.ambient: int = len(self.points[0]) if self.points else 0
        self.base: Polytope = Polytope(self.points)
        self.cells: List[RoofCell] = _build_cells(self.base, self.lifts)

    # -- evaluation -----------------------------------------------------------

    def _coords(self):
        return self.base._span_data()[2]

    def value(self, x: Sequence) -> LogLinear:
        """Exact value at a rational point of the base polytope.

        A concave piecewise-affine function is the minimum of its cell
        functions over its domain.
        """
        p = _pt(x)
        if not self.base.contains(p):
            raise ValueError(f"{x} lies outside the base polytope")
        p0, basis, _ = self.base._span_data()
        if basis:
            from .lattice import solve_frac

            cols = [[basis[j][i] for j in range(len(basis))] for i in range(self.ambient)]
            c = solve_frac(cols, list(_sub(p, p0)))
            assert c is not None
        else:
            c = []
        vals = [cell.value(c) for cell in self.cells]
        out = vals[0]
        for v in vals[1:]:
            if (v - out).sign() < 0:
                out = v
        return out

    def value_at_index(self, i: int) -> LogLinear:
        coords = self._coords()
        vals = [cell.value(coords[i]) for cell in self.cells]
        out = vals[0]
        for v in vals[1:]:
            if (v - out).sign() < 0:
                out = v
        return out

    def is_identically_zero(self) -> bool:
        zero = LogLinear.zero()
        return all(
            cell.constant == zero and all(g == zero for g in cell.gradient)
            for cell in self.cells
        )

    # -- data views -------------------------------------------------------------

    def subdivision(self) -> List[FrozenSet[int]]:
        """The induced coherent polyhedral decomposition, as incidence sets."""
        return [cell.indices for cell in self.cells]

    def lifted_vertices(self) -> List[Tuple[Point, LogLinear]]:
        """Vertices of the roof graph: (base vertex, exact value).

        Cells are hulls of touching input points, so every cell vertex is an
        input point whose lift is the roof value there.
        """
        out: Dict[Point, LogLinear] = {}
        for cell in self.cells:
            vset = set(cell.vertices)
            for i in sorted(cell.indices):
                p = self.points[i]
                if p in vset and p not in out:
                    out[p] = self.lifts[i]
        return sorted(out.items())

    def integral(self) -> LogLinear:
        """Exact integral against ambient Lebesgue measure.

        Lower-dimensional bases integrate to 0 (except in ambient dimension
        0, where the integral is the value at the single point).
        """
        if self.ambient == 0:
            return self._point_value()
        if self.base.affine_dim < self.ambient:
            return LogLinear.zero()
        total = LogLinear.zero()
        d = self.ambient
        fact = 1
        for k in range(2, d + 2):
            fact *= k
        coords = self._coords()
        from .lattice import det_frac

        for cell in self.cells:
            poly = Polytope(cell.vertices)
            for simplex in poly.triangulate():
                mat = [list(_sub(p, simplex[0])) for p in simplex[1:]]
                vol_num = abs(det_frac(mat))  # d! * volume
                if not vol_num:
                    continue
                s = LogLinear.zero()
                for p in simplex:
                    s = s + cell.value(p)
                total = total + s * Fraction(vol_num, fact)
        return total

    def _point_value(self) -> LogLinear:
        return ll_max(self.lifts)

    def __repr__(self):
        return f"RoofFunction(dim={self.base.affine_dim}, cells={len(self.cells)})"


def cell_vertex_set(cell: RoofCell):
    return set(cell.vertices)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _build_cells(base: Polytope, lifts: Sequence[LogLinear]) -> List[RoofCell]:
    p0, basis, coords = base._span_data()
    d = len(basis)
    m = len(coords)
    if d == 0:
        top = ll_max(lifts)
        inc = frozenset(i for i in range(m) if lifts[i] == top)
        return [
            RoofCell(inc, (base.points[0],), (), top, min(inc))
        ]

    def ell_values(gradient, constant):
        return [
            constant + sum((g * Fraction(c) for g, c in zip(gradient, coords[i])), LogLinear.zero())
            for i in range(m)
        ]

    def touching(gradient, constant):
        vals = ell_values(gradient, constant)
        return frozenset(i for i in range(m) if (vals[i] - lifts[i]).is_zero()), vals

    def rotate(gradient, constant, h_aff):
        """theta* rotation of the supporting function across the wall h >= 0."""
        u, u0 = h_aff  # h(x) = <u, x> + u0, rational
        vals = ell_values(gradient, constant)
        hvals = [_dot(u, coords[i]) + u0 for i in range(m)]
        below = [i for i in range(m) if hvals[i] < 0]
        if not below:
            return None
        theta = None
        for i in below:
            cand = (vals[i] - lifts[i]) / (-hvals[i])
            if theta is None or (cand - theta).sign() < 0:
                theta = cand
        new_grad = tuple(g + theta * Fraction(ux) for g, ux in zip(gradient, u))
        new_const = constant + theta * Fraction(u0)
        return new_grad, new_const

    # initial supporting function: the constant max, then rotate until the
    # touching set spans the base dimension
    zero = LogLinear.zero()
    gradient: Tuple[LogLinear, ...] = tuple(zero for _ in range(d))
    constant = ll_max(lifts)
    inc, _ = touching(gradient, constant)
    while True:
        tpts = [coords[i] for i in sorted(inc)]
        t0 = tpts[0]
        dirs = [list(_sub(p, t0)) for p in tpts[1:]]
        if rank_frac(dirs) == d:
            break
        progressed = False
        for u in (clear_denominators(b) for b in nullspace_frac(dirs, d)):
            u0 = -_dot(u, t0)
            hvals = [_dot(u, coords[i]) + u0 for i in range(m)]
            if all(x == 0 for x in hvals):
                continue
            if not any(x < 0 for x in hvals):
                u = tuple(-x for x in u)
                u0 = -u0
            res = rotate(gradient, constant, (u, u0))
            if res is None:
                continue
            gradient, constant = res
            inc, _ = touching(gradient, constant)
            progressed = True
            break
        if not progressed:  # pragma: no cover - impossible for spanning input
            raise AssertionError("roof initialisation stalled")

    first = _make_cell(base, coords, inc, gradient, constant)
    cells: Dict[FrozenSet[int], RoofCell] = {inc: first}
    queue: List[Tuple[FrozenSet[int], Tuple[LogLinear, ...], LogLinear]] = [
        (inc, gradient, constant)
    ]
    while queue:
        cinc, cgrad, cconst = queue.pop()
        cell_poly = Polytope([coords[i] for i in sorted(cinc)])
        for wall in cell_poly._relative_facets():
            u = wall.normal
            u0 = -wall.beta
            res = rotate(cgrad, cconst, (u, u0))
            if res is None:
                continue  # wall on the boundary of the base polytope
            ngrad, nconst = res
            ninc, _ = touching(ngrad, nconst)
            if ninc not in cells:
                cells[ninc] = _make_cell(base, coords, ninc, ngrad, nconst)
                queue.append((ninc, ngrad, nconst))
    return sorted(cells.values(), key=lambda c: tuple(sorted(c.indices)))


def _make_cell(base, coords, inc, gradient, constant) -> RoofCell:
    order = sorted(inc)
    sub = Polytope([base.points[i] for i in order])
    return RoofCell(inc, tuple(sub.vertices), gradient, constant, order[0])


def roof(points: Sequence[Sequence], lifts: Sequence[LogLinear]) -> RoofFunction:
    """Upper envelope of the lifted points (a_i, t_i) over conv(a_i)."""
    return RoofFunction(points, lifts)


def sup_convolution(f: RoofFunction, g: RoofFunction) -> RoofFunction:
    """(f [+] g)(x) = max{f(y) + g(z) : y + z = x}, over the Minkowski sum.

    Computed as the roof of the pairwise sums of the two graphs' vertices.
    """
    if f.ambient != g.ambient:
        raise DimensionMismatchError("sup-convolution of different ambient dimensions")
    best: Dict[Point, LogLinear] = {}
    for p, fp in f.lifted_vertices():
        for q, gq in g.lifted_vertices():
            s = tuple(a + b for a, b in zip(p, q))
            v = fp + gq
            cur = best.get(s)
            if cur is None or (v - cur).sign() > 0:
                best[s] = v
    items = sorted(best.items())
    return RoofFunction([p for p, _ in items], [v for _, v in items])


def mixed_integral(functions: Sequence[RoofFunction]) -> LogLinear:
    """MI(f_0, ..., f_n) by inclusion-exclusion over sup-convolutions.

    MI = sum_j (-1)^(n-j) sum_{i_0<...<i_j} integral(f_{i_0} [+] ... [+] f_{i_j});
    the diagonal value MI(f, ..., f) equals (n+1)! integral(f).
    """
    from itertools import combinations

    k = len(functions)
    if k == 0:
        raise ValueError("mixed integral of an empty family")
    n = functions[0].ambient
    if k != n + 1:
        raise DimensionMismatchError(
            f"mixed integral needs n+1 = {n + 1} functions in R^{n}, got {k}"
        )
    for f in functions:
        if f.ambient != n:
            raise DimensionMismatchError("mixed integral over mixed ambient dimensions")
    memo: Dict[Tuple[int, ...], RoofFunction] = {}

    def conv(subset: Tuple[int, ...]) -> RoofFunction:
        if subset in memo:
            return memo[subset]
        if len(subset) == 1:
            out = functions[subset[0]]
        else:
            out = sup_convolution(conv(subset[:-1]), functions[subset[-1]])
        memo[subset] = out
        return out

    total = LogLinear.zero()
    for j in range(0, n + 1):
        sign = (-1) ** (n - j)
        for subset in combinations(range(n + 1), j + 1):
            term = conv(subset).integral()
            total = total + term * sign
    return total
