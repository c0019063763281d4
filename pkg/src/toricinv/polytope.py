"""Exact rational polytopes: hulls, face lattices, volumes, mixed volumes.

Hulls are computed by gift wrapping with exact rational orientation
predicates: facets are discovered by pivoting supporting hyperplanes across
ridges, which handles degenerate (cofacial) point sets naturally because a
facet is always the full incidence set of its supporting hyperplane.
Lower-dimensional polytopes are first class; their combinatorics are computed
inside the affine span.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .lattice import (
    Lattice,
    clear_denominators,
    det_frac,
    hermite_normal_form,
    nullspace_frac,
    primitive,
    rank_frac,
    solve_frac,
)

Point = Tuple[Fraction, ...]


class DimensionMismatchError(ValueError):
    pass


class LatticeSpanMismatchError(ValueError):
    pass


def _pt(p: Sequence) -> Point:
    return tuple(Fraction(x) for x in p)


def _sub(p: Point, q: Point) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def _add(p: Point, q: Point) -> Point:
    return tuple(a + b for a, b in zip(p, q))


def _dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


# ---------------------------------------------------------------------------
# gift-wrapping hull in full-dimensional position
# ---------------------------------------------------------------------------

class _HullFacet:
    """Inner description <w, x> >= beta, equality exactly on ``incidence``."""

    __slots__ = ("normal", "beta", "incidence")

    def __init__(self, normal: Tuple[int, ...], beta: Fraction, incidence: FrozenSet[int]):
        self.normal = normal
        self.beta = beta
        self.incidence = incidence


def _support_data(points: Sequence[Point], w: Sequence[Fraction]):
    vals = [_dot(w, p) for p in points]
    beta = min(vals)
    inc = frozenset(i for i, v in enumerate(vals) if v == beta)
    return beta, inc


def _affine_dim_of(points: Sequence[Point]) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank_frac([list(_sub(p, p0)) for p in points[1:]])


def _vanishing_functionals(dirs: List[List[Fraction]], dim: int) -> List[Tuple[int, ...]]:
    """Primitive integer functionals vanishing on the span of ``dirs``."""
    basis = nullspace_frac(dirs, dim) if dirs else nullspace_frac([], dim)
    return [clear_denominators(b) for b in basis]


def _initial_facet(points: Sequence[Point]) -> _HullFacet:
    """Find one facet by rotating a supporting hyperplane until it is tight.

    Start from the first coordinate's minimum and repeatedly rotate around
    the affine span of the current touching set; each rotation keeps the
    hyperplane supporting and strictly grows the touching dimension.
    """
    d = len(points[0])
    w: List[Fraction] = [Fraction(0)] * d
    w[0] = Fraction(1)
    beta, inc = _support_data(points, w)
    while True:
        touch = [points[i] for i in sorted(inc)]
        k = _affine_dim_of(touch)
        if k >= d - 1:
            break
        t0 = touch[0]
        dirs = [list(_sub(p, t0)) for p in touch[1:]]
        svals = [_dot(w, p) - beta for p in points]
        ww = _dot(w, w)
        progressed = False
        for u0 in _vanishing_functionals(dirs, d):
            # rotate inside the pencil through aff(touch): the direction must
            # be independent of w, so project the w-component away
            scale = _dot(u0, w) / ww
            u = tuple(Fraction(a) - scale * b for a, b in zip(u0, w))
            h = [_dot(u, _sub(p, t0)) for p in points]
            if all(x == 0 for x in h):
                continue
            if not any(x < 0 for x in h):
                u = tuple(-x for x in u)
                h = [-x for x in h]
            theta = min(svals[i] / (-h[i]) for i in range(len(points)) if h[i] < 0)
            w = [a + theta * b for a, b in zip(w, u)]
            beta, inc = _support_data(points, w)
            progressed = True
            break
        if not progressed:  # pragma: no cover - impossible for full-dim input
            raise AssertionError("initial facet search stalled")
    nw = clear_denominators(list(w))
    beta, inc = _support_data(points, nw)
    return _HullFacet(nw, beta, inc)


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _pivot(points: Sequence[Point], facet: _HullFacet, ridge: FrozenSet[int]) -> _HullFacet:
    """The other facet through ``ridge``, found in the 2-d quotient by the ridge."""
    d = len(points[0])
    ridge_idx = sorted(ridge)
    r0 = points[ridge_idx[0]]
    rdirs = [list(_sub(points[i], r0)) for i in ridge_idx[1:]]
    phis = _vanishing_functionals(rdirs, d)
    # the ridge has affine dimension d-2, so exactly two functionals survive
    phi1, phi2 = phis[0], phis[1]
    xi = [(_dot(phi1, _sub(p, r0)), _dot(phi2, _sub(p, r0))) for p in points]
    cands: Dict[Tuple[int, int], None] = {}
    for v in xi:
        if v != (0, 0):
            cands.setdefault(tuple(clear_denominators(list(v))), None)
    cand_list = list(cands)
    cur = next(i for i in sorted(facet.incidence) if xi[i] != (0, 0))
    e_cur = tuple(clear_denominators(list(xi[cur])))
    e_new = None
    for u in cand_list:
        if u == e_cur:
            continue
        signs = [_cross(u, v) for v in cand_list]
        if all(s >= 0 for s in signs) or all(s <= 0 for s in signs):
            e_new = u
            break
    if e_new is None:  # pragma: no cover - impossible: the quotient cone is pointed
        raise AssertionError("ridge pivot found no second extreme direction")
    eta = (-e_new[1], e_new[0])
    if _cross(e_new, e_cur) < 0:
        eta = (-eta[0], -eta[1])
    w = tuple(eta[0] * a + eta[1] * b for a, b in zip(phi1, phi2))
    w = primitive(w)
    beta, inc = _support_data(points, w)
    return _HullFacet(w, beta, inc)


def giftwrap_facets(points: Sequence[Point]) -> List[_HullFacet]:
    """All facets of conv(points) for a full-dimensional point set in R^d."""
    d = len(points[0])
    if d == 0:
        return []
    if d == 1:
        xs = [p[0] for p in points]
        mn, mx = min(xs), max(xs)
        out = [
            _HullFacet((1,), mn, frozenset(i for i, x in enumerate(xs) if x == mn)),
            _HullFacet((-1,), -mx, frozenset(i for i, x in enumerate(xs) if x == mx)),
        ]
        return out
    first = _initial_facet(points)
    facets: Dict[FrozenSet[int], _HullFacet] = {first.incidence: first}
    queue = [first]
    while queue:
        f = queue.pop()
        fpts_idx = sorted(f.incidence)
        fpts = [points[i] for i in fpts_idx]
        for rel_ridge in _relative_facet_incidences(fpts):
            ridge = frozenset(fpts_idx[i] for i in rel_ridge)
            nf = _pivot(points, f, ridge)
            if nf.incidence not in facets:
                facets[nf.incidence] = nf
                queue.append(nf)
    return sorted(facets.values(), key=lambda g: (g.normal, g.beta))


def _relative_facet_incidences(points: Sequence[Point]) -> List[FrozenSet[int]]:
    """Incidence sets of the relative facets of conv(points) (any dimension)."""
    distinct = sorted({p for p in points})
    if len(distinct) == 1:
        return []
    p0 = points[0]
    dirs = [list(_sub(p, p0)) for p in points[1:]]
    dim = len(p0)
    k = rank_frac(dirs)
    if k == dim:
        return [f.incidence for f in giftwrap_facets(points)]
    # work inside the affine span
    coords = _span_coordinates(points)
    return [f.incidence for f in giftwrap_facets(coords)]


def _span_coordinates(points: Sequence[Point]) -> List[Point]:
    """Rational coordinates of the points in a basis of their affine span."""
    p0 = points[0]
    dirs = [list(_sub(p, p0)) for p in points[1:]]
    basis: List[List[Fraction]] = []
    for v in dirs:
        if rank_frac(basis + [v]) > len(basis):
            basis.append([Fraction(x) for x in v])
    if not basis:
        return [() for _ in points]
    cols = [[basis[j][i] for j in range(len(basis))] for i in range(len(p0))]
    out = []
    for p in points:
        sol = solve_frac(cols, list(_sub(p, p0)))
        assert sol is not None
        out.append(tuple(sol))
    return out


# ---------------------------------------------------------------------------
# the Polytope value type
# ---------------------------------------------------------------------------

class Facet:
    """A facet of a full-dimensional polytope: <x, v> >= -m with v primitive inner."""

    __slots__ = ("normal", "offset", "incidence")

    def __init__(self, normal: Tuple[int, ...], offset: Fraction, incidence: FrozenSet[int]):
        self.normal = normal
        self.offset = offset  # m_F; the inequality reads <x, v_F> >= -m_F
        self.incidence = incidence

    def __repr__(self):
        return f"Facet(v={self.normal}, m={self.offset}, points={sorted(self.incidence)})"


class Face:
    __slots__ = ("indices", "dim")

    def __init__(self, indices: FrozenSet[int], dim: int):
        self.indices = indices
        self.dim = dim

    def __repr__(self):
        return f"Face(dim={self.dim}, points={sorted(self.indices)})"


class Polytope:
    """Convex hull of a finite list of rational points, any affine dimension.

    The original input points are kept so that faces can report which input
    indices they contain (several input points may coincide or sit in the
    relative interior of a face).
    """

    def __init__(self, points: Sequence[Sequence]):
        if not points:
            raise ValueError("a polytope needs at least one point")
        pts = [_pt(p) for p in points]
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise DimensionMismatchError("points of mixed dimension")
        self.ambient: int = dims.pop()
        self.points: Tuple[Point, ...] = tuple(pts)
        self._span = None
        self._rel_facets: Optional[List[_HullFacet]] = None
        self._faces: Optional[Dict[int, List[Face]]] = None

    @staticmethod
    def from_points(points: Sequence[Sequence]) -> "Polytope":
        return Polytope(points)

    # -- affine span ---------------------------------------------------------

    def _span_data(self):
        """(origin, direction basis rows, span coords of every input point)."""
        if self._span is None:
            p0 = self.points[0]
            basis: List[List[Fraction]] = []
            for p in self.points[1:]:
                v = list(_sub(p, p0))
                if rank_frac(basis + [v]) > len(basis):
                    basis.append([Fraction(x) for x in v])
            if len(basis) == self.ambient:
                # full-dimensional: keep ambient coordinates so facet normals
                # are meaningful without a change of basis
                p0 = tuple(Fraction(0) for _ in range(self.ambient))
                basis = [
                    [Fraction(1) if j == i else Fraction(0) for j in range(self.ambient)]
                    for i in range(self.ambient)
                ]
                coords = list(self.points)
            elif basis:
                cols = [[basis[j][i] for j in range(len(basis))] for i in range(self.ambient)]
                coords = []
                for p in self.points:
                    sol = solve_frac(cols, list(_sub(p, p0)))
                    assert sol is not None
                    coords.append(tuple(sol))
            else:
                coords = [() for _ in self.points]
            self._span = (p0, basis, coords)
        return self._span

    @property
    def affine_dim(self) -> int:
        return len(self._span_data()[1])

    # -- facets and faces ------------------------------------------------------

    def _relative_facets(self) -> List[_HullFacet]:
        """Facets inside the affine span, with global input incidences."""
        if self._rel_facets is None:
            _, _, coords = self._span_data()
            if self.affine_dim == 0:
                self._rel_facets = []
            else:
                self._rel_facets = giftwrap_facets(coords)
        return self._rel_facets

    def facets(self) -> List[Facet]:
        """Primitive inner-normal facet data; the polytope must be full-dimensional."""
        if self.affine_dim != self.ambient:
            raise ValueError("facet normals are defined for full-dimensional polytopes")
        out = []
        for f in self._relative_facets():
            out.append(Facet(f.normal, -f.beta, f.incidence))
        return sorted(out, key=lambda g: g.normal)

    def face_lattice(self) -> Dict[int, List[Face]]:
        """All nonempty faces grouped by dimension, each with its input indices.

        Proper faces are the closed intersections of facet incidence sets;
        the polytope itself is included as its own top face.
        """
        if self._faces is not None:
            return self._faces
        all_idx = frozenset(range(len(self.points)))
        sets = {all_idx}
        facet_incs = [f.incidence for f in self._relative_facets()]
        for inc in facet_incs:
            sets.add(inc)
        frontier = set(facet_incs)
        while frontier:
            new = set()
            for a in frontier:
                for b in facet_incs:
                    c = a & b
                    if c and c not in sets:
                        sets.add(c)
                        new.add(c)
            frontier = new
        by_dim: Dict[int, List[Face]] = {}
        for s in sets:
            d = _affine_dim_of([self.points[i] for i in sorted(s)])
            by_dim.setdefault(d, []).append(Face(s, d))
        for d in by_dim:
            by_dim[d].sort(key=lambda f: tuple(sorted(f.indices)))
        self._faces = by_dim
        return by_dim

    def faces(self, dim: int) -> List[Face]:
        return self.face_lattice().get(dim, [])

    @property
    def vertex_indices(self) -> List[FrozenSet[int]]:
        return [f.indices for f in self.faces(0)]

    @property
    def vertices(self) -> List[Point]:
        if self.affine_dim == 0:
            return [self.points[0]]
        vs = {self.points[min(f.indices)] for f in self.faces(0)}
        return sorted(vs)

    # -- metric data ---------------------------------------------------------

    def triangulate(self) -> List[Tuple[Point, ...]]:
        """Simplices (tuples of vertices) covering the polytope, from a fixed vertex."""
        d = self.affine_dim
        verts = self.vertices
        if d == 0:
            return [(verts[0],)]
        v0 = verts[0]  # lexicographically least vertex
        out: List[Tuple[Point, ...]] = []
        for f in self._relative_facets():
            fpts = [self.points[i] for i in sorted(f.incidence)]
            if v0 in fpts:
                continue
            sub = Polytope(fpts)
            for s in sub.triangulate():
                out.append((v0,) + s)
        return out

    def volume(self) -> Fraction:
        """Exact volume of the polytope.

        Full-dimensional polytopes get the euclidean Lebesgue volume.  For a
        lower-dimensional polytope the d-volume in the affine span is
        normalized so that the saturated integer lattice of the direction
        space has covolume 1 (the euclidean value is an irrational multiple
        of it and is not representable as a rational).
        A zero-dimensional polytope has volume 1 by convention.
        """
        d = self.affine_dim
        if d == 0:
            return Fraction(1)
        if d == self.ambient:
            total = Fraction(0)
            for s in self.triangulate():
                mat = [list(_sub(p, s[0])) for p in s[1:]]
                total += abs(det_frac(mat))
            fact = 1
            for k in range(2, d + 1):
                fact *= k
            return total / fact
        return self.normalized_volume(self._saturated_direction_lattice())

    def _saturated_direction_lattice(self) -> Lattice:
        from .lattice import saturate

        _, basis, _ = self._span_data()
        rows = [clear_denominators(b) for b in basis]
        return saturate(Lattice.from_rows(rows, self.ambient))

    def normalized_volume(self, lat: Lattice) -> Fraction:
        """Volume normalized so a fundamental domain of ``lat`` has volume 1.

        ``lat`` must span the affine direction space of the polytope.
        """
        d = self.affine_dim
        if lat.ambient != self.ambient:
            raise LatticeSpanMismatchError("ambient dimensions differ")
        if lat.rank != d:
            raise LatticeSpanMismatchError("lattice rank differs from polytope dimension")
        if d == 0:
            return Fraction(1)
        cols = [[Fraction(lat.basis[j][i]) for j in range(d)] for i in range(self.ambient)]
        total = Fraction(0)
        for s in self.triangulate():
            rows = []
            for p in s[1:]:
                sol = solve_frac(cols, list(_sub(p, s[0])))
                if sol is None:
                    raise LatticeSpanMismatchError("lattice does not span the polytope directions")
                rows.append(sol)
            total += abs(det_frac(rows))
        fact = 1
        for k in range(2, d + 1):
            fact *= k
        return total / fact

    # -- predicates -----------------------------------------------------------

    def contains(self, point: Sequence) -> bool:
        p = _pt(point)
        if len(p) != self.ambient:
            return False
        p0, basis, _ = self._span_data()
        if basis:
            cols = [[basis[j][i] for j in range(len(basis))] for i in range(self.ambient)]
            sol = solve_frac(cols, list(_sub(p, p0)))
            if sol is None:
                return False
            c = tuple(sol)
        else:
            if p != p0:
                return False
            c = ()
        _, _, coords = self._span_data()
        for f in self._relative_facets():
            if _dot(f.normal, c) < f.beta:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.ambient == other.ambient and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.ambient, tuple(self.vertices)))

    def __repr__(self):
        return f"Polytope(dim={self.affine_dim}, vertices={self.vertices})"


# ---------------------------------------------------------------------------
# Minkowski sums and mixed volumes
# ---------------------------------------------------------------------------

def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    """Hull of pairwise vertex sums."""
    if p.ambient != q.ambient:
        raise DimensionMismatchError("Minkowski sum of different ambient dimensions")
    pts = sorted({_add(a, b) for a in p.vertices for b in q.vertices})
    return Polytope(pts)


def _volume_ambient(p: Polytope) -> Fraction:
    return p.volume() if p.affine_dim == p.ambient else Fraction(0)


def mixed_volume(polytopes: Sequence[Polytope]) -> Fraction:
    """Mixed volume MV(Q_1, ..., Q_n) of n polytopes in R^n.

    Inclusion-exclusion over volumes of Minkowski sums of the subsets:
    MV = sum_{j} (-1)^(n-j) sum_{i_1<...<i_j} Vol_n(Q_{i_1} + ... + Q_{i_j});
    normalized so that MV(Q, ..., Q) = n! Vol_n(Q).
    """
    n = len(polytopes)
    if n == 0:
        return Fraction(1)
    for q in polytopes:
        if q.ambient != n:
            raise DimensionMismatchError(
                f"mixed volume needs {n} polytopes in R^{n}; got ambient {q.ambient}"
            )
    total = Fraction(0)
    for j in range(1, n + 1):
        sign = (-1) ** (n - j)
        for sub in combinations(range(n), j):
            s = reduce(minkowski_sum, (polytopes[i] for i in sub))
            total += sign * _volume_ambient(s)
    return total
