"""Toric variety data and geometric invariants.

A projective toric variety is encoded by an exponent configuration A (an
ordered list of lattice points) and a coefficient vector of nonzero radical
rationals.  This module computes degrees and multidegrees, converts between
(A, alpha) data and binomial ideals in both directions, evaluates obstruction
indices as lattice minima, and compares monomial embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .exactnum import AlgScalar, pi_power_compare
from .lattice import (
    Lattice,
    NotASublatticeError,
    det_int,
    hermite_normal_form,
    identity,
    is_saturated,
    kernel_basis_of_matrix,
    lattice_index,
    mat_mul,
    smith_normal_form,
    solve_frac,
    successive_minima_l1,
)
from .polytope import Polytope, mixed_volume


class PolytopeMismatchError(ValueError):
    """compare_embeddings needs equal polytopes for its finite-map conclusions."""


class NotSaturatedError(ValueError):
    pass


class NotHomogeneousError(ValueError):
    pass


class ExponentConfig:
    """An ordered tuple A = (a_0, ..., a_N) of points in Z^n."""

    def __init__(self, points: Sequence[Sequence[int]]):
        pts = [tuple(int(x) for x in p) for p in points]
        if not pts:
            raise ValueError("an exponent configuration needs at least one point")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise ValueError("exponent vectors of mixed dimension")
        self.n: int = dims.pop()
        self.points: Tuple[Tuple[int, ...], ...] = tuple(pts)
        self.N: int = len(pts) - 1
        self._poly: Optional[Polytope] = None
        self._kernel: Optional[Lattice] = None
        self._diff: Optional[Lattice] = None

    def polytope(self) -> Polytope:
        if self._poly is None:
            self._poly = Polytope(self.points)
        return self._poly

    def support(self) -> List[Tuple[int, ...]]:
        return sorted(set(self.points))

    def diff_lattice(self) -> Lattice:
        """L_A: the lattice spanned by the differences a_i - a_0."""
        if self._diff is None:
            a0 = self.points[0]
            rows = [tuple(x - y for x, y in zip(p, a0)) for p in self.points[1:]]
            self._diff = Lattice(self.n, hermite_normal_form(rows))
        return self._diff

    def eta_matrix(self) -> List[List[int]]:
        """Matrix of lambda -> (sum lambda_i, sum lambda_i a_i)."""
        rows = [[1] * (self.N + 1)]
        for k in range(self.n):
            rows.append([p[k] for p in self.points])
        return rows

    def kernel_lattice(self) -> Lattice:
        """Gamma_A = ker(eta_A), a saturated sublattice of Z^(N+1)."""
        if self._kernel is None:
            self._kernel = Lattice(self.N + 1, kernel_basis_of_matrix(self.eta_matrix()))
        return self._kernel

    @property
    def is_reduced(self) -> bool:
        lat = self.diff_lattice()
        return lat.rank == self.n and lat.basis == tuple(tuple(r) for r in identity(self.n))

    def __eq__(self, other):
        if not isinstance(other, ExponentConfig):
            return NotImplemented
        return self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"ExponentConfig(n={self.n}, points={list(self.points)})"


@dataclass(frozen=True)
class ReducedConfig:
    """Result of reduce_to_full_rank: the rebased configuration.

    ``config`` satisfies L = Z^rank; ``origin`` and ``basis`` describe the
    injective lattice map eta with a_i = origin + b_i . basis.
    """

    config: ExponentConfig
    origin: Tuple[int, ...]
    basis: Tuple[Tuple[int, ...], ...]


def reduce_to_full_rank(config: ExponentConfig) -> ReducedConfig:
    """Rebase A so that the difference lattice becomes Z^rank.

    Degrees, kernels and heights are invariant under this map; an already
    reduced configuration is returned unchanged.
    """
    if config.is_reduced:
        return ReducedConfig(config, tuple([0] * config.n), tuple(tuple(r) for r in identity(config.n)))
    lat = config.diff_lattice()
    basis = lat.basis
    r = len(basis)
    a0 = config.points[0]
    new_pts = []
    for p in config.points:
        diff = [p[i] - a0[i] for i in range(config.n)]
        if r:
            cols = [[Fraction(basis[j][i]) for j in range(r)] for i in range(config.n)]
            sol = solve_frac(cols, [Fraction(x) for x in diff])
            assert sol is not None and all(q.denominator == 1 for q in sol)
            new_pts.append(tuple(int(q) for q in sol))
        else:
            new_pts.append(())
    return ReducedConfig(ExponentConfig(new_pts), a0, basis)


class ToricData:
    """The pair (A, alpha) defining the projective toric variety X_{A,alpha}."""

    def __init__(self, config: ExponentConfig, alpha: Sequence[AlgScalar]):
        if len(alpha) != config.N + 1:
            raise ValueError("coefficient vector length must match the configuration")
        self.config = config
        self.alpha: Tuple[AlgScalar, ...] = tuple(alpha)
        self._reduced: Optional[ReducedConfig] = None

    @staticmethod
    def with_ones(config: ExponentConfig) -> "ToricData":
        return ToricData(config, [AlgScalar.one()] * (config.N + 1))

    def reduced(self) -> ReducedConfig:
        if self._reduced is None:
            self._reduced = reduce_to_full_rank(self.config)
        return self._reduced

    @property
    def dim(self) -> int:
        return self.config.diff_lattice().rank

    def coeff_power(self, b: Sequence[int]) -> AlgScalar:
        """alpha^b for an integer vector b."""
        out = AlgScalar.one()
        for a, e in zip(self.alpha, b):
            if e:
                out = out * (a ** Fraction(e))
        return out

    def __repr__(self):
        return f"ToricData(A={list(self.config.points)}, alpha={[a.render() for a in self.alpha]})"


def degree(data) -> int:
    """deg(X) = n! Vol_n(Q_A) after reduction to a full-rank lattice."""
    config = data.config if isinstance(data, ToricData) else data
    red = reduce_to_full_rank(config).config
    if red.n == 0:
        return 1
    vol = red.polytope().volume()
    val = vol * factorial(red.n)
    assert val.denominator == 1 and val > 0
    return int(val)


def multidegree(configs: Sequence[ExponentConfig], c: Sequence[int]) -> int:
    """deg_c of the joint embedding: mixed volume with c_i copies of each Q_{A_i}."""
    if len(c) != len(configs):
        raise ValueError("index vector length must match the number of factors")
    if any(x < 0 for x in c):
        raise ValueError("index vector entries must be nonnegative")
    ns = {cfg.n for cfg in configs}
    if len(ns) != 1:
        raise ValueError("factors live in different ambient dimensions")
    n = ns.pop()
    if sum(c) != n:
        raise ValueError(f"index vector must sum to the torus dimension {n}")
    joint = []
    for cfg in configs:
        joint.extend(cfg.diff_lattice().basis)
    if Lattice.from_rows(joint, n) != Lattice.full(n):
        raise ValueError("the factor lattices do not jointly span Z^n")
    qs: List[Polytope] = []
    for cfg, k in zip(configs, c):
        qs.extend([cfg.polytope()] * k)
    val = mixed_volume(qs)
    assert val.denominator == 1 and val >= 0
    return int(val)


# ---------------------------------------------------------------------------
# binomial ideals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Binomial:
    """x^plus - coeff * x^minus, with disjoint supports."""

    plus: Tuple[int, ...]
    minus: Tuple[int, ...]
    coeff: AlgScalar

    @property
    def degree(self) -> int:
        return sum(self.plus)

    def render(self, var: str = "x") -> str:
        def side(exps):
            parts = [
                f"{var}{i}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exps)
                if e
            ]
            return "*".join(parts) if parts else "1"

        c = self.coeff.render()
        cpart = "" if c == "1" else f"{c}*"
        if c.startswith("-"):
            return f"{side(self.plus)} + {c[1:]}*{side(self.minus)}" if c != "-1" else f"{side(self.plus)} + {side(self.minus)}"
        return f"{side(self.plus)} - {cpart}{side(self.minus)}"


def _split(b: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    plus = tuple(x if x > 0 else 0 for x in b)
    minus = tuple(-x if x < 0 else 0 for x in b)
    return plus, minus


def ideal_generators(data: ToricData) -> List[Binomial]:
    """Binomial generators x^{b+} - alpha^b x^{b-}, one per kernel basis vector."""
    out = []
    for b in data.config.kernel_lattice().basis:
        plus, minus = _split(b)
        out.append(Binomial(plus, minus, data.coeff_power(b)))
    return out


class BinomialIdeal:
    """A saturated homogeneous lattice with character values on a basis."""

    def __init__(self, generators: Sequence[Sequence[int]], values: Sequence[AlgScalar]):
        gens = [tuple(int(x) for x in g) for g in generators]
        if not gens:
            raise ValueError("a binomial ideal needs at least one generator")
        if len(values) != len(gens):
            raise ValueError("one character value per generator is required")
        m = len(gens[0])
        lat = Lattice(m, gens)  # raises if dependent
        if any(sum(g) != 0 for g in gens):
            raise NotHomogeneousError("generators must have coordinate sum zero")
        if not is_saturated(lat):
            raise NotSaturatedError("the relation lattice is not saturated")
        self.ambient = m
        self.generators = tuple(gens)
        self.values = tuple(values)
        self.lattice = lat

    def __repr__(self):
        return f"BinomialIdeal(gens={list(self.generators)})"


def _unimodular_inverse(u: Sequence[Sequence[int]]) -> List[List[int]]:
    m = len(u)
    det = det_int([list(r) for r in u])
    assert det in (1, -1)
    inv = []
    for i in range(m):
        row = []
        for j in range(m):
            minor = [
                [u[a][b] for b in range(m) if b != i]
                for a in range(m)
                if a != j
            ]
            row.append(det * (-1) ** (i + j) * det_int(minor))
        inv.append(row)
    return inv


def from_binomial_ideal(ideal: BinomialIdeal) -> ToricData:
    """Reconstruct (A, alpha) with I(X_{A,alpha}) = I(Gamma, rho).

    The orthogonal complement of Gamma contains the all-ones vector because
    Gamma is homogeneous; a basis is canonicalized by forcing that vector
    first, and the remaining rows give the exponents.  The character extends
    to Z^(N+1) through a Smith normal form of the generator matrix; because
    Gamma is saturated all elementary divisors are 1 and no roots are needed
    (CharacterNotRepresentable can only arise defensively).
    """
    m = ideal.ambient
    gamma = ideal.lattice
    ortho = _orthogonal(gamma)
    ones = tuple([1] * m)
    coords = ortho.coordinates_of(ones)
    assert coords is not None, "homogeneous lattice must be orthogonal to (1,...,1)"
    r = ortho.rank
    # unimodular W with first row = coords (coords is primitive)
    _, d, v = smith_normal_form([list(coords)])
    assert d[0][0] == 1, "all-ones vector must be primitive in the complement"
    w = _unimodular_inverse(v)
    new_basis = mat_mul(w, [list(b) for b in ortho.basis])
    assert tuple(new_basis[0]) == ones
    n = r - 1
    points = [tuple(new_basis[1 + k][i] for k in range(n)) for i in range(m)]
    config = ExponentConfig(points)

    # character extension via SNF of the generator matrix: with U G V = D and
    # all elementary divisors 1, the rows of V^{-1} indexed below the rank
    # span a complement of nothing -- writing G = U^{-1} [I 0] V^{-1}, the
    # character is solved on the rows of V^{-1} and read off on e_i via V
    gens = [list(g) for g in ideal.generators]
    u, d, v = smith_normal_form(gens)
    rk = len(gens)
    for j in range(rk):
        if d[j][j] != 1:
            # cannot happen for a saturated lattice; kept as a guard
            raise NotSaturatedError("character extension needs unit elementary divisors")
    phi: List[AlgScalar] = []
    for k in range(rk):
        val = AlgScalar.one()
        for j in range(rk):
            e = u[k][j]
            if e:
                val = val * (ideal.values[j] ** Fraction(e))
        phi.append(val)
    alpha: List[AlgScalar] = []
    for i in range(m):
        val = AlgScalar.one()
        for k in range(rk):
            e = v[i][k]
            if e:
                val = val * (phi[k] ** Fraction(e))
        alpha.append(val)
    data = ToricData(config, alpha)

    # round-trip safety: the kernel must reproduce Gamma and the character rho
    assert data.config.kernel_lattice() == gamma
    for g, s in zip(ideal.generators, ideal.values):
        assert data.coeff_power(g) == s
    return data


def _orthogonal(lat: Lattice) -> Lattice:
    from .lattice import orthogonal_complement

    return orthogonal_complement(lat)


# ---------------------------------------------------------------------------
# obstruction indices and the Minkowski sandwich
# ---------------------------------------------------------------------------

def obstruction_indices(data: ToricData) -> List[Tuple[Fraction, Binomial]]:
    """omega_i(X; torus) = mu_i(Gamma_X; l1)/2 with binomial witnesses."""
    gamma = data.config.kernel_lattice()
    if gamma.rank == 0:
        return []
    minima = successive_minima_l1(gamma, gamma.rank)
    out = []
    for norm, vec in minima:
        plus, minus = _split(vec)
        out.append((Fraction(norm, 2), Binomial(plus, minus, data.coeff_power(vec))))
    return out


@dataclass(frozen=True)
class SandwichReport:
    degree: int
    omegas: Tuple[Fraction, ...]
    product: Fraction
    simple_bound: Fraction            # (N+1)^(N-n) * deg
    lower_ok: bool                    # deg <= prod(omega)
    sharp_upper_ok: bool              # prod <= c(N, n) * deg  (Gamma-function form)
    weak_upper_ok: bool               # prod <= ((N+1)/sqrt(pi))^(N-n) * deg
    simple_upper_ok: bool             # prod <= (N+1)^(N-n) * deg


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def minkowski_sandwich(data: ToricData) -> SandwichReport:
    """Check deg(X) <= prod omega_i <= c(N, n) deg(X) with exact comparisons.

    The pi-dependent bounds are decided by squaring (the half-integer Gamma
    values contribute a single power of pi) and certified interval evaluation
    of the resulting rational-times-pi-power expression.
    """
    deg = degree(data)
    oms = obstruction_indices(data)
    omegas = tuple(o for o, _ in oms)
    prod = Fraction(1)
    for o in omegas:
        prod *= o
    nn = data.config.N
    n = data.dim
    r = nn - n
    lower_ok = Fraction(deg) <= prod
    simple_bound = Fraction((nn + 1) ** r) * deg
    simple_ok = prod <= simple_bound
    if r == 0:
        return SandwichReport(deg, omegas, prod, simple_bound, lower_ok, True, True, simple_ok)
    # weak bound: prod^2 <= (N+1)^(2r)/pi^r * deg^2
    weak_ok = (
        pi_power_compare(prod * prod, Fraction((nn + 1) ** (2 * r)) * deg * deg, -r) <= 0
    )
    # sharp bound: c(N,n)^2 = C(N+1, n+1) ((N+1)/pi)^r Gamma(1 + r/2)^2
    if r % 2 == 0:
        gamma_sq = Fraction(factorial(r // 2) ** 2)
        exponent = -r
    else:
        gamma_sq = Fraction(_double_factorial(r) ** 2, 2 ** (r + 1))
        exponent = 1 - r
    c_sq_rat = Fraction(comb(nn + 1, n + 1)) * Fraction((nn + 1) ** r) * gamma_sq
    sharp_ok = pi_power_compare(prod * prod, c_sq_rat * deg * deg, exponent) <= 0
    return SandwichReport(deg, omegas, prod, simple_bound, lower_ok, sharp_ok, weak_ok, simple_ok)


# ---------------------------------------------------------------------------
# Pluecker data (tangent-space coordinates of a subtorus)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlueckerData:
    matrix: Tuple[Tuple[int, ...], ...]            # n x N, lambda_{i,j} = a_{j,i} - a_{0,i}
    minors: Tuple[Tuple[Tuple[int, ...], int], ...]  # (column subset, determinant)
    gcd: int

    def schmidt_height_sq(self) -> int:
        return sum(m * m for _, m in self.minors)

    def segre_degree(self) -> int:
        n = len(self.matrix)
        return factorial(n) * sum(abs(m) for _, m in self.minors)


def pluecker(config: ExponentConfig) -> PlueckerData:
    """Minors of the difference matrix of a reduced configuration.

    The configuration is reduced first: the minors are the grassmannian
    coordinates of the tangent space, so they are computed in a basis where
    the difference lattice is the full lattice.
    """
    red = reduce_to_full_rank(config).config
    n, nn = red.n, red.N
    lam = [[red.points[j][i] - red.points[0][i] for j in range(1, nn + 1)] for i in range(n)]
    minors = []
    g = 0
    for cols in combinations(range(nn), n):
        sub = [[lam[i][j] for j in cols] for i in range(n)]
        m = det_int(sub)
        minors.append((tuple(c + 1 for c in cols), m))
        g = _gcd(g, m)
    return PlueckerData(tuple(tuple(r) for r in lam), tuple(minors), abs(g))


def _gcd(a: int, b: int) -> int:
    from math import gcd as _g

    return _g(a, b)


def schmidt_height_sq(config: ExponentConfig) -> int:
    return pluecker(config).schmidt_height_sq()


def segre_degree(config: ExponentConfig) -> int:
    return pluecker(config).segre_degree()


# ---------------------------------------------------------------------------
# embedding comparison (finite projections and isomorphism tests)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingReport:
    is_projection: bool
    projection_degree: int
    is_isomorphism: bool


def compare_embeddings(a: ExponentConfig, b: ExponentConfig) -> EmbeddingReport:
    """Compare the monomial embeddings of two configurations with Supp(A) in Supp(B).

    When the polytopes agree the standard projection is finite of degree
    [L_B : L_A]; it is an isomorphism exactly when the difference lattices of
    A and B agree on every face of the common polytope.
    """
    if a.n != b.n:
        raise ValueError("configurations in different ambient dimensions")
    if not set(a.support()) <= set(b.support()):
        raise ValueError("Supp(A) must be contained in Supp(B)")
    qa, qb = a.polytope(), b.polytope()
    if qa != qb:
        raise PolytopeMismatchError("polytopes differ; only the projection X_A = pi(X_B) holds")
    deg = lattice_index(a.diff_lattice(), b.diff_lattice())
    iso = True
    for dim, faces in qb.face_lattice().items():
        for face in faces:
            face_pts = [b.points[i] for i in sorted(face.indices)]
            face_poly = Polytope(face_pts)
            a_on = [p for p in a.support() if face_poly.contains(p)]
            b_on = [p for p in set(face_pts)]
            la = _diff_lattice_of(a_on, a.n)
            lb = _diff_lattice_of(b_on, b.n)
            if la != lb:
                iso = False
    return EmbeddingReport(True, int(deg), iso and deg == 1)


def _diff_lattice_of(points: List[Tuple[int, ...]], n: int) -> Lattice:
    if not points:
        return Lattice(n, [])
    p0 = sorted(points)[0]
    rows = [tuple(x - y for x, y in zip(p, p0)) for p in sorted(points)]
    return Lattice.from_rows(rows, n)
