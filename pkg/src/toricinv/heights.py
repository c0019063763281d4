"""Arithmetic invariants of toric varieties.

Heights live in the log-linear value space: every place of the coefficient
field contributes a weight vector, and the normalized height is a sum of
Chow weights, which are roof integrals.  For radical-rational coefficients
all places over a prime p carry the same weight vector, so the adelic sum
collapses to one symbol per prime plus one archimedean symbol; the product
formula makes each per-coordinate symbol sum vanish exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .exactnum import (
    AlgScalar,
    LogLinear,
    is_prime,
    ll_max,
    scalar_log,
)
from .lattice import Lattice, kernel_basis_of_matrix, lattice_index, det_frac
from .polytope import Polytope
from .roof import RoofCell, RoofFunction, mixed_integral, roof
from .toric import (
    BinomialIdeal,
    ExponentConfig,
    ToricData,
    degree,
    from_binomial_ideal,
    reduce_to_full_rank,
)

WeightVector = Tuple[LogLinear, ...]
SymbolLabel = Union[str, int]  # "inf" or a prime


class HypothesisNotSatisfiedError(ValueError):
    """The dominant-exponent hypothesis fails; carries a witness symbol."""

    def __init__(self, message: str, symbol: Optional[SymbolLabel] = None):
        super().__init__(message)
        self.symbol = symbol


class PaperIdentityError(AssertionError):
    """An identity that must hold exactly failed: a library defect."""


class MinimaNotProvedError(ValueError):
    pass


class InfeasibleParametersError(ValueError):
    pass


class NoPrimeInRangeError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# adelic weight systems
# ---------------------------------------------------------------------------

class AdelicWeightSystem:
    """Finitely many weight vectors indexed by symbols, summing to zero.

    The symbol ``"inf"`` carries the archimedean logs; a prime symbol p
    carries rational multiples of log p.  The per-coordinate product formula
    is checked on construction.
    """

    def __init__(self, symbols: Sequence[Tuple[SymbolLabel, Sequence[LogLinear]]]):
        self.symbols: List[Tuple[SymbolLabel, WeightVector]] = [
            (label, tuple(vec)) for label, vec in symbols
        ]
        if self.symbols:
            width = {len(vec) for _, vec in self.symbols}
            if len(width) != 1:
                raise ValueError("weight vectors of mixed length")
            self.width = width.pop()
            for i in range(self.width):
                total = LogLinear.zero()
                for _, vec in self.symbols:
                    total = total + vec[i]
                if not total.is_zero():
                    raise ValueError(f"product formula fails at coordinate {i}")
        else:
            self.width = 0

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __repr__(self):
        return f"AdelicWeightSystem({[label for label, _ in self.symbols]})"


def adelic_weights(alpha: Sequence[AlgScalar]) -> AdelicWeightSystem:
    """The aggregated weight system of a radical-rational coefficient vector.

    The archimedean symbol carries log|alpha_i|; the symbol p carries
    -v_p(alpha_i) log p.  The product formula holds by construction.
    """
    primes = sorted({p for a in alpha for p, _ in a.exponents()})
    symbols: List[Tuple[SymbolLabel, List[LogLinear]]] = []
    symbols.append(("inf", [scalar_log(a) for a in alpha]))
    for p in primes:
        symbols.append((p, [LogLinear.log(p, -a.valuation(p)) for a in alpha]))
    return AdelicWeightSystem(symbols)


def point_height(alpha: Sequence[AlgScalar]) -> LogLinear:
    """Gauss-Weil height of the projective point (alpha_0 : ... : alpha_N)."""
    if not alpha:
        raise ValueError("height of an empty point")
    total = LogLinear.zero()
    for _, vec in adelic_weights(alpha):
        total = total + ll_max(vec)
    return total


# ---------------------------------------------------------------------------
# Chow weights
# ---------------------------------------------------------------------------

def weight_roof(config: ExponentConfig, tau: Sequence[LogLinear]) -> RoofFunction:
    """The concave roof over Q_A induced by the weight vector, in reduced coordinates."""
    if len(tau) != config.N + 1:
        raise ValueError("weight vector length must match the configuration")
    red = reduce_to_full_rank(config).config
    return roof(red.points, list(tau))


def chow_weight(config: ExponentConfig, tau: Sequence[LogLinear]) -> LogLinear:
    """e_tau(X_A) = (n+1)! * integral of the roof over Q_A."""
    red = reduce_to_full_rank(config).config
    f = roof(red.points, list(tau))
    return f.integral() * factorial(red.n + 1)


def chow_weight_hypersurface(monomials: Sequence[Sequence[int]], tau: Sequence[LogLinear]) -> LogLinear:
    """e_tau of a hypersurface from the support of its equation.

    Equals (sum tau_i) deg(f) minus the t-adic valuation of the deformed
    equation, which is the minimum of <a, tau> over the support monomials.
    """
    if not monomials:
        raise ValueError("empty support")
    exps = [tuple(int(x) for x in a) for a in monomials]
    degs = {sum(a) for a in exps}
    if len(degs) != 1:
        raise ValueError("inhomogeneous support")
    deg_f = degs.pop()
    width = {len(a) for a in exps}
    if len(width) != 1 or width.pop() != len(tau):
        raise ValueError("support width must match the weight vector")
    tau_sum = LogLinear.zero()
    for t in tau:
        tau_sum = tau_sum + t
    vals = []
    for a in exps:
        v = LogLinear.zero()
        for e, t in zip(a, tau):
            if e:
                v = v + t * e
        vals.append(v)
    w_t = vals[0]
    for v in vals[1:]:
        if (v - w_t).sign() < 0:
            w_t = v
    return tau_sum * deg_f - w_t


def normalized_height(data: ToricData) -> LogLinear:
    """hhat(X_{A,alpha}): the adelic sum of roof integrals (exact LogLinear)."""
    total = LogLinear.zero()
    for _, vec in adelic_weights(data.alpha):
        total = total + chow_weight(data.config, vec)
    return total


def multiheight(
    configs: Sequence[ExponentConfig],
    alphas: Sequence[Sequence[AlgScalar]],
    c: Sequence[int],
) -> LogLinear:
    """hhat_c of a multiprojective toric variety: adelic mixed integrals.

    Takes c_i copies of each factor's roof per symbol; requires
    sum(c) = n + 1 and jointly full factor lattices.
    """
    if len(configs) != len(alphas) or len(configs) != len(c):
        raise ValueError("factors, coefficients and index vector must align")
    if any(x < 0 for x in c):
        raise ValueError("index vector entries must be nonnegative")
    ns = {cfg.n for cfg in configs}
    if len(ns) != 1:
        raise ValueError("factors live in different ambient dimensions")
    n = ns.pop()
    if sum(c) != n + 1:
        raise ValueError(f"index vector must sum to {n + 1}")
    joint = []
    for cfg in configs:
        joint.extend(cfg.diff_lattice().basis)
    if Lattice.from_rows(joint, n) != Lattice.full(n):
        raise ValueError("the factor lattices do not jointly span Z^n")
    for cfg, al in zip(configs, alphas):
        if len(al) != cfg.N + 1:
            raise ValueError("coefficient vector length must match its factor")
    flat: List[AlgScalar] = [a for al in alphas for a in al]
    primes = sorted({p for a in flat for p, _ in a.exponents()})
    labels: List[SymbolLabel] = ["inf"] + list(primes)
    total = LogLinear.zero()
    for label in labels:
        functions: List[RoofFunction] = []
        for cfg, al, k in zip(configs, alphas, c):
            if k == 0:
                continue
            if label == "inf":
                vec = [scalar_log(a) for a in al]
            else:
                vec = [LogLinear.log(label, -a.valuation(label)) for a in al]
            f = roof([list(p) for p in cfg.points], vec)
            functions.extend([f] * k)
        total = total + mixed_integral(functions)
    return total


# ---------------------------------------------------------------------------
# monomial divisors and the intersection cycle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialDivisor:
    """div(x^b) on P^N, bound to an exponent configuration."""

    b: Tuple[int, ...]
    degree: int                 # D = sum b_j
    moment: Tuple[int, ...]     # M_A(b) = sum b_j a_j (in reduced coordinates)

    @staticmethod
    def of(config: ExponentConfig, b: Sequence[int]) -> "MonomialDivisor":
        bb = tuple(int(x) for x in b)
        if len(bb) != config.N + 1:
            raise ValueError("divisor exponent length must match the configuration")
        red = reduce_to_full_rank(config).config
        m = tuple(
            sum(bb[j] * red.points[j][i] for j in range(red.N + 1))
            for i in range(red.n)
        )
        return MonomialDivisor(bb, sum(bb), m)


@dataclass(frozen=True)
class CycleComponent:
    facet_indices: FrozenSet[int]       # input points on the facet
    facet_normal: Tuple[int, ...]       # primitive inner normal (reduced coords)
    base_index: int                     # the fixed point a_F (first on the facet)
    lattice_index: int                  # i(A; F)
    multiplicity: int
    data: ToricData                     # (A(F), alpha(F))


@dataclass(frozen=True)
class IntersectionCycle:
    divisor: MonomialDivisor
    total_degree: int                   # sum multiplicity * deg(component)
    components: Tuple[CycleComponent, ...]


def monomial_intersection(data: ToricData, b: Sequence[int]) -> IntersectionCycle:
    """The cycle X_A . div(x^b) as multiplicities on facet subvarieties.

    The multiplicity on the facet F is <M_A(b) - D a_F, v_F> i(A; F) where
    i(A; F) is the index of the facet's difference lattice inside the lattice
    of its supporting hyperplane.  For effective b the geometric Bezout
    identity deg(X . div) = D deg(X) is verified and a failure raises
    PaperIdentityError.
    """
    div = MonomialDivisor.of(data.config, b)
    red = reduce_to_full_rank(data.config).config
    n = red.n
    if n == 0:
        raise ValueError("monomial intersection needs a positive-dimensional variety")
    comps: List[CycleComponent] = []
    total = 0
    hyper_cache: Dict[Tuple[int, ...], Lattice] = {}
    for f in red.polytope().facets():
        a_f_idx = min(f.incidence)
        a_f = red.points[a_f_idx]
        pairing = sum((div.moment[i] - div.degree * a_f[i]) * f.normal[i] for i in range(n))
        if pairing == 0:
            continue
        if f.normal not in hyper_cache:
            hyper_cache[f.normal] = Lattice(n, kernel_basis_of_matrix([list(f.normal)]))
        hyper = hyper_cache[f.normal]
        face_pts = [red.points[i] for i in sorted(f.incidence)]
        p0 = face_pts[0]
        diff_rows = [tuple(x - y for x, y in zip(p, p0)) for p in face_pts]
        la_f = Lattice.from_rows(diff_rows, n)
        idx = lattice_index(la_f, hyper)
        assert isinstance(idx, int)
        mult = pairing * idx
        comp_cfg = ExponentConfig([data.config.points[i] for i in sorted(f.incidence)])
        comp_alpha = [data.alpha[i] for i in sorted(f.incidence)]
        comp = ToricData(comp_cfg, comp_alpha)
        total += mult * degree(comp)
        comps.append(
            CycleComponent(f.incidence, f.normal, a_f_idx, idx, mult, comp)
        )
    cycle = IntersectionCycle(div, total, tuple(comps))
    if all(x >= 0 for x in div.b):
        if total != div.degree * degree(data):
            raise PaperIdentityError(
                f"degree Bezout failed: {total} != {div.degree} * {degree(data)}"
            )
    return cycle


def chow_weight_cycle(cycle: IntersectionCycle, tau: Sequence[LogLinear]) -> LogLinear:
    """Multiplicity-linear extension of the Chow weight to an intersection cycle.

    Each component's weight is computed intrinsically on (A(F), tau(F)) after
    rank reduction; this agrees with the wall-integral form by the
    Brill-Gordan normalization of the facet volume.
    """
    total = LogLinear.zero()
    for comp in cycle.components:
        sub_tau = [tau[i] for i in sorted(comp.facet_indices)]
        w = chow_weight(comp.data.config, sub_tau)
        total = total + w * comp.multiplicity
    return total


# ---------------------------------------------------------------------------
# the subdivision side of the Bezout identity
# ---------------------------------------------------------------------------

def theta_cell(
    config: ExponentConfig,
    tau: Sequence[LogLinear],
    cell: RoofCell,
    b: Sequence[int],
) -> LogLinear:
    """theta_{tau,S}(b): the lift of M_A(b) to the extended pan hyperplane.

    Computed by the Cramer determinant identity: theta * det[1; a_{j_i}] is
    minus the determinant of the same matrix bordered by the column
    (D, M_A(b), 0) and the row of tau values; expanding along the tau row
    keeps every minor rational and the result an exact LogLinear.
    """
    red = reduce_to_full_rank(config).config
    n = red.n
    div = MonomialDivisor.of(config, b)
    # canonical affinely independent choice from the cell's touching points
    chosen: List[int] = []
    rows: List[List[Fraction]] = []
    for i in sorted(cell.indices):
        p = red.points[i]
        cand = rows + [[Fraction(1)] + [Fraction(x) for x in p]]
        from .lattice import rank_frac

        if rank_frac(cand) > len(rows):
            rows.append(cand[-1])
            chosen.append(i)
        if len(chosen) == n + 1:
            break
    if len(chosen) != n + 1:
        raise ValueError("degenerate cell: no affinely independent spanning set")
    w_mat = [[Fraction(1)] * (n + 1)] + [
        [Fraction(red.points[j][i]) for j in chosen] for i in range(n)
    ]
    det_w = det_frac(w_mat)
    assert det_w != 0
    # bordered matrix rows: ones + D, coordinates + M, tau + 0
    top: List[List[Fraction]] = [[Fraction(1)] * (n + 1) + [Fraction(div.degree)]]
    for i in range(n):
        top.append([Fraction(red.points[j][i]) for j in chosen] + [Fraction(div.moment[i])])
    # expand along the tau row (last row, last entry 0)
    big = LogLinear.zero()
    m = n + 2
    for pos, j in enumerate(chosen):
        minor = [
            [top[r][cc] for cc in range(m - 1 + 1) if cc != pos]
            for r in range(m - 1)
        ]
        cof = det_frac(minor) * ((-1) ** ((m - 1) + pos))
        big = big + tau[j] * cof
    return (-big) / det_w


def subdivision_correction(
    config: ExponentConfig, tau: Sequence[LogLinear], b: Sequence[int]
) -> Tuple[LogLinear, RoofFunction]:
    """n! * sum over top cells S of theta_{tau,S}(b) Vol_n(S), plus the roof."""
    red = reduce_to_full_rank(config).config
    f = weight_roof(config, tau)
    total = LogLinear.zero()
    for cell in f.cells:
        vol = Polytope(cell.vertices).volume()
        if vol:
            total = total + theta_cell(config, tau, cell, b) * vol
    return total * factorial(red.n), f


@dataclass(frozen=True)
class ChowBezoutReport:
    lhs: LogLinear                  # e_tau of the intersection cycle
    rhs: LogLinear                  # D e_tau(X) - n! sum theta Vol
    correction: LogLinear           # n! sum_S theta_{tau,S}(b) Vol(S)
    chow_weight_total: LogLinear    # e_tau(X_A)
    equal: bool
    effective_bound_ok: Optional[bool]  # (VII.21) when b >= 0, else None


def chow_bezout(config: ExponentConfig, tau: Sequence[LogLinear], b: Sequence[int]) -> ChowBezoutReport:
    """Verify e_tau(X . div(x^b)) = D e_tau(X) - n! sum_S theta_{tau,S}(b) Vol(S).

    The two sides are computed along independent paths: the left through the
    intersection cycle and intrinsic face Chow weights, the right through the
    regular subdivision.  Exact disagreement raises PaperIdentityError.
    """
    data = ToricData.with_ones(config)
    div = MonomialDivisor.of(config, b)
    cycle = monomial_intersection(data, b)
    lhs = chow_weight_cycle(cycle, tau)
    e_x = chow_weight(config, tau)
    correction, _ = subdivision_correction(config, tau, b)
    rhs = e_x * div.degree - correction
    equal = (lhs - rhs).is_zero()
    if not equal:
        raise PaperIdentityError(f"Chow Bezout failed: {lhs.render()} != {rhs.render()}")
    eff: Optional[bool] = None
    if all(x >= 0 for x in div.b):
        tb = LogLinear.zero()
        for t, e in zip(tau, div.b):
            if e:
                tb = tb + t * e
        bound = e_x * div.degree - tb * degree(data)
        eff = (lhs - bound).sign() <= 0
        if not eff:
            raise PaperIdentityError("effective Chow bound (VII.21) failed")
    return ChowBezoutReport(lhs, rhs, correction, e_x, equal, eff)


@dataclass(frozen=True)
class HeightBezoutReport:
    lhs: LogLinear                   # hhat(X . div)
    rhs: LogLinear                   # D hhat(X) - n! sum_v sum_S theta Vol
    height_total: LogLinear          # hhat(X)
    correction: LogLinear
    equal: bool
    effective_bound_ok: Optional[bool]


def height_bezout(data: ToricData, b: Sequence[int]) -> HeightBezoutReport:
    """Verify hhat(X . div(x^b)) = D hhat(X) - n! sum_v sum_S theta Vol(S)."""
    div = MonomialDivisor.of(data.config, b)
    cycle = monomial_intersection(data, b)
    lhs = LogLinear.zero()
    for comp in cycle.components:
        lhs = lhs + normalized_height(comp.data) * comp.multiplicity
    h_x = normalized_height(data)
    correction = LogLinear.zero()
    for _, vec in adelic_weights(data.alpha):
        corr, _ = subdivision_correction(data.config, vec, b)
        correction = correction + corr
    rhs = h_x * div.degree - correction
    equal = (lhs - rhs).is_zero()
    if not equal:
        raise PaperIdentityError(f"height Bezout failed: {lhs.render()} != {rhs.render()}")
    eff: Optional[bool] = None
    if all(x >= 0 for x in div.b):
        eff = (lhs - h_x * div.degree).sign() <= 0
        if not eff:
            raise PaperIdentityError("effective height bound failed")
    return HeightBezoutReport(lhs, rhs, h_x, correction, equal, eff)


# ---------------------------------------------------------------------------
# successive algebraic minima
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EssentialMinimum:
    value: LogLinear
    dominant_exponent: Tuple[int, ...]


def essential_minimum(data: ToricData) -> EssentialMinimum:
    """muhat^ess(X) under the dominant-exponent hypothesis.

    Requires a support point a such that at every symbol the maximum weight
    is attained over a; then the essential minimum is the height of alpha.
    The general case is open, so failure raises with the failing symbol.
    """
    system = adelic_weights(data.alpha)
    support = data.config.support()
    points = data.config.points
    failures: List[Tuple[Tuple[int, ...], SymbolLabel]] = []
    for a in support:
        idxs = [i for i, p in enumerate(points) if p == a]
        witness_symbol: Optional[SymbolLabel] = None
        for label, vec in system:
            m_all = ll_max(vec)
            m_at = ll_max([vec[i] for i in idxs])
            if not (m_all - m_at).is_zero():
                witness_symbol = label
                break
        if witness_symbol is None:
            return EssentialMinimum(point_height(data.alpha), a)
        failures.append((a, witness_symbol))
    detail = "; ".join(f"exponent {a}: symbol {s}" for a, s in failures)
    raise HypothesisNotSatisfiedError(
        f"no dominant exponent: {detail}", failures[0][1] if failures else None
    )


@dataclass(frozen=True)
class MinimaEntry:
    index: int                       # i (1-based)
    value: Optional[LogLinear]       # min over proved faces (upper bound if flagged)
    face_indices: Optional[FrozenSet[int]]
    proved: bool                     # every face of this dimension proved


@dataclass(frozen=True)
class MinimaProfile:
    entries: Tuple[MinimaEntry, ...]

    @property
    def all_proved(self) -> bool:
        return all(e.proved and e.value is not None for e in self.entries)

    def values(self) -> List[LogLinear]:
        return [e.value for e in self.entries]


def successive_minima(data: ToricData) -> MinimaProfile:
    """muhat_i(X) as minima of face-orbit essential minima.

    The i-th minimum runs over the faces of dimension n-i+1; on an orbit
    closure the essential and absolute minima of the open orbit agree, so
    each face contributes essential_minimum of its face variety.  Faces where
    the dominant-exponent hypothesis fails are flagged, never guessed.
    """
    n = data.dim
    poly = data.config.polytope()
    lattice = poly.face_lattice()
    entries: List[MinimaEntry] = []
    for i in range(1, n + 2):
        target = n - i + 1
        best: Optional[LogLinear] = None
        best_face: Optional[FrozenSet[int]] = None
        proved = True
        for face in lattice.get(target, []):
            idxs = sorted(face.indices)
            sub = ToricData(
                ExponentConfig([data.config.points[j] for j in idxs]),
                [data.alpha[j] for j in idxs],
            )
            try:
                em = essential_minimum(sub)
            except HypothesisNotSatisfiedError:
                proved = False
                continue
            if best is None or (em.value - best).sign() < 0:
                best = em.value
                best_face = face.indices
        entries.append(MinimaEntry(i, best, best_face, proved))
    return MinimaProfile(tuple(entries))


@dataclass(frozen=True)
class HypersurfaceMinimaReport:
    essential: LogLinear
    mu_rest_zero: bool
    degree: int
    cross_check_ok: bool


def hypersurface_minima(b: Sequence[int], c: Sequence[int], lam: AlgScalar) -> HypersurfaceMinimaReport:
    """Minima of the binomial hypersurface x^b - lam x^c.

    muhat^ess = h(1 : lam)/deg(f) = hhat(X)/deg(X); the higher minima vanish.
    The height/degree form is cross-checked on the variety reconstructed from
    the ideal.
    """
    bb = [int(x) for x in b]
    cc = [int(x) for x in c]
    if len(bb) != len(cc):
        raise ValueError("exponent vectors of different length")
    if sum(bb) != sum(cc):
        raise ValueError("inhomogeneous binomial")
    gamma = [x - y for x, y in zip(bb, cc)]
    from math import gcd as _g

    g = 0
    for x in gamma:
        g = _g(g, x)
    if g != 1:
        raise ValueError("the binomial is not irreducible (gcd of b - c is not 1)")
    deg_f = sum(bb)
    ess = point_height([AlgScalar.one(), lam]) / deg_f
    ideal = BinomialIdeal([gamma], [lam])
    x = from_binomial_ideal(ideal)
    ratio = normalized_height(x) / degree(x)
    ok = (ratio - ess).is_zero()
    if not ok:
        raise PaperIdentityError("hypersurface minima cross-check failed")
    return HypersurfaceMinimaReport(ess, True, deg_f, ok)


# ---------------------------------------------------------------------------
# Zhang bracket and height/degree bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZhangReport:
    minima: MinimaProfile
    height: LogLinear
    degree: int
    lower_ok: bool                  # sum muhat_i <= hhat/deg
    upper_ok: bool                  # hhat/deg <= (n+1) muhat_1


def zhang_check(data: ToricData) -> ZhangReport:
    """The successive-minima bracket: sum mu_i <= hhat/deg <= (n+1) mu_1."""
    profile = successive_minima(data)
    if not profile.all_proved:
        raise MinimaNotProvedError("some faces fail the dominant-exponent hypothesis")
    h = normalized_height(data)
    d = degree(data)
    ratio = h / d
    total = LogLinear.zero()
    for e in profile.entries:
        total = total + e.value
    lower_ok = (total - ratio).sign() <= 0
    upper_ok = (ratio - profile.entries[0].value * (data.dim + 1)).sign() <= 0
    if not (lower_ok and upper_ok):
        raise PaperIdentityError("Zhang minima bracket failed")
    return ZhangReport(profile, h, d, lower_ok, upper_ok)


@dataclass(frozen=True)
class HeightDegreeBounds:
    lower: LogLinear
    ratio: LogLinear
    upper: LogLinear
    ok: bool


def height_degree_bounds(data: ToricData) -> HeightDegreeBounds:
    """hhat(alpha) - n hhat(inverse vertex coords) <= hhat/deg <= (n+1) hhat(alpha)."""
    h_alpha = point_height(data.alpha)
    n = data.dim
    poly = data.config.polytope()
    vertex_idx = sorted({i for f in poly.faces(0) for i in f.indices})
    inv = [data.alpha[i].inverse() for i in vertex_idx]
    lower = h_alpha - point_height(inv) * n
    upper = h_alpha * (n + 1)
    ratio = normalized_height(data) / degree(data)
    ok = (lower - ratio).sign() <= 0 and (ratio - upper).sign() <= 0
    if not ok:
        raise PaperIdentityError("height/degree bounds failed")
    return HeightDegreeBounds(lower, ratio, upper, ok)


# ---------------------------------------------------------------------------
# the minima-realization family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZhangFamilyReport:
    data: ToricData
    n: int
    d: int
    k: int
    f: int
    denominator: int                     # common denominator l of the q_i
    q: Tuple[Fraction, ...]
    predicted_minima: Tuple[LogLinear, ...]
    minima: MinimaProfile
    theta: LogLinear
    height: LogLinear
    degree: int
    roof_error_ok: bool                  # 0 <= hhat/deg - theta <= (n+1)(k-1)/d q0 log 2
    target_ok: bool                      # |hhat/deg - nu| <= 2 n^2 mu_1 / d
    zhang: ZhangReport


def _smallest_prime_at_least(x: LogLinear) -> int:
    """Least prime p with p >= x, by ascending certified comparisons."""
    p = 2
    while True:
        if is_prime(p) and (LogLinear.rational(p) - x).sign() >= 0:
            return p
        p += 1
        if p > 10 ** 7:  # pragma: no cover - defensive; Bertrand guarantees a hit
            raise NoPrimeInRangeError("prime search did not terminate")


def zhang_family(
    n: int,
    mu: Sequence[Fraction],
    nu: Fraction,
    eps1: Fraction,
    eps2: Fraction,
) -> ZhangFamilyReport:
    """Construct the family realizing prescribed minima and height/degree ratio.

    mu, nu and eps1 are rational multiples of log 2 (the multipliers are
    passed); eps2 is a plain positive rational.  The construction follows the
    recipe: denominators l and q_i from eps1, the breakpoint k from nu, a
    Bertrand prime d from eps2, and f = clamp(round(lambda d), 1, d-1).
    """
    mu = [Fraction(x) for x in mu]
    nu = Fraction(nu)
    eps1 = Fraction(eps1)
    eps2 = Fraction(eps2)
    if len(mu) != n + 1:
        raise InfeasibleParametersError("need n+1 minima targets")
    if any(mu[i] < mu[i + 1] for i in range(n)) or mu[-1] < 0:
        raise InfeasibleParametersError("minima targets must be non-increasing and >= 0")
    log2 = LogLinear.log(2)
    if mu[0] == 0:
        # degenerate torsion-like family
        if nu != 0:
            raise InfeasibleParametersError("nu must be 0 when all minima targets are 0")
        q = tuple(Fraction(0) for _ in range(n + 1))
        d, k, f, ell = 2, 1, 1, 1
    else:
        if not (sum(mu) <= nu < (n + 1) * mu[0]):
            raise InfeasibleParametersError("need sum(mu) <= nu < (n+1) mu_1")
        if not (0 < eps1 <= (n + 1) * mu[0] - nu):
            raise InfeasibleParametersError("need 0 < eps1 <= (n+1) mu_1 - nu")
        if eps2 <= 0:
            raise InfeasibleParametersError("eps2 must be positive")
        inv = Fraction(1) / eps1
        ell = int(inv) + (0 if inv.denominator == 1 else 1) + 1
        q = tuple(Fraction(int(ell * mu[i]), ell) for i in range(n + 1))
        k = None
        for kk in range(1, n + 1):
            upper = (kk + 1) * q[0] + sum(q[kk + 1:])
            if nu <= upper:
                k = kk
                break
        if k is None:
            raise InfeasibleParametersError("no admissible breakpoint k")
        low = k * q[0] + sum(q[k:])
        upper = (k + 1) * q[0] + sum(q[k + 1:])
        lam = Fraction(0) if upper == low else (nu - low) / (upper - low)
        target = log2 * Fraction(2 * n * n) * mu[0] / eps2
        d = _smallest_prime_at_least(target)
        f = int(lam * d + Fraction(1, 2))
        f = max(1, min(d - 1, f))
    # the exponent configuration: two unit copies of the scaled simplex
    # vertices plus the staircase points b_i
    zero = tuple(0 for _ in range(n))
    a = [tuple(d if j == i else 0 for j in range(n)) for i in range(n)]
    b_pts = []
    for i in range(1, n + 1):
        if i <= k - 1:
            b_pts.append(tuple(d - 1 if j == i - 1 else 0 for j in range(n)))
        elif i == k:
            b_pts.append(tuple(f if j == i - 1 else 0 for j in range(n)))
        else:
            b_pts.append(tuple(1 if j == i - 1 else 0 for j in range(n)))
    points = [zero] + a + [zero] + a + b_pts
    one = AlgScalar.one()
    two = lambda e: AlgScalar.prime_power(2, e)
    alpha = (
        [one] * (n + 1)
        + [two(q[i]) for i in range(n + 1)]
        + [two(q[0])] * k
        + [one] * (n - k)
    )
    data = ToricData(ExponentConfig(points), alpha)
    deg = degree(data)
    if deg != d ** n:
        raise PaperIdentityError(f"family degree {deg} != {d}^{n}")
    predicted = tuple(log2 * q[i] for i in range(n + 1))
    profile = successive_minima(data)
    if not profile.all_proved:
        raise PaperIdentityError("family minima must all be proved")
    for e, want in zip(profile.entries, predicted):
        if not (e.value - want).is_zero():
            raise PaperIdentityError(f"family minimum {e.index} is {e.value.render()}, expected {want.render()}")
    h = normalized_height(data)
    ratio = h / deg
    theta = (
        log2
        * Fraction((d - 1) ** (k - 1), d ** (k - 1))
        * (k * q[0] + sum(q[k:]) + Fraction(f, d) * (q[0] - q[k]))
    )
    err = ratio - theta
    err_bound = log2 * Fraction((n + 1) * (k - 1), d) * q[0]
    roof_ok = err.sign() >= 0 and (err - err_bound).sign() <= 0
    if not roof_ok:
        raise PaperIdentityError("family roof-integral bracket (VI.14) failed")
    nu_val = log2 * nu
    tgt_bound = log2 * Fraction(2 * n * n, d) * mu[0]
    dev = ratio - nu_val
    target_ok = (dev - tgt_bound).sign() <= 0 and ((-dev) - tgt_bound).sign() <= 0
    if not target_ok:
        raise PaperIdentityError("family height/degree target bound failed")
    z = zhang_check(data)
    return ZhangFamilyReport(
        data, n, d, k, f, ell, q, predicted, profile, theta, h, deg,
        roof_ok, target_ok, z,
    )
