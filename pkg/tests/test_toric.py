from fractions import Fraction as F
from math import comb, factorial
from random import Random

import pytest

from toricinv.exactnum import AlgScalar, pi_power_compare
from toricinv.lattice import Lattice, covolume_sq, saturate
from toricinv.polytope import Polytope
from toricinv.toric import (
    BinomialIdeal,
    ExponentConfig,
    NotSaturatedError,
    PolytopeMismatchError,
    ToricData,
    compare_embeddings,
    degree,
    from_binomial_ideal,
    ideal_generators,
    minkowski_sandwich,
    multidegree,
    obstruction_indices,
    pluecker,
    reduce_to_full_rank,
)

from helpers import rand_alpha, rand_full_rank_config

Q = AlgScalar.from_rational

QUARTIC_A = ExponentConfig([(0, 0), (1, 0), (2, 1), (1, 2)])
QUARTIC_X = ToricData(QUARTIC_A, [Q(1), Q(1), Q(3), Q(1)])


def test_reduce_examples():
    r = reduce_to_full_rank(ExponentConfig([(0,), (2,), (4,)]))
    assert r.config.points == ((0,), (1,), (2,))
    same = reduce_to_full_rank(QUARTIC_A)
    assert same.config is QUARTIC_A
    r2 = reduce_to_full_rank(ExponentConfig([(0, 0), (2, 2)]))
    assert r2.config.points == ((0,), (1,))


def test_reduce_preserves_kernel_and_degree():
    rng = Random(20)
    for _ in range(15):
        n = rng.choice([1, 2])
        pts = [tuple(2 * rng.randint(0, 3) for _ in range(n)) for _ in range(rng.randint(n + 1, 5))]
        cfg = ExponentConfig(pts)
        red = reduce_to_full_rank(cfg).config
        assert red.kernel_lattice() == cfg.kernel_lattice()
        assert degree(red) == degree(cfg)


def test_degree_examples():
    assert degree(QUARTIC_X) == 4  # shoelace area 2 times 2!
    for n, d in [(1, 5), (2, 3), (3, 2)]:
        pts = (
            [tuple(0 for _ in range(n))]
            + [tuple(d if k == i else 0 for k in range(n)) for i in range(n)]
            + [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        )
        assert degree(ExponentConfig(pts)) == d ** n
    assert degree(ExponentConfig([(7, 7)])) == 1


def test_degree_invariant_under_relabeling():
    rng = Random(21)
    for _ in range(10):
        cfg = rand_full_rank_config(rng, 2, 5, 0, 3)
        pts = list(cfg.points)
        rng.shuffle(pts)
        assert degree(ExponentConfig(pts)) == degree(cfg)


def test_multidegree_examples():
    a0 = ExponentConfig([(0, 0), (1, 0)])
    a1 = ExponentConfig([(0, 0), (0, 1)])
    assert multidegree([a0, a1], (1, 1)) == 1
    assert multidegree([QUARTIC_A], (2,)) == degree(QUARTIC_X)
    assert multidegree([ExponentConfig([(0,), (1,)])], (1,)) == 1
    with pytest.raises(ValueError):
        multidegree([a0, a1], (1, 2))
    with pytest.raises(ValueError):
        multidegree([a0, a0], (1, 1))  # joint lattice not full


def test_ideal_generators_examples():
    g = ideal_generators(QUARTIC_X)[0]
    assert g.plus == (2, 0, 2, 0) and g.minus == (0, 3, 0, 1)
    assert g.coeff == Q(9)
    assert g.render() == "x0^2*x2^2 - 9*x1^3*x3"
    segre = ToricData(ExponentConfig([(0, 0), (1, 0), (0, 1), (1, 1)]), [Q(1)] * 4)
    g2 = ideal_generators(segre)[0]
    assert {g2.plus, g2.minus} == {(1, 0, 0, 1), (0, 1, 1, 0)} and g2.coeff == Q(1)
    point = ToricData(ExponentConfig([(0,), (0,)]), [Q(1), Q(2)])
    g3 = ideal_generators(point)[0]
    assert g3.coeff == Q(F(1, 2)) or g3.coeff == Q(2)


def test_from_binomial_ideal_quartic():
    ideal = BinomialIdeal([(2, -3, 2, -1)], [Q(9)])
    y = from_binomial_ideal(ideal)
    assert y.config.kernel_lattice().basis == ((2, -3, 2, -1),)
    assert degree(y) == 4
    assert y.coeff_power((2, -3, 2, -1)) == Q(9)


def test_from_binomial_ideal_point():
    y = from_binomial_ideal(BinomialIdeal([(1, -1)], [Q(2)]))
    assert y.coeff_power((1, -1)) == Q(2)


def test_from_binomial_ideal_rejects_unsaturated():
    with pytest.raises(NotSaturatedError):
        BinomialIdeal([(2, -2)], [Q(4)])


def test_round_trip_random():
    rng = Random(22)
    done = 0
    while done < 15:
        cfg = rand_full_rank_config(rng, rng.choice([1, 2]), rng.randint(3, 5), 0, 3)
        alpha = rand_alpha(rng, cfg.N + 1)
        x = ToricData(cfg, alpha)
        gamma = cfg.kernel_lattice()
        if gamma.rank == 0:
            continue
        values = [x.coeff_power(b) for b in gamma.basis]
        y = from_binomial_ideal(BinomialIdeal([list(b) for b in gamma.basis], values))
        assert y.config.kernel_lattice() == gamma
        assert degree(y) == degree(x)
        done += 1


def test_obstruction_examples():
    obs = obstruction_indices(QUARTIC_X)
    assert [o for o, _ in obs] == [4]
    assert obs[0][1].degree == 4
    segre = ToricData(ExponentConfig([(0, 0), (1, 0), (0, 1), (1, 1)]), [Q(1)] * 4)
    assert [o for o, _ in obstruction_indices(segre)] == [2]
    point = ToricData(ExponentConfig([(0,), (0,)]), [Q(1)] * 2)
    assert [o for o, _ in obstruction_indices(point)] == [1]


def test_minkowski_sandwich_examples():
    rep = minkowski_sandwich(QUARTIC_X)
    assert rep.degree == 4 and rep.product == 4
    assert rep.lower_ok and rep.sharp_upper_ok and rep.weak_upper_ok and rep.simple_upper_ok
    point = ToricData(ExponentConfig([(0,), (0,)]), [Q(1)] * 2)
    rep2 = minkowski_sandwich(point)
    assert rep2.lower_ok and rep2.sharp_upper_ok and rep2.weak_upper_ok


def test_minkowski_sandwich_random():
    rng = Random(23)
    done = 0
    while done < 10:
        m = rng.randint(3, 6)
        rows = []
        for _ in range(2):
            v = [rng.randint(-4, 4) for _ in range(m - 1)]
            rows.append(v + [-sum(v)])
        lat = saturate(Lattice.from_rows(rows, m))
        if lat.rank != 2:
            continue
        values = [Q(1)] * lat.rank
        x = from_binomial_ideal(BinomialIdeal([list(b) for b in lat.basis], values))
        rep = minkowski_sandwich(x)
        assert rep.lower_ok and rep.sharp_upper_ok and rep.weak_upper_ok and rep.simple_upper_ok
        done += 1


def test_pluecker_examples():
    p1 = pluecker(ExponentConfig([(0,), (1,), (2,)]))
    assert [m for _, m in p1.minors] == [1, 2]
    assert p1.schmidt_height_sq() == 5 and p1.segre_degree() == 3
    p2 = pluecker(ExponentConfig([(0, 0), (1, 0), (0, 1)]))
    assert p2.segre_degree() == 2 and dict(p2.minors)[(1, 2)] == 1
    p3 = pluecker(QUARTIC_A)
    assert sorted(abs(m) for _, m in p3.minors) == [1, 2, 3]
    assert p3.schmidt_height_sq() == 14 and p3.segre_degree() == 12
    assert p3.gcd == 1


def test_pluecker_gcd_primitive_random():
    rng = Random(24)
    for _ in range(20):
        cfg = rand_full_rank_config(rng, rng.choice([1, 2]), rng.randint(3, 6), -2, 3)
        assert pluecker(cfg).gcd == 1


def test_segre_identities_random():
    # n! deg <= segre_degree <= n! C(N, n) deg, and the f_A simplex-sum identity
    rng = Random(25)
    for _ in range(20):
        n = rng.choice([1, 2])
        cfg = rand_full_rank_config(rng, n, rng.randint(n + 2, 6), 0, 3)
        data = pluecker(cfg)
        seg = data.segre_degree()
        deg = degree(cfg)
        assert factorial(n) * deg <= seg <= factorial(n) * comb(cfg.N, n) * deg
        # sum over n-subsets of the normalized simplex volumes = segre/n!
        red = reduce_to_full_rank(cfg).config
        total = 0
        for cols, m in data.minors:
            total += abs(m)
        assert total == seg // factorial(n)
        # and each |minor| is n! times the simplex volume
        from itertools import combinations

        vol_sum = F(0)
        for cols in combinations(range(1, red.N + 1), n):
            pts = [red.points[0]] + [red.points[j] for j in cols]
            poly = Polytope(pts)
            if poly.affine_dim == n:
                vol_sum += poly.volume()
        assert vol_sum * factorial(n) == total


def test_schmidt_equals_projected_covolume():
    # Cauchy-Binet: sum of squared minors = covolume^2 of the projected kernel
    rng = Random(26)
    for _ in range(12):
        cfg = rand_full_rank_config(rng, rng.choice([1, 2]), rng.randint(3, 5), 0, 3)
        gamma = cfg.kernel_lattice()
        if gamma.rank == 0:
            continue
        proj = Lattice.from_rows([b[1:] for b in gamma.basis], cfg.N)
        assert pluecker(cfg).schmidt_height_sq() == covolume_sq(proj)


def test_compare_embeddings_examples():
    rep = compare_embeddings(ExponentConfig([(0,), (2,)]), ExponentConfig([(0,), (1,), (2,)]))
    assert rep.is_projection and rep.projection_degree == 2 and not rep.is_isomorphism
    same = ExponentConfig([(0,), (1,), (2,)])
    rep2 = compare_embeddings(same, same)
    assert rep2.projection_degree == 1 and rep2.is_isomorphism
    with pytest.raises(PolytopeMismatchError):
        compare_embeddings(same, ExponentConfig([(0,), (1,), (2,), (3,)]))


def test_compare_embeddings_face_lattice_obstruction():
    # equal polytopes and equal difference lattices, but a vertex-adjacent
    # face mismatch: A misses the midpoint of an edge that B refines
    a = ExponentConfig([(0, 0), (2, 0), (0, 1), (1, 1)])
    b = ExponentConfig([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)])
    rep = compare_embeddings(a, b)
    assert rep.projection_degree == 1
    assert not rep.is_isomorphism
