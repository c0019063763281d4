from fractions import Fraction as F
from math import factorial
from random import Random

import pytest

from toricinv.exactnum import LogLinear as LL
from toricinv.polytope import DimensionMismatchError
from toricinv.roof import mixed_integral, roof, sup_convolution

Z = LL.zero()


def rational_roof(rng, n, npts, hi=2, vmax=4, vden=2):
    pts = sorted({tuple(rng.randint(0, hi) for _ in range(n)) for _ in range(npts)})
    lifts = [LL.rational(F(rng.randint(0, vmax), rng.randint(1, vden))) for _ in pts]
    return roof(pts, lifts)


def test_roof_tent():
    f = roof([(0,), (1,), (2,)], [Z, LL.rational(1), Z])
    assert sorted(sorted(c.indices) for c in f.cells) == [[0, 1], [1, 2]]
    assert f.value((0,)) == Z
    assert f.value((1,)) == LL.rational(1)
    assert f.value((2,)) == Z


def test_roof_constant():
    c = LL.rational(7)
    f = roof([(0,), (1,), (2,)], [c, c, c])
    assert len(f.cells) == 1
    assert f.value((F(1, 2),)) == c


def test_roof_log_chord():
    # lift (2 -> log 2): the midpoint (1, 0) sits strictly below the chord
    f = roof([(0,), (1,), (2,)], [Z, Z, LL.log(2)])
    assert len(f.cells) == 1
    assert sorted(f.cells[0].indices) == [0, 2]
    assert f.value((1,)) == LL.log(2) * F(1, 2)


def test_integrate_examples():
    assert roof([(0,), (1,), (2,)], [Z, LL.rational(1), Z]).integral() == LL.rational(1)
    c = LL.rational(3)
    assert roof([(0,), (1,), (2,)], [c, c, c]).integral() == LL.rational(6)
    assert roof([(0,), (1,), (2,)], [Z, Z, LL.log(2)]).integral() == LL.log(2)


def test_roof_reproduces_lifts():
    rng = Random(13)
    for _ in range(20):
        n = rng.choice([1, 2])
        f = rational_roof(rng, n, rng.randint(n + 2, 6))
        for i in range(len(f.points)):
            v = f.value_at_index(i)
            assert (v - f.lifts[i]).sign() >= 0
        for cell in f.cells:
            for i in cell.indices:
                assert (cell.value(f._coords()[i]) - f.lifts[i]).is_zero()


def test_roof_concavity():
    rng = Random(14)
    for _ in range(10):
        f = rational_roof(rng, 2, 6)
        verts = f.base.vertices
        for _ in range(5):
            a, b = rng.choice(verts), rng.choice(verts)
            mid = tuple((x + y) / 2 for x, y in zip(a, b))
            lhs = f.value(mid)
            rhs = (f.value(a) + f.value(b)) * F(1, 2)
            assert (lhs - rhs).sign() >= 0


def test_roof_regularity_certificates():
    rng = Random(15)
    for _ in range(12):
        n = rng.choice([1, 2])
        f = rational_roof(rng, n, rng.randint(n + 2, 6))
        coords = f._coords()
        for cell in f.cells:
            for i in range(len(f.points)):
                slack = cell.value(coords[i]) - f.lifts[i]
                assert slack.sign() >= 0
                assert (i in cell.indices) == slack.is_zero()
            nrm = cell.normal()
            assert nrm is not None  # rational weights always have one
            v, w = nrm
            assert w < 0
            # integer certificate <(a_i, t_i) - (a_P, t_P), (v, w)> >= 0
            p0 = f.points[cell.sample_index]
            t0 = f.lifts[cell.sample_index]
            for i in range(len(f.points)):
                pairing = sum(
                    (a - b) * c for a, b, c in zip(f.points[i], p0, v)
                )
                val = LL.rational(pairing) + (f.lifts[i] - t0) * w
                assert val.sign() >= 0
                assert (i in cell.indices) == val.is_zero()


def test_roof_irrational_gradient_has_no_integer_normal():
    f = roof([(0,), (1,), (2,)], [Z, Z, LL.log(2)])
    assert f.cells[0].normal() is None


def test_sup_convolution_examples():
    z01 = roof([(0,), (1,)], [Z, Z])
    s = sup_convolution(z01, z01)
    assert s.base.vertices == [(0,), (2,)]
    assert s.is_identically_zero()
    f = roof([(0,), (1,)], [Z, LL.rational(1)])  # f(u) = u
    s2 = sup_convolution(f, f)
    assert s2.value((F(3, 2),)) == LL.rational(F(3, 2))
    point = roof([(0,)], [LL.rational(5)])
    s3 = sup_convolution(f, point)
    assert s3.value((1,)) == LL.rational(6)
    with pytest.raises(DimensionMismatchError):
        sup_convolution(f, roof([(0, 0)], [Z]))


def test_sup_convolution_commutes_and_associates():
    rng = Random(16)
    for _ in range(6):
        fs = [rational_roof(rng, 1, 3, hi=2) for _ in range(3)]
        ab = sup_convolution(fs[0], fs[1])
        ba = sup_convolution(fs[1], fs[0])
        abc = sup_convolution(ab, fs[2])
        bca = sup_convolution(sup_convolution(fs[1], fs[2]), fs[0])
        assert ab.base == ba.base and abc.base == bca.base
        probe = sorted({p for p, _ in abc.lifted_vertices()} | {p for p, _ in bca.lifted_vertices()})
        for p in probe:
            assert (abc.value(p) - bca.value(p)).is_zero()
        for p, _ in ab.lifted_vertices():
            assert (ab.value(p) - ba.value(p)).is_zero()
        assert (abc.integral() - bca.integral()).is_zero()


def test_mixed_integral_single():
    p = roof([()], [LL.rational(3)])
    assert mixed_integral([p]) == LL.rational(3)


def test_mixed_integral_diagonal():
    rng = Random(17)
    for n in (1, 2):
        f = rational_roof(rng, n, n + 3)
        assert mixed_integral([f] * (n + 1)) == f.integral() * factorial(n + 1)
    g = roof([(0,), (1,), (2,)], [Z, LL.log(3), LL.log(2)])
    assert mixed_integral([g, g]) == g.integral() * 2


def test_mixed_integral_symmetry():
    rng = Random(18)
    for _ in range(4):
        fs = [rational_roof(rng, 2, 4) for _ in range(3)]
        base = mixed_integral(fs)
        assert base == mixed_integral(fs[::-1])
        assert base == mixed_integral([fs[1], fs[2], fs[0]])


def test_mixed_integral_positive_for_nonnegative_inputs():
    rng = Random(19)
    for _ in range(5):
        fs = [rational_roof(rng, 1, 3) for _ in range(2)]
        assert mixed_integral(fs).sign() >= 0


def test_mixed_integral_wrong_count():
    f = roof([(0,), (1,)], [Z, Z])
    with pytest.raises(DimensionMismatchError):
        mixed_integral([f])
