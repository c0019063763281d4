from fractions import Fraction as F
from random import Random

import pytest

from toricinv.exactnum import (
    UNIT,
    AlgScalar,
    CharacterNotRepresentable,
    LogLinear,
    PrecisionCapExceeded,
    get_precision_cap,
    ll_combine,
    ll_sign,
    parse_loglinear,
    scalar_log,
    scalar_valuation,
    set_precision_cap,
)


def test_ll_combine_additivity():
    out = ll_combine([(1, LogLinear.log(2)), (1, LogLinear.log(3))])
    assert out == LogLinear({2: 1, 3: 1})


def test_ll_combine_log4_equals_twice_log2():
    assert LogLinear.log_of_rational(4) == ll_combine([(2, LogLinear.log(2))])


def test_ll_combine_log_four_thirds():
    # hand factorization: 2*log2 - log3 = log(4/3)
    out = ll_combine([(1, LogLinear.log(2, 2)), (-1, LogLinear.log(3))])
    assert out == LogLinear({2: 2, 3: -1})
    assert out == LogLinear.log_of_rational(F(4, 3))


def test_ll_sign_examples():
    assert ll_sign(LogLinear.zero()) == 0
    assert ll_sign(LogLinear({2: 2, 3: -1})) == 1   # log(4/3) > 0
    assert ll_sign(LogLinear({2: 1, 3: -1})) == -1  # log(2/3) < 0


def test_ll_sign_zero_iff_empty():
    assert LogLinear({2: F(1, 3), 3: F(-1, 3)}).sign() != 0
    assert LogLinear({UNIT: 0, 2: 0}).is_zero()


def test_ll_sign_antisymmetric():
    rng = Random(1)
    primes = [2, 3, 5, 7, 11]
    for _ in range(50):
        coeffs = {p: F(rng.randint(-5, 5), rng.randint(1, 4)) for p in rng.sample(primes, 3)}
        coeffs[UNIT] = F(rng.randint(-3, 3), rng.randint(1, 3))
        x = LogLinear(coeffs)
        assert (-x).sign() == -x.sign()


def test_ll_sign_close_call():
    # 2^13 = 8192 vs 3^8 = 6561 against e^7 ~ 1096: mixed signs, tight-ish
    x = LogLinear({2: 13, 3: -8})
    assert x.sign() == 1
    y = LogLinear({2: 485, 3: -306})  # 485 log2 - 306 log3 ~ 0.0595
    assert y.sign() == 1


def test_precision_cap_configuration():
    old = get_precision_cap()
    try:
        set_precision_cap(128)
        assert get_precision_cap() == 128
        with pytest.raises(ValueError):
            set_precision_cap(4)
    finally:
        set_precision_cap(old)


def test_scalar_log_examples():
    assert scalar_log(AlgScalar.from_rational(12)) == LogLinear({2: 2, 3: 1})
    assert scalar_valuation(AlgScalar.from_rational(12), 2) == 2
    assert scalar_log(AlgScalar.from_rational(-1)) == LogLinear.zero()
    assert scalar_log(AlgScalar.parse("2^(3/2)")) == LogLinear({2: F(3, 2)})


def test_scalar_log_multiplicative():
    rng = Random(2)
    for _ in range(40):
        a = AlgScalar.from_rational(F(rng.randint(1, 50), rng.randint(1, 50)))
        b = AlgScalar.parse(f"{rng.randint(1,9)} * 2^({rng.randint(-3,3)}/2)")
        assert scalar_log(a * b) == scalar_log(a) + scalar_log(b)


def test_product_formula():
    # log|a| - sum_p v_p(a) log p = 0
    rng = Random(3)
    for _ in range(40):
        a = AlgScalar.from_rational(F(rng.randint(1, 60), rng.randint(1, 60)))
        total = scalar_log(a)
        for p, _ in a.exponents():
            total = total - LogLinear.log(p, scalar_valuation(a, p))
        assert total.is_zero()


def test_alg_scalar_pow_and_roots():
    two = AlgScalar.from_rational(2)
    assert (two ** F(3, 2)) == AlgScalar.prime_power(2, F(3, 2))
    minus = AlgScalar.from_rational(-8)
    assert (minus ** F(1, 3)) == AlgScalar.from_rational(-2)
    with pytest.raises(CharacterNotRepresentable):
        minus ** F(1, 2)


def test_alg_scalar_parse_render_round_trip():
    cases = ["2", "-3/4", "1/2 * 2^(1/2)", "-1 * 3^(-2/5) * 7^(1/2)", "2^(3/2)"]
    for text in cases:
        a = AlgScalar.parse(text)
        assert AlgScalar.parse(a.render()) == a


def test_alg_scalar_parse_rejects():
    for bad in ["", "0", "2^^3", "x", "1/0"]:
        with pytest.raises((ValueError, ZeroDivisionError)):
            AlgScalar.parse(bad)


def test_loglinear_parse_and_render_round_trip():
    cases = ["2*log(2) - log(3)", "1/4", "3/2*log(2) + 1/2", "0", "log(7) - 2"]
    for text in cases:
        x = parse_loglinear(text)
        assert parse_loglinear(x.render()) == x


def test_loglinear_render_canonical():
    assert LogLinear({2: 2, 3: -1}).render() == "2*log(2) - log(3)"
    assert LogLinear({UNIT: F(1, 4), 2: F(3, 2)}).render() == "1/4 + 3/2*log(2)"
    assert LogLinear.zero().render() == "0"


def test_decimal_approx_carries_bound():
    val, bound = LogLinear({2: 2, 3: -1}).approx(10)
    # log(4/3) = 0.287682072...
    assert val.startswith("0.287682")
    assert float(bound) <= 1e-10


def test_loglinear_comparison_operators():
    assert LogLinear.log(3) > LogLinear.log(2)
    assert LogLinear.rational(1) > LogLinear.zero()
    # 1 < log(3) < log(e^2) i.e. rational unit mixes with logs
    assert LogLinear.rational(1) < LogLinear.log(3)
    assert LogLinear.log(2) < LogLinear.rational(1)
