"""Exact scalar arithmetic: rationals, radical rationals and log-linear numbers.

All weight, Chow-weight and height computations in this package take values in
the Q-vector space spanned by 1 and the logarithms of the prime numbers.  A
``LogLinear`` keeps such a value as a sparse coefficient map, so equality is
decided by map identity and strict order by certified interval evaluation at
escalating precision.  An ``AlgScalar`` is a nonzero "radical rational"
``sign * prod p**e_p`` with rational exponents; it is the coefficient model
standing in for elements of kummerian number fields.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Iterable, List, Mapping, Tuple, Union

import mpmath

Rational = Fraction
RationalLike = Union[int, Fraction]

#: Basis key for the rational part of a LogLinear.  The key ``p`` (a prime)
#: stands for log(p); the key 1 (= p**0) stands for the rational unit 1.
UNIT = 1

_DEFAULT_PRECISION_CAP = 10_000
_precision_cap = _DEFAULT_PRECISION_CAP


class PrecisionCapExceeded(ArithmeticError):
    """Interval evaluation hit the precision cap without separating from 0."""


class CharacterNotRepresentable(ValueError):
    """The requested operation needs a root of unity other than +-1."""


def set_precision_cap(bits: int) -> None:
    """Set the hard cap (in bits) for certified sign evaluation."""
    global _precision_cap
    if bits < 8:
        raise ValueError("precision cap must be at least 8 bits")
    _precision_cap = int(bits)


def get_precision_cap() -> int:
    return _precision_cap


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def next_prime(m: int) -> int:
    """Smallest prime >= m."""
    c = max(2, m)
    while not is_prime(c):
        c += 1
    return c


def factorint(m: int) -> Dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if m <= 0:
        raise ValueError("can only factor positive integers")
    out: Dict[int, int] = {}
    for p in (2, 3):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    f = 5
    while f * f <= m:
        for p in (f, f + 2):
            while m % p == 0:
                out[p] = out.get(p, 0) + 1
                m //= p
        f += 6
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


# ---------------------------------------------------------------------------
# interval machinery shared by LogLinear.sign and the decimal renderer
# ---------------------------------------------------------------------------

_log_cache: Dict[Tuple[int, int], object] = {}


def _iv_log(p: int, prec: int):
    key = (p, prec)
    val = _log_cache.get(key)
    if val is None:
        val = mpmath.iv.log(mpmath.iv.mpf(p))
        _log_cache[key] = val
    return val


def _iv_value(coeffs: Mapping[int, Fraction], prec: int):
    """Certified enclosure of sum(c_k * log k) (log 1 read as 1)."""
    old = mpmath.iv.prec
    mpmath.iv.prec = prec
    try:
        total = mpmath.iv.mpf(0)
        for k, c in coeffs.items():
            term = mpmath.iv.mpf(c.numerator) / mpmath.iv.mpf(c.denominator)
            if k != UNIT:
                term = term * _iv_log(k, prec)
            total = total + term
        return total
    finally:
        mpmath.iv.prec = old


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


class LogLinear:
    """An exact number q + sum_p c_p*log(p) with rational q and c_p.

    The coefficient map never stores zeros; since 1 and the log(p) are
    linearly independent over Q, the map is empty exactly when the value is 0.
    Instances are immutable and hashable.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, RationalLike] = ()):
        c: Dict[int, Fraction] = {}
        for k, v in dict(coeffs).items():
            if not (k == UNIT or is_prime(k)):
                raise ValueError(f"LogLinear key must be 1 or a prime, got {k}")
            fv = _as_fraction(v)
            if fv:
                c[k] = fv
        object.__setattr__(self, "_c", c)

    def __setattr__(self, *a):  # pragma: no cover - safety net
        raise AttributeError("LogLinear is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "LogLinear":
        return LogLinear()

    @staticmethod
    def rational(q: RationalLike) -> "LogLinear":
        return LogLinear({UNIT: _as_fraction(q)})

    @staticmethod
    def log(p: int, coeff: RationalLike = 1) -> "LogLinear":
        """coeff * log(p) for a prime p."""
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return LogLinear({p: coeff})

    @staticmethod
    def log_of_rational(q: RationalLike) -> "LogLinear":
        """log(q) of a positive rational, expanded over prime logarithms."""
        q = _as_fraction(q)
        if q <= 0:
            raise ValueError("log of a non-positive rational")
        c: Dict[int, Fraction] = {}
        for p, e in factorint(q.numerator).items():
            c[p] = c.get(p, Fraction(0)) + e
        for p, e in factorint(q.denominator).items():
            c[p] = c.get(p, Fraction(0)) - e
        return LogLinear(c)

    # -- inspection --------------------------------------------------------

    def items(self) -> List[Tuple[int, Fraction]]:
        return sorted(self._c.items())

    def coeff(self, key: int) -> Fraction:
        return self._c.get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def is_rational(self) -> bool:
        return all(k == UNIT for k in self._c)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._c.get(UNIT, Fraction(0))

    # -- ring-ish operations ------------------------------------------------

    def _merge(self, other: "LogLinear", s: int) -> "LogLinear":
        c = dict(self._c)
        for k, v in other._c.items():
            w = c.get(k, Fraction(0)) + s * v
            if w:
                c[k] = w
            else:
                c.pop(k, None)
        out = LogLinear.__new__(LogLinear)
        object.__setattr__(out, "_c", c)
        return out

    def __add__(self, other):
        if isinstance(other, LogLinear):
            return self._merge(other, 1)
        if isinstance(other, (int, Fraction)):
            return self._merge(LogLinear.rational(other), 1)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, LogLinear):
            return self._merge(other, -1)
        if isinstance(other, (int, Fraction)):
            return self._merge(LogLinear.rational(other), -1)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        out = LogLinear.__new__(LogLinear)
        object.__setattr__(out, "_c", {k: -v for k, v in self._c.items()})
        return out

    def _scale(self, q: Fraction) -> "LogLinear":
        if not q:
            return LogLinear()
        out = LogLinear.__new__(LogLinear)
        object.__setattr__(out, "_c", {k: v * q for k, v in self._c.items()})
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scale(_as_fraction(other))
        if isinstance(other, LogLinear):
            # products of logarithms do not stay log-linear; only a purely
            # rational factor is admissible
            if other.is_rational():
                return self._scale(other.rational_value())
            if self.is_rational():
                return other._scale(self.rational_value())
            raise TypeError("cannot multiply two non-rational LogLinear values")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
        elif isinstance(other, LogLinear) and other.is_rational():
            q = other.rational_value()
        else:
            return NotImplemented
        if not q:
            raise ZeroDivisionError("division of LogLinear by zero")
        return self._scale(Fraction(1) / q)

    # -- order --------------------------------------------------------------

    def sign(self) -> int:
        """Certified sign in {-1, 0, +1}.

        Zero is a pure map test.  Otherwise the basis values 1 and log(p) are
        all positive, so uniform coefficient signs decide immediately; mixed
        signs fall back to interval evaluation with doubling precision up to
        the configured cap.
        """
        if not self._c:
            return 0
        has_pos = any(v > 0 for v in self._c.values())
        has_neg = any(v < 0 for v in self._c.values())
        if not has_neg:
            return 1
        if not has_pos:
            return -1
        prec = 64
        while prec <= _precision_cap:
            enc = _iv_value(self._c, prec)
            if enc > 0:
                return 1
            if enc < 0:
                return -1
            prec *= 2
        raise PrecisionCapExceeded(
            f"sign of {self} undecided at {_precision_cap} bits"
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LogLinear.rational(other)
        if not isinstance(other, LogLinear):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(self.items()))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return bool(self._c)

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        """Canonical sorted rendering, e.g. ``1/4 + 2*log(2) - log(3)``."""
        if not self._c:
            return "0"
        parts = []
        for k, v in self.items():
            mag = abs(v)
            if k == UNIT:
                body = str(mag)
            elif mag == 1:
                body = f"log({k})"
            else:
                body = f"{mag}*log({k})"
            parts.append(("-" if v < 0 else "+", body))
        sign0, body0 = parts[0]
        text = ("-" if sign0 == "-" else "") + body0
        for s, body in parts[1:]:
            text += f" {s} {body}"
        return text

    def approx(self, digits: int = 12) -> Tuple[str, str]:
        """Decimal approximation with an explicit error bound.

        Returns ``(value, bound)`` where the true value lies within bound of
        the printed value; the bound is at most 10**-digits.
        """
        if not self._c:
            return ("0." + "0" * digits, "0")
        target = mpmath.mpf(10) ** (-digits)
        prec = max(64, 4 * digits)
        while True:
            enc = _iv_value(self._c, prec)
            lo, hi = enc._mpi_
            lo = mpmath.mpf(lo)
            hi = mpmath.mpf(hi)
            if hi - lo <= target:
                mid = (lo + hi) / 2
                return (
                    mpmath.nstr(mid, digits + 2, strip_zeros=False),
                    mpmath.nstr((hi - lo) / 2 + mpmath.mpf(10) ** (-digits - 6), 3),
                )
            prec *= 2
            if prec > 16 * _precision_cap:  # decimal rendering is not sign-critical
                raise PrecisionCapExceeded("decimal rendering exceeded precision cap")

    def __repr__(self):
        return f"LogLinear({self.render()})"


def ll_combine(terms: Iterable[Tuple[RationalLike, LogLinear]]) -> LogLinear:
    """Exact linear combination sum(c * x) of LogLinear values."""
    acc = LogLinear.zero()
    for c, x in terms:
        acc = acc + x * _as_fraction(c)
    return acc


def ll_sign(x: LogLinear) -> int:
    return x.sign()


def ll_max(values: Iterable[LogLinear]) -> LogLinear:
    vals = list(values)
    if not vals:
        raise ValueError("max of empty collection")
    best = vals[0]
    for v in vals[1:]:
        if (v - best).sign() > 0:
            best = v
    return best


def ll_min(values: Iterable[LogLinear]) -> LogLinear:
    vals = list(values)
    if not vals:
        raise ValueError("min of empty collection")
    best = vals[0]
    for v in vals[1:]:
        if (v - best).sign() < 0:
            best = v
    return best


# ---------------------------------------------------------------------------
# radical rationals
# ---------------------------------------------------------------------------

_FACTOR_RE = re.compile(r"^(\d+)\^\(?(-?\d+(?:/\d+)?)\)?$")
_RATIONAL_RE = re.compile(r"^-?\d+(?:/\d+)?$")


class AlgScalar:
    """A nonzero radical rational sign * prod p**e_p with rational e_p.

    Roots of unity other than +-1 are not representable: raising a negative
    scalar to an exponent with even reduced denominator raises
    CharacterNotRepresentable instead of silently approximating.
    """

    __slots__ = ("sign", "_e")

    def __init__(self, sign: int = 1, exponents: Mapping[int, RationalLike] = ()):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        e: Dict[int, Fraction] = {}
        for p, v in dict(exponents).items():
            if not is_prime(p):
                raise ValueError(f"exponent key {p} is not prime")
            fv = _as_fraction(v)
            if fv:
                e[p] = fv
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "_e", e)

    def __setattr__(self, *a):  # pragma: no cover - safety net
        raise AttributeError("AlgScalar is immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def one() -> "AlgScalar":
        return AlgScalar(1, {})

    @staticmethod
    def from_rational(q: RationalLike) -> "AlgScalar":
        q = _as_fraction(q)
        if q == 0:
            raise ValueError("AlgScalar must be nonzero")
        sign = 1 if q > 0 else -1
        e: Dict[int, Fraction] = {}
        for p, k in factorint(abs(q.numerator)).items():
            e[p] = e.get(p, Fraction(0)) + k
        for p, k in factorint(q.denominator).items():
            e[p] = e.get(p, Fraction(0)) - k
        return AlgScalar(sign, e)

    @staticmethod
    def prime_power(p: int, e: RationalLike) -> "AlgScalar":
        return AlgScalar(1, {p: e})

    @staticmethod
    def parse(text: str) -> "AlgScalar":
        """Parse ``+-a/b`` optionally followed by ``* p^(c/d)`` factors."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty scalar literal")
        acc = AlgScalar.one()
        if s[0] in "+-":
            if s[0] == "-":
                acc = acc * AlgScalar.from_rational(-1)
            s = s[1:]
        if not s:
            raise ValueError(f"malformed scalar literal {text!r}")
        for tok in s.split("*"):
            if not tok:
                raise ValueError(f"malformed scalar literal {text!r}")
            m = _FACTOR_RE.match(tok)
            if m:
                base = int(m.group(1))
                if base < 2:
                    raise ValueError(f"power base must be >= 2 in {text!r}")
                exp = Fraction(m.group(2))
                fac = AlgScalar.one()
                for p, k in factorint(base).items():
                    fac = fac * AlgScalar.prime_power(p, exp * k)
                acc = acc * fac
            elif _RATIONAL_RE.match(tok):
                acc = acc * AlgScalar.from_rational(Fraction(tok))
            else:
                raise ValueError(f"malformed scalar factor {tok!r} in {text!r}")
        return acc

    # -- inspection -----------------------------------------------------------

    def exponents(self) -> List[Tuple[int, Fraction]]:
        return sorted(self._e.items())

    def valuation(self, p: int) -> Fraction:
        """The exponent e_p (a rational p-adic valuation)."""
        return self._e.get(p, Fraction(0))

    def is_one(self) -> bool:
        return self.sign == 1 and not self._e

    def is_rational(self) -> bool:
        return all(v.denominator == 1 for v in self._e.values())

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        q = Fraction(self.sign)
        for p, v in self._e.items():
            q *= Fraction(p) ** int(v)
        return q

    def abs_log(self) -> LogLinear:
        """log|self| = sum e_p log p, the archimedean logarithm."""
        return LogLinear(dict(self._e))

    # -- group operations ------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgScalar.from_rational(other)
        if not isinstance(other, AlgScalar):
            return NotImplemented
        e = dict(self._e)
        for p, v in other._e.items():
            w = e.get(p, Fraction(0)) + v
            if w:
                e[p] = w
            else:
                e.pop(p, None)
        return AlgScalar(self.sign * other.sign, e)

    __rmul__ = __mul__

    def inverse(self) -> "AlgScalar":
        return AlgScalar(self.sign, {p: -v for p, v in self._e.items()})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgScalar.from_rational(other)
        if not isinstance(other, AlgScalar):
            return NotImplemented
        return self * other.inverse()

    def __neg__(self):
        return AlgScalar(-self.sign, dict(self._e))

    def __pow__(self, r: RationalLike) -> "AlgScalar":
        r = _as_fraction(r)
        if self.sign == -1:
            if r.denominator % 2 == 0:
                raise CharacterNotRepresentable(
                    f"({self.render()})**{r} needs a root of unity"
                )
            sign = -1 if r.numerator % 2 else 1
        else:
            sign = 1
        return AlgScalar(sign, {p: v * r for p, v in self._e.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            try:
                other = AlgScalar.from_rational(other)
            except ValueError:
                return False
        if not isinstance(other, AlgScalar):
            return NotImplemented
        return self.sign == other.sign and self._e == other._e

    def __hash__(self):
        return hash((self.sign, tuple(self.exponents())))

    # -- rendering ---------------------------------------------------------------

    def render(self) -> str:
        q = Fraction(self.sign)
        radicals = []
        for p, v in self.exponents():
            if v.denominator == 1:
                q *= Fraction(p) ** int(v)
            else:
                radicals.append(f"{p}^({v})")
        parts: List[str] = []
        if q != 1 or not radicals:
            parts.append(str(q))
        elif q == -1:
            parts.append("-1")
        parts.extend(radicals)
        return " * ".join(parts)

    def __repr__(self):
        return f"AlgScalar({self.render()})"


def scalar_log(alpha: AlgScalar) -> LogLinear:
    """Archimedean log|alpha| as an exact LogLinear."""
    return alpha.abs_log()


def scalar_valuation(alpha: AlgScalar, p: int) -> Fraction:
    """The exponent of the prime p in alpha."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return alpha.valuation(p)


# ---------------------------------------------------------------------------
# LogLinear parsing (weight-vector entries on the CLI)
# ---------------------------------------------------------------------------

_LOG_TERM_RE = re.compile(r"^(?:(\d+(?:/\d+)?)\*)?log\((\d+)\)$")


def parse_loglinear(text: str) -> LogLinear:
    """Parse ``c*log(p)`` sums with optional bare rational terms.

    Examples: ``"2*log(2) - log(3)"``, ``"3/4"``, ``"1/2 + 1/2*log(5)"``.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty LogLinear literal")
    # split into signed terms
    terms: List[Tuple[int, str]] = []
    sign = 1
    i = 0
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    start = i
    depth = 0
    while i <= len(s):
        if i == len(s) or (s[i] in "+-" and depth == 0):
            if start == i:
                raise ValueError(f"malformed LogLinear literal {text!r}")
            terms.append((sign, s[start:i]))
            if i < len(s):
                sign = -1 if s[i] == "-" else 1
                start = i + 1
        elif s[i] == "(":
            depth += 1
        elif s[i] == ")":
            depth -= 1
        i += 1
    acc = LogLinear.zero()
    for sg, term in terms:
        m = _LOG_TERM_RE.match(term)
        if m:
            coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
            base = int(m.group(2))
            acc = acc + LogLinear.log_of_rational(base) * (sg * coeff)
        elif _RATIONAL_RE.match(term):
            acc = acc + LogLinear.rational(sg * Fraction(term))
        else:
            raise ValueError(f"malformed LogLinear term {term!r} in {text!r}")
    return acc


def pi_power_compare(lhs: Fraction, rhs: Fraction, pi_exponent: int) -> int:
    """Certified sign of lhs - rhs * pi**pi_exponent for rational lhs, rhs.

    Used for the Minkowski-sandwich constants, where bounds involve integer
    powers of pi.  Equality is only possible when pi_exponent == 0 or rhs == 0.
    """
    if rhs == 0:
        return (lhs > 0) - (lhs < 0)
    if pi_exponent == 0:
        d = lhs - rhs
        return (d > 0) - (d < 0)
    prec = 64
    while prec <= _precision_cap:
        old = mpmath.iv.prec
        mpmath.iv.prec = prec
        try:
            piv = mpmath.iv.pi ** pi_exponent
            l = mpmath.iv.mpf(lhs.numerator) / mpmath.iv.mpf(lhs.denominator)
            r = mpmath.iv.mpf(rhs.numerator) / mpmath.iv.mpf(rhs.denominator)
            d = l - r * piv
        finally:
            mpmath.iv.prec = old
        if d > 0:
            return 1
        if d < 0:
            return -1
        prec *= 2
    raise PrecisionCapExceeded("pi comparison undecided at the precision cap")
