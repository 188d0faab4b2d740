"""Truncated p-adic integers, the p-adic metric and the Monna map.

Everything here is exact: digits are Python ints, real values are
:class:`fractions.Fraction` instances, and radius comparisons are done by
integer cross-multiplication.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "PAdicInt",
    "DiscMeasure",
    "PrecisionError",
    "is_prime",
    "to_fraction",
    "padic_from_digits",
    "padic_from_integer",
    "padic_sub",
    "padic_add",
    "valuation",
    "padic_abs",
    "monna",
    "monna_inverse",
    "radius_le",
    "disc_measure",
]


class PrecisionError(ValueError):
    """Raised when the precision m cannot represent what was asked of it."""


@lru_cache(maxsize=256)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _check_prime(p) -> None:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise ValueError(f"p must be a prime integer, got {p!r}")


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions and decimal text to an exact Fraction.

    Binary floats are rejected: their digits are rarely the ones the
    caller meant, and radius comparisons are discontinuous.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact number or decimal text, got {type(value).__name__}")


class PAdicInt:
    """An element of Z_p truncated to ``m`` digits.

    ``digits[i]`` is the coefficient of ``p**i``.  Instances are immutable
    and hashable; two instances are equal only if ``p``, ``m`` and all
    digits agree.
    """

    __slots__ = ("p", "digits", "value")

    def __init__(self, p: int, digits: Iterable[int]):
        digits = tuple(digits)
        _check_prime(p)
        if not digits:
            raise ValueError("a p-adic integer needs at least one digit")
        for i, a in enumerate(digits):
            if not isinstance(a, int) or not 0 <= a < p:
                raise ValueError(f"digit {i} = {a!r} outside [0, {p - 1}]")
        value = 0
        for a in reversed(digits):
            value = value * p + a
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("PAdicInt is immutable")

    @property
    def m(self) -> int:
        return len(self.digits)

    @property
    def modulus(self) -> int:
        return self.p ** len(self.digits)

    def is_zero(self) -> bool:
        return self.value == 0

    def prefix_key(self, k: int) -> int:
        """Integer identifying the first ``k`` digits (the ball of radius p^-k)."""
        return self.value % self.p**k

    def __eq__(self, other):
        if not isinstance(other, PAdicInt):
            return NotImplemented
        return self.p == other.p and self.digits == other.digits

    def __hash__(self):
        return hash((self.p, self.digits))

    def __repr__(self):
        return f"PAdicInt(p={self.p}, m={self.m}, digits={list(self.digits)})"

    def __int__(self):
        return self.value

    def __sub__(self, other):
        if not isinstance(other, PAdicInt):
            return NotImplemented
        return padic_sub(self, other)

    def __add__(self, other):
        if not isinstance(other, PAdicInt):
            return NotImplemented
        return padic_add(self, other)


@dataclass(frozen=True)
class DiscMeasure:
    """Radius class ``k0`` of a disc in Z_p and its Haar measure ``p**-k0``."""

    k0: int
    mu: Fraction


def padic_from_digits(p: int, digits: Iterable[int]) -> PAdicInt:
    return PAdicInt(p, digits)


def padic_from_integer(p: int, n: int, m: int) -> PAdicInt:
    """Embed the integer ``n`` into Z_p at precision ``m`` (reduced mod p^m)."""
    _check_prime(p)
    if m < 1:
        raise ValueError(f"precision must be >= 1, got {m}")
    n %= p**m
    digits = []
    for _ in range(m):
        n, a = divmod(n, p)
        digits.append(a)
    return PAdicInt(p, digits)


def _check_compatible(a: PAdicInt, b: PAdicInt) -> None:
    if a.p != b.p or a.m != b.m:
        raise ValueError(
            f"incompatible p-adic integers: (p={a.p}, m={a.m}) vs (p={b.p}, m={b.m})"
        )


def padic_sub(a: PAdicInt, b: PAdicInt) -> PAdicInt:
    """``(a - b) mod p^m`` by schoolbook subtraction with borrow."""
    _check_compatible(a, b)
    p = a.p
    out = []
    borrow = 0
    for x, y in zip(a.digits, b.digits):
        d = x - y - borrow
        if d < 0:
            d += p
            borrow = 1
        else:
            borrow = 0
        out.append(d)
    # a final borrow wraps around mod p^m
    return PAdicInt(p, out)


def padic_add(a: PAdicInt, b: PAdicInt) -> PAdicInt:
    _check_compatible(a, b)
    p = a.p
    out = []
    carry = 0
    for x, y in zip(a.digits, b.digits):
        carry, d = divmod(x + y + carry, p)
        out.append(d)
    return PAdicInt(p, out)


def valuation(a: PAdicInt) -> int:
    """Index of the first nonzero digit; ``m`` for the zero element."""
    for i, d in enumerate(a.digits):
        if d:
            return i
    return a.m


def padic_abs(a: PAdicInt) -> Fraction:
    """``p**-valuation(a)``.

    For the zero element this is ``p**-m``, which is only an upper bound on
    the true absolute value of whatever the truncation came from; check
    ``a.is_zero()`` when that distinction matters.
    """
    return Fraction(1, a.p ** valuation(a))


def monna(a: PAdicInt) -> Fraction:
    """Reflect the digits about the radix point: sum of a_i p^(-i-1)."""
    v = 0
    for d in a.digits:
        v = v * a.p + d
    return Fraction(v, a.modulus)


def monna_inverse(x, p: int, m: int) -> PAdicInt:
    """Preimage of a real number in [0, 1) under the Monna map.

    ``x`` is either an exact rational (int, Fraction or decimal text) or an
    iterable of base-p fractional digits, most significant first.  Rationals
    use the greedy expansion, so a terminating expansion never turns into a
    tail of ``p - 1`` digits.  The i-th fractional digit becomes the
    coefficient of ``p**i``; only the first ``m`` digits are kept.
    """
    _check_prime(p)
    if m < 1:
        raise ValueError(f"precision must be >= 1, got {m}")
    if isinstance(x, float):
        raise TypeError("monna_inverse needs an exact value, not a binary float")
    if isinstance(x, (int, Rational, str)) and not isinstance(x, bool):
        q = to_fraction(x)
        if not 0 <= q < 1:
            raise ValueError(f"x must lie in [0, 1), got {q}")
        # floor(q * p^m) holds the first m digits, most significant first
        top = q.numerator * p**m // q.denominator
        digits = []
        for _ in range(m):
            top, d = divmod(top, p)
            digits.append(d)
        digits.reverse()
        return PAdicInt(p, digits)
    digits = []
    for d in x:
        if len(digits) == m:
            break
        digits.append(d)
    if len(digits) < m:
        digits.extend([0] * (m - len(digits)))
    return PAdicInt(p, digits)


def _alpha_parts(alpha) -> tuple[int, int]:
    alpha = to_fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha.numerator, alpha.denominator


def radius_le(r, s, N: int, alpha) -> bool:
    """Exact test of ``r <= s / N**alpha`` for r >= 0 and rational alpha.

    With alpha = a/b both sides are raised to the power b, so the
    comparison becomes ``r^b * N^a <= s^b`` in integers.
    """
    r = to_fraction(r)
    s = to_fraction(s)
    a, b = _alpha_parts(alpha)
    if r < 0 or s < 0:
        raise ValueError("radii must be non-negative")
    lhs = r.numerator**b * N**a * s.denominator**b
    rhs = s.numerator**b * r.denominator**b
    return lhs <= rhs


def disc_measure(p: int, s, N: int, alpha=1) -> DiscMeasure:
    """Radius class and Haar measure of the disc of radius ``s / N**alpha``.

    ``k0`` is the smallest k >= 0 with ``p**-k <= s / N**alpha``; radii of
    at least 1 cover all of Z_p and give ``k0 = 0``, ``mu = 1``.
    """
    _check_prime(p)
    s = to_fraction(s)
    if s <= 0:
        raise ValueError(f"s must be positive, got {s}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    a, b = _alpha_parts(alpha)
    # p^-k <= s/N^alpha  <=>  N^a * den^b <= num^b * p^(k*b)
    lhs = N**a * s.denominator**b
    num_b = s.numerator**b
    pb = p**b
    k = 0
    rhs = num_b
    while rhs < lhs:
        k += 1
        rhs *= pb
    return DiscMeasure(k, Fraction(1, p**k))
