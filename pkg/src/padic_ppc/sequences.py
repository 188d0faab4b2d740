"""Generators for the sequences under study, and a plain-text file format.

The sequence file format is::

    # padic p=3 m=5
    1,0,0,0,0
    2,0,0,0,0
    ...

one element per line, digits least significant first.
"""

from __future__ import annotations

import os
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .padic import (
    PAdicInt,
    PrecisionError,
    _check_prime,
    monna,
    monna_inverse,
    padic_from_integer,
)

__all__ = [
    "SequenceSpec",
    "SEQUENCE_KINDS",
    "is_square",
    "non_squares",
    "sqrt_frac_digits",
    "gen_sqrt_sequence",
    "gen_vdc",
    "gen_naturals",
    "gen_uniform_random",
    "build_sequence",
    "write_sequence",
    "read_sequence",
]

SEQUENCE_KINDS = ("sqrt-frac", "vdc", "naturals", "uniform-random", "file")

_HEADER = re.compile(r"^#\s*padic\s+p=(\d+)\s+m=(\d+)\s*$")


@dataclass(frozen=True)
class SequenceSpec:
    """Declarative description of a sequence to generate or load."""

    kind: str
    p: int = 3
    m: int = 32
    count: int = 1
    seed: int | None = None
    path: str | None = None

    def __post_init__(self):
        if self.kind not in SEQUENCE_KINDS:
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if (self.seed is not None) != (self.kind == "uniform-random"):
            raise ValueError("seed is required for, and only for, uniform-random")
        if self.kind == "file" and not self.path:
            raise ValueError("file sequences need a path")


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def non_squares(start: int = 2):
    """Yield the integers >= start that are not perfect squares."""
    n = start
    while True:
        if not is_square(n):
            yield n
        n += 1


def sqrt_frac_digits(n: int, p: int, m: int) -> list[int]:
    """First ``m`` base-p digits of the fractional part of sqrt(n).

    Digit i is ``isqrt(n * p**(2*(i+1))) mod p``; all of them are read off a
    single integer square root at scale ``p**m``.
    """
    _check_prime(p)
    if is_square(n):
        raise ValueError(f"{n} is a perfect square; sqrt({n}) has no fractional digits")
    if n < 0:
        raise ValueError("n must be non-negative")
    scaled = isqrt(n * p ** (2 * m))  # floor(sqrt(n) * p^m)
    digits = []
    for _ in range(m):
        scaled, d = divmod(scaled, p)
        digits.append(d)
    digits.reverse()
    return digits


def _check_distinct(xs: list[PAdicInt], labels: list[int]) -> None:
    seen: dict[int, int] = {}
    for i, x in enumerate(xs):
        j = seen.setdefault(x.value, i)
        if j != i:
            raise PrecisionError(
                f"precision m={x.m} merges elements {j} and {i} "
                f"(n={labels[j]} and n={labels[i]}); increase m"
            )


def gen_sqrt_sequence(N: int, p: int, m: int) -> list[PAdicInt]:
    """Monna preimages of {sqrt(n)} over the first N non-squares n >= 2."""
    if N < 1:
        raise ValueError("N must be >= 1")
    ns = []
    xs = []
    for n in non_squares(2):
        if len(ns) == N:
            break
        ns.append(n)
        xs.append(monna_inverse(sqrt_frac_digits(n, p, m), p, m))
    _check_distinct(xs, ns)
    return xs


def gen_vdc(N: int, p: int) -> list[Fraction]:
    """The van der Corput sequence in base p: radical inverses of 1..N."""
    _check_prime(p)
    if N < 1:
        raise ValueError("N must be >= 1")
    out = []
    for n in range(1, N + 1):
        width = 1
        while p**width <= n:
            width += 1
        out.append(monna(padic_from_integer(p, n, width)))
    return out


def gen_naturals(N: int, p: int, m: int) -> list[PAdicInt]:
    if N < 1:
        raise ValueError("N must be >= 1")
    return [padic_from_integer(p, n, m) for n in range(1, N + 1)]


def gen_uniform_random(N: int, p: int, m: int, seed: int) -> list[PAdicInt]:
    """N elements with i.i.d. uniform digits from a seeded Mersenne Twister."""
    _check_prime(p)
    if N < 1:
        raise ValueError("N must be >= 1")
    rng = random.Random(seed)
    return [PAdicInt(p, [rng.randrange(p) for _ in range(m)]) for _ in range(N)]


def build_sequence(spec: SequenceSpec) -> list[PAdicInt]:
    """Materialise a SequenceSpec as p-adic integers.

    For ``vdc`` the p-adic side is the Monna preimage of the van der Corput
    points, which is the naturals.
    """
    if spec.kind == "sqrt-frac":
        return gen_sqrt_sequence(spec.count, spec.p, spec.m)
    if spec.kind in ("naturals", "vdc"):
        return gen_naturals(spec.count, spec.p, spec.m)
    if spec.kind == "uniform-random":
        return gen_uniform_random(spec.count, spec.p, spec.m, spec.seed)
    xs = read_sequence(spec.path)
    if len(xs) < spec.count:
        raise ValueError(f"{spec.path} holds {len(xs)} elements, {spec.count} requested")
    return xs[: spec.count]


def write_sequence(xs, path, p: int | None = None, m: int | None = None) -> None:
    """Write p-adic integers to ``path``; ``p``/``m`` are needed only for an empty list."""
    xs = list(xs)
    if xs:
        p = xs[0].p if p is None else p
        m = xs[0].m if m is None else m
        for i, x in enumerate(xs):
            if x.p != p or x.m != m:
                raise ValueError(f"element {i} has (p={x.p}, m={x.m}), expected (p={p}, m={m})")
    elif p is None or m is None:
        raise ValueError("p and m are required to write an empty sequence")
    _check_prime(p)
    lines = [f"# padic p={p} m={m}\n"]
    lines.extend(",".join(map(str, x.digits)) + "\n" for x in xs)
    with open(os.fspath(path), "w", encoding="ascii", newline="\n") as fh:
        fh.writelines(lines)


def read_sequence(path) -> list[PAdicInt]:
    with open(os.fspath(path), encoding="ascii") as fh:
        header = fh.readline()
        match = _HEADER.match(header.rstrip("\r\n"))
        if not match:
            raise ValueError(f"{path}: malformed header {header!r}")
        p, m = int(match.group(1)), int(match.group(2))
        _check_prime(p)
        if m < 1:
            raise ValueError(f"{path}: precision must be >= 1")
        xs = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                digits = [int(tok) for tok in line.split(",")]
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer digit") from None
            if len(digits) != m:
                raise ValueError(f"{path}:{lineno}: expected {m} digits, got {len(digits)}")
            try:
                xs.append(PAdicInt(p, digits))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return xs
