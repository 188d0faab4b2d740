"""Real and p-adic pair-correlation statistics.

Counts are exact integers over ordered pairs (i, j), i != j.  Only the
final division producing ``F`` is rounded to a float.

The p-adic counter relies on the ultrametric structure of Z_p: the ball of
radius p^-k around x is the set of elements sharing its first k digits, so
counting close pairs is a matter of grouping by k-digit prefix.
"""

from __future__ import annotations

import csv
import io
from collections import Counter, defaultdict
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .padic import (
    PAdicInt,
    PrecisionError,
    _alpha_parts,
    disc_measure,
    radius_le,
    to_fraction,
)

__all__ = [
    "PairCorrRow",
    "CSV_FIELDS",
    "real_pair_corr",
    "real_pair_count_abs",
    "real_pair_count_circle",
    "padic_pair_count_prefix",
    "padic_pair_corr",
    "RadiusClassTracker",
    "sweep",
    "jump_locations",
    "format_exact",
    "rows_to_csv",
    "parse_csv_rows",
]

CSV_FIELDS = ("N", "alpha", "s", "p", "k", "mu", "count", "F")


@dataclass(frozen=True)
class PairCorrRow:
    """One evaluation of a pair-correlation statistic.

    ``p == 0`` marks the real statistic, for which ``k`` and ``mu`` are None.
    ``collisions`` counts ordered pairs whose truncations are identical; they
    are already included in ``count``.
    """

    N: int
    alpha: Fraction
    s: Fraction
    p: int
    k: int | None
    mu: Fraction | None
    count: int
    F: float
    collisions: int = 0


def _real(v) -> Fraction:
    # floats are accepted here and read at their exact binary value
    if isinstance(v, float):
        return Fraction(v)
    return to_fraction(v)


def _count_close_sorted(ys: Sequence[Fraction], within) -> int:
    """Unordered pairs i < j of a sorted list with ``within(ys[j] - ys[i])``.

    ``within`` must be monotone: true on some interval [0, t].
    """
    n = len(ys)
    total = 0
    j = 0
    for i in range(n):
        if j < i + 1:
            j = i + 1
        while j < n and within(ys[j] - ys[i]):
            j += 1
        total += j - i - 1
    return total


def _count_far_sorted(ys: Sequence[Fraction], within) -> int:
    """Unordered pairs i < j with ``within(1 - (ys[j] - ys[i]))`` (wrap-around)."""
    n = len(ys)
    total = 0
    j = 0
    for i in range(n):
        if j < i + 1:
            j = i + 1
        while j < n and not within(1 - (ys[j] - ys[i])):
            j += 1
        total += n - j
    return total


def real_pair_count_circle(y, N: int, within) -> int:
    """Ordered pairs with circle distance ``||y_k - y_l||`` satisfying ``within``."""
    ys = sorted(_real(v) % 1 for v in y[:N])
    n = len(ys)
    if within(Fraction(1, 2)):
        return n * (n - 1)
    # the threshold is below 1/2, so direct and wrap-around pairs are disjoint
    return 2 * (_count_close_sorted(ys, within) + _count_far_sorted(ys, within))


def real_pair_corr(y, N: int, alpha=1, s=1) -> PairCorrRow:
    """Real statistic: ordered pairs with ``||y_k - y_l|| <= s / N**alpha``,
    divided by ``N**(2 - alpha)``.
    """
    if N < 1 or N > len(y):
        raise ValueError(f"N={N} outside [1, {len(y)}]")
    alpha = to_fraction(alpha)
    _alpha_parts(alpha)
    s = to_fraction(s)
    if s < 0:
        raise ValueError("s must be non-negative")
    count = real_pair_count_circle(y, N, lambda d: radius_le(d, s, N, alpha))
    if alpha == 1:
        F = count / N
    else:
        F = count / N ** (2 - float(alpha))
    return PairCorrRow(N, alpha, s, 0, None, None, count, F)


def real_pair_count_abs(y, N: int, threshold) -> int:
    """Ordered pairs with ``|y_k - y_l| <= threshold``, without wrap-around."""
    threshold = _real(threshold)
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    if N > len(y):
        raise ValueError(f"N={N} exceeds sequence length {len(y)}")
    ys = sorted(_real(v) for v in y[:N])
    return 2 * _count_close_sorted(ys, lambda d: d <= threshold)


def _check_uniform(xs: Sequence[PAdicInt]) -> tuple[int, int]:
    p, m = xs[0].p, xs[0].m
    for i, x in enumerate(xs):
        if x.p != p or x.m != m:
            raise ValueError(f"element {i} has (p={x.p}, m={x.m}), expected (p={p}, m={m})")
    return p, m


def padic_pair_count_prefix(x: Sequence[PAdicInt], N: int, k: int) -> int:
    """Ordered pairs among the first N elements with ``|x_i - x_j|_p <= p**-k``.

    Elements are bucketed by their first k digits; a bucket of size c
    contributes c(c - 1) pairs.
    """
    if N > len(x):
        raise ValueError(f"N={N} exceeds sequence length {len(x)}")
    if N < 2:
        return 0
    xs = x[:N]
    p, m = _check_uniform(xs)
    if not 0 <= k <= m:
        raise PrecisionError(f"radius class k={k} outside [0, m={m}]")
    modulus = p**k
    sizes = Counter(e.value % modulus for e in xs)
    return sum(c * (c - 1) for c in sizes.values())


def _padic_F(count: int, p: int, k: int, N: int) -> float:
    return float(Fraction(count * p**k, N * N))


def padic_pair_corr(x: Sequence[PAdicInt], N: int, alpha=1, s=1) -> PairCorrRow:
    """p-adic statistic ``count / (N**2 * mu)`` with mu the Haar measure of
    the disc of radius ``s / N**alpha``.
    """
    if N < 1 or N > len(x):
        raise ValueError(f"N={N} outside [1, {len(x)}]")
    alpha = to_fraction(alpha)
    s = to_fraction(s)
    p, m = _check_uniform(x[:N])
    collisions = padic_pair_count_prefix(x, N, m)
    if s == 0:
        # no distinct elements at distance <= 0; the disc measure degenerates
        return PairCorrRow(N, alpha, s, p, None, Fraction(0), 0, 0.0, collisions)
    disc = disc_measure(p, s, N, alpha)
    if disc.k0 > m:
        raise PrecisionError(
            f"radius class k={disc.k0} for s={s}, N={N} exceeds precision m={m}"
        )
    count = padic_pair_count_prefix(x, N, disc.k0)
    return PairCorrRow(
        N, alpha, s, p, disc.k0, disc.mu, count, _padic_F(count, p, disc.k0, N), collisions
    )


class RadiusClassTracker:
    """Radius class of ``s / N**alpha`` for increasing N.

    The class never decreases as N grows, so each step costs amortised O(1)
    big-integer comparisons.
    """

    def __init__(self, p: int, s, alpha=1):
        s = to_fraction(s)
        if s <= 0:
            raise ValueError(f"s must be positive, got {s}")
        self.a, self.b = _alpha_parts(alpha)
        self.p = p
        self._den_b = s.denominator**self.b
        self._pb = p**self.b
        self._rhs = s.numerator**self.b
        self.k = 0

    def at(self, N: int) -> int:
        lhs = N**self.a * self._den_b
        while self._rhs < lhs:
            self.k += 1
            self._rhs *= self._pb
        return self.k


def _level_counts(keys: Sequence[int]) -> list[int]:
    """Running ordered-pair counts as elements join their prefix classes."""
    sizes: defaultdict[int, int] = defaultdict(int)
    out = []
    running = 0
    for key in keys:
        c = sizes[key]
        running += 2 * c
        sizes[key] = c + 1
        out.append(running)
    return out


def sweep(x: Sequence[PAdicInt], alpha, s_list, N_from: int = 1, N_to: int | None = None,
          threads: int = 1) -> list[PairCorrRow]:
    """Rows for every N in [N_from, N_to] and every s, ordered by N then s.

    One prefix-class table per radius level is grown element by element;
    levels are independent and may be filled by separate threads.  The result
    does not depend on ``threads``.
    """
    if N_to is None:
        N_to = len(x)
    if not 1 <= N_from <= N_to <= len(x):
        raise ValueError(f"need 1 <= N_from <= N_to <= {len(x)}, got [{N_from}, {N_to}]")
    alpha = to_fraction(alpha)
    s_list = [to_fraction(s) for s in s_list]
    if any(s <= 0 for s in s_list):
        raise ValueError("sweep needs positive s values")
    xs = x[:N_to]
    p, m = _check_uniform(xs)

    trackers = [RadiusClassTracker(p, s, alpha) for s in s_list]
    classes = [[t.at(N) for N in range(1, N_to + 1)] for t in trackers]
    k_max = max((c[-1] for c in classes), default=0)
    if k_max > m:
        raise PrecisionError(f"radius class k={k_max} at N={N_to} exceeds precision m={m}")

    levels = sorted({k for c in classes for k in c[N_from - 1:]} | {m})
    values = [e.value for e in xs]

    def fill(k):
        modulus = p**k
        return _level_counts([v % modulus for v in values])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            tables = dict(zip(levels, pool.map(fill, levels)))
    else:
        tables = {k: fill(k) for k in levels}

    rows = []
    for N in range(N_from, N_to + 1):
        collisions = tables[m][N - 1]
        for s, cls in zip(s_list, classes):
            k = cls[N - 1]
            count = tables[k][N - 1]
            rows.append(PairCorrRow(N, alpha, s, p, k, Fraction(1, p**k), count,
                                    _padic_F(count, p, k, N), collisions))
    return rows


def jump_locations(rows: Sequence[PairCorrRow]) -> list[int]:
    """N values at which the radius class differs from the previous row's."""
    return [cur.N for prev, cur in zip(rows, rows[1:]) if cur.k != prev.k]


def format_exact(q: Fraction) -> str:
    """Terminating decimals as decimal text, anything else as ``a/b``."""
    q = Fraction(q)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    if q.denominator == 1:
        return str(q.numerator)
    e = max(twos, fives)
    scaled = abs(q.numerator) * 10**e // q.denominator
    sign = "-" if q < 0 else ""
    whole, frac = divmod(scaled, 10**e)
    return f"{sign}{whole}.{frac:0{e}d}"


def _row_fields(row: PairCorrRow) -> list[str]:
    return [
        str(row.N),
        str(row.alpha),
        format_exact(row.s),
        str(row.p),
        "" if row.k is None else str(row.k),
        "" if row.mu is None else f"{row.mu.numerator}/{row.mu.denominator}",
        str(row.count),
        repr(row.F),
    ]


def rows_to_csv(rows, metadata: Sequence[str] = ()) -> str:
    """CSV text with ``#`` metadata lines, a header, then one line per row."""
    buf = io.StringIO()
    for line in metadata:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow(_row_fields(row))
    return buf.getvalue()


def parse_csv_rows(text: str) -> list[PairCorrRow]:
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        rows.append(PairCorrRow(
            N=int(rec["N"]),
            alpha=Fraction(rec["alpha"]),
            s=Fraction(rec["s"]),
            p=int(rec["p"]),
            k=int(rec["k"]) if rec["k"] else None,
            mu=Fraction(rec["mu"]) if rec["mu"] else None,
            count=int(rec["count"]),
            F=float(rec["F"]),
        ))
    return rows
