"""Brute-force oracles and diagnostics for the pair-correlation machinery.

Nothing here uses the prefix-bucketing counter as a shortcut: the oracles
work pair by pair or from closed forms, so they can be trusted to check the
fast paths in :mod:`padic_ppc.paircorr`.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .padic import (
    PAdicInt,
    _alpha_parts,
    _check_prime,
    disc_measure,
    monna,
    monna_inverse,
    padic_add,
    padic_from_integer,
    padic_sub,
    radius_le,
    to_fraction,
    valuation,
)
from .paircorr import (
    padic_pair_corr,
    padic_pair_count_prefix,
    real_pair_corr,
    real_pair_count_abs,
)
from .sequences import gen_naturals, gen_uniform_random, gen_vdc

__all__ = [
    "Counterexample",
    "TransferenceReport",
    "ConvergenceReport",
    "CheckResult",
    "pair_valuation",
    "brute_pair_count_padic",
    "brute_pair_counts",
    "check_lemma_monna",
    "check_round_trip",
    "check_ultrametric",
    "check_ring",
    "naturals_closed_form",
    "jump_formula",
    "transference_diagnostic",
    "uniform_convergence_report",
    "run_verification",
]


class Counterexample(NamedTuple):
    check: str
    digits: tuple
    k: int | None
    detail: str


def pair_valuation(a: PAdicInt, b: PAdicInt) -> int:
    """Valuation of a - b, computed from the integer difference mod p^m."""
    p = a.p
    d = (a.value - b.value) % a.modulus
    if d == 0:
        return a.m
    v = 0
    while d % p == 0:
        d //= p
        v += 1
    return v


def brute_pair_count_padic(x, N: int, k: int) -> int:
    """Ordered pairs i != j among the first N with ``v(x_i - x_j) >= k``, by double loop."""
    xs = x[:N]
    if xs and not 0 <= k <= xs[0].m:
        raise ValueError(f"k={k} outside [0, {xs[0].m}]")
    count = 0
    for i, a in enumerate(xs):
        for j, b in enumerate(xs):
            if i != j and valuation(padic_sub(a, b)) >= k:
                count += 1
    return count


def brute_pair_counts(x, N: int) -> list[int]:
    """Brute-force ordered-pair counts for every level k = 0..m at once.

    Each unordered pair's valuation is computed once and added to a
    histogram; the count at level k is the tail sum from k upward.
    """
    xs = x[:N]
    if not xs:
        return []
    m = xs[0].m
    hist = [0] * (m + 1)
    for i in range(len(xs)):
        a = xs[i]
        for j in range(i + 1, len(xs)):
            hist[pair_valuation(a, xs[j])] += 1
    counts = []
    tail = 0
    for v in range(m, -1, -1):
        tail += hist[v]
        counts.append(2 * tail)
    counts.reverse()
    return counts


def _all_elements(p: int, m: int, budget: int):
    _check_prime(p)
    if p**m > budget:
        raise ValueError(f"{p}^{m} = {p**m} elements exceeds the enumeration budget {budget}")
    return [padic_from_integer(p, n, m) for n in range(p**m)]


def check_lemma_monna(p: int, m: int, budget: int = 10**6) -> list[Counterexample]:
    """Exhaustively test how the Monna map interacts with |.|_p at precision m.

    (i)   v(a) >= k implies monna(a) <= p^-k, for 0 <= k <= m;
    (ii)  monna(a) <= p^-k iff v(a) >= k or a == p^(k-1), for 1 <= k <= m;
    (iii) monna is injective on truncations.
    """
    out = []
    seen: dict[Fraction, PAdicInt] = {}
    for a in _all_elements(p, m, budget):
        y = monna(a)
        v = valuation(a)
        for k in range(m + 1):
            bound = Fraction(1, p**k)
            if v >= k and not y <= bound:
                out.append(Counterexample("i", a.digits, k, f"monna={y} > {bound}"))
            if k >= 1:
                lhs = y <= bound
                rhs = v >= k or a.value == p ** (k - 1)
                if lhs != rhs:
                    out.append(Counterexample(
                        "ii", a.digits, k, f"monna<=p^-k is {lhs}, valuation side is {rhs}"))
        other = seen.setdefault(y, a)
        if other is not a:
            out.append(Counterexample("iii", a.digits, None, f"same image as {other.digits}"))
    return out


def check_round_trip(p: int, m: int, budget: int = 10**6) -> list[Counterexample]:
    out = []
    for a in _all_elements(p, m, budget):
        back = monna_inverse(monna(a), p, m)
        if back != a:
            out.append(Counterexample("round-trip", a.digits, None, f"came back as {back.digits}"))
    return out


def check_ultrametric(p: int, m: int, budget: int = 10**6, samples: int = 20000,
                      seed: int = 0) -> list[Counterexample]:
    """|a - c|_p <= max(|a - b|_p, |b - c|_p), i.e. v(a-c) >= min(v(a-b), v(b-c)).

    Exhaustive over all triples when p^(3m) fits the budget, otherwise
    ``samples`` seeded random triples.
    """
    _check_prime(p)
    q = p**m
    out = []

    def test(a, b, c, vab, vbc, vac):
        if vac < min(vab, vbc):
            out.append(Counterexample("ultrametric", (a.digits, b.digits, c.digits), None,
                                      f"v(a-c)={vac} < min({vab}, {vbc})"))

    if q**3 <= budget:
        elems = _all_elements(p, m, budget)
        vals = [[valuation(padic_sub(a, b)) for b in elems] for a in elems]
        for i, j, l in itertools.product(range(q), repeat=3):
            test(elems[i], elems[j], elems[l], vals[i][j], vals[j][l], vals[i][l])
    else:
        rng = random.Random(seed)
        for _ in range(samples):
            a, b, c = (padic_from_integer(p, rng.randrange(q), m) for _ in range(3))
            test(a, b, c, valuation(padic_sub(a, b)), valuation(padic_sub(b, c)),
                 valuation(padic_sub(a, c)))
    return out


def check_ring(p: int, m: int, budget: int = 10**5, samples: int = 20000,
               seed: int = 0) -> list[Counterexample]:
    """Digit-wise add/sub against integer arithmetic mod p^m."""
    _check_prime(p)
    q = p**m
    if q * q <= budget:
        pairs = itertools.product(range(q), repeat=2)
    else:
        rng = random.Random(seed)
        pairs = ((rng.randrange(q), rng.randrange(q)) for _ in range(samples))
    out = []
    for A, B in pairs:
        a, b = padic_from_integer(p, A, m), padic_from_integer(p, B, m)
        if padic_sub(a, b) != padic_from_integer(p, (A - B) % q, m):
            out.append(Counterexample("sub", (a.digits, b.digits), None, f"{A} - {B}"))
        if padic_add(a, b) != padic_from_integer(p, (A + B) % q, m):
            out.append(Counterexample("add", (a.digits, b.digits), None, f"{A} + {B}"))
    return out


def naturals_closed_form(N: int, p: int, k: int) -> int:
    """Ordered pairs of distinct n, n' in 1..N with n = n' mod p^k.

    With q = N // p^k and r = N % p^k there are r residue classes of size
    q + 1 and p^k - r of size q.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    pk = p**k
    q, r = divmod(N, pk)
    return r * (q + 1) * q + (pk - r) * q * (q - 1)


def jump_formula(p: int, s, N_from: int, N_to: int) -> list[int]:
    """Where the radius class of s/N (alpha = 1) steps up, for N in (N_from, N_to].

    The class is the least k with N <= s p^k, so it leaves k exactly at
    N = floor(s p^k) + 1.
    """
    s = to_fraction(s)
    out = set()
    k = 0
    while True:
        n = math.floor(s * p**k) + 1
        if n > N_to:
            break
        if n > N_from:
            out.add(n)
        k += 1
    return sorted(out)


@dataclass(frozen=True)
class TransferenceReport:
    """Comparison of p-adic ball counts with real interval counts at radius p^-k.

    ``rescale_x`` is the ratio of the quantised radius p^-j to the requested
    radius ``s / N**alpha``, so it lies in (1/p, 1].  Here j equals ``k``
    except for radii above 1, where ``k`` is clamped to 0 but j goes
    negative.  The ratio is exact when ``N**alpha`` is rational
    (``rescale_exact``) and otherwise a rational approximation good to about
    2^-64 relative error.
    """

    N: int
    k: int
    count_padic: int
    count_real_abs: int
    excess: int
    rescale_x: Fraction
    normalized_excess: float
    rescale_exact: bool = True


def _iroot(n: int, b: int) -> int:
    """floor(n ** (1/b)) for n >= 0."""
    if n < 2 or b == 1:
        return n
    x = 1 << ((n.bit_length() + b - 1) // b)
    while True:
        y = ((b - 1) * x + n // x ** (b - 1)) // b
        if y >= x:
            break
        x = y
    while x**b > n:
        x -= 1
    while (x + 1) ** b <= n:
        x += 1
    return x


def _power_rational(N: int, alpha) -> tuple[Fraction, bool]:
    """N**alpha as (value, exact); inexact values are floored to 64 fractional bits."""
    a, b = _alpha_parts(alpha)
    na = N**a
    root = _iroot(na, b)
    if root**b == na:
        return Fraction(root), True
    return Fraction(_iroot(na << (64 * b), b), 1 << 64), False


def _real_value(v, p: int, m: int) -> Fraction:
    if isinstance(v, (int, Fraction, str)):
        return to_fraction(v)
    return monna(monna_inverse(v, p, m))


def transference_diagnostic(y, p: int, m: int, alpha, s, N: int) -> TransferenceReport:
    """Push a real sequence through the inverse Monna map and compare counts.

    ``y`` holds exact rationals in [0, 1) or base-p digit streams (read at
    m digits).  The p-adic count at radius class k can never exceed the real
    count of pairs within distance p^-k, since elements sharing k digits sit
    in one interval of length p^-k; the difference is the excess.
    """
    alpha = to_fraction(alpha)
    s = to_fraction(s)
    ys = [_real_value(v, p, m) for v in y[:N]]
    xs = [monna_inverse(v, p, m) for v in y[:N]]
    k = disc_measure(p, s, N, alpha).k0
    if k > m:
        raise ValueError(f"radius class k={k} exceeds precision m={m}")
    count_padic = padic_pair_count_prefix(xs, N, k)
    count_real = real_pair_count_abs(ys, N, Fraction(1, p**k))
    excess = count_real - count_padic
    # unclamped exponent: radii above 1 get k_free < 0 so the factor stays in (1/p, 1]
    k_free = k
    while k_free <= 0 and radius_le(Fraction(p ** (1 - k_free)), s, N, alpha):
        k_free -= 1
    root, exact = _power_rational(N, alpha)
    rescale = root / (s * Fraction(p) ** k_free)
    return TransferenceReport(
        N=N, k=k, count_padic=count_padic, count_real_abs=count_real, excess=excess,
        rescale_x=rescale, normalized_excess=float(Fraction(excess * p**k, N * N)),
        rescale_exact=exact,
    )


@dataclass
class ConvergenceReport:
    """Sup over an s-grid of |F_N(s) - limit(s)| for each N."""

    kind: str
    alpha: Fraction
    s_grid: list[Fraction]
    rows: list[tuple[int, float, Fraction]] = field(default_factory=list)

    @property
    def deviations(self) -> list[float]:
        return [dev for _, dev, _ in self.rows]

    @property
    def converging(self) -> bool:
        """True when the last deviation is below the first and every step is non-increasing
        up to a 10% wobble."""
        devs = self.deviations
        if len(devs) < 2:
            return True
        return devs[-1] < devs[0] and all(b <= 1.1 * a + 1e-12 for a, b in zip(devs, devs[1:]))


def uniform_convergence_report(seq, alpha, s_grid, N_list) -> ConvergenceReport:
    """Largest deviation of F from its Poissonian limit, per N.

    Real sequences (numbers) are compared against 2s, p-adic sequences
    against 1.  Nothing is asserted; ``converging`` summarises the trend.
    """
    alpha = to_fraction(alpha)
    s_grid = [to_fraction(s) for s in s_grid]
    padic = bool(seq) and isinstance(seq[0], PAdicInt)
    report = ConvergenceReport("padic" if padic else "real", alpha, s_grid)
    for N in N_list:
        worst = (-1.0, None)
        for s in s_grid:
            if padic:
                F, limit = padic_pair_corr(seq, N, alpha, s).F, 1.0
            else:
                F, limit = real_pair_corr(seq, N, alpha, s).F, 2 * float(s)
            dev = abs(F - limit)
            if dev > worst[0]:
                worst = (dev, s)
        report.rows.append((N, worst[0], worst[1]))
    return report


@dataclass(frozen=True)
class CheckResult:
    name: str
    counterexamples: list

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def _check_oracle(p: int, m: int, trials: int, N: int, seed: int) -> list[Counterexample]:
    out = []
    for t in range(trials):
        xs = gen_uniform_random(N, p, m, seed + t)
        brute = brute_pair_counts(xs, N)
        for k in range(m + 1):
            fast = padic_pair_count_prefix(xs, N, k)
            if fast != brute[k]:
                out.append(Counterexample("oracle", (seed + t,), k, f"prefix {fast} != brute {brute[k]}"))
    return out


def _check_naturals(p: int, m: int, N_max: int) -> list[Counterexample]:
    out = []
    xs = gen_naturals(N_max, p, m)
    for N in range(1, N_max + 1):
        for k in range(m + 1):
            want = naturals_closed_form(N, p, k)
            got = padic_pair_count_prefix(xs, N, k)
            if want != got:
                out.append(Counterexample("naturals", (N,), k, f"prefix {got} != closed form {want}"))
    return out


def _check_bridge(p: int, m: int, N: int) -> list[Counterexample]:
    out = []
    vdc = gen_vdc(N, p)
    for s in (Fraction(1, 10), Fraction(1, 2), Fraction(1), Fraction(2)):
        for n in range(2, N + 1):
            if disc_measure(p, s, n, 1).k0 > m:
                break
            rep = transference_diagnostic(vdc, p, m, 1, s, n)
            if rep.excess < 0 or not Fraction(1, p) < rep.rescale_x <= 1:
                out.append(Counterexample("bridge", (n,), rep.k, repr(rep)))
    return out


def run_verification(p: int, m: int, budget: int = 10**6) -> list[CheckResult]:
    """The battery behind the ``verify`` command."""
    _check_prime(p)
    checks = [
        ("monna lemma (i)-(iii), exhaustive", lambda: check_lemma_monna(p, m, budget)),
        ("monna round trip, exhaustive", lambda: check_round_trip(p, m, budget)),
        ("ultrametric inequality", lambda: check_ultrametric(p, m, budget)),
        ("add/sub vs integers mod p^m", lambda: check_ring(p, m)),
        ("prefix counter vs brute force", lambda: _check_oracle(p, m, trials=5, N=120, seed=1)),
        ("naturals closed form", lambda: _check_naturals(p, m, N_max=60)),
        ("bridge inequality on van der Corput", lambda: _check_bridge(p, m, N=60)),
    ]
    return [CheckResult(name, fn()) for name, fn in checks]

