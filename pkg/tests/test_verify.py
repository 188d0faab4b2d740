import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_ppc.padic import PAdicInt, padic_from_integer, padic_sub, valuation, monna
from padic_ppc.paircorr import padic_pair_corr, padic_pair_count_prefix
from padic_ppc.sequences import (
    gen_naturals,
    gen_uniform_random,
    gen_vdc,
    non_squares,
    sqrt_frac_digits,
)
from padic_ppc.verify import (
    brute_pair_count_padic,
    brute_pair_counts,
    check_lemma_monna,
    jump_formula,
    naturals_closed_form,
    pair_valuation,
    run_verification,
    transference_diagnostic,
    uniform_convergence_report,
)


class TestBruteOracle:
    def test_identical_pair(self):
        x = padic_from_integer(3, 11, 4)
        for k in range(5):
            assert brute_pair_count_padic([x, x], 2, k) == 2

    def test_first_digit_differs(self):
        xs = [PAdicInt(3, [0, 1, 1]), PAdicInt(3, [1, 1, 1])]
        assert brute_pair_count_padic(xs, 2, 1) == 0

    def test_agrees_with_prefix_counter(self):
        xs = gen_uniform_random(200, 3, 12, seed=7)
        fast = [padic_pair_count_prefix(xs, 200, k) for k in range(13)]
        assert brute_pair_counts(xs, 200) == fast
        for k in (0, 1, 3):
            assert brute_pair_count_padic(xs, 200, k) == fast[k]

    @given(st.sampled_from([2, 3, 5]), st.integers(1, 6), st.data())
    def test_pair_valuation_is_valuation_of_difference(self, p, m, data):
        a, b = (padic_from_integer(p, data.draw(st.integers(0, p**m - 1)), m) for _ in range(2))
        assert pair_valuation(a, b) == valuation(padic_sub(a, b))

    def test_exhaustive_tiny_sequences(self):
        elems = [padic_from_integer(2, n, 3) for n in range(8)]
        for length in range(1, 5):
            for seq in itertools.product(elems, repeat=length):
                seq = list(seq)
                brute = brute_pair_counts(seq, length)
                assert brute == [padic_pair_count_prefix(seq, length, k) for k in range(4)]


class TestLemmaChecks:
    @pytest.mark.parametrize("p, m", [(2, 6), (3, 4), (5, 4), (7, 3)])
    def test_no_counterexamples(self, p, m):
        assert check_lemma_monna(p, m) == []

    def test_literal_first_claim_of_part_two_fails(self):
        # monna(p^k) = p^-(k+1) <= p^-k, yet |p^k|_p = p^-k is not <= p^-(k+1)
        p, m, k = 3, 4, 2
        a = padic_from_integer(p, p**k, m)
        assert monna(a) <= Fraction(1, p**k)
        assert not valuation(a) >= k + 1

    def test_budget(self):
        with pytest.raises(ValueError, match="budget"):
            check_lemma_monna(3, 20)


class TestNaturalsClosedForm:
    @pytest.mark.parametrize("N, p, k, want", [(9, 3, 1, 18), (9, 3, 2, 0), (10, 3, 1, 24)])
    def test_examples(self, N, p, k, want):
        assert naturals_closed_form(N, p, k) == want

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_against_brute_force(self, p):
        for k in range(6):
            pk = p**k
            count = 0
            for N in range(1, 201):
                # element N joins: it pairs with every earlier n = N mod p^k, both orders
                count += 2 * sum(1 for n in range(1, N) if (N - n) % pk == 0)
                assert naturals_closed_form(N, p, k) == count, (N, p, k)

    def test_matches_prefix_counter(self):
        xs = gen_naturals(200, 5, 6)
        for N in (1, 17, 125, 200):
            for k in range(6):
                assert padic_pair_count_prefix(xs, N, k) == naturals_closed_form(N, 5, k)


def test_jump_formula():
    assert jump_formula(3, 1, 1, 100) == [2, 4, 10, 28, 82]
    assert jump_formula(3, 2, 1, 100) == [3, 7, 19, 55]
    # floor(0.1 * 3^k) + 1 = 1 for k <= 2: no earlier row to jump from
    assert jump_formula(3, "0.1", 1, 100) == [3, 9, 25, 73]


class TestTransference:
    def brute_real_abs(self, ys, N, t):
        return sum(1 for i in range(N) for j in range(N) if i != j and abs(ys[i] - ys[j]) <= t)

    @pytest.mark.parametrize("p", [2, 3])
    def test_vdc_against_brute_force(self, p):
        ys = gen_vdc(200, p)
        for N in (2, 10, 57, 200):
            for s in (Fraction(1, 2), Fraction(1), Fraction(3)):
                rep = transference_diagnostic(ys, p, 16, 1, s, N)
                xs = [padic_from_integer(p, n, 16) for n in range(1, N + 1)]
                assert rep.count_padic == brute_pair_count_padic(xs, N, rep.k)
                assert rep.count_real_abs == self.brute_real_abs(ys, N, Fraction(1, p**rep.k))
                assert rep.excess == rep.count_real_abs - rep.count_padic >= 0

    def test_vdc_excess_is_not_zero_in_general(self):
        # radical inverses of 1 and 2 in base 2 sit exactly 1/4 apart, on the boundary
        rep = transference_diagnostic(gen_vdc(4, 2), 2, 8, 1, 1, 4)
        assert (rep.k, rep.count_padic, rep.count_real_abs) == (2, 0, 6)

    def test_rescale_exact(self):
        rep = transference_diagnostic(gen_vdc(10, 3), 3, 8, 1, Fraction(1, 2), 10)
        # s/N = 1/20, class k = 3 (1/27 <= 1/20 < 1/9), ratio (1/27) / (1/20)
        assert rep.k == 3 and rep.rescale_x == Fraction(20, 27) and rep.rescale_exact

    def test_rescale_for_radius_above_one(self):
        rep = transference_diagnostic(gen_vdc(2, 3), 3, 8, 1, 20, 2)
        # radius 10: k clamps to 0, but 9 <= 10 < 27 gives the ratio 9/10
        assert rep.k == 0 and rep.rescale_x == Fraction(9, 10)

    def test_rescale_irrational(self):
        rep = transference_diagnostic(gen_vdc(7, 3), 3, 8, Fraction(1, 2), 1, 7)
        assert not rep.rescale_exact
        # 1/sqrt(7) = 0.378, class 1, ratio (1/3) * sqrt(7)
        assert abs(float(rep.rescale_x) - 7**0.5 / 3) < 1e-15

    def test_digit_stream_input(self):
        ys = [sqrt_frac_digits(n, 3, 20) for n, _ in zip(non_squares(), range(300))]
        rep = transference_diagnostic(ys, 3, 20, 1, 1, 300)
        assert rep.count_padic == padic_pair_corr(
            [PAdicInt(3, d) for d in ys], 300, 1, 1).count
        assert rep.excess >= 0


class TestConvergenceReport:
    def test_vdc_real(self):
        rep = uniform_convergence_report(gen_vdc(10**4, 2), "1/2", ["0.5", "1", "2"],
                                         [10**2, 10**3, 10**4])
        assert rep.kind == "real" and len(rep.rows) == 3
        assert rep.converging

    def test_naturals_sup_deviation_closed_form(self):
        p = 3
        grid = [Fraction(1, 2), Fraction(1), Fraction(2)]
        xs = gen_naturals(729, p, 10)
        rep = uniform_convergence_report(xs, "1/2", grid, [81, 243, 729])
        for N, dev, _ in rep.rows:
            want = 0.0
            for s in grid:
                k = padic_pair_corr(xs, N, Fraction(1, 2), s).k
                F = Fraction(naturals_closed_form(N, p, k) * p**k, N * N)
                want = max(want, abs(float(F) - 1))
            assert dev == want

    def test_naturals_at_powers_of_p(self):
        # N = p^j and k <= j give F = 1 - p^k / N
        xs = gen_naturals(729, 3, 10)
        rep = uniform_convergence_report(xs, "1/2", [1], [9, 81, 729])
        assert [dev for _, dev, _ in rep.rows] == pytest.approx([3 / 9, 9 / 81, 27 / 729])

    def test_constant_sequence_flagged(self):
        xs = [padic_from_integer(3, 5, 20)] * 400
        rep = uniform_convergence_report(xs, "1/2", ["0.5", "1"], [10, 100, 400])
        assert not rep.converging


@pytest.mark.parametrize("p, m", [(2, 6), (3, 4)])
def test_run_verification(p, m):
    results = run_verification(p, m)
    assert len(results) == 7
    assert all(r.passed for r in results), [r for r in results if not r.passed]
