import math
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest

from padic_ppc.padic import PrecisionError, monna
from padic_ppc.sequences import (
    SequenceSpec,
    build_sequence,
    gen_naturals,
    gen_sqrt_sequence,
    gen_uniform_random,
    gen_vdc,
    is_square,
    non_squares,
    read_sequence,
    sqrt_frac_digits,
    write_sequence,
)


def decimal_digits(n, p, m):
    """Base-p digits of frac(sqrt(n)) from a 80-digit decimal expansion."""
    with localcontext() as ctx:
        ctx.prec = 80
        frac = Decimal(n).sqrt() % 1
        out = []
        for _ in range(m):
            frac *= p
            d = int(frac)
            out.append(d)
            frac -= d
    return out


def test_sqrt_digits_by_hand():
    # isqrt(18)=4, isqrt(162)=12, isqrt(1458)=38
    assert sqrt_frac_digits(2, 3, 3) == [1, 0, 2]


def test_sqrt_digits_against_decimal_expansion():
    for n in range(2, 51):
        if is_square(n):
            continue
        for p in (2, 3, 5):
            assert sqrt_frac_digits(n, p, 20) == decimal_digits(n, p, 20), (n, p)


def test_sqrt_digits_reject_squares():
    with pytest.raises(ValueError):
        sqrt_frac_digits(49, 3, 5)


def test_sqrt_sequence_reference_values():
    assert [x.value for x in gen_sqrt_sequence(3, 3, 10)] == [52102, 58142, 33081]


def test_sqrt_sequence_base_two():
    # sqrt(2) = 1.0110101... in base 2
    (x,) = gen_sqrt_sequence(1, 2, 4)
    assert list(x.digits) == [0, 1, 1, 0]


def test_sqrt_sequence_skips_squares():
    ns = [n for n, _ in zip(non_squares(2), range(12))]
    assert ns == [2, 3, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15]
    assert all(math.isqrt(n) ** 2 != n for n in ns)
    assert len(gen_sqrt_sequence(40, 3, 16)) == 40


def test_sqrt_sequence_collision_is_an_error():
    with pytest.raises(PrecisionError, match="merges elements"):
        gen_sqrt_sequence(100, 3, 4)


def test_vdc():
    assert gen_vdc(3, 2) == [Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)]
    assert gen_vdc(5, 3)[4] == Fraction(7, 9)
    for p in (2, 3, 7):
        assert gen_vdc(1, p) == [Fraction(1, p)]


@pytest.mark.parametrize("p, j", [(2, 5), (3, 3), (5, 2)])
def test_vdc_fills_the_grid(p, j):
    pts = gen_vdc(p**j - 1, p)
    assert all(0 <= x < 1 for x in pts)
    assert sorted(pts) == [Fraction(i, p**j) for i in range(1, p**j)]


def test_naturals():
    assert [list(x.digits) for x in gen_naturals(4, 3, 2)] == [[1, 0], [2, 0], [0, 1], [1, 1]]
    assert list(gen_naturals(5, 3, 4)[4].digits) == [2, 1, 0, 0]
    xs = gen_naturals(9 + 4, 3, 2)
    assert len({x.value for x in xs[:9]}) == 9
    assert xs[9:] == xs[:4]


def test_naturals_are_vdc_preimages():
    p, m = 3, 6
    assert [monna(x) for x in gen_naturals(200, p, m)] == gen_vdc(200, p)


def test_uniform_random_determinism():
    a = gen_uniform_random(50, 5, 8, seed=123)
    assert a == gen_uniform_random(50, 5, 8, seed=123)
    assert a != gen_uniform_random(50, 5, 8, seed=124)


def test_uniform_random_digit_histogram():
    N, p, m = 4000, 5, 10
    counts = [0] * p
    for x in gen_uniform_random(N, p, m, seed=9):
        for d in x.digits:
            counts[d] += 1
    draws = N * m
    sigma = math.sqrt(draws * (1 / p) * (1 - 1 / p))
    assert all(abs(c - draws / p) <= 5 * sigma for c in counts)


@pytest.mark.parametrize("gen", [gen_naturals, gen_sqrt_sequence])
def test_rejects_empty(gen):
    with pytest.raises(ValueError):
        gen(0, 3, 4)


def test_uniform_rejects_empty():
    with pytest.raises(ValueError):
        gen_uniform_random(0, 3, 4, seed=1)


class TestFiles:
    def test_round_trip(self, tmp_path):
        xs = gen_naturals(10, 3, 5)
        write_sequence(xs, tmp_path / "seq.txt")
        assert read_sequence(tmp_path / "seq.txt") == xs

    def test_format(self, tmp_path):
        write_sequence(gen_naturals(2, 3, 3), tmp_path / "seq.txt")
        assert (tmp_path / "seq.txt").read_text() == "# padic p=3 m=3\n1,0,0\n2,0,0\n"

    def test_bad_digit(self, tmp_path):
        path = tmp_path / "seq.txt"
        path.write_text("# padic p=3 m=2\n1,7\n")
        with pytest.raises(ValueError, match="outside"):
            read_sequence(path)

    def test_empty_body(self, tmp_path):
        path = tmp_path / "seq.txt"
        path.write_text("# padic p=3 m=2\n")
        assert read_sequence(path) == []
        write_sequence([], tmp_path / "empty.txt", p=3, m=2)
        assert read_sequence(tmp_path / "empty.txt") == []

    @pytest.mark.parametrize("text", [
        "padic p=3 m=2\n1,0\n",
        "# padic p=4 m=2\n1,0\n",
        "# padic p=3 m=2\n1,0,0\n",
        "# padic p=3 m=2\n1,x\n",
    ])
    def test_malformed(self, tmp_path, text):
        path = tmp_path / "seq.txt"
        path.write_text(text)
        with pytest.raises(ValueError):
            read_sequence(path)

    def test_write_rejects_mixed(self, tmp_path):
        with pytest.raises(ValueError):
            write_sequence(gen_naturals(2, 3, 3) + gen_naturals(2, 3, 4), tmp_path / "x")


def test_sequence_spec():
    with pytest.raises(ValueError):
        SequenceSpec("uniform-random", count=3)
    with pytest.raises(ValueError):
        SequenceSpec("naturals", count=3, seed=1)
    with pytest.raises(ValueError):
        SequenceSpec("naturals", count=0)
    with pytest.raises(ValueError):
        SequenceSpec("kronecker")
    spec = SequenceSpec("uniform-random", p=3, m=6, count=20, seed=5)
    assert build_sequence(spec) == gen_uniform_random(20, 3, 6, seed=5)
    assert build_sequence(SequenceSpec("vdc", p=2, m=8, count=5)) == gen_naturals(5, 2, 8)
