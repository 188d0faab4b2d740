"""Truncated p-adic integers, the Monna map and Poissonian pair correlations."""

from .padic import (
    DiscMeasure,
    PAdicInt,
    PrecisionError,
    disc_measure,
    monna,
    monna_inverse,
    padic_abs,
    padic_add,
    padic_from_digits,
    padic_from_integer,
    padic_sub,
    valuation,
)
from .paircorr import (
    PairCorrRow,
    jump_locations,
    padic_pair_corr,
    padic_pair_count_prefix,
    real_pair_corr,
    real_pair_count_abs,
    sweep,
)
from .sequences import (
    SequenceSpec,
    gen_naturals,
    gen_sqrt_sequence,
    gen_uniform_random,
    gen_vdc,
    read_sequence,
    sqrt_frac_digits,
    write_sequence,
)

__version__ = "0.1.0"
