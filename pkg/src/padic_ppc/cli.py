"""Command-line front end.

Subcommands: ``gen``, ``stats``, ``sweep``, ``verify`` and ``figure1``.
Exit codes: 0 success, 1 validation or I/O error, 2 verification
counterexample.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .padic import PrecisionError, disc_measure, is_prime, monna, to_fraction
from .paircorr import format_exact, padic_pair_corr, real_pair_corr, rows_to_csv, sweep
from .sequences import SequenceSpec, build_sequence, gen_vdc, read_sequence, write_sequence
from .verify import run_verification

EXIT_OK, EXIT_INVALID, EXIT_COUNTEREXAMPLE = 0, 1, 2

GUARD_DIGITS = 4
FIGURE1_S = "0.1,0.25,0.5,1,2"
SEQ_KINDS = {
    "sqrt": "sqrt-frac",
    "vdc": "vdc",
    "naturals": "naturals",
    "random": "uniform-random",
    "file": "file",
}
DEFAULT_PRECISION = {"verify": 4}


class _Parser(argparse.ArgumentParser):
    # usage errors are validation errors; exit code 2 is reserved for counterexamples
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _s_list(text: str) -> list[Fraction]:
    try:
        values = [to_fraction(tok) for tok in text.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot parse s list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty s list")
    return values


def _alpha(text: str) -> Fraction:
    try:
        alpha = to_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot parse alpha {text!r}") from None
    if not 0 < alpha <= 1:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1], got {text}")
    return alpha


def _prime(text: str) -> int:
    p = int(text)
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{text} is not prime")
    return p


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_prime, default=3, help="prime base (default 3)")
    common.add_argument("--precision", "--m", dest="precision", type=_positive, default=None,
                        help="p-adic digits kept per element (default 32; 4 for verify)")
    common.add_argument("--seq", choices=sorted(SEQ_KINDS), default="sqrt",
                        help="sequence to use (default sqrt)")
    common.add_argument("--seed", type=int, default=None, help="seed for --seq random")
    common.add_argument("--in", dest="infile", default=None, help="sequence file for --seq file")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--n-max", "--count", dest="n_max", type=_positive, default=None,
                        help="number of elements N (default 5000)")
    common.add_argument("--alpha", type=_alpha, default=Fraction(1),
                        help="scaling exponent in (0, 1], e.g. 1 or 1/2")
    common.add_argument("--s", dest="s_list", type=_s_list, default=_s_list(FIGURE1_S),
                        help=f"comma-separated s values (default {FIGURE1_S})")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--format", choices=("csv", "gnuplot"), default="csv",
                        help="gnuplot also writes <out>.gp next to the CSV")
    common.add_argument("--real", action="store_true",
                        help="real statistic of the Monna images instead of the p-adic one")

    parser = _Parser(prog="padic-ppc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("gen", parents=[common], help="write a sequence file")
    sub.add_parser("stats", parents=[common], help="statistic at N = --n-max for each s")
    sw = sub.add_parser("sweep", parents=[common], help="statistic for every N and s")
    sw.add_argument("--n-from", type=_positive, default=1)
    sub.add_parser("verify", parents=[common], help="exhaustive lemma and oracle checks")
    fig = sub.add_parser("figure1", parents=[common],
                         help="p-adic statistic of the sqrt sequence, N = 1..5000")
    fig.add_argument("--n-from", type=_positive, default=1)
    return parser


def _load(args):
    """Build the sequence; file input overrides --p and --precision and
    defaults --n-max to the file length."""
    kind = SEQ_KINDS[args.seq]
    if kind == "uniform-random" and args.seed is None:
        raise ValueError("--seq random needs --seed")
    if kind == "file":
        if not args.infile:
            raise ValueError("--seq file needs --in")
        xs = read_sequence(args.infile)
        if not xs:
            raise ValueError(f"{args.infile} holds no elements")
        args.p, args.precision = xs[0].p, xs[0].m
        if args.n_max is None:
            args.n_max = len(xs)
        if args.n_max > len(xs):
            raise ValueError(f"{args.infile} holds {len(xs)} elements, --n-max {args.n_max} requested")
        return xs[: args.n_max]
    if args.n_max is None:
        args.n_max = 5000
    spec = SequenceSpec(
        kind=kind,
        p=args.p,
        m=args.precision,
        count=args.n_max,
        seed=args.seed if kind == "uniform-random" else None,
    )
    return build_sequence(spec)


def _check_guard(args) -> None:
    """Require m >= k0(min s, N, alpha) + guard digits."""
    s_min = min(args.s_list)
    if s_min <= 0:
        raise ValueError("s values must be positive")
    k0 = disc_measure(args.p, s_min, args.n_max, args.alpha).k0
    if args.precision < k0 + GUARD_DIGITS:
        raise PrecisionError(
            f"precision m={args.precision} too small: s={s_min} at N={args.n_max} needs "
            f"radius class {k0}, plus {GUARD_DIGITS} guard digits"
        )


def _metadata(args) -> list[str]:
    # --threads is deliberately left out: output must not depend on it
    fields = [
        f"command={args.command}",
        f"seq={args.seq}",
        f"p={args.p}",
        f"m={args.precision}",
        f"alpha={args.alpha}",
        "s=" + ",".join(format_exact(s) for s in args.s_list),
        f"n_max={args.n_max}",
    ]
    if getattr(args, "n_from", None) is not None:
        fields.append(f"n_from={args.n_from}")
    if args.seed is not None:
        fields.append(f"seed={args.seed}")
    if args.infile:
        fields.append(f"in={args.infile}")
    if args.real or args.seq == "vdc":
        fields.append("statistic=real")
    return [f"padic-ppc {__version__}", " ".join(fields)]


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _gnuplot_script(csv_path: str, args) -> str:
    labels = " ".join(format_exact(s) for s in args.s_list)
    if args.real or args.seq == "vdc":
        limit = ("for [i=1:words(svals)] 2*real(word(svals, i)) "
                 'with lines dashtype 2 lc "black" notitle')
    else:
        limit = '1 with lines dashtype 2 lc "black" title "limit"'
    return "\n".join([
        "# renders the pair-correlation curves written next to this script",
        'set datafile separator ","',
        "set key outside right",
        'set xlabel "N"',
        'set ylabel "F"',
        f'csv = "{Path(csv_path).name}"',
        f'svals = "{labels}"',
        "plot for [i=1:words(svals)] csv using 1:(strcol(3) eq word(svals, i) ? $8 : 1/0) "
        'with lines title "s=".word(svals, i), \\',
        f"     {limit}",
        "",
    ])


def _real_values(args, xs):
    if args.seq == "vdc":
        return gen_vdc(args.n_max, args.p)
    return [monna(x) for x in xs]


def cmd_gen(args) -> int:
    xs = _load(args)
    if args.out is None:
        sys.stdout.write(f"# padic p={args.p} m={args.precision}\n")
        sys.stdout.writelines(",".join(map(str, x.digits)) + "\n" for x in xs)
    else:
        write_sequence(xs, args.out, args.p, args.precision)
    return EXIT_OK


def _stat_rows(args, N_from: int | None):
    """Rows for N in [N_from, n_max]; ``None`` means the single row N = n_max."""
    real = args.real or args.seq == "vdc"
    xs = _load(args)
    if N_from is None:
        N_from = args.n_max
    elif N_from > args.n_max:
        raise ValueError(f"--n-from {N_from} exceeds --n-max {args.n_max}")
    if args.seq != "vdc":
        _check_guard(args)
    N_to = args.n_max
    if real:
        ys = _real_values(args, xs)
        return [real_pair_corr(ys, N, args.alpha, s)
                for N in range(N_from, N_to + 1) for s in args.s_list]
    if N_from == N_to:
        return [padic_pair_corr(xs, N_to, args.alpha, s) for s in args.s_list]
    return sweep(xs, args.alpha, args.s_list, N_from, N_to, threads=args.threads)


def _write_rows(args, rows) -> int:
    text = rows_to_csv(rows, _metadata(args))
    _emit(text, args.out)
    if args.format == "gnuplot":
        if args.out is None:
            raise ValueError("--format gnuplot needs --out")
        Path(args.out + ".gp").write_text(_gnuplot_script(args.out, args), encoding="utf-8")
    return EXIT_OK


def cmd_stats(args) -> int:
    return _write_rows(args, _stat_rows(args, None))


def cmd_sweep(args) -> int:
    return _write_rows(args, _stat_rows(args, args.n_from))


cmd_figure1 = cmd_sweep


def cmd_verify(args) -> int:
    results = run_verification(args.p, args.precision)
    lines = [f"verify p={args.p} m={args.precision}"]
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append(f"{status}  {res.name}  ({len(res.counterexamples)} counterexamples)")
        for cx in res.counterexamples[:5]:
            lines.append(f"      {cx}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_COUNTEREXAMPLE


COMMANDS = {
    "gen": cmd_gen,
    "stats": cmd_stats,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "figure1": cmd_figure1,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.precision is None:
        args.precision = DEFAULT_PRECISION.get(args.command, 32)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, TypeError, OSError) as exc:
        print(f"padic-ppc: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
