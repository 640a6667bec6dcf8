"""
Command-line front end

Every subcommand writes its result (CodeFile, CSV or a short report) to
stdout and logs to stderr. Exit codes: 0 success, 1 verification failure,
2 usage error.
"""
import argparse
import logging
import sys
from fractions import Fraction
from typing import List, Optional, TextIO

from src.bounds import figure1_csv, figure1_data
from src.code_file import emit_code, read_code
from src.codes import LinearCode, contains, dual_code, rm_code, rs_code, self_orthogonal_outer
from src.config import config
from src.construct_a import ConcatenationScheme, concatenate, table1, table1_csv
from src.construct_b import ExpansionScheme, expand, table2, table2_csv
from src.counting import (
    all_even_weight,
    count_csv,
    count_reports,
    find_so_code,
    gv_so_dimension,
    r_for_delta,
    theorem1_holds,
    MAX_WITNESS_K,
    MAX_WITNESS_N,
)
from src.galois import element_to_hex, field_make, polynomial_basis, self_dual_basis
from src.gf2la import is_self_orthogonal, min_distance
from src.helper.exceptions import (
    CodeFileError,
    ConfigurationError,
    DimensionMismatchError,
    EnumerationCapError,
    FieldError,
    FormulaDefectError,
    ParameterError,
    SearchExhaustedError,
    VerificationError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2

USAGE_ERRORS = (
    ParameterError, CodeFileError, ConfigurationError,
    DimensionMismatchError, EnumerationCapError, FieldError,
)
VERIFICATION_ERRORS = (VerificationError, SearchExhaustedError, FormulaDefectError)

EPILOG = """\
code files:
  '#' lines are comments; the header is 'q n k [modulus]'; then k rows of n
  symbols. A symbol of GF(2^m) is written in lowercase hex, bit i of the
  value being the coefficient of x^i in the polynomial basis of the field
  modulus (default: the least irreducible polynomial of degree m).
"""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting"""

    def error(self, message: str):
        raise ParameterError(f"{self.prog}: {message}")


def _log2_field_size(q: int) -> int:
    if q < 2 or q & (q - 1):
        raise ParameterError(f"q={q} is not a power of two")
    return q.bit_length() - 1


def _hex_int(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex value: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="socodes", description="Binary self-orthogonal code constructions and bounds",
                     epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", help="dotenv-format configuration file")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_field = sub.add_parser("field", help="print a field, its self-dual basis and Gram matrix")
    p_field.add_argument("--m", type=int, required=True)
    p_field.add_argument("--modulus", type=_hex_int, help="irreducible modulus in hex")

    p_code = sub.add_parser("code", help="emit a code file")
    families = p_code.add_subparsers(dest="family", required=True, parser_class=_Parser)
    p_rm = families.add_parser("rm", help="Reed-Muller code RM(r, m)")
    p_rm.add_argument("--r", type=int, required=True)
    p_rm.add_argument("--m", type=int, required=True)
    p_rs = families.add_parser("rs", help="evaluation code on the first n field elements")
    p_so = families.add_parser("so-outer", help="self-orthogonal GRS code over GF(2^(2t))")
    for p in (p_rs, p_so):
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
    p_so.add_argument("--seed", type=int, required=True)
    p_so.add_argument("--budget", type=int)
    for p in (p_rm, p_rs, p_so):
        p.add_argument("--out", help="write to a file instead of stdout")

    p_check = sub.add_parser("check", help="report rank, self-orthogonality and even weights")
    p_check.add_argument("file", nargs="?", default="-", help="code file or '-' for stdin")
    p_check.add_argument("--expect-so", action="store_true", help="exit 1 unless self-orthogonal")
    p_check.add_argument("--expect-self-dual", action="store_true", help="exit 1 unless self-dual")

    p_mindist = sub.add_parser("mindist", help="exact minimum distance by enumeration")
    p_mindist.add_argument("file", nargs="?", default="-")
    p_mindist.add_argument("--jobs", type=int)

    p_concat = sub.add_parser("concat", help="concatenate an outer code with a binary inner code")
    p_concat.add_argument("--outer", required=True)
    p_concat.add_argument("--inner", required=True)
    p_concat.add_argument("--basis", choices=["self-dual", "polynomial"], default="self-dual")
    p_concat.add_argument("--out")

    p_expand = sub.add_parser("expand", help="binary expansion through the self-dual basis")
    p_expand.add_argument("file", nargs="?", default="-")
    p_expand.add_argument("--out")

    p_tables = sub.add_parser("tables", help="recomputed line tables as CSV")
    p_tables.add_argument("--which", type=int, choices=[1, 2], required=True)

    p_count = sub.add_parser("count", help="closed-form counts with optional oracle values")
    p_count.add_argument("--n", type=int, required=True)
    p_count.add_argument("--k", type=int)
    p_count.add_argument("--s", type=int)
    p_count.add_argument("--oracle", action="store_true")
    p_count.add_argument("--jobs", type=int)

    p_gv = sub.add_parser("gv", help="existence condition and witness for relative distance δ")
    p_gv.add_argument("--n", type=int, required=True)
    p_gv.add_argument("--delta", type=Fraction, required=True)
    p_gv.add_argument("--seed", type=int, required=True)

    p_bounds = sub.add_parser("bounds", help="curve and envelope data as CSV")
    p_bounds.add_argument("--samples", type=int, default=101)
    p_bounds.add_argument("--t-max", type=int)
    p_bounds.add_argument("--out")
    return parser


def setup_logging(verbose: int) -> None:
    level = config.log_level
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(level)


def _write(text: str, out: Optional[str], stdout: TextIO) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info(f"✅ Wrote {out}")
    else:
        stdout.write(text)


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


# ======================
# COMMANDS
# ======================

def cmd_field(args, stdin: TextIO, stdout: TextIO) -> int:
    spec = field_make(args.m, args.modulus)
    basis = self_dual_basis(spec)
    print(f"GF(2^{spec.m}) modulus {spec.modulus:#x}", file=stdout)
    print(f"primitive element: {element_to_hex(spec.primitive_element())}", file=stdout)
    print("self-dual basis: " + " ".join(element_to_hex(e) for e in basis.elements), file=stdout)
    print("gram:", file=stdout)
    for row in basis.gram_matrix():
        print(" ".join(str(int(b)) for b in row), file=stdout)
    return EXIT_OK


def cmd_code(args, stdin: TextIO, stdout: TextIO) -> int:
    if args.family == "rm":
        code = rm_code(args.r, args.m)
    elif args.family == "rs":
        code = rs_code(field_make(_log2_field_size(args.q)), args.n, args.k)
    else:
        spec = field_make(_log2_field_size(args.q))
        code = self_orthogonal_outer(spec, args.n, args.k, args.seed, args.budget)
    _write(emit_code(code), args.out, stdout)
    return EXIT_OK


def check_report(code: LinearCode) -> List[str]:
    so = is_self_orthogonal(code.gen)
    in_dual = contains(dual_code(code), code)
    if so != in_dual:
        raise VerificationError("Gram test and dual containment disagree")
    lines = [
        f"[{code.n},{code.k}] self-orthogonal: {_yes(so)}, self-dual: {_yes(so and 2 * code.k == code.n)}",
        f"rank: {code.k}",
        f"field: GF({code.spec.q})",
        f"dual contains code: {_yes(in_dual)}",
    ]
    if code.is_binary:
        even = all_even_weight(code)
        lines.append(f"even weight: {_yes(even)}")
        if so and not even:
            raise VerificationError(f"{code} is self-orthogonal but has an odd-weight codeword")
    return lines


def cmd_check(args, stdin: TextIO, stdout: TextIO) -> int:
    code = read_code(args.file, stdin)
    for line in check_report(code):
        print(line, file=stdout)
    so = is_self_orthogonal(code.gen)
    if args.expect_so and not so:
        logger.error(f"❌ {code} is not self-orthogonal")
        return EXIT_VERIFICATION
    if args.expect_self_dual and not (so and 2 * code.k == code.n):
        logger.error(f"❌ {code} is not self-dual")
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_mindist(args, stdin: TextIO, stdout: TextIO) -> int:
    code = read_code(args.file, stdin)
    print(min_distance(code, jobs=args.jobs), file=stdout)
    return EXIT_OK


def cmd_concat(args, stdin: TextIO, stdout: TextIO) -> int:
    outer = read_code(args.outer, stdin)
    inner = read_code(args.inner, stdin)
    symbol_map = polynomial_basis(outer.spec) if args.basis == "polynomial" else None
    code = concatenate(ConcatenationScheme(outer=outer, inner=inner, symbol_map=symbol_map))
    _write(emit_code(code), args.out, stdout)
    return EXIT_OK


def cmd_expand(args, stdin: TextIO, stdout: TextIO) -> int:
    code = read_code(args.file, stdin)
    expanded = expand(code, ExpansionScheme.default(code.spec))
    _write(emit_code(expanded), args.out, stdout)
    return EXIT_OK


def cmd_tables(args, stdin: TextIO, stdout: TextIO) -> int:
    if args.which == 1:
        stdout.write(table1_csv(table1()))
    else:
        stdout.write(table2_csv(table2()))
    return EXIT_OK


def cmd_count(args, stdin: TextIO, stdout: TextIO) -> int:
    reports = count_reports(args.n, args.k, args.s, oracle=args.oracle, jobs=args.jobs)
    stdout.write(count_csv(reports))
    return EXIT_OK


def cmd_gv(args, stdin: TextIO, stdout: TextIO) -> int:
    r = r_for_delta(args.n, args.delta)
    if r < 2 and args.n < 8:
        raise ParameterError(f"n={args.n} is too short: δ <= 1/2 allows distance >= 4 only for n >= 8")
    if r < 2:
        raise ParameterError(
            f"δ={args.delta} is too small for n={args.n}: δ must lie in [{Fraction(4, args.n)}, 1/2]"
        )
    k = gv_so_dimension(args.n, r)
    holds = k >= 1 and theorem1_holds(args.n, k, r)
    print(f"r: {r}", file=stdout)
    print(f"k: {k}", file=stdout)
    print(f"condition holds: {'true' if holds else 'false'}", file=stdout)
    if holds and args.n <= MAX_WITNESS_N and 1 <= k <= MAX_WITNESS_K:
        witness = find_so_code(args.n, k, 2 * r, seed=args.seed)
        if witness is None:
            print("witness: none found", file=stdout)
        else:
            print(f"witness: [{witness.n},{witness.k},{witness.claimed_d}]", file=stdout)
            stdout.write(emit_code(witness))
    return EXIT_OK


def cmd_bounds(args, stdin: TextIO, stdout: TextIO) -> int:
    _write(figure1_csv(figure1_data(args.samples, args.t_max)), args.out, stdout)
    return EXIT_OK


COMMANDS = {
    "field": cmd_field,
    "code": cmd_code,
    "check": cmd_check,
    "mindist": cmd_mindist,
    "concat": cmd_concat,
    "expand": cmd_expand,
    "tables": cmd_tables,
    "count": cmd_count,
    "gv": cmd_gv,
    "bounds": cmd_bounds,
}


def run(argv: Optional[List[str]] = None, stdin: Optional[TextIO] = None,
        stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Parse argv, run one subcommand and return the exit code"""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    except ParameterError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE

    try:
        if args.config:
            config.load(args.config)
        setup_logging(args.verbose)
        logger.debug(f"Running {args.command} (config: {config.source or 'defaults'})")
        return COMMANDS[args.command](args, stdin, stdout)
    except USAGE_ERRORS as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE
    except VERIFICATION_ERRORS as e:
        logger.error(f"❌ {e}")
        print(f"verification failed: {e}", file=stderr)
        return EXIT_VERIFICATION
