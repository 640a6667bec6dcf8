"""
Counting binary self-orthogonal codes

The closed-form counts (self-dual codes containing a given code, the
dimension recursion and its two corollaries) are evaluated exactly as
printed and set against brute-force oracles that enumerate every subspace
once through its reduced echelon form. Disagreements are reported, never
corrected.
"""
import itertools
import logging
import math
from fractions import Fraction
from math import comb
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.codes import LinearCode, binary_field, make_code
from src.config import config
from src.gf2la import BitMatrix, is_self_orthogonal, min_distance
from src.helper.exceptions import (
    FormulaDefectError,
    ParameterError,
    VerificationError,
)
from src.worker import ShardPool, split_range

logger = logging.getLogger(__name__)

MAX_ORACLE_N = 10
MAX_WITNESS_N = 20
MAX_WITNESS_K = 10
# up to this length witnesses are searched exhaustively
EXHAUSTIVE_WITNESS_N = 12
# echelon-form assignments evaluated per numpy batch
ECHELON_CHUNK = 1 << 16

COUNT_HEADER = ["quantity", "n", "k", "s", "paper_value", "oracle_value", "agrees"]

Vector = Union[int, Sequence[int]]


class CountReport(BaseModel):
    """A printed count next to its exhaustive oracle value"""

    model_config = ConfigDict(frozen=True)

    quantity: str
    n: int
    k: Optional[int] = None
    s: Optional[int] = None
    paper_value: int
    oracle_value: Optional[int] = None

    @property
    def agrees(self) -> Optional[bool]:
        if self.oracle_value is None:
            return None
        return self.paper_value == self.oracle_value

    def csv_row(self) -> List[str]:
        def cell(value) -> str:
            if value is None:
                return ""
            if isinstance(value, bool):
                return "true" if value else "false"
            return str(value)

        return [cell(v) for v in (self.quantity, self.n, self.k, self.s,
                                  self.paper_value, self.oracle_value, self.agrees)]


def _require_even(n: int) -> int:
    if n < 2 or n % 2:
        raise ParameterError(f"code length n must be even and >= 2, got {n}")
    return n // 2


def _mask(v: Vector, n: int) -> int:
    """Bit vector as an int, coordinate j in bit j"""
    if isinstance(v, (int, np.integer)):
        value = int(v)
    else:
        bits = list(v)
        if len(bits) != n:
            raise ParameterError(f"vector has length {len(bits)}, expected {n}")
        value = sum((int(b) & 1) << j for j, b in enumerate(bits))
    if not 0 <= value < 1 << n:
        raise ParameterError(f"vector {value:#x} does not fit length {n}")
    return value


def _code_masks(code: Union[LinearCode, Iterable[Vector]], n: int) -> List[int]:
    if isinstance(code, LinearCode):
        if not code.is_binary or code.n != n:
            raise ParameterError(f"{code} is not a binary code of length {n}")
        return [_mask(row, n) for row in code.gen.to_dense()]
    return [_mask(v, n) for v in code]


# ======================
# PRINTED FORMULAS
# ======================

def lemma8_count(n: int, s: int) -> int:
    """(2^(h-s)+1)(2^(h-s-1)+1)...(2+1) with h = n/2; the empty product is 1"""
    h = _require_even(n)
    if not 0 <= s <= h:
        raise ParameterError(f"need 0 <= s <= n/2, got s={s}")
    return math.prod((1 << i) + 1 for i in range(1, h - s + 1))


def sigma(n: int, k: int, s: int) -> int:
    """
    The dimension recursion sigma(n,k+1,s) = sigma(n,k,s)(2^(n-2k)-1)/(2^(k-s+1)-1)
    from sigma(n,s,s) = 1. A non-integral step raises FormulaDefectError.
    """
    h = _require_even(n)
    if not 0 <= s <= k <= h:
        raise ParameterError(f"need 0 <= s <= k <= n/2, got s={s}, k={k}")
    value = Fraction(1)
    for j in range(s, k):
        value *= Fraction((1 << (n - 2 * j)) - 1, (1 << (j - s + 1)) - 1)
        if value.denominator != 1:
            raise FormulaDefectError(f"sigma({n},{j + 1},{s}) = {value} is not an integer")
    return int(value)


def _ratio_of_products(numerators: Iterable[int], denominators: Iterable[int], name: str) -> int:
    value = Fraction(math.prod(numerators), math.prod(denominators))
    if value.denominator != 1:
        raise FormulaDefectError(f"{name} evaluates to the non-integer {value}")
    return int(value)


def count_so(n: int, k: int) -> int:
    """(2^n-1)(2^(n-2)-1)...(2^(n-2(k-1))-1) / (2^k-1)...(2-1)"""
    h = _require_even(n)
    if not 1 <= k <= h:
        raise ParameterError(f"need 1 <= k <= n/2, got k={k}")
    return _ratio_of_products(
        ((1 << (n - 2 * i)) - 1 for i in range(k)),
        ((1 << i) - 1 for i in range(1, k + 1)),
        f"count_so({n},{k})",
    )


def count_so_containing_v(n: int, k: int) -> int:
    """(2^(n-2)-1)...(2^(n-2(k-1))-1) / (2^(k-1)-1)...(2-1)"""
    h = _require_even(n)
    if not 1 <= k <= h:
        raise ParameterError(f"need 1 <= k <= n/2, got k={k}")
    return _ratio_of_products(
        ((1 << (n - 2 * i)) - 1 for i in range(1, k)),
        ((1 << i) - 1 for i in range(1, k)),
        f"count_so_containing_v({n},{k})",
    )


# ======================
# ORACLES
# ======================

def _check_oracle(n: int, k: int) -> None:
    if not 1 <= n <= MAX_ORACLE_N:
        raise ParameterError(f"subspace enumeration is limited to n <= {MAX_ORACLE_N}, got n={n}")
    if not 0 <= k <= n:
        raise ParameterError(f"need 0 <= k <= n, got k={k}")


def _free_slots(n: int, pivots: Tuple[int, ...]) -> List[Tuple[int, int]]:
    """(row, column) entries left free by the reduced echelon form"""
    pivot_set = set(pivots)
    return [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivot_set]


def _echelon_rows(pivots: Tuple[int, ...], slots: List[Tuple[int, int]], lo: int, hi: int) -> np.ndarray:
    assignment = np.arange(lo, hi, dtype=np.int64)
    rows = np.zeros((hi - lo, len(pivots)), dtype=np.int64)
    for i, p in enumerate(pivots):
        rows[:, i] = 1 << p
    for b, (i, c) in enumerate(slots):
        rows[:, i] |= ((assignment >> b) & 1) << c
    return rows


def _so_mask(rows: np.ndarray) -> np.ndarray:
    ok = np.ones(rows.shape[0], dtype=bool)
    k = rows.shape[1]
    for i in range(k):
        for j in range(i, k):
            ok &= (np.bitwise_count(rows[:, i] & rows[:, j]) & 1) == 0
    return ok


def _contains_mask(rows: np.ndarray, pivots: Tuple[int, ...], v: int) -> np.ndarray:
    # in reduced echelon form v can only be the sum of the rows whose pivots it hits
    selected = [i for i, p in enumerate(pivots) if v >> p & 1]
    if selected:
        combination = np.bitwise_xor.reduce(rows[:, selected], axis=1)
    else:
        combination = np.zeros(rows.shape[0], dtype=np.int64)
    return combination == v


def _count_subspaces(n: int, k: int, required: Sequence[int], jobs: Optional[int] = None) -> int:
    """Self-orthogonal k-dimensional subspaces of GF(2)^n containing every vector in required"""
    units = []
    for pivots in itertools.combinations(range(n), k):
        slots = _free_slots(n, pivots)
        total = 1 << len(slots)
        for lo in range(0, total, ECHELON_CHUNK):
            units.append((pivots, slots, lo, min(total, lo + ECHELON_CHUNK)))

    def count(shard: Tuple[int, int]) -> int:
        found = 0
        for pivots, slots, lo, hi in units[shard[0]:shard[1]]:
            rows = _echelon_rows(pivots, slots, lo, hi)
            ok = _so_mask(rows)
            for v in required:
                ok &= _contains_mask(rows, pivots, v)
            found += int(ok.sum())
        return found

    shards = split_range(0, len(units), jobs or config.jobs)
    logger.debug(f"Enumerating [{n},{k}] echelon forms in {len(units)} batches")
    return sum(ShardPool(jobs).map(count, shards))


def enumerate_so(n: int, k: int, jobs: Optional[int] = None) -> int:
    """Exact number of self-orthogonal [n, k] binary codes"""
    _check_oracle(n, k)
    return _count_subspaces(n, k, [], jobs)


def enumerate_so_containing(n: int, k: int, v: Vector, jobs: Optional[int] = None) -> int:
    """Exact number of self-orthogonal [n, k] binary codes containing v"""
    _check_oracle(n, k)
    return _count_subspaces(n, k, [_mask(v, n)], jobs)


def enumerate_selfdual_containing(n: int, code: Union[LinearCode, Iterable[Vector]],
                                  jobs: Optional[int] = None) -> int:
    """Exact number of self-dual length-n codes containing every vector of code"""
    h = _require_even(n)
    _check_oracle(n, h)
    required = [v for v in _code_masks(code, n) if v]
    return _count_subspaces(n, h, required, jobs)


def _canonical(rows: Iterable[int]) -> Tuple[int, ...]:
    """Reduced echelon basis of a span of int rows, sorted"""
    basis: List[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis = [min(b, b ^ row) for b in basis]
            basis.append(row)
    return tuple(sorted(basis))


def count_so_by_extension(n: int, k: int) -> int:
    """
    Independent oracle: grow every self-orthogonal code one even vector of
    its dual at a time and deduplicate by canonical basis
    """
    _check_oracle(n, k)
    even = [v for v in range(1, 1 << n) if not bin(v).count("1") & 1]
    layer = {()}
    for _ in range(k):
        grown = set()
        for basis in layer:
            span = {0}
            for b in basis:
                span |= {x ^ b for x in span}
            for v in even:
                if v in span or any(bin(v & b).count("1") & 1 for b in basis):
                    continue
                grown.add(_canonical(basis + (v,)))
        layer = grown
    return len(layer)


# ======================
# REPORTS
# ======================

def standard_subcode(n: int, s: int, with_all_ones: bool = True) -> List[int]:
    """
    A fixed self-orthogonal [n, s] code: the all-ones vector plus weight-2
    blocks on coordinates (2i, 2i+1), or blocks only
    """
    h = _require_even(n)
    blocks = [0b11 << (2 * i) for i in range(h)]
    if with_all_ones:
        if not 0 <= s <= h:
            raise ParameterError(f"need 0 <= s <= n/2, got s={s}")
        return ([(1 << n) - 1] + blocks[:s - 1]) if s else []
    if not 0 <= s < h:
        raise ParameterError(f"without the all-ones vector s must be < n/2, got s={s}")
    return blocks[:s]


def lemma8_report(n: int, code: Union[LinearCode, Iterable[Vector]],
                  jobs: Optional[int] = None) -> CountReport:
    masks = _code_masks(code, n)
    s = len(_canonical(masks))
    if any(bin(a & b).count("1") & 1 for a in masks for b in masks):
        raise ParameterError("the contained code must be self-orthogonal")
    return CountReport(quantity="Lemma8", n=n, k=n // 2, s=s, paper_value=lemma8_count(n, s),
                       oracle_value=enumerate_selfdual_containing(n, masks, jobs))


def lemma8_study(n_values: Sequence[int] = (4, 6, 8), jobs: Optional[int] = None) -> List[Tuple[bool, CountReport]]:
    """
    Self-dual counts for contained codes with and without the all-ones
    vector; returns (contains_all_ones, report) pairs
    """
    results = []
    for n in n_values:
        h = _require_even(n)
        for s in range(1, h):
            for with_ones in (True, False):
                report = lemma8_report(n, standard_subcode(n, s, with_ones), jobs)
                results.append((with_ones, report))
                icon = "✅" if report.agrees else "❌"
                logger.info(f"{icon} n={n} s={s} all-ones={with_ones}: "
                            f"formula {report.paper_value}, oracle {report.oracle_value}")
    return results


def count_reports(n: int, k: Optional[int] = None, s: Optional[int] = None,
                  oracle: bool = False, jobs: Optional[int] = None) -> List[CountReport]:
    """
    Rows for the count command: the recursion (when s is given), both
    corollaries and the self-dual count, for one k or every 1 <= k <= n/2
    """
    h = _require_even(n)
    ks = [k] if k is not None else list(range(1, h + 1))
    if oracle:
        _check_oracle(n, h)
    reports = []
    for dim in ks:
        if not 1 <= dim <= h:
            raise ParameterError(f"need 1 <= k <= n/2, got k={dim}")
        if s is not None and s <= dim:
            contained = standard_subcode(n, s)
            reports.append(CountReport(
                quantity="Eq8", n=n, k=dim, s=s, paper_value=sigma(n, dim, s),
                oracle_value=_count_subspaces(n, dim, contained, jobs) if oracle else None,
            ))
        reports.append(CountReport(
            quantity="Eq9", n=n, k=dim, paper_value=count_so(n, dim),
            oracle_value=enumerate_so(n, dim, jobs) if oracle else None,
        ))
        if n >= 4:
            # a fixed even vector other than 0 and the all-ones vector
            v = 0b11
            reports.append(CountReport(
                quantity="Eq10", n=n, k=dim, s=1, paper_value=count_so_containing_v(n, dim),
                oracle_value=enumerate_so_containing(n, dim, v, jobs) if oracle else None,
            ))
    s_lemma = 1 if s is None else s
    contained = standard_subcode(n, s_lemma)
    reports.append(CountReport(
        quantity="Lemma8", n=n, k=h, s=s_lemma, paper_value=lemma8_count(n, s_lemma),
        oracle_value=enumerate_selfdual_containing(n, contained, jobs) if oracle else None,
    ))
    for report in reports:
        if report.agrees is False:
            logger.warning(f"⚠️ {report.quantity} n={n} k={report.k}: formula "
                           f"{report.paper_value} != oracle {report.oracle_value}")
    return reports


def count_csv(reports: Sequence[CountReport]) -> str:
    lines = [",".join(COUNT_HEADER)]
    lines.extend(",".join(r.csv_row()) for r in reports)
    return "\n".join(lines) + "\n"


# ======================
# EXISTENCE
# ======================

def _even_binomial_sum(n: int, r: int) -> int:
    """C(n,2) + C(n,4) + ... + C(n,2(r-1))"""
    return sum(comb(n, 2 * i) for i in range(1, r))


def theorem1_holds(n: int, k: int, r: int) -> bool:
    """The counting condition for an [n, k] self-orthogonal code of distance >= 2r"""
    _require_even(n)
    if k < 1 or r < 1:
        raise ParameterError(f"need k >= 1 and r >= 1, got k={k}, r={r}")
    return _even_binomial_sum(n, r) < Fraction((1 << n) - 1, (1 << k) - 1)


def gv_so_dimension(n: int, r: int) -> int:
    """floor(log2((2^n - 1) / (C(n,2) + ... + C(n,2(r-1)))))"""
    _require_even(n)
    if r < 2:
        raise ParameterError(f"r must be >= 2, got {r}")
    total = _even_binomial_sum(n, r)
    if total == 0:
        raise ParameterError(f"empty binomial sum for n={n}, r={r}")
    numerator = (1 << n) - 1
    if numerator >= total:
        return (numerator // total).bit_length() - 1
    j = 0
    while numerator << j < total:
        j += 1
    return -j


def r_for_delta(n: int, delta: Union[float, Fraction]) -> int:
    """floor(delta * n / 2); floats are read as their decimal representation"""
    delta = Fraction(str(delta)) if isinstance(delta, float) else Fraction(delta)
    if not 0 <= delta <= Fraction(1, 2):
        raise ParameterError(f"δ must lie in [0, 1/2], got {delta}")
    return math.floor(delta * n / 2)


class GVSeriesPoint(NamedTuple):
    n: int
    r: int
    k: int
    rate: float


def gv_so_rate_series(delta: Union[float, Fraction], n_values: Sequence[int]) -> List[GVSeriesPoint]:
    """k/n from the dimension formula along growing n (approaches 1 - H2(δ))"""
    points = []
    for n in n_values:
        r = r_for_delta(n, delta)
        if r < 2:
            logger.debug(f"Skipping n={n}: r={r} < 2")
            continue
        k = gv_so_dimension(n, r)
        points.append(GVSeriesPoint(n, r, k, k / n))
    return points


# ======================
# WITNESSES
# ======================

def all_even_weight(code: LinearCode) -> bool:
    """Every codeword has even weight (weight parity is linear, so rows suffice)"""
    if not code.is_binary:
        raise ParameterError("even-weight check applies to binary codes")
    return bool(np.all(code.gen.weights() % 2 == 0))


def _weight(v: int) -> int:
    return bin(v).count("1")


def _extend_exhaustive(n: int, k: int, d: int) -> Optional[List[int]]:
    candidates = [v for v in range(1, 1 << n) if _weight(v) % 2 == 0 and _weight(v) >= d]

    def search(basis: List[int], span: List[int], start: int) -> Optional[List[int]]:
        if len(basis) == k:
            return basis
        for index in range(start, len(candidates)):
            v = candidates[index]
            if any(_weight(v & b) & 1 for b in basis):
                continue
            if any(_weight(v ^ c) < d for c in span):
                continue
            found = search(basis + [v], span + [v ^ c for c in span], index + 1)
            if found is not None:
                return found
        return None

    # coordinate permutations preserve both properties, so the first vector
    # can be taken as a prefix block of ones
    for w in range(max(d, 2) + (max(d, 2) % 2), n + 1, 2):
        first = (1 << w) - 1
        found = search([first], [0, first], candidates.index(first) + 1)
        if found is not None:
            return found
    return None


def _extend_random(n: int, k: int, d: int, budget: int, rng: np.random.Generator) -> Optional[List[int]]:
    basis: List[int] = []
    span = [0]
    for _ in range(budget):
        if len(basis) == k:
            return basis
        v = int(rng.integers(1, 1 << n))
        if _weight(v) % 2 or _weight(v) < d:
            continue
        if any(_weight(v & b) & 1 for b in basis) or any(_weight(v ^ c) < d for c in span):
            continue
        basis.append(v)
        span = span + [v ^ c for c in span]
    return basis if len(basis) == k else None


def find_so_code(n: int, k: int, d_target: int, budget: Optional[int] = None,
                 seed: int = 0) -> Optional[LinearCode]:
    """
    A verified [n, k] self-orthogonal code with minimum distance >= d_target,
    or None. Lengths up to 12 are searched exhaustively; longer ones by a
    seeded greedy extension limited by budget draws.
    """
    if not 1 <= n <= MAX_WITNESS_N or not 1 <= k <= MAX_WITNESS_K:
        raise ParameterError(f"witness search needs n <= {MAX_WITNESS_N}, 1 <= k <= {MAX_WITNESS_K}")
    if 2 * k > n or d_target > n:
        logger.info(f"No [{n},{k}] self-orthogonal code with d >= {d_target} can exist")
        return None
    if n <= EXHAUSTIVE_WITNESS_N:
        rows = _extend_exhaustive(n, k, d_target)
    else:
        rows = _extend_random(n, k, d_target, budget or config.search_budget, np.random.default_rng(seed))
    if rows is None:
        logger.info(f"No [{n},{k}] self-orthogonal witness with d >= {d_target} found")
        return None

    code = make_code(binary_field(), BitMatrix.from_rows(rows, n), label="witness")
    distance = min_distance(code)
    if not is_self_orthogonal(code.gen) or distance < d_target:
        raise VerificationError(f"witness {code} fails verification (d={distance})")
    logger.info(f"✅ Found self-orthogonal [{n},{k},{distance}] witness")
    return code.model_copy(update={"claimed_d": distance})
