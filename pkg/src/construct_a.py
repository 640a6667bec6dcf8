"""
Construction A: concatenation of an outer code over GF(2^{2t}) with a
binary self-orthogonal inner code of dimension 2t, plus the (R, delta)
lines the construction yields and the recomputed inner-code table.
"""
import csv
import io
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.code_file import read_code
from src.codes import CodeParams, LinearCode, golay_code, make_code, rm_self_dual_params, shorten
from src.config import config
from src.galois import TABLE_MAX_M, Basis, coords_table, self_dual_basis
from src.gf2la import BitMatrix, is_self_orthogonal, min_distance
from src.helper.exceptions import (
    DimensionMismatchError,
    EnumerationCapError,
    ParameterError,
    VerificationError,
)

logger = logging.getLogger(__name__)


# ======================
# CONCATENATION
# ======================

class ConcatenationScheme(BaseModel):
    """
    Outer code over GF(2^m), binary inner [n, m] code and the basis used to
    turn outer symbols into inner messages (self-dual basis when omitted)
    """

    model_config = ConfigDict(frozen=True)

    outer: LinearCode
    inner: LinearCode
    symbol_map: Optional[Basis] = None
    require_self_orthogonal: bool = False

    @model_validator(mode="after")
    def check_scheme(self) -> "ConcatenationScheme":
        if not self.inner.is_binary:
            raise DimensionMismatchError(f"inner code {self.inner} is not binary")
        if self.inner.k != self.outer.spec.m:
            raise DimensionMismatchError(
                f"inner dimension {self.inner.k} != extension degree {self.outer.spec.m} of the outer field"
            )
        if self.symbol_map is not None and self.symbol_map.spec != self.outer.spec:
            raise DimensionMismatchError("symbol map basis is over a different field than the outer code")
        if self.require_self_orthogonal and not is_self_orthogonal(self.inner.gen):
            raise VerificationError(f"inner code {self.inner} is not self-orthogonal")
        return self

    @property
    def basis(self) -> Basis:
        return self.symbol_map if self.symbol_map is not None else self_dual_basis(self.outer.spec)


def _inner_codewords(inner: LinearCode) -> np.ndarray:
    """Inner encoding of every message, row c = sum of generator rows selected by c"""
    rows = inner.gen.to_dense()
    table = np.zeros((1 << inner.k, inner.n), dtype=np.uint8)
    for i, row in enumerate(rows):
        half = 1 << i
        table[half:2 * half] = table[:half] ^ row
    return table


def _outer_symbols(outer: LinearCode) -> np.ndarray:
    if isinstance(outer.gen, BitMatrix):
        return outer.gen.to_dense().astype(np.int64)
    return outer.gen.entries


def concatenate(scheme: ConcatenationScheme) -> LinearCode:
    """
    Binary [n*N, m*K] code: each outer codeword c maps to the concatenation
    of the inner encodings of coords(c_j). The GF(2)-generating set is
    e * g for every basis element e and outer generator row g.
    """
    outer, inner, basis = scheme.outer, scheme.inner, scheme.basis
    spec = outer.spec
    if spec.m > TABLE_MAX_M:
        raise ParameterError(f"concatenation needs outer fields with m <= {TABLE_MAX_M}")
    encoded = _inner_codewords(inner)
    to_message = coords_table(basis)

    rows = []
    for g in _outer_symbols(outer):
        for e in basis.elements:
            rows.append(encoded[to_message[spec.mul_array(e, g)]].reshape(-1))
    dense = np.array(rows, dtype=np.uint8).reshape(len(rows), outer.n * inner.n)

    claimed = None
    if outer.claimed_d is not None and inner.claimed_d is not None:
        claimed = outer.claimed_d * inner.claimed_d
    code = make_code(inner.spec, dense, claimed_d=claimed,
                     label=f"{outer.label or 'outer'} o {inner.label or 'inner'}")
    if code.k != spec.m * outer.k:
        raise VerificationError(f"concatenation has rank {code.k}, expected {spec.m * outer.k}")
    logger.info(f"✅ Concatenated {outer} with {inner} -> {code}")
    return code


def predict_params(outer: Union[LinearCode, CodeParams], inner: Union[LinearCode, CodeParams],
                   extension_degree: Optional[int] = None) -> CodeParams:
    """
    [N, K, D] over GF(2^k) with inner [n, k, d] gives [n*N, k*K, >= d*D].

    Args:
        outer: outer code or its parameters
        inner: inner code or its parameters
        extension_degree: degree of the outer field over GF(2); read from the
            outer code when a LinearCode is given
    """
    if isinstance(outer, LinearCode):
        extension_degree = outer.spec.m
    outer_params = outer.params if isinstance(outer, LinearCode) else CodeParams(*outer)
    inner_params = inner.params if isinstance(inner, LinearCode) else CodeParams(*inner)
    if extension_degree is None:
        raise ParameterError("extension degree of the outer field is required for bare parameters")
    if inner_params.k != extension_degree:
        raise DimensionMismatchError(
            f"inner dimension {inner_params.k} != outer extension degree {extension_degree}"
        )
    distance = None
    if outer_params.d is not None and inner_params.d is not None:
        distance = outer_params.d * inner_params.d
    return CodeParams(outer_params.n * inner_params.n, outer_params.k * inner_params.k, distance)


# ======================
# BOUND LINES
# ======================

class BoundLine(BaseModel):
    """The line R + slope * delta = intercept in exact rationals"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    slope: Fraction
    intercept: Fraction
    label: str = ""

    @model_validator(mode="after")
    def check_line(self) -> "BoundLine":
        if self.slope <= 0:
            raise ParameterError(f"slope must be positive, got {self.slope}")
        if not 0 < self.intercept < 1:
            raise ParameterError(f"intercept must lie in (0, 1), got {self.intercept}")
        return self

    @property
    def delta_intercept(self) -> Fraction:
        """Relative distance reached at rate 0"""
        return self.intercept / self.slope

    def rate_at(self, delta: Fraction) -> Fraction:
        return self.intercept - self.slope * Fraction(delta)

    def delta_at(self, rate: Fraction) -> Fraction:
        rate = Fraction(rate)
        if not 0 <= rate <= self.intercept:
            raise ParameterError(f"rate {rate} outside [0, {self.intercept}] for {self}")
        return (self.intercept - rate) / self.slope

    def __str__(self) -> str:
        slope = str(self.slope) if self.slope.denominator == 1 else f"({self.slope})"
        return f"R + {slope}δ = {self.intercept}"


def line_eq5(t: int, inner_n: int, inner_d: int) -> BoundLine:
    """R + (2t/d)δ = (2t/n)(1 - 1/(2^t - 1)) for an inner [n, 2t, d] code"""
    if t < 1 or inner_n < 2 * t or inner_d < 1:
        raise ParameterError(f"need t >= 1, n >= 2t, d >= 1; got t={t}, n={inner_n}, d={inner_d}")
    if t == 1:
        raise ParameterError("t=1 gives intercept 0: outer codes over GF(4) add no rate here")
    slope = Fraction(2 * t, inner_d)
    intercept = Fraction(2 * t, inner_n) * (1 - Fraction(1, (1 << t) - 1))
    return BoundLine(slope=slope, intercept=intercept, label=f"concat-{inner_n}-{2 * t}-{inner_d}")


def line_eq6(m: int) -> BoundLine:
    """R + 2^((m-1)/2)δ = (1/2)(1 - 1/(2^(2^(m-2)) - 1)) for odd m"""
    if m < 3 or m % 2 == 0:
        raise ParameterError(f"m must be odd and >= 3, got {m}")
    slope = Fraction(1 << ((m - 1) // 2))
    intercept = Fraction(1, 2) * (1 - Fraction(1, (1 << (1 << (m - 2))) - 1))
    return BoundLine(slope=slope, intercept=intercept, label=f"concat-rm-m{m}")


# ======================
# INNER CODE TABLE
# ======================

# (inner n, inner k = 2t, inner d, printed slope, printed intercept)
PRINTED_TABLE1 = [
    (22, 10, 8, Fraction(5, 4), Fraction(150, 341)),
    (24, 12, 8, Fraction(3, 2), Fraction(31, 63)),
    (28, 14, 6, Fraction(7, 4), Fraction(63, 127)),
    (40, 20, 8, Fraction(5, 2), Fraction(511, 1023)),
    (44, 22, 8, Fraction(11, 4), Fraction(1023, 2047)),
    (64, 32, 12, Fraction(8, 3), Fraction(32767, 65535)),
]

TABLE1_HEADER = [
    "inner_n", "inner_k", "inner_d", "t",
    "slope_num", "slope_den", "intercept_num", "intercept_den", "flag",
]


class Table1Row(BaseModel):
    model_config = ConfigDict(frozen=True)

    inner: CodeParams
    t: int
    line: BoundLine
    printed: BoundLine
    flag: str
    inner_verified: Optional[bool] = None


def builtin_inner_code(n: int, k: int, d: int) -> Optional[LinearCode]:
    if (n, k, d) == (24, 12, 8):
        return golay_code()
    if (n, k, d) == (22, 10, 8):
        return shorten(golay_code(), [22, 23])
    return None


def inner_code_for_row(n: int, k: int, d: int) -> Optional[LinearCode]:
    """An [n, k, d] inner code from SOCODES_CODE_DIR, else a built-in one, else None"""
    if config.code_dir is not None:
        path = config.code_dir / f"inner_{n}_{k}_{d}.code"
        if path.is_file():
            logger.debug(f"Loading inner code from {path}")
            return read_code(path)
    return builtin_inner_code(n, k, d)


def verify_inner_code(code: LinearCode, n: int, k: int, d: int) -> Optional[bool]:
    """
    True when code is a self-orthogonal [n, k, d] code, None when the
    distance cannot be enumerated under the configured cap
    """
    if (code.n, code.k) != (n, k) or not code.is_binary:
        return False
    if not is_self_orthogonal(code.gen):
        return False
    try:
        return min_distance(code) == d
    except EnumerationCapError as e:
        logger.warning(f"⚠️ Distance of [{n},{k}] inner code not enumerable: {e}")
        return None


def _row(n: int, k: int, d: int, printed: BoundLine, flag: str, verify_inner: bool) -> Table1Row:
    t = k // 2
    verified = None
    if verify_inner:
        code = inner_code_for_row(n, k, d)
        if code is not None:
            verified = verify_inner_code(code, n, k, d)
            icon = "✅" if verified else "⚠️"
            logger.info(f"{icon} Inner code [{n},{k},{d}] verified: {verified}")
        else:
            logger.info(f"No inner code available for [{n},{k},{d}]; line from parameters only")
    return Table1Row(inner=CodeParams(n, k, d), t=t, line=line_eq5(t, n, d), printed=printed,
                     flag=flag, inner_verified=verified)


def table1(verify_inner: bool = True) -> List[Table1Row]:
    """
    Lines of the concatenation family for the tabulated inner codes,
    recomputed from [n, 2t, d] and flagged against the printed equation.
    A mismatching row whose printed slope is reproduced by another
    integral d gets an extra row flagged alt-d<d>.
    """
    rows = []
    for n, k, d, slope, intercept in PRINTED_TABLE1:
        t = k // 2
        printed = BoundLine(slope=slope, intercept=intercept, label=f"printed [{n},{k},{d}]")
        computed = line_eq5(t, n, d)
        match = (computed.slope, computed.intercept) == (slope, intercept)
        if not match:
            logger.warning(f"⚠️ Row [{n},{k},{d}]: computed {computed}, printed {printed}")
        rows.append(_row(n, k, d, printed, "match" if match else "mismatch", verify_inner))

        alt = Fraction(k) / slope
        if not match and alt.denominator == 1 and int(alt) != d:
            alt_d = int(alt)
            alt_line = line_eq5(t, n, alt_d)
            if (alt_line.slope, alt_line.intercept) == (slope, intercept):
                logger.info(f"Row [{n},{k},{d}] printed equation matches d={alt_d}")
                rows.append(_row(n, k, alt_d, printed, f"alt-d{alt_d}", verify_inner))
    return rows


def table1_csv(rows: Sequence[Table1Row]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE1_HEADER)
    for row in rows:
        writer.writerow([
            row.inner.n, row.inner.k, row.inner.d, row.t,
            row.line.slope.numerator, row.line.slope.denominator,
            row.line.intercept.numerator, row.line.intercept.denominator,
            row.flag,
        ])
    return buffer.getvalue()


# ======================
# RM INNER CODES
# ======================

class Example1Row(BaseModel):
    """Closed-form RM line next to the general line on the same parameters"""

    model_config = ConfigDict(frozen=True)

    m: int
    inner: CodeParams
    t: int
    closed_form: BoundLine
    general: BoundLine

    @property
    def intercept_match(self) -> bool:
        return self.closed_form.intercept == self.general.intercept

    @property
    def slope_ratio(self) -> Fraction:
        return self.closed_form.slope / self.general.slope


def example1_rows(m_values: Sequence[int] = (3, 5, 7)) -> List[Example1Row]:
    """
    Outer codes over GF(2^(2^(m-1))) with the self-dual RM((m-1)/2, m)
    inner code; the closed form is compared with the general line.
    """
    rows = []
    for m in m_values:
        inner = rm_self_dual_params(m)
        t = inner.k // 2
        row = Example1Row(m=m, inner=inner, t=t, closed_form=line_eq6(m),
                          general=line_eq5(t, inner.n, inner.d))
        if not row.intercept_match or row.slope_ratio != 1:
            logger.warning(
                f"⚠️ m={m}: closed form {row.closed_form} vs general {row.general} "
                f"(slope ratio {row.slope_ratio})"
            )
        rows.append(row)
    return rows
