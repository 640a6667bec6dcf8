"""
Construction B: binary expansion of codes over GF(2^{2t}) through a
self-dual basis. Expansion keeps self-orthogonality since the trace form
becomes the standard dot product in self-dual coordinates.
"""
import csv
import io
import logging
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.codes import LinearCode, binary_field, make_code
from src.construct_a import BoundLine
from src.galois import TABLE_MAX_M, Basis, FieldSpec, coords_table, self_dual_basis
from src.gf2la import BitMatrix
from src.helper.exceptions import DimensionMismatchError, ParameterError, VerificationError

logger = logging.getLogger(__name__)

TABLE2_T_RANGE = (2, 3, 4, 5)

TABLE2_HEADER = [
    "t", "slope", "intercept_num", "intercept_den", "delta_at_half_num", "delta_at_half_den",
]


# ======================
# EXPANSION
# ======================

class ExpansionScheme(BaseModel):
    """GF(2^{2t}) with a self-dual basis fixing the coordinate order of each block"""

    model_config = ConfigDict(frozen=True)

    spec: FieldSpec
    basis: Basis

    @model_validator(mode="after")
    def check_basis_self_dual(self) -> "ExpansionScheme":
        if self.spec.m % 2:
            raise ParameterError(f"expansion works over GF(2^(2t)); m={self.spec.m} is odd")
        if self.basis.spec != self.spec:
            raise DimensionMismatchError("basis belongs to a different field")
        if not self.basis.is_self_dual:
            raise VerificationError("expansion basis is not self-dual (Gram matrix != identity)")
        return self

    @classmethod
    def default(cls, spec: FieldSpec) -> "ExpansionScheme":
        return cls(spec=spec, basis=self_dual_basis(spec))


def expand_vectors(symbols, scheme: ExpansionScheme) -> np.ndarray:
    """
    Expand symbol vectors (..., n) to bit vectors (..., m*n); coordinate j
    fills bits [m*j, m*(j+1)) in basis order
    """
    m = scheme.spec.m
    if m > TABLE_MAX_M:
        raise ParameterError(f"expansion needs m <= {TABLE_MAX_M}")
    coordinates = coords_table(scheme.basis)[np.asarray(symbols, dtype=np.int64)]
    bits = (coordinates[..., None] >> np.arange(m)) & 1
    return bits.reshape(*coordinates.shape[:-1], coordinates.shape[-1] * m).astype(np.uint8)


def expand(code: LinearCode, scheme: ExpansionScheme) -> LinearCode:
    """
    Binary [2t*n, 2t*k] image of code. The generating set holds e * g for
    every basis element e and generator row g; claimed_d is kept as a
    lower bound.
    """
    if code.spec != scheme.spec:
        raise DimensionMismatchError(f"code over {code.spec} but scheme over {scheme.spec}")
    spec = code.spec
    if code.k == 0:
        return make_code(binary_field(), BitMatrix.zeros(0, spec.m * code.n), label="expanded zero code")

    products = np.stack(
        [spec.mul_array(e, code.gen.entries) for e in scheme.basis.elements], axis=1
    ).reshape(code.k * spec.m, code.n)
    expanded = make_code(binary_field(), expand_vectors(products, scheme),
                         claimed_d=code.claimed_d, label=f"expanded {code.label}".strip())
    if expanded.k != spec.m * code.k:
        raise VerificationError(f"expansion has rank {expanded.k}, expected {spec.m * code.k}")
    logger.info(f"✅ Expanded {code} -> {expanded}")
    return expanded


# ======================
# BOUND LINES
# ======================

def line_eq7(t: int) -> BoundLine:
    """R + 2tδ = 1 - 1/(2^t - 1)"""
    if t < 2:
        raise ParameterError(f"t must be >= 2 (the intercept vanishes at t=1), got {t}")
    return BoundLine(slope=Fraction(2 * t), intercept=1 - Fraction(1, (1 << t) - 1),
                     label=f"expansion-t{t}")


def delta_at_rate(t: int, rate: Fraction) -> Fraction:
    """Exact δ on the expansion line for GF(2^{2t}) at the given rate"""
    return line_eq7(t).delta_at(Fraction(rate))


def rate_at_delta(t: int, delta: Fraction) -> Fraction:
    line = line_eq7(t)
    delta = Fraction(delta)
    if not 0 <= delta <= line.delta_intercept:
        raise ParameterError(f"δ={delta} outside [0, {line.delta_intercept}] for t={t}")
    return line.rate_at(delta)


def lemma7_point(l: int, rate: Fraction) -> Fraction:
    """
    δ = 1 - R - 1/(l-1) on the self-orthogonal algebraic-geometry family
    over GF(l^2), valid for 0 <= R <= 1/2
    """
    rate = Fraction(rate)
    if l < 3:
        raise ParameterError(f"l must be >= 3, got {l}")
    if not 0 <= rate <= Fraction(1, 2):
        raise ParameterError(f"self-orthogonal families need 0 <= R <= 1/2, got {rate}")
    delta = 1 - rate - Fraction(1, l - 1)
    if delta < 0:
        raise ParameterError(f"no positive δ at R={rate} for l={l}")
    return delta


class Table2Row(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t: int
    line: BoundLine
    delta_at_half: Optional[Fraction] = None
    best: bool = False


def table2(t_range: Sequence[int] = TABLE2_T_RANGE) -> List[Table2Row]:
    """Expansion lines per t with δ at R = 1/2; the δ maximiser is flagged"""
    half = Fraction(1, 2)
    entries = []
    for t in t_range:
        line = line_eq7(t)
        delta = line.delta_at(half) if line.intercept >= half else None
        entries.append((t, line, delta))
    deltas = [d for _, _, d in entries if d is not None]
    best = max(deltas) if deltas else None
    rows = [
        Table2Row(t=t, line=line, delta_at_half=delta, best=delta is not None and delta == best)
        for t, line, delta in entries
    ]
    for row in rows:
        if row.best:
            logger.info(f"Best δ at R=1/2 is {row.delta_at_half} (≈{float(row.delta_at_half):.4f}) at t={row.t}")
    return rows


def table2_csv(rows: Sequence[Table2Row]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE2_HEADER)
    for row in rows:
        delta = row.delta_at_half
        writer.writerow([
            row.t, row.line.slope, row.line.intercept.numerator, row.line.intercept.denominator,
            "" if delta is None else delta.numerator, "" if delta is None else delta.denominator,
        ])
    return buffer.getvalue()
