"""
Code families: Reed-Muller codes, genus-0 evaluation (generalized
Reed-Solomon) codes, self-orthogonal GRS outer codes and the extended Golay
code, plus duals, containment and shortening.
"""
import itertools
import logging
from math import comb
from typing import NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.config import config
from src.galois import FieldSpec, field_make
from src.gf2la import (
    BitMatrix,
    FqMatrix,
    dual_space,
    in_row_space,
    is_self_orthogonal,
    rank,
    row_basis,
)
from src.helper.exceptions import (
    DimensionMismatchError,
    ParameterError,
    SearchExhaustedError,
    VerificationError,
)

logger = logging.getLogger(__name__)

MAX_RM_M = 10


class CodeParams(NamedTuple):
    n: int
    k: int
    d: Optional[int]

    def __str__(self) -> str:
        return f"[{self.n},{self.k}" + (f",{self.d}]" if self.d is not None else "]")


class LinearCode(BaseModel):
    """[n, k] code over a FieldSpec held as a full-rank generator matrix"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: FieldSpec
    n: int
    k: int
    gen: Union[BitMatrix, FqMatrix]
    claimed_d: Optional[int] = None
    label: str = ""

    @model_validator(mode="after")
    def check_generator(self) -> "LinearCode":
        if self.spec.m == 1 and not isinstance(self.gen, BitMatrix):
            raise DimensionMismatchError("binary codes are held as BitMatrix generators")
        if self.spec.m > 1 and (not isinstance(self.gen, FqMatrix) or self.gen.spec != self.spec):
            raise DimensionMismatchError(f"generator is not over {self.spec}")
        if self.gen.cols != self.n:
            raise DimensionMismatchError(f"generator has {self.gen.cols} columns, expected n={self.n}")
        if self.gen.rows != self.k or rank(self.gen) != self.k:
            raise VerificationError(f"generator does not have rank k={self.k}")
        if self.claimed_d is not None and self.claimed_d < 0:
            raise ParameterError("claimed distance must be non-negative")
        return self

    @property
    def is_binary(self) -> bool:
        return self.spec.m == 1

    @property
    def params(self) -> CodeParams:
        return CodeParams(self.n, self.k, self.claimed_d)

    def __str__(self) -> str:
        name = f"{self.label} " if self.label else ""
        return f"{name}{self.params} over GF({self.spec.q})"


def binary_field() -> FieldSpec:
    return field_make(1)


def make_code(spec: FieldSpec, generator, claimed_d: Optional[int] = None,
              label: str = "") -> LinearCode:
    """
    Build a LinearCode from any spanning set of rows (BitMatrix, FqMatrix or
    a symbol array); the generator is reduced to a row basis.
    """
    if isinstance(generator, (BitMatrix, FqMatrix)):
        matrix = generator
    elif spec.m == 1:
        matrix = BitMatrix.from_dense(np.asarray(generator))
    else:
        matrix = FqMatrix(spec, generator)
    if spec.m == 1 and isinstance(matrix, FqMatrix):
        matrix = BitMatrix.from_dense(matrix.entries)
    basis = row_basis(matrix)
    return LinearCode(spec=spec, n=matrix.cols, k=basis.rows, gen=basis,
                      claimed_d=claimed_d, label=label)


# ======================
# REED-MULLER CODES
# ======================

class RMSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    r: int
    m: int

    @model_validator(mode="after")
    def check_order(self) -> "RMSpec":
        if not 0 <= self.m <= MAX_RM_M:
            raise ParameterError(f"m={self.m} outside 0..{MAX_RM_M}")
        if not 0 <= self.r <= self.m:
            raise ParameterError(f"order r={self.r} must satisfy 0 <= r <= m={self.m}")
        return self

    @property
    def dimension(self) -> int:
        return sum(comb(self.m, i) for i in range(self.r + 1))


def rm_code(r: int, m: int) -> LinearCode:
    """
    RM(r, m): evaluations of all monomials of degree <= r on F_2^m.
    Points run lexicographically (v_1 is the most significant bit of the
    point index); monomials run by degree, then lexicographically.
    """
    rm = RMSpec(r=r, m=m)
    points = np.arange(1 << m)
    variables = [((points >> (m - 1 - i)) & 1).astype(np.uint8) for i in range(m)]
    rows = []
    for degree in range(r + 1):
        for monomial in itertools.combinations(range(m), degree):
            row = np.ones(1 << m, dtype=np.uint8)
            for i in monomial:
                row &= variables[i]
            rows.append(row)
    gen = BitMatrix.from_dense(np.array(rows, dtype=np.uint8))
    return LinearCode(spec=binary_field(), n=1 << m, k=rm.dimension, gen=gen,
                      claimed_d=1 << (m - r), label=f"RM({r},{m})")


def rm_self_dual_params(m: int) -> CodeParams:
    """RM((m-1)/2, m) for odd m: [2^m, 2^(m-1), 2^((m+1)/2)]"""
    if m < 3 or m % 2 == 0:
        raise ParameterError(f"self-dual RM codes need odd m >= 3, got {m}")
    return CodeParams(1 << m, 1 << (m - 1), 1 << ((m + 1) // 2))


# ======================
# EVALUATION CODES (GENUS 0)
# ======================

class EvaluationCodeSpec(BaseModel):
    """Points D, divisor degree deg(G) and optional GRS column multipliers"""

    model_config = ConfigDict(frozen=True)

    spec: FieldSpec
    points: Tuple[int, ...]
    degree: int
    multipliers: Optional[Tuple[int, ...]] = None

    @model_validator(mode="after")
    def check_points(self) -> "EvaluationCodeSpec":
        for a in self.points:
            self.spec.check(a)
        if len(set(self.points)) != len(self.points):
            raise ParameterError("evaluation points must be pairwise distinct")
        if not 0 <= self.degree < len(self.points):
            raise ParameterError(
                f"degree {self.degree} must satisfy 0 <= degree < n={len(self.points)}"
            )
        if self.multipliers is not None:
            if len(self.multipliers) != len(self.points):
                raise ParameterError("one multiplier per evaluation point is required")
            if any(v == 0 or not 0 < v < self.spec.q for v in self.multipliers):
                raise ParameterError("multipliers must be nonzero field elements")
        return self


def evaluation_code(espec: EvaluationCodeSpec) -> LinearCode:
    """
    Rows (v_j * x_j^i) for i = 0..degree; an [n, degree+1, n-degree] code
    """
    spec = espec.spec
    points = np.array(espec.points, dtype=np.int64)
    n = len(points)
    scale = (np.array(espec.multipliers, dtype=np.int64)
             if espec.multipliers is not None else np.ones(n, dtype=np.int64))
    rows = np.zeros((espec.degree + 1, n), dtype=np.int64)
    power = np.ones(n, dtype=np.int64)
    for i in range(espec.degree + 1):
        rows[i] = spec.mul_array(scale, power)
        power = spec.mul_array(power, points)
    gen = BitMatrix.from_dense(rows) if spec.m == 1 else FqMatrix(spec, rows)
    return LinearCode(spec=spec, n=n, k=espec.degree + 1, gen=gen,
                      claimed_d=n - espec.degree, label=f"GRS deg {espec.degree}")


def rs_code(spec: FieldSpec, n: int, k: int) -> LinearCode:
    """Evaluation code on the first n field elements (0, 1, 2, ... as ints)"""
    if not 1 <= k <= n <= spec.q:
        raise ParameterError(f"need 1 <= k <= n <= q, got k={k}, n={n}, q={spec.q}")
    return evaluation_code(EvaluationCodeSpec(spec=spec, points=tuple(range(n)), degree=k - 1))


# ======================
# DUALS AND CONTAINMENT
# ======================

def dual_code(code: LinearCode) -> LinearCode:
    return make_code(code.spec, dual_space(code.gen), label=f"dual of {code.label}".strip())


def contains(outer: LinearCode, inner: LinearCode) -> bool:
    """True iff every row of inner's generator lies in outer's row space"""
    if outer.spec != inner.spec or outer.n != inner.n:
        raise DimensionMismatchError(
            f"cannot compare {outer} with {inner}: field or length differ"
        )
    return in_row_space(outer.gen, inner.gen)


def shorten(code: LinearCode, positions: Sequence[int]) -> LinearCode:
    """Subcode vanishing on `positions`, with those coordinates deleted"""
    if not code.is_binary:
        raise ParameterError("shortening is implemented for binary codes")
    positions = sorted(set(positions))
    if any(not 0 <= p < code.n for p in positions):
        raise ParameterError(f"positions outside 0..{code.n - 1}")
    restricted = code.gen.select_columns(positions)
    selector = dual_space(restricted.transpose())
    sub = selector.matmul(code.gen) if selector.rows else BitMatrix.zeros(0, code.n)
    return make_code(code.spec, sub.delete_columns(positions), claimed_d=code.claimed_d,
                     label=f"shortened {code.label}".strip())


def golay_code() -> LinearCode:
    """Extended binary Golay code [24, 12, 8], self-dual"""
    g = sum(1 << e for e in (0, 2, 4, 5, 6, 10, 11))
    rows = []
    for i in range(12):
        word = g << i
        parity = bin(word).count("1") & 1
        rows.append(word | parity << 23)
    return LinearCode(spec=binary_field(), n=24, k=12, gen=BitMatrix.from_rows(rows, 24),
                      claimed_d=8, label="Golay")


# ======================
# RANDOM AND SELF-ORTHOGONAL CODES
# ======================

def random_code(spec: FieldSpec, n: int, k: int, rng: np.random.Generator) -> LinearCode:
    """Uniformly random full-rank [n, k] code"""
    if not 0 <= k <= n:
        raise ParameterError(f"need 0 <= k <= n, got k={k}, n={n}")
    while True:
        rows = rng.integers(0, spec.q, size=(k, n), dtype=np.int64)
        code = make_code(spec, rows, label="random")
        if code.k == k:
            return code


def _random_combination(matrix, rng: np.random.Generator) -> np.ndarray:
    if isinstance(matrix, BitMatrix):
        dense = matrix.to_dense().astype(np.int64)
        coeffs = rng.integers(0, 2, size=matrix.rows)
        return (coeffs @ dense) & 1
    spec = matrix.spec
    coeffs = rng.integers(0, spec.q, size=matrix.rows, dtype=np.int64)
    products = spec.mul_array(coeffs[:, None], matrix.entries)
    return np.bitwise_xor.reduce(products, axis=0)


def random_self_orthogonal_code(spec: FieldSpec, n: int, k: int,
                                rng: np.random.Generator,
                                budget: Optional[int] = None) -> LinearCode:
    """
    Greedy random extension: each new row is a random vector of the current
    dual with v.v = 0 that is not yet in the code.
    """
    if not 0 <= 2 * k <= n:
        raise ParameterError(f"self-orthogonal codes need 2k <= n, got k={k}, n={n}")
    budget = budget or config.search_budget
    full = BitMatrix.identity(n) if spec.m == 1 else FqMatrix(spec, np.eye(n, dtype=np.int64))
    current = make_code(spec, full.take_rows(slice(0, 0)))
    for _ in range(budget):
        if current.k == k:
            return current.model_copy(update={"label": "random self-orthogonal"})
        space = dual_space(current.gen) if current.k else full
        v = _random_combination(space, rng)
        if not np.any(v):
            continue
        if spec.m == 1:
            if int(v.sum()) & 1:
                continue
        elif spec.dot(v, v):
            continue
        extended = make_code(spec, current.gen.vstack(
            BitMatrix.from_dense(v[None, :]) if spec.m == 1 else FqMatrix(spec, v[None, :])
        ))
        if extended.k > current.k:
            current = extended
    if current.k == k:
        return current
    raise SearchExhaustedError(f"no self-orthogonal [{n},{k}] code over GF({spec.q}) within budget")


def _field_sqrt(spec: FieldSpec, a: int) -> int:
    # Frobenius is bijective: sqrt(a) = a^(2^(m-1))
    return spec.pow(a, 1 << (spec.m - 1))


def self_orthogonal_outer(spec: FieldSpec, n: int, k: int, seed: int,
                          budget: Optional[int] = None) -> LinearCode:
    """
    Self-orthogonal [n, k] GRS code over GF(2^{2t})

    With u_j = v_j^2 the Gram condition sum_j v_j^2 x_j^(i+i') = 0 is linear
    in u: u must lie in the null space of the first 2k-1 Vandermonde rows.
    A seeded combination of that null space with no zero entry gives the
    multipliers; every candidate is verified before it is returned.
    """
    if spec.m % 2:
        raise ParameterError(f"outer codes live over GF(2^(2t)); m={spec.m} is odd")
    if not (1 <= k and 2 * k <= n <= spec.q):
        raise ParameterError(f"need 1 <= k <= n/2 and n <= q, got n={n}, k={k}, q={spec.q}")
    budget = budget or config.search_budget
    rng = np.random.default_rng(seed)
    points = rng.permutation(spec.q)[:n].astype(np.int64)

    conditions = np.zeros((2 * k - 1, n), dtype=np.int64)
    power = np.ones(n, dtype=np.int64)
    for s in range(2 * k - 1):
        conditions[s] = power
        power = spec.mul_array(power, points)
    null = dual_space(FqMatrix(spec, conditions))
    if null.rows == 0:
        raise SearchExhaustedError(f"no multiplier solutions for n={n}, k={k}")

    for attempt in range(budget):
        u = null.entries[0] if attempt == 0 else _random_combination(null, rng)
        if np.any(u == 0):
            continue
        multipliers = tuple(_field_sqrt(spec, int(a)) for a in u)
        grs = evaluation_code(EvaluationCodeSpec(
            spec=spec, points=tuple(int(x) for x in points), degree=k - 1, multipliers=multipliers,
        ))
        if is_self_orthogonal(grs.gen):
            logger.info(f"✅ Self-orthogonal [{n},{k}] GRS code over GF({spec.q}) after {attempt + 1} tries")
            return make_code(spec, grs.gen, claimed_d=n - k + 1,
                             label=f"SO-GRS seed {seed}")
        logger.warning(f"⚠️ Multiplier candidate {attempt} failed verification")
    raise SearchExhaustedError(
        f"no verified self-orthogonal [{n},{k}] code over GF({spec.q}) within {budget} tries"
    )
