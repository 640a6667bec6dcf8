"""
Arithmetic in GF(2^m): field construction, the absolute trace, coordinates
with respect to a GF(2)-basis, dual and self-dual bases.

Elements are plain ints in [0, q): bit i is the coefficient of x^i in the
polynomial basis. The same int is the lowercase hex serialisation.
"""
import logging
from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.helper.exceptions import FieldError, ParameterError, VerificationError

logger = logging.getLogger(__name__)

MAX_M = 24
# exp/log tables are only built up to this degree
TABLE_MAX_M = 16

FieldElement = int


# ======================
# POLYNOMIALS OVER GF(2)
# ======================

def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, b: int) -> int:
    """Remainder of a modulo b, both as GF(2) coefficient bitmasks"""
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        a ^= b << (poly_degree(a) - db)
    return a


def clmul(a: int, b: int) -> int:
    """Carry-less product"""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


@lru_cache(maxsize=None)
def is_irreducible(p: int) -> bool:
    """
    Irreducibility by exhaustive trial division with every polynomial of
    degree 1..deg(p)/2. Fast enough for deg(p) <= 24.
    """
    m = poly_degree(p)
    if m < 1:
        return False
    if m == 1:
        return True
    if not p & 1:
        return False
    # x is the only divisor with zero constant term, ruled out above
    for divisor in range(3, 1 << (m // 2 + 1), 2):
        if poly_mod(p, divisor) == 0:
            return False
    return True


@lru_cache(maxsize=None)
def default_modulus(m: int) -> int:
    """Lexicographically least irreducible polynomial of degree m with nonzero constant term"""
    if not 1 <= m <= MAX_M:
        raise FieldError(f"m={m} outside supported range 1..{MAX_M}")
    for candidate in range((1 << m) | 1, 1 << (m + 1), 2):
        if is_irreducible(candidate):
            return candidate
    raise FieldError(f"no irreducible polynomial of degree {m}")  # unreachable for m >= 1


# ======================
# FIELD SPEC
# ======================

class _Tables(NamedTuple):
    trace_mask: int
    primitive: int
    exp: Optional[List[int]]
    log: Optional[List[int]]
    exp_array: Optional[np.ndarray]
    log_array: Optional[np.ndarray]


def _slow_mul(a: int, b: int, m: int, modulus: int) -> int:
    result = 0
    top = 1 << m
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return result


def _slow_pow(a: int, e: int, m: int, modulus: int) -> int:
    result = 1
    while e:
        if e & 1:
            result = _slow_mul(result, a, m, modulus)
        a = _slow_mul(a, a, m, modulus)
        e >>= 1
    return result


def _prime_factors(n: int) -> List[int]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


@lru_cache(maxsize=64)
def _tables(m: int, modulus: int) -> _Tables:
    q = 1 << m
    mask = 0
    for i in range(m):
        # Tr(x^i) = sum of the m Frobenius conjugates
        a = 1 << i
        acc = 0
        for _ in range(m):
            acc ^= a
            a = _slow_mul(a, a, m, modulus)
        if acc not in (0, 1):
            raise VerificationError(f"trace of x^{i} not in GF(2) for modulus {modulus:#x}")
        if acc:
            mask |= 1 << i

    primitive = 1
    if q > 2:
        factors = _prime_factors(q - 1)
        for g in range(2, q):
            if all(_slow_pow(g, (q - 1) // p, m, modulus) != 1 for p in factors):
                primitive = g
                break

    exp = log = exp_array = log_array = None
    if m <= TABLE_MAX_M:
        exp = [0] * (2 * (q - 1) if q > 2 else 2)
        log = [0] * q
        value = 1
        for i in range(q - 1):
            exp[i] = value
            log[value] = i
            value = _slow_mul(value, primitive, m, modulus)
        for i in range(q - 1, len(exp)):
            exp[i] = exp[i - (q - 1)]
        exp_array = np.array(exp, dtype=np.int64)
        log_array = np.array(log, dtype=np.int64)
    return _Tables(mask, primitive, exp, log, exp_array, log_array)


class FieldSpec(BaseModel):
    """GF(2^m) given by an irreducible modulus (bitmask including the x^m term)"""

    model_config = ConfigDict(frozen=True)

    m: int
    modulus: int

    @model_validator(mode="after")
    def check_modulus(self) -> "FieldSpec":
        if not 1 <= self.m <= MAX_M:
            raise FieldError(f"m={self.m} outside supported range 1..{MAX_M}")
        if poly_degree(self.modulus) != self.m:
            raise FieldError(f"modulus {self.modulus:#x} does not have degree {self.m}")
        if not is_irreducible(self.modulus):
            raise FieldError(f"modulus {self.modulus:#x} is reducible over GF(2)")
        return self

    @property
    def q(self) -> int:
        return 1 << self.m

    @property
    def t(self) -> int:
        """Half the extension degree (fields GF(2^{2t}))"""
        if self.m % 2:
            raise ParameterError(f"GF(2^{self.m}) is not of the form GF(2^(2t))")
        return self.m // 2

    @property
    def tables(self) -> _Tables:
        return _tables(self.m, self.modulus)

    def __str__(self) -> str:
        return f"GF(2^{self.m}) mod {self.modulus:#x}"

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"{a:#x} is not an element of GF({self.q})")
        return a

    # arithmetic

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        tables = self.tables
        if tables.exp is not None:
            return tables.exp[tables.log[a] + tables.log[b]]
        return _slow_mul(a, b, self.m, self.modulus)

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("inversion of zero")
        tables = self.tables
        if tables.exp is not None:
            return tables.exp[(self.q - 1 - tables.log[a]) % (self.q - 1)]
        return _slow_pow(a, self.q - 2, self.m, self.modulus)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        return _slow_pow(a, e, self.m, self.modulus) if e else 1

    def trace(self, a: int) -> int:
        return bin(a & self.tables.trace_mask).count("1") & 1

    def primitive_element(self) -> int:
        return self.tables.primitive

    def elements(self) -> range:
        return range(self.q)

    # vectorised arithmetic on numpy symbol arrays

    def mul_array(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        tables = self.tables
        if tables.exp_array is None:
            return np.frompyfunc(self.mul, 2, 1)(a, b).astype(np.int64)
        product = tables.exp_array[tables.log_array[a] + tables.log_array[b]]
        return np.where((a == 0) | (b == 0), 0, product)

    def inv_array(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldError("inversion of zero")
        tables = self.tables
        if tables.exp_array is None:
            return np.frompyfunc(self.inv, 1, 1)(a).astype(np.int64)
        return tables.exp_array[(self.q - 1 - tables.log_array[a]) % (self.q - 1)]

    def dot(self, a, b) -> int:
        """Ordinary scalar product of two symbol vectors"""
        products = self.mul_array(a, b)
        return int(np.bitwise_xor.reduce(products)) if products.size else 0

    def trace_array(self, a) -> np.ndarray:
        masked = np.asarray(a, dtype=np.int64) & self.tables.trace_mask
        return (np.bitwise_count(masked.astype(np.uint64)) & 1).astype(np.uint8)


def field_make(m: int, modulus: Optional[int] = None) -> FieldSpec:
    """
    Build GF(2^m). Without a modulus the least irreducible polynomial of
    degree m is used, so the result is reproducible across runs.
    """
    if not 1 <= m <= MAX_M:
        raise FieldError(f"m={m} outside supported range 1..{MAX_M}")
    if modulus is None:
        modulus = default_modulus(m)
    return FieldSpec(m=m, modulus=modulus)


def arith(spec: FieldSpec, op: str, *operands: int) -> int:
    """Dispatch add | mul | inv | pow on field elements"""
    if op == "pow":
        base, exponent = operands
        return spec.pow(spec.check(base), exponent)
    values = [spec.check(a) for a in operands]
    if op == "add":
        result = 0
        for a in values:
            result ^= a
        return result
    if op == "mul":
        result = 1
        for a in values:
            result = spec.mul(result, a)
        return result
    if op == "inv":
        (a,) = values
        return spec.inv(a)
    raise ParameterError(f"unknown field operation {op!r}")


def trace(spec: FieldSpec, a: int) -> int:
    return spec.trace(spec.check(a))


def element_to_hex(a: int) -> str:
    return format(a, "x")


def element_from_hex(spec: FieldSpec, text: str) -> int:
    try:
        value = int(text, 16)
    except ValueError:
        raise FieldError(f"not a hex field element: {text!r}")
    return spec.check(value)


# ======================
# SMALL GF(2) MATRICES ON INT ROWS
# ======================

def _int_rank(rows: Sequence[int]) -> int:
    pivots = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = row
                break
            row ^= pivots[top]
    return len(pivots)


def _int_inverse(rows: Sequence[int], size: int) -> List[int]:
    """Inverse of a square GF(2) matrix given as row bitmasks (bit j = column j)"""
    work = [(row, 1 << i) for i, row in enumerate(rows)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if work[r][0] >> col & 1), None)
        if pivot is None:
            raise VerificationError("matrix is singular over GF(2)")
        work[col], work[pivot] = work[pivot], work[col]
        prow, pinv = work[col]
        for r in range(size):
            if r != col and work[r][0] >> col & 1:
                work[r] = (work[r][0] ^ prow, work[r][1] ^ pinv)
    return [inverse for _, inverse in work]


# ======================
# BASES
# ======================

def _gram(spec: FieldSpec, elements: Sequence[int]) -> Tuple[int, ...]:
    rows = []
    for a in elements:
        row = 0
        for j, b in enumerate(elements):
            if spec.trace(spec.mul(a, b)):
                row |= 1 << j
        rows.append(row)
    return tuple(rows)


class Basis(BaseModel):
    """Ordered GF(2)-basis of GF(2^m) with its trace Gram matrix (row i, bit j = Tr(e_i e_j))"""

    model_config = ConfigDict(frozen=True)

    spec: FieldSpec
    elements: Tuple[int, ...]
    gram: Tuple[int, ...]

    @model_validator(mode="after")
    def check_basis(self) -> "Basis":
        if len(self.elements) != self.spec.m:
            raise FieldError(f"basis needs {self.spec.m} elements, got {len(self.elements)}")
        for a in self.elements:
            self.spec.check(a)
        if _int_rank(self.elements) != self.spec.m:
            raise FieldError("basis elements are linearly dependent over GF(2)")
        if self.gram != _gram(self.spec, self.elements):
            raise VerificationError("stored Gram matrix does not match Tr(e_i e_j)")
        return self

    @classmethod
    def of(cls, spec: FieldSpec, elements: Sequence[int]) -> "Basis":
        elements = tuple(spec.check(a) for a in elements)
        if len(elements) != spec.m:
            raise FieldError(f"basis needs {spec.m} elements, got {len(elements)}")
        return cls(spec=spec, elements=elements, gram=_gram(spec, elements))

    @property
    def is_self_dual(self) -> bool:
        return all(row == 1 << i for i, row in enumerate(self.gram))

    def gram_matrix(self) -> np.ndarray:
        m = self.spec.m
        return np.array([[row >> j & 1 for j in range(m)] for row in self.gram], dtype=np.uint8)


def polynomial_basis(spec: FieldSpec) -> Basis:
    return Basis.of(spec, [1 << i for i in range(spec.m)])


@lru_cache(maxsize=256)
def _coordinate_inverse(basis: Basis) -> Tuple[int, ...]:
    return tuple(_int_inverse(basis.elements, basis.spec.m))


def coords_int(a: int, basis: Basis) -> int:
    """Coordinates of a as a bitmask (bit i = coefficient of e_i)"""
    inverse = _coordinate_inverse(basis)
    result = 0
    j = 0
    while a:
        if a & 1:
            result ^= inverse[j]
        a >>= 1
        j += 1
    return result


def from_coords_int(v: int, basis: Basis) -> int:
    result = 0
    for i, e in enumerate(basis.elements):
        if v >> i & 1:
            result ^= e
    return result


def coords(a: int, basis: Basis) -> Tuple[int, ...]:
    """The vector a^(e) with a = sum a_i e_i"""
    v = coords_int(basis.spec.check(a), basis)
    return tuple(v >> i & 1 for i in range(basis.spec.m))


def from_coords(v: Sequence[int], basis: Basis) -> int:
    if len(v) != basis.spec.m:
        raise ParameterError(f"coordinate vector must have length {basis.spec.m}")
    return from_coords_int(sum((bit & 1) << i for i, bit in enumerate(v)), basis)


@lru_cache(maxsize=32)
def coords_table(basis: Basis) -> np.ndarray:
    """coords_int for every field element, indexable by a numpy symbol array"""
    if basis.spec.m > TABLE_MAX_M:
        raise ParameterError(f"coordinate tables are limited to m <= {TABLE_MAX_M}")
    table = np.zeros(basis.spec.q, dtype=np.int64)
    # linearity: fill by doubling over the polynomial-basis bits
    inverse = _coordinate_inverse(basis)
    for j in range(basis.spec.m):
        half = 1 << j
        table[half:2 * half] = table[:half] ^ inverse[j]
    return table


def dual_basis(basis: Basis) -> Basis:
    """Basis e' with Tr(e_i e'_j) = delta_ij, via the inverse trace-Gram matrix"""
    g_inv = _int_inverse(basis.gram, basis.spec.m)
    elements = [from_coords_int(row, basis) for row in g_inv]
    dual = Basis.of(basis.spec, elements)
    for i, a in enumerate(basis.elements):
        for j, b in enumerate(dual.elements):
            if basis.spec.trace(basis.spec.mul(a, b)) != (i == j):
                raise VerificationError("dual basis fails Tr(e_i e'_j) = delta_ij")
    return dual


def _orthonormalize(spec: FieldSpec, start: Sequence[int]) -> List[int]:
    """
    Symmetric elimination of the trace form over GF(2). When the remaining
    block is alternating (all Tr(w^2) = 0) a hyperbolic pair u, w is folded
    into an already chosen e via e+u, e+w, e+u+w.
    """
    def form(a: int, b: int) -> int:
        return spec.trace(spec.mul(a, b))

    chosen: List[int] = []
    remaining = list(start)
    while remaining:
        pick = next((i for i, w in enumerate(remaining) if form(w, w)), None)
        if pick is not None:
            v = remaining.pop(pick)
            remaining = [w ^ v if form(w, v) else w for w in remaining]
            chosen.append(v)
            continue
        if not chosen or len(remaining) < 2:
            raise VerificationError("trace form elimination stalled")
        u = remaining.pop(0)
        partner = next((i for i, w in enumerate(remaining) if form(u, w)), None)
        if partner is None:
            raise VerificationError("trace form is degenerate on the remaining block")
        w = remaining.pop(partner)
        e = chosen.pop()
        chosen.extend([e ^ u, e ^ w, e ^ u ^ w])
        remaining = [
            x ^ (u if form(x, w) else 0) ^ (w if form(x, u) else 0)
            for x in remaining
        ]
    return chosen


@lru_cache(maxsize=64)
def self_dual_basis(spec: FieldSpec) -> Basis:
    """Deterministic self-dual basis (Gram matrix = identity) of GF(2^m)"""
    start = [1 << i for i in range(spec.m)]
    try:
        basis = Basis.of(spec, _orthonormalize(spec, start))
        if basis.is_self_dual:
            return basis
    except VerificationError as e:
        logger.warning(f"⚠️ Elimination failed for {spec}: {e}")

    if spec.m > 8:
        raise VerificationError(f"no self-dual basis found for {spec}")
    # seeded randomized restart from a random starting basis
    rng = np.random.default_rng(spec.modulus)
    for attempt in range(256):
        candidate = [int(x) for x in rng.integers(1, spec.q, size=spec.m)]
        if _int_rank(candidate) != spec.m:
            continue
        try:
            basis = Basis.of(spec, _orthonormalize(spec, candidate))
        except VerificationError:
            continue
        if basis.is_self_dual:
            logger.info(f"Self-dual basis for {spec} found after {attempt + 1} restarts")
            return basis
    raise VerificationError(f"no self-dual basis found for {spec}")
