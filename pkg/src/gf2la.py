"""
Linear algebra for generator matrices

BitMatrix holds binary matrices as row-major packed 64-bit words; FqMatrix
holds matrices over GF(2^m) as numpy symbol arrays. Both support row
reduction, null spaces, self-orthogonality tests and exhaustive weight
enumeration in Gray-code order.
"""
import logging
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from src.config import config
from src.galois import FieldSpec
from src.helper.exceptions import DimensionMismatchError, EnumerationCapError, ParameterError
from src.worker import ShardPool, split_range

logger = logging.getLogger(__name__)

WORD_BITS = 64
# rows of the generator folded into the precomputed codeword table
LOW_BITS = 12


def _words(cols: int) -> int:
    return max(1, -(-cols // WORD_BITS))


class BitMatrix:
    """Binary matrix with rows packed little-endian into uint64 words"""

    __slots__ = ("data", "cols")

    def __init__(self, data: np.ndarray, cols: int):
        data = np.ascontiguousarray(data, dtype=np.uint64)
        if data.ndim != 2 or data.shape[1] != _words(cols):
            raise DimensionMismatchError(
                f"packed data of shape {data.shape} does not fit {cols} columns"
            )
        tail = cols % WORD_BITS
        if tail and data.shape[0] and np.any(data[:, -1] >> np.uint64(tail)):
            raise DimensionMismatchError("bits set beyond the last column")
        self.data = data
        self.cols = cols

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, _words(cols)), dtype=np.uint64), cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, array) -> "BitMatrix":
        dense = np.asarray(array, dtype=np.uint8) & 1
        if dense.ndim != 2:
            raise DimensionMismatchError(f"expected a 2-d array, got shape {dense.shape}")
        rows, cols = dense.shape
        words = _words(cols)
        padded = np.zeros((rows, words * WORD_BITS), dtype=np.uint8)
        padded[:, :cols] = dense
        packed = np.packbits(padded, axis=1, bitorder="little")
        return cls(packed.view("<u8").astype(np.uint64), cols)

    @classmethod
    def from_rows(cls, rows: Sequence[int], cols: int) -> "BitMatrix":
        """Rows given as ints, bit j = column j"""
        words = _words(cols)
        data = np.zeros((len(rows), words), dtype=np.uint64)
        for i, row in enumerate(rows):
            if row < 0 or row >> cols:
                raise DimensionMismatchError(f"row {i} has bits beyond column {cols}")
            data[i] = np.frombuffer(row.to_bytes(words * 8, "little"), dtype="<u8")
        return cls(data, cols)

    def to_dense(self) -> np.ndarray:
        as_bytes = self.data.astype("<u8").view(np.uint8).reshape(self.rows, self.data.shape[1] * 8)
        return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :self.cols]

    def row_ints(self) -> List[int]:
        return [int.from_bytes(row.astype("<u8").tobytes(), "little") for row in self.data]

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.data.copy(), self.cols)

    def take_rows(self, index) -> "BitMatrix":
        return BitMatrix(self.data[index].reshape(-1, self.data.shape[1]), self.cols)

    def vstack(self, *others: "BitMatrix") -> "BitMatrix":
        for other in others:
            if other.cols != self.cols:
                raise DimensionMismatchError(f"cannot stack {other.cols} columns onto {self.cols}")
        return BitMatrix(np.vstack([self.data] + [o.data for o in others]), self.cols)

    def select_columns(self, columns: Sequence[int]) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense()[:, list(columns)])

    def delete_columns(self, columns: Sequence[int]) -> "BitMatrix":
        drop = set(columns)
        return self.select_columns([c for c in range(self.cols) if c not in drop])

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        """Product over GF(2)"""
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        product = self.to_dense().astype(np.int64) @ other.to_dense().astype(np.int64)
        return BitMatrix.from_dense(product & 1)

    def weights(self) -> np.ndarray:
        return np.bitwise_count(self.data).sum(axis=1, dtype=np.int64)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.cols == other.cols
            and np.array_equal(self.data, other.data)
        )

    def __hash__(self) -> int:
        return hash((self.cols, self.data.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


class FqMatrix:
    """Matrix over GF(2^m) with entries as ints in [0, q)"""

    __slots__ = ("spec", "entries")

    def __init__(self, spec: FieldSpec, entries):
        entries = np.array(entries, dtype=np.int64, copy=True)
        if entries.ndim == 1 and entries.size == 0:
            entries = entries.reshape(0, 0)
        if entries.ndim != 2:
            raise DimensionMismatchError(f"expected a 2-d array, got shape {entries.shape}")
        if entries.size and (entries.min() < 0 or entries.max() >= spec.q):
            raise DimensionMismatchError(f"entries outside GF({spec.q})")
        self.spec = spec
        self.entries = entries

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int) -> "FqMatrix":
        return cls(spec, np.zeros((rows, cols), dtype=np.int64))

    def copy(self) -> "FqMatrix":
        return FqMatrix(self.spec, self.entries)

    def take_rows(self, index) -> "FqMatrix":
        return FqMatrix(self.spec, self.entries[index].reshape(-1, self.cols))

    def vstack(self, *others: "FqMatrix") -> "FqMatrix":
        for other in others:
            if other.spec != self.spec or other.cols != self.cols:
                raise DimensionMismatchError("cannot stack matrices over different fields or widths")
        return FqMatrix(self.spec, np.vstack([self.entries] + [o.entries for o in others]))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FqMatrix)
            and self.spec == other.spec
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.entries.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"FqMatrix({self.rows}x{self.cols} over GF({self.spec.q}))"


Matrix = Union[BitMatrix, FqMatrix]


class RowReduction(NamedTuple):
    matrix: Matrix
    rank: int
    pivots: Tuple[int, ...]


def _matrix_of(obj) -> Matrix:
    """Accept a matrix or anything carrying one as `.gen` (a LinearCode)"""
    return getattr(obj, "gen", obj)


# ======================
# ROW REDUCTION
# ======================

def _rref_bits(matrix: BitMatrix) -> RowReduction:
    data = matrix.data.copy()
    rows = matrix.rows
    pivots: List[int] = []
    r = 0
    for col in range(matrix.cols):
        if r == rows:
            break
        w, b = divmod(col, WORD_BITS)
        bit = np.uint64(1 << b)
        hits = np.flatnonzero(data[r:, w] & bit)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
        mask = (data[:, w] & bit) != 0
        mask[r] = False
        data[mask] ^= data[r]
        pivots.append(col)
        r += 1
    return RowReduction(BitMatrix(data, matrix.cols), r, tuple(pivots))


def _rref_field(matrix: FqMatrix) -> RowReduction:
    spec = matrix.spec
    data = matrix.entries.copy()
    rows, cols = data.shape
    pivots: List[int] = []
    r = 0
    for col in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(data[r:, col])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
        data[r] = spec.mul_array(spec.inv(int(data[r, col])), data[r])
        factors = data[:, col].copy()
        factors[r] = 0
        targets = np.flatnonzero(factors)
        if targets.size:
            data[targets] ^= spec.mul_array(factors[targets][:, None], data[r][None, :])
        pivots.append(col)
        r += 1
    return RowReduction(FqMatrix(spec, data), r, tuple(pivots))


def rref(matrix: Matrix) -> RowReduction:
    """
    Reduced row-echelon form (leftmost pivot, topmost row), its rank and
    pivot columns. Zero rows stay at the bottom.
    """
    matrix = _matrix_of(matrix)
    if isinstance(matrix, BitMatrix):
        return _rref_bits(matrix)
    return _rref_field(matrix)


def rank(matrix: Matrix) -> int:
    return rref(matrix).rank


def row_basis(matrix: Matrix) -> Matrix:
    """The nonzero rows of the reduced form"""
    reduced = rref(matrix)
    return reduced.matrix.take_rows(slice(0, reduced.rank))


def dual_space(matrix: Matrix) -> Matrix:
    """Generator of the null space under the ordinary scalar product"""
    matrix = _matrix_of(matrix)
    reduced = rref(matrix)
    n = matrix.cols
    pivots = list(reduced.pivots)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]

    if isinstance(matrix, BitMatrix):
        dense = reduced.matrix.to_dense()[:reduced.rank]
        null = np.zeros((len(free), n), dtype=np.uint8)
        null[np.arange(len(free)), free] = 1
        if pivots and free:
            null[:, pivots] = dense[:, free].T
        return BitMatrix.from_dense(null)

    dense = reduced.matrix.entries[:reduced.rank]
    null = np.zeros((len(free), n), dtype=np.int64)
    null[np.arange(len(free)), free] = 1
    if pivots and free:
        # -x = x in characteristic 2
        null[:, pivots] = dense[:, free].T
    return FqMatrix(matrix.spec, null)


def gram(matrix: Matrix) -> np.ndarray:
    """G * G^T over the entry field"""
    matrix = _matrix_of(matrix)
    if isinstance(matrix, BitMatrix):
        data = matrix.data
        out = np.zeros((matrix.rows, matrix.rows), dtype=np.uint8)
        for i in range(matrix.rows):
            out[i] = (np.bitwise_count(data & data[i]).sum(axis=1, dtype=np.int64) & 1).astype(np.uint8)
        return out
    spec = matrix.spec
    entries = matrix.entries
    out = np.zeros((matrix.rows, matrix.rows), dtype=np.int64)
    for i in range(matrix.rows):
        products = spec.mul_array(entries, entries[i][None, :])
        out[i] = np.bitwise_xor.reduce(products, axis=1) if matrix.cols else 0
    return out


def is_self_orthogonal(matrix: Matrix) -> bool:
    """True iff G * G^T = 0, i.e. the row space lies in its dual"""
    return not np.any(gram(matrix))


def in_row_space(matrix: Matrix, vectors: Matrix) -> bool:
    """Every row of `vectors` lies in the row space of `matrix`"""
    matrix, vectors = _matrix_of(matrix), _matrix_of(vectors)
    if matrix.cols != vectors.cols or type(matrix) is not type(vectors):
        raise DimensionMismatchError("row-space test needs matrices of the same kind and width")
    if isinstance(matrix, FqMatrix) and matrix.spec != vectors.spec:
        raise DimensionMismatchError("row-space test across different fields")
    if vectors.rows == 0:
        return True
    return rank(matrix.vstack(vectors)) == rank(matrix)


def row_space_equal(a: Matrix, b: Matrix) -> bool:
    return in_row_space(a, b) and in_row_space(b, a)


# ======================
# EXHAUSTIVE ENUMERATION
# ======================

class _Enumeration(NamedTuple):
    rows: np.ndarray          # (k, words) packed generator rows
    weight: Callable[[np.ndarray], np.ndarray]
    n: int                    # largest possible weight


def _popcount_weight(block: np.ndarray) -> np.ndarray:
    return np.bitwise_count(block).sum(axis=1, dtype=np.int64)


def _symbol_weight(slot: int) -> Callable[[np.ndarray], np.ndarray]:
    """Number of nonzero aligned `slot`-bit fields per packed row"""
    lsb = 0
    for i in range(0, WORD_BITS, slot):
        lsb |= 1 << i
    lsb_mask = np.uint64(lsb)
    shifts = []
    s = 1
    while s < slot:
        shifts.append(np.uint64(s))
        s <<= 1

    def weight(block: np.ndarray) -> np.ndarray:
        folded = block.copy()
        for shift in shifts:
            folded |= folded >> shift
        return np.bitwise_count(folded & lsb_mask).sum(axis=1, dtype=np.int64)

    return weight


def binary_image(matrix: FqMatrix) -> Tuple[BitMatrix, int]:
    """
    GF(2)-spanning image of a GF(2^m) generator: rows x^j * g_i, each symbol
    written into an aligned slot of width 2^ceil(log2 m). Returns the packed
    matrix and the slot width.
    """
    spec = matrix.spec
    slot = 1
    while slot < spec.m:
        slot <<= 1
    n = matrix.cols
    rows = []
    for g in matrix.entries:
        for j in range(spec.m):
            symbols = spec.mul_array(1 << j, g)
            bits = np.zeros(n * slot, dtype=np.uint8)
            for b in range(spec.m):
                bits[b::slot] = (symbols >> b) & 1
            rows.append(bits)
    dense = np.array(rows, dtype=np.uint8).reshape(len(rows), n * slot)
    return BitMatrix.from_dense(dense), slot


def _prepare(obj) -> _Enumeration:
    matrix = _matrix_of(obj)
    if isinstance(matrix, BitMatrix):
        basis = row_basis(matrix)
        if basis.rows > config.binary_enum_cap:
            raise EnumerationCapError(
                f"binary dimension {basis.rows} too large for exhaustive enumeration",
                config.binary_enum_cap,
            )
        return _Enumeration(basis.data, _popcount_weight, matrix.cols)

    basis = row_basis(matrix)
    if basis.rows * matrix.spec.m > config.field_enum_cap:
        raise EnumerationCapError(
            f"k*m = {basis.rows * matrix.spec.m} too large for exhaustive enumeration",
            config.field_enum_cap,
        )
    if matrix.spec.m == 1:
        bits = BitMatrix.from_dense(basis.entries)
        return _Enumeration(bits.data, _popcount_weight, matrix.cols)
    image, slot = binary_image(basis)
    return _Enumeration(image.data, _symbol_weight(slot), matrix.cols)


def _low_table(rows: np.ndarray) -> np.ndarray:
    """All 2^len(rows) combinations, index bit i selecting row i"""
    words = rows.shape[1] if rows.ndim == 2 else 1
    table = np.zeros((1 << len(rows), words), dtype=np.uint64)
    for i, row in enumerate(rows):
        half = 1 << i
        table[half:2 * half] = table[:half] ^ row
    return table


def _scan(enum: _Enumeration, low: np.ndarray, high_rows: np.ndarray,
          start: int, stop: int, histogram: bool):
    """Walk Gray-code indices [start, stop) of the high rows"""
    gray = start ^ (start >> 1)
    acc = np.zeros(low.shape[1], dtype=np.uint64)
    i = 0
    while gray >> i:
        if gray >> i & 1:
            acc ^= high_rows[i]
        i += 1

    best: Optional[int] = None
    counts = np.zeros(enum.n + 1, dtype=np.int64) if histogram else None
    for g in range(start, stop):
        if g > start:
            # Gray code step g-1 -> g flips bit ctz(g)
            acc ^= high_rows[(g & -g).bit_length() - 1]
        weights = enum.weight(low ^ acc)
        if histogram:
            counts += np.bincount(weights, minlength=enum.n + 1)
        else:
            candidates = weights[1:] if g == 0 else weights
            if candidates.size:
                value = int(candidates.min())
                best = value if best is None else min(best, value)
    return counts if histogram else best


def _run(obj, jobs: Optional[int], histogram: bool):
    enum = _prepare(obj)
    k = enum.rows.shape[0]
    if k == 0 and not histogram:
        raise ParameterError("minimum distance of the zero code is undefined")
    low_bits = min(k, LOW_BITS)
    low = _low_table(enum.rows[:low_bits])
    high_rows = enum.rows[low_bits:]
    shards = split_range(0, 1 << (k - low_bits), jobs or config.jobs)
    logger.info(f"Enumerating 2^{k} codewords in {len(shards)} shard(s)")
    results = ShardPool(jobs).map(
        lambda shard: _scan(enum, low, high_rows, shard[0], shard[1], histogram), shards
    )
    return results


def min_distance(code, jobs: Optional[int] = None) -> int:
    """
    Exact minimum Hamming weight over all nonzero codewords (symbol weight
    over GF(2^m)). The result does not depend on the number of shards.
    """
    results = [r for r in _run(code, jobs, histogram=False) if r is not None]
    if not results:
        raise ParameterError("code has no nonzero codewords")
    return min(results)


def weight_distribution(code, jobs: Optional[int] = None) -> Dict[int, int]:
    """Exact weight -> count map; counts sum to the number of codewords"""
    total = np.sum(_run(code, jobs, histogram=True), axis=0)
    return {w: int(c) for w, c in enumerate(total) if c}
