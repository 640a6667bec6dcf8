import numpy as np
import pytest

from src.codes import golay_code, rs_code
from src.gf2la import (
    BitMatrix,
    FqMatrix,
    binary_image,
    dual_space,
    gram,
    in_row_space,
    is_self_orthogonal,
    min_distance,
    rank,
    rref,
    row_basis,
    row_space_equal,
    weight_distribution,
)
from src.helper.exceptions import DimensionMismatchError, EnumerationCapError, ParameterError


# ======================
# BIT MATRICES
# ======================

def test_dense_and_packed_forms_agree():
    dense = np.array([[1, 0, 1, 1], [0, 1, 1, 0]], dtype=np.uint8)
    matrix = BitMatrix.from_dense(dense)
    assert matrix.shape == (2, 4)
    assert np.array_equal(matrix.to_dense(), dense)
    assert matrix.row_ints() == [0b1101, 0b0110]
    assert BitMatrix.from_rows([0b1101, 0b0110], 4) == matrix


def test_wide_rows_span_several_words():
    cols = 130
    rows = [1 << 129 | 1, 1 << 64 | 1 << 63]
    matrix = BitMatrix.from_rows(rows, cols)
    assert matrix.data.shape == (2, 3)
    assert matrix.row_ints() == rows
    assert list(matrix.weights()) == [2, 2]


def test_bits_beyond_width_rejected():
    with pytest.raises(DimensionMismatchError):
        BitMatrix.from_rows([0b10000], 4)


def test_matmul_and_transpose():
    a = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    b = a.transpose()
    assert b.shape == (3, 2)
    assert np.array_equal(a.matmul(b).to_dense(), [[0, 1], [1, 0]])
    with pytest.raises(DimensionMismatchError):
        a.matmul(a)


def test_column_selection():
    a = BitMatrix.from_dense([[1, 0, 1, 1], [0, 1, 1, 0]])
    assert np.array_equal(a.select_columns([0, 2]).to_dense(), [[1, 1], [0, 1]])
    assert np.array_equal(a.delete_columns([0, 2]).to_dense(), [[0, 1], [1, 0]])


# ======================
# ROW REDUCTION
# ======================

def test_rank_of_dependent_rows():
    matrix = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    reduced = rref(matrix)
    assert reduced.rank == 2
    assert reduced.pivots == (0, 1)
    assert np.array_equal(reduced.matrix.to_dense(), [[1, 0, 1], [0, 1, 1], [0, 0, 0]])


def test_rank_over_gf4(gf4):
    # second row is ω times the first
    matrix = FqMatrix(gf4, [[1, 2], [2, 3]])
    assert rank(matrix) == 1
    assert rank(FqMatrix(gf4, [[1, 2], [1, 3]])) == 2


def test_fq_entries_validated(gf4):
    with pytest.raises(DimensionMismatchError):
        FqMatrix(gf4, [[0, 4]])


def test_row_basis_spans_the_same_space(rng):
    dense = rng.integers(0, 2, size=(6, 10))
    matrix = BitMatrix.from_dense(dense)
    basis = row_basis(matrix)
    assert basis.rows == rank(matrix)
    assert row_space_equal(matrix, basis)


def test_dual_space_dimensions(rng):
    matrix = BitMatrix.from_dense(rng.integers(0, 2, size=(5, 12)))
    dual = dual_space(matrix)
    assert dual.rows + rank(matrix) == 12
    assert not np.any(matrix.matmul(dual.transpose()).to_dense())


def test_dual_space_over_gf16(gf16):
    code = rs_code(gf16, 7, 3)
    dual = dual_space(code.gen)
    assert dual.rows == 4
    for row in code.gen.entries:
        for other in dual.entries:
            assert gf16.dot(row, other) == 0


def test_extended_hamming_is_its_own_dual(rm13):
    assert row_space_equal(dual_space(rm13.gen), rm13.gen)
    assert is_self_orthogonal(rm13)


def test_gram_and_self_orthogonality():
    so = BitMatrix.from_rows([0b0011, 0b1100], 4)
    assert is_self_orthogonal(so)
    assert not is_self_orthogonal(BitMatrix.from_rows([0b0001], 4))
    assert np.array_equal(gram(BitMatrix.from_rows([0b0011, 0b0110], 4)), [[0, 1], [1, 0]])


def test_gram_over_gf4(gf4):
    # (1, ω) . (1, ω) = 1 + ω^2 = ω
    assert gram(FqMatrix(gf4, [[1, 2]]))[0, 0] == 2


def test_in_row_space():
    matrix = BitMatrix.from_rows([0b0011, 0b1100], 4)
    assert in_row_space(matrix, BitMatrix.from_rows([0b1111], 4))
    assert not in_row_space(matrix, BitMatrix.from_rows([0b0110], 4))
    with pytest.raises(DimensionMismatchError):
        in_row_space(matrix, BitMatrix.from_rows([0b1], 5))


# ======================
# ENUMERATION
# ======================

def test_min_distance_of_extended_hamming(rm13):
    assert min_distance(rm13) == 4


def test_golay_weight_distribution():
    assert weight_distribution(golay_code()) == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}


@pytest.mark.parametrize("jobs", [1, 3, 4])
def test_min_distance_independent_of_jobs(jobs):
    assert min_distance(golay_code(), jobs=jobs) == 8


def test_reed_solomon_weight_distribution(gf16):
    code = rs_code(gf16, 5, 2)
    assert min_distance(code) == 4
    # MDS weight enumerator
    assert weight_distribution(code) == {0: 1, 4: 75, 5: 180}


def test_binary_image_slot_width(gf16, gf64):
    assert binary_image(FqMatrix(gf16, [[1, 2]]))[1] == 4
    image, slot = binary_image(FqMatrix(gf64, [[1, 2, 3]]))
    assert slot == 8
    assert image.shape == (6, 24)


def test_enumeration_cap(isolated_config):
    isolated_config.override(SOCODES_BINARY_ENUM_CAP="4")
    with pytest.raises(EnumerationCapError) as excinfo:
        min_distance(golay_code())
    assert excinfo.value.limit == 4


def test_zero_code_has_no_distance():
    with pytest.raises(ParameterError):
        min_distance(BitMatrix.zeros(0, 4))


# ======================
# PROPERTIES
# ======================

@pytest.mark.parametrize("trial", range(5))
def test_rref_is_idempotent(rng, trial):
    matrix = BitMatrix.from_dense(rng.integers(0, 2, size=(7, 15)))
    once = rref(matrix).matrix
    assert rref(once).matrix == once


@pytest.mark.parametrize("k", [1, 4, 8, 12])
def test_double_dual_is_the_row_space(rng, k):
    matrix = BitMatrix.from_dense(rng.integers(0, 2, size=(k, 20)))
    assert row_space_equal(dual_space(dual_space(matrix)), matrix)


def test_double_dual_over_gf16(gf16, rng):
    matrix = FqMatrix(gf16, rng.integers(0, 16, size=(3, 7)))
    assert row_space_equal(dual_space(dual_space(matrix)), matrix)


@pytest.mark.parametrize("rows", [[0b0011, 0b1100], [0b0011, 0b0110], [0b111100, 0b001111]])
def test_self_orthogonality_matches_dual_containment(rows):
    matrix = BitMatrix.from_rows(rows, max(r.bit_length() for r in rows))
    assert is_self_orthogonal(matrix) == in_row_space(dual_space(matrix), matrix)


def test_min_distance_matches_weight_distribution(rng):
    matrix = BitMatrix.from_dense(rng.integers(0, 2, size=(9, 18)))
    distribution = weight_distribution(matrix)
    assert sum(distribution.values()) == 1 << rank(matrix)
    assert min_distance(matrix) == min(w for w in distribution if w)
