import math

import numpy as np
import pytest

from src.codes import (
    CodeParams,
    LinearCode,
    binary_field,
    EvaluationCodeSpec,
    contains,
    dual_code,
    evaluation_code,
    golay_code,
    make_code,
    random_code,
    random_self_orthogonal_code,
    rm_code,
    rm_self_dual_params,
    rs_code,
    self_orthogonal_outer,
    shorten,
)
from src.config import config
from src.galois import field_make
from src.gf2la import BitMatrix, is_self_orthogonal, min_distance
from src.helper.exceptions import DimensionMismatchError, ParameterError, VerificationError


def test_params_string():
    assert str(CodeParams(24, 12, 8)) == "[24,12,8]"
    assert str(CodeParams(8, 4, None)) == "[8,4]"


def test_make_code_reduces_to_row_basis():
    code = make_code(binary_field(), [[1, 1, 0, 0], [0, 0, 1, 1], [1, 1, 1, 1]])
    assert (code.n, code.k) == (4, 2)


def test_rank_deficient_generator_rejected(rm13):
    gen = BitMatrix.from_rows([0b0011, 0b0011], 4)
    with pytest.raises(VerificationError):
        LinearCode(spec=rm13.spec, n=4, k=2, gen=gen)


# ======================
# REED-MULLER
# ======================

@pytest.mark.parametrize("r, m, k, d", [(0, 3, 1, 8), (1, 3, 4, 4), (1, 4, 5, 8), (2, 4, 11, 4), (2, 5, 16, 8)])
def test_rm_parameters(r, m, k, d):
    code = rm_code(r, m)
    assert (code.n, code.k, code.claimed_d) == (1 << m, k, d)
    assert min_distance(code) == d


@pytest.mark.parametrize("m", [3, 5])
def test_rm_self_dual(m):
    params = rm_self_dual_params(m)
    code = rm_code((m - 1) // 2, m)
    assert code.params == params
    assert is_self_orthogonal(code)
    assert 2 * code.k == code.n


def test_rm_dual_is_rm():
    assert contains(rm_code(2, 5), dual_code(rm_code(2, 5)))
    assert contains(dual_code(rm_code(1, 4)), rm_code(2, 4))


def test_rm_order_range():
    with pytest.raises(ParameterError):
        rm_code(4, 3)
    with pytest.raises(ParameterError):
        rm_self_dual_params(4)


# ======================
# EVALUATION CODES
# ======================

def test_reed_solomon_is_mds(gf16):
    code = rs_code(gf16, 8, 3)
    assert code.params == CodeParams(8, 3, 6)
    assert min_distance(code) == 6


def test_evaluation_points_distinct(gf16):
    with pytest.raises(ParameterError):
        EvaluationCodeSpec(spec=gf16, points=(1, 1, 2), degree=1)
    with pytest.raises(ParameterError):
        EvaluationCodeSpec(spec=gf16, points=(1, 2, 3), degree=1, multipliers=(1, 0, 1))


def test_multipliers_keep_distance(gf16):
    espec = EvaluationCodeSpec(spec=gf16, points=tuple(range(6)), degree=2, multipliers=(1, 2, 3, 4, 5, 6))
    assert min_distance(evaluation_code(espec)) == 4


@pytest.mark.parametrize("m, n, k", [(2, 4, 2), (4, 16, 8), (4, 10, 3), (6, 12, 4)])
def test_self_orthogonal_outer(m, n, k):
    spec = field_make(m)
    code = self_orthogonal_outer(spec, n, k, seed=7)
    assert (code.n, code.k) == (n, k)
    assert is_self_orthogonal(code)
    assert code.claimed_d == n - k + 1


def test_self_orthogonal_outer_is_seeded(gf16):
    a = self_orthogonal_outer(gf16, 10, 3, seed=11)
    b = self_orthogonal_outer(gf16, 10, 3, seed=11)
    assert a.gen == b.gen


def test_self_orthogonal_outer_rejects_odd_degree():
    with pytest.raises(ParameterError):
        self_orthogonal_outer(field_make(3), 6, 2, seed=0)


def test_self_orthogonal_outer_needs_2k_le_n(gf16):
    with pytest.raises(ParameterError):
        self_orthogonal_outer(gf16, 6, 4, seed=0)


# ======================
# DUALS, SHORTENING, GOLAY
# ======================

def test_golay_is_self_dual():
    golay = golay_code()
    assert is_self_orthogonal(golay)
    assert contains(golay, dual_code(golay))
    assert min_distance(golay) == 8


def test_shortened_golay():
    code = shorten(golay_code(), [22, 23])
    assert (code.n, code.k) == (22, 10)
    assert is_self_orthogonal(code)
    assert min_distance(code) == 8


def test_contains_needs_matching_codes(rm13, gf16):
    with pytest.raises(DimensionMismatchError):
        contains(rm13, rs_code(gf16, 8, 2))


def test_random_code_has_full_rank(gf16, rng):
    code = random_code(gf16, 9, 4, rng)
    assert (code.n, code.k) == (9, 4)


@pytest.mark.parametrize("m", [1, 2])
def test_random_self_orthogonal_code(m, rng):
    code = random_self_orthogonal_code(field_make(m), 10, 4, rng)
    assert code.k == 4
    assert is_self_orthogonal(code)


def test_random_self_orthogonal_needs_2k_le_n(rng):
    with pytest.raises(ParameterError):
        random_self_orthogonal_code(field_make(1), 6, 4, rng)


def test_zero_code_generator():
    code = make_code(binary_field(), BitMatrix.zeros(0, 5))
    assert (code.n, code.k) == (5, 0)


# ======================
# PROPERTIES
# ======================

RM_GRID = [(r, m) for m in range(1, 7) for r in range(m + 1)]


@pytest.mark.parametrize("r, m", RM_GRID)
def test_rm_dimension_and_distance(r, m):
    code = rm_code(r, m)
    assert code.k == sum(math.comb(m, i) for i in range(r + 1))
    if code.k <= config.binary_enum_cap:
        assert min_distance(code) == 1 << (m - r)


@pytest.mark.parametrize("r, m", [(r, m) for r, m in RM_GRID if r < m])
def test_rm_dual_is_complementary_order(r, m):
    dual = dual_code(rm_code(r, m))
    other = rm_code(m - r - 1, m)
    assert contains(dual, other) and contains(other, dual)


@pytest.mark.parametrize("r, m", [(r, m) for m in range(1, 8) for r in range(m + 1)])
def test_rm_self_orthogonal_exactly_below_half_order(r, m):
    assert is_self_orthogonal(rm_code(r, m)) == (r <= (m - 1) // 2)


@pytest.mark.parametrize("m, n", [(2, 4), (3, 8)])
def test_evaluation_code_distance(m, n):
    spec = field_make(m)
    for degree in range(min(n, 5)):
        code = evaluation_code(EvaluationCodeSpec(spec=spec, points=tuple(range(n)), degree=degree))
        assert min_distance(code) == n - degree
