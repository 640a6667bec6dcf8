from fractions import Fraction

import pytest

from src.bounds import entropy_h
from src.codes import rm_code, rs_code
from src.counting import (
    CountReport,
    _ratio_of_products,
    all_even_weight,
    count_csv,
    count_reports,
    count_so,
    count_so_by_extension,
    count_so_containing_v,
    enumerate_selfdual_containing,
    enumerate_so,
    enumerate_so_containing,
    find_so_code,
    gv_so_dimension,
    gv_so_rate_series,
    lemma8_count,
    lemma8_report,
    lemma8_study,
    r_for_delta,
    sigma,
    standard_subcode,
    theorem1_holds,
)
from src.gf2la import is_self_orthogonal, min_distance
from src.helper.exceptions import FormulaDefectError, ParameterError


# ======================
# PRINTED FORMULAS
# ======================

@pytest.mark.parametrize("n, s, expected", [(4, 1, 3), (6, 1, 15), (8, 1, 135), (8, 4, 1)])
def test_selfdual_count_formula(n, s, expected):
    assert lemma8_count(n, s) == expected


def test_recursion_values():
    assert sigma(4, 1, 0) == 15
    assert sigma(8, 2, 1) == 63
    assert sigma(10, 3, 3) == 1


def test_recursion_matches_corollaries_from_zero():
    for n in (4, 6, 8):
        for k in range(1, n // 2 + 1):
            assert sigma(n, k, 0) == count_so(n, k)


def test_closed_forms():
    assert count_so(4, 1) == 15
    assert count_so(6, 2) == 315
    assert count_so_containing_v(4, 1) == 1
    assert count_so_containing_v(6, 2) == 15


def test_formula_ranges():
    with pytest.raises(ParameterError):
        count_so(5, 1)
    with pytest.raises(ParameterError):
        sigma(8, 1, 2)
    with pytest.raises(ParameterError):
        lemma8_count(6, 4)


def test_non_integral_ratio_is_a_defect():
    with pytest.raises(FormulaDefectError):
        _ratio_of_products([3], [2], "example")


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_counts_with_and_without_a_fixed_vector(n):
    for k in range(1, n // 2 + 1):
        ratio = Fraction(count_so(n, k), count_so_containing_v(n, k))
        assert ratio == Fraction((1 << n) - 1, (1 << k) - 1)


# ======================
# ORACLES
# ======================

def test_self_orthogonal_counts():
    assert enumerate_so(4, 1) == 7
    assert enumerate_so(4, 2) == 3
    assert enumerate_so(6, 1) == 31
    assert enumerate_so(6, 2) == 75


@pytest.mark.parametrize("n, k", [(4, 2), (6, 2), (6, 3), (8, 2)])
def test_oracles_agree(n, k):
    assert count_so_by_extension(n, k) == enumerate_so(n, k)


def test_oracle_independent_of_jobs():
    assert enumerate_so(8, 3, jobs=1) == enumerate_so(8, 3, jobs=4)


def test_codes_containing_a_vector():
    assert enumerate_so_containing(4, 1, 0b0011) == 1
    assert enumerate_so_containing(4, 2, 0b0011) == 1
    assert enumerate_so_containing(4, 2, [1, 1, 1, 1]) == 3


def test_selfdual_codes_containing_a_code():
    assert enumerate_selfdual_containing(4, [0b1111]) == 3
    assert enumerate_selfdual_containing(4, [0b0011]) == 1
    assert enumerate_selfdual_containing(8, rm_code(1, 3)) == 1


def test_oracle_length_limit():
    with pytest.raises(ParameterError):
        enumerate_so(12, 2)


# ======================
# REPORTS
# ======================

def test_standard_subcode():
    assert standard_subcode(6, 2) == [0b111111, 0b11]
    assert standard_subcode(6, 2, with_all_ones=False) == [0b11, 0b1100]
    assert standard_subcode(6, 0) == []


def test_selfdual_report_depends_on_all_ones():
    with_ones = lemma8_report(4, [0b1111])
    without = lemma8_report(4, [0b0011])
    assert (with_ones.paper_value, with_ones.oracle_value, with_ones.agrees) == (3, 3, True)
    assert (without.paper_value, without.oracle_value, without.agrees) == (3, 1, False)


def test_selfdual_report_needs_self_orthogonal_code():
    with pytest.raises(ParameterError):
        lemma8_report(4, [0b0001])


def test_study_with_and_without_all_ones():
    results = lemma8_study((4, 6))
    assert all(report.agrees for with_ones, report in results if with_ones)
    assert not any(report.agrees for with_ones, report in results if not with_ones)


def test_csv_row():
    report = CountReport(quantity="Eq9", n=4, k=1, paper_value=15, oracle_value=7)
    assert report.csv_row() == ["Eq9", "4", "1", "", "15", "7", "false"]
    assert CountReport(quantity="Eq9", n=4, k=1, paper_value=15).agrees is None


def test_count_reports_with_oracle():
    text = count_csv(count_reports(4, k=1, oracle=True))
    assert text.splitlines() == [
        "quantity,n,k,s,paper_value,oracle_value,agrees",
        "Eq9,4,1,,15,7,false",
        "Eq10,4,1,1,1,1,true",
        "Lemma8,4,2,1,3,3,true",
    ]


def test_count_reports_recursion_row():
    reports = count_reports(4, k=2, s=1, oracle=True)
    recursion = [r for r in reports if r.quantity == "Eq8"]
    assert len(recursion) == 1
    assert (recursion[0].paper_value, recursion[0].oracle_value) == (3, 3)


def test_count_reports_without_oracle():
    reports = count_reports(8)
    assert all(r.oracle_value is None for r in reports)
    assert [r.k for r in reports if r.quantity == "Eq9"] == [1, 2, 3, 4]


@pytest.mark.parametrize("n", [4, 6, pytest.param(8, marks=pytest.mark.slow)])
def test_count_reports_adjudicate_every_row(n):
    reports = count_reports(n, oracle=True)
    assert all(r.agrees is not None for r in reports)
    assert [r.agrees for r in reports if r.quantity == "Lemma8"] == [True]


# ======================
# EXISTENCE
# ======================

def test_existence_condition():
    assert theorem1_holds(8, 3, 2)
    assert not theorem1_holds(8, 4, 2)
    with pytest.raises(ParameterError):
        theorem1_holds(9, 3, 2)


def test_dimension_formula():
    assert gv_so_dimension(8, 2) == 3
    assert gv_so_dimension(100, 5) == 62
    with pytest.raises(ParameterError):
        gv_so_dimension(8, 1)
    with pytest.raises(ParameterError):
        gv_so_dimension(9, 2)


def test_r_for_delta():
    assert r_for_delta(100, 0.1) == 5
    assert r_for_delta(8, Fraction(1, 2)) == 2
    with pytest.raises(ParameterError):
        r_for_delta(8, 0.6)


def test_rate_series_approaches_entropy_bound():
    target = 1 - entropy_h(2, 0.1)
    points = gv_so_rate_series(0.1, [100, 1000])
    assert [p.n for p in points] == [100, 1000]
    assert abs(points[1].rate - target) < 0.02
    assert abs(points[1].rate - target) < abs(points[0].rate - target)


def test_all_even_weight(rm13, gf16):
    assert all_even_weight(rm13)
    assert not all_even_weight(rm_code(1, 1))
    with pytest.raises(ParameterError):
        all_even_weight(rs_code(gf16, 4, 2))


# ======================
# WITNESSES
# ======================

def test_small_witnesses():
    assert find_so_code(4, 2, 2) is not None
    assert find_so_code(4, 3, 2) is None
    code = find_so_code(8, 3, 4)
    assert code.params == (8, 3, 4)


def _witness_cases(lengths):
    for n in lengths:
        for r in range(2, n // 2 + 1):
            for k in range(1, n // 2 + 1):
                if theorem1_holds(n, k, r):
                    yield n, k, r


def test_witness_cases_cover_every_admissible_dimension():
    cases = list(_witness_cases((8,)))
    assert (8, 1, 2) in cases and (8, 3, 2) in cases
    assert (8, 4, 2) not in cases


@pytest.mark.parametrize("n, k, r", list(_witness_cases((2, 4, 6, 8, 10))))
def test_condition_yields_witness(n, k, r):
    code = find_so_code(n, k, 2 * r)
    assert code is not None
    assert is_self_orthogonal(code)
    assert min_distance(code) >= 2 * r


@pytest.mark.slow
@pytest.mark.parametrize("n, k, r", list(_witness_cases((12,))))
def test_condition_yields_witness_n12(n, k, r):
    code = find_so_code(n, k, 2 * r)
    assert code is not None
    assert min_distance(code) >= 2 * r


def test_random_witness_search_is_seeded():
    a = find_so_code(16, 2, 6, seed=3)
    b = find_so_code(16, 2, 6, seed=3)
    assert a is not None
    assert a.gen == b.gen
