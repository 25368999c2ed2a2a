import pytest

from algebra.closedform import (FormulaId, FormulaParams, IConvention, Variant, degree_audit, enum_I, evaluate,
                                geometric_exponent, lem23, lem32, listed_indices, prop22, split_index, st_on_Q,
                                table_formula, thm31, thm33, thm34_r21, thm34_r201, thm42, thm42_general_line, thm43,
                                thm44)
from algebra.dickson import DMExpr, bracket, dm_decompose, generators
from algebra.errors import NegativeExponent
from algebra.gfp import PrimeField
from algebra.steenrod import MilnorIndex, st_apply
from algebra.superpoly import SuperPoly

F3 = PrimeField(3)


def test_index_helpers() -> None:
    assert split_index(7, 3) == (2, 1)
    assert split_index(9, 3) is None
    assert split_index(-1, 3) is None
    assert geometric_exponent(3, 0, 2) == 1
    assert geometric_exponent(3, 2, 2) == -3
    assert geometric_exponent(5, 1, 4) == 30


def test_digit_sets() -> None:
    assert enum_I(3, 1, 5) == [0, 3, 9]
    assert enum_I(3, 0, 6) == [0, 1, 3, 9, 10, 27, 28, 30]
    assert enum_I(3, 2, 2) == [0]
    assert enum_I(3, 2, 2, IConvention.EMPTY) == []
    assert enum_I(3, 1, 2, IConvention.EMPTY) == [0]


def test_determinant_expansion() -> None:
    gens = generators(3)
    assert prop22(3, 0, 2) == gens.L2 * gens.Q1
    for u in range(4):
        for v in range(u + 1, 5):
            assert prop22(3, u, v) == bracket(F3, u, v)
    with pytest.raises(ValueError):
        prop22(3, 2, 1)


@pytest.mark.parametrize('p', [3, 5])
def test_determinant_expansion_up_to_six(p: int) -> None:
    field = PrimeField(p)
    for u in range(6):
        for v in range(u + 1, 7):
            assert prop22(p, u, v) == bracket(field, u, v)


def test_atom_formula() -> None:
    assert lem23(3, (), (1,), 0, 1, 2, 1) == SuperPoly.y(F3, 2, 1, 4).scale(2)
    assert lem23(3, (0,), (), 1, 2, 0, 2) == SuperPoly.y(F3, 2, 2)
    assert lem23(3, (0, 1), (), 1, 1, 1, 2).is_zero()


def test_tables() -> None:
    assert table_formula(FormulaId.COR24, 3, FormulaParams(e=1, i=3)) == SuperPoly.y(F3, 2, 1, 9)
    assert table_formula(FormulaId.COR24, 3, FormulaParams(e=1, i=2)).is_zero()
    assert listed_indices(FormulaId.COR26, 3, FormulaParams(target='L21')) == [0, 1, 9, 10]
    gens = generators(3)
    assert table_formula(FormulaId.COR26, 3, FormulaParams(target='L20', i=0)) == gens.L20
    assert table_formula(FormulaId.COR28, 3, FormulaParams(target='M21', i=1)) == gens.M20
    with pytest.raises(ValueError):
        table_formula(FormulaId.LEM25, 3, FormulaParams(u=1, v=1, i=0))
    with pytest.raises(ValueError):
        table_formula(FormulaId.COR26, 3, FormulaParams(target='Q0', i=0))


def test_reduced_powers_on_dickson_invariants() -> None:
    assert thm31(3, 1, 1) == DMExpr.single(3, a=1)
    assert thm31(3, 0, 0) == DMExpr.single(3, a=1)
    assert str(thm31(3, 1, 3)) == '2*Q1^2'
    assert thm31(3, 1, 3, Variant.PRINTED).is_zero()
    assert thm31(3, 0, 9).is_zero()
    with pytest.raises(ValueError):
        thm31(3, 2, 0)


def test_reduced_powers_on_mui_invariants() -> None:
    assert lem32(3, 0) == generators(3).L2
    assert thm33(3, 0) == DMExpr.single(3, T=(0,))
    assert str(thm34_r21(3, 1)) == 'R0'
    assert thm34_r21(3, 1, Variant.PRINTED).is_zero()
    assert thm34_r201(3, 0) == DMExpr.single(3, T=(0, 1))


def test_milnor_operations_on_mui_invariants() -> None:
    assert str(thm42(3, 0, 0)) == 'Q0'
    assert str(thm42(3, 0, 3)) == '2*Q0*Q1'
    assert str(thm42(3, 0, 3, Variant.PRINTED)) == '2*Q0^2*Q1'
    assert str(thm43(3, 0, 1)) == 'Q0'
    assert thm43(3, 0, 1, Variant.PRINTED).is_zero()
    assert str(thm44(3, 0, 0)) == '2*R1'
    assert str(thm44(3, 1, 0)) == '2*R0'
    assert st_on_Q(3, 4, 2, 'Q1').is_zero()


def test_general_line_at_s_equal_two() -> None:
    with pytest.raises(NegativeExponent):
        thm42_general_line(3, 2, 3, IConvention.LITERAL)
    for i in range(12):
        assert thm42_general_line(3, 2, i, IConvention.EMPTY) == thm42(3, 2, i)


def test_closed_forms_agree_with_the_action() -> None:
    gens = generators(3)
    for i in range(13):
        power = MilnorIndex.power(i)
        assert dm_decompose(st_apply(power, gens.Q1)) == thm31(3, 1, i)
        assert dm_decompose(st_apply(power, gens.R1)) == thm34_r21(3, i)
        for s in range(4):
            assert dm_decompose(st_apply(MilnorIndex((s,), (i,)), gens.R0)) == thm42(3, s, i)


def test_degree_audit() -> None:
    # R0 has degree 15 and St^{(0),(3)} raises degrees by 13
    assert degree_audit(thm42(3, 0, 3), 28, 3)
    assert not degree_audit(thm42(3, 0, 3, Variant.PRINTED), 28, 3)
    assert degree_audit(generators(3).L2, 8, 3)


def test_dispatch() -> None:
    assert evaluate(FormulaId.THM31, Variant.CORRECTED, 3, FormulaParams(s=1, i=1)) == DMExpr.single(3, a=1)
    assert evaluate(FormulaId.PROP22, Variant.PRINTED, 3, FormulaParams(u=0, v=1)) == generators(3).L2
    assert evaluate(FormulaId.COR24, Variant.PRINTED, 3, FormulaParams(e=0, i=1)) == SuperPoly.y(F3, 2, 1, 3)
    with pytest.raises(ValueError):
        evaluate(FormulaId.THM42, Variant.CORRECTED, 3, FormulaParams(i=1))
