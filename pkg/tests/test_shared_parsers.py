import pytest

from algebra.closedform import FormulaId
from algebra.dickson import generators
from algebra.gfp import PrimeField
from algebra.superpoly import SuperPoly
from analysis.shared_parsers import (ParseError, parse_index_list, parse_poly, parse_prime_expression, parse_target,
                                     parse_theorems)

F3 = PrimeField(3)


def test_parse_poly() -> None:
    f = parse_poly('2*x1*y2^3 + 1*y1^4', F3)
    assert str(f) == '2*x1*y2^3 + 1*y1^4'
    assert parse_poly('y1 - y1', F3).is_zero()
    assert parse_poly('0', F3).is_zero()
    assert parse_poly('4*y2', F3) == SuperPoly.y(F3, 2, 2)
    assert parse_poly('x2*x1', F3) == -parse_poly('x1*x2', F3)
    assert parse_poly('- y1^2 +y2', F3) == SuperPoly.y(F3, 2, 2) - SuperPoly.y(F3, 2, 1, 2)


def test_parse_poly_errors() -> None:
    for text in ('', 'z1', 'y3', 'y1^', 'x1^2', '2**y1'):
        with pytest.raises(ParseError):
            parse_poly(text, F3)


def test_parse_index_list() -> None:
    assert parse_index_list('') == ()
    assert parse_index_list('()') == ()
    assert parse_index_list('0,1') == (0, 1)
    assert parse_index_list('(1, 0, 2)') == (1, 0, 2)
    for text in ('a', '1,-2', '1,,2'):
        with pytest.raises(ParseError):
            parse_index_list(text)


def test_prime_expressions() -> None:
    values = [parse_prime_expression(text, 7) for text in ('0', '1', 'p-1', 'p', 'p+1', '2p', 'p^2-1', 'p^2', 'p^2+p')]
    assert values == [0, 1, 6, 7, 8, 14, 48, 49, 56]
    assert parse_prime_expression(5, 3) == 5
    assert parse_prime_expression('3*p^2', 5) == 75
    for text in ('q', '1-p', 'p^'):
        with pytest.raises(ParseError):
            parse_prime_expression(text, 3)


def test_parse_theorems() -> None:
    assert parse_theorems('all') == list(FormulaId)
    assert parse_theorems('Thm4.2, Thm3.1') == [FormulaId.THM31, FormulaId.THM42]
    assert parse_theorems(['StQ', 'Prop2.2']) == [FormulaId.PROP22, FormulaId.STQ]
    with pytest.raises(ParseError):
        parse_theorems('Thm9.9')


def test_parse_target() -> None:
    assert parse_target('R0', 3) == ('R0', generators(3).R0)
    name, poly = parse_target(' 1*y1 ', 3)
    assert name == '1*y1'
    assert poly == SuperPoly.y(F3, 2, 1)
