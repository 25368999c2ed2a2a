"""
Parsers for the small text grammars used on the command line and in config.yaml: polynomials, Milnor index tuples,
integer expressions in p and formula names.
"""
import re
from typing import List, Sequence, Tuple, Union

from algebra.closedform import FormulaId
from algebra.dickson import GENERATOR_NAMES, generators
from algebra.gfp import PrimeField
from algebra.superpoly import SuperPoly

FACTOR_PATTERN = re.compile(r'^(?:x(\d+)|y(\d+)(?:\^(\d+))?)$')
PRIME_TERM_PATTERN = re.compile(r'^(\d*)\*?(?:(p)(?:\^(\d+))?)?$')


class ParseError(ValueError):
    pass


def _signed_terms(text: str) -> List[Tuple[int, str]]:
    """Splits 'a + b - c' into [(1, 'a'), (1, 'b'), (-1, 'c')], whitespace ignored"""
    compact = re.sub(r'\s+', '', text)
    if not compact:
        raise ParseError('Empty expression')

    pieces = re.split(r'([+-])', compact)
    terms = []
    sign = 1
    for piece in pieces:
        if piece == '+':
            continue
        if piece == '-':
            sign = -sign
            continue
        if not piece:
            # Leading sign or doubled operator
            continue
        terms.append((sign, piece))
        sign = 1

    if not terms:
        raise ParseError(f'No terms in {text!r}')
    return terms


def parse_poly(text: str, field: PrimeField, nvars: int = 2) -> SuperPoly:
    """
    Parses the polynomial grammar, e.g. '2*x1*y2^3 + 1*y1^4'. Coefficients and '^1' may be omitted, coefficients are
    reduced mod p, exterior factors may come in any order (the sign of sorting them applies) and '0' is zero.

    :param text:    The polynomial text
    :param field:   The coefficient field
    :param nvars:   Number of variables

    :return: The parsed polynomial
    """
    result = SuperPoly.zero(field, nvars)
    for sign, term in _signed_terms(text):
        coeff = sign
        ext: List[int] = []
        exps = [0] * nvars
        for factor in term.split('*'):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            match = FACTOR_PATTERN.match(factor)
            if match is None:
                raise ParseError(f'Unexpected factor {factor!r} in {text!r}')
            x_index, y_index, exponent = match.groups()
            index = int(x_index or y_index)
            if not 1 <= index <= nvars:
                raise ParseError(f'Variable index {index} out of range 1..{nvars} in {text!r}')
            if x_index:
                ext.append(index)
            else:
                exps[index - 1] += int(exponent) if exponent else 1
        result = result + SuperPoly.monomial(field, nvars, ext=ext, exps=exps, coeff=coeff)

    return result


def parse_index_list(text: str) -> Tuple[int, ...]:
    """Parses '0,1', '(0, 1)', '()' or '' into a tuple of nonnegative integers"""
    stripped = text.strip().strip('()').strip()
    if not stripped:
        return ()

    values = []
    for item in stripped.split(','):
        item = item.strip()
        if not item.isdigit():
            raise ParseError(f'Expected nonnegative integers separated by commas, got {text!r}')
        values.append(int(item))

    return tuple(values)


def parse_prime_expression(text: Union[str, int], p: int) -> int:
    """
    Evaluates a small integer expression in p: sums and differences of terms 'c', 'p', 'cp', 'c*p^e', e.g.
    'p^2+p' or '2p-1'
    """
    if isinstance(text, int):
        return text

    value = 0
    for sign, term in _signed_terms(text):
        match = PRIME_TERM_PATTERN.match(term)
        if match is None or not term:
            raise ParseError(f'Cannot evaluate {term!r} in {text!r}')
        coeff, has_p, exponent = match.groups()
        if has_p:
            value += sign * (int(coeff) if coeff else 1) * p ** (int(exponent) if exponent else 1)
        elif coeff:
            value += sign * int(coeff)
        else:
            raise ParseError(f'Cannot evaluate {term!r} in {text!r}')

    if value < 0:
        raise ParseError(f'{text!r} evaluates to {value} for p={p}, expected a nonnegative value')
    return value


def parse_theorems(value: Union[str, Sequence[str]]) -> List[FormulaId]:
    """
    Reads 'all', a comma separated string or a list of formula names, returned in canonical order
    """
    names = [item.strip() for item in value.split(',')] if isinstance(value, str) else [str(v) for v in value]
    if 'all' in names:
        return list(FormulaId)

    known = {formula.value: formula for formula in FormulaId}
    unknown = [name for name in names if name not in known]
    if unknown:
        raise ParseError(f'Unknown theorem(s) {", ".join(unknown)}; expected "all" or any of {", ".join(known)}')

    selected = {known[name] for name in names if name}
    return [formula for formula in FormulaId if formula in selected]


def parse_target(text: str, p: int) -> Tuple[str, SuperPoly]:
    """
    A generator name (L2, Q0, R01, ...) or a polynomial

    :return: A label for the target and its polynomial
    """
    name = text.strip()
    if name in GENERATOR_NAMES:
        return name, generators(p)[name]
    return name, parse_poly(name, PrimeField(p))
