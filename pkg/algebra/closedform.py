"""
Closed formulas for the action of P^i and St^{(s),(i)} on Dickson-Mui invariants and on the polynomials they are built
from. Every formula is a function of the prime and a small parameter set; the theorems return normal forms (DMExpr),
the tables and lemmas return polynomials.

Writing i = k p + r with 0 <= r < p, every formula on an invariant vanishes for i >= p^2 for degree reasons.

A few statements come in two variants. The printed variant follows the published statement literally, the corrected
variant repairs it where the published guard or exponent disagrees with the brute-force action:

  - Thm3.1 at s = 1 also holds for r = 0 (P^(kp) Q_{2,1} = (-1)^k Q_{2,1}^(k+1)).
  - Thm3.4-R21 and Thm4.3 keep the C(k, r-1) term at r = k + 1 (P^1 R_{2;1} = R_{2;0}).
  - Thm4.2 at s = 0 carries Q_{2,0}^(r+1), not Q_{2,0}^(k+1).
"""
import dataclasses
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Union

from algebra.dickson import DMExpr, DMKey, bracket, dense_generators, dm_degree, generators, q_power
from algebra.errors import NegativeExponent
from algebra.forms import BinaryForm
from algebra.gfp import PrimeField, abs_R, binom_mod_p, multinom_mod_p
from algebra.superpoly import SuperPoly


class FormulaId(str, Enum):
    PROP22 = 'Prop2.2'
    LEM23 = 'Lem2.3'
    COR24 = 'Cor2.4'
    LEM25 = 'Lem2.5'
    COR26 = 'Cor2.6'
    LEM27 = 'Lem2.7'
    COR28 = 'Cor2.8'
    THM31 = 'Thm3.1'
    LEM32 = 'Lem3.2'
    THM33 = 'Thm3.3'
    THM34_R21 = 'Thm3.4-R21'
    THM34_R201 = 'Thm3.4-R201'
    LEM41 = 'Lem4.1'
    THM42 = 'Thm4.2'
    THM43 = 'Thm4.3'
    THM44 = 'Thm4.4'
    STQ = 'StQ'


class Variant(str, Enum):
    PRINTED = 'printed'
    CORRECTED = 'corrected'


class IConvention(str, Enum):
    """How I(u, v) reads when u >= v: by its digit conditions alone ({0}), or as the empty set"""
    LITERAL = 'literal'
    EMPTY = 'empty'


# Formulas whose printed statement differs from the corrected one
CORRECTED_FORMULAS = frozenset({FormulaId.THM31, FormulaId.THM34_R21, FormulaId.THM42, FormulaId.THM43})

TABLE_FORMULAS = (FormulaId.COR24, FormulaId.LEM25, FormulaId.COR26, FormulaId.LEM27, FormulaId.COR28,
                  FormulaId.LEM41)

# Formulas that return a Dickson-Mui normal form rather than a polynomial
NORMAL_FORM_FORMULAS = frozenset({
    FormulaId.THM31, FormulaId.THM33, FormulaId.THM34_R21, FormulaId.THM34_R201,
    FormulaId.THM42, FormulaId.THM43, FormulaId.THM44, FormulaId.STQ,
})

ClosedValue = Union[DMExpr, SuperPoly]


@dataclass(frozen=True)
class FormulaParams:
    """
    Parameters of one formula evaluation. Each formula reads only the fields it needs:

    - Prop2.2: u, v
    - Lem2.3: S, R, eps, k, b, ell
    - Cor2.4: e, i; Lem2.5: u, v, i; Cor2.6: target (L2, L20, L21), i; Lem2.7: s, u, i
    - Cor2.8: target (M20, M21), i; Lem4.1: target (M20, M21), s, i
    - Thm3.1: s, i; Lem3.2, Thm3.3, Thm3.4-*: i; Thm4.*: s, i; StQ: target (Q0, Q1), s, i
    """
    i: Optional[int] = None
    s: Optional[int] = None
    u: Optional[int] = None
    v: Optional[int] = None
    e: Optional[int] = None
    target: Optional[str] = None
    S: Optional[Tuple[int, ...]] = None
    R: Optional[Tuple[int, ...]] = None
    eps: Optional[int] = None
    k: Optional[int] = None
    b: Optional[int] = None
    ell: Optional[int] = None

    def as_dict(self) -> Dict[str, Union[int, str, List[int]]]:
        values: Dict[str, Union[int, str, List[int]]] = {}
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if value is None:
                continue
            values[field.name] = list(value) if isinstance(value, tuple) else value
        return values

    def without_i(self) -> 'FormulaParams':
        return dataclasses.replace(self, i=None)


def _need(value: Optional[int], name: str) -> int:
    if value is None:
        raise ValueError(f'Missing formula parameter {name}')
    return value


def _need_target(params: FormulaParams, allowed: Tuple[str, ...]) -> str:
    if params.target is None or params.target not in allowed:
        raise ValueError(f'Target must be one of {", ".join(allowed)}, got {params.target}')
    return params.target


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def split_index(i: int, p: int) -> Optional[Tuple[int, int]]:
    """(k, r) with i = k p + r and 0 <= r < p, or None when i is negative or at least p^2"""
    if i < 0 or i >= p * p:
        return None
    return divmod(i, p)


def geometric_exponent(p: int, u: int, s: int) -> int:
    """(p^(s-1) - p^u) / (p - 1), exact and possibly negative"""
    numerator = p ** (s - 1) - p ** u
    quotient, remainder = divmod(numerator, p - 1)
    if remainder:
        raise ArithmeticError(f'{numerator} is not divisible by {p - 1}')
    return quotient


def enum_I(p: int, u: int, v: int, convention: IConvention = IConvention.LITERAL) -> List[int]:
    """
    The integers whose base-p digits are 0 or 1, vanish outside positions u .. v-3 and have no two adjacent 1-digits

    :param p:           The prime
    :param u:           Lowest allowed digit position
    :param v:           Digits at position v-2 and above vanish
    :param convention:  With IConvention.EMPTY the set is empty whenever u >= v

    :return: The sorted members
    """
    if convention == IConvention.EMPTY and u >= v:
        return []

    positions = list(range(u, v - 2))
    values = []
    for mask in range(2 ** len(positions)):
        if mask & (mask >> 1):
            continue
        values.append(sum(p ** position for bit, position in enumerate(positions) if mask >> bit & 1))

    return sorted(values)


class _NormalFormBuilder:
    """Collects c R_{2;T} Q_{2,0}^a Q_{2,1}^b terms; a negative exponent on a nonzero term is an error"""

    def __init__(self, p: int, label: str):
        self.p = p
        self.label = label
        self.pairs: List[Tuple[DMKey, int]] = []

    def add(self, coeff: int, T: Tuple[int, ...] = (), a: int = 0, b: int = 0) -> None:
        if coeff % self.p == 0:
            return
        if a < 0 or b < 0:
            raise NegativeExponent(f'{self.label}: term {coeff}*R{T}*Q0^{a}*Q1^{b} has a negative exponent')
        self.pairs.append((DMKey(T, a, b), coeff))

    def build(self) -> DMExpr:
        return DMExpr.from_pairs(self.p, self.pairs)


# Polynomial identities

def prop22(p: int, u: int, v: int) -> SuperPoly:
    """
    [u, v] = sum over a in I(u, v) of (-1)^a L_2^(p^u + p(p-1)a) Q_{2,1}^((p^(v-1) - p^u)/(p-1) - (p+1)a), for u < v
    """
    if not 0 <= u < v:
        raise ValueError(f'Expected 0 <= u < v, got u={u}, v={v}')

    dense = dense_generators(p)
    total = BinaryForm.zero(p, p ** u + p ** v)
    for a in enum_I(p, u, v):
        q_exponent = geometric_exponent(p, u, v) - (p + 1) * a
        if q_exponent < 0:
            raise NegativeExponent(f'Prop2.2 at u={u}, v={v}, a={a}: Q1 exponent {q_exponent}')
        total = total + ((dense.L2 ** (p ** u + p * (p - 1) * a)) * (dense.Q1 ** q_exponent)).scale(_sign(a))

    return total.to_superpoly(PrimeField(p))


def lem23(p: int, S: Tuple[int, ...], R: Tuple[int, ...], eps: int, k: int, b: int, ell: int) -> SuperPoly:
    """St^{S,R}(x_k^eps y_ell^b) in P_2 read off the atom formula"""
    field = PrimeField(p)
    if len(S) >= 2 or (S and not eps):
        return SuperPoly.zero(field, 2)

    exps = [0, 0]
    exps[ell - 1] += b + abs_R(R, p)
    coeff = multinom_mod_p(b, R, p)
    if not S:
        return SuperPoly.monomial(field, 2, ext=(k,) if eps else (), exps=exps, coeff=coeff)

    exps[k - 1] += p ** S[0]
    return SuperPoly.monomial(field, 2, exps=exps, coeff=coeff)


# Tables: the nonzero entries of each table, keyed by i

def _cor24(p: int, params: FormulaParams) -> Dict[int, SuperPoly]:
    field = PrimeField(p)
    e = _need(params.e, 'e')
    return {0: SuperPoly.y(field, 2, 1, p ** e), p ** e: SuperPoly.y(field, 2, 1, p ** (e + 1))}


def _lem25(p: int, params: FormulaParams) -> Dict[int, SuperPoly]:
    field = PrimeField(p)
    u, v = _need(params.u, 'u'), _need(params.v, 'v')
    if u == v:
        raise ValueError('The table of P^i [u, v] needs u != v')
    return {
        0: bracket(field, u, v),
        p ** u: bracket(field, u + 1, v),
        p ** v: bracket(field, u, v + 1),
        p ** u + p ** v: bracket(field, u + 1, v + 1),
    }


def _cor26(p: int, params: FormulaParams) -> Dict[int, SuperPoly]:
    gens = generators(p)
    L2, Q0, Q1 = gens.L2, gens.Q0, gens.Q1
    target = _need_target(params, ('L2', 'L20', 'L21'))
    if target == 'L2':
        return {0: L2, p: L2 * Q1, p + 1: L2 * Q0}
    if target == 'L20':
        return {0: L2 * Q0, p * p: L2 * Q0 * Q1 ** p, p * p + p: L2 * Q0 ** (p + 1)}
    return {0: L2 * Q1, 1: L2 * Q0, p * p: L2 * (Q1 ** (p + 1) - Q0 ** p), p * p + 1: L2 * Q0 * Q1 ** p}


def _lem27(p: int, params: FormulaParams) -> Dict[int, SuperPoly]:
    field = PrimeField(p)
    s, u = _need(params.s, 's'), _need(params.u, 'u')
    return {0: bracket(field, s, u), p ** u: bracket(field, s, u + 1)}


def _cor28(p: int, params: FormulaParams) -> Dict[int, SuperPoly]:
    gens = generators(p)
    if _need_target(params, ('M20', 'M21')) == 'M20':
        return {0: gens.M20, p: gens.M20 * gens.Q1 - gens.M21 * gens.Q0}
    return {0: gens.M21, 1: gens.M20}


def _lem41(p: int, params: FormulaParams) -> Dict[int, SuperPoly]:
    field = PrimeField(p)
    s = _need(params.s, 's')
    if _need_target(params, ('M20', 'M21')) == 'M20':
        return {0: bracket(field, s, 1), p: bracket(field, s, 2)}
    return {0: bracket(field, s, 0), 1: bracket(field, s, 1)}


_TABLES: Dict[FormulaId, Callable[[int, FormulaParams], Dict[int, SuperPoly]]] = {
    FormulaId.COR24: _cor24,
    FormulaId.LEM25: _lem25,
    FormulaId.COR26: _cor26,
    FormulaId.LEM27: _lem27,
    FormulaId.COR28: _cor28,
    FormulaId.LEM41: _lem41,
}


@lru_cache(maxsize=1024)
def table_entries(formula: FormulaId, p: int, params: FormulaParams) -> Mapping[int, SuperPoly]:
    """
    The listed cases of a table as {i: value}; every other i gives 0. `params.i` is ignored.
    """
    if formula not in _TABLES:
        raise ValueError(f'{formula.value} is not a table formula')
    return _TABLES[formula](p, params.without_i())


def table_formula(formula: FormulaId, p: int, params: FormulaParams) -> SuperPoly:
    entries = table_entries(formula, p, params.without_i())
    i = _need(params.i, 'i')
    return entries[i] if i in entries else SuperPoly.zero(PrimeField(p), 2)


def listed_indices(formula: FormulaId, p: int, params: FormulaParams) -> List[int]:
    return sorted(table_entries(formula, p, params.without_i()))


# Reduced powers on Dickson-Mui invariants

def thm31(p: int, s: int, i: int, variant: Variant = Variant.CORRECTED) -> DMExpr:
    """P^i Q_{2,s} = (-1)^k C(k+s, r) Q_{2,0}^(r+1-s) Q_{2,1}^(k+s-r) for s in {0, 1}"""
    if s not in (0, 1):
        raise ValueError(f'Expected s in (0, 1), got {s}')

    builder = _NormalFormBuilder(p, 'Thm3.1')
    kr = split_index(i, p)
    if kr is None:
        return builder.build()
    k, r = kr
    if variant == Variant.PRINTED and not 0 <= r - s <= k:
        return builder.build()
    if r + 1 - s < 0 or k + s - r < 0:
        return builder.build()

    builder.add(_sign(k) * binom_mod_p(k + s, r, p), a=r + 1 - s, b=k + s - r)
    return builder.build()


def lem32(p: int, i: int) -> SuperPoly:
    """P^i L_2^(p-2) = (-1)^k (k+1) C(k, r) L_2^(p-2) Q_{2,0}^r Q_{2,1}^(k-r) for r <= k"""
    field = PrimeField(p)
    kr = split_index(i, p)
    if kr is None or kr[1] > kr[0]:
        return SuperPoly.zero(field, 2)

    k, r = kr
    coeff = _sign(k) * (k + 1) * binom_mod_p(k, r, p)
    return (dense_generators(p).L2_power * q_power(p, r, k - r)).scale(coeff).to_superpoly(field)


def thm33(p: int, i: int) -> DMExpr:
    """P^i R_{2;0}"""
    builder = _NormalFormBuilder(p, 'Thm3.3')
    kr = split_index(i, p)
    if kr is None or kr[1] > kr[0]:
        return builder.build()

    k, r = kr
    builder.add(_sign(k) * (r + 1) * binom_mod_p(k, r, p), T=(0,), a=r, b=k - r)
    builder.add(_sign(k) * k * binom_mod_p(k - 1, r, p), T=(1,), a=r + 1, b=k - r - 1)
    return builder.build()


def thm34_r21(p: int, i: int, variant: Variant = Variant.CORRECTED) -> DMExpr:
    """P^i R_{2;1}; the printed guard r <= k drops the surviving r = k + 1 term"""
    builder = _NormalFormBuilder(p, 'Thm3.4-R21')
    kr = split_index(i, p)
    if kr is None:
        return builder.build()
    k, r = kr
    if r > (k if variant == Variant.PRINTED else k + 1):
        return builder.build()

    coeff = _sign(k) * (k + 1)
    builder.add(coeff * binom_mod_p(k, r, p), T=(1,), a=r, b=k - r)
    builder.add(coeff * binom_mod_p(k, r - 1, p), T=(0,), a=r - 1, b=k - r + 1)
    return builder.build()


def thm34_r201(p: int, i: int) -> DMExpr:
    """P^i R_{2;0,1} = (-1)^k (k+1) C(k, r) R_{2;0,1} Q_{2,0}^r Q_{2,1}^(k-r)"""
    builder = _NormalFormBuilder(p, 'Thm3.4-R201')
    kr = split_index(i, p)
    if kr is None or kr[1] > kr[0]:
        return builder.build()

    k, r = kr
    builder.add(_sign(k) * (k + 1) * binom_mod_p(k, r, p), T=(0, 1), a=r, b=k - r)
    return builder.build()


# Milnor operations St^{(s),(i)} on Dickson-Mui invariants

def thm42_general_line(p: int, s: int, i: int, convention: IConvention = IConvention.LITERAL) -> DMExpr:
    """
    The line of St^{(s),(i)} R_{2;0} stated for s > 2, evaluated at any s >= 2 under either reading of I(u, v)
    """
    builder = _NormalFormBuilder(p, f'Thm4.2 general line at s={s}')
    kr = split_index(i, p)
    if kr is None or kr[1] > kr[0]:
        return builder.build()

    k, r = kr
    outer = _sign(k + 1) * binom_mod_p(k, r, p)
    for a in enum_I(p, 1, s, convention):
        builder.add(outer * (k + 1) * _sign(a), a=p * a + r + 2,
                    b=geometric_exponent(p, 1, s) - (p + 1) * a + k - r)
    for a in enum_I(p, 2, s, convention):
        builder.add(-outer * (k - r) * _sign(a), a=p * (a + 1) + r + 2,
                    b=geometric_exponent(p, 2, s) - (p + 1) * a + k - r - 1)

    return builder.build()


def thm42(p: int, s: int, i: int, variant: Variant = Variant.CORRECTED) -> DMExpr:
    """St^{(s),(i)} R_{2;0}"""
    if s > 2:
        return thm42_general_line(p, s, i)

    builder = _NormalFormBuilder(p, 'Thm4.2')
    kr = split_index(i, p)
    if kr is None:
        return builder.build()
    k, r = kr
    if s == 0 and r <= k:
        exponent = k + 1 if variant == Variant.PRINTED else r + 1
        builder.add(_sign(k) * (r + 1) * binom_mod_p(k, r, p), a=exponent, b=k - r)
    elif s == 1 and r < k:
        builder.add(_sign(k + 1) * k * binom_mod_p(k - 1, r, p), a=r + 2, b=k - 1 - r)
    elif s == 2 and r <= k:
        builder.add(_sign(k + 1) * (k + 1) * binom_mod_p(k, r, p), a=r + 2, b=k - r)

    return builder.build()


def thm43(p: int, s: int, i: int, variant: Variant = Variant.CORRECTED) -> DMExpr:
    """St^{(s),(i)} R_{2;1}; the printed guard r <= k drops the surviving r = k + 1 term"""
    builder = _NormalFormBuilder(p, 'Thm4.3')
    kr = split_index(i, p)
    if kr is None:
        return builder.build()
    k, r = kr
    if r > (k if variant == Variant.PRINTED else k + 1):
        return builder.build()

    if s == 0:
        builder.add(_sign(k) * (k + 1) * binom_mod_p(k, r - 1, p), a=r, b=k - r + 1)
    elif s == 1:
        builder.add(_sign(k + 1) * (k + 1) * binom_mod_p(k, r, p), a=r + 1, b=k - r)
    else:
        outer = _sign(k + 1) * (k + 1)
        for a in enum_I(p, 0, s):
            builder.add(outer * binom_mod_p(k, r, p) * _sign(a), a=p * a + r + 1,
                        b=geometric_exponent(p, 0, s) - (p + 1) * a + k - r)
        for a in enum_I(p, 1, s):
            builder.add(outer * binom_mod_p(k, r - 1, p) * _sign(a), a=p * a + r + 1,
                        b=geometric_exponent(p, 1, s) - (p + 1) * a + k - r + 1)

    return builder.build()


def thm44(p: int, s: int, i: int) -> DMExpr:
    """St^{(s),(i)} R_{2;0,1}"""
    builder = _NormalFormBuilder(p, 'Thm4.4')
    kr = split_index(i, p)
    if kr is None or kr[1] > kr[0]:
        return builder.build()

    k, r = kr
    coeff = (k + 1) * binom_mod_p(k, r, p)
    if s == 0:
        builder.add(_sign(k + 1) * coeff, T=(1,), a=r, b=k - r)
    elif s == 1:
        builder.add(_sign(k + 1) * coeff, T=(0,), a=r, b=k - r)
    else:
        for a in enum_I(p, 1, s):
            builder.add(_sign(k) * coeff * _sign(a), T=(1,), a=p * a + 1 + r,
                        b=geometric_exponent(p, 1, s) - (p + 1) * a + k - r)
        for a in enum_I(p, 0, s):
            builder.add(-_sign(k) * coeff * _sign(a), T=(0,), a=p * a + r,
                        b=geometric_exponent(p, 0, s) - (p + 1) * a + k - r)

    return builder.build()


def st_on_Q(p: int, s: int, i: int, target: str) -> DMExpr:
    """St^{(s),(i)} kills both Dickson invariants: they have no exterior part for the operation to consume"""
    if target not in ('Q0', 'Q1'):
        raise ValueError(f'Expected target Q0 or Q1, got {target}')
    return DMExpr(p)


# Degrees and dispatch

def degree_audit(value: ClosedValue, expected_degree: int, p: int) -> bool:
    """True when every term of a nonzero value has the expected total degree"""
    if isinstance(value, DMExpr):
        return all(dm_degree(key, p)[1] == expected_degree for key in value.terms)
    return all(monomial.degree == expected_degree for monomial in value.terms)


def _s_and_i(params: FormulaParams) -> Tuple[int, int]:
    return _need(params.s, 's'), _need(params.i, 'i')


_HANDLERS: Dict[FormulaId, Callable[[int, Variant, FormulaParams], ClosedValue]] = {
    FormulaId.PROP22: lambda p, variant, params: prop22(p, _need(params.u, 'u'), _need(params.v, 'v')),
    FormulaId.LEM23: lambda p, variant, params: lem23(
        p, params.S or (), params.R or (), _need(params.eps, 'eps'), _need(params.k, 'k'), _need(params.b, 'b'),
        _need(params.ell, 'ell')),
    FormulaId.THM31: lambda p, variant, params: thm31(p, *_s_and_i(params), variant=variant),
    FormulaId.LEM32: lambda p, variant, params: lem32(p, _need(params.i, 'i')),
    FormulaId.THM33: lambda p, variant, params: thm33(p, _need(params.i, 'i')),
    FormulaId.THM34_R21: lambda p, variant, params: thm34_r21(p, _need(params.i, 'i'), variant=variant),
    FormulaId.THM34_R201: lambda p, variant, params: thm34_r201(p, _need(params.i, 'i')),
    FormulaId.THM42: lambda p, variant, params: thm42(p, *_s_and_i(params), variant=variant),
    FormulaId.THM43: lambda p, variant, params: thm43(p, *_s_and_i(params), variant=variant),
    FormulaId.THM44: lambda p, variant, params: thm44(p, *_s_and_i(params)),
    FormulaId.STQ: lambda p, variant, params: st_on_Q(p, *_s_and_i(params), target=params.target or ''),
}


def evaluate(formula: FormulaId, variant: Variant, p: int, params: FormulaParams) -> ClosedValue:
    """
    Evaluates one formula

    :param formula: Which statement
    :param variant: Printed or corrected; formulas outside CORRECTED_FORMULAS read the same either way
    :param p:       The prime
    :param params:  The parameters the formula reads

    :return: A DMExpr for the normal-form formulas, a SuperPoly otherwise
    """
    logging.debug(f'Evaluating {formula.value} ({variant.value}) at p={p} with {params.as_dict()}')
    if formula in _TABLES:
        return table_formula(formula, p, params)
    return _HANDLERS[formula](p, variant, params)
