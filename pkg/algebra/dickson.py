"""
Dickson and Mui invariants of GL(2, F_p) acting on P_2, and the Dickson-Mui normal form.

The determinants

    [u, v] = y_1^(p^u) y_2^(p^v) - y_1^(p^v) y_2^(p^u),      [1; u] = x_1 y_2^(p^u) - x_2 y_1^(p^u)

give L_2 = [0, 1], L_{2,0} = [1, 2], L_{2,1} = [0, 2], M_{2;0} = [1; 1], M_{2;1} = [1; 0] and M_{2;0,1} = x_1 x_2.
The Dickson invariants are Q_{2,s} = L_{2,s} / L_2 and the Mui invariants R_{2;T} = M_{2;T} L_2^(p-2).
Every invariant is uniquely a sum of c R_{2;T} Q_{2,0}^a Q_{2,1}^b with T one of {}, {0}, {1}, {0,1}.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple

import numpy as np
from sympy import primitive_root

from algebra.errors import ExponentOverflow, NotInSpan
from algebra.forms import BinaryForm
from algebra.gfp import FpScalar, PrimeField
from algebra.linalg import solve_mod_p
from algebra.superpoly import EXPONENT_LIMIT, Bidegree, Matrix, SuperMonomial, SuperPoly

GENERATOR_NAMES = ('L2', 'L20', 'L21', 'M20', 'M21', 'M201', 'Q0', 'Q1', 'R0', 'R1', 'R01')
INVARIANT_NAMES = ('Q0', 'Q1', 'R0', 'R1', 'R01')

# Exterior part T of a normal-form monomial, grouped by exterior degree
MUI_SETS: Dict[int, Tuple[Tuple[int, ...], ...]] = {0: ((),), 1: ((0,), (1,)), 2: ((0, 1),)}
MUI_NAMES: Dict[Tuple[int, ...], str] = {(): '', (0,): 'R0', (1,): 'R1', (0, 1): 'R01'}

# Exterior indices of a polynomial in two variables, grouped by exterior degree
EXTERIOR_SUBSETS: Dict[int, Tuple[Tuple[int, ...], ...]] = {0: ((),), 1: ((1,), (2,)), 2: ((1, 2),)}


def _power(p: int, u: int) -> int:
    value = p ** u
    if value > EXPONENT_LIMIT:
        raise ExponentOverflow(f'p^{u} exceeds the exponent range for p={p}')
    return value


def bracket(field: PrimeField, u: int, v: int) -> SuperPoly:
    """The determinant [u, v] = y_1^(p^u) y_2^(p^v) - y_1^(p^v) y_2^(p^u)"""
    pu, pv = _power(field.p, u), _power(field.p, v)
    if u == v:
        return SuperPoly.zero(field, 2)

    return SuperPoly(field, 2, {
        SuperMonomial((), (pu, pv)): 1,
        SuperMonomial((), (pv, pu)): -1,
    })


def bracket1(field: PrimeField, u: int) -> SuperPoly:
    """The determinant [1; u] = x_1 y_2^(p^u) - x_2 y_1^(p^u)"""
    pu = _power(field.p, u)
    return SuperPoly(field, 2, {
        SuperMonomial((1,), (0, pu)): 1,
        SuperMonomial((2,), (pu, 0)): -1,
    })


@dataclass(frozen=True)
class DicksonMuiGenerators:
    field: PrimeField
    L2: SuperPoly
    L20: SuperPoly
    L21: SuperPoly
    M20: SuperPoly
    M21: SuperPoly
    M201: SuperPoly
    Q0: SuperPoly
    Q1: SuperPoly
    R0: SuperPoly
    R1: SuperPoly
    R01: SuperPoly

    def __getitem__(self, name: str) -> SuperPoly:
        if name not in GENERATOR_NAMES:
            raise KeyError(f'Unknown generator {name}, expected one of {", ".join(GENERATOR_NAMES)}')
        value: SuperPoly = getattr(self, name)
        return value

    def as_dict(self) -> Dict[str, SuperPoly]:
        return {name: self[name] for name in GENERATOR_NAMES}


@lru_cache(maxsize=None)
def generators(p: int) -> DicksonMuiGenerators:
    """
    Builds the eleven named polynomials for a prime. Q's come from exact division, R's from multiplication by
    L_2^(p-2). Results are cached per prime.
    """
    field = PrimeField(p)
    L2 = bracket(field, 0, 1)
    L20 = bracket(field, 1, 2)
    L21 = bracket(field, 0, 2)
    M20 = bracket1(field, 1)
    M21 = bracket1(field, 0)
    M201 = SuperPoly.monomial(field, 2, ext=(1, 2))
    L2_power = L2 ** (p - 2)

    logging.info(f'Building Dickson-Mui generators for p={p}')
    return DicksonMuiGenerators(
        field=field,
        L2=L2, L20=L20, L21=L21,
        M20=M20, M21=M21, M201=M201,
        Q0=L20.exact_div(L2),
        Q1=L21.exact_div(L2),
        R0=M20 * L2_power,
        R1=M21 * L2_power,
        R01=M201 * L2_power,
    )


# GL(2, F_p)

def gl2_generators(p: int) -> Tuple[Matrix, ...]:
    """A transvection, the swap and a primitive-root diagonal, which together generate GL(2, F_p)"""
    g = int(primitive_root(p))
    return ((1, 1), (0, 1)), ((0, 1), (1, 0)), ((g, 0), (0, 1))


@lru_cache(maxsize=None)
def gl2_elements(p: int) -> Tuple[Matrix, ...]:
    """All (p^2 - 1)(p^2 - p) invertible 2x2 matrices over F_p"""
    return tuple(
        ((a, b), (c, d))
        for a, b, c, d in itertools.product(range(p), repeat=4)
        if (a * d - b * c) % p
    )


def determinant(matrix: Matrix, p: int) -> FpScalar:
    return (matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]) % p


def is_gl2_invariant(f: SuperPoly, exhaustive: bool = False) -> bool:
    """
    :param f:           A polynomial in two variables
    :param exhaustive:  Check every group element instead of a generating set

    :return: True if every substitution leaves f unchanged
    """
    matrices = gl2_elements(f.p) if exhaustive else gl2_generators(f.p)
    return all(f.substitute(matrix) == f for matrix in matrices)


# Normal form

class DMKey(NamedTuple):
    """The monomial R_{2;T} Q_{2,0}^a Q_{2,1}^b"""
    T: Tuple[int, ...]
    a: int
    b: int

    def render(self) -> str:
        factors = [MUI_NAMES[self.T]] if self.T else []
        for name, exponent in (('Q0', self.a), ('Q1', self.b)):
            if exponent == 1:
                factors.append(name)
            elif exponent:
                factors.append(f'{name}^{exponent}')
        return '*'.join(factors)


class DMExpr:
    """
    A linear combination of normal-form monomials with coefficients in F_p, zero coefficients never stored
    """
    __slots__ = ('p', '_terms')

    def __init__(self, p: int, terms: Optional[Mapping[DMKey, int]] = None):
        self.p = p
        self._terms: Dict[DMKey, FpScalar] = {}
        for key, coeff in (terms or {}).items():
            if key.T not in MUI_NAMES or key.a < 0 or key.b < 0:
                raise ValueError(f'Not a normal-form monomial: {key}')
            if coeff % p:
                self._terms[key] = coeff % p

    @classmethod
    def from_pairs(cls, p: int, pairs: Iterable[Tuple[DMKey, int]]) -> 'DMExpr':
        """Sums repeated keys"""
        terms: Dict[DMKey, int] = {}
        for key, coeff in pairs:
            terms[key] = terms.get(key, 0) + coeff
        return cls(p, terms)

    @classmethod
    def single(cls, p: int, T: Tuple[int, ...] = (), a: int = 0, b: int = 0, coeff: int = 1) -> 'DMExpr':
        return cls(p, {DMKey(T, a, b): coeff})

    @property
    def terms(self) -> Mapping[DMKey, FpScalar]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def sorted_terms(self) -> List[Tuple[DMKey, FpScalar]]:
        return sorted(self._terms.items(), key=lambda item: (len(item[0].T), item[0].T, item[0].a, item[0].b))

    def __add__(self, other: 'DMExpr') -> 'DMExpr':
        return DMExpr.from_pairs(self.p, itertools.chain(self._terms.items(), other._terms.items()))

    def __neg__(self) -> 'DMExpr':
        return self.scale(-1)

    def __sub__(self, other: 'DMExpr') -> 'DMExpr':
        return self + (-other)

    def scale(self, factor: int) -> 'DMExpr':
        return DMExpr(self.p, {key: coeff * factor for key, coeff in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DMExpr):
            return NotImplemented
        return self.p == other.p and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.p, frozenset(self._terms.items())))

    def __str__(self) -> str:
        """E.g. '2*R0*Q0^2 + R1*Q1'; coefficient 1 and exponent 1 are omitted, the empty sum prints as '0'"""
        if not self._terms:
            return '0'

        rendered = []
        for key, coeff in self.sorted_terms():
            monomial = key.render()
            if not monomial:
                rendered.append(str(coeff))
            elif coeff == 1:
                rendered.append(monomial)
            else:
                rendered.append(f'{coeff}*{monomial}')

        return ' + '.join(rendered)

    def __repr__(self) -> str:
        return f'DMExpr(p={self.p}, {self})'


def mui_degree(T: Tuple[int, ...], p: int) -> int:
    return {(): 0, (0,): 2 * p * p - 3, (1,): 2 * p * p - 2 * p - 1, (0, 1): 2 * p * p - 2 * p - 2}[T]


def dm_degree(key: DMKey, p: int) -> Bidegree:
    """(exterior degree, total degree) of R_{2;T} Q_{2,0}^a Q_{2,1}^b"""
    return len(key.T), mui_degree(key.T, p) + 2 * (p * p - 1) * key.a + 2 * (p * p - p) * key.b


def dm_keys(p: int, bidegree: Bidegree) -> List[DMKey]:
    """All normal-form monomials of a bidegree, in rendering order"""
    ext_degree, degree = bidegree
    keys = []
    for T in MUI_SETS.get(ext_degree, ()):
        rest = degree - mui_degree(T, p)
        if rest < 0 or rest % 2:
            continue
        half = rest // 2
        for a in range(half // (p * p - 1) + 1):
            remaining = half - (p * p - 1) * a
            if remaining % (p * p - p) == 0:
                keys.append(DMKey(T, a, remaining // (p * p - p)))

    return keys


class DenseGenerators(NamedTuple):
    Q0: BinaryForm
    Q1: BinaryForm
    L2: BinaryForm
    L2_power: BinaryForm
    # M_{2;T} split by exterior monomial: the coefficient form of x_1, x_2 or x_1 x_2
    mui: Dict[Tuple[int, ...], Dict[Tuple[int, ...], BinaryForm]]


@lru_cache(maxsize=None)
def dense_generators(p: int) -> DenseGenerators:
    gens = generators(p)
    return DenseGenerators(
        Q0=BinaryForm.from_superpoly(gens.Q0, p * p - 1),
        Q1=BinaryForm.from_superpoly(gens.Q1, p * p - p),
        L2=BinaryForm.from_superpoly(gens.L2, p + 1),
        L2_power=BinaryForm.from_superpoly(gens.L2 ** (p - 2), (p + 1) * (p - 2)),
        mui={
            (): {(): BinaryForm.one(p)},
            (0,): {(1,): BinaryForm.monomial(p, 0, p), (2,): BinaryForm.monomial(p, p, 0, -1)},
            (1,): {(1,): BinaryForm.monomial(p, 0, 1), (2,): BinaryForm.monomial(p, 1, 0, -1)},
            (0, 1): {(1, 2): BinaryForm.one(p)},
        },
    )


@lru_cache(maxsize=4096)
def q_power(p: int, a: int, b: int) -> BinaryForm:
    dense = dense_generators(p)
    return (dense.Q0 ** a) * (dense.Q1 ** b)


@lru_cache(maxsize=4096)
def basis_components(key: DMKey, p: int) -> Dict[Tuple[int, ...], BinaryForm]:
    """The normal-form monomial as one binary form per exterior monomial"""
    dense = dense_generators(p)
    polynomial_part = q_power(p, key.a, key.b)
    if key.T:
        polynomial_part = polynomial_part * dense.L2_power

    return {ext: form * polynomial_part for ext, form in dense.mui[key.T].items()}


def dm_evaluate(expr: DMExpr) -> SuperPoly:
    """Expands a normal form into the polynomial it denotes"""
    p = expr.p
    field = PrimeField(p)
    sums: Dict[Tuple[Tuple[int, ...], int], BinaryForm] = {}
    for key, coeff in expr.terms.items():
        for ext, form in basis_components(key, p).items():
            scaled = form.scale(coeff)
            slot = (ext, form.degree)
            sums[slot] = sums[slot] + scaled if slot in sums else scaled

    result = SuperPoly.zero(field, 2)
    for (ext, _), form in sorted(sums.items(), key=lambda item: item[0]):
        result = result + form.to_superpoly(field, ext)

    return result


def _component_vector(piece: SuperPoly, ext_degree: int, y_degree: int) -> np.ndarray:
    """Stacks the coefficient forms of the exterior monomials of a bihomogeneous piece"""
    grouped: Dict[Tuple[int, ...], Dict[Tuple[int, int], int]] = {ext: {} for ext in EXTERIOR_SUBSETS[ext_degree]}
    for monomial, coeff in piece.terms.items():
        grouped[monomial.ext][(monomial.exps[0], monomial.exps[1])] = coeff

    return np.concatenate([
        BinaryForm.from_exponents(piece.p, y_degree, grouped[ext]).coeffs for ext in EXTERIOR_SUBSETS[ext_degree]
    ])


def dm_decompose(f: SuperPoly) -> DMExpr:
    """
    Writes a polynomial in Dickson-Mui normal form by solving one linear system over F_p per bidegree

    :param f:   A polynomial in two variables; inhomogeneous input is split into bihomogeneous pieces

    :return: The unique normal form evaluating to f
    """
    if f.nvars != 2:
        raise ValueError(f'Normal forms exist for two variables only, got n={f.nvars}')

    p = f.p
    terms: Dict[DMKey, int] = {}
    for bidegree, piece in f.homogeneous_pieces().items():
        ext_degree, degree = bidegree
        keys = dm_keys(p, bidegree)
        if not keys:
            raise NotInSpan(f'No invariant monomials in bidegree {bidegree} for p={p}')

        y_degree = (degree - ext_degree) // 2
        target = _component_vector(piece, ext_degree, y_degree)
        matrix = np.column_stack([
            np.concatenate([basis_components(key, p)[ext].coeffs for ext in EXTERIOR_SUBSETS[ext_degree]])
            for key in keys
        ])
        solution = solve_mod_p(matrix, target, p)
        logging.debug(f'Decomposed bidegree {bidegree} against {len(keys)} normal-form monomials')
        terms.update({key: int(c) for key, c in zip(keys, solution) if c})

    return DMExpr(p, terms)
