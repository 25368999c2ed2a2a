"""
The bigraded commutative superalgebra P_n = E(x_1, ..., x_n) (x) P(y_1, ..., y_n) over F_p, with deg x_i = 1 and
deg y_i = 2. The x's anticommute and square to zero, the y's commute with everything.

Polynomials are sparse maps from canonical monomials to nonzero coefficients. A monomial keeps its exterior factors
in increasing index order, which fixes the sign convention: reordering factors costs (-1)^(number of inversions).
"""
import logging
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from algebra.errors import DivisorHasExteriorPart, ExponentOverflow, NotDivisible, NotHomogeneous, ZeroPolynomial
from algebra.gfp import FpScalar, PrimeField

# Exponents are meant to fit a signed 64-bit integer, as they would in a compiled implementation
EXPONENT_LIMIT = 2 ** 63 - 1

# Type aliases
Matrix = Sequence[Sequence[int]]
Bidegree = Tuple[int, int]


class SuperMonomial(NamedTuple):
    """
    x_{ext[0]} x_{ext[1]} ... y_1^{exps[0]} ... y_n^{exps[n-1]}, with ext strictly increasing and 1-based
    """
    ext: Tuple[int, ...]
    exps: Tuple[int, ...]

    @property
    def ext_degree(self) -> int:
        return len(self.ext)

    @property
    def degree(self) -> int:
        return len(self.ext) + 2 * sum(self.exps)


@lru_cache(maxsize=4096)
def merge_exterior(left: Tuple[int, ...], right: Tuple[int, ...]) -> Optional[Tuple[Tuple[int, ...], int]]:
    """
    Multiplies two exterior monomials given as increasing index tuples.

    :param left:    Indices of the left factor, increasing
    :param right:   Indices of the right factor, increasing

    :return: None if the factors share an index (x_i^2 = 0), otherwise the merged indices and the sign +1 or -1 given
             by the parity of the inversions counted during the merge
    """
    merged: List[int] = []
    inversions = 0
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] < right[j]:
            merged.append(left[i])
            i += 1
        elif left[i] > right[j]:
            merged.append(right[j])
            # right[j] jumps over every remaining left factor
            inversions += len(left) - i
            j += 1
        else:
            return None

    merged.extend(left[i:])
    merged.extend(right[j:])

    return tuple(merged), -1 if inversions % 2 else 1


def add_exponents(left: Tuple[int, ...], right: Tuple[int, ...]) -> Tuple[int, ...]:
    exps = tuple(a + b for a, b in zip(left, right))
    if any(e > EXPONENT_LIMIT for e in exps):
        raise ExponentOverflow(f'Exponent overflow multiplying {left} by {right}')

    return exps


def multiply_monomials(left: SuperMonomial, right: SuperMonomial) -> Optional[Tuple[SuperMonomial, int]]:
    """The product of two monomials as (monomial, sign), or None when it vanishes"""
    if not right.ext:
        return SuperMonomial(left.ext, add_exponents(left.exps, right.exps)), 1
    if not left.ext:
        return SuperMonomial(right.ext, add_exponents(left.exps, right.exps)), 1

    merged = merge_exterior(left.ext, right.ext)
    if merged is None:
        return None
    ext, sign = merged

    return SuperMonomial(ext, add_exponents(left.exps, right.exps)), sign


class SuperPoly:
    """
    An element of P_n over F_p. Values are immutable after construction.
    """
    __slots__ = ('field', 'nvars', '_terms')

    def __init__(self, field: PrimeField, nvars: int, terms: Optional[Mapping[SuperMonomial, int]] = None):
        """
        :param field:   The prime field of the coefficients
        :param nvars:   The number n of x's and of y's
        :param terms:   Monomials with integer coefficients; coefficients are reduced mod p and zeros dropped
        """
        self.field = field
        self.nvars = nvars
        clean: Dict[SuperMonomial, FpScalar] = {}
        if terms:
            for monomial, coeff in terms.items():
                coeff = field.normalize(coeff)
                if coeff:
                    clean[monomial] = coeff
        self._terms = clean

    # Constructors

    @classmethod
    def zero(cls, field: PrimeField, nvars: int) -> 'SuperPoly':
        return cls(field, nvars)

    @classmethod
    def constant(cls, field: PrimeField, nvars: int, coeff: int = 1) -> 'SuperPoly':
        return cls(field, nvars, {SuperMonomial((), (0,) * nvars): coeff})

    @classmethod
    def one(cls, field: PrimeField, nvars: int) -> 'SuperPoly':
        return cls.constant(field, nvars, 1)

    @classmethod
    def monomial(
            cls, field: PrimeField, nvars: int, ext: Iterable[int] = (), exps: Optional[Sequence[int]] = None,
            coeff: int = 1) -> 'SuperPoly':
        """
        Builds coeff * x_{ext...} * y^exps. The exterior indices may come in any order; the sign of sorting them is
        applied, and a repeated index gives zero.
        """
        indices = tuple(ext)
        for index in indices:
            if not 1 <= index <= nvars:
                raise ValueError(f'Exterior index {index} out of range 1..{nvars}')
        powers = tuple(exps) if exps is not None else (0,) * nvars
        if len(powers) != nvars or any(e < 0 for e in powers):
            raise ValueError(f'Expected {nvars} nonnegative exponents, got {powers}')
        if len(set(indices)) != len(indices):
            return cls.zero(field, nvars)

        # Bubble the exterior factors into increasing order, flipping the sign at each swap
        ordered = list(indices)
        sign = 1
        for end in range(len(ordered) - 1, 0, -1):
            for pos in range(end):
                if ordered[pos] > ordered[pos + 1]:
                    ordered[pos], ordered[pos + 1] = ordered[pos + 1], ordered[pos]
                    sign = -sign

        return cls(field, nvars, {SuperMonomial(tuple(ordered), powers): sign * coeff})

    @classmethod
    def x(cls, field: PrimeField, nvars: int, index: int) -> 'SuperPoly':
        return cls.monomial(field, nvars, ext=(index,))

    @classmethod
    def y(cls, field: PrimeField, nvars: int, index: int, exponent: int = 1) -> 'SuperPoly':
        if not 1 <= index <= nvars:
            raise ValueError(f'Polynomial index {index} out of range 1..{nvars}')
        exps = [0] * nvars
        exps[index - 1] = exponent
        return cls.monomial(field, nvars, exps=exps)

    # Inspection

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def terms(self) -> Mapping[SuperMonomial, FpScalar]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_pure(self) -> bool:
        """True when no term carries an exterior factor"""
        return all(not monomial.ext for monomial in self._terms)

    def bidegree(self) -> Bidegree:
        """
        :return: (exterior degree, total degree) shared by all terms
        """
        if not self._terms:
            raise ZeroPolynomial('The zero polynomial has no bidegree')

        degrees = {(monomial.ext_degree, monomial.degree) for monomial in self._terms}
        if len(degrees) != 1:
            raise NotHomogeneous(f'Polynomial mixes bidegrees {sorted(degrees)}')

        return degrees.pop()

    def homogeneous_pieces(self) -> Dict[Bidegree, 'SuperPoly']:
        """Splits the polynomial into its bihomogeneous components"""
        pieces: Dict[Bidegree, Dict[SuperMonomial, FpScalar]] = {}
        for monomial, coeff in self._terms.items():
            pieces.setdefault((monomial.ext_degree, monomial.degree), {})[monomial] = coeff

        return {bidegree: self._like(terms) for bidegree, terms in sorted(pieces.items())}

    def sorted_terms(self) -> List[Tuple[SuperMonomial, FpScalar]]:
        """Terms in printing order: more exterior factors first, then by index, then higher powers of y_1 first"""
        return sorted(
            self._terms.items(),
            key=lambda item: (-len(item[0].ext), item[0].ext, tuple(-e for e in item[0].exps)),
        )

    # Arithmetic

    def _like(self, terms: Mapping[SuperMonomial, int]) -> 'SuperPoly':
        return SuperPoly(self.field, self.nvars, terms)

    def _check_compatible(self, other: 'SuperPoly') -> None:
        if self.field != other.field or self.nvars != other.nvars:
            raise ValueError(
                f'Incompatible operands: p={self.p}, n={self.nvars} versus p={other.p}, n={other.nvars}'
            )

    def __add__(self, other: 'SuperPoly') -> 'SuperPoly':
        self._check_compatible(other)
        terms = dict(self._terms)
        for monomial, coeff in other._terms.items():
            terms[monomial] = self.field.add(terms.get(monomial, 0), coeff)

        return self._like(terms)

    def __neg__(self) -> 'SuperPoly':
        return self._like({monomial: self.field.neg(coeff) for monomial, coeff in self._terms.items()})

    def __sub__(self, other: 'SuperPoly') -> 'SuperPoly':
        return self + (-other)

    def scale(self, factor: int) -> 'SuperPoly':
        return self._like({monomial: coeff * factor for monomial, coeff in self._terms.items()})

    def __mul__(self, other: Union['SuperPoly', int]) -> 'SuperPoly':
        if isinstance(other, int):
            return self.scale(other)

        self._check_compatible(other)
        terms: Dict[SuperMonomial, int] = {}
        for left, left_coeff in self._terms.items():
            for right, right_coeff in other._terms.items():
                product = multiply_monomials(left, right)
                if product is None:
                    continue
                monomial, sign = product
                terms[monomial] = terms.get(monomial, 0) + sign * left_coeff * right_coeff

        return self._like(terms)

    def __rmul__(self, other: int) -> 'SuperPoly':
        return self.scale(other)

    def frobenius(self) -> 'SuperPoly':
        """
        The p-th power. Odd parts square to zero and the even part is commutative, so only the pure polynomial terms
        survive, with their exponents multiplied by p and coefficients unchanged (c^p = c in F_p).
        """
        p = self.p
        terms: Dict[SuperMonomial, int] = {}
        for monomial, coeff in self._terms.items():
            if monomial.ext:
                continue
            exps = tuple(e * p for e in monomial.exps)
            if any(e > EXPONENT_LIMIT for e in exps):
                raise ExponentOverflow(f'Exponent overflow in the p-th power of {monomial}')
            terms[SuperMonomial((), exps)] = coeff

        return self._like(terms)

    def __pow__(self, exponent: int) -> 'SuperPoly':
        """
        Exponentiation through the p-adic digits of the exponent: f^e = prod_j (f^(p^j))^(alpha_j), with
        f^(p^j) computed by repeated Frobenius.
        """
        if exponent < 0:
            raise ValueError(f'Negative exponent {exponent}')

        result = SuperPoly.one(self.field, self.nvars)
        base = self
        for digit in self.field.digits(exponent):
            for _ in range(digit):
                result = result * base
            base = base.frobenius()

        return result

    def exact_div(self, divisor: 'SuperPoly') -> 'SuperPoly':
        """
        Divides by a pure polynomial (no exterior part) that divides this polynomial exactly. Works per exterior
        component by leading-term elimination in lexicographic order of the y-exponents.

        :param divisor: A nonzero pure polynomial

        :return: The quotient q with q * divisor == self
        """
        self._check_compatible(divisor)
        if divisor.is_zero():
            raise ZeroPolynomial('Division by the zero polynomial')
        if not divisor.is_pure():
            raise DivisorHasExteriorPart(f'Divisor {divisor} has an exterior part')

        divisor_terms = [(monomial.exps, coeff) for monomial, coeff in divisor._terms.items()]
        lead_exps, lead_coeff = max(divisor_terms)
        lead_inverse = self.field.inv(lead_coeff)

        components: Dict[Tuple[int, ...], Dict[Tuple[int, ...], int]] = {}
        for monomial, coeff in self._terms.items():
            components.setdefault(monomial.ext, {})[monomial.exps] = coeff

        quotient: Dict[SuperMonomial, int] = {}
        for ext, remainder in components.items():
            while remainder:
                top = max(remainder)
                shift = tuple(a - b for a, b in zip(top, lead_exps))
                if min(shift) < 0:
                    raise NotDivisible(f'{self} is not divisible by {divisor}')

                factor = self.field.mul(remainder[top], lead_inverse)
                quotient[SuperMonomial(ext, shift)] = factor
                for exps, coeff in divisor_terms:
                    key = tuple(a + b for a, b in zip(shift, exps))
                    value = self.field.sub(remainder.get(key, 0), self.field.mul(factor, coeff))
                    if value:
                        remainder[key] = value
                    else:
                        remainder.pop(key, None)

        return self._like(quotient)

    def substitute(self, matrix: Matrix) -> 'SuperPoly':
        """
        Simultaneous linear substitution x_i -> sum_j M[i][j] x_j and y_i -> sum_j M[i][j] y_j: row i of the matrix
        is the image of the i-th variable. With this convention substitute(substitute(f, A), B) equals
        substitute(f, A @ B).
        """
        n = self.nvars
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError(f'Expected a {n}x{n} matrix, got {matrix}')

        x_images = [
            self._like({SuperMonomial((j + 1,), (0,) * n): matrix[i][j] for j in range(n)}) for i in range(n)
        ]
        y_images = [
            self._like({SuperMonomial((), tuple(int(k == j) for k in range(n))): matrix[i][j] for j in range(n)})
            for i in range(n)
        ]
        powers: Dict[Tuple[int, int], SuperPoly] = {}

        images = []
        for monomial, coeff in self._terms.items():
            image = SuperPoly.constant(self.field, n, coeff)
            for index in monomial.ext:
                image = image * x_images[index - 1]
            for i, exponent in enumerate(monomial.exps):
                if exponent == 0:
                    continue
                if (i, exponent) not in powers:
                    powers[(i, exponent)] = y_images[i] ** exponent
                image = image * powers[(i, exponent)]
            images.append(image)

        return sum_polys(self.field, n, images)

    # Comparison and display

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperPoly):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.p, self.nvars, frozenset(self._terms.items())))

    def __str__(self) -> str:
        """The polynomial in the text grammar, e.g. '2*x1*y2^3 + 1*y1^4'; the zero polynomial prints as '0'"""
        if not self._terms:
            return '0'

        rendered = []
        for monomial, coeff in self.sorted_terms():
            factors = [str(coeff)]
            factors.extend(f'x{index}' for index in monomial.ext)
            factors.extend(f'y{index}^{e}' for index, e in enumerate(monomial.exps, start=1) if e)
            rendered.append('*'.join(factors))

        return ' + '.join(rendered)

    def __repr__(self) -> str:
        return f'SuperPoly(p={self.p}, n={self.nvars}, {self})'


def sum_polys(field: PrimeField, nvars: int, polys: Iterable[SuperPoly]) -> SuperPoly:
    terms: Dict[SuperMonomial, int] = {}
    for poly in polys:
        for monomial, coeff in poly.terms.items():
            terms[monomial] = terms.get(monomial, 0) + coeff

    result = SuperPoly(field, nvars, terms)
    logging.debug(f'Summed into {len(result)} terms')
    return result
