"""
Dense homogeneous binary forms over F_p. A form of degree d in y_1, y_2 is stored as a numpy vector c of length d + 1,
with c[j] the coefficient of y_1^j y_2^(d-j).

Dickson invariants and their powers have thousands of terms at larger primes, and most of the work on them is
multiplication. Convolving dense vectors is much faster there than multiplying sparse term maps.
"""
from typing import Dict, Tuple

import numpy as np

from algebra.errors import NotHomogeneous
from algebra.gfp import PrimeField
from algebra.superpoly import SuperMonomial, SuperPoly


class BinaryForm:
    """
    A homogeneous form in y_1, y_2 with coefficients in F_p. The zero form keeps its degree.
    """
    __slots__ = ('p', 'degree', 'coeffs')

    def __init__(self, p: int, degree: int, coeffs: np.ndarray):
        if degree < 0 or len(coeffs) != degree + 1:
            raise ValueError(f'A form of degree {degree} needs {degree + 1} coefficients, got {len(coeffs)}')
        self.p = p
        self.degree = degree
        self.coeffs = np.asarray(coeffs, dtype=np.int64) % p

    @classmethod
    def zero(cls, p: int, degree: int) -> 'BinaryForm':
        return cls(p, degree, np.zeros(degree + 1, dtype=np.int64))

    @classmethod
    def one(cls, p: int) -> 'BinaryForm':
        return cls(p, 0, np.ones(1, dtype=np.int64))

    @classmethod
    def monomial(cls, p: int, e1: int, e2: int, coeff: int = 1) -> 'BinaryForm':
        coeffs = np.zeros(e1 + e2 + 1, dtype=np.int64)
        coeffs[e1] = coeff
        return cls(p, e1 + e2, coeffs)

    @classmethod
    def from_exponents(cls, p: int, degree: int, terms: Dict[Tuple[int, int], int]) -> 'BinaryForm':
        """
        :param terms:   Map (e1, e2) -> coefficient, with e1 + e2 == degree for every key
        """
        coeffs = np.zeros(degree + 1, dtype=np.int64)
        for (e1, e2), coeff in terms.items():
            if e1 + e2 != degree:
                raise NotHomogeneous(f'Term y1^{e1} y2^{e2} does not have degree {degree}')
            coeffs[e1] = (coeffs[e1] + coeff) % p
        return cls(p, degree, coeffs)

    @classmethod
    def from_superpoly(cls, f: SuperPoly, degree: int) -> 'BinaryForm':
        """
        Converts a pure polynomial in two variables whose terms all have y-degree `degree`
        """
        if f.nvars != 2 or not f.is_pure():
            raise ValueError('Only pure polynomials in y_1, y_2 convert to binary forms')
        return cls.from_exponents(f.p, degree, {(m.exps[0], m.exps[1]): c for m, c in f.terms.items()})

    def to_superpoly(self, field: PrimeField, ext: Tuple[int, ...] = ()) -> SuperPoly:
        """The form as a sparse polynomial, optionally multiplied by the exterior monomial `ext` (increasing)"""
        d = self.degree
        return SuperPoly(field, 2, {
            SuperMonomial(ext, (int(j), d - int(j))): int(self.coeffs[j]) for j in np.flatnonzero(self.coeffs)
        })

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __add__(self, other: 'BinaryForm') -> 'BinaryForm':
        self._check_compatible(other)
        return BinaryForm(self.p, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other: 'BinaryForm') -> 'BinaryForm':
        self._check_compatible(other)
        return BinaryForm(self.p, self.degree, self.coeffs - other.coeffs)

    def __neg__(self) -> 'BinaryForm':
        return BinaryForm(self.p, self.degree, -self.coeffs)

    def scale(self, factor: int) -> 'BinaryForm':
        return BinaryForm(self.p, self.degree, self.coeffs * (factor % self.p))

    def __mul__(self, other: 'BinaryForm') -> 'BinaryForm':
        if self.p != other.p:
            raise ValueError(f'Forms over different primes {self.p} and {other.p}')
        return BinaryForm(self.p, self.degree + other.degree, np.convolve(self.coeffs, other.coeffs) % self.p)

    def frobenius(self) -> 'BinaryForm':
        """The p-th power: in characteristic p it spreads the coefficients p positions apart"""
        coeffs = np.zeros(self.degree * self.p + 1, dtype=np.int64)
        coeffs[::self.p] = self.coeffs
        return BinaryForm(self.p, self.degree * self.p, coeffs)

    def __pow__(self, exponent: int) -> 'BinaryForm':
        if exponent < 0:
            raise ValueError(f'Negative exponent {exponent}')

        result = BinaryForm.one(self.p)
        base = self
        while exponent:
            exponent, digit = divmod(exponent, self.p)
            for _ in range(digit):
                result = result * base
            if exponent:
                base = base.frobenius()

        return result

    def _check_compatible(self, other: 'BinaryForm') -> None:
        if self.p != other.p or self.degree != other.degree:
            raise ValueError(f'Cannot add forms of degree {self.degree} and {other.degree} (p={self.p}, {other.p})')

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.p == other.p and self.degree == other.degree and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.p, self.degree, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        return f'BinaryForm(p={self.p}, degree={self.degree}, nonzero={int(np.count_nonzero(self.coeffs))})'
