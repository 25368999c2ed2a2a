"""
Exact arithmetic in the prime field F_p for an odd prime p, together with binomial and multinomial coefficients reduced
mod p (Lucas' theorem) and p-adic digit helpers.

The prime is a runtime value: every function takes it explicitly, and ``PrimeField`` bundles it for callers that work
with a single prime for a longer time.
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence

from sympy import isprime

from algebra.errors import InvalidPrime

# Type aliases
FpScalar = int
PadicDigits = List[int]

MIN_PRIME = 3
MAX_PRIME = 61


def validate_prime(p: int) -> int:
    """
    Checks that `p` is an odd prime in the supported range

    :param p:   The candidate prime

    :return: `p` itself, so the call can be inlined
    """
    if not isinstance(p, int) or not MIN_PRIME <= p <= MAX_PRIME or not isprime(p):
        raise InvalidPrime(f'Expected an odd prime {MIN_PRIME} <= p <= {MAX_PRIME}, got {p}')

    return p


def padic_digits(a: int, p: int) -> PadicDigits:
    """
    Computes the base-p digits of a nonnegative integer, least significant first, without trailing zeros

    :param a:   A nonnegative integer
    :param p:   The base

    :return: The list [alpha_0, alpha_1, ...] with a == sum(alpha_i * p**i); the empty list for a == 0
    """
    if a < 0:
        raise ValueError(f'Expected a nonnegative integer, got {a}')

    digits: PadicDigits = []
    while a:
        a, digit = divmod(a, p)
        digits.append(digit)

    return digits


@lru_cache(maxsize=65536)
def binom_mod_p(b: int, i: int, p: int) -> FpScalar:
    """
    Binomial coefficient C(b, i) mod p by Lucas' theorem: the product of the digit-wise binomials.
    By convention C(b, i) = 0 for i < 0 and for i > b.
    """
    if i < 0 or b < 0 or i > b:
        return 0

    result = 1
    while i:
        b, b_digit = divmod(b, p)
        i, i_digit = divmod(i, p)
        if i_digit > b_digit:
            return 0
        result = result * math.comb(b_digit, i_digit) % p

    return result


def multinom_mod_p(b: int, R: Sequence[int], p: int) -> FpScalar:
    """
    Multinomial coefficient b! / ((b - r_1 - ... - r_m)! r_1! ... r_m!) mod p, written as the product
    C(b, r_1) * C(b - r_1, r_2) * ... of Lucas binomials. It is 0 when r_1 + ... + r_m > b.

    :param b:   A nonnegative integer
    :param R:   The tuple of nonnegative integers (r_1, ..., r_m)
    :param p:   The prime

    :return: The multinomial coefficient reduced into [0, p)
    """
    if any(r < 0 for r in R):
        raise ValueError(f'Expected nonnegative entries, got {R}')

    result = 1
    remaining = b
    for r in R:
        result = result * binom_mod_p(remaining, r, p) % p
        if result == 0:
            return 0
        remaining -= r

    return result


def abs_R(R: Sequence[int], p: int) -> int:
    """
    The weight |R| = (p - 1) r_1 + (p^2 - 1) r_2 + ... + (p^m - 1) r_m by which St^{S,R} raises y-exponents
    """
    return sum((p ** index - 1) * r for index, r in enumerate(R, start=1))


@dataclass(frozen=True)
class PrimeField:
    """
    The field F_p. Elements are plain ints kept in [0, p); the methods below always return reduced values.
    """
    p: int

    def __post_init__(self) -> None:
        validate_prime(self.p)

    def normalize(self, value: int) -> FpScalar:
        return value % self.p

    def add(self, a: FpScalar, b: FpScalar) -> FpScalar:
        return (a + b) % self.p

    def sub(self, a: FpScalar, b: FpScalar) -> FpScalar:
        return (a - b) % self.p

    def mul(self, a: FpScalar, b: FpScalar) -> FpScalar:
        return a * b % self.p

    def neg(self, a: FpScalar) -> FpScalar:
        return -a % self.p

    def inv(self, a: FpScalar) -> FpScalar:
        # Fermat: a^(p-2) is the inverse of a nonzero a
        if a % self.p == 0:
            raise ZeroDivisionError(f'0 has no inverse mod {self.p}')
        return pow(a, self.p - 2, self.p)

    def multinom(self, b: int, R: Sequence[int]) -> FpScalar:
        return multinom_mod_p(b, tuple(R), self.p)

    def digits(self, a: int) -> PadicDigits:
        return padic_digits(a, self.p)

    def abs_R(self, R: Sequence[int]) -> int:
        return abs_R(R, self.p)
