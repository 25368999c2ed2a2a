import math

import pytest

from algebra.gfp import PrimeField, abs_R, binom_mod_p, multinom_mod_p, padic_digits, validate_prime


def test_lucas_agrees_with_exact_binomials() -> None:
    for p in (3, 5, 7):
        for b in range(40):
            for i in range(-1, b + 2):
                expected = math.comb(b, i) % p if 0 <= i <= b else 0
                assert binom_mod_p(b, i, p) == expected


def test_multinomial() -> None:
    # 4! / (1! 1! 2!) = 12
    assert multinom_mod_p(4, (1, 1), 5) == 12 % 5
    assert multinom_mod_p(3, (1,), 3) == 0
    assert multinom_mod_p(2, (1, 2), 3) == 0
    assert multinom_mod_p(5, (), 3) == 1
    assert multinom_mod_p(2, (0, 1), 3) == 2


def test_padic_digits() -> None:
    assert padic_digits(0, 3) == []
    assert padic_digits(10, 3) == [1, 0, 1]
    assert padic_digits(24, 5) == [4, 4]
    with pytest.raises(ValueError):
        padic_digits(-1, 3)


def test_weight_of_R() -> None:
    assert abs_R((), 3) == 0
    assert abs_R((1,), 3) == 2
    assert abs_R((0, 1), 3) == 8
    assert abs_R((2, 1), 5) == 2 * 4 + 24


def test_prime_validation() -> None:
    assert validate_prime(61) == 61
    for bad in (2, 9, 1, 67):
        with pytest.raises(ValueError):
            validate_prime(bad)
    with pytest.raises(ValueError):
        PrimeField(15)


def test_field_operations() -> None:
    field = PrimeField(7)
    assert field.add(5, 4) == 2
    assert field.sub(1, 3) == 5
    assert field.neg(0) == 0
    assert all(field.mul(a, field.inv(a)) == 1 for a in range(1, 7))
    with pytest.raises(ZeroDivisionError):
        field.inv(14)
    assert field.normalize(-8) == 6
    assert field.mul(4, 5) == 6
