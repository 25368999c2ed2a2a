import numpy as np
from numpy.testing import assert_array_equal

from algebra.forms import BinaryForm
from algebra.gfp import PrimeField
from algebra.superpoly import SuperPoly

F5 = PrimeField(5)


def test_roundtrip_through_superpoly() -> None:
    f = SuperPoly.y(F5, 2, 1, 3) * SuperPoly.y(F5, 2, 2, 2) + SuperPoly.y(F5, 2, 2, 5).scale(2)
    form = BinaryForm.from_superpoly(f, 5)
    assert_array_equal(form.coeffs, np.array([2, 0, 0, 1, 0, 0]))
    assert form.to_superpoly(F5) == f


def test_product_matches_sparse_product() -> None:
    f = SuperPoly.y(F5, 2, 1) + SuperPoly.y(F5, 2, 2).scale(3)
    g = SuperPoly.y(F5, 2, 1, 2).scale(4) + SuperPoly.y(F5, 2, 2, 2)
    product = BinaryForm.from_superpoly(f, 1) * BinaryForm.from_superpoly(g, 2)
    assert product.to_superpoly(F5) == f * g


def test_power_matches_sparse_power() -> None:
    f = SuperPoly.y(F5, 2, 1) - SuperPoly.y(F5, 2, 2)
    form = BinaryForm.from_superpoly(f, 1)
    for exponent in (0, 1, 4, 5, 7, 26):
        assert (form ** exponent).to_superpoly(F5) == f ** exponent


def test_frobenius_spreads_coefficients() -> None:
    form = BinaryForm(5, 1, np.array([1, 2]))
    assert_array_equal(form.frobenius().coeffs, np.array([1, 0, 0, 0, 0, 2]))


def test_zero_and_arithmetic() -> None:
    a = BinaryForm.monomial(5, 1, 1, 3)
    assert (a - a).is_zero()
    assert (a + a.scale(4)).is_zero()
    assert -a == a.scale(4)
    assert BinaryForm.zero(5, 2).degree == 2
