#!/usr/bin/env python3
"""
Gauss, Kloosterman and polynomial character sums against their closed forms and bounds.
"""

import math

import numpy as np
import pytest

from ffdist import charsum
from ffdist.field import field_from_q, make_field

SQRT3, SQRT5 = math.sqrt(3), math.sqrt(5)


def test_gauss_sum_examples():
    F3, F5 = field_from_q(3), field_from_q(5)
    assert abs(charsum.gauss_sum(F3, 1).value - 1j * SQRT3) < 1e-9
    assert abs(charsum.gauss_sum(F5, 1).value - SQRT5) < 1e-9
    assert abs(charsum.gauss_sum(F5, 0).value) < 1e-9

    nine = charsum.gauss_sum(field_from_q(9), 1)
    assert abs(nine.value - 3) < 1e-9
    assert nine.passed


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13, 25, 27, 49, 81, 121, 125, 169])
def test_gauss_sum_matches_closed_form(q):
    result = charsum.gauss_sum(field_from_q(q), 1)
    assert abs(result.value - result.closed_form) <= 1e-6
    assert abs(abs(result.value) - math.sqrt(q)) <= 1e-6


def test_gauss_sum_with_alternative_modulus():
    # t^2 + t + 2 is irreducible over Z_3; the closed form does not depend on the modulus
    ctx = make_field(3, 2, modulus=(2, 1, 1))
    assert charsum.gauss_sum(ctx, 1).passed


def test_square_char_sum():
    F5 = field_from_q(5)
    assert abs(charsum.square_char_sum(F5, 1).value - SQRT5) < 1e-9
    assert abs(charsum.square_char_sum(F5, 2).value + SQRT5) < 1e-9
    assert abs(charsum.square_char_sum(field_from_q(3), 2).value + 1j * SQRT3) < 1e-9
    with pytest.raises(ValueError):
        charsum.square_char_sum(F5, 0)


def test_quadratic_vector_sum_examples():
    F5 = field_from_q(5)
    one = charsum.quadratic_vector_sum(F5, 1, [0])
    assert abs(one.value - SQRT5) < 1e-9
    two = charsum.quadratic_vector_sum(F5, 1, [0, 0])
    assert abs(two.value - 5) < 1e-9

    shifted = charsum.quadratic_vector_sum(F5, 2, [1])
    assert abs(shifted.value - F5.add_char(3) * -SQRT5) < 1e-9
    assert shifted.passed


def test_quadratic_vector_sum_random_instances():
    rng = np.random.default_rng(3)
    for q in (3, 7, 9):
        ctx = field_from_q(q)
        for k in (1, 2, 3):
            for _ in range(10):
                t = int(rng.integers(1, q))
                beta = rng.integers(0, q, size=k)
                assert charsum.quadratic_vector_sum(ctx, t, beta).passed


def test_quadratic_vector_sum_rejects_bad_input():
    F5 = field_from_q(5)
    with pytest.raises(ValueError):
        charsum.quadratic_vector_sum(F5, 0, [1])
    with pytest.raises(ValueError):
        charsum.quadratic_vector_sum(F5, 1, [1, 2], k=3)


def test_kloosterman_examples():
    F5 = field_from_q(5)
    trivial = charsum.kloosterman(F5, 1)
    assert abs(trivial.value - (2 + 2 * math.cos(4 * math.pi / 5))) < 1e-9
    twisted = charsum.kloosterman(F5, 0, "quadratic")
    assert abs(twisted.value - SQRT5) < 1e-9
    assert abs(charsum.kloosterman(F5, 0).value + 1) < 1e-9
    with pytest.raises(ValueError):
        charsum.kloosterman(F5, 1, "cubic")


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49])
def test_kloosterman_weil_bound(q):
    ctx = field_from_q(q)
    for twist in charsum.TWISTS:
        for a in range(q):
            result = charsum.kloosterman(ctx, a, twist)
            assert abs(result.value) <= 2 * math.sqrt(q) + 1e-9
            assert result.passed


def test_poly_char_sum_examples():
    F5 = field_from_q(5)
    # u^2 - 4u, and -4 = 1 in F_5
    result = charsum.poly_char_sum(F5, [0, 1, 1])
    assert result.value == -1
    assert result.passed
    assert charsum.poly_char_sum(field_from_q(7), [0, 1]).value == 0


def test_poly_char_sum_rejections():
    F7 = field_from_q(7)
    with pytest.raises(ValueError):
        charsum.poly_char_sum(F7, [3])
    with pytest.raises(ValueError):
        charsum.poly_char_sum(F7, [1, 2])  # 1 + 2u is not monic
    with pytest.raises(ValueError):
        charsum.poly_char_sum(F7, [1, 2, 1])  # (u + 1)^2


def test_perfect_square_detection():
    F7 = field_from_q(7)
    square = charsum.poly_mul(F7, [2, 3, 1], [2, 3, 1])
    assert charsum.is_perfect_square_poly(F7, square)
    assert not charsum.is_perfect_square_poly(F7, [0, 1])
    assert not charsum.is_perfect_square_poly(F7, [1, 0, 0, 1])
    assert charsum.is_perfect_square_poly(F7, [0, 0, 0, 0, 0, 1]) is None


def test_polynomial_bound_on_random_and_structured_polynomials():
    rng = np.random.default_rng(11)
    for q in (5, 7, 9, 11, 13, 25):
        ctx = field_from_q(q)
        for _ in range(20):
            g = charsum.random_admissible_poly(ctx, rng)
            assert charsum.poly_char_sum(ctx, g).passed
        for t in range(1, q):
            assert charsum.poly_char_sum(ctx, charsum.never_two_quadratic(ctx, t)).passed
        for c in range(1, q):
            g = charsum.chain_quartic(ctx, c)
            assert g[-1] == 1 and len(g) == 5
            if not charsum.is_perfect_square_poly(ctx, g):
                result = charsum.poly_char_sum(ctx, g, s=ctx.neg(1))
                assert abs(result.value) <= 3 * math.sqrt(q) + 1e-9


def test_result_dict_shape():
    data = charsum.gauss_sum(field_from_q(9), 1).to_dict()
    assert set(data) == {"value_re", "value_im", "closed_form", "bound", "n_terms", "pass"}
    assert data["pass"] is True
