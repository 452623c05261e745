#!/usr/bin/env python3
"""
Field arithmetic, characters and the Gauss sum closed form.
"""

import cmath

import numpy as np
import pytest

from ffdist import config
from ffdist.field import (
    default_modulus,
    field_from_q,
    gauss_closed_form,
    is_irreducible,
    make_field,
)


def test_prime_field_and_default_modulus():
    F5 = make_field(5)
    assert F5.q == 5 and F5.l == 1

    F9 = make_field(3, 2)
    # 1 + t^2, low-to-high
    assert F9.modulus == (1, 0, 1)
    assert default_modulus(3, 2) == (1, 0, 1)
    assert is_irreducible((1, 0, 1), 3)
    assert not is_irreducible((2, 0, 1), 3)  # t^2 - 1 = (t - 1)(t + 1)


def test_field_cache_returns_same_context():
    assert make_field(3, 2) is field_from_q(9)


@pytest.mark.parametrize("p, l", [(4, 1), (1, 1), (2, 1), (3, 0)])
def test_bad_field_parameters(p, l):
    with pytest.raises(ValueError):
        make_field(p, l)


def test_bad_moduli():
    with pytest.raises(ValueError):
        make_field(3, 2, modulus=(2, 0, 1))  # reducible
    with pytest.raises(ValueError):
        make_field(3, 2, modulus=(1, 0, 2))  # not monic
    with pytest.raises(ValueError):
        make_field(3, 2, modulus=(1, 1))  # wrong degree


def test_field_from_q_rejects_non_prime_powers():
    for q in (2, 6, 12, 15):
        with pytest.raises(ValueError):
            field_from_q(q)


def test_field_size_guard():
    with pytest.raises(config.ResourceGuardError):
        field_from_q(10 ** 6 + 3)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 25, 27])
def test_field_axioms_exhaustive(q):
    ctx = field_from_q(q)
    x, y = np.meshgrid(ctx.elements(), ctx.elements(), indexing="ij")
    assert np.array_equal(ctx.add(x, y), ctx.add(y, x))
    assert np.array_equal(ctx.mul(x, y), ctx.mul(y, x))
    assert np.array_equal(ctx.add(x, 0), x)
    assert np.array_equal(ctx.mul(x, 1), x)
    assert np.all(ctx.add(x, ctx.neg(x)) == 0)

    nz = ctx.nonzero()
    assert np.all(ctx.mul(nz, ctx.inv(nz)) == 1)
    with pytest.raises(ZeroDivisionError):
        ctx.inv(0)

    # frobenius is additive
    lhs = ctx.power(ctx.add(x, y), ctx.p)
    rhs = ctx.add(ctx.power(x, ctx.p), ctx.power(y, ctx.p))
    assert np.array_equal(lhs, rhs)


def test_distributivity_f27():
    ctx = field_from_q(27)
    rng = np.random.default_rng(7)
    a, b, c = (rng.integers(0, 27, size=500) for _ in range(3))
    assert np.array_equal(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)))


def test_trace_values():
    F5 = field_from_q(5)
    assert F5.trace(3) == 3

    F9 = field_from_q(9)
    i = 3  # the element t, with t^2 = -1
    assert F9.mul(i, i) == F9.neg(1)
    assert F9.trace(1) == 2
    assert F9.trace(i) == 0


def test_trace_is_linear():
    ctx = field_from_q(25)
    a, b = np.meshgrid(ctx.elements(), ctx.elements(), indexing="ij")
    assert np.array_equal(ctx.trace(ctx.add(a, b)), (ctx.trace(a) + ctx.trace(b)) % ctx.p)


def test_additive_character():
    F5 = field_from_q(5)
    assert F5.add_char(0) == pytest.approx(1)
    assert abs(F5.add_char(2) - cmath.exp(4j * cmath.pi / 5)) < 1e-12
    assert abs(np.sum(F5.add_char(F5.elements()))) < 1e-9


def test_quadratic_character():
    F5 = field_from_q(5)
    assert F5.quad_char(4) == 1
    assert F5.quad_char(2) == -1
    for q in (3, 5, 7, 9, 11, 13):
        ctx = field_from_q(q)
        assert ctx.quad_char(0) == 0
        assert np.count_nonzero(ctx.psi_table == 1) == (q - 1) // 2
        assert ctx.psi_minus_one == (1 if q % 4 == 1 else -1)


def test_sqrt():
    F5 = field_from_q(5)
    assert F5.sqrt(4) == 2
    assert F5.sqrt(2) is None
    F17 = field_from_q(17)
    assert F17.sqrt(F17.neg(1)) == 4
    assert F17.sqrt(F17.inv(2)) == 3


def test_element_round_trip():
    F9 = field_from_q(9)
    assert not F9.element_at(0)
    assert F9.digits_of(F9.element_at(3).rank) == (0, 1)
    assert F9.index_of(F9.element_at(7)) == 7
    with pytest.raises(ValueError):
        F9.element_at(9)


def test_field_element_operators():
    F7 = field_from_q(7)
    a, b = F7.element_at(3), F7.element_at(5)
    assert (a + b).rank == 1
    assert (a - b).rank == 5
    assert (a * b).rank == 1
    assert (a / b).rank == F7.mul(3, F7.inv(5))
    assert (-a).rank == 4
    assert (a ** 6).rank == 1
    assert (a * a.inverse()).rank == 1
    assert (2 * a).rank == 6


@pytest.mark.parametrize("q, expected", [
    (3, 1j * 3 ** 0.5),
    (5, 5 ** 0.5),
    (7, 1j * 7 ** 0.5),
    (9, 3),
    (25, -5),
])
def test_gauss_closed_form_values(q, expected):
    assert abs(gauss_closed_form(field_from_q(q)) - expected) < 1e-9


def test_gauss_square_is_psi_minus_one_q():
    for q in (3, 5, 7, 9, 11, 13, 25, 27, 49):
        ctx = field_from_q(q)
        assert abs(gauss_closed_form(ctx) ** 2 - ctx.psi_minus_one * q) < 1e-9
