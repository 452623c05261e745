#!/usr/bin/env python3
"""
Fourier transform, inversion, Plancherel, Salem constants and sphere decay.
"""

import numpy as np
import pytest

from ffdist import config, geometry, spectral
from ffdist.field import field_from_q
from ffdist.geometry import PointSet


def test_point_mass_and_full_space():
    F5 = field_from_q(5)
    delta = np.zeros(25)
    delta[0] = 1
    assert np.allclose(spectral.dft(F5, 2, delta).values, 1 / 25)

    full = spectral.dft(F5, 2, PointSet.full(F5, 2)).values
    expected = np.zeros(25)
    expected[0] = 1
    assert np.allclose(full, expected)


def test_sphere_zero_term():
    F5 = field_from_q(5)
    spectrum = spectral.dft(F5, 2, geometry.sphere(F5, 1, 2))
    assert abs(spectrum.values[0] - 4 / 25) < 1e-12


@pytest.mark.parametrize("q, d", [(3, 1), (3, 3), (5, 2), (7, 2), (9, 2), (3, 5)])
def test_factored_transform_matches_naive(q, d):
    ctx = field_from_q(q)
    rng = np.random.default_rng(q + d)
    f = rng.random(q ** d) + 1j * rng.random(q ** d)
    fast = spectral.dft(ctx, d, f).values
    slow = spectral.dft_naive(ctx, d, f).values
    assert np.max(np.abs(fast - slow)) < 1e-9


def test_inversion():
    F7, F3 = field_from_q(7), field_from_q(3)
    rng = np.random.default_rng(1)
    f = rng.integers(0, 2, size=49).astype(float)
    assert np.max(np.abs(spectral.idft(spectral.dft(F7, 2, f)) - f)) < 1e-9

    flat = spectral.Spectrum(F3, 2, np.full(9, 1 / 9, dtype=np.complex128), 9)
    back = spectral.idft(flat)
    assert np.allclose(back, [1] + [0] * 8)

    S = geometry.sphere(F3, 1, 3)
    assert np.allclose(spectral.idft(spectral.dft(F3, 3, S)), S.indicator())


def test_plancherel():
    F9 = field_from_q(9)
    rng = np.random.default_rng(2)
    f = rng.standard_normal(81) + 1j * rng.standard_normal(81)
    assert spectral.plancherel_gap(F9, 2, f) < 1e-8
    assert spectral.plancherel_gap(F9, 2, np.zeros(81)) == 0

    E = PointSet.from_ranks(F9, 2, [0, 5, 17, 80])
    lhs = np.sum(np.abs(spectral.dft(F9, 2, E).values) ** 2)
    assert abs(lhs - 4 / 81) < 1e-12


def test_transform_rejects_wrong_shapes():
    F5 = field_from_q(5)
    with pytest.raises(ValueError):
        spectral.dft(F5, 2, np.zeros(24))
    with pytest.raises(ValueError):
        spectral.dft(F5, 2, PointSet.full(F5, 3))


def test_transform_guards():
    F5 = field_from_q(5)
    with pytest.raises(config.ResourceGuardError):
        spectral.dft_naive(F5, 6, np.zeros(5 ** 6))


def test_salem_constants():
    F7 = field_from_q(7)
    assert spectral.salem_constant(PointSet.full(F7, 2)) < 1e-9
    assert abs(spectral.salem_constant(PointSet.from_ranks(F7, 2, [0])) - 1) < 1e-9
    assert spectral.salem_constant(geometry.sphere(F7, 1, 3)) <= 2.5
    with pytest.raises(ValueError):
        spectral.salem_constant(PointSet.empty(F7, 2))


def test_sphere_ft_formula_matches_transform():
    for q, d in ((5, 2), (7, 3), (9, 2), (3, 4)):
        ctx = field_from_q(q)
        m = np.arange(q ** d)
        for t in range(q):
            exact = spectral.dft(ctx, d, geometry.sphere(ctx, t, d)).values
            assert np.max(np.abs(spectral.sphere_ft_formula(ctx, t, d, m) - exact)) < 1e-9


def test_sphere_decay_example():
    F5 = field_from_q(5)
    report = spectral.sphere_decay_report(F5, 1, 2, seed=0)
    assert report["max_nonzero_freq"] <= 2 * 5 ** -1.5 + 1e-9
    assert abs(report["bound"] - 0.178885438) < 1e-6
    assert report["zero_term"] == pytest.approx(4 / 25)
    assert report["pass"]

    center = spectral.sphere_decay_report(F5, 0, 2, seed=0)
    assert center["decay_pass"] is None


@pytest.mark.parametrize("q, d", [(3, 2), (5, 2), (7, 2), (9, 2), (13, 2), (3, 3), (7, 3), (11, 3), (5, 4)])
def test_sphere_decay_all_radii(q, d):
    ctx = field_from_q(q)
    spectra = spectral.sphere_spectra(ctx, d)
    for t in range(1, q):
        report = spectral.sphere_decay_report(ctx, t, d, seed=t, spectra=spectra)
        assert report["decay_pass"]
        assert report["averaged_pass"]
        assert report["reduction_gap"] <= 1e-9
        assert report["reduction_samples"] == min(20, q ** d - 1) + 1
        assert report["pass"]
