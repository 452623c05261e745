#!/usr/bin/env python3
"""
Normalized Fourier analysis on F_q^d.

Forward:  f^(xi) = q^{-d} sum_x f(x) chi(-x.xi)
Inverse:  f(x)   = sum_xi chi(x.xi) f^(xi)

Both run as d passes of the one-dimensional q x q character matrix, one
per coordinate axis, since chi(-x.xi) factors over coordinates.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Union

import numpy as np

from ffdist import config
from ffdist.field import FieldCtx, gauss_closed_form, tolerance
from ffdist.geometry import PointSet, coords_matrix, norms, sphere_size_formula

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, PointSet]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """q^d complex values indexed by frequency rank."""

    ctx: FieldCtx
    d: int
    values: np.ndarray
    n_terms: int

    def __post_init__(self):
        if self.values.shape != (self.ctx.q ** self.d,):
            raise ValueError(f"spectrum has shape {self.values.shape}, expected ({self.ctx.q ** self.d},)")

    @property
    def dims(self):
        return self.ctx.q, self.d

    @property
    def tolerance(self) -> float:
        return tolerance(self.n_terms)

    def max_nonzero(self) -> float:
        """max_{xi != 0} |f^(xi)|"""
        if self.values.size < 2:
            return 0.0
        return float(np.max(np.abs(self.values[1:])))


@lru_cache(maxsize=16)
def character_matrix(ctx: FieldCtx) -> np.ndarray:
    """M[x, xi] = chi(-x xi); symmetric."""
    config.check_guard("q (character matrix)", ctx.q, config.MAX_CHARACTER_MATRIX_Q)
    elems = ctx.elements()
    matrix = ctx.chi_table[ctx.neg(ctx.mul(elems[:, None], elems[None, :]))]
    matrix.setflags(write=False)
    return matrix


def _as_array(ctx: FieldCtx, d: int, f: ArrayLike) -> np.ndarray:
    if isinstance(f, PointSet):
        if f.ctx is not ctx or f.d != d:
            raise ValueError("point set lives in a different space")
        return f.indicator().astype(np.complex128)
    arr = np.asarray(f, dtype=np.complex128).ravel()
    if arr.size != ctx.q ** d:
        raise ValueError(f"function has {arr.size} values, expected q^d = {ctx.q ** d}")
    return arr


def _apply_per_axis(arr: np.ndarray, matrix: np.ndarray, q: int, d: int) -> np.ndarray:
    cube = arr.reshape((q,) * d)
    for axis in range(d):
        cube = np.moveaxis(np.tensordot(cube, matrix, axes=([axis], [0])), -1, axis)
    return cube.reshape(-1)


def dft(ctx: FieldCtx, d: int, f: ArrayLike, force: bool = False) -> Spectrum:
    """Factored forward transform, O(d q^{d+1})."""
    n = ctx.q ** d
    config.check_guard("q^d", n, config.MAX_POINTS, force)
    arr = _as_array(ctx, d, f)
    values = _apply_per_axis(arr, character_matrix(ctx), ctx.q, d) / n
    return Spectrum(ctx, d, values, n)


def dft_naive(ctx: FieldCtx, d: int, f: ArrayLike, force: bool = False) -> Spectrum:
    """Forward transform by the O(q^{2d}) double loop."""
    n = ctx.q ** d
    config.check_guard("q^d (naive transform)", n, config.MAX_NAIVE_POINTS, force)
    arr = _as_array(ctx, d, f)
    coords = coords_matrix(ctx, d)
    values = np.empty(n, dtype=np.complex128)
    for xi in range(n):
        dots = np.zeros(n, dtype=np.int64)
        for j in range(d):
            dots = ctx.add(dots, ctx.mul(coords[:, j], int(coords[xi, j])))
        values[xi] = np.sum(arr * ctx.chi_table[ctx.neg(dots)])
    return Spectrum(ctx, d, values / n, n)


def idft(spectrum: Spectrum, force: bool = False) -> np.ndarray:
    """Inverse transform; carries no normalization factor."""
    ctx, d = spectrum.ctx, spectrum.d
    config.check_guard("q^d", ctx.q ** d, config.MAX_POINTS, force)
    return _apply_per_axis(spectrum.values, np.conj(character_matrix(ctx)), ctx.q, d)


def plancherel_gap(ctx: FieldCtx, d: int, f: ArrayLike, force: bool = False) -> float:
    """|sum_xi |f^(xi)|^2 - q^{-d} sum_x |f(x)|^2|"""
    arr = _as_array(ctx, d, f)
    spectrum = dft(ctx, d, arr, force=force)
    lhs = float(np.sum(np.abs(spectrum.values) ** 2))
    rhs = float(np.sum(np.abs(arr) ** 2)) / ctx.q ** d
    return abs(lhs - rhs)


def salem_constant(U: PointSet, force: bool = False) -> float:
    """K(U) = q^d max_{xi != 0} |U^(xi)| / |U|^{1/2}, the least admissible Salem constant."""
    if U.cardinality == 0:
        raise ValueError("salem_constant needs a nonempty set")
    spectrum = dft(U.ctx, U.d, U, force=force)
    return U.ctx.q ** U.d * spectrum.max_nonzero() / U.cardinality ** 0.5


# ============================================================================
# SPHERE TRANSFORMS
# ============================================================================

def sphere_ft_formula(ctx: FieldCtx, t: int, d: int, m) -> np.ndarray:
    """
    S_t^(m) through the one-dimensional reduction
    q^{-d-1} G_1^d sum_{s != 0} chi(||m|| / (-4s) - s t) psi(s)^d,
    plus q^{-1} at m = 0.
    """
    m = np.atleast_1d(np.asarray(m, dtype=np.int64))
    norm_m = norms(ctx, d)[m]
    four = ctx.from_int(4)
    total = np.zeros(m.size, dtype=np.complex128)
    for s in range(1, ctx.q):
        coef = ctx.inv(ctx.neg(ctx.mul(four, s)))
        args = ctx.sub(ctx.mul(norm_m, coef), ctx.mul(s, t))
        total += ctx.chi_table[args] * int(ctx.psi_table[s]) ** d
    values = gauss_closed_form(ctx) ** d * total / ctx.q ** (d + 1)
    values[m == 0] += 1 / ctx.q
    return values


def sphere_spectra(ctx: FieldCtx, d: int, force: bool = False) -> np.ndarray:
    """(q, q^d) array whose row t is the transform of S_t."""
    table = norms(ctx, d)
    rows = [dft(ctx, d, (table == t).astype(np.complex128), force=force).values for t in range(ctx.q)]
    return np.vstack(rows)


def sphere_decay_report(ctx: FieldCtx, t: int, d: int, seed: Optional[int] = None,
                        samples: int = 20, spectra: Optional[np.ndarray] = None,
                        force: bool = False) -> Dict:
    """
    Fourier decay of S_t checked three ways.

    Args:
        ctx: Field
        t: Sphere radius (the decay claim needs t != 0)
        d: Dimension
        seed: Seed for the frequencies where the one-dimensional reduction is compared
        samples: Number of nonzero frequencies to compare
        spectra: Precomputed sphere_spectra(ctx, d), reused across radii
        force: Skip resource guards

    Returns:
        Dict with the maximal nonzero-frequency value against 2 q^{-(d+1)/2},
        the zero term, max |sum_{t' != a} S_t'^(xi)| for every a != 0, the
        partition gap and the reduction discrepancy, plus an overall 'pass'.
    """
    q, n = ctx.q, ctx.q ** d
    if spectra is None:
        spectra = sphere_spectra(ctx, d, force=force)
    own = spectra[t]
    bound = 2 * q ** (-(d + 1) / 2)
    max_nonzero = float(np.max(np.abs(own[1:]))) if n > 1 else 0.0

    full = spectra.sum(axis=0)
    delta = np.zeros(n)
    delta[0] = 1.0
    partition_gap = float(np.max(np.abs(full - delta)))

    averaged = {}
    for a in range(1, q):
        rest = full - spectra[a]
        averaged[str(a)] = float(np.max(np.abs(rest[1:]))) if n > 1 else 0.0
    averaged_max = max(averaged.values()) if averaged else 0.0

    rng = np.random.default_rng(seed)
    freqs = rng.choice(np.arange(1, n), size=min(samples, n - 1), replace=False) if n > 1 else np.array([], dtype=np.int64)
    freqs = np.concatenate([[0], np.sort(freqs)]).astype(np.int64)
    reduction_gap = float(np.max(np.abs(sphere_ft_formula(ctx, t, d, freqs) - own[freqs])))

    zero_expected = sphere_size_formula(ctx, t, d) / n
    zero_gap = abs(own[0] - zero_expected)

    decay_pass = None if t == 0 else max_nonzero <= bound + 1e-9
    averaged_pass = averaged_max <= bound + 1e-9
    partition_pass = partition_gap <= tolerance(n * q)
    reduction_pass = reduction_gap <= 1e-9

    report = {
        "q": q,
        "d": d,
        "t": t,
        "max_nonzero_freq": max_nonzero,
        "bound": bound,
        "decay_pass": decay_pass,
        "zero_term": float(own[0].real),
        "zero_term_expected": zero_expected,
        "zero_term_scaled": float(own[0].real) * q,
        "averaged": averaged,
        "averaged_max": averaged_max,
        "averaged_pass": averaged_pass,
        "partition_gap": partition_gap,
        "reduction_gap": reduction_gap,
        "reduction_samples": int(freqs.size),
        "pass": bool((decay_pass is not False) and averaged_pass and partition_pass
                     and reduction_pass and zero_gap <= 1e-9),
    }
    logger.debug(f"decay q={q} d={d} t={t}: max={max_nonzero:.3e} bound={bound:.3e}")
    return report
