#!/usr/bin/env python3
"""
Character sums over F_q: Gauss sums, the square-completion identities,
Kloosterman sums and quadratic-character sums of polynomials.

Each sum is evaluated by brute force and returned together with the
closed form or bound it is expected to satisfy.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ffdist import config
from ffdist.field import FieldCtx, gauss_closed_form, tolerance

logger = logging.getLogger(__name__)

TWISTS = ("trivial", "quadratic")


@dataclass(frozen=True)
class CharSumResult:
    """
    A brute-force character sum with its cross-check.

    Attributes:
        value: The summed value
        closed_form: Exact value the sum must equal, when known
        bound: Upper bound on |value|, when the identity is an inequality
        n_terms: Number of unit-modulus summands (drives the tolerance)
    """

    value: complex
    closed_form: Optional[complex]
    bound: Optional[float]
    n_terms: int

    @property
    def tolerance(self) -> float:
        return tolerance(self.n_terms)

    @property
    def passed(self) -> bool:
        ok = True
        if self.closed_form is not None:
            ok = ok and abs(self.value - self.closed_form) <= self.tolerance
        if self.bound is not None:
            ok = ok and abs(self.value) <= self.bound + self.tolerance
        return ok

    def to_dict(self) -> dict:
        return {
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "closed_form": self.closed_form,
            "bound": self.bound,
            "n_terms": self.n_terms,
            "pass": self.passed,
        }


# ============================================================================
# GAUSS SUMS
# ============================================================================

def gauss_explicit(ctx: FieldCtx) -> complex:
    """Closed form of G_1(psi, chi)."""
    return gauss_closed_form(ctx)


def gauss_sum(ctx: FieldCtx, a: int) -> CharSumResult:
    """G_a = sum_{s != 0} psi(s) chi(a s); equals psi(a) G_1 for a != 0 and 0 for a = 0."""
    s = ctx.nonzero()
    value = complex(np.sum(ctx.psi_table[s] * ctx.chi_table[ctx.mul(a, s)]))
    closed = 0j if a == 0 else ctx.quad_char(a) * gauss_explicit(ctx)
    return CharSumResult(value, closed, None, ctx.q - 1)


def square_char_sum(ctx: FieldCtx, a: int) -> CharSumResult:
    """sum_{s in F_q} chi(a s^2) = psi(a) G_1 for a != 0."""
    if a == 0:
        raise ValueError("square_char_sum needs a != 0 (the sum is q at a = 0)")
    s = ctx.elements()
    value = complex(np.sum(ctx.chi_table[ctx.mul(a, ctx.square(s))]))
    return CharSumResult(value, ctx.quad_char(a) * gauss_explicit(ctx), None, ctx.q)


def quadratic_vector_sum(ctx: FieldCtx, t: int, beta: Sequence[int], k: Optional[int] = None,
                         force: bool = False) -> CharSumResult:
    """
    Brute-force sum over alpha in F_q^k of chi(t alpha.alpha + beta.alpha).

    Completing the square in every coordinate gives
    chi(||beta|| / (-4t)) psi(t)^k G_1^k.
    """
    beta = [int(b) for b in beta]
    k = len(beta) if k is None else int(k)
    if t == 0:
        raise ValueError("quadratic_vector_sum needs t != 0")
    if len(beta) != k:
        raise ValueError(f"beta has length {len(beta)}, expected {k}")
    config.check_guard("q^k", ctx.q ** k, config.MAX_POINTS, force)

    elems = ctx.elements()
    quad = ctx.mul(t, ctx.square(elems))

    # exponent of every alpha, accumulated coordinate by coordinate
    acc = np.zeros(1, dtype=np.int64)
    for b in beta:
        term = ctx.add(quad, ctx.mul(b, elems))
        acc = ctx.add(acc[:, None], term[None, :]).ravel()
    value = complex(np.sum(ctx.chi_table[acc]))

    norm_beta = 0
    for b in beta:
        norm_beta = ctx.add(norm_beta, ctx.square(b))
    minus_four_t = ctx.neg(ctx.mul(ctx.from_int(4), t))
    closed = (ctx.add_char(ctx.div(norm_beta, minus_four_t))
              * ctx.quad_char(t) ** k * gauss_explicit(ctx) ** k)
    return CharSumResult(value, closed, None, ctx.q ** k)


# ============================================================================
# KLOOSTERMAN SUMS
# ============================================================================

def kloosterman(ctx: FieldCtx, a: int, twist: str = "trivial") -> CharSumResult:
    """
    K(a) = sum_{s != 0} chi(a/s + s) phi(s) with phi trivial or quadratic.

    The reported bound is 2 sqrt(q). At a = 0 the sum degenerates: -1 for
    the trivial twist and G_1 for the quadratic one; both are recorded as
    closed forms.
    """
    if twist not in TWISTS:
        raise ValueError(f"twist must be one of {TWISTS}, got {twist!r}")
    s = ctx.nonzero()
    terms = ctx.chi_table[ctx.add(ctx.mul(a, ctx.inv(s)), s)]
    if twist == "quadratic":
        terms = terms * ctx.psi_table[s]
    value = complex(np.sum(terms))

    closed = None
    if a == 0:
        closed = gauss_explicit(ctx) if twist == "quadratic" else -1 + 0j
    return CharSumResult(value, closed, 2 * math.sqrt(ctx.q), ctx.q - 1)


# ============================================================================
# POLYNOMIAL CHARACTER SUMS
# ============================================================================

def _trim(g: Sequence[int]) -> List[int]:
    g = [int(c) for c in g]
    while len(g) > 1 and g[-1] == 0:
        g.pop()
    return g


def poly_mul(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj))
    return _trim(out)


def poly_add(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> List[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([ctx.add(x, y) for x, y in zip(a, b)])


def poly_neg(ctx: FieldCtx, a: Sequence[int]) -> List[int]:
    return [ctx.neg(c) for c in a]


def poly_eval(ctx: FieldCtx, g: Sequence[int], xs) -> np.ndarray:
    """Horner evaluation of g (low-to-high) at every rank in xs."""
    xs = np.asarray(xs, dtype=np.int64)
    acc = np.zeros_like(xs)
    for c in reversed(list(g)):
        acc = ctx.add(ctx.mul(acc, xs), c)
    return np.asarray(acc, dtype=np.int64)


def is_perfect_square_poly(ctx: FieldCtx, g: Sequence[int]) -> Optional[bool]:
    """
    Whether g = c h^2 over F_q, by coefficient matching.

    Only degrees up to four are decided; larger degrees return None and the
    caller's assertion is trusted.
    """
    g = _trim(g)
    deg = len(g) - 1
    if deg > 4:
        return None
    lead = g[-1]
    if lead == 0:
        return True
    if deg % 2 or ctx.quad_char(lead) != 1:
        return False
    if deg == 0:
        return True

    monic = [ctx.div(c, lead) for c in g]
    m = deg // 2
    half = ctx.inv(2)

    # h = x^m + h_{m-1} x^{m-1} + ... + h_0, solved from the top down
    h = [0] * m + [1]
    for step in range(1, m + 1):
        idx = 2 * m - step
        rest = 0
        for i in range(m - step + 1, m + 1):
            j = idx - i
            if m - step < j <= m:
                rest = ctx.add(rest, ctx.mul(h[i], h[j]))
        h[m - step] = ctx.mul(ctx.sub(monic[idx], rest), half)

    return poly_mul(ctx, h, h) == _trim(monic)


def poly_char_sum(ctx: FieldCtx, g: Sequence[int], s: int = 1, e: Optional[int] = None) -> CharSumResult:
    """
    sum_{t in F_q} psi(s g(t)) for a monic non-square polynomial g.

    The bound (e - 1) sqrt(q) uses e = deg g unless the caller passes the
    number of distinct roots of g in its splitting field.

    Raises:
        ValueError: Constant or non-monic g, or g detected as a square
    """
    g = _trim(g)
    deg = len(g) - 1
    if deg < 1:
        raise ValueError("poly_char_sum needs a polynomial of positive degree")
    if g[-1] != 1:
        raise ValueError(f"polynomial {g} is not monic")
    if is_perfect_square_poly(ctx, g):
        raise ValueError(f"polynomial {g} is a perfect square; the character sum bound does not apply")

    values = poly_eval(ctx, g, ctx.elements())
    total = int(np.sum(ctx.psi_table[ctx.mul(s, values)]))
    roots = deg if e is None else int(e)
    return CharSumResult(complex(total), None, (roots - 1) * math.sqrt(ctx.q), ctx.q)


def never_two_quadratic(ctx: FieldCtx, t: int) -> List[int]:
    """u^2 - 4t u: its values decide when S_t and a translate can be disjoint in the plane."""
    return [0, ctx.neg(ctx.mul(ctx.from_int(4), t)), 1]


def chain_quartic(ctx: FieldCtx, c: int) -> List[int]:
    """
    Monic -g(t, c) where g(t, c) = 4t(t+1)^2 - ((c-3)t - t^2 - 1)^2.

    Summing psi(-(-g)) with s = -1 gives sum_t psi(g(t, c)).
    """
    four = ctx.from_int(4)
    one = 1
    lhs = poly_mul(ctx, [0, four], poly_mul(ctx, [one, one], [one, one]))
    inner = [ctx.neg(one), ctx.sub(c, ctx.from_int(3)), ctx.neg(one)]
    g = poly_add(ctx, lhs, poly_neg(ctx, poly_mul(ctx, inner, inner)))
    return poly_neg(ctx, g)


def random_admissible_poly(ctx: FieldCtx, rng: np.random.Generator, max_degree: int = 4) -> List[int]:
    """Random monic polynomial of degree 1..max_degree that is not a perfect square."""
    while True:
        deg = int(rng.integers(1, max_degree + 1))
        g = [int(c) for c in rng.integers(0, ctx.q, size=deg)] + [1]
        if not is_perfect_square_poly(ctx, g):
            return g
