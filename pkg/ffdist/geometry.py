#!/usr/bin/env python3
"""
Points and point sets of F_q^d, the quadratic norm ||x|| = x_1^2 + ... + x_d^2,
spheres S_t and their translates.

A point's rank is sum_j x_j q^j with coordinate 0 least significant.
PointSets are dense frozenbitarrays indexed by rank.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from bitarray import bitarray, frozenbitarray
from bitarray.util import count_and, zeros

from ffdist import config
from ffdist.field import FieldCtx, FieldElement, gauss_closed_form

logger = logging.getLogger(__name__)


# ============================================================================
# POINTS
# ============================================================================

@dataclass(frozen=True)
class Point:
    """Element of F_q^d stored as coordinate ranks."""

    ctx: FieldCtx
    coords: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) < 1:
            raise ValueError("points need at least one coordinate")
        if any(not 0 <= c < self.ctx.q for c in self.coords):
            raise ValueError(f"coordinates {self.coords} outside F_{self.ctx.q}")

    @classmethod
    def of(cls, ctx: FieldCtx, coords: Iterable[int]) -> "Point":
        return cls(ctx, tuple(int(c) for c in coords))

    @classmethod
    def from_rank(cls, ctx: FieldCtx, d: int, rank: int) -> "Point":
        if not 0 <= rank < ctx.q ** d:
            raise ValueError(f"rank {rank} outside [0, {ctx.q ** d})")
        return cls(ctx, tuple((rank // ctx.q ** j) % ctx.q for j in range(d)))

    @classmethod
    def zero(cls, ctx: FieldCtx, d: int) -> "Point":
        return cls(ctx, (0,) * d)

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def rank(self) -> int:
        return sum(c * self.ctx.q ** j for j, c in enumerate(self.coords))

    @property
    def elements(self) -> Tuple[FieldElement, ...]:
        return tuple(FieldElement(self.ctx, c) for c in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "Point") -> "Point":
        return Point.of(self.ctx, self.ctx.add(np.array(self.coords), np.array(other.coords)))

    def __sub__(self, other: "Point") -> "Point":
        return Point.of(self.ctx, self.ctx.sub(np.array(self.coords), np.array(other.coords)))

    def __neg__(self) -> "Point":
        return Point.of(self.ctx, self.ctx.neg(np.array(self.coords)))

    def scale(self, lam: int) -> "Point":
        return Point.of(self.ctx, self.ctx.mul(lam, np.array(self.coords)))

    def dot(self, other: "Point") -> int:
        total = 0
        for a, b in zip(self.coords, other.coords):
            total = self.ctx.add(total, self.ctx.mul(a, b))
        return total

    def __repr__(self) -> str:
        return f"Point{self.coords}"


# ============================================================================
# VECTORIZED COORDINATE HELPERS
# ============================================================================

def _place(ctx: FieldCtx, d: int) -> np.ndarray:
    return ctx.q ** np.arange(d, dtype=np.int64)


@lru_cache(maxsize=64)
def coords_matrix(ctx: FieldCtx, d: int) -> np.ndarray:
    """(q^d, d) matrix of coordinate ranks, row r being the point of rank r."""
    ranks = np.arange(ctx.q ** d, dtype=np.int64)
    out = (ranks[:, None] // _place(ctx, d)[None, :]) % ctx.q
    out.setflags(write=False)
    return out


def ranks_of(ctx: FieldCtx, coords: np.ndarray) -> np.ndarray:
    """Ranks of the rows of a (..., d) coordinate array."""
    coords = np.asarray(coords, dtype=np.int64)
    return coords @ _place(ctx, coords.shape[-1])


def norms_of(ctx: FieldCtx, coords: np.ndarray) -> np.ndarray:
    """||x|| for every row of a (..., d) coordinate array."""
    coords = np.asarray(coords, dtype=np.int64)
    squares = ctx.sq_table[coords]
    acc = squares[..., 0]
    for j in range(1, coords.shape[-1]):
        acc = ctx.add(acc, squares[..., j])
    return np.asarray(acc, dtype=np.int64)


@lru_cache(maxsize=64)
def norms(ctx: FieldCtx, d: int) -> np.ndarray:
    """||x|| indexed by point rank, built one coordinate at a time."""
    table = ctx.sq_table.copy()
    for _ in range(1, d):
        # rank = c_0 + q * rest, so the new coordinate is the fastest one
        table = np.asarray(ctx.add(table[:, None], ctx.sq_table[None, :]), dtype=np.int64).ravel()
    table.setflags(write=False)
    return table


def translate_ranks(ctx: FieldCtx, d: int, ranks: np.ndarray, v: Sequence[int]) -> np.ndarray:
    """Ranks of x + v for every rank x."""
    coords = coords_matrix(ctx, d)[np.asarray(ranks, dtype=np.int64)]
    return ranks_of(ctx, ctx.add(coords, np.asarray(v, dtype=np.int64)[None, :]))


def negate_ranks(ctx: FieldCtx, d: int, ranks: np.ndarray) -> np.ndarray:
    coords = coords_matrix(ctx, d)[np.asarray(ranks, dtype=np.int64)]
    return ranks_of(ctx, ctx.neg(coords))


# ============================================================================
# POINT SETS
# ============================================================================

def _bits_from_mask(mask: np.ndarray) -> frozenbitarray:
    bits = bitarray(endian="little")
    bits.pack(np.asarray(mask, dtype=np.uint8).tobytes())
    return frozenbitarray(bits)


@dataclass(frozen=True)
class PointSet:
    """Subset of F_q^d as a dense bitset over point ranks."""

    ctx: FieldCtx
    d: int
    bits: frozenbitarray

    def __post_init__(self):
        if len(self.bits) != self.ctx.q ** self.d:
            raise ValueError(f"bitset of length {len(self.bits)} does not cover F_{self.ctx.q}^{self.d}")

    # construction --------------------------------------------------------

    @classmethod
    def from_mask(cls, ctx: FieldCtx, d: int, mask: np.ndarray) -> "PointSet":
        return cls(ctx, d, _bits_from_mask(mask))

    @classmethod
    def from_ranks(cls, ctx: FieldCtx, d: int, ranks: Iterable[int]) -> "PointSet":
        ranks = np.asarray(list(ranks) if not isinstance(ranks, np.ndarray) else ranks, dtype=np.int64)
        n = ctx.q ** d
        if ranks.size and (ranks.min() < 0 or ranks.max() >= n):
            raise ValueError(f"point ranks must lie in [0, {n})")
        mask = np.zeros(n, dtype=bool)
        mask[ranks] = True
        return cls.from_mask(ctx, d, mask)

    @classmethod
    def from_points(cls, ctx: FieldCtx, d: int, points: Iterable[Point]) -> "PointSet":
        return cls.from_ranks(ctx, d, [pt.rank for pt in points])

    @classmethod
    def full(cls, ctx: FieldCtx, d: int) -> "PointSet":
        return cls.from_mask(ctx, d, np.ones(ctx.q ** d, dtype=bool))

    @classmethod
    def empty(cls, ctx: FieldCtx, d: int) -> "PointSet":
        return cls(ctx, d, frozenbitarray(zeros(ctx.q ** d, endian="little")))

    # queries ---------------------------------------------------------------

    @property
    def dims(self) -> Tuple[int, int]:
        return self.ctx.q, self.d

    @cached_property
    def cardinality(self) -> int:
        return self.bits.count()

    def __len__(self) -> int:
        return self.cardinality

    def __contains__(self, item) -> bool:
        rank = item.rank if isinstance(item, Point) else int(item)
        return bool(self.bits[rank])

    def mask(self) -> np.ndarray:
        return np.frombuffer(self.bits.unpack(), dtype=np.uint8).astype(bool)

    def ranks(self) -> np.ndarray:
        return np.flatnonzero(self.mask())

    def points(self) -> Iterable[Point]:
        for r in self.ranks():
            yield Point.from_rank(self.ctx, self.d, int(r))

    def indicator(self) -> np.ndarray:
        return self.mask().astype(np.float64)

    def same_space(self, other: "PointSet") -> bool:
        return self.ctx is other.ctx and self.d == other.d

    # derived sets ------------------------------------------------------------

    def translate(self, v) -> "PointSet":
        coords = v.coords if isinstance(v, Point) else tuple(v)
        return PointSet.from_ranks(self.ctx, self.d, translate_ranks(self.ctx, self.d, self.ranks(), coords))

    def negate(self) -> "PointSet":
        return PointSet.from_ranks(self.ctx, self.d, negate_ranks(self.ctx, self.d, self.ranks()))

    def scale(self, lam: int) -> "PointSet":
        coords = coords_matrix(self.ctx, self.d)[self.ranks()]
        return PointSet.from_ranks(self.ctx, self.d, ranks_of(self.ctx, self.ctx.mul(lam, coords)))

    def intersection_size(self, other: "PointSet") -> int:
        if not self.same_space(other):
            raise ValueError("point sets live in different spaces")
        return count_and(self.bits, other.bits)

    def __and__(self, other: "PointSet") -> "PointSet":
        if not self.same_space(other):
            raise ValueError("point sets live in different spaces")
        return PointSet(self.ctx, self.d, frozenbitarray(self.bits & other.bits))

    def __or__(self, other: "PointSet") -> "PointSet":
        if not self.same_space(other):
            raise ValueError("point sets live in different spaces")
        return PointSet(self.ctx, self.d, frozenbitarray(self.bits | other.bits))

    def __repr__(self) -> str:
        return f"PointSet(q={self.ctx.q}, d={self.d}, size={self.cardinality})"


def load_point_set(ctx: FieldCtx, d: int, path) -> PointSet:
    """
    Read a point set file: decimal ranks, one per line, '#' starts a comment.

    Raises:
        ValueError: On unparsable lines or out-of-range ranks
    """
    ranks = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            ranks.append(int(text))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: {text!r} is not a decimal rank") from None
    logger.info(f"Loaded {len(ranks)} points from {path}")
    return PointSet.from_ranks(ctx, d, ranks)


# ============================================================================
# NORMS AND SPHERES
# ============================================================================

def norm(x: Point) -> int:
    """||x|| = x_1^2 + ... + x_d^2 as a field rank."""
    return int(norms_of(x.ctx, np.array(x.coords))[()])


def sphere(ctx: FieldCtx, t: int, d: int, force: bool = False) -> PointSet:
    """S_t = {x in F_q^d : ||x|| = t}, by scanning every point."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    config.check_guard("q^d", ctx.q ** d, config.MAX_POINTS, force)
    return PointSet.from_mask(ctx, d, norms(ctx, d) == t)


def sphere_size_formula(ctx: FieldCtx, t: int, d: int) -> int:
    """
    Exact |S_t| from the quadratic and Gauss sum closed forms.

    Nonzero t: q^{d-1} - q^{(d-2)/2} psi((-1)^{d/2}) for even d and
    q^{d-1} + q^{(d-1)/2} psi((-1)^{(d-1)/2} t) for odd d. For t = 0 the
    odd case is q^{d-1}; the even case is q^{d-1} + (q-1) q^{-1} G_1^d,
    i.e. q^{d-1} + (q-1) psi(-1)^{d/2} q^{d/2-1} since G_1^2 = psi(-1) q.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    q, psi_m1 = ctx.q, ctx.psi_minus_one
    if t == 0:
        if d % 2:
            return q ** (d - 1)
        return q ** (d - 1) + (q - 1) * psi_m1 ** (d // 2) * q ** (d // 2 - 1)
    if d % 2 == 0:
        return q ** (d - 1) - q ** ((d - 2) // 2) * psi_m1 ** (d // 2)
    sign = psi_m1 ** ((d - 1) // 2) * ctx.quad_char(t)
    return q ** (d - 1) + q ** ((d - 1) // 2) * sign


def sphere_sizes_by_convolution(ctx: FieldCtx, d: int) -> np.ndarray:
    """
    |S_t| for every t, by convolving the one-dimensional representation
    counts d times. Costs O(d q^2) and never enumerates F_q^d.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    elems = ctx.elements()
    single = np.bincount(ctx.sq_table, minlength=ctx.q).astype(object)
    counts = single.copy()
    for _ in range(1, d):
        nxt = np.zeros(ctx.q, dtype=object)
        for b in np.flatnonzero(single):
            nxt[ctx.add(elems, int(b))] += counts * single[b]
        counts = nxt
    return counts


def pair_count(ctx: FieldCtx, t: int, d: int) -> int:
    """|{(x, y) : ||x - y|| = t}| = q^d |S_t|."""
    return ctx.q ** d * sphere_size_formula(ctx, t, d)


def pair_count_histogram(ctx: FieldCtx, d: int, force: bool = False) -> np.ndarray:
    """|{(x, y) : ||x - y|| = t}| for every t, by scanning all q^{2d} ordered pairs."""
    config.check_guard("q^(2d)", ctx.q ** (2 * d), config.MAX_PAIR_BRUTE, force)
    coords = coords_matrix(ctx, d)
    counts = np.zeros(ctx.q, dtype=np.int64)
    for x in coords:
        counts += np.bincount(norms_of(ctx, ctx.sub(x[None, :], coords)), minlength=ctx.q)
    return counts


def pair_count_brute(ctx: FieldCtx, t: int, d: int, force: bool = False) -> int:
    return int(pair_count_histogram(ctx, d, force=force)[t])


# ============================================================================
# SPHERE INTERSECTIONS
# ============================================================================

def _check_nonzero(t: int, x: Point) -> None:
    if t == 0:
        raise ValueError("sphere intersections need t != 0")
    if x.is_zero():
        raise ValueError("sphere intersections need x != 0")


def sphere_intersection(ctx: FieldCtx, t: int, x: Point) -> int:
    """|S_t ∩ (S_t + x)| by bitset intersection."""
    _check_nonzero(t, x)
    base = sphere(ctx, t, x.d)
    return base.intersection_size(base.translate(x))


def sphere_intersection_formula(ctx: FieldCtx, t: int, x: Point) -> float:
    """
    Closed form of |S_t ∩ (S_t + x)|, summed over r in F_q minus {0, 1}.

    Odd d:  q^{-d}|S_t|^2 - q^{-1} + q^{-2} G^{d+1} psi(-1) sum psi(t(1-r)^2 + r||x||)
            (over r where the argument is nonzero)
    Even d: q^{-d}|S_t|^2 - q^{-2} - q^{-2}(q-2) G^d + q^{-1} G^d #{r : t(1-r)^2 + r||x|| = 0}

    Returned unrounded so tolerance failures stay visible.
    """
    _check_nonzero(t, x)
    q, d = ctx.q, x.d
    size = sphere_size_formula(ctx, t, d)
    gauss = gauss_closed_form(ctx)
    nx = norm(x)

    r = np.arange(2, q, dtype=np.int64)
    one_minus_r = ctx.sub(1, r)
    args = ctx.add(ctx.mul(t, ctx.square(one_minus_r)), ctx.mul(r, nx))

    if d % 2:
        char_sum = int(np.sum(ctx.psi_table[args]))
        value = (size ** 2 / q ** d - 1 / q
                 + gauss ** (d + 1) * ctx.psi_minus_one * char_sum / q ** 2)
    else:
        roots = int(np.count_nonzero(args == 0))
        value = (size ** 2 / q ** d - 1 / q ** 2
                 - (q - 2) * gauss ** d / q ** 2
                 + gauss ** d * roots / q)
    return float(complex(value).real)


def never_two_witness(ctx: FieldCtx, t: int) -> Optional[Point]:
    """
    A nonzero x in F_q^2 with S_t ∩ (S_t + x) empty.

    For q = 1 (mod 4) this is (1, i) with i^2 = -1. Otherwise the first x in
    rank order with ||x|| outside {0, 4t} and psi(||x||^2 - 4t||x||) = 1.
    None when no such x exists (q = 3).
    """
    if t == 0:
        raise ValueError("never_two_witness needs t != 0")
    if ctx.psi_minus_one == 1:
        return Point.of(ctx, (1, ctx.sqrt(ctx.neg(1))))

    four_t = ctx.mul(ctx.from_int(4), t)
    values = norms(ctx, 2)
    disc = ctx.sub(ctx.square(values), ctx.mul(four_t, values))
    ok = (values != 0) & (values != four_t) & (ctx.psi_table[disc] == 1)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return None
    return Point.from_rank(ctx, 2, int(hits[0]))


# ============================================================================
# THREE-SPHERE CHAINS
# ============================================================================

def three_sphere_chain_count(ctx: FieldCtx, r: int, a: Point, b: Point) -> int:
    """|{(x, y) in (S_r + a) x (S_r + b) : ||x - y|| = r}| by direct enumeration."""
    if r == 0:
        raise ValueError("three_sphere_chain_count needs r != 0")
    if a == b:
        raise ValueError("three_sphere_chain_count needs a != b")
    d = a.d
    base = sphere(ctx, r, d)
    left = base.translate(a)
    right = base.translate(b)
    total = 0
    for x in coords_matrix(ctx, d)[left.ranks()]:
        total += right.intersection_size(base.translate(x))
    return total


def three_sphere_chain_formula(ctx: FieldCtx, r: int, a: Point, b: Point) -> float:
    """
    Planar closed form of the chain count:
    q^{-2}|S_r|^3 + q^{-3} G_1^2 - q^{-1}(q^2 - 3q + 3) + R(a, b, r), where R
    counts s, t != 0 with s - t != 1 and
    -r + (t - s) r / (s t) + ||a - b|| / (1 - s + t) = 0.
    """
    if a.d != 2:
        raise ValueError("the chain closed form is planar (d = 2)")
    if r == 0 or a == b:
        raise ValueError("three_sphere_chain_formula needs r != 0 and a != b")
    q = ctx.q
    gauss = gauss_closed_form(ctx)
    size = sphere_size_formula(ctx, r, 2)
    c = norm(a - b)

    nz = ctx.nonzero()
    s, t = np.meshgrid(nz, nz, indexing="ij")
    s, t = s.ravel(), t.ravel()
    denom = ctx.add(ctx.sub(1, s), t)
    keep = denom != 0
    s, t, denom = s[keep], t[keep], denom[keep]
    first = ctx.div(ctx.mul(r, ctx.sub(t, s)), ctx.mul(s, t))
    total = ctx.add(ctx.add(ctx.neg(r), first), ctx.div(c, denom))
    remainder = int(np.count_nonzero(total == 0))

    value = size ** 3 / q ** 2 + gauss ** 2 / q ** 3 - (q * q - 3 * q + 3) / q + remainder
    return float(complex(value).real)
