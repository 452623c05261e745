#!/usr/bin/env python3
"""
k-point J-configurations inside subsets E of F_q^d.

A configuration is an ordered k-tuple (x^1, ..., x^k) of points of E with
||x^i - x^j|| = a_ij for every pair (i, j) in J. Indices are 1-based to
match the edge grammar "1-2:1,2-3:4".
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, islice, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ffdist import config
from ffdist.field import FieldCtx
from ffdist.geometry import Point, PointSet, coords_matrix, norms, norms_of, ranks_of, sphere_size_formula

logger = logging.getLogger(__name__)

Edge = Tuple[int, int, int]

# rows of pairwise norms are cached only below this many points
ROW_CACHE_LIMIT = 4096


# ============================================================================
# CONFIGURATION SPECS
# ============================================================================

def parse_edges(text: str) -> List[Edge]:
    """
    Parse "1-2:1,2-3:4" into [(1, 2, 1), (2, 3, 4)].

    Pairs are normalized so that i < j; colors are field ranks.
    """
    edges = []
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        try:
            pair, color = chunk.split(":")
            i, j = (int(v) for v in pair.split("-"))
            a = int(color)
        except ValueError:
            raise ValueError(f"bad edge {chunk!r}; expected the form I-J:COLOR") from None
        edges.append((min(i, j), max(i, j), a))
    return edges


@dataclass(frozen=True)
class ConfigSpec:
    """
    k points and the prescribed colors a_ij on the pairs of J.

    Only structural validity is enforced here; the hypothesis
    1 <= k-1 <= n <= d of the counting theorem is checked separately so
    that k = 1 with J empty stays expressible.
    """

    k: int
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k = {self.k} must be at least 1")
        seen = set()
        for i, j, a in self.edges:
            if not 1 <= i < j <= self.k:
                raise ValueError(f"pair ({i}, {j}) is not a pair of distinct indices in 1..{self.k}")
            if (i, j) in seen:
                raise ValueError(f"pair ({i}, {j}) listed twice")
            if a == 0:
                raise ValueError(f"pair ({i}, {j}) has color 0; colors must be nonzero")
            seen.add((i, j))

    @classmethod
    def build(cls, k: int, edges: Sequence[Edge]) -> "ConfigSpec":
        return cls(int(k), tuple(sorted((int(i), int(j), int(a)) for i, j, a in edges)))

    @classmethod
    def parse(cls, k: int, text: str) -> "ConfigSpec":
        return cls.build(k, parse_edges(text))

    @classmethod
    def default(cls, k: int, n: int, color: int = 1) -> "ConfigSpec":
        """A path through the k points, then further pairs in lexicographic order, n edges in all."""
        path = [(i, i + 1) for i in range(1, k)]
        others = [pr for pr in combinations(range(1, k + 1), 2) if pr not in path]
        pairs = (path + others)[:n]
        if len(pairs) < n:
            raise ValueError(f"{k} points carry at most {k * (k - 1) // 2} pairs, asked for {n}")
        return cls.build(k, [(i, j, color) for i, j in pairs])

    @classmethod
    def progression(cls, ctx: FieldCtx, k: int) -> "ConfigSpec":
        """All pairs with a_ij = (j - i)^2: the pseudo-arithmetic progression of length k."""
        if ctx.p <= k - 1:
            raise ValueError(
                f"p = {ctx.p} <= k - 1 = {k - 1}: the gap (j - i)^2 vanishes for j - i = p, "
                f"so the progression needs a distance 0 edge"
            )
        edges = [(i, j, ctx.from_int((j - i) ** 2)) for i, j in combinations(range(1, k + 1), 2)]
        return cls.build(k, edges)

    @property
    def n(self) -> int:
        return len(self.edges)

    @property
    def J(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((i, j) for i, j, _ in self.edges)

    @property
    def colors(self) -> Dict[Tuple[int, int], int]:
        return {(i, j): a for i, j, a in self.edges}

    @property
    def palette_size(self) -> int:
        return len({a for _, _, a in self.edges})

    def satisfies_theorem_hypothesis(self, d: int) -> bool:
        return 1 <= self.k - 1 <= self.n <= d

    def with_edge(self, i: int, j: int, a: int) -> "ConfigSpec":
        return ConfigSpec.build(self.k, list(self.edges) + [(min(i, j), max(i, j), a)])

    def dilated(self, ctx: FieldCtx, lam: int) -> "ConfigSpec":
        """Colors multiplied by lam^2, matching the dilation x -> lam x."""
        lam2 = ctx.square(lam)
        return ConfigSpec.build(self.k, [(i, j, ctx.mul(lam2, a)) for i, j, a in self.edges])

    def to_dict(self) -> dict:
        return {"k": self.k, "n": self.n, "edges": [f"{i}-{j}:{a}" for i, j, a in self.edges],
                "palette_size": self.palette_size}


# ============================================================================
# COUNTING
# ============================================================================

class _Backtracker:
    """Depth-first extension of partial tuples, filtering candidates by pairwise norms."""

    def __init__(self, E: PointSet, spec: ConfigSpec, distinct: bool):
        self.ctx = E.ctx
        self.spec = spec
        self.distinct = distinct
        self.ranks = E.ranks()
        self.coords = coords_matrix(E.ctx, E.d)[self.ranks]
        self.size = self.ranks.size
        self._cache = {} if self.size <= ROW_CACHE_LIMIT else None

        for _, _, a in spec.edges:
            if not 0 < a < self.ctx.q:
                raise ValueError(f"color {a} is not a nonzero element of F_{self.ctx.q}")

        # constraints[level] lists (earlier level, color), 0-based
        self.constraints: List[List[Tuple[int, int]]] = [[] for _ in range(spec.k)]
        for i, j, a in spec.edges:
            self.constraints[j - 1].append((i - 1, a))

    def row(self, idx: int) -> np.ndarray:
        """||x - E_m|| for every m, where x is the idx-th point of E."""
        if self._cache is not None and idx in self._cache:
            return self._cache[idx]
        values = norms_of(self.ctx, self.ctx.sub(self.coords, self.coords[idx][None, :]))
        if self._cache is not None:
            self._cache[idx] = values
        return values

    def candidates(self, chosen: List[int]) -> np.ndarray:
        mask = np.ones(self.size, dtype=bool)
        for earlier, a in self.constraints[len(chosen)]:
            mask &= self.row(chosen[earlier]) == a
        if self.distinct and chosen:
            mask[chosen] = False
        return mask

    def count_from(self, chosen: List[int]) -> int:
        if len(chosen) == self.spec.k:
            return 1
        mask = self.candidates(chosen)
        if len(chosen) == self.spec.k - 1:
            return int(np.count_nonzero(mask))
        return sum(self.count_from(chosen + [int(c)]) for c in np.flatnonzero(mask))

    def iterate(self, chosen: List[int]) -> Iterator[Tuple[int, ...]]:
        if len(chosen) == self.spec.k:
            yield tuple(int(self.ranks[c]) for c in chosen)
            return
        for c in np.flatnonzero(self.candidates(chosen)):
            yield from self.iterate(chosen + [int(c)])


def count_configs(E: PointSet, spec: ConfigSpec, distinct: bool = False, force: bool = False,
                  workers: Optional[int] = None) -> int:
    """
    Number of ordered k-tuples of E with ||x^i - x^j|| = a_ij on J.

    Args:
        E: Ambient point set
        spec: Configuration
        distinct: Additionally require pairwise distinct points
        force: Skip the |E|^k guard
        workers: Threads sharing the first-point choices

    Raises:
        ResourceGuardError: |E|^k above FFDIST_MAX_CONFIG_WORK without force
    """
    m = E.cardinality
    config.check_guard("|E|^k", m ** spec.k, config.MAX_CONFIG_WORK, force)
    if spec.k == 1 or m == 0:
        return m if spec.k == 1 else 0

    tracker = _Backtracker(E, spec, distinct)
    workers = workers or config.FFDIST_THREADS
    if workers == 1 or m < 64:
        return sum(tracker.count_from([i]) for i in range(m))

    chunks = [c for c in np.array_split(np.arange(m), workers * 4) if c.size]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        partials = pool.map(lambda block: sum(tracker.count_from([int(i)]) for i in block), chunks)
        return sum(partials)


def count_configs_naive(E: PointSet, spec: ConfigSpec, distinct: bool = False, force: bool = False) -> int:
    """Filter all |E|^k tuples at once; the oracle for count_configs."""
    m = E.cardinality
    config.check_guard("|E|^k (naive)", m ** spec.k, config.MAX_NAIVE_CONFIG_WORK, force)
    if spec.k == 1:
        return m
    if m == 0:
        return 0

    ctx = E.ctx
    ranks = E.ranks()
    coords = coords_matrix(ctx, E.d)[ranks]
    differences = ranks_of(ctx, ctx.sub(coords[:, None, :], coords[None, :, :]))
    pair_norm = norms(ctx, E.d)[differences]

    idx = np.indices((m,) * spec.k).reshape(spec.k, -1)
    ok = np.ones(idx.shape[1], dtype=bool)
    for i, j, a in spec.edges:
        ok &= pair_norm[idx[i - 1], idx[j - 1]] == a
    if distinct:
        for i, j in combinations(range(spec.k), 2):
            ok &= idx[i] != idx[j]
    return int(np.count_nonzero(ok))


def predicted_count(spec: ConfigSpec, E_size: int, q: int) -> float:
    """|E|^k q^{-n}"""
    return E_size ** spec.k / q ** spec.n


def threshold_size(d: int, q: int, k: int, n: int) -> float:
    """
    q^{d(k-1)/k} q^{n/k}; the constant C is left to the caller.

    Raises:
        ValueError: Unless 1 <= k-1 <= n <= d
    """
    if not 1 <= k - 1 <= n <= d:
        raise ValueError(f"threshold needs 1 <= k-1 <= n <= d, got k={k}, n={n}, d={d}")
    return q ** (d * (k - 1) / k) * q ** (n / k)


# ============================================================================
# PSEUDO-ARITHMETIC PROGRESSIONS
# ============================================================================

def find_pseudo_ap(E: PointSet, k: int, limit: Optional[int] = None,
                   first: Optional[Point] = None) -> List[Tuple[Point, ...]]:
    """
    Ordered k-tuples of E with ||P_j - P_i|| = (j - i)^2, in rank order.

    Args:
        E: Ambient point set
        k: Progression length
        limit: Return at most this many tuples
        first: Only tuples starting at this point

    Raises:
        ValueError: If p <= k - 1
    """
    ctx = E.ctx
    spec = ConfigSpec.progression(ctx, k)
    tracker = _Backtracker(E, spec, distinct=False)

    if first is None:
        starts = range(tracker.size)
    else:
        where = np.flatnonzero(tracker.ranks == first.rank)
        starts = [int(where[0])] if where.size else []

    tuples = (t for s in starts for t in tracker.iterate([s]))
    found = list(islice(tuples, limit))
    logger.debug(f"found {len(found)} progressions of length {k}")
    return [tuple(Point.from_rank(ctx, E.d, r) for r in tup) for tup in found]


def verify_progression(points: Sequence[Point]) -> bool:
    """Recheck every gap with FieldElement arithmetic."""
    for (i, x), (j, y) in combinations(enumerate(points), 2):
        diff = [a - b for a, b in zip(y.elements, x.elements)]
        total = sum((e * e for e in diff[1:]), diff[0] * diff[0])
        if total.rank != x.ctx.from_int((j - i) ** 2):
            return False
    return True


def null_vector(ctx: FieldCtx, dim: int) -> Optional[Point]:
    """
    First nonzero z in F_q^dim with ||z|| = 0, scanning with coordinate 0
    most significant. None when no isotropic vector exists.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    for prefix in product(range(ctx.q), repeat=dim - 1):
        partial = 0
        for c in prefix:
            partial = ctx.add(partial, ctx.square(c))
        last = ctx.sqrt(ctx.neg(partial))
        if last is None or (last == 0 and not any(prefix)):
            continue
        return Point.of(ctx, prefix + (last,))
    return None


def progression_from_null(ctx: FieldCtx, z: Point, k: int) -> Tuple[Point, ...]:
    """P_j = (j, z) for j = 1..k; ||P_j - P_i|| = (j - i)^2 + ||z|| = (j - i)^2."""
    if ctx.p <= k - 1:
        raise ValueError(f"p = {ctx.p} <= k - 1 = {k - 1}; the progression would need a zero gap")
    if norms_of(ctx, np.array(z.coords)) != 0:
        raise ValueError(f"{z} is not isotropic")
    return tuple(Point.of(ctx, (ctx.from_int(j),) + z.coords) for j in range(1, k + 1))


def rotated_progression(ctx: FieldCtx) -> Optional[Tuple[Point, Point, Point]]:
    """
    Rotate (0,0,0), (1,1,i), (2,0,0) by [[t,-t,0],[t,t,0],[0,0,1]] with
    t^2 = 1/2 and i^2 = -1. None when either root is missing.
    """
    t = ctx.sqrt(ctx.inv(ctx.from_int(2)))
    i = ctx.sqrt(ctx.neg(1))
    if t is None or i is None:
        return None

    def rotate(x: int, y: int, z: int) -> Point:
        return Point.of(ctx, (ctx.sub(ctx.mul(t, x), ctx.mul(t, y)), ctx.add(ctx.mul(t, x), ctx.mul(t, y)), z))

    two = ctx.from_int(2)
    return rotate(0, 0, 0), rotate(1, 1, i), rotate(two, 0, 0)


# ============================================================================
# RANDOM SETS AND REPORTS
# ============================================================================

def random_subset(ctx: FieldCtx, d: int, density: float, rng: np.random.Generator) -> PointSet:
    """Each point kept independently with probability density."""
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density {density} outside [0, 1]")
    return PointSet.from_mask(ctx, d, rng.random(ctx.q ** d) < density)


def _configuration_trial(ctx: FieldCtx, d: int, spec: ConfigSpec, size_constant: float,
                         rng: np.random.Generator, force: bool) -> Dict:
    target = min(ctx.q ** d, size_constant * threshold_size(d, ctx.q, spec.k, spec.n))
    E = random_subset(ctx, d, target / ctx.q ** d, rng)
    observed = count_configs(E, spec, force=force)
    predicted = predicted_count(spec, E.cardinality, ctx.q)
    return {
        "target_size": target,
        "size": E.cardinality,
        "count": observed,
        "predicted": predicted,
        "ratio": observed / predicted if predicted else None,
        "positive": observed > 0,
    }


def pseudo_random_report(ctx: FieldCtx, d: int, spec: Optional[ConfigSpec] = None,
                         size_constant: float = config.SIZE_CONSTANT,
                         seed: int = config.DEFAULT_SEED, force: bool = False) -> Dict:
    """
    Finite-q view of the pseudo-randomness conditions of the distance graph.

    Returns:
        Dict with the vertex count, per-color edge counts and their max/min
        ratio, the non-edge fraction, and (when spec is given) one random
        set of size C q^{d(k-1)/k + n/k} with its configuration count
        against the prediction.
    """
    q = ctx.q
    vertices = q ** d
    config.check_guard("q^d", vertices, config.MAX_POINTS, force)

    edges = {str(c): vertices * sphere_size_formula(ctx, c, d) // 2 for c in range(1, q)}
    counts = list(edges.values())
    non_edges = vertices * (sphere_size_formula(ctx, 0, d) - 1) // 2
    all_pairs = vertices * (vertices - 1) // 2

    report = {
        "q": q,
        "d": d,
        "vertices": vertices,
        "edges_per_color": edges,
        "uniformity_ratio": max(counts) / min(counts),
        "non_edge_fraction": non_edges / all_pairs,
        "configuration": None,
    }

    if spec is not None:
        if not spec.satisfies_theorem_hypothesis(d):
            raise ValueError(f"configuration k={spec.k}, n={spec.n} violates 1 <= k-1 <= n <= d={d}")
        trial = _configuration_trial(ctx, d, spec, size_constant, np.random.default_rng(seed), force)
        trial.update(spec.to_dict())
        report["configuration"] = trial

    return report


def configuration_trend(ctx: FieldCtx, d: int, k: int, n: int, trials: int = 20,
                       seed: int = config.DEFAULT_SEED, size_constant: float = config.SIZE_CONSTANT,
                       spec: Optional[ConfigSpec] = None, band: Tuple[float, float] = (0.5, 2.0),
                       force: bool = False) -> Dict:
    """
    Observed/predicted configuration counts over seeded random sets of size
    C times the threshold (capped at q^d). Passes when at least 90% of the
    ratios fall inside band.
    """
    spec = spec or ConfigSpec.default(k, n)
    rows = []
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        rows.append(_configuration_trial(ctx, d, spec, size_constant, rng, force))

    ratios = [row["ratio"] for row in rows]
    in_band = sum(1 for r in ratios if r is not None and band[0] <= r <= band[1])
    required = math.ceil(0.9 * trials)
    return {
        "q": ctx.q,
        "d": d,
        "k": spec.k,
        "n": spec.n,
        "trials": trials,
        "ratios": ratios,
        "in_band": in_band,
        "required": required,
        "capped": rows[0]["target_size"] >= ctx.q ** d if rows else False,
        "pass": in_band >= required,
    }
