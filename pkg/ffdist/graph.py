#!/usr/bin/env python3
"""
Distance graphs on F_q^d as Cayley graphs of (F_q^d, +).

x ~ y whenever x - y lies in a symmetric connection set U with 0 not in U.
For the distance graph of color c the connection set is the sphere S_c.
Cayley graphs are vertex transitive, so one BFS from the origin gives the
diameter.
"""

import logging
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ffdist import config
from ffdist.field import FieldCtx, field_from_q
from ffdist.geometry import PointSet, coords_matrix, ranks_of, sphere
from ffdist.spectral import salem_constant

logger = logging.getLogger(__name__)

# frontier x connection pairs expanded per numpy batch
EXPANSION_CHUNK = 1 << 20


@dataclass(frozen=True)
class CayleySpec:
    """Cayley graph on F_q^d with a symmetric, zero-free connection set."""

    connection: PointSet

    def __post_init__(self):
        U = self.connection
        if 0 in U:
            raise ValueError("connection set must not contain the origin")
        if U.negate() != U:
            raise ValueError("connection set must be symmetric (x in U implies -x in U)")

    @property
    def ctx(self) -> FieldCtx:
        return self.connection.ctx

    @property
    def d(self) -> int:
        return self.connection.d

    @property
    def dims(self) -> Tuple[int, int]:
        return self.connection.dims

    @property
    def degree(self) -> int:
        return self.connection.cardinality


@dataclass(frozen=True)
class BfsProfile:
    """Layer sizes of a BFS; eccentricity is math.inf when the graph is disconnected."""

    layer_sizes: Tuple[int, ...]
    eccentricity: Union[int, float]
    reached: int

    @property
    def connected(self) -> bool:
        return self.eccentricity != math.inf


def connection_sphere(ctx: FieldCtx, c: int, d: int) -> CayleySpec:
    """Distance graph of color c: x ~ y iff ||x - y|| = c."""
    if c == 0:
        raise ValueError("color 0 is not an edge color; c must be nonzero")
    return CayleySpec(sphere(ctx, c, d))


def connection_from_set(U: PointSet) -> CayleySpec:
    """General graph G^U: x ~ y iff x - y in U."""
    return CayleySpec(U)


def _profile(layers: List[int], total: int) -> BfsProfile:
    reached = sum(layers)
    ecc = len(layers) - 1 if reached == total else math.inf
    return BfsProfile(tuple(layers), ecc, reached)


def bfs_from_origin(spec: CayleySpec, source: int = 0, force: bool = False) -> BfsProfile:
    """
    Layered BFS; layer k+1 is (layer k + U) minus every earlier layer.

    The sumset is formed from frontier x connection pairs in chunks, with
    membership tested against a visited bitmap.
    """
    ctx, d = spec.ctx, spec.d
    total = ctx.q ** d
    config.check_guard("q^d", total, config.MAX_POINTS, force)

    coords = coords_matrix(ctx, d)
    steps = coords[spec.connection.ranks()]
    visited = np.zeros(total, dtype=bool)
    visited[source] = True
    frontier = np.array([source], dtype=np.int64)
    layers = [1]

    batch = max(1, EXPANSION_CHUNK // max(1, len(steps)))
    while frontier.size and steps.size:
        found = []
        for start in range(0, frontier.size, batch):
            block = coords[frontier[start:start + batch]]
            sums = ctx.add(block[:, None, :], steps[None, :, :])
            reached = np.unique(ranks_of(ctx, sums).ravel())
            found.append(reached[~visited[reached]])
        nxt = np.unique(np.concatenate(found)) if found else np.array([], dtype=np.int64)
        if nxt.size == 0:
            break
        visited[nxt] = True
        layers.append(int(nxt.size))
        frontier = nxt
        logger.debug(f"BFS layer {len(layers) - 1}: {nxt.size} vertices")

    return _profile(layers, total)


def bfs_naive(spec: CayleySpec, source: int = 0, force: bool = False) -> BfsProfile:
    """Vertex-at-a-time BFS that tests every vertex for adjacency; the oracle for bfs_from_origin."""
    ctx, d = spec.ctx, spec.d
    total = ctx.q ** d
    config.check_guard("q^d (naive BFS)", total, config.MAX_NAIVE_POINTS, force)

    coords = coords_matrix(ctx, d)
    member = spec.connection.mask()
    dist = np.full(total, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        diff = ranks_of(ctx, ctx.sub(coords, coords[v][None, :]))
        for w in np.flatnonzero(member[diff] & (dist < 0)):
            dist[w] = dist[v] + 1
            queue.append(int(w))

    layers = np.bincount(dist[dist >= 0]).tolist()
    return _profile([int(x) for x in layers], total)


def diameter(spec: CayleySpec, all_sources: bool = False, force: bool = False) -> Union[int, float]:
    """
    Diameter of the Cayley graph, math.inf when disconnected.

    By vertex transitivity the origin's eccentricity is the diameter;
    all_sources recomputes every eccentricity (tiny instances only).
    """
    profile = bfs_from_origin(spec, force=force)
    if not all_sources:
        return profile.eccentricity

    total = spec.ctx.q ** spec.d
    config.check_guard("q^d (all-sources diameter)", total, config.MAX_NAIVE_POINTS, force)
    eccentricities = [bfs_from_origin(spec, source=s, force=force).eccentricity for s in range(total)]
    if any(e != profile.eccentricity for e in eccentricities):
        logger.warning("⚠️  eccentricities differ between sources; the graph is not vertex transitive")
    return max(eccentricities)


# ============================================================================
# PAIR COUNTS
# ============================================================================

@dataclass(frozen=True)
class NuCount:
    """nu_U(E, F) with the main term and the Salem error bound."""

    count: int
    main_term: float
    error_bound: float
    salem: float

    @property
    def within_bound(self) -> bool:
        return abs(self.count - self.main_term) <= self.error_bound * (1 + 1e-9) + 1e-6

    @property
    def main_dominates(self) -> bool:
        return self.main_term > self.error_bound

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "main_term": self.main_term,
            "error_bound": self.error_bound,
            "salem_constant": self.salem,
            "within_bound": self.within_bound,
            "main_dominates": self.main_dominates,
        }


def _check_same_space(*sets: PointSet) -> None:
    first = sets[0]
    for other in sets[1:]:
        if not first.same_space(other):
            raise ValueError("E, F and U must live in the same F_q^d")


def nu_count(E: PointSet, F: PointSet, U: PointSet, salem: Optional[float] = None,
             force: bool = False) -> NuCount:
    """
    Count pairs (x, y) in E x F with x - y in U.

    Also reports |E||F||U| q^{-d} and the error bound K_U (|U||E||F|)^{1/2}
    with K_U the Salem constant of U (computed unless passed in).
    """
    _check_same_space(E, F, U)
    ctx, d = E.ctx, E.d
    coords = coords_matrix(ctx, d)
    steps = coords[U.ranks()]
    in_f = F.mask()

    count = 0
    e_ranks = E.ranks()
    batch = max(1, EXPANSION_CHUNK // max(1, len(steps)))
    for start in range(0, e_ranks.size, batch):
        block = coords[e_ranks[start:start + batch]]
        # y = x - u
        ys = ranks_of(ctx, ctx.sub(block[:, None, :], steps[None, :, :]))
        count += int(np.count_nonzero(in_f[ys]))

    if salem is None:
        salem = salem_constant(U, force=force) if U.cardinality else 0.0
    sizes = E.cardinality * F.cardinality * U.cardinality
    return NuCount(count, sizes / ctx.q ** d, salem * math.sqrt(sizes), salem)


def nu_count_by_shifts(E: PointSet, F: PointSet, U: PointSet) -> int:
    """sum_{u in U} |E ∩ (F + u)|, the second independent count."""
    _check_same_space(E, F, U)
    return sum(E.intersection_size(F.translate(u)) for u in U.points())


# ============================================================================
# DIAMETER TABLES
# ============================================================================

def _claim(name: str, anchor: str, expected, observed, passed: bool) -> Dict:
    return {"name": name, "anchor": anchor, "expected": expected, "observed": observed, "pass": bool(passed)}


def diameter_claims(ctx: FieldCtx, d: int, c: int, diam) -> List[Dict]:
    """The sharp diameter statements that apply to (q, d, c), compared with the observed diameter."""
    q = ctx.q
    claims = []
    if d >= 4:
        claims.append(_claim(f"diameter q={q} d={d} c={c} is 2", "diameter-sharp", 2, diam, diam == 2))
    if d == 3:
        claims.append(_claim(f"diameter q={q} d=3 c={c} in {{2,3}}", "diameter-sharp", [2, 3], diam, diam in (2, 3)))
        expected = 2 if ctx.quad_char(ctx.neg(c)) == 1 else 3
        claims.append(_claim(f"diameter q={q} d=3 c={c} is 2 iff psi(-c)=1", "exploratory", expected, diam,
                             diam == expected))
    if d == 2:
        if q >= 5:
            claims.append(_claim(f"diameter q={q} d=2 c={c} is never 2", "never-two", "!=2", diam, diam != 2))
        if q not in (3, 5, 9, 13):
            claims.append(_claim(f"diameter q={q} d=2 c={c} is 3", "diameter-sharp", 3, diam, diam == 3))
        else:
            claims.append(_claim(f"diameter q={q} d=2 c={c} (no sharp value)", "exploratory", None, diam, True))
    return claims


def salem_diameter_claim(spec: CayleySpec, diam, salem: Optional[float] = None,
                         force: bool = False) -> Optional[Dict]:
    """
    Diameter <= 3 for a Salem connection set that is large enough.

    With E = U + x and F = U + y the pair count nu_U(E, F) has main term
    |U|^3 q^{-d} and error at most K_U |U|^{3/2}, so it is positive once
    |U|^{3/2} > K_U q^d; a pair then gives a path x, x', y', y.

    Returns:
        The claim, or None when |U| is below that size
    """
    U = spec.connection
    if U.cardinality == 0:
        return None
    K = salem_constant(U, force=force) if salem is None else salem
    needed = K * spec.ctx.q ** spec.d
    if U.cardinality ** 1.5 <= needed:
        return None
    return _claim(f"Salem set diameter q={spec.ctx.q} d={spec.d} |U|={U.cardinality} K={K:.4g}",
                  "salem-diameter", "<=3", diam, diam <= 3)


def _diameter_cell(ctx: FieldCtx, d: int, c: int, force: bool) -> Dict:
    spec = connection_sphere(ctx, c, d)
    profile = bfs_from_origin(spec, force=force)
    U = spec.connection
    return {
        "q": ctx.q,
        "d": d,
        "color": c,
        "diameter": profile.eccentricity,
        "layers": list(profile.layer_sizes),
        "degree": U.cardinality,
        "size_threshold": ctx.q ** (2 * d / 3),
        "size_ratio": U.cardinality / ctx.q ** (2 * d / 3),
        "salem_constant": salem_constant(U, force=force),
        "claims": diameter_claims(ctx, d, c, profile.eccentricity),
    }


def diameter_report(d: int, q_list: Sequence[int], colors: Optional[Sequence[int]] = None,
                    workers: Optional[int] = None, force: bool = False) -> List[Dict]:
    """
    Diameter of every (q, c) cell with Salem diagnostics and the applicable claims.

    Args:
        d: Dimension
        q_list: Field sizes
        colors: Colors to test (every nonzero color when omitted)
        workers: Thread cap (FFDIST_THREADS by default)
        force: Skip resource guards

    Returns:
        One dict per cell, in (q, c) order
    """
    cells = []
    for q in q_list:
        ctx = field_from_q(q, force=force)
        config.check_guard("q^d", ctx.q ** d, config.MAX_POINTS, force)
        for c in (colors if colors is not None else range(1, ctx.q)):
            cells.append((ctx, int(c)))

    workers = workers or config.FFDIST_THREADS
    logger.info(f"Computing {len(cells)} diameter cells in dimension {d} with {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_diameter_cell, ctx, d, c, force) for ctx, c in cells]
        rows = [f.result() for f in futures]

    for row in rows:
        failed = [cl["name"] for cl in row["claims"] if not cl["pass"] and cl["anchor"] != "exploratory"]
        if failed:
            logger.warning(f"⚠️  q={row['q']} d={d} c={row['color']}: {', '.join(failed)} failed")
    return rows
