#!/usr/bin/env python3
"""
verify-all: every identity, bound and oracle comparison of the toolkit,
run over all odd prime powers q <= max_q and dimensions d <= max_d.

Suites run on a thread pool; each draws from its own RNG stream derived
from (seed, suite name), so results never depend on scheduling.
"""

import hashlib
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, List, Optional, Sequence

import numpy as np
from sympy import factorint
from tqdm import tqdm

from ffdist import charsum, config, configurations, geometry, graph, spectral
from ffdist.field import FieldCtx, field_from_q
from ffdist.geometry import Point, PointSet
from ffdist.report import Check, Meta, Report, check

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Plan:
    fields: Sequence[FieldCtx]
    max_d: int
    force: bool

    def upto(self, q_max: int) -> List[FieldCtx]:
        return [ctx for ctx in self.fields if ctx.q <= q_max]

    def dims(self, low: int, high: int) -> range:
        return range(low, min(high, self.max_d) + 1)


def odd_prime_powers(max_q: int) -> List[int]:
    return [q for q in range(3, max_q + 1, 2) if len(factorint(q)) == 1]


def seed_for(seed: int, name: str) -> int:
    """Stable 64-bit seed for one suite."""
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _random_nonzero_point(ctx: FieldCtx, d: int, rng: np.random.Generator) -> Point:
    rank = int(rng.integers(1, ctx.q ** d))
    return Point.from_rank(ctx, d, rank)


# ============================================================================
# FIELD AND CHARACTER SUMS
# ============================================================================

def suite_field(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.fields:
        q, p = ctx.q, ctx.p
        a, b, c = (rng.integers(0, q, size=200) for _ in range(3))
        bad = np.count_nonzero(ctx.add(ctx.add(a, b), c) != ctx.add(a, ctx.add(b, c)))
        bad += np.count_nonzero(ctx.mul(ctx.mul(a, b), c) != ctx.mul(a, ctx.mul(b, c)))
        bad += np.count_nonzero(ctx.mul(a, ctx.add(b, c)) != ctx.add(ctx.mul(a, b), ctx.mul(a, c)))
        bad += np.count_nonzero(ctx.mul(a, b) != ctx.mul(b, a))
        nz = ctx.nonzero()
        bad += np.count_nonzero(ctx.mul(nz, ctx.inv(nz)) != 1)
        bad += np.count_nonzero(ctx.trace(ctx.add(a, b)) != (ctx.trace(a) + ctx.trace(b)) % p)
        checks.append(check(f"field axioms q={q}", "field-axioms", bad == 0, 0, int(bad)))

        if q <= 49:
            x, y = np.meshgrid(ctx.elements(), ctx.elements(), indexing="ij")
            lhs = ctx.power(ctx.add(x, y), p)
            rhs = ctx.add(ctx.power(x, p), ctx.power(y, p))
            checks.append(check(f"frobenius q={q}", "frobenius", np.array_equal(lhs, rhs), 0,
                                int(np.count_nonzero(lhs != rhs))))

            sums = ctx.chi_table[ctx.mul(x, y)].sum(axis=1)
            expected = np.where(ctx.elements() == 0, q, 0)
            gap = float(np.max(np.abs(sums - expected)))
            checks.append(check(f"character orthogonality q={q}", "character-orthogonality",
                                gap <= charsum.tolerance(q), 0.0, gap, charsum.tolerance(q)))

        plus = int(np.count_nonzero(ctx.psi_table == 1))
        minus = int(np.count_nonzero(ctx.psi_table == -1))
        ok = plus == minus == (q - 1) // 2 and (ctx.psi_minus_one == 1) == (q % 4 == 1)
        checks.append(check(f"quadratic character balance q={q}", "quadratic-character", ok,
                            [(q - 1) // 2, (q - 1) // 2], [plus, minus]))
    return checks


def suite_gauss(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.fields:
        result = charsum.gauss_sum(ctx, 1)
        checks.append(check(f"gauss sum closed form q={ctx.q}", "gauss-closed-form", result.passed,
                            result.closed_form, result.value, result.tolerance))
        if ctx.q <= 49:
            worst = 0.0
            for a in range(ctx.q):
                r = charsum.gauss_sum(ctx, a)
                worst = max(worst, abs(r.value - r.closed_form))
            tol = charsum.tolerance(ctx.q)
            checks.append(check(f"gauss multiplicativity q={ctx.q}", "gauss-multiplicativity",
                                worst <= tol, 0.0, worst, tol))
    return checks


def suite_square_sums(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.fields:
        failed = sum(not charsum.square_char_sum(ctx, a).passed for a in range(1, ctx.q))
        checks.append(check(f"square character sums q={ctx.q}", "square-sum", failed == 0, 0, failed))

    for ctx in plan.upto(9):
        for k in plan.dims(1, 3):
            failed = 0
            for t in range(1, ctx.q):
                for _ in range(20):
                    beta = rng.integers(0, ctx.q, size=k)
                    failed += not charsum.quadratic_vector_sum(ctx, t, beta, k).passed
            checks.append(check(f"completed square q={ctx.q} k={k}", "completed-square", failed == 0, 0, failed))
    return checks


def suite_kloosterman(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.upto(49):
        for twist in charsum.TWISTS:
            results = [charsum.kloosterman(ctx, a, twist) for a in range(ctx.q)]
            worst = max(abs(r.value) for r in results)
            failed = sum(not r.passed for r in results)
            checks.append(check(f"kloosterman {twist} q={ctx.q}", "kloosterman-bound", failed == 0,
                                2 * math.sqrt(ctx.q), worst))
    return checks


def suite_polynomials(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.upto(49):
        failed = 0
        for _ in range(50):
            g = charsum.random_admissible_poly(ctx, rng)
            failed += not charsum.poly_char_sum(ctx, g).passed
        checks.append(check(f"polynomial character sums q={ctx.q}", "polynomial-bound", failed == 0, 0, failed))

        failed = sum(not charsum.poly_char_sum(ctx, charsum.never_two_quadratic(ctx, t)).passed
                     for t in range(1, ctx.q))
        checks.append(check(f"never-two quadratic sums q={ctx.q}", "polynomial-bound", failed == 0, 0, failed))

        failed = 0
        for c in range(1, ctx.q):
            g = charsum.chain_quartic(ctx, c)
            if charsum.is_perfect_square_poly(ctx, g):
                continue
            failed += not charsum.poly_char_sum(ctx, g, s=ctx.neg(1)).passed
        checks.append(check(f"chain quartic sums q={ctx.q}", "polynomial-bound", failed == 0, 0, failed))
    return checks


# ============================================================================
# GEOMETRY
# ============================================================================

def suite_spheres(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.upto(13):
        for d in plan.dims(2, 4):
            by_scan = [geometry.sphere(ctx, t, d).cardinality for t in range(ctx.q)]
            by_formula = [geometry.sphere_size_formula(ctx, t, d) for t in range(ctx.q)]
            by_conv = [int(v) for v in geometry.sphere_sizes_by_convolution(ctx, d)]
            checks.append(check(f"sphere sizes q={ctx.q} d={d}", "sphere-cardinality",
                                by_scan == by_formula == by_conv, by_formula, by_scan))
            checks.append(check(f"spheres partition q={ctx.q} d={d}", "sphere-partition",
                                sum(by_scan) == ctx.q ** d, ctx.q ** d, sum(by_scan)))
    return checks


def suite_color_size(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.upto(17):
        q = ctx.q
        for d in plan.dims(2, 4):
            if q ** d > config.MAX_POINTS:
                continue
            exact = [geometry.pair_count(ctx, t, d) for t in range(q)]
            if q ** (2 * d) <= config.MAX_PAIR_BRUTE:
                brute = [int(v) for v in geometry.pair_count_histogram(ctx, d)]
                checks.append(check(f"pair counts q={q} d={d}", "pair-count", brute == exact, exact, brute))
            if q < 5:
                continue
            for t in range(q):
                ratio = exact[t] / q ** (2 * d - 1)
                if d == 2 and t == 0 and q % 4 == 1:
                    checks.append(check(f"color size q={q} d=2 t=0", "color-size", 1.5 <= ratio <= 2.5,
                                        [1.5, 2.5], ratio))
                elif d == 2 and t == 0:
                    # only the origin is isotropic here
                    checks.append(check(f"color size q={q} d=2 t=0", "exploratory", True, None, ratio))
                else:
                    checks.append(check(f"color size q={q} d={d} t={t}", "color-size", 0.5 <= ratio <= 1.5,
                                        [0.5, 1.5], ratio))
    return checks


def suite_intersections(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.upto(9):
        for d in plan.dims(2, 4):
            mismatches, worst = 0, 0.0
            for t in range(1, ctx.q):
                for _ in range(50):
                    x = _random_nonzero_point(ctx, d, rng)
                    exact = geometry.sphere_intersection(ctx, t, x)
                    formula = geometry.sphere_intersection_formula(ctx, t, x)
                    worst = max(worst, abs(formula - exact))
                    mismatches += round(formula) != exact
            checks.append(check(f"sphere intersections q={ctx.q} d={d}", "sphere-intersection",
                                mismatches == 0, 0, mismatches))

            if d == 2 and ctx.psi_minus_one == 1:
                x = Point.of(ctx, (1, ctx.sqrt(ctx.neg(1))))
                size = geometry.sphere_intersection(ctx, 1, x)
                checks.append(check(f"isotropic translate disjoint q={ctx.q} d={d}", "never-two",
                                    size == 0, 0, size))
    return checks


def suite_never_two(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    if plan.max_d < 2:
        return checks
    for ctx in plan.fields:
        if ctx.q < 5:
            continue
        missing = []
        for t in range(1, ctx.q):
            x = geometry.never_two_witness(ctx, t)
            if x is None or geometry.sphere_intersection(ctx, t, x) != 0:
                missing.append(t)
        checks.append(check(f"never-two witnesses q={ctx.q}", "never-two", not missing, [], missing))
    return checks


def suite_chains(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.upto(13):
        q = ctx.q
        for d in plan.dims(2, 3):
            if d == 3 and q > 7:
                continue
            a = Point.zero(ctx, d)
            for _ in range(3):
                b = _random_nonzero_point(ctx, d, rng)
                count = geometry.three_sphere_chain_count(ctx, 1, a, b)
                if d == 3:
                    floor = (q - 1) * (q - 2 - 1 / (q - 1))
                    checks.append(check(f"chain count q={q} d=3 b={b.coords}", "chain-positivity",
                                        count >= floor and count > 0, floor, count))
                    continue
                if q % 4 == 3 and q >= 7:
                    checks.append(check(f"chain count q={q} d=2 b={b.coords}", "chain-positivity",
                                        count >= 6, 6, count))
                formula = geometry.three_sphere_chain_formula(ctx, 1, a, b)
                checks.append(check(f"chain closed form q={q} d=2 b={b.coords}", "exploratory",
                                    abs(formula - count) < 1e-6, formula, count))
    return checks


# ============================================================================
# FOURIER ANALYSIS
# ============================================================================

def suite_fourier(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.fields:
        for d in plan.dims(1, 4):
            n = ctx.q ** d
            if n > 729:
                continue
            f = rng.random(n) + 1j * rng.random(n)
            gap = float(np.max(np.abs(spectral.dft(ctx, d, f).values - spectral.dft_naive(ctx, d, f).values)))
            tol = charsum.tolerance(n)
            checks.append(check(f"factored transform q={ctx.q} d={d}", "fourier-transform", gap <= tol,
                                0.0, gap, tol))
    return checks


def suite_plancherel(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.fields:
        for d in plan.dims(1, 4):
            n = ctx.q ** d
            if n > 10 ** 4:
                continue
            worst_gap, worst_inv = 0.0, 0.0
            for _ in range(100):
                f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
                spectrum = spectral.dft(ctx, d, f)
                worst_inv = max(worst_inv, float(np.max(np.abs(spectral.idft(spectrum) - f))))
                lhs = float(np.sum(np.abs(spectrum.values) ** 2))
                worst_gap = max(worst_gap, abs(lhs - float(np.sum(np.abs(f) ** 2)) / n))
            checks.append(check(f"plancherel q={ctx.q} d={d}", "plancherel", worst_gap < 1e-8, 0.0, worst_gap, 1e-8))
            checks.append(check(f"inversion q={ctx.q} d={d}", "inversion", worst_inv < 1e-8, 0.0, worst_inv, 1e-8))
    return checks


def suite_decay(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.upto(13):
        for d in plan.dims(2, 4):
            if d == 4 and ctx.q > 7:
                continue
            spectra = spectral.sphere_spectra(ctx, d)
            worst_decay, worst_avg, worst_red, worst_salem = 0.0, 0.0, 0.0, 0.0
            ok_decay = ok_avg = ok_red = True
            for t in range(1, ctx.q):
                report = spectral.sphere_decay_report(ctx, t, d, seed=int(rng.integers(2 ** 32)), spectra=spectra)
                worst_decay = max(worst_decay, report["max_nonzero_freq"])
                worst_avg = max(worst_avg, report["averaged_max"])
                worst_red = max(worst_red, report["reduction_gap"])
                ok_decay &= bool(report["decay_pass"])
                ok_avg &= report["averaged_pass"]
                ok_red &= report["reduction_gap"] <= 1e-9
                size = geometry.sphere_size_formula(ctx, t, d)
                worst_salem = max(worst_salem, ctx.q ** d * report["max_nonzero_freq"] / math.sqrt(size))

            bound = 2 * ctx.q ** (-(d + 1) / 2)
            tag = f"q={ctx.q} d={d}"
            checks.append(check(f"sphere decay {tag}", "fourier-decay", ok_decay, bound, worst_decay))
            checks.append(check(f"averaged decay {tag}", "averaged-decay", ok_avg, bound, worst_avg))
            checks.append(check(f"one-dimensional reduction {tag}", "one-dimensional-reduction", ok_red,
                                0.0, worst_red, 1e-9))
            delta = np.zeros(ctx.q ** d)
            delta[0] = 1
            gap = float(np.max(np.abs(spectra.sum(axis=0) - delta)))
            checks.append(check(f"sphere spectra partition {tag}", "sphere-partition",
                                gap <= charsum.tolerance(ctx.q ** (d + 1)), 0.0, gap))
            if ctx.q >= 5:
                checks.append(check(f"sphere salem constants {tag}", "salem", worst_salem <= 2.5, 2.5, worst_salem))
    return checks


# ============================================================================
# GRAPHS
# ============================================================================

def suite_diameters(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    caps = {2: 17, 3: 13, 4: 9}
    for d in plan.dims(2, 4):
        q_list = [ctx.q for ctx in plan.upto(caps[d])]
        rows = graph.diameter_report(d, q_list, workers=1, force=plan.force)
        for row in rows:
            for claim in row["claims"]:
                checks.append(check(claim["name"], claim["anchor"], claim["pass"], claim["expected"], claim["observed"]))

        for q in q_list:
            ctx = field_from_q(q)
            diam = {row["color"]: row["diameter"] for row in rows if row["q"] == q}
            broken = [c for c in diam for lam in range(1, q) if diam[c] != diam[ctx.mul(ctx.square(lam), c)]]
            checks.append(check(f"diameter square-class invariance q={q} d={d}", "square-class-invariance",
                                not broken, [], sorted(set(broken))))
            if q ** d <= 2401:
                spec = graph.connection_sphere(ctx, 1, d)
                fast, slow = graph.bfs_from_origin(spec), graph.bfs_naive(spec)
                checks.append(check(f"bfs layers q={q} d={d}", "diameter-oracle", fast == slow,
                                    list(slow.layer_sizes), list(fast.layer_sizes)))
    return checks


def suite_two_distance(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.fields:
        if ctx.q not in (5, 7):
            continue
        for d in plan.dims(3, 4):
            U = geometry.sphere(ctx, 1, d)
            salem = spectral.salem_constant(U)
            outside, not_positive, disagree = 0, 0, 0
            for trial in range(100):
                E = configurations.random_subset(ctx, d, float(rng.uniform(0.01, 0.3)), rng)
                F = configurations.random_subset(ctx, d, float(rng.uniform(0.01, 0.3)), rng)
                nu = graph.nu_count(E, F, U, salem=salem)
                outside += not nu.within_bound
                not_positive += nu.main_dominates and nu.count == 0
                if trial < 5:
                    disagree += nu.count != graph.nu_count_by_shifts(E, F, U)
            tag = f"q={ctx.q} d={d}"
            checks.append(check(f"two-distance error bound {tag}", "two-distance", outside == 0, 0, outside))
            checks.append(check(f"two-distance positivity {tag}", "two-distance", not_positive == 0, 0, not_positive))
            checks.append(check(f"two-distance shift count {tag}", "two-distance", disagree == 0, 0, disagree))
    return checks


# ============================================================================
# CONFIGURATIONS
# ============================================================================

def suite_configurations(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    if plan.max_d < 2:
        return checks
    specs = [
        configurations.ConfigSpec.parse(2, "1-2:1"),
        configurations.ConfigSpec.parse(3, "1-2:1,2-3:1"),
        configurations.ConfigSpec.parse(3, "1-2:1,2-3:2,1-3:1"),
    ]
    for ctx in plan.upto(7):
        d = 2
        full = PointSet.full(ctx, d)
        observed = configurations.count_configs(full, specs[0])
        expected = geometry.pair_count(ctx, 1, d)
        checks.append(check(f"pair reduction q={ctx.q}", "configuration-count", observed == expected, expected, observed))

        for spec in specs:
            if any(a >= ctx.q for _, _, a in spec.edges):
                continue
            label = ",".join(spec.to_dict()["edges"])
            E = configurations.random_subset(ctx, d, 0.5, rng)
            if E.cardinality ** spec.k > config.MAX_NAIVE_CONFIG_WORK:
                continue
            for distinct in (False, True):
                fast = configurations.count_configs(E, spec, distinct=distinct, workers=1)
                slow = configurations.count_configs_naive(E, spec, distinct=distinct)
                checks.append(check(f"backtracking vs naive q={ctx.q} {label} distinct={distinct}",
                                    "configuration-count", fast == slow, slow, fast))

            base = configurations.count_configs(E, spec, workers=1)
            v = _random_nonzero_point(ctx, d, rng)
            moved = configurations.count_configs(E.translate(v), spec, workers=1)
            lam = int(rng.integers(1, ctx.q))
            scaled = configurations.count_configs(E.scale(lam), spec.dilated(ctx, lam), workers=1)
            checks.append(check(f"translation invariance q={ctx.q} {label}", "configuration-count",
                                moved == base, base, moved))
            checks.append(check(f"dilation covariance q={ctx.q} {label}", "configuration-count",
                                scaled == base, base, scaled))

            missing = [(i, j) for i, j in combinations(range(1, spec.k + 1), 2) if (i, j) not in spec.J]
            if missing:
                i, j = missing[0]
                tighter = configurations.count_configs(E, spec.with_edge(i, j, 1), workers=1)
                checks.append(check(f"monotonicity q={ctx.q} {label}+{i}-{j}:1", "configuration-count",
                                    tighter <= base, f"<={base}", tighter))
    return checks


def suite_trend(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    qs = {ctx.q for ctx in plan.fields}
    for d, q, k, n in ((2, 11, 3, 2), (2, 13, 3, 2), (3, 7, 3, 3)):
        if q not in qs or d > plan.max_d:
            continue
        ctx = field_from_q(q)
        trend = configurations.configuration_trend(ctx, d, k, n, trials=20, seed=int(rng.integers(2 ** 32)),
                                                  force=plan.force)
        checks.append(check(f"configuration trend d={d} q={q} k={k} n={n}", "configuration-trend",
                            trend["pass"], f">={trend['required']}/20 in [0.5, 2.0]",
                            f"{trend['in_band']}/20"))

        # C = 4 fills the whole space here; C = 1/2 samples half of it
        sampled = configurations.configuration_trend(ctx, d, k, n, trials=20, seed=int(rng.integers(2 ** 32)),
                                                    size_constant=0.5, force=plan.force)
        checks.append(check(f"sampled configuration trend d={d} q={q} k={k} n={n} C=0.5", "configuration-trend",
                            sampled["pass"] and not sampled["capped"], f">={sampled['required']}/20 in [0.5, 2.0]",
                            f"{sampled['in_band']}/20"))
    return checks


def suite_progressions(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for ctx in plan.fields:
        for dim in range(1, 4):
            z = configurations.null_vector(ctx, dim)
            exists = dim >= 3 or (dim == 2 and ctx.q % 4 == 1)
            ok = (z is not None) == exists and (z is None or geometry.norm(z) == 0)
            checks.append(check(f"null vector q={ctx.q} dim={dim}", "null-vector", ok, exists, z is not None))

    if plan.max_d < 3:
        return checks
    for ctx in plan.fields:
        triple = configurations.rotated_progression(ctx)
        if triple is not None:
            E = PointSet.full(ctx, 3)
            found = configurations.find_pseudo_ap(E, 3, first=triple[0])
            ok = triple in found and configurations.verify_progression(triple)
            ok = ok and all(configurations.verify_progression(t) for t in found)
            checks.append(check(f"rotated progression q={ctx.q}", "pseudo-ap", ok,
                                [pt.coords for pt in triple], len(found)))

        z = configurations.null_vector(ctx, 2)
        if z is None:
            continue
        for k in range(2, min(4, ctx.p - 1) + 1):
            prog = configurations.progression_from_null(ctx, z, k)
            extra = rng.integers(0, ctx.q ** 3, size=10)
            E = PointSet.from_ranks(ctx, 3, [pt.rank for pt in prog] + [int(r) for r in extra])
            found = configurations.find_pseudo_ap(E, k)
            ok = prog in found and all(configurations.verify_progression(t) for t in found)
            checks.append(check(f"null-vector progression q={ctx.q} k={k}", "pseudo-ap", ok, True, ok))
    return checks


def suite_pseudo_random(plan: Plan, rng: np.random.Generator) -> List[Check]:
    checks = []
    for d in plan.dims(2, 4):
        fractions = []
        for ctx in plan.fields:
            if ctx.q ** d > config.MAX_POINTS:
                continue
            report = configurations.pseudo_random_report(ctx, d)
            q = ctx.q
            if d % 2 == 0:
                expected = 1.0
            else:
                half = q ** ((d - 1) // 2)
                expected = (q ** (d - 1) + half) / (q ** (d - 1) - half)
            ratio = report["uniformity_ratio"]
            checks.append(check(f"color uniformity q={q} d={d}", "pseudo-random", abs(ratio - expected) < 1e-12,
                                expected, ratio))
            fractions.append((q, report["non_edge_fraction"]))
        increases = [q for (_, a), (q, b) in zip(fractions, fractions[1:]) if b > a]
        checks.append(check(f"non-edge fraction decreasing d={d}", "exploratory", not increases, [], increases))
    return checks


SUITES: List[Callable[[Plan, np.random.Generator], List[Check]]] = [
    suite_field,
    suite_gauss,
    suite_square_sums,
    suite_kloosterman,
    suite_polynomials,
    suite_spheres,
    suite_color_size,
    suite_intersections,
    suite_never_two,
    suite_chains,
    suite_fourier,
    suite_plancherel,
    suite_decay,
    suite_diameters,
    suite_two_distance,
    suite_configurations,
    suite_trend,
    suite_progressions,
    suite_pseudo_random,
]


def verify_all(max_q: int, max_d: int, seed: int = config.DEFAULT_SEED, force: bool = False,
               workers: Optional[int] = None, progress: bool = False) -> Report:
    """
    Run every suite over q <= max_q, d <= max_d.

    Raises:
        ValueError: max_q < 3 or max_d < 1
        ResourceGuardError: max_q or max_q^max_d above the configured limits
    """
    if max_q < 3:
        raise ValueError(f"max_q = {max_q} leaves no odd prime power")
    if max_d < 1:
        raise ValueError(f"max_d = {max_d} must be at least 1")
    config.check_guard("max_q", max_q, config.MAX_Q, force)
    config.check_guard("max_q^max_d", max_q ** max_d, config.MAX_POINTS, force)

    plan = Plan([field_from_q(q, force=force) for q in odd_prime_powers(max_q)], max_d, force)
    workers = workers or config.FFDIST_THREADS
    logger.info(f"Running {len(SUITES)} suites for q <= {max_q}, d <= {max_d} on {workers} workers")

    with tqdm(total=len(SUITES), disable=not progress, file=sys.stderr, desc="verify-all") as bar:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = []
            for suite in SUITES:
                rng = np.random.default_rng(seed_for(seed, suite.__name__))
                future = pool.submit(suite, plan, rng)
                future.add_done_callback(lambda _: bar.update())
                futures.append(future)
            results = [f.result() for f in futures]

    report = Report(meta=Meta(command="verify-all", seed=seed, field=f"q<={max_q}, d<={max_d}"))
    for suite, checks in zip(SUITES, results):
        report.add(*checks)
        failed = [c.name for c in checks if not c.passed and not c.exploratory]
        if failed:
            logger.warning(f"❌ {suite.__name__}: {len(failed)} failing checks")
        else:
            logger.info(f"✅ {suite.__name__}: {len(checks)} checks")

    report.results = {
        "max_q": max_q,
        "max_d": max_d,
        "fields": [ctx.q for ctx in plan.fields],
        "checks": len(report.checks),
        "failed": len(report.failures()),
    }
    return report
