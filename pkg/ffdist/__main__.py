#!/usr/bin/env python3
"""
ffdist command line.

Every subcommand builds a Report and writes it to stdout (or --out) as
JSON, CSV or text. Logs go to stderr and, when LOG_FILE is set, to that
file. Exit codes: 0 all checks pass, 1 a check failed or an input was
rejected, 2 usage error, 3 resource guard, 130 interrupted.
"""

import argparse
import logging
import math
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from ffdist import charsum, config, configurations, geometry, graph, spectral
from ffdist.config import ResourceGuardError
from ffdist.field import FieldCtx, field_from_q, make_field
from ffdist.geometry import Point, PointSet
from ffdist.report import EXPLORATORY, Meta, Report, check
from ffdist.verify import verify_all

logger = logging.getLogger("ffdist")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_INTERRUPTED = 130


def setup_logging(level: str) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.LOG_FILE:
        # Ensure log directory exists before setting up logging
        Path(config.LOG_FILE).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(config.LOG_FILE))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format=config.LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


# ============================================================================
# ARGUMENT HELPERS
# ============================================================================

def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated list of integers") from None


def _field(args) -> FieldCtx:
    if args.q is not None:
        if args.p is not None or args.l is not None:
            raise ValueError("pass either --q or --p/--l, not both")
        return field_from_q(args.q, modulus=args.modulus, force=args.force)
    if args.p is None:
        raise ValueError("a field is required: --q Q or --p P [--l L] [--modulus COEFFS]")
    return make_field(args.p, args.l or 1, modulus=args.modulus, force=args.force)


def _rank(ctx: FieldCtx, value: int, flag: str) -> int:
    """A field element given on the command line by its rank."""
    if not 0 <= value < ctx.q:
        raise ValueError(f"{flag}: rank {value} outside 0..{ctx.q - 1}")
    return value


def _describe(ctx: FieldCtx) -> str:
    return f"F_{ctx.q} (p={ctx.p}, l={ctx.l}, modulus={list(ctx.modulus)})"


def _point_set(ctx: FieldCtx, d: int, spec: str) -> Tuple[PointSet, Optional[int]]:
    """'sphere:T' or 'file:PATH'; the radius comes back for spheres."""
    kind, _, value = spec.partition(":")
    if kind == "sphere" and value:
        t = _rank(ctx, int(value), "--set sphere:T")
        return geometry.sphere(ctx, t, d), t
    if kind == "file" and value:
        return geometry.load_point_set(ctx, d, value), None
    raise ValueError(f"bad set {spec!r}; expected sphere:T or file:PATH")


def _report(args, ctx: Optional[FieldCtx] = None, seed: Optional[int] = None) -> Report:
    meta = Meta(command=args.command, seed=seed, field=_describe(ctx) if ctx else None)
    if args.timestamp:
        meta.timestamp = datetime.now(timezone.utc).isoformat()
    return Report(meta=meta)


# ============================================================================
# SUBCOMMANDS
# ============================================================================

def cmd_field_info(args) -> Report:
    ctx = _field(args)
    report = _report(args, ctx)
    squares = int(np.count_nonzero(ctx.psi_table == 1))
    report.results = {
        "p": ctx.p,
        "l": ctx.l,
        "q": ctx.q,
        "modulus": list(ctx.modulus),
        "primitive_element": ctx.primitive,
        "psi_minus_one": ctx.psi_minus_one,
        "nonzero_squares": squares,
        "gauss_closed_form": charsum.gauss_explicit(ctx),
    }
    gauss = charsum.gauss_sum(ctx, 1)
    report.add(
        check(f"gauss sum closed form q={ctx.q}", "gauss-closed-form", gauss.passed,
              gauss.closed_form, gauss.value, gauss.tolerance),
        check(f"quadratic character balance q={ctx.q}", "quadratic-character",
              squares == (ctx.q - 1) // 2, (ctx.q - 1) // 2, squares),
    )
    return report


def cmd_gauss(args) -> Report:
    ctx = _field(args)
    _rank(ctx, args.a, "--a")
    report = _report(args, ctx)
    result = charsum.gauss_sum(ctx, args.a)
    report.results = result.to_dict()
    anchor = "gauss-closed-form" if args.a == 1 else "gauss-multiplicativity"
    report.add(check(f"gauss sum a={args.a} q={ctx.q}", anchor, result.passed,
                     result.closed_form, result.value, result.tolerance))
    return report


def cmd_kloosterman(args) -> Report:
    ctx = _field(args)
    _rank(ctx, args.a, "--a")
    report = _report(args, ctx)
    result = charsum.kloosterman(ctx, args.a, args.twist)
    report.results = {**result.to_dict(), "twist": args.twist, "a": args.a}
    report.add(check(f"kloosterman {args.twist} a={args.a} q={ctx.q}", "kloosterman-bound", result.passed,
                     result.bound, abs(result.value), result.tolerance))
    return report


def cmd_sphere(args) -> Report:
    ctx = _field(args)
    _rank(ctx, args.t, "--t")
    report = _report(args, ctx)
    formula = geometry.sphere_size_formula(ctx, args.t, args.d)
    scanned = geometry.sphere(ctx, args.t, args.d, force=args.force).cardinality if args.brute else None
    convolved = int(geometry.sphere_sizes_by_convolution(ctx, args.d)[args.t])
    match = formula == convolved and (scanned is None or scanned == formula)
    report.results = {"formula": formula, "brute": scanned, "convolution": convolved, "match": match,
                      "pair_count": geometry.pair_count(ctx, args.t, args.d)}
    report.add(check(f"sphere size q={ctx.q} d={args.d} t={args.t}", "sphere-cardinality", match,
                     formula, scanned if scanned is not None else convolved))
    return report


def cmd_intersect(args) -> Report:
    ctx = _field(args)
    _rank(ctx, args.t, "--t")
    if len(args.x) != args.d:
        raise ValueError(f"--x has {len(args.x)} coordinates, expected d = {args.d}")
    x = Point.of(ctx, args.x)
    report = _report(args, ctx)
    exact = geometry.sphere_intersection(ctx, args.t, x)
    formula = geometry.sphere_intersection_formula(ctx, args.t, x)
    report.results = {"exact": exact, "formula": formula, "norm_x": geometry.norm(x),
                      "match": round(formula) == exact}
    report.add(check(f"sphere intersection q={ctx.q} d={args.d} t={args.t} x={list(args.x)}",
                     "sphere-intersection", round(formula) == exact, formula, exact, 0.5))
    return report


def cmd_fourier(args) -> Report:
    ctx = _field(args)
    config.check_guard("q^d", ctx.q ** args.d, config.MAX_POINTS, args.force)
    report = _report(args, ctx, seed=args.seed)
    U, t = _point_set(ctx, args.d, args.set)

    if t is not None:
        decay = spectral.sphere_decay_report(ctx, t, args.d, seed=args.seed, force=args.force)
        report.results = decay
        if t != 0:
            report.add(check(f"sphere decay q={ctx.q} d={args.d} t={t}", "fourier-decay", decay["decay_pass"],
                             decay["bound"], decay["max_nonzero_freq"]))
        report.add(
            check(f"averaged decay q={ctx.q} d={args.d}", "averaged-decay", decay["averaged_pass"],
                  decay["bound"], decay["averaged_max"]),
            check(f"one-dimensional reduction q={ctx.q} d={args.d} t={t}", "one-dimensional-reduction",
                  decay["reduction_gap"] <= 1e-9, 0.0, decay["reduction_gap"], 1e-9),
            check(f"zero frequency q={ctx.q} d={args.d} t={t}", "fourier-transform",
                  abs(decay["zero_term"] - decay["zero_term_expected"]) <= 1e-9,
                  decay["zero_term_expected"], decay["zero_term"], 1e-9),
        )
    else:
        spectrum = spectral.dft(ctx, args.d, U, force=args.force)
        gap = spectral.plancherel_gap(ctx, args.d, U.indicator(), force=args.force)
        report.results = {"size": U.cardinality, "max_nonzero_freq": spectrum.max_nonzero(),
                          "zero_term": spectrum.values[0], "plancherel_gap": gap}
        report.add(check(f"plancherel q={ctx.q} d={args.d}", "plancherel", gap < 1e-8, 0.0, gap, 1e-8))

    if U.cardinality:
        report.results["salem_constant"] = spectral.salem_constant(U, force=args.force)
    return report


def cmd_salem(args) -> Report:
    ctx = _field(args)
    config.check_guard("q^d", ctx.q ** args.d, config.MAX_POINTS, args.force)
    report = _report(args, ctx)
    U, t = _point_set(ctx, args.d, args.set)
    if not U.cardinality:
        raise ValueError("the Salem constant of an empty set is undefined")
    spectrum = spectral.dft(ctx, args.d, U, force=args.force)
    K = spectral.salem_constant(U, force=args.force)
    report.results = {"size": U.cardinality, "max_nonzero_freq": spectrum.max_nonzero(), "salem_constant": K}
    if t:
        # sphere decay turned into a Salem constant
        bound = 2 * ctx.q ** ((args.d - 1) / 2) / math.sqrt(U.cardinality)
        report.results["bound"] = bound
        report.add(check(f"sphere salem constant q={ctx.q} d={args.d} t={t}", "salem",
                         K <= bound + 1e-9, bound, K))
    return report


def cmd_diameter(args) -> Report:
    ctx = _field(args)
    report = _report(args, ctx)

    if args.set:
        U, _ = _point_set(ctx, args.d, args.set)
        spec = graph.connection_from_set(U)
        profile = graph.bfs_from_origin(spec, force=args.force)
        report.results = {"diameter": profile.eccentricity, "layers": list(profile.layer_sizes),
                          "degree": spec.degree, "connected": profile.connected}
        if ctx.q ** args.d <= config.MAX_NAIVE_POINTS:
            naive = graph.bfs_naive(spec)
            report.add(check(f"bfs layers q={ctx.q} d={args.d}", "diameter-oracle", naive == profile,
                             list(naive.layer_sizes), list(profile.layer_sizes)))
        if U.cardinality:
            K = spectral.salem_constant(U, force=args.force)
            report.results.update({"salem_constant": K, "salem_size_needed": (K * ctx.q ** args.d) ** (2 / 3)})
            claim = graph.salem_diameter_claim(spec, profile.eccentricity, salem=K)
            if claim is not None:
                report.add(check(claim["name"], claim["anchor"], claim["pass"], claim["expected"], claim["observed"]))
        return report

    colors = None if args.all_colors else [_rank(ctx, args.color, "--color")]
    rows = graph.diameter_report(args.d, [ctx.q], colors=colors, force=args.force)
    for row in rows:
        for claim in row["claims"]:
            report.add(check(claim["name"], claim["anchor"], claim["pass"], claim["expected"], claim["observed"]))
    report.tables["diameters"] = [{k: v for k, v in row.items() if k != "claims"} for row in rows]
    report.results = {"diameters": {str(row["color"]): row["diameter"] for row in rows}}
    return report


def _ambient_set(args, ctx: FieldCtx) -> PointSet:
    if args.set and args.random is not None:
        raise ValueError("pass at most one of --set and --random")
    if args.set:
        E, _ = _point_set(ctx, args.d, args.set)
        return E
    if args.random is not None:
        return configurations.random_subset(ctx, args.d, args.random, np.random.default_rng(args.seed))
    config.check_guard("q^d", ctx.q ** args.d, config.MAX_POINTS, args.force)
    return PointSet.full(ctx, args.d)


def cmd_configs(args) -> Report:
    ctx = _field(args)
    report = _report(args, ctx, seed=args.seed)

    if args.trend:
        if args.n is None:
            raise ValueError("--trend needs --n")
        trend = configurations.configuration_trend(ctx, args.d, args.k, args.n, trials=args.trials,
                                                  seed=args.seed, size_constant=args.size_constant,
                                                  force=args.force)
        report.results = trend
        report.add(check(f"configuration trend d={args.d} q={ctx.q} k={args.k} n={args.n}", "configuration-trend",
                         trend["pass"], f">={trend['required']}/{args.trials} in [0.5, 2.0]",
                         f"{trend['in_band']}/{args.trials}"))
        return report

    if args.edges:
        spec = configurations.ConfigSpec.parse(args.k, args.edges)
    elif args.n is not None:
        spec = configurations.ConfigSpec.default(args.k, args.n)
    else:
        raise ValueError("a configuration is required: --edges I-J:COLOR,... or --n N")

    E = _ambient_set(args, ctx)
    count = configurations.count_configs(E, spec, distinct=args.distinct, force=args.force)
    predicted = configurations.predicted_count(spec, E.cardinality, ctx.q)
    hypothesis = spec.satisfies_theorem_hypothesis(args.d)
    report.results = {
        **spec.to_dict(),
        "size": E.cardinality,
        "count": count,
        "predicted": predicted,
        "ratio": count / predicted if predicted else None,
        # the size threshold only exists when 1 <= k-1 <= n <= d
        "threshold_size": configurations.threshold_size(args.d, ctx.q, spec.k, spec.n) if hypothesis else None,
        "theorem_hypothesis": hypothesis,
        "distinct": args.distinct,
    }
    if E.cardinality ** spec.k <= config.MAX_NAIVE_CONFIG_WORK:
        naive = configurations.count_configs_naive(E, spec, distinct=args.distinct)
        report.add(check(f"backtracking vs naive q={ctx.q} d={args.d}", "configuration-count",
                         naive == count, naive, count))
    return report


def cmd_pseudo_ap(args) -> Report:
    ctx = _field(args)
    report = _report(args, ctx, seed=args.seed)
    E = _ambient_set(args, ctx)
    found = configurations.find_pseudo_ap(E, args.k, limit=args.limit)
    verified = all(configurations.verify_progression(t) for t in found)
    report.results = {
        "k": args.k,
        "size": E.cardinality,
        "found": len(found),
        "witnesses": [[list(pt.coords) for pt in t] for t in found],
    }
    report.add(check(f"progressions re-verify q={ctx.q} d={args.d} k={args.k}", "pseudo-ap",
                     verified, len(found), len(found)))

    if args.d == 3 and args.k == 3:
        triple = configurations.rotated_progression(ctx)
        if triple is not None and all(pt in E for pt in triple):
            hits = configurations.find_pseudo_ap(E, 3, first=triple[0])
            report.results["rotated"] = [list(pt.coords) for pt in triple]
            report.add(check(f"rotated progression q={ctx.q}", "pseudo-ap", triple in hits,
                             [list(pt.coords) for pt in triple], len(hits)))
    if not found:
        report.add(check(f"progression found q={ctx.q} d={args.d} k={args.k}", EXPLORATORY, False, ">0", 0))
    return report


def cmd_pseudo_random(args) -> Report:
    ctx = _field(args)
    report = _report(args, ctx, seed=args.seed)
    spec = None
    if args.edges:
        spec = configurations.ConfigSpec.parse(args.k, args.edges)
    elif args.n is not None:
        spec = configurations.ConfigSpec.default(args.k, args.n)
    result = configurations.pseudo_random_report(ctx, args.d, spec=spec, size_constant=args.size_constant,
                                                 seed=args.seed, force=args.force)
    report.results = result
    report.tables["edges_per_color"] = [{"color": int(c), "edges": e} for c, e in result["edges_per_color"].items()]

    q, d = ctx.q, args.d
    if d % 2 == 0:
        expected = 1.0
    else:
        half = q ** ((d - 1) // 2)
        expected = (q ** (d - 1) + half) / (q ** (d - 1) - half)
    report.add(check(f"color uniformity q={q} d={d}", "pseudo-random",
                     abs(result["uniformity_ratio"] - expected) < 1e-12, expected, result["uniformity_ratio"]))
    return report


def cmd_verify_all(args) -> Report:
    report = verify_all(args.max_q, args.max_d, seed=args.seed, force=args.force,
                        workers=args.workers, progress=args.progress)
    if args.timestamp:
        report.meta.timestamp = datetime.now(timezone.utc).isoformat()
    return report


# ============================================================================
# PARSER
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['json', 'csv', 'text'], default='json', help='Report format')
    common.add_argument('--out', help='Write the report here instead of stdout')
    common.add_argument('--seed', type=int, default=config.DEFAULT_SEED, help='Random seed')
    common.add_argument('--force', action='store_true', help='Skip resource guards')
    common.add_argument('--timestamp', action='store_true', help='Record the wall-clock time in meta')
    common.add_argument('--progress', action='store_true', help='Progress bar on stderr')
    common.add_argument('--log-level', default=config.LOG_LEVEL, help='DEBUG, INFO, WARNING or ERROR')

    field = argparse.ArgumentParser(add_help=False)
    field.add_argument('--q', type=int, help='Field size (odd prime power)')
    field.add_argument('--p', type=int, help='Characteristic')
    field.add_argument('--l', type=int, help='Extension degree')
    field.add_argument('--modulus', type=_int_list, help='Irreducible modulus, coefficients low-to-high')

    space = argparse.ArgumentParser(add_help=False, parents=[field])
    space.add_argument('--d', type=int, required=True, help='Dimension')

    parser = argparse.ArgumentParser(
        prog='ffdist',
        description='Distance graphs over finite fields: closed forms checked against brute-force oracles'
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('field-info', parents=[common, field], help='Field tables and characters')
    p.set_defaults(handler=cmd_field_info)

    p = sub.add_parser('gauss', parents=[common, field], help='Gauss sum G_a')
    p.add_argument('--a', type=int, default=1, help='Field rank a')
    p.set_defaults(handler=cmd_gauss)

    p = sub.add_parser('kloosterman', parents=[common, field], help='Kloosterman sum K(a)')
    p.add_argument('--a', type=int, default=1, help='Field rank a')
    p.add_argument('--twist', choices=charsum.TWISTS, default='trivial')
    p.set_defaults(handler=cmd_kloosterman)

    p = sub.add_parser('sphere', parents=[common, space], help='Sphere cardinality')
    p.add_argument('--t', type=int, required=True, help='Radius (field rank)')
    p.add_argument('--brute', action='store_true', help='Also scan every point')
    p.set_defaults(handler=cmd_sphere)

    p = sub.add_parser('intersect', parents=[common, space], help='|S_t ∩ (S_t + x)|')
    p.add_argument('--t', type=int, required=True, help='Radius (field rank)')
    p.add_argument('--x', type=_int_list, required=True, help='Translate as coordinate ranks, e.g. 1,0,2')
    p.set_defaults(handler=cmd_intersect)

    p = sub.add_parser('fourier', parents=[common, space], help='Fourier transform of a set')
    p.add_argument('--set', required=True, help='sphere:T or file:PATH')
    p.set_defaults(handler=cmd_fourier)

    p = sub.add_parser('salem', parents=[common, space], help='Salem constant of a set')
    p.add_argument('--set', required=True, help='sphere:T or file:PATH')
    p.set_defaults(handler=cmd_salem)

    p = sub.add_parser('diameter', parents=[common, space], help='Distance graph diameter')
    colors = p.add_mutually_exclusive_group()
    colors.add_argument('--color', type=int, default=1, help='Edge color c')
    colors.add_argument('--all-colors', action='store_true', help='Every nonzero color')
    colors.add_argument('--set', help='Connection set file:PATH')
    p.set_defaults(handler=cmd_diameter)

    p = sub.add_parser('configs', parents=[common, space], help='Count k-point configurations')
    p.add_argument('--k', type=int, required=True, help='Number of points')
    p.add_argument('--edges', help='Prescribed distances, e.g. "1-2:1,2-3:4"')
    p.add_argument('--n', type=int, help='Number of edges of the default configuration')
    p.add_argument('--set', help='Ambient set file:PATH (full space by default)')
    p.add_argument('--random', type=float, metavar='DENSITY', help='Random ambient set of this density')
    p.add_argument('--distinct', action='store_true', help='Require pairwise distinct points')
    p.add_argument('--trend', action='store_true', help='Seeded trend trials at the size threshold')
    p.add_argument('--trials', type=int, default=20)
    p.add_argument('--size-constant', type=float, default=config.SIZE_CONSTANT)
    p.set_defaults(handler=cmd_configs)

    p = sub.add_parser('pseudo-ap', parents=[common, space], help='Pseudo-arithmetic progressions')
    p.add_argument('--k', type=int, required=True, help='Progression length')
    p.add_argument('--set', help='Ambient set file:PATH (full space by default)')
    p.add_argument('--random', type=float, metavar='DENSITY', help='Random ambient set of this density')
    p.add_argument('--limit', type=int, default=10, help='Witnesses to list')
    p.set_defaults(handler=cmd_pseudo_ap)

    p = sub.add_parser('pseudo-random-report', parents=[common, space], help='Pseudo-randomness of the distance graph')
    p.add_argument('--k', type=int, default=2)
    p.add_argument('--edges', help='Configuration to sample at the size threshold')
    p.add_argument('--n', type=int, help='Edges of the default configuration to sample')
    p.add_argument('--size-constant', type=float, default=config.SIZE_CONSTANT)
    p.set_defaults(handler=cmd_pseudo_random)

    p = sub.add_parser('verify-all', parents=[common], help='Every identity and oracle suite')
    p.add_argument('--max-q', type=int, default=9)
    p.add_argument('--max-d', type=int, default=3)
    p.add_argument('--workers', type=int, default=None, help='Thread cap (FFDIST_THREADS by default)')
    p.set_defaults(handler=cmd_verify_all)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(args.log_level)

    is_valid, problems = config.validate_config()
    if not is_valid:
        for problem in problems:
            logger.error(f"❌ {problem}")
        return EXIT_FAILED

    try:
        report = args.handler(args)
        payload = report.render(args.format)
        if args.out:
            Path(args.out).parent.mkdir(parents=True, exist_ok=True)
            Path(args.out).write_bytes(payload)
            logger.info(f"Report written to {args.out}")
        else:
            sys.stdout.buffer.write(payload)
            sys.stdout.flush()
    except ResourceGuardError as e:
        logger.error(f"❌ {e}")
        return EXIT_GUARD
    except (ValueError, ZeroDivisionError, OSError) as e:
        logger.error(f"❌ {e}")
        return EXIT_FAILED
    except KeyboardInterrupt:
        logger.warning("⚠️  Interrupted")
        return EXIT_INTERRUPTED

    if not report.passed:
        for failure in report.failures():
            logger.warning(f"❌ {failure.name}: observed {failure.observed}, expected {failure.expected}")
        return EXIT_FAILED
    return EXIT_OK


def main():
    """CLI entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
