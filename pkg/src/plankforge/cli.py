"""Command-line front end.

Subcommands
-----------
cover-ball    greedy covering of a unit-diameter ball
cover-region  block-partition covering of a box region
control       polynomial-controlling table synthesis
verify        independent re-verification of a covering file

Every command writes a ``manifest.json`` capturing its exact argument vector;
re-running that vector reproduces the JSON artifacts byte for byte.  All
randomness flows from the explicit ``--seed``.  Exit codes: 0 pass, 1
verified failure (witness found), 2 usage or input error, 3 slab supply
exhausted.
"""
from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, serialize
from .control import build_control, control_check
from .errors import CoverageError, PlankforgeError, SlabSupplyError
from .geom import Ball, Box, sample_cloud
from .greedy import GreedyConfig, cover_ball
from .region import cover_region
from .svg import covering_svg
from .verify import bang_necessity, find_uncovered_point, verify_covering

RESIDUAL_TOL = 1.0 + 1e-9


class UsageError(PlankforgeError):
    """Bad flags or malformed input files (exit code 2)."""


def parse_widths_spec(spec: str) -> np.ndarray:
    """Widths from ``const:W:N``, ``harmonic:START:COUNT`` or a CSV path."""
    if spec.startswith("const:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad widths spec {spec!r}; expected const:W:N")
        w, n = _pos_float(parts[1], "width"), _pos_int(parts[2], "count")
        return np.full(n, w)
    if spec.startswith("harmonic:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad widths spec {spec!r}; expected harmonic:START:COUNT")
        start, n = _pos_int(parts[1], "start"), _pos_int(parts[2], "count")
        return 1.0 / np.arange(start, start + n, dtype=np.float64)
    return _read_csv_column(spec, "widths")


def parse_xs_spec(spec: str) -> np.ndarray:
    """Sample points from ``const:V:N`` or a CSV path."""
    if spec.startswith("const:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad xs spec {spec!r}; expected const:V:N")
        v, n = _pos_float(parts[1], "value"), _pos_int(parts[2], "count")
        return np.full(n, v)
    return _read_csv_column(spec, "xs")


def random_normals(dim: int, count: int, seed: int) -> np.ndarray:
    """Seeded uniform directions on the unit sphere."""
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    g = rng.normal(size=(count, dim))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms == 0.0):  # probability zero, defensive
        bad = norms == 0.0
        g[bad] = rng.normal(size=(int(bad.sum()), dim))
        norms = np.linalg.norm(g, axis=1)
    return g / norms[:, None]


def parse_normals_spec(spec: str | None, dim: int, count: int, seed: int) -> np.ndarray:
    if spec is None:
        spec = f"random:{seed}"
    if spec.startswith("random:"):
        sub = spec.split(":", 1)[1]
        try:
            nseed = int(sub)
        except ValueError as exc:
            raise UsageError(f"bad normals spec {spec!r}") from exc
        return random_normals(dim, count, nseed)
    rows = _read_csv_rows(spec, "normals")
    if rows.shape != (count, dim):
        raise UsageError(
            f"normals file has shape {rows.shape}, expected {(count, dim)}"
        )
    norms = np.linalg.norm(rows, axis=1)
    if np.any(norms == 0.0):
        raise UsageError("normals file contains a zero vector")
    return rows / norms[:, None]


def parse_region(spec: str) -> Box:
    """Box from per-axis ``lo:hi`` pairs joined by commas."""
    try:
        pairs = [p.split(":") for p in spec.split(",")]
        lows = [float(p[0]) for p in pairs]
        highs = [float(p[1]) for p in pairs]
        if any(len(p) != 2 for p in pairs):
            raise ValueError
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad region spec {spec!r}; expected lo:hi[,lo:hi...]") from exc
    try:
        return Box(np.array(lows), np.array(highs))
    except PlankforgeError as exc:
        raise UsageError(str(exc)) from exc


def parse_body(spec: str):
    """Body from ``ball:c1[,c2,...]:r`` or ``box:lo:hi[,lo:hi...]``."""
    if spec.startswith("ball:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad body spec {spec!r}; expected ball:c1[,c2..]:r")
        try:
            center = np.array([float(x) for x in parts[1].split(",")])
            return Ball(center, float(parts[2]))
        except (ValueError, PlankforgeError) as exc:
            raise UsageError(f"bad body spec {spec!r}: {exc}") from exc
    if spec.startswith("box:"):
        return parse_region(spec[len("box:"):])
    raise UsageError(f"bad body spec {spec!r}; expected ball:... or box:...")


def _pos_float(text: str, what: str) -> float:
    try:
        v = float(text)
    except ValueError as exc:
        raise UsageError(f"bad {what} {text!r}") from exc
    if not v > 0:
        raise UsageError(f"{what} must be positive, got {v}")
    return v


def _pos_int(text: str, what: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise UsageError(f"bad {what} {text!r}") from exc
    if v < 1:
        raise UsageError(f"{what} must be >= 1, got {v}")
    return v


def _read_csv_column(path: str, what: str) -> np.ndarray:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"{what} file not found: {path}")
    values = []
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError as exc:
            raise UsageError(f"{what} file {path}, line {lineno}: not a number: {line!r}") from exc
    if not values:
        raise UsageError(f"{what} file {path} is empty")
    return np.array(values)


def _read_csv_rows(path: str, what: str) -> np.ndarray:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"{what} file not found: {path}")
    rows = []
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(x) for x in line.split(",")])
        except ValueError as exc:
            raise UsageError(f"{what} file {path}, line {lineno}: bad row {line!r}") from exc
    if not rows:
        raise UsageError(f"{what} file {path} is empty")
    return np.array(rows)


def write_manifest(out: Path, command: str, argv: list[str], seeds: dict) -> None:
    manifest = {
        "schema": serialize.SCHEMA,
        "kind": "manifest",
        "command": command,
        "argv": list(argv),
        "seeds": seeds,
        "version": __version__,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    serialize.write_json(out / "manifest.json", manifest)


def cmd_cover_ball(args, argv: list[str]) -> int:
    widths = parse_widths_spec(args.widths)
    normals = parse_normals_spec(args.normals, args.dim, widths.size, args.seed)
    cfg = GreedyConfig(
        dimension=args.dim,
        cloud_size=args.samples,
        seed=args.seed,
        verify_cloud_size=args.verify_samples,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        cov = cover_ball(widths, normals, cfg)
    except CoverageError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    serialize.write_json(out / "cover.json", serialize.covering_to_json(cov))
    serialize.write_json(out / "report.json", serialize.report_to_json(cov.verification))
    write_manifest(out, "cover-ball", argv, {"seed": args.seed, "verifySeed": args.seed + 1})
    if args.svg:
        Path(args.svg).write_text(covering_svg(cov))
    _print_report(cov.verification)
    return 0 if cov.verification.status == "pass" else 1


def cmd_cover_region(args, argv: list[str]) -> int:
    region = parse_region(args.region)
    if not 0.0 < args.c <= 1.0:
        raise UsageError(f"--c must be in (0, 1], got {args.c}")
    widths = parse_widths_spec(args.widths)
    normals = parse_normals_spec(args.normals, region.dim, widths.size, args.seed)
    cfg = GreedyConfig(
        dimension=region.dim,
        cloud_size=args.samples,
        seed=args.seed,
        verify_cloud_size=args.verify_samples,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = cover_region(
        widths, normals, region, args.c, cfg, grid_per_axis=args.grid
    )
    serialize.write_json(out / "plan.json", serialize.plan_to_json(result.plan))
    serialize.write_json(out / "cover.json", serialize.covering_to_json(result.covering))
    serialize.write_json(out / "report.json", serialize.report_to_json(result.report))
    write_manifest(out, "cover-region", argv, {"seed": args.seed})
    if args.svg:
        if region.dim != 2:
            raise UsageError("--svg requires a 2-d region")
        balls = [Ball(c, result.plan.ball_diameter / 2.0) for c in result.plan.centers]
        Path(args.svg).write_text(covering_svg(result.covering, balls=balls))
    _print_report(result.report)
    return 0 if result.report.status == "pass" else 1


def cmd_control(args, argv: list[str]) -> int:
    if args.degree < 1:
        raise UsageError(f"--degree must be >= 1, got {args.degree}")
    if not args.radius > 0:
        raise UsageError(f"--radius must be positive, got {args.radius}")
    xs = parse_xs_spec(args.xs)
    table = build_control(xs, args.degree, args.radius)

    ball = Ball(table.cert_center, table.cert_radius)
    coeffs = sample_cloud(ball, args.trials, args.seed).points
    worst = 0.0
    for a in coeffs:
        _, res = control_check(table, a)
        worst = max(worst, res)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    serialize.write_json(out / "control.json", serialize.table_to_json(table))
    (out / "control.csv").write_text(serialize.table_to_csv(table))
    if table.covering is not None:
        # the coefficient-space covering backing the table, same wire format
        # as the ball pipelines
        serialize.write_json(out / "cover.json", serialize.covering_to_json(table.covering))
    summary = {
        "schema": serialize.SCHEMA,
        "kind": "control-verification",
        "trials": int(args.trials),
        "maxResidual": float(worst),
        "tolerance": RESIDUAL_TOL,
        "status": "pass" if worst <= RESIDUAL_TOL else "fail",
        "pairs": len(table),
        "certRadius": float(table.cert_radius),
    }
    serialize.write_json(out / "report.json", summary)
    write_manifest(out, "control", argv, {"seed": args.seed})
    print(
        f"control: {len(table)} pairs, certified radius {table.cert_radius:.6g}, "
        f"max residual {worst:.9f} over {args.trials} trials -> {summary['status']}"
    )
    return 0 if summary["status"] == "pass" else 1


def cmd_verify(args, argv: list[str]) -> int:
    try:
        data = serialize.read_json(args.cover)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read covering file {args.cover}: {exc}") from exc
    cov = serialize.covering_from_json(data)
    body = parse_body(args.body) if args.body else cov.body

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if isinstance(body, Ball):
        necessity = bang_necessity(cov, body)
        if necessity.status == "impossible":
            witness = find_uncovered_point(cov.placed, body, budget=args.budget, seed=args.seed)
            report = {
                "schema": serialize.SCHEMA,
                "kind": "verification",
                "status": "fail",
                "necessity": "impossible",
                "totalWidth": necessity.total_width,
                "bodyDiameter": necessity.diameter,
                "witness": None if witness is None else [float(x) for x in witness],
            }
            serialize.write_json(out / "report.json", report)
            write_manifest(out, "verify", argv, {"seed": args.seed})
            print(
                f"impossible: total width {necessity.total_width:.6g} < diameter "
                f"{necessity.diameter:.6g}"
                + ("" if witness is None else f"; witness {list(map(float, witness))}")
            )
            return 1

    mode = "grid" if isinstance(body, Box) else "cloud"
    report = verify_covering(cov, body=body, mode=mode, count=args.samples, seed=args.seed)
    serialize.write_json(out / "report.json", serialize.report_to_json(report))
    write_manifest(out, "verify", argv, {"seed": args.seed})
    _print_report(report)
    return 0 if report.status == "pass" else 1


def _print_report(report) -> None:
    print(
        f"verification {report.status}: {report.uncovered_count} of {report.checked} "
        f"points uncovered (total width {report.total_width:.6g}, "
        f"necessity margin {report.necessity_margin:+.6g})"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plankforge",
        description="Translative slab coverings and polynomial-controlling tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cover-ball", help="greedily cover a unit-diameter ball")
    p.add_argument("--dim", type=int, required=True, help="ambient dimension")
    p.add_argument("--widths", required=True, help="CSV path | const:W:N | harmonic:START:COUNT")
    p.add_argument("--normals", default=None, help="CSV path | random:SEED (default: random:<seed>)")
    p.add_argument("--samples", type=int, default=200_000, help="construction cloud size")
    p.add_argument("--verify-samples", type=int, default=100_000, help="verification cloud size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--svg", default=None, help="write an SVG rendering (dim 2 only)")
    p.set_defaults(func=cmd_cover_ball)

    p = sub.add_parser("cover-region", help="cover a box region via width blocks")
    p.add_argument("--region", required=True, help="per-axis lo:hi pairs joined by commas")
    p.add_argument("--c", type=float, required=True, help="block strength constant in (0, 1]")
    p.add_argument("--widths", required=True, help="CSV path | const:W:N | harmonic:START:COUNT")
    p.add_argument("--normals", default=None, help="CSV path | random:SEED")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--verify-samples", type=int, default=100_000)
    p.add_argument("--grid", type=int, default=50, help="verification grid points per axis")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_cover_region)

    p = sub.add_parser("control", help="synthesize a polynomial-controlling table")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--xs", required=True, help="CSV path | const:V:N")
    p.add_argument("--radius", type=float, required=True, help="certified coefficient ball radius")
    p.add_argument("--trials", type=int, default=10_000, help="verification sample count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_control)

    p = sub.add_parser("verify", help="re-verify a covering file")
    p.add_argument("--cover", required=True, help="path to cover.json")
    p.add_argument("--body", default=None, help="ball:c1[,c2..]:r | box:lo:hi[,lo:hi..]")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--budget", type=int, default=100_000, help="witness search budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    threads = os.environ.get("PLANKFORGE_THREADS")
    if threads:
        # Cap BLAS pools; the library's own loops are sequential and
        # deterministic regardless.
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SlabSupplyError as exc:
        print(f"slab supply exhausted: {exc}", file=sys.stderr)
        return 3
    except PlankforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
