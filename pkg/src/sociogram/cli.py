"""Command-line entry point: ``sociogram analyze|generate|fit|layout``.

Exit codes: 0 success, 1 runtime failure, 2 configuration/validation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .classify import ArchetypeKind, generate_archetype
from .errors import ConfigurationError, SociogramError
from .graphcore import Dedup, build_graph, read_edge_csv, write_edge_csv
from .layout import DEFAULT_ITERATIONS, DEFAULT_REPULSION, fr_layout
from .metrics import degree_distribution
from .pipeline import ARTIFACTS, STAGES, AnalysisConfig, StageError, run_analyze
from .report import canonical
from .statfit import Model, fit

log = logging.getLogger("sociogram")

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


def _emit_list(raw: str) -> tuple[str, ...]:
    items = tuple(x.strip() for x in raw.split(",") if x.strip())
    bad = [x for x in items if x not in ARTIFACTS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown artifact(s) {bad}; choose from {', '.join(ARTIFACTS)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sociogram", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the full pipeline on an edge CSV")
    a.add_argument("--edges", required=True, type=Path)
    a.add_argument("--lexicons", type=Path, help="directory of six word lists (default: bundled)")
    a.add_argument("--risk", type=Path, help="risk-factor JSON (default: bundled)")
    a.add_argument("--classifier", type=Path, help="archetype threshold JSON (default: bundled)")
    a.add_argument("--out", required=True, type=Path)
    a.add_argument("--dedup", choices=["collapse", "keep"], default="collapse")
    a.add_argument("--fr-repulsion", type=float, default=DEFAULT_REPULSION)
    a.add_argument("--fr-iterations", type=int, default=DEFAULT_ITERATIONS)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--damping", type=float, default=0.85)
    a.add_argument("--tol", type=float, default=1e-10)
    a.add_argument("--max-iter", type=int, default=200)
    a.add_argument("--directed-betweenness", action="store_true")
    a.add_argument("--threads", type=int, default=1)
    a.add_argument("--deterministic", action="store_true", help="omit the wall-clock timestamp")
    a.add_argument("--stage", choices=STAGES, default=STAGES[-1], help="stop after this stage")
    a.add_argument("--emit", type=_emit_list, default=None,
                   help=f"comma-separated subset of {','.join(ARTIFACTS)}")

    gen = sub.add_parser("generate", help="write a synthetic archetype edge CSV")
    gen.add_argument("--kind", required=True, choices=[k.value for k in ArchetypeKind])
    gen.add_argument("--size", type=int, default=50)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path, help="destination CSV (default: stdout)")

    f = sub.add_parser("fit", help="fit a power law or exponential to x,y points")
    f.add_argument("--model", choices=[m.value for m in Model], default=Model.POWER_LAW.value)
    src = f.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", type=Path, help="CSV with x,y columns")
    src.add_argument("--edges", type=Path, help="edge CSV; fits its degree histogram")
    f.add_argument("--degree-mode", choices=["in", "out", "total"], default="total")

    lay = sub.add_parser("layout", help="compute a Fruchterman-Reingold layout CSV")
    lay.add_argument("--edges", required=True, type=Path)
    lay.add_argument("--out", type=Path, help="destination CSV (default: stdout)")
    lay.add_argument("--fr-repulsion", type=float, default=DEFAULT_REPULSION)
    lay.add_argument("--fr-iterations", type=int, default=DEFAULT_ITERATIONS)
    lay.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_analyze(args) -> int:
    emit = args.emit
    if emit is None:
        emit = ARTIFACTS if args.stage == STAGES[-1] else ("report",)
    config = AnalysisConfig(
        input_edges=args.edges,
        output_dir=args.out,
        lexicon_dir=args.lexicons,
        risk_config=args.risk,
        classifier_config=args.classifier,
        dedup=Dedup.parse(args.dedup),
        fr_repulsion=args.fr_repulsion,
        fr_iterations=args.fr_iterations,
        seed=args.seed,
        damping=args.damping,
        tol=args.tol,
        max_iter=args.max_iter,
        directed_betweenness=args.directed_betweenness,
        emit=emit,
        stage=args.stage,
        threads=args.threads,
        deterministic=args.deterministic,
    )
    report = run_analyze(config)
    stats = report.get("graph_stats") or {}
    log.info("analyzed %s vertices, %s unique edges -> %s", stats.get("n_vertices"), stats.get("n_edges"), args.out)
    return EXIT_OK


def _open_out(path: Path | None):
    return open(path, "w", newline="", encoding="utf-8") if path else sys.stdout


def _cmd_generate(args) -> int:
    g = generate_archetype(args.kind, args.size, args.seed)
    handle = _open_out(args.out)
    try:
        write_edge_csv(g, handle)
    finally:
        if args.out:
            handle.close()
    return EXIT_OK


def _read_points(path: Path) -> list[tuple[float, float]]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if not reader.fieldnames or not {"x", "y"} <= set(reader.fieldnames):
            raise ConfigurationError(f"{path}: expected a header with x,y columns")
        return [(float(r["x"]), float(r["y"])) for r in reader]


def _cmd_fit(args) -> int:
    if args.points:
        points = _read_points(args.points)
    else:
        g = build_graph(read_edge_csv(args.edges))
        points = degree_distribution(g, args.degree_mode).points()
    result = fit(args.model, points)
    print(json.dumps(canonical(result), sort_keys=True, indent=2))
    return EXIT_OK


def _cmd_layout(args) -> int:
    g = build_graph(read_edge_csv(args.edges))
    result = fr_layout(g, args.fr_repulsion, args.fr_iterations, args.seed)
    handle = _open_out(args.out)
    try:
        w = csv.writer(handle, lineterminator="\n")
        w.writerow(["vertex", "x", "y"])
        for v, (x, y) in result.positions.items():
            w.writerow([v, format(x, ".12g"), format(y, ".12g")])
    finally:
        if args.out:
            handle.close()
    return EXIT_OK


_COMMANDS = {"analyze": _cmd_analyze, "generate": _cmd_generate, "fit": _cmd_fit, "layout": _cmd_layout}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return _COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"sociogram: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StageError as exc:
        print(f"sociogram: {exc.stage} failed: {exc.cause}", file=sys.stderr)
        return EXIT_RUNTIME
    except (SociogramError, OSError, ValueError) as exc:
        print(f"sociogram: {args.command} failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
