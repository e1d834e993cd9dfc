"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 property violation, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path
from typing import Sequence

from ..column import Column, DeserializationError
from ..curation import Family, PolicyError, PolicySpec, retained_ranks
from ..curation.checks import check_policy
from ..inference import METHODS, IncompatibleColumnsError, reconstruct
from ..phylo import (
    AlifeFormatError,
    LabelMismatchError,
    NewickError,
    read_alife_csv,
    read_newick,
    robinson_foulds,
    write_alife_csv,
    write_newick,
)
from .evaluate import evaluate, write_reports
from .experiments import (
    FOOTPRINTS,
    footprint_sweep,
    policy_comparison,
    scaling_exponent,
    time_reconstruction,
)
from .fitting import fit_policy_to_footprint
from .simulate import ConfigError, SimConfig, simulate

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_IO = 0, 1, 2, 3

# the policy check grid used when no policy is named
CHECK_GRID = (
    [PolicySpec(f, r) for f in ("fr", "dpr", "tdpr", "rpr") for r in (1, 2, 3, 7, 10)]
    + [PolicySpec("rpr", 0)]
    + [PolicySpec("gsnr", a) for a in (1, 2, 4, 8)]
    + [PolicySpec("crpr", c) for c in (8, 32, 256)]
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _confidence(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("confidence must lie strictly between 0 and 1")
    return value


def _policy_args(p: argparse.ArgumentParser, footprint: bool = False) -> None:
    p.add_argument("--policy", help="policy shorthand such as rpr:3")
    p.add_argument("--family", choices=[f.value for f in Family])
    p.add_argument("--param", type=int)
    if footprint:
        p.add_argument("--footprint", type=int, metavar="BITS",
                       help="fit the family's parameter to this end-state payload budget")


def _resolve_policy(args, depth: int | None = None, width: int | None = None) -> PolicySpec:
    if args.policy:
        if args.family or args.param is not None:
            raise UsageError("give either --policy or --family/--param, not both")
        return PolicySpec.parse(args.policy)
    if not args.family:
        raise UsageError("a policy is required (--policy or --family with --param/--footprint)")
    footprint = getattr(args, "footprint", None)
    if footprint is not None:
        if args.param is not None:
            raise UsageError("give either --param or --footprint, not both")
        fit = fit_policy_to_footprint(args.family, width, footprint, depth)
        if not fit.fits:
            print(f"warning: no {args.family} parameterization fits {footprint} bits; "
                  f"using sparsest ({fit.policy})", file=sys.stderr)
        return fit.policy
    if args.param is None:
        hint = " or --footprint" if hasattr(args, "footprint") else ""
        raise UsageError(f"--family needs --param{hint}")
    return PolicySpec(args.family, args.param)


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline=""), True


# -- policy -------------------------------------------------------------------


def cmd_timelapse(args) -> int:
    policy = _resolve_policy(args)
    stream, close = _open_out(args.out)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["depth", "count", "ranks"])
        for n in range(args.depth + 1):
            ranks = retained_ranks(policy, n)
            writer.writerow([n, len(ranks), ",".join(map(str, ranks))])
    finally:
        if close:
            stream.close()
    return EXIT_OK


def cmd_check(args) -> int:
    if args.policy or args.family:
        policies = [_resolve_policy(args)]
    else:
        policies = CHECK_GRID
    failed = 0
    for policy in policies:
        report = check_policy(policy, args.max_depth, args.pointwise_limit)
        status = "ok" if report.ok else "VIOLATION"
        print(f"{policy}\tdepth<={args.max_depth}\t{status}")
        for message in report.violations:
            print(f"  {message}")
        failed += not report.ok
    return EXIT_VIOLATION if failed else EXIT_OK


# -- simulate / reconstruct / compare ---------------------------------------------


def _write_columns(directory: Path, labels: Sequence[str], columns: Sequence[Column]) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for label, col in zip(labels, columns):
        (directory / f"{label}.col").write_bytes(col.to_bytes())


def _read_columns(directory: Path) -> tuple[list[str], list[Column]]:
    files = sorted(directory.glob("*.col"), key=lambda f: (len(f.stem), f.stem))
    if not files:
        raise FileNotFoundError(f"no .col files in {directory}")
    return [f.stem for f in files], [Column.from_bytes(f.read_bytes()) for f in files]


def cmd_simulate(args) -> int:
    depth = args.g + 1
    policy = _resolve_policy(args, depth=depth, width=args.width)
    config = SimConfig(args.n, args.g, policy, args.width, args.seed, args.selection,
                       args.tournament_size, synchronous=not args.asynchronous)
    result = simulate(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_alife_csv(result.tree, out / "ground_truth.csv")
    _write_columns(out / "columns", result.labels, result.columns)
    if args.method:
        report, tree = evaluate(result.tree, result.columns, result.labels, args.method,
                                args.confidence, args.seed)
        (out / "reconstruction.nwk").write_text(write_newick(tree) + "\n", encoding="utf-8")
        with open(out / "report.csv", "w", encoding="utf-8", newline="") as fh:
            write_reports([report], fh)
        print(f"rf_distance={report.rf_distance} rf_similarity={report.rf_similarity:.4f} "
              f"bits={report.bits} policy={policy}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    labels, columns = _read_columns(Path(args.columns))
    tree = reconstruct(columns, args.method, labels, args.confidence,
                       **({"resolve_polytomies": args.split_polytomies,
                           "correct_collision_bias": args.bias_correct}
                          if args.method == "trie" else {}))
    text = write_newick(tree) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def _read_tree(path: str):
    if path.endswith(".csv"):
        return read_alife_csv(path)
    return read_newick(Path(path).read_text(encoding="utf-8"))


def cmd_compare(args) -> int:
    a, b = _read_tree(args.first), _read_tree(args.second)
    distance, similarity = robinson_foulds(a, b)
    print("rf_distance,rf_similarity")
    print(f"{distance},{similarity}")
    return EXIT_OK


# -- bench / experiment --------------------------------------------------------------


def cmd_bench(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",")]
    methods = list(METHODS) if args.method == "both" else [args.method]
    rows = time_reconstruction(sizes, methods, args.repeats, args.seed,
                               _resolve_policy(args) if (args.policy or args.family) else None,
                               args.width, args.g)
    stream, close = _open_out(args.out)
    try:
        writer = csv.DictWriter(stream, fieldnames=["n", "method", "strata", "wall_ms"],
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if close:
            stream.close()
    if len(sizes) > 1:
        for method in methods:
            print(f"# {method} log-log exponent {scaling_exponent(rows, method):.3f}",
                  file=sys.stderr)
    return EXIT_OK


def cmd_experiment(args) -> int:
    seeds = range(args.seed, args.seed + args.seeds)
    common = dict(width=args.width, n=args.n, g=args.g, method=args.method or "trie",
                  confidence=args.confidence)
    if args.kind == "footprints":
        trials = [t for ts in footprint_sweep(seeds, args.family, FOOTPRINTS, **common).values()
                  for t in ts]
    else:
        trials = [t for ts in policy_comparison(seeds, ("rpr", "tdpr"), args.footprint,
                                                **common).values() for t in ts]
    stream, close = _open_out(args.out)
    try:
        write_reports([t.report for t in trials], stream)
    finally:
        if close:
            stream.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stratigraph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    policy = sub.add_parser("policy", help="inspect retention policies")
    psub = policy.add_subparsers(dest="action", required=True, parser_class=_Parser)
    tl = psub.add_parser("timelapse", help="retained ranks at every depth, as CSV")
    _policy_args(tl)
    tl.add_argument("--depth", type=int, required=True)
    tl.add_argument("--out")
    tl.set_defaults(func=cmd_timelapse)
    ck = psub.add_parser("check", help="property sweep; exits 2 on any violation")
    _policy_args(ck)
    ck.add_argument("--max-depth", type=int, default=4096)
    ck.add_argument("--pointwise-limit", type=int, default=2048)
    ck.set_defaults(func=cmd_check)

    sim = sub.add_parser("simulate", help="simulate a population; write ground truth and columns")
    _policy_args(sim, footprint=True)
    sim.add_argument("--width", type=int, choices=(1, 8, 64), default=64)
    sim.add_argument("--n", type=int, default=100)
    sim.add_argument("--g", type=int, default=500)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--selection", choices=("drift", "tournament"), default="drift")
    sim.add_argument("--tournament-size", type=int, default=2)
    sim.add_argument("--asynchronous", action="store_true",
                     help="Moran-style overlapping generations")
    sim.add_argument("--method", choices=METHODS,
                     help="also reconstruct and write report.csv")
    sim.add_argument("--confidence", type=_confidence, default=0.95)
    sim.add_argument("--out", required=True)
    sim.set_defaults(func=cmd_simulate)

    rec = sub.add_parser("reconstruct", help="reconstruct a phylogeny from column files")
    rec.add_argument("--columns", required=True, help="directory of .col files")
    rec.add_argument("--method", choices=METHODS, default="trie")
    rec.add_argument("--confidence", type=_confidence, default=0.95)
    rec.add_argument("--split-polytomies", action="store_true")
    rec.add_argument("--bias-correct", action="store_true")
    rec.add_argument("--out")
    rec.set_defaults(func=cmd_reconstruct)

    cmp_ = sub.add_parser("compare", help="Robinson-Foulds distance between two trees")
    cmp_.add_argument("first")
    cmp_.add_argument("second")
    cmp_.set_defaults(func=cmd_compare)

    bench = sub.add_parser("bench", help="reconstruction timing sweep")
    _policy_args(bench)
    bench.add_argument("--method", choices=METHODS + ("both",), default="both")
    bench.add_argument("--sizes", default="64,128,256,512,1024,2048,4096")
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--width", type=int, choices=(1, 8, 64), default=64)
    bench.add_argument("--g", type=int, default=64)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out")
    bench.set_defaults(func=cmd_bench)

    exp = sub.add_parser("experiment", help="multi-seed footprint or policy comparison")
    exp.add_argument("kind", choices=("footprints", "policies"))
    exp.add_argument("--family", choices=[f.value for f in Family], default="rpr")
    exp.add_argument("--footprint", type=int, default=64)
    exp.add_argument("--seeds", type=int, default=20)
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--width", type=int, choices=(1, 8, 64), default=1)
    exp.add_argument("--n", type=int, default=100)
    exp.add_argument("--g", type=int, default=500)
    exp.add_argument("--method", choices=METHODS, default="trie")
    exp.add_argument("--confidence", type=_confidence, default=0.95)
    exp.add_argument("--out")
    exp.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PolicyError, ConfigError) as exc:
        print(f"stratigraph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, DeserializationError, AlifeFormatError, NewickError,
            IncompatibleColumnsError, LabelMismatchError) as exc:
        print(f"stratigraph: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
