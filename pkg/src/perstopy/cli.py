"""Command-line front end: ``perstopy <verb> ...``.

Exit status is 0 on success, 1 when the input is rejected or a computation
cannot finish, and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .distances import (IntervalPersistentGroup, bottleneck, dendrogram_from_ultrametric,
                        interleaving_interval_groups)
from .gromov_hausdorff import BudgetExceeded, gh_exact, gh_lower_bounds, gh_pointed_exact
from .homology import PersistenceDiagram, mu0_ultrametric, ph0_diagram, ph1_diagram
from .loops import generalized_subdendrogram, mu1_matrix
from .metric import (MetricError, as_pointed, circle_sample, cycle_graph, linf_product, random_metric,
                     random_tree_metric, star_graph, uniform_space, wedge_sum)
from .verify import verify_suite
from .vietoris_rips import persistent_pi1, pi1_level

SIZED = {"cycle": cycle_graph, "star": star_graph, "circle": circle_sample, "uniform": uniform_space}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _int_arg(parser, value: str, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        parser.error(f"{what} must be an integer, got {value!r}")


def cmd_generate(args, parser) -> int:
    kind, params = args.kind, args.params
    if kind in SIZED or kind in ("tree", "random"):
        if len(params) != 1:
            parser.error(f"generate {kind} takes one size argument")
        n = _int_arg(parser, params[0], "size")
        if kind in SIZED:
            X = SIZED[kind](n)
        elif kind == "tree":
            X = random_tree_metric(n, args.seed, weighted=args.weighted)
        else:
            X = random_metric(n, args.seed, args.metric_kind)
    else:  # product / wedge of two saved spaces
        if len(params) != 2:
            parser.error(f"generate {kind} takes two space files")
        A, B = io.load_space(params[0]), io.load_space(params[1])
        X = linf_product(A, B) if kind == "product" else wedge_sum(as_pointed(A), as_pointed(B))
    if args.basepoint is not None:
        X = as_pointed(X, args.basepoint)
    _emit(json.dumps(io.space_to_json(X)), args.output)
    return 0


def cmd_pi1(args, parser) -> int:
    X = as_pointed(io.load_space(args.space), args.basepoint)
    if args.scale is not None:
        if args.scale < 0:
            parser.error("scale must be nonnegative")
        lv = pi1_level(X.space, args.scale, X.basepoint)
        out = {"scale": args.scale, "basepoint": X.basepoint, "group": str(lv.group),
               "class": lv.group.to_json(), "presentation": lv.presentation.to_text(),
               "simplified": lv.simplified.to_text()}
    else:
        out = persistent_pi1(X).to_json()
    _emit(io.dumps(out), args.output)
    return 0


def cmd_barcode(args, parser) -> int:
    X = io.load_space(args.space)
    D = ph0_diagram(X) if args.dim == 0 else ph1_diagram(X)
    _emit(D.to_csv(), args.output)
    return 0


def cmd_loops(args, parser) -> int:
    X = as_pointed(io.load_space(args.space), args.basepoint)
    if args.max_size < 1:
        parser.error("--max-size must be positive")
    G = generalized_subdendrogram(X, args.max_size)
    if args.subdendrogram:
        Path(args.subdendrogram).write_text(io.dumps(G.to_json()) + "\n")
    if args.mu1_matrix:
        Path(args.mu1_matrix).write_text(io.matrix_to_csv(mu1_matrix(G.classes, X)))
    classes = [{"id": i, "representative": str(c.representative), "birth": c.birth, "flagged": c.flagged}
               for i, c in enumerate(G.classes)]
    _emit(io.dumps({"basepoint": X.basepoint, "max_size": args.max_size, "classes": classes}), None)
    return 0


def cmd_mu0(args, parser) -> int:
    X = io.load_space(args.space)
    U = mu0_ultrametric(X)
    D = dendrogram_from_ultrametric(U)
    if args.dendrogram:
        Path(args.dendrogram).write_text(io.dumps(D.to_json()) + "\n")
    _emit(io.dumps({"ultrametric": U, "dendrogram": D.to_json()}), None)
    return 0


def cmd_gh(args, parser) -> int:
    X, Y = io.load_space(args.X), io.load_space(args.Y)
    exact = None
    if not args.bounds_only:
        # raises BudgetExceeded before any bound is computed
        exact = (gh_pointed_exact if args.pointed else gh_exact)(X, Y, args.budget)
    rep = gh_lower_bounds(X, Y, limit=args.budget, pointed=args.pointed, with_exact=False)
    rep.exact = exact
    _emit(io.dumps(rep.to_json()), None)
    return 0


def cmd_distance(args, parser) -> int:
    if args.bottleneck:
        A, B = (PersistenceDiagram.from_csv(io.read_text(p)) for p in args.bottleneck)
        out = {"bottleneck": bottleneck(A, B)}
    else:
        P, Q = (_interval_group(p) for p in args.interleave)
        out = {"interleaving": interleaving_interval_groups(P, Q)}
    _emit(io.dumps(out), None)
    return 0


def _interval_group(path: str) -> IntervalPersistentGroup:
    data = io.read_json(path)
    try:
        return IntervalPersistentGroup.from_json(data)
    except (KeyError, TypeError) as exc:
        raise io.InputError(f"{path} is not an interval group: missing or invalid field {exc}") from None


def cmd_verify(args, parser) -> int:
    report = verify_suite(args.suite, args.seed)
    print(report.table())
    if args.json:
        Path(args.json).write_text(io.dumps(report.to_json()) + "\n")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="perstopy", description="Persistent topology of finite metric spaces.")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    g = sub.add_parser("generate", help="write a standard metric space as JSON")
    g.add_argument("kind", choices=[*SIZED, "tree", "random", "product", "wedge"])
    g.add_argument("params", nargs="+", help="size, or two space files for product/wedge")
    g.add_argument("-o", "--output")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--weighted", action="store_true", help="tree: random edge weights")
    g.add_argument("--metric-kind", choices=["graph", "grid"], default="graph", help="random: construction")
    g.add_argument("--basepoint", type=int)
    g.set_defaults(run=cmd_generate)

    g = sub.add_parser("pi1", help="persistent fundamental group")
    g.add_argument("space")
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--scale", type=float)
    mode.add_argument("--all", action="store_true", help="every scale (the default)")
    g.add_argument("--basepoint", type=int)
    g.add_argument("-o", "--output")
    g.set_defaults(run=cmd_pi1)

    g = sub.add_parser("barcode", help="persistence diagram as CSV")
    g.add_argument("space")
    g.add_argument("--dim", type=int, choices=[0, 1], required=True)
    g.add_argument("-o", "--output")
    g.set_defaults(run=cmd_barcode)

    g = sub.add_parser("loops", help="loop classes and the mu1 subdendrogram")
    g.add_argument("space")
    g.add_argument("--max-size", type=int, required=True)
    g.add_argument("--subdendrogram")
    g.add_argument("--mu1-matrix")
    g.add_argument("--basepoint", type=int)
    g.set_defaults(run=cmd_loops)

    g = sub.add_parser("mu0", help="single-linkage ultrametric and its dendrogram")
    g.add_argument("space")
    g.add_argument("--dendrogram")
    g.set_defaults(run=cmd_mu0)

    g = sub.add_parser("gh", help="Gromov-Hausdorff distance and lower bounds")
    g.add_argument("X")
    g.add_argument("Y")
    g.add_argument("--pointed", action="store_true")
    g.add_argument("--budget", type=int, help="map-pair budget (default: $PERSTOPY_BUDGET or 1e13)")
    g.add_argument("--bounds-only", action="store_true")
    g.set_defaults(run=cmd_gh)

    g = sub.add_parser("distance", help="bottleneck or interval-group interleaving distance")
    which = g.add_mutually_exclusive_group(required=True)
    which.add_argument("--bottleneck", nargs=2, metavar=("D1.csv", "D2.csv"))
    which.add_argument("--interleave", nargs=2, metavar=("G1.json", "G2.json"))
    g.set_defaults(run=cmd_distance)

    g = sub.add_parser("verify", help="run a verification suite")
    g.add_argument("--suite", choices=["paper", "properties", "all"], default="paper")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--json", help="also write the machine-readable report here")
    g.set_defaults(run=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.run(args, parser)
    except SystemExit as exc:  # parser.error inside a command
        return int(exc.code or 0)
    except io.InputError as exc:
        print(f"perstopy: error: {exc}", file=sys.stderr)
    except BudgetExceeded as exc:
        print(f"perstopy: error: budget exceeded: {exc}", file=sys.stderr)
    except MetricError as exc:
        print(f"perstopy: error: not a metric space: {type(exc).__name__}: {exc}", file=sys.stderr)
    except (ValueError, IndexError) as exc:
        print(f"perstopy: error: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
