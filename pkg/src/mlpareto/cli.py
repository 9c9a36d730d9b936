"""Command-line entry point: build, detect, frontier, density.

Exit codes: 0 success, 2 input error, 3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .bundle import (
    build_bundle,
    density_grid,
    dump_json,
    frontier_to_dict,
    partition_to_dict,
    read_bundle,
    read_partition,
    tag_crosstab,
    write_bundle,
)
from .errors import ConvergenceError, InputError
from .objectives import objective_vector
from .pareto import frontier, frontier_multilayer, knee_point
from .spectral import SpectralConfig, spectral_partition

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3

_VARIANTS = {"unnorm": "unnormalized", "norm": "normalized-symmetric"}


def _float_list(text: str, n: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != n:
        raise InputError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    try:
        return [float(x) for x in parts]
    except ValueError:
        raise InputError(f"{what}: non-numeric value in {text!r}") from None


def _resolution(text: str) -> tuple[int, int]:
    try:
        rows, cols = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise InputError(f"resolution must look like RxC, got {text!r}") from None
    return rows, cols


def cmd_build(args) -> int:
    for path in (args.geo, args.tags):
        if not Path(path).is_file():
            raise InputError(f"{path}: no such file")
    whitelist = [t for t in args.whitelist.split(",") if t.strip()]
    bundle = build_bundle(args.geo, args.tags, whitelist, args.delta_km)
    write_bundle(bundle, args.out)
    net = bundle.network
    counts = ", ".join(f"{name}={net.edge_count(l)}" for l, name in enumerate(bundle.layer_names))
    print(f"p={net.p} edges: {counts}")
    return EXIT_OK


def cmd_detect(args) -> int:
    bundle = read_bundle(args.bundle)
    net = bundle.network
    if not 0 <= args.layer < net.L:
        raise InputError(f"unknown layer {args.layer}; bundle has {net.L}")
    if args.k > net.p:
        raise InputError(f"k={args.k} exceeds vertex count {net.p}")
    config = SpectralConfig(k=args.k, variant=_VARIANTS[args.variant], seed=args.seed)
    part = spectral_partition(net, args.layer, config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dump_json(
        partition_to_dict(net, part, layer=args.layer, variant=config.variant, seed=args.seed),
        out / f"partition_layer{args.layer}.json",
    )
    if bundle.tags is not None:
        tags, table = tag_crosstab(bundle, part)
        with open(out / f"crosstab_layer{args.layer}.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["tag"] + [f"community_{c}" for c in range(part.k)])
            for t, row in zip(tags, table):
                w.writerow([t] + row.tolist())
    rc = objective_vector(net, part).values
    print(f"layer {args.layer}: k={part.k} ratio_cut=" + ", ".join(f"{v:.6g}" for v in rc))
    return EXIT_OK


def cmd_frontier(args) -> int:
    bundle = read_bundle(args.bundle)
    net = bundle.network
    if net.L != 2 and not args.multilayer:
        raise InputError(f"frontier needs exactly 2 layers, bundle has {net.L} (see --multilayer)")
    if args.k > net.p:
        raise InputError(f"k={args.k} exceeds vertex count {net.p}")
    variant = _VARIANTS[args.variant]
    seeds = [args.seed1, args.seed2] + [args.seed2 + l for l in range(1, net.L - 1)]
    configs = [SpectralConfig(k=args.k, variant=variant, seed=s) for s in seeds[: net.L]]
    if args.multilayer:
        result = frontier_multilayer(net, configs, check=args.check)
    else:
        result = frontier(net, configs, symmetric=args.symmetric, check=args.check)
    if args.select == "knee":
        selected = knee_point(result).step
    else:
        try:
            selected = int(args.select)
        except ValueError:
            raise InputError(f"--select must be 'knee' or a step index, got {args.select!r}") from None
        if selected not in {pt.step for pt in result.path}:
            raise InputError(f"step {selected} not on the traversed path")
    dump_json(
        frontier_to_dict(result, selected, variant=variant, seeds=seeds[: net.L],
                         symmetric=bool(args.symmetric)),
        args.out,
    )
    front = [pt.objectives.values for pt in result.front]
    ranges = "; ".join(
        f"layer {l}: [{min(v[l] for v in front):.6g}, {max(v[l] for v in front):.6g}]"
        for l in range(net.L)
    )
    print(f"path length {len(result.path)}, front size {len(result.front)}, {ranges}")
    return EXIT_OK


def cmd_density(args) -> int:
    bundle = read_bundle(args.bundle)
    if bundle.coordinates is None:
        raise InputError("bundle has no coordinates")
    part = read_partition(args.partition)
    if part.p != bundle.network.p:
        raise InputError("partition does not match bundle vertex count")
    bbox = tuple(_float_list(args.bbox, 4, "--bbox"))
    grid = density_grid(bundle.coordinates, part, bbox, _resolution(args.res))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows, cols = grid.shape
    for c in range(part.k):
        with open(out / f"community_{c}.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["row", "col", "count"])
            for r in range(rows):
                for q in range(cols):
                    w.writerow([r, q, int(grid.counts[c, r, q])])
    totals = ", ".join(str(int(x)) for x in grid.counts.sum(axis=(1, 2)))
    print(f"{part.k} grids of {rows}x{cols}; users in bbox per community: {totals}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mlpareto", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a two-layer network bundle from CSV records")
    b.add_argument("--geo", required=True, help="CSV with header user_id,latitude,longitude")
    b.add_argument("--tags", required=True, help="CSV with header user_id,tag")
    b.add_argument("--whitelist", required=True, help="comma-separated tags")
    b.add_argument("--delta-km", type=float, default=50.0)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    d = sub.add_parser("detect", help="spectral clustering on one layer")
    d.add_argument("--bundle", required=True)
    d.add_argument("--layer", type=int, choices=[0, 1], required=True)
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--variant", choices=sorted(_VARIANTS), default="unnorm")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out", required=True, help="output directory")
    d.set_defaults(func=cmd_detect)

    f = sub.add_parser("frontier", help="approximate Pareto front between layer solutions")
    f.add_argument("--bundle", required=True)
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--seed1", type=int, default=0)
    f.add_argument("--seed2", type=int, default=0)
    f.add_argument("--variant", choices=sorted(_VARIANTS), default="unnorm")
    f.add_argument("--symmetric", action="store_true", help="also walk back scoring layer 0")
    f.add_argument("--multilayer", action="store_true",
                   help="allow L > 2 via pairwise walks (extension)")
    f.add_argument("--select", default="knee", help="'knee' or a path step index")
    f.add_argument("--check", action="store_true", help="cross-check incremental costs")
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_frontier)

    g = sub.add_parser("density", help="per-community density grids")
    g.add_argument("--bundle", required=True)
    g.add_argument("--partition", required=True, help="partition or frontier JSON")
    g.add_argument("--bbox", required=True, help="minlat,minlon,maxlat,maxlon")
    g.add_argument("--res", required=True, help="RxC")
    g.add_argument("--out", required=True, help="output directory")
    g.set_defaults(func=cmd_density)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
