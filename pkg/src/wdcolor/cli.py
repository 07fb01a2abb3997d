"""Command-line interface.

Subcommands: ``gen`` (instance generators), ``color`` (certified colouring
pipelines), ``verify`` (check a colouring against an (m, r, d) contract),
``oracle`` (exhaustive optimal bound for small graphs), ``bench`` (CSV over
instance families) and ``kernels`` (report/benchmark the compiled core).

Exit codes: 0 success or verification pass, 1 verification failure,
2 malformed input or violated precondition.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from wdcolor import io
from wdcolor.colouring import (LimitError, brute_force_optimal_d,
                               monochromatic_components, verify_mrd)
from wdcolor.colorer import (colour_bounded_treewidth, colour_partitioned,
                             make_centred_base, strong_construction_colour)
from wdcolor.decomposition import (exact_tree_decomposition, quotient,
                                   singleton_strong_construction,
                                   tree_decomposition_of_tree)
from wdcolor.generate import exp_grid, grid, random_connected, random_tree
from wdcolor.graphs import all_pairs_distances
from wdcolor.rational import as_rational, as_value, fmt
from wdcolor.reductions import integerize, subdivision_blowup


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _read(path: str) -> str:
    return Path(path).read_text()


def _r_tag(r: Fraction) -> str:
    return fmt(r).replace("/", "_")


class CliError(Exception):
    pass


def _load_graph(args):
    if not args.graph:
        raise CliError("--graph is required")
    return io.read_graph(_read(args.graph))


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "grid":
        g = grid(args.d, args.side)
    elif kind == "tree":
        g = random_tree(args.n, args.seed)
    elif kind == "random-connected":
        g = random_connected(args.n, args.seed, args.extra_edges)
    elif kind == "exp-grid":
        g = exp_grid(args.side, args.root)
    elif kind == "subdivide":
        g0 = _load_graph(args)
        scaled, _ = integerize(g0)
        g, _ = subdivision_blowup(scaled)
    else:
        raise CliError(f"unknown generator kind {kind!r}")
    text = io.write_graph(g)
    if args.out:
        _write_atomic(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


def _default_td(G, limit):
    """A decomposition without user input: forests directly, else the oracle."""
    from wdcolor.graphs import connected_components

    if G.m == G.n - len(connected_components(G, all_pairs_distances(G))):
        return tree_decomposition_of_tree(G)
    return exact_tree_decomposition(G, limit=limit)


def _pipeline_result(args, G, D, r):
    if args.pipeline == "treewidth":
        td = io.read_tree_decomposition(_read(args.td)) if args.td else _default_td(G, args.limit)
        return colour_bounded_treewidth(G, D, r, td=td, k=args.k, mode=args.mode,
                                        treewidth_limit=args.limit)
    if args.pipeline == "partition":
        if not args.partition:
            raise CliError("the partition pipeline needs --partition")
        p = io.read_partition(_read(args.partition))
        if args.td:
            qtd = io.read_tree_decomposition(_read(args.td))
        else:
            q, _ = quotient(G, p)
            qtd = exact_tree_decomposition(q, limit=args.limit)
        return colour_partitioned(G, D, p, qtd, r, k=args.k, ell=args.ell, mode=args.mode)
    if args.pipeline == "strong":
        if not args.td:
            raise CliError("the strong pipeline needs --td")
        td = io.read_tree_decomposition(_read(args.td))
        sc = singleton_strong_construction(G, td, args.k)
        base = make_centred_base(sc.k, 0)
        return strong_construction_colour(G, D, sc, base, r, mode=args.mode)
    raise CliError(f"unknown pipeline {args.pipeline!r}")


def _certificate_text(args, result) -> str:
    cert = result.certificate
    sc = result.construction
    lad = result.ladder
    lines = [
        f"pipeline {args.pipeline}",
        f"m {cert.colours}",
        f"r {fmt(cert.r)}",
        f"d {fmt(cert.bound)}",
        f"k {sc.k}",
        f"ell {fmt(sc.ell)}",
        f"base_slope {fmt(lad.base.slope)}",
        f"slope {fmt(lad.slope(sc.k))}",
    ]
    for lvl in lad.levels:
        lines.append("ladder {} {} {} {} {} {}".format(
            lvl.k, fmt(lvl.anchor_slope), fmt(lvl.core_radius_slope),
            fmt(lvl.core_bound_slope), fmt(lvl.extended_bound_slope), fmt(lvl.bound_slope)))
    return "\n".join(lines) + "\n"


def cmd_color(args) -> int:
    if not args.r:
        raise CliError("at least one --r is required")
    G = _load_graph(args)
    D = all_pairs_distances(G)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for r in args.r:
        result = _pipeline_result(args, G, D, r)
        tag = _r_tag(result.certificate.r)
        _write_atomic(out_dir / f"colouring_r{tag}.txt", io.write_colouring(result.colouring))
        _write_atomic(out_dir / f"certificate_r{tag}.txt", _certificate_text(args, result))
    return 0


def cmd_verify(args) -> int:
    G = _load_graph(args)
    if not args.colouring:
        raise CliError("--colouring is required")
    c = io.read_colouring(_read(args.colouring), m=args.m)
    if len(args.r) != 1:
        raise CliError("verify needs exactly one --r")
    r = args.r[0]
    if r <= 0:
        raise CliError("r must be positive")
    d = as_value(args.d, "d") if args.d is not None else None
    if d is None:
        raise CliError("--d is required")
    D = all_pairs_distances(G)
    verdict = verify_mrd(G, D, c, r, d)
    if args.report:
        _write_atomic(Path(args.report), verdict.report.to_csv())
    if args.report_text:
        _write_atomic(Path(args.report_text), verdict.report.to_text())
    if verdict.passed:
        print(f"pass: every monochromatic {fmt(r)}-component has weak diameter <= {fmt(d)}")
        return 0
    comp = verdict.report.components[verdict.violating_component]
    print(f"fail: component of colour {comp.colour} has weak diameter "
          f"{fmt(comp.weak_diameter)} > {fmt(d)} (pair {verdict.violating_pair})")
    return 1


def cmd_oracle(args) -> int:
    G = _load_graph(args)
    if args.m is None:
        raise CliError("--m is required")
    if len(args.r) != 1:
        raise CliError("oracle needs exactly one --r")
    D = all_pairs_distances(G)
    best = brute_force_optimal_d(G, D, args.m, args.r[0], limit=args.limit)
    print(fmt(best))
    return 0


def _bench_instances(args):
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else [10, 20, 30]
    for size in sizes:
        if args.family == "tree":
            g = random_tree(size, args.seed + size)
            yield f"tree_n{size}", g, tree_decomposition_of_tree(g), None
        elif args.family == "grid":
            g = grid(2, size)
            parts = [frozenset(range(i * size, (i + 1) * size)) for i in range(size)]
            yield f"grid_{size}x{size}", g, None, parts
        elif args.family == "random-connected":
            g = random_connected(size, args.seed + size)
            yield f"random_n{size}", g, exact_tree_decomposition(g, limit=args.limit), None
        else:
            raise CliError(f"unknown family {args.family!r}")


def cmd_bench(args) -> int:
    from wdcolor.decomposition import Partition

    if not args.r:
        raise CliError("at least one --r is required")
    rows = ["instance,r,certified_d,achieved_d,oracle_d"]
    for name, g, td, parts in _bench_instances(args):
        D = all_pairs_distances(g)
        for r in args.r:
            if parts is not None:
                p = Partition(parts)
                q, _ = quotient(g, p)
                result = colour_partitioned(g, D, p, exact_tree_decomposition(q),
                                            r, mode=args.mode)
            else:
                result = colour_bounded_treewidth(g, D, r, td=td, mode=args.mode)
            achieved = monochromatic_components(g, D, result.colouring, r).max_weak_diameter
            if achieved > result.certificate.bound:
                raise AssertionError(f"achieved {achieved} exceeds certificate on {name}")
            oracle = ""
            if g.n <= args.limit:
                oracle = fmt(brute_force_optimal_d(g, D, result.certificate.colours, r,
                                                   limit=args.limit))
            rows.append(f"{name},{fmt(r)},{fmt(result.certificate.bound)},"
                        f"{fmt(achieved)},{oracle}")
    text = "\n".join(rows) + "\n"
    if args.out:
        _write_atomic(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_kernels(args) -> int:
    from wdcolor import _kernels

    print(f"active: {_kernels.IMPL}")
    if not args.bench:
        return 0
    impls = _kernels.implementations()
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else [50, 100, 200]
    rows = ["kernel,n,apsp_seconds,components_seconds"]
    for size in sizes:
        g = random_connected(size, args.seed + size)
        D = all_pairs_distances(g)
        idx = D.indices(g.vertices)
        t_comp = D.threshold(2)
        import numpy as np

        verts = g.vertices
        vid = {v: i for i, v in enumerate(verts)}
        deg = [0] * g.n
        scaled = [(vid[u], vid[v], 1) for u, v, _ in g.edges()]
        for u, v, _ in scaled:
            deg[u] += 1
            deg[v] += 1
        indptr = np.zeros(g.n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        nbrs = np.empty(2 * len(scaled), dtype=np.int64)
        wgts = np.empty(2 * len(scaled), dtype=np.int64)
        fill = indptr[:-1].copy()
        for u, v, w in scaled:
            nbrs[fill[u]], wgts[fill[u]] = v, w
            fill[u] += 1
            nbrs[fill[v]], wgts[fill[v]] = u, w
            fill[v] += 1
        for name, impl in sorted(impls.items()):
            t0 = time.perf_counter()
            mat = impl.all_pairs_scaled(g.n, indptr, nbrs, wgts)
            t1 = time.perf_counter()
            impl.label_components(mat, idx, t_comp)
            t2 = time.perf_counter()
            rows.append(f"{name},{size},{t1 - t0:.6f},{t2 - t1:.6f}")
    text = "\n".join(rows) + "\n"
    if args.out:
        _write_atomic(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="wdcolor", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--graph", help="graph file")
        p.add_argument("--td", help="tree-decomposition file")
        p.add_argument("--partition", help="partition file")
        p.add_argument("--model", help="minor-model file")
        p.add_argument("--r", action="append", type=as_rational, default=[],
                       help="radius (repeatable, rational like 3/2)")
        p.add_argument("--m", type=int, help="number of colours")
        p.add_argument("--k", type=int, help="adhesion / treewidth bound")
        p.add_argument("--ell", type=as_rational, help="shallowness bound")
        p.add_argument("--epsilon", type=as_rational, help="minor reweighting slack")
        p.add_argument("--seed", type=int, default=0, help="generator seed")
        p.add_argument("--limit", type=int, default=12, help="exhaustive-oracle size cap")
        p.add_argument("--mode", choices=("fast", "test"), default="fast",
                       help="test re-verifies every interior certificate")
        p.add_argument("--out-dir", default="out", help="output directory")

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("kind", choices=("grid", "tree", "random-connected", "subdivide", "exp-grid"))
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--side", type=int, default=3)
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--extra-edges", type=int, default=None)
    p.add_argument("--out", help="output file (stdout when omitted)")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("color", help="run a certified colouring pipeline")
    p.add_argument("--pipeline", choices=("treewidth", "partition", "strong"),
                   default="treewidth")
    common(p)
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", help="check a colouring against (m, r, d)")
    p.add_argument("--colouring", help="colouring file")
    p.add_argument("--d", help="weak-diameter bound (rational or inf)")
    p.add_argument("--report", help="write the component report CSV here")
    p.add_argument("--report-text", help="write the component report as text here")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive optimal d for small graphs")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="benchmark pipelines over a family, CSV out")
    p.add_argument("--family", choices=("tree", "grid", "random-connected"), default="tree")
    p.add_argument("--sizes", help="comma-separated instance sizes")
    p.add_argument("--out", help="CSV path (stdout when omitted)")
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("kernels", help="show or benchmark the compiled kernels")
    p.add_argument("--bench", action="store_true")
    p.add_argument("--sizes", help="comma-separated instance sizes")
    p.add_argument("--out", help="CSV path (stdout when omitted)")
    common(p)
    p.set_defaults(func=cmd_kernels)

    return top


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, io.FormatError, LimitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
