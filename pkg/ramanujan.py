#!/usr/bin/env python3
"""
Command-line front end for the Ramanujan digraph toolkit.

Usage:
    python ramanujan.py construct paley --p 7 -o paley7.dg
    python ramanujan.py spectrum paley7.dg --json
    python ramanujan.py check paley7.dg --ramanujan
    python ramanujan.py cayley --field p=31 --dim 2 --generators data/psl2_f31.txt -o psl2.dg
    python ramanujan.py spectrum psl2.dg --sparse --top 6

Exit codes: 0 on success, 1 when a checked verdict is false, 2 on input errors.
"""

import sys
import math
import logging
import argparse
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel

import bounds
import experiments
import spectral
import walks
import version
import zeta
from algebra import cayley_digraph, read_generators
from artifacts import emit, to_csv, to_json
from config import config
from constructions import (builtin_graph, complete_digraph, de_bruijn, line_digraph, paley_digraph,
                           projective_incidence, random_regular_digraph)
from digraph import (DigraphError, dumps_edge_list, is_normal, read_edge_list, strongly_connected,
                     write_edge_list)

logger = logging.getLogger("ramanujan")

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_INPUT = 2

FAMILIES = ("complete", "paley", "projective", "de-bruijn", "line", "random", "graph")


class Invocation(BaseModel):
    """A parsed command line."""

    subcommand: str
    flags: Dict[str, Any]
    inputs: List[str]
    output: Optional[str] = None
    seed: int = 0
    tolerance: Optional[float] = None


def status(kind: str, message: str) -> None:
    print(f"[{kind}] {message}", file=sys.stderr)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="Write the result to this file instead of stdout")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="Emit JSON")
    fmt.add_argument("--csv", action="store_true", help="Emit CSV (plot data)")
    common.add_argument("--seed", type=int, default=None, help="Random seed (default from config, 0)")
    common.add_argument("--tolerance", type=float, default=None, help="Override the Ramanujan verdict tolerance")
    common.add_argument("--sparse", action="store_true", help="Use the Arnoldi path")
    common.add_argument("--top", type=int, default=6, help="Eigenvalues requested from Arnoldi")
    common.add_argument("--jobs", type=int, default=1, help="Worker processes for randomized trials")
    common.add_argument("--lmax", type=int, default=20, help="Largest walk length or power")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(description="Spectral toolkit for Ramanujan digraphs")
    parser.add_argument("--version", action="version", version=f"%(prog)s {version.package_version()}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("construct", parents=[common], help="Build a digraph and write it as an edge list")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--p", type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--graph", help="Built-in graph name, e.g. petersen or complete(4)")

    p = sub.add_parser("spectrum", parents=[common], help="Classify the spectrum of a digraph")
    p.add_argument("input")

    p = sub.add_parser("check", parents=[common], help="Check a property; the exit code carries the verdict")
    p.add_argument("input")
    p.add_argument("--ramanujan", action="store_true", help="rho0 <= sqrt(k) (default check)")
    p.add_argument("--normal", action="store_true", help="A A^T == A^T A")
    p.add_argument("--strongly-connected", action="store_true")
    p.add_argument("--region", help="disk:R, line-tree:k or two-circles:k")

    p = sub.add_parser("line-digraph", parents=[common], help="Line digraph of a built-in graph and its 2-block certificate")
    p.add_argument("graph")
    p.add_argument("--labels", help="Write the vertex -> (v,w) label file here")

    p = sub.add_parser("cayley", parents=[common], help="Cayley digraph of a projective matrix group")
    p.add_argument("--field", required=True, help="p=<prime>[,e=<degree>]")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--generators", required=True, help="Generator file")

    p = sub.add_parser("walk", parents=[common], help="Random-walk cutoff profile or Chernoff experiment")
    p.add_argument("input")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--chernoff", action="store_true")
    p.add_argument("--gamma", type=float, default=0.25)
    p.add_argument("--trials", type=int, default=10000)

    p = sub.add_parser("zeta", parents=[common], help="Zeta poles and Riemann hypothesis verdicts")
    p.add_argument("input", nargs="?", help="Edge-list file (digraph mode)")
    p.add_argument("--graph", help="Built-in graph (Ihara mode)")

    sub.add_parser("bounds", parents=[common], help="Run every bound checker over the corpus")

    p = sub.add_parser("alon", parents=[common], help="Spectra of random regular digraphs")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--n", type=int, nargs="+", default=[200, 400, 800])
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--epsilon", type=float, default=0.3)

    p = sub.add_parser("gelfand", parents=[common], help="||A^ell on L_0||^(1/ell) for ell = 1..lmax")
    p.add_argument("input")
    return parser


def _format(args, payload: BaseModel, header, rows) -> str:
    if args.csv:
        return to_csv(header, rows)
    return to_json(payload)


def cmd_construct(args) -> int:
    family = args.family
    labels = None
    if family == "complete":
        D = complete_digraph(args.k, args.m)
    elif family == "paley":
        D = paley_digraph(args.p)
    elif family == "projective":
        D = projective_incidence(args.p, args.d)
    elif family == "de-bruijn":
        D = de_bruijn(args.k, args.s)
    elif family == "line":
        D, labels = line_digraph(builtin_graph(args.graph))
    elif family == "random":
        seed = config.SEED if args.seed is None else args.seed
        D = random_regular_digraph(args.n, args.k, seed)
        status("OK", f"seed={seed}")
    else:
        D = builtin_graph(args.graph).as_digraph()
    emit(dumps_edge_list(D), args.output)
    if labels is not None and args.output:
        emit("".join(f"{i} {v} {w}\n" for i, (v, w) in enumerate(labels)), f"{args.output}.labels")
    status("OK", f"{family}: n={D.n} k={D.k}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    D = read_edge_list(args.input)
    if args.sparse:
        report = spectral.sparse_spectrum_report(D, top=args.top, tolerance=args.tolerance, seed=args.seed)
    else:
        report = spectral.classify_spectrum(D, args.tolerance)
    if args.json or args.csv:
        emit(_format(args, report.to_record(), ("re", "im", "is_trivial"), report.plot_rows()), args.output)
    else:
        emit(f"n={report.n} k={report.k} m={report.m} method={report.method}\n"
             f"rho0={report.rho0!r} sqrt(k)={math.sqrt(report.k)!r} margin={report.margin!r}\n"
             f"ramanujan={report.ramanujan}\n", args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    D = read_edge_list(args.input)
    verdicts = {}
    if args.normal:
        verdicts["normal"] = is_normal(D)
    if args.strongly_connected:
        verdicts["strongly_connected"] = strongly_connected(D)
    if args.ramanujan or not verdicts or args.region:
        if args.sparse:
            report = spectral.sparse_spectrum_report(D, top=args.top, tolerance=args.tolerance, seed=args.seed)
        else:
            report = spectral.classify_spectrum(D, args.tolerance)
        if args.ramanujan or not verdicts:
            verdicts["ramanujan"] = report.ramanujan
        if args.region:
            verdicts["region"] = spectral.spectrum_in_region(report, spectral.parse_region(args.region))
    for name, value in verdicts.items():
        status("OK" if value else "ERROR", f"{name}: {value}")
    if args.json:
        emit(to_json(verdicts), args.output)
    return EXIT_OK if all(verdicts.values()) else EXIT_VERDICT


def cmd_line_digraph(args) -> int:
    G = builtin_graph(args.graph)
    D, labels = line_digraph(G)
    blocks = spectral.line_digraph_blocks(G, D, labels)
    agree = spectral.equivalence_check_line(G, args.tolerance) if G.k >= 3 else None
    summary = {
        "graph": args.graph, "n": D.n, "k": D.k,
        "residual": blocks.residual, "orthogonality": blocks.orthogonality,
        "blocks": [{"graph_eigenvalue": b.graph_eigenvalue, "dim": b.dim,
                    "charpoly": [float(c) for c in b.charpoly().real]} for b in blocks.blocks],
        "complement_dim": blocks.complement_dim, "plus_ones": blocks.plus_ones,
        "minus_ones": blocks.minus_ones, "degenerate_blocks": blocks.degenerate,
        "ramanujan": agree,
    }
    if args.output:
        write_edge_list(D, args.output)
    if args.labels:
        emit("".join(f"{i} {v} {w}\n" for i, (v, w) in enumerate(labels)), args.labels)
    if args.json or not args.output:
        emit(to_json(summary))
    status("OK", f"line digraph of {args.graph}: n={D.n}, k={D.k}, residual={blocks.residual:.2e}")
    return EXIT_OK


def _parse_field_flag(text: str) -> Dict[str, int]:
    parts = {}
    for item in text.split(","):
        key, _, value = item.partition("=")
        if key.strip() not in ("p", "e") or not value.strip().isdigit():
            raise ValueError(f"Bad --field {text!r}; expected p=<prime>[,e=<degree>]")
        parts[key.strip()] = int(value)
    if "p" not in parts:
        raise ValueError(f"--field {text!r} is missing p=<prime>")
    return parts


def cmd_cayley(args) -> int:
    wanted = _parse_field_flag(args.field)
    gens = read_generators(args.generators, dim=args.dim)
    if gens.field.p != wanted["p"] or gens.field.e != wanted.get("e", gens.field.e):
        raise ValueError(f"--field {args.field} does not match the generator file field {gens.field}")
    D, _ = cayley_digraph(gens.field, args.dim, gens.generators)
    connected = strongly_connected(D)
    if args.output:
        write_edge_list(D, args.output)
    if args.json or not args.output:
        emit(to_json({"field": str(gens.field), "dim": args.dim, "n": D.n, "k": D.k,
                      "strongly_connected": connected}))
    status("OK", f"Cayley digraph over {gens.field}: {D.n} vertices, {D.k}-regular")
    return EXIT_OK


def cmd_walk(args) -> int:
    D = read_edge_list(args.input)
    if args.chernoff:
        seed = config.SEED if args.seed is None else args.seed
        f = np.where(np.arange(D.n) < D.n // 2, 1.0, 0.0)
        f -= f.mean()
        result = walks.chernoff_experiment(D, f, args.lmax, args.trials, args.gamma, seed=seed, jobs=args.jobs)
        status("OK", f"seed={seed}")
        emit(to_json({"seed": seed, "ell": result.ell, "gamma": result.gamma, "trials": result.trials,
                      "frequency": result.frequency, "stderr": result.stderr, "exponent": result.exponent}),
             args.output)
        return EXIT_OK
    profile = walks.cutoff_profile(D, args.start, args.lmax)
    if args.csv:
        emit(to_csv(("ell", "tv", "l2", "support"), profile.rows()), args.output)
    else:
        emit(to_json(profile.summary()), args.output)
    return EXIT_OK


def cmd_zeta(args) -> int:
    if args.graph:
        report = zeta.zeta_ihara(builtin_graph(args.graph), args.tolerance)
    elif args.input:
        report = zeta.zeta_digraph(read_edge_list(args.input), args.tolerance)
    else:
        raise ValueError("zeta needs an input file or --graph")
    if args.csv:
        emit(to_csv(("re_s", "im_s", "re_u", "im_u"), report.s_plane_rows()), args.output)
    else:
        emit(to_json(report.to_record()), args.output)
    return EXIT_OK


def cmd_bounds(args) -> int:
    checks = bounds.bounds_suite(ell_max=min(args.lmax, 12))
    if args.json:
        emit(to_json([c.model_dump() for c in checks]), args.output)
    else:
        emit(to_csv(bounds.CSV_HEADER, [c.row() for c in checks]), args.output)
    failed = [c for c in checks if not c.satisfied]
    status("OK" if not failed else "ERROR", f"{len(checks) - len(failed)}/{len(checks)} bounds hold")
    return EXIT_OK if not failed else EXIT_VERDICT


def cmd_alon(args) -> int:
    seed = config.SEED if args.seed is None else args.seed
    status("OK", f"seed={seed}")
    result = experiments.alon_experiment(args.k, args.n, args.trials, args.epsilon, seed=seed, jobs=args.jobs,
                                         top=args.top)
    if args.csv:
        emit(to_csv(experiments.CSV_HEADER, [r.row() for r in result.results]), args.output)
    else:
        emit(to_json(result), args.output)
    return EXIT_OK


def cmd_gelfand(args) -> int:
    D = read_edge_list(args.input)
    estimates = experiments.gelfand_estimate(D, args.lmax)
    rows = [(ell, float(v)) for ell, v in enumerate(estimates, start=1)]
    if args.csv:
        emit(to_csv(("ell", "estimate"), rows), args.output)
    else:
        emit(to_json({"n": D.n, "k": D.k, "estimates": [v for _, v in rows]}), args.output)
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "spectrum": cmd_spectrum,
    "check": cmd_check,
    "line-digraph": cmd_line_digraph,
    "cayley": cmd_cayley,
    "walk": cmd_walk,
    "zeta": cmd_zeta,
    "bounds": cmd_bounds,
    "alon": cmd_alon,
    "gelfand": cmd_gelfand,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run one subcommand and return its exit code."""
    logging.basicConfig(
        level=getattr(logging, str(config.LOG_LEVEL).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK

    invocation = Invocation(
        subcommand=args.subcommand,
        flags={k: v for k, v in vars(args).items() if k not in ("subcommand", "input", "output")},
        inputs=[args.input] if getattr(args, "input", None) else [],
        output=args.output,
        seed=config.SEED if args.seed is None else args.seed,
        tolerance=args.tolerance,
    )
    logger.debug(f"Invocation: {invocation.model_dump_json()}")

    previous = config.TOLERANCE
    if args.tolerance is not None:
        config.set("TOLERANCE", args.tolerance)
    try:
        return COMMANDS[args.subcommand](args)
    except (DigraphError, ValueError, OSError) as e:
        status("ERROR", str(e))
        return EXIT_INPUT
    finally:
        config.TOLERANCE = previous


if __name__ == "__main__":
    sys.exit(main())
