"""Command-line front end: ``optchain <command> ...``.

Exit codes: 0 success, 2 infeasible, 3 input error, 4 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import document, gadgets
from .complex import (
    Chain,
    ComplexError,
    WeightAssignment,
    check_manifold,
    unit_weights,
)
from .desingularize import desingularize_1, desingularize_2, extract_embedded_path, surface_stats
from .homology import LongitudeError, homology, longitude
from .solver import (
    AboveCutoff,
    BudgetExhausted,
    Infeasible,
    solve_obcp,
    solve_ohcp,
    solve_relative_obcp,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INPUT = 3
EXIT_BUDGET = 4


class InputError(Exception):
    pass


def _rat(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _out(line: str = ""):
    print(line)


def _chain(inst, name: Optional[str]) -> Chain:
    name = name or inst.metadata.get("chain")
    if name is None:
        if len(inst.chains) == 1:
            name = next(iter(inst.chains))
        else:
            raise InputError(f"choose a chain with --chain (available: {', '.join(sorted(inst.chains)) or 'none'})")
    if name not in inst.chains:
        raise InputError(f"no chain named {name!r}")
    return inst.chains[name]


def _weights(inst, n: int) -> WeightAssignment:
    if n > inst.complex.dim:
        return WeightAssignment(n, ())
    if n in inst.weights:
        return inst.weights[n]
    return unit_weights(inst.complex, n)


def _subcomplex(inst, name: Optional[str]):
    name = name or inst.metadata.get("subcomplex")
    if name is None:
        raise InputError("relative problems need --subcomplex")
    if name not in inst.subcomplexes:
        raise InputError(f"no subcomplex named {name!r}")
    return inst.subcomplexes[name]


def _decision(result, threshold) -> str:
    return "YES" if result.decide(threshold) else "NO"


# --- commands ------------------------------------------------------------------------

def cmd_solve(args) -> int:
    inst = document.load(args.input)
    X = inst.complex
    c = _chain(inst, args.chain)
    problem = args.problem
    n = args.dim
    if n is None:
        n = c.dim if problem == "ohcp" else c.dim + 1
    top = X.dim + (problem != "ohcp")
    if not 0 <= n <= top:
        raise InputError(f"dimension {n} is outside 0..{top}")
    w = _weights(inst, n)
    kw = dict(mode=args.mode, max_nodes=args.max_nodes, cutoff=args.threshold)
    if problem == "ohcp":
        res = solve_ohcp(X, w, c, n, **kw)
    elif problem == "obcp":
        res = solve_obcp(X, w, c, n, **kw)
    else:
        res = solve_relative_obcp(X, _subcomplex(inst, args.subcomplex), w, c, n, **kw)
    if isinstance(res, Infeasible):
        print(res.reason, file=sys.stderr)
        if args.threshold is not None:
            _out("decision NO")
        return EXIT_INFEASIBLE
    if isinstance(res, AboveCutoff):
        _out(f"optimum > {_rat(args.threshold)} (lower bound {_rat(res.lower_bound)})")
        _out("decision NO")
        return EXIT_OK
    _out(f"optimum {_rat(res.norm)}")
    _out(f"integral {'yes' if res.integral else 'no'}")
    _out(f"method {res.method}")
    if res.relaxation_norm is not None:
        _out(f"relaxation {_rat(res.relaxation_norm)}")
    _out(f"support {len(res.chain.support())} simplices")
    if res.certificate:
        _out(f"certificate {len(res.certificate.support())} {res.certificate.dim}-simplices")
    if args.threshold is not None:
        _out(f"decision {_decision(res, args.threshold)}")
    if args.out:
        inst.chains[args.name] = res.chain
        if res.certificate is not None:
            inst.chains[args.name + "_certificate"] = res.certificate
        inst.metadata["optimum"] = _rat(res.norm)
        document.save(inst, args.out)
    return EXIT_OK


def cmd_desingularize(args) -> int:
    inst = document.load(args.input)
    X = inst.complex
    c = _chain(inst, args.chain)
    if c.dim == 1:
        A = _subcomplex(inst, args.subcomplex) if (args.subcomplex or inst.metadata.get("subcomplex")) else None
        fam = desingularize_1(X, c, A)
        _out(f"arcs {len(fam.arcs)}")
        _out(f"loops {len(fam.loops)}")
        _out(f"length {fam.total_length()}")
        for a in fam.arcs:
            _out("arc " + " ".join(str(X.vertex_labels[v]) for v in a))
        for l in fam.loops:
            _out("loop " + " ".join(str(X.vertex_labels[v]) for v in l))
        if args.source and args.target:
            path = extract_embedded_path(fam, _subcomplex(inst, args.source), _subcomplex(inst, args.target))
            _out("path " + " ".join(str(X.vertex_labels[v]) for v in path.vertices))
        return EXIT_OK
    if c.dim != 2:
        raise InputError("only 1- and 2-chains can be desingularized")
    rim = inst.chains[args.rim] if args.rim else None
    if args.rim and args.rim not in inst.chains:
        raise InputError(f"no chain named {args.rim!r}")
    S = desingularize_2(X, c, rim)
    _report_surface(S, _weights(inst, 2))
    if args.off:
        Path(args.off).write_text(S.to_off(X))
    return EXIT_OK


def _report_surface(S, w):
    st = surface_stats(S)
    _out(f"area {_rat(S.area(w))}")
    _out(f"euler characteristic {st['euler_characteristic']}")
    _out(f"components {st['components']}")
    _out(f"boundary curves {st['boundary_components']}")
    _out("component  chi  boundary  genus")
    for k, s in enumerate(S.component_stats):
        _out(f"{k:9d}  {s['chi']:3d}  {s['boundary']:8d}  {s['genus']:5d}")


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "grid":
        inst = gadgets.gen_grid(args.size)
    elif kind in ("sat", "cone"):
        if args.random:
            sat = gadgets.random_sat(random.Random(args.seed), args.n, args.m)
        elif args.file:
            try:
                text = Path(args.file).read_text()
            except OSError as exc:
                raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
            sat = gadgets.SatInstance.parse(text)
        else:
            raise InputError("give a clause file or --random")
        inst = gadgets.gen_sat_complex(sat) if kind == "sat" else gadgets.gen_cone_ohcp(sat)
    elif kind == "cube-knot":
        cycle = None
        if args.file:
            try:
                cycle = json.loads(Path(args.file).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot read corner cycle: {exc}") from None
        inst = gadgets.gen_cube_knot(args.size, cycle)
    elif kind == "moebius":
        inst = gadgets.gen_moebius_cube()
    elif kind == "solid-torus":
        inst = gadgets.gen_solid_torus(args.slices)
    elif kind == "thickened-torus":
        inst = gadgets.gen_thickened_torus(args.slices)
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown generator {kind}")
    text = document.dumps(inst)
    if args.out:
        Path(args.out).write_text(text)
        X = inst.complex
        _out(f"wrote {args.out}: " + ", ".join(f"{X.count(n)} {n}-simplices" for n in range(X.dim + 1)))
        if "coarse_triangle_total" in inst.metadata:
            _out(f"coarse triangles {inst.metadata['coarse_triangle_total']}")
        if inst.threshold is not None:
            _out(f"threshold {_rat(inst.threshold)}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_homology(args) -> int:
    inst = document.load(args.input)
    X = inst.complex
    dims = [args.dim] if args.dim is not None else list(range(X.dim + 1))
    for n in dims:
        if not 0 <= n <= X.dim:
            raise InputError(f"dimension {n} is outside 0..{X.dim}")
        _out(f"H_{n} = {homology(X, n)}")
    return EXIT_OK


def cmd_longitude(args) -> int:
    inst = document.load(args.input)
    X = inst.complex
    lam = longitude(X)
    _out(f"longitude {len(lam.support())} edges")
    for e, v in sorted(lam.coefficients.items()):
        a, b = (X.vertex_labels[u] for u in X.simplex(1, e))
        _out(f"  {v:+d} [{a}, {b}]")
    if args.out:
        inst.chains["longitude"] = lam
        document.save(inst, args.out)
    return EXIT_OK


def cmd_spanning_area(args) -> int:
    inst = document.load(args.input)
    M = inst.complex
    w = _weights(inst, 2)
    rep = check_manifold(M)
    if M.dim != 3 or not rep.is_manifold:
        raise InputError(f"spanning area needs a 3-manifold: {rep.reason or rep.kind}")
    kw = dict(mode=args.mode, max_nodes=args.max_nodes)
    if args.chain:
        knot = _chain(inst, args.chain)
        if knot.dim != 1:
            raise InputError("the knot must be a 1-chain")
        res = solve_obcp(M, w, knot, 2, **kw)
        rim = knot
    else:
        lam = longitude(M)
        _out(f"longitude {len(lam.support())} edges")
        res = solve_relative_obcp(M, rep.boundary, w, lam, 2, **kw)
        rim = None
    if isinstance(res, Infeasible):
        print(res.reason, file=sys.stderr)
        return EXIT_INFEASIBLE
    if not res.integral:
        raise InputError("optimal chain is not integral; run with --mode ilp")
    S = desingularize_2(M, res.chain, rim)
    _out(f"minimal area {_rat(res.norm)}")
    _report_surface(S, w)
    if args.threshold is not None:
        _out(f"decision {_decision(res, args.threshold)}")
    if args.off:
        Path(args.off).write_text(S.to_off(M))
    return EXIT_OK


# --- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="optchain", description="Optimal homologous and bounding chains.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more logging")
    sub = p.add_subparsers(dest="command", required=True)

    def solver_opts(q):
        q.add_argument("--mode", choices=("lp", "ilp"), default="ilp")
        q.add_argument("--max-nodes", type=int, default=1_000_000, help="branch-and-bound node budget")
        q.add_argument("--threshold", type=_fraction_arg, help="answer the decision problem for this bound")

    s = sub.add_parser("solve", help="solve an OHCP, OBCP or relative OBCP")
    s.add_argument("problem", choices=("obcp", "ohcp", "relative-obcp"))
    s.add_argument("--input", required=True)
    s.add_argument("--chain")
    s.add_argument("--subcomplex")
    s.add_argument("--dim", type=int)
    s.add_argument("--out", help="write the document with the optimal chain added")
    s.add_argument("--name", default="optimal", help="name of the stored optimal chain")
    solver_opts(s)
    s.set_defaults(func=cmd_solve)

    d = sub.add_parser("desingularize", help="embedded path or surface carried by a chain")
    d.add_argument("--input", required=True)
    d.add_argument("--chain")
    d.add_argument("--subcomplex", help="terminal vertices for 1-chains")
    d.add_argument("--source", help="subcomplex where the extracted path starts")
    d.add_argument("--target", help="subcomplex where the extracted path ends")
    d.add_argument("--rim", help="1-chain on which the surface may end")
    d.add_argument("--off", help="write the surface as an OFF mesh")
    d.set_defaults(func=cmd_desingularize)

    g = sub.add_parser("gen", help="generate an instance document")
    g.add_argument("kind", choices=("grid", "sat", "cone", "cube-knot", "moebius", "solid-torus", "thickened-torus"))
    g.add_argument("arg", nargs="*", help="N for grid/cube-knot, clause file for sat/cone, corner-cycle file for cube-knot")
    g.add_argument("--out")
    g.add_argument("--random", action="store_true", help="random 1-in-3 SAT instance")
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--slices", type=int, default=None)
    g.set_defaults(func=cmd_gen)

    h = sub.add_parser("homology", help="integral homology groups")
    h.add_argument("--input", required=True)
    h.add_argument("--dim", type=int)
    h.set_defaults(func=cmd_homology)

    lo = sub.add_parser("longitude", help="longitude of a knot exterior")
    lo.add_argument("--input", required=True)
    lo.add_argument("--out")
    lo.set_defaults(func=cmd_longitude)

    sa = sub.add_parser("spanning-area", help="least-area spanning surface")
    sa.add_argument("--input", required=True)
    sa.add_argument("--chain", help="knot 1-chain inside the manifold (default: the longitude of the boundary torus)")
    sa.add_argument("--off")
    solver_opts(sa)
    sa.set_defaults(func=cmd_spanning_area)
    return p


def _gen_positionals(args):
    vals = list(args.arg)
    args.size = args.file = None
    if args.kind in ("grid", "cube-knot"):
        if not vals:
            raise InputError(f"gen {args.kind} needs a size N")
        try:
            args.size = int(vals.pop(0))
        except ValueError:
            raise InputError("size must be an integer") from None
        if args.kind == "cube-knot" and vals:
            args.file = vals.pop(0)
    elif args.kind in ("sat", "cone") and vals:
        args.file = vals.pop(0)
    if vals:
        raise InputError(f"unexpected arguments: {' '.join(vals)}")
    if args.slices is None:
        args.slices = 4 if args.kind == "solid-torus" else 3


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "gen":
            _gen_positionals(args)
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, ComplexError, LongitudeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
