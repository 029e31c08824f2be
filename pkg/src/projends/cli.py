"""Command-line front end: ``projends <command> [input] [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import override, parse_assignment
from .convex import ConvexBody, dual_body, hilbert_distance
from .errors import InputError, ProjEndsError, SchemaError
from .io import body_to_dict, parse_body_file, parse_group_file, parse_point, render
from .projective import normalize

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class JobFailed(Exception):
    """Carries a report whose computation succeeded but whose check failed."""

    def __init__(self, report: dict):
        super().__init__("check failed")
        self.report = report


def _sample(args, group):
    from .holonomy import word_ball
    radius = args.radius or group.ball_radius or 4
    return word_ball(group.generators, radius)


def _vertex(args, group) -> np.ndarray:
    if args.vertex:
        return normalize(parse_point(args.vertex))
    if group.vertex is None:
        raise SchemaError(f"{group.source}: no vertex given (use --vertex)")
    return group.vertex


def _base(group) -> ConvexBody:
    q = group.matrix("base_quadric")
    if q is None:
        raise SchemaError(f"{group.source}: field 'base_quadric' is required for this command")
    return ConvexBody.from_quadric(q, group.extra.get("base_chart"))


def _group_meta(group) -> dict:
    return {"source": Path(group.source).name, "dimension": group.dimension,
            "generators": len(group.generators), "rescaled": group.rescaled}


# ---------------------------------------------------------------- commands


def cmd_hilbert_dist(args, rng):
    body = parse_body_file(args.input)
    p, q = parse_point(args.p), parse_point(args.q)
    return {"distance": hilbert_distance(body, p, q), "p": p, "q": q}


def cmd_dual(args, rng):
    body = parse_body_file(args.input)
    return {"dual": body_to_dict(dual_body(body))}


def cmd_check_umec(args, rng):
    from .holonomy import check_umec
    group = parse_group_file(args.input)
    s = _sample(args, group)
    rep = check_umec(s, _vertex(args, group), args.kind)
    out = {"input": _group_meta(group), "sample_size": len(s)} | rep.to_dict()
    if not rep.passed:
        raise JobFailed(out)
    return out


def cmd_check_weak_umec(args, rng):
    from .holonomy import check_weak_umec
    group = parse_group_file(args.input)
    s = _sample(args, group)
    rep = check_weak_umec(s, _vertex(args, group), rng)
    out = {"input": _group_meta(group), "sample_size": len(s)} | rep.to_dict()
    if not rep.passed:
        raise JobFailed(out)
    return out


def cmd_classify_end(args, rng):
    from .ends import EndData, classify_end
    group = parse_group_file(args.input)
    s = _sample(args, group)
    res = classify_end(EndData(args.kind, _vertex(args, group), s))
    return {"input": _group_meta(group)} | res.report()


def cmd_lens_orbit(args, rng):
    from .ends import TubeDomain, distanced_hull, lens_cone_from_orbit
    group = parse_group_file(args.input)
    s = _sample(args, group)
    T = TubeDomain(_vertex(args, group), _base(group))
    dh = distanced_hull(s, T)
    amb = None
    if group.matrix("ambient_quadric") is not None:
        amb = ConvexBody.from_quadric(group.matrix("ambient_quadric"), group.extra.get("ambient_chart"))
    res = lens_cone_from_orbit(s, T, dh.body, ambient=amb, rays=args.rays, rng=rng)
    out = {"input": _group_meta(group), "distanced_hull": dh.to_dict(), "audit": res.audit.to_dict(),
           "dual_route_residual": res.dual_route_residual,
           "lens_vertices": int(res.lens.vertices.shape[0])}
    if not res.audit.passed:
        raise JobFailed(out)
    return out


def cmd_quasi_lens(args, rng):
    from .ends import quasi_lens_construct
    from .holonomy import word_ball
    group = parse_group_file(args.input)
    zeta = group.matrix("zeta")
    if zeta is None:
        raise SchemaError(f"{group.source}: field 'zeta' is required for quasi-lens")
    gg = group.matrices("g_generators")
    G = word_ball(gg, args.radius or 4) if gg else None
    v = _vertex(args, group)
    seed = parse_point(args.seed_point) if args.seed_point else normalize(np.ones(v.size))
    res = quasi_lens_construct(G, zeta, seed, v)
    return {"input": _group_meta(group)} | res.to_dict()


def cmd_dual_tube(args, rng):
    from .ends import dual_tube
    group = parse_group_file(args.input)
    s = _sample(args, group)
    omega = parse_body_file(args.base) if args.base else _base(group)
    res = dual_tube(s, omega, _vertex(args, group))
    out = {"input": _group_meta(group), "residual": res.residual, "tol": 1e-6,
           "dual_base": body_to_dict(res.tube.base)}
    if res.residual > 1e-6:
        raise JobFailed(out)
    return out


def cmd_flow_contract(args, rng):
    from .flow import contraction_audit, random_tangents
    group = parse_group_file(args.input)
    s = _sample(args, group)
    q = group.matrix("quadric")
    if q is None:
        raise SchemaError(f"{group.source}: field 'quadric' is required for flow-contract")
    body = ConvexBody.from_quadric(q, group.extra.get("chart"))
    times = np.arange(0, args.tmax + 1)
    audit = contraction_audit(body, s, random_tangents(body, args.count, rng), times)
    if args.csv:
        Path(args.csv).write_text(audit.to_csv())
    out = {"input": _group_meta(group), "tangents": args.count, "t_max": args.tmax} | audit.summary()
    if not audit.passed:
        raise JobFailed(out)
    return out


def cmd_self_test(args, rng):
    from .selftest import run_self_test
    results = run_self_test(rng)
    out = {"checks": results, "passed": all(r["passed"] for r in results)}
    if not out["passed"]:
        raise JobFailed(out)
    return out


COMMANDS = {
    "hilbert-dist": cmd_hilbert_dist,
    "dual": cmd_dual,
    "check-umec": cmd_check_umec,
    "check-weak-umec": cmd_check_weak_umec,
    "classify-end": cmd_classify_end,
    "lens-orbit": cmd_lens_orbit,
    "quasi-lens": cmd_quasi_lens,
    "dual-tube": cmd_dual_tube,
    "flow-contract": cmd_flow_contract,
    "self-test": cmd_self_test,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--radius", type=int, help="word-ball radius (overrides the file)")
    common.add_argument("--tol", action="append", default=[], metavar="KEY=VAL", help="override a tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for every random draw")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="projends", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hilbert-dist", parents=[common], help="Hilbert distance between two points of a body")
    p.add_argument("input", help="body JSON file")
    p.add_argument("--p", required=True, help="comma-separated homogeneous coordinates")
    p.add_argument("--q", required=True)

    p = sub.add_parser("dual", parents=[common], help="polar dual of a body")
    p.add_argument("input")

    for name, hlp in (("check-umec", "uniform middle eigenvalue condition"),
                      ("check-weak-umec", "weak middle eigenvalue condition"),
                      ("classify-end", "classify an end from its holonomy sample")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("input", help="group JSON file or bundled fixture name")
        p.add_argument("--vertex", help="override the vertex (comma-separated)")
        if name != "check-weak-umec":
            p.add_argument("--kind", choices=("R", "T"), default="R")

    p = sub.add_parser("lens-orbit", parents=[common], help="lens-cone from an orbit, with audits")
    p.add_argument("input")
    p.add_argument("--vertex")
    p.add_argument("--rays", type=int, default=1000)

    p = sub.add_parser("quasi-lens", parents=[common], help="orbit hull for a quasi-lens generator")
    p.add_argument("input")
    p.add_argument("--vertex")
    p.add_argument("--seed-point", help="orbit seed (default: normalized all-ones vector)")

    p = sub.add_parser("dual-tube", parents=[common], help="tube over the dual base, with the duality residual")
    p.add_argument("input")
    p.add_argument("--vertex", help="covector of the invariant hyperplane")
    p.add_argument("--base", help="body JSON for the base (default: the file's base_quadric)")

    p = sub.add_parser("flow-contract", parents=[common], help="contraction audit of the flow bundles")
    p.add_argument("input")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--tmax", type=int, default=8)
    p.add_argument("--csv", help="also write the per-time log norms here")

    sub.add_parser("self-test", parents=[common], help="run the invariant suite")
    return ap


def run(argv=None) -> tuple[int, str]:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        tols = dict(parse_assignment(t) for t in args.tol)
    except (KeyError, ValueError) as exc:
        return EXIT_INPUT, f"error: {exc}\n"
    if args.radius is not None and args.radius < 1:
        return EXIT_INPUT, "error: --radius must be >= 1\n"
    rng = np.random.default_rng(args.seed)
    try:
        with override(**tols):
            report, code = COMMANDS[args.command](args, rng), EXIT_OK
    except ValueError as exc:  # rejected tolerance values
        return EXIT_INPUT, f"error: {exc}\n"
    except (InputError, FileNotFoundError) as exc:
        return EXIT_INPUT, f"error: {type(exc).__name__}: {exc}\n"
    except JobFailed as exc:
        report, code = exc.report, EXIT_FAIL
    except ProjEndsError as exc:
        report, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_FAIL
    report = {"command": args.command, "seed": args.seed, "exit_code": code} | report
    text = render(report, args.format)
    if args.output:
        Path(args.output).write_text(text)
        text = ""
    return code, text


def main(argv=None) -> int:
    code, text = run(argv)
    stream = sys.stderr if code == EXIT_INPUT else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
