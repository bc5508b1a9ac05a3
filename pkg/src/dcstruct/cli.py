"""Command-line interface: check, geom, flow, solve, verify.

Exit codes: 0 success, 1 validation failure (bad input, violated
conditions, infeasible target, degenerate instance), 2 runtime failure
(flow or solver did not converge).
"""

import argparse
import math
import sys
import time

import numpy as np

from . import io
from .curvature import face_angles, vertex_curvature
from .errors import (BadTarget, DCSError, DegenerateFace, DegenerateStart, LineSearchStall,
                     MeshError, MissingWeight, ParseError)
from .flow import FlowOptions, FlowStatus, newton_solve, run_calabi, run_extended_ricci
from .state import EUCLIDEAN, HYPERBOLIC, ConformalState, kernels
from .verify import run_battery
from .weights import h_local, uniform_scheme, validate_scheme

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2

fmt = io.fmt


def build_parser():
    p = argparse.ArgumentParser(prog="dcstruct",
                                description="Discrete conformal structures on closed surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, mesh_required=True):
        sp.add_argument("--mesh", required=mesh_required,
                        help="mesh file, or builtin:tetrahedron|octahedron|icosahedron|torus")
        sp.add_argument("--weights", help="weights file (default: eps = 1, eta = 1 everywhere)")
        sp.add_argument("--factors", help="factor file of 'f v value' lines (default f = 0)")
        sp.add_argument("--background", choices=(EUCLIDEAN, HYPERBOLIC), default=EUCLIDEAN)

    def flowopts(sp):
        sp.add_argument("--target", required=True,
                        help="file of 'K v value' lines, 'constant' or 'constant:VALUE'")
        sp.add_argument("--dt", type=float, default=0.05)
        sp.add_argument("--t-max", type=float, default=1000.0)
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--out", help="output prefix; writes PREFIX.csv and PREFIX.json")
        sp.add_argument("--timing", action="store_true",
                        help="include wall time in the JSON summary")

    sp = sub.add_parser("check", help="validate an instance")
    common(sp)
    sp = sub.add_parser("geom", help="per-face geometry dump")
    common(sp)
    sp = sub.add_parser("flow", help="run the extended Ricci flow or the Calabi flow")
    common(sp)
    flowopts(sp)
    sp.add_argument("--method", choices=("explicit-rk4", "implicit-euler", "calabi"),
                    default="explicit-rk4")
    sp = sub.add_parser("solve", help="Newton solve for a prescribed curvature")
    common(sp)
    flowopts(sp)
    sp.add_argument("--max-iter", type=int, default=50)
    sp = sub.add_parser("verify", help="run the invariant battery")
    common(sp, mesh_required=False)
    sp.add_argument("--seed", type=int, default=0)
    return p


def load_instance(args):
    surface = io.read_mesh(args.mesh)
    if args.weights:
        scheme = io.read_weights(args.weights, surface)
    else:
        scheme = uniform_scheme(surface, 1.0, 1.0)
    f = io.read_factors(args.factors, surface.vertex_count)
    return surface, scheme, ConformalState(args.background, f, scheme.epsilon)


def cmd_check(args, out):
    surface, scheme, state = load_instance(args)
    out(f"vertices {surface.vertex_count}  edges {surface.edge_count}  "
        f"faces {surface.face_count}  euler characteristic {surface.euler_characteristic}")
    report = validate_scheme(surface, scheme)
    if report.ok:
        out("structure conditions: satisfied")
    for line in report.lines():
        out(line)
    eps, eta = scheme.face_arrays(surface)
    kern = kernels(state.background)
    try:
        degenerate = ~(kern.q(state.f[surface.faces], eps, eta) > 0)
    except ArithmeticError as exc:
        out(f"lengths undefined: {exc}")
        return EXIT_INVALID
    good = int(np.count_nonzero(~degenerate))
    out(f"{good} faces nondegenerate, {surface.face_count - good} degenerate ({state.background})")
    for fid in np.nonzero(degenerate)[0]:
        out(f"  degenerate face {fid}: vertices {tuple(int(v) for v in surface.faces[fid])}")
    return EXIT_OK if report.ok and not degenerate.any() else EXIT_INVALID


def cmd_geom(args, out):
    surface, scheme, state = load_instance(args)
    kern = kernels(state.background)
    eps, eta = scheme.face_arrays(surface)
    f = state.f[surface.faces]
    q = kern.q(f, eps, eta)
    th = kern.extended_angles(f, eps, eta)
    J = kern.jacobian(f, eps, eta)
    if state.background == EUCLIDEAN:
        from .euclid import lengths_local
        lengths = lengths_local(np.exp(f), eps, eta)
        kappa = np.exp(-f)
    else:
        from .hyper import arccosh_clamped, cosh_lengths_local
        lengths = arccosh_clamped(cosh_lengths_local(f, eps, eta))
        kappa = np.sqrt(1.0 + eps * np.exp(2 * f)) * np.exp(-f)
    h = h_local(kappa, eps, eta)
    for n, face in enumerate(surface.faces):
        i, j, k = (int(v) for v in face)
        out(f"face {n} ({i},{j},{k}) {'degenerate' if not q[n] > 0 else 'nondegenerate'}")
        out(f"  lengths l_jk l_ik l_ij: {' '.join(fmt(x) for x in lengths[n])}")
        out(f"  Q: {fmt(q[n])}")
        out(f"  h: {' '.join(fmt(x) for x in h[n])}")
        out(f"  angles: {' '.join(fmt(x) for x in th[n])}")
        if q[n] > 0:
            for row in J[n]:
                out(f"  jacobian: {' '.join(fmt(x) for x in row)}")
    K = vertex_curvature(surface, scheme, state, extended=True)
    out("curvature: " + " ".join(fmt(x) for x in K.values))
    return EXIT_OK


def _summary(status, iterations, err, state, wall, timing):
    s = {"status": str(status), "iterations": int(iterations), "final_error": fmt(err),
         "final_f": [fmt(x) for x in state.f], "final_u": [fmt(x) for x in state.u]}
    if timing:
        s["wall_time"] = wall
    return s


def cmd_flow(args, out):
    surface, scheme, state = load_instance(args)
    K_bar = io.read_target(args.target, surface, args.background)
    method = "explicit-rk4" if args.method == "calabi" else args.method
    opts = FlowOptions(dt=args.dt, t_max=args.t_max, tol=args.tol, method=method)
    if args.method == "calabi":
        trace = run_calabi(surface, scheme, state, K_bar, args.background, opts)
    else:
        trace = run_extended_ricci(surface, scheme, state, K_bar, args.background, opts)
    out(f"status {trace.status}  steps {trace.steps}  rejected {trace.rejected}  "
        f"t {fmt(trace.times[-1])}  error {fmt(trace.final_error)}")
    out("final f: " + " ".join(fmt(x) for x in trace.final_state.f))
    out(f"wall time {trace.wall_time:.3f} s")
    if args.out:
        io.write_trace_csv(args.out + ".csv", trace)
        io.write_summary_json(args.out + ".json", _summary(
            trace.status, trace.steps, trace.final_error, trace.final_state,
            trace.wall_time, args.timing))
    return EXIT_OK if trace.status == FlowStatus.CONVERGED else EXIT_RUNTIME


def cmd_solve(args, out):
    surface, scheme, state = load_instance(args)
    K_bar = io.read_target(args.target, surface, args.background)
    opts = FlowOptions(tol=args.tol, max_newton_iter=args.max_iter)
    t0 = time.perf_counter()
    final, info = newton_solve(surface, scheme, state, K_bar, args.background, opts,
                               return_info=True)
    wall = time.perf_counter() - t0
    out(f"status {FlowStatus.CONVERGED}  iterations {info.iterations}  "
        f"error {fmt(info.final_error)}")
    out("final f: " + " ".join(fmt(x) for x in final.f))
    out(f"wall time {wall:.3f} s")
    if args.out:
        io.write_summary_json(args.out + ".json", _summary(
            FlowStatus.CONVERGED, info.iterations, info.final_error, final, wall, args.timing))
    return EXIT_OK


def cmd_verify(args, out):
    instance = None
    if args.mesh:
        surface, scheme, state = load_instance(args)
        instance = ("instance", surface, scheme, state)
    results = run_battery(instance, seed=args.seed)
    for r in results:
        out(r.line())
    failed = sum(not r.passed for r in results)
    out(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_INVALID


COMMANDS = {"check": cmd_check, "geom": cmd_geom, "flow": cmd_flow,
            "solve": cmd_solve, "verify": cmd_verify}


def main(argv=None, out=None):
    args = build_parser().parse_args(argv)
    out = out or print
    try:
        return COMMANDS[args.command](args, out)
    except (ParseError, MeshError, MissingWeight, BadTarget, DegenerateFace,
            DegenerateStart, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (LineSearchStall, DCSError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
