"""Command-line front end: ``tensor-sde <command> ...``.

Every command prints one JSON document (schema ``tensor-sde/1``, sorted keys,
floats at 17 significant digits, rationals as ints or "p/q" strings) except
``solve --format csv``.  Exit status: 0 when all requested checks pass, 1 on
a failed check or compute error (with a JSON error body), 2 on bad flags.
"""
import argparse
import json
import math
import os
import re
import sys
from fractions import Fraction

SCHEMA = "tensor-sde/1"
_FLOAT_TAG = "@@float:"
_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS")


class CheckFailed(Exception):
    """A requested check ran to completion and did not pass."""

    def __init__(self, payload):
        super().__init__("check failed")
        self.payload = payload


# -- output -------------------------------------------------------------------------

def _plain(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        from .scaling import rational_json
        return rational_json(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _plain(obj.tolist())
    if isinstance(obj, float) or hasattr(obj, "__float__"):
        v = float(obj)
        if not math.isfinite(v):
            return None
        return _FLOAT_TAG + format(v, ".17g")
    raise TypeError("cannot serialise %r" % (obj,))


def dumps(payload):
    """Deterministic JSON text for a payload (schema key added)."""
    body = dict(payload)
    body["schema"] = SCHEMA
    text = json.dumps(_plain(body), sort_keys=True, indent=2)
    return re.sub(r'"%s([^"]*)"' % re.escape(_FLOAT_TAG), r"\1", text) + "\n"


def _emit(text, out=None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- argument types -------------------------------------------------------------------

def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a rational number: %r" % text)


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("not an integer: %r" % text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1, got %d" % v)
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("not a number: %r" % text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0, got %r" % text)
    return v


def _finite_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("not a number: %r" % text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be finite")
    return v


def _momentum(text):
    return float(_rational(text))


# -- commands -------------------------------------------------------------------------

def cmd_scaling(args, parser):
    from .scaling import InfeasibleError, solve
    try:
        res = solve(beta=args.beta)
    except InfeasibleError as exc:
        raise CheckFailed({"error": str(exc), "beta": args.beta, "feasible": False})
    out = dict(res.values)
    out["constraints"] = [{"tag": r.tag, "constraint": r.text, "satisfied": r.satisfied, "slack": r.slack}
                          for r in res.report]
    out["feasible"] = res.feasible
    return out


def _solve_table(args):
    from .sde_core import Grid, solve_g2
    return solve_g2(Grid(args.n), args.lam, tol=args.tol, max_iter=args.max_iter, relaxation=args.relaxation)


def _convergence(table):
    return {"N": table.grid.n, "lambda": table.lam, "iterations": table.iterations,
            "residual": table.residual, "relaxation": table.relaxation}


def cmd_solve(args, parser):
    table = _solve_table(args)
    pts = table.grid.points()
    if args.format == "csv":
        lines = ["i1,i2,i3,p1,p2,p3,G2"]
        for p in pts:
            m = table.grid.momentum(p)
            lines.append(",".join([str(i) for i in p] + [repr(float(v)) for v in m] + [repr(float(table.g(p)))]))
        _emit("\n".join(lines) + "\n", args.out)
        sys.stderr.write(dumps({"convergence": _convergence(table)}))
        return None
    return {"convergence": _convergence(table),
            "values": [{"index": list(p), "G2": table.g(p)} for p in pts]}


def _grid_points(args, parser, names):
    from .sde_core import Grid
    grid = Grid(args.n)
    out = []
    for name in names:
        try:
            out.append(grid.index_of(getattr(args, name)))
        except ValueError as exc:
            parser.error("--%s: %s" % (name, exc))
    return out


def cmd_g4(args, parser):
    from .sde_core import eval_g4_connected, solve_g4_disconnected
    x, y = _grid_points(args, parser, ("x", "y"))
    table = _solve_table(args)
    if args.sector == "m|m":
        value = solve_g4_disconnected(table, y).g(x)
        label = "m|m"
    else:
        value = eval_g4_connected(table, args.color, x, y)
        label = "V_%d" % args.color
    return {"sector": label, "x": args.x, "y": args.y, "value": value, "convergence": _convergence(table)}


def cmd_g6(args, parser):
    from .sde_core import eval_g6
    x, y, z = _grid_points(args, parser, ("x", "y", "z"))
    table = _solve_table(args)
    value = eval_g6(args.sector, table, x, y, z)
    return {"sector": args.sector, "x": args.x, "y": args.y, "z": args.z, "value": value,
            "convergence": _convergence(table)}


def _class_info(g):
    from .colored_graph import classify
    bc = classify(g)
    return {"class": bc.name, "vertex_count": bc.vertex_count, "component_count": bc.component_count,
            "genus": bc.genus}


def cmd_graph(args, parser):
    from . import colored_graph as cg
    with open(args.infile) as fh:
        g = cg.ColoredGraph.from_json(fh.read())
    op = args.op
    if op == "boundary":
        b = cg.boundary(g)
        return dict(_class_info(b), graph=b.to_dict())
    if op == "classify":
        return _class_info(g)
    if op == "genus":
        g.check_boundary()
        return {"genus": cg.genus(g), "component_count": cg.connected_components(g)}
    if op == "aut":
        return {"automorphisms": cg.count_automorphisms(g)}
    if op == "swap":
        if args.color is None:
            parser.error("graph swap needs --color")
        pair = tuple(args.pair) if args.pair else tuple(sorted(g.whites)[:2])
        out = cg.swap(g, args.color, pair)
        return dict(_class_info(out), graph=out.to_dict(), color=args.color, pair=list(pair))
    parser.error("unknown graph operation %r" % op)


def perturb_report(order=2, n_small=2):
    from .perturbation import check_appendix_expansion, check_wti_identity
    checks = [check_appendix_expansion(s, n_small, order) for s in ("2pt", "4pt_V1", "4pt_m")]
    checks.append(check_wti_identity(n_small, min(order, 1)))
    return {"order": order, "N_small": n_small, "checks": checks, "pass": all(c["pass"] for c in checks)}


def cmd_perturb_check(args, parser):
    from .wick import BudgetError
    try:
        rep = perturb_report(args.order, args.n_small)
    except BudgetError as exc:
        raise CheckFailed({"error": str(exc)})
    if not rep["pass"]:
        raise CheckFailed(rep)
    return rep


def cmd_verify(args, parser):
    from .verify import run_verification
    rep = run_verification()
    if not rep["pass"]:
        raise CheckFailed(rep)
    return rep


# -- entry point -------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="tensor-sde", description="Schwinger-Dyson tools for the rank-3 tensor model.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scaling", help="large-N exponent assignment and constraint slacks")
    s.add_argument("--beta", type=_rational, default=Fraction(0))
    s.add_argument("--out")
    s.set_defaults(func=cmd_scaling)

    def solver_flags(q):
        q.add_argument("--n", type=_positive_int, required=True)
        q.add_argument("--lambda", dest="lam", type=_finite_float, required=True)
        q.add_argument("--tol", type=_positive_float, default=1e-12)
        q.add_argument("--max-iter", type=_positive_int, default=10_000)
        q.add_argument("--relaxation", type=_positive_float, default=1.0)
        q.add_argument("--out")

    s = sub.add_parser("solve", help="large-N 2-point function on the grid")
    solver_flags(s)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("g4", help="large-N 4-point value (momenta such as 1/2)")
    solver_flags(s)
    s.add_argument("--x", type=_momentum, nargs=3, required=True)
    s.add_argument("--y", type=_momentum, nargs=3, required=True)
    s.add_argument("--sector", choices=("V", "m|m"), default="V")
    s.add_argument("--color", type=int, choices=(1, 2, 3), default=1)
    s.set_defaults(func=cmd_g4)

    s = sub.add_parser("g6", help="large-N 6-point value")
    solver_flags(s)
    for name in ("x", "y", "z"):
        s.add_argument("--" + name, type=_momentum, nargs=3, required=True)
    s.add_argument("--sector", choices=("G_1", "F_{1;23}", "F_{2;13}", "F_{3;12}", "K"), default="G_1")
    s.set_defaults(func=cmd_g6)

    s = sub.add_parser("graph", help="coloured-graph queries on a JSON graph file")
    s.add_argument("op", choices=("classify", "boundary", "swap", "aut", "genus"))
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--color", type=int, choices=(1, 2, 3))
    s.add_argument("--pair", type=int, nargs=2)
    s.add_argument("--out")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("perturb-check", help="exact finite-N residuals against the Wick oracle")
    s.add_argument("--order", type=int, choices=(0, 1, 2), default=2)
    s.add_argument("--n-small", type=int, choices=(1, 2, 3), default=2)
    s.add_argument("--out")
    s.set_defaults(func=cmd_perturb_check)

    s = sub.add_parser("verify", help="run the full verification suite")
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)
    return p


def _apply_thread_cap():
    cap = os.environ.get("TENSOR_SDE_THREADS")
    if cap:
        for var in _THREAD_VARS:
            os.environ[var] = cap


def main(argv=None):
    _apply_thread_cap()
    parser = build_parser()
    args = parser.parse_args(argv)
    out = getattr(args, "out", None)
    try:
        payload = args.func(args, parser)
    except CheckFailed as exc:
        _emit(dumps(dict(exc.payload, command=args.command, ok=False)), out)
        return 1
    except Exception as exc:  # compute failure: report it as JSON
        _emit(dumps({"command": args.command, "ok": False, "error": str(exc), "type": type(exc).__name__}), out)
        return 1
    if payload is not None:
        _emit(dumps(dict(payload, command=args.command, ok=True)), out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
