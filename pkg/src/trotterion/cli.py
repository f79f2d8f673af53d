"""Command-line front end.

Builds formulas from recipes, runs error scans and accuracy searches,
solves the coefficient systems, runs the application simulators, and
emits deterministic CSV (17 significant digits, no timestamps).

Exit codes: 0 success, 2 usage or configuration error, 3 numeric or
solver failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from .apps.cd import CDConfig, Protocol, cd_beta, cd_run
from .apps.chain import ChainConfig, chain_gate_count, chain_simulate
from .apps.km import BOUNDARIES, KMConfig, km_gate_count, km_simulate
from .bases import f_r, s2, s3
from .certify import error_scan, fit_loglog, gates_to_accuracy
from .errors import (BudgetExceededError, DegenerateScanError, DomainError,
                     InvalidInputError, SolverError)
from .formula import GeneratorPair, ProductFormula, from_json, to_json
from .recursion import SchemeKind, apply_scheme
from .solver import solve_p_of_r, solve_sqrt4

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def default_generators() -> GeneratorPair:
    """The standard desk-scale test pair, with a zero third generator."""
    return GeneratorPair(-1j * SIGMA_X, -1j * SIGMA_Z,
                         np.zeros((2, 2), dtype=complex))


def _parse_grid(text: str) -> list[float]:
    """LO:HI:STEP inclusive linear grid."""
    try:
        lo_s, hi_s, step_s = text.split(":")
        lo, hi, step = float(lo_s), float(hi_s), float(step_s)
    except ValueError:
        raise argparse.ArgumentTypeError("grid must look like LO:HI:STEP")
    if step <= 0.0 or hi < lo:
        raise argparse.ArgumentTypeError("grid needs STEP > 0 and HI >= LO")
    out = []
    k = 0
    while True:
        x = lo + k * step
        if x > hi + 1e-12 * max(1.0, abs(hi)):
            break
        out.append(x)
        k += 1
    return out


def _parse_window(text: str) -> tuple[float, float]:
    try:
        lo_s, hi_s = text.split(":")
        return float(lo_s), float(hi_s)
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like LO:HI")


def _parse_counts(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("step counts must be comma-separated integers")


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_formula(path: str) -> ProductFormula:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read formula file: {exc}")
    try:
        return from_json(payload)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"formula file is not valid JSON: {exc}")


def _slope_footer(slope: float | None, window: tuple[float, float] | None) -> str:
    if slope is None or window is None:
        return ""
    return f"# slope={slope:.12g} window=[{window[0]:.12g},{window[1]:.12g}]\n"


def _cmd_build(args) -> int:
    if args.base == "s2":
        f = s2()
    elif args.base == "s3":
        f = s3()
    else:
        if args.R is None:
            raise InvalidInputError("--base fr needs --R")
        f = f_r(args.R)
    for name in args.scheme or []:
        f = apply_scheme(SchemeKind(name), f)
    payload = to_json(f) + "\n"
    _write(payload, args.out)
    order = "none" if f.claimed_order is None else str(f.claimed_order)
    print(f"gates={f.gate_count()} order={order} label={f.label}", file=sys.stderr)
    return 0


def _scan_csv(result) -> str:
    lines = ["x,error"]
    for x, err in result.rows:
        lines.append(f"{_fmt(x)},{_fmt(err)}")
    body = "\n".join(lines) + "\n"
    window = result.fit_window
    if window is None and len(result.rows) > 1:
        window = (result.rows[0][0], result.rows[-1][0])
    return body + _slope_footer(result.slope, window)


GNUPLOT_TEMPLATE = """set datafile separator ','
set logscale xy
set xlabel 'x'
set ylabel 'error'
plot '{csv}' using 1:2 with linespoints title '{title}'
"""


def _cmd_scan(args) -> int:
    if args.gnuplot is not None and args.out is None:
        raise InvalidInputError("--gnuplot needs --out so the script can "
                                "reference the CSV file")
    f = _load_formula(args.formula)
    gens = default_generators()
    result = error_scan(f, gens, xs=args.xs, target=args.target, R=args.R,
                        window=args.window)
    _write(_scan_csv(result), args.out)
    if args.gnuplot is not None:
        script = GNUPLOT_TEMPLATE.format(csv=args.out, title=f.label or "formula")
        with open(args.gnuplot, "w", encoding="utf-8") as fh:
            fh.write(script)
    return 0


def _cmd_fit(args) -> int:
    rows = []
    try:
        with open(args.csv, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split(",")
                if len(parts) < 2:
                    continue
                try:
                    rows.append((float(parts[0]), float(parts[1])))
                except ValueError:
                    continue  # header or stray text
    except OSError as exc:
        raise InvalidInputError(f"cannot read CSV: {exc}")
    slope, intercept = fit_loglog(rows, args.window)
    if slope is None:
        raise DegenerateScanError("fewer than two usable points in the window")
    window = args.window
    if window is None:
        xs = [x for x, _ in rows]
        window = (min(xs), max(xs))
    sys.stdout.write(
        f"slope={slope:.12g} intercept={intercept:.12g} "
        f"window=[{window[0]:.12g},{window[1]:.12g}]\n")
    return 0


def _cmd_gates(args) -> int:
    f = _load_formula(args.formula)
    gens = default_generators()
    lines = ["x,r,gates"]
    for x in args.xs:
        r, gates = gates_to_accuracy(f, gens, x, args.eps)
        lines.append(f"{_fmt(x)},{r},{gates}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_solve(args) -> int:
    # Solver CSV uses 12 significant digits, unlike the 17 of scan data.
    if args.sqrt4 is not None:
        sol = solve_sqrt4(args.sqrt4)
        values = ",".join(f"{v:.12g}" for v in (sol.a, sol.b, sol.c, sol.d,
                                                sol.signed_sum))
        text = f"n,a,b,c,d,signed_sum\n{sol.n},{values}\n"
    else:
        result = solve_p_of_r(args.pr)
        if not result.converged:
            raise SolverError(f"coefficient solve did not converge at R={args.pr:.6g}")
        ps = ",".join(f"{v:.12g}" for v in result.params.as_tuple())
        text = (f"R,p1,p2,p3,p4,p5,p6,max_residual\n"
                f"{args.pr:.12g},{ps},{result.max_residual:.12g}\n")
    _write(text, args.out)
    return 0


def _cmd_cd(args) -> int:
    base = CDConfig(J=args.J, hz=args.hz, tau=args.tau, n_steps=args.N,
                    protocol=Protocol.TROTTER)
    trotter = cd_run(base)
    cd_cfg = dataclasses.replace(base, protocol=Protocol.CD)
    cd_points = cd_run(cd_cfg, exact_coefficients=args.exact_pr)
    lines = ["t,fidelity_trotter,fidelity_cd,beta"]
    for tr, cd in zip(trotter, cd_points):
        beta = cd_beta(cd_cfg, tr.t) if tr.t < args.tau else math.nan
        lines.append(f"{_fmt(tr.t)},{_fmt(tr.fidelity)},{_fmt(cd.fidelity)},{_fmt(beta)}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _counts_csv(result, gates_of) -> str:
    lines = ["n,error,gates"]
    for n, err in result.rows:
        lines.append(f"{int(n)},{_fmt(err)},{gates_of(int(n))}")
    body = "\n".join(lines) + "\n"
    return body + _slope_footer(result.slope, result.fit_window)


def _cmd_chain(args) -> int:
    cfg = ChainConfig(L=args.L, t1=args.t1, t2=args.t2, T=args.T, n=args.n)
    result = chain_simulate(cfg, ns=args.ns)
    _write(_counts_csv(result, lambda n: chain_gate_count(cfg, n)), args.out)
    return 0


def _cmd_km(args) -> int:
    cfg = KMConfig(Lx=args.Lx, Ly=args.Ly, J=args.J, phi=args.phi, T=args.T,
                   n=args.n, boundary=args.boundary)
    result = km_simulate(cfg, ns=args.ns)
    _write(_counts_csv(result, lambda n: km_gate_count(cfg, n)), args.out)
    return 0


def _cmd_trajectory(args) -> int:
    f = _load_formula(args.formula)
    sums = f.trajectory(args.gen)
    lines = ["step,partial_sum"]
    for k, value in enumerate(sums, start=1):
        lines.append(f"{k},{_fmt(value)}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trotterion",
        description="Product formulas for exponentials of commutators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build a formula from a recipe")
    p_build.add_argument("--base", choices=("s2", "s3", "fr"), required=True)
    p_build.add_argument("--R", type=float, default=None,
                         help="commutator weight for --base fr")
    p_build.add_argument("--scheme", action="append",
                         choices=[kind.value for kind in SchemeKind],
                         help="recursion scheme, repeatable, applied in order")
    p_build.add_argument("--out", default=None, help="write formula JSON here")
    p_build.set_defaults(handler=_cmd_build)

    p_scan = sub.add_parser("scan", help="error scan of a formula file")
    p_scan.add_argument("--formula", required=True)
    p_scan.add_argument("--target", choices=("commutator", "sum-commutator"),
                        default="commutator")
    p_scan.add_argument("--R", type=float, default=None)
    p_scan.add_argument("--xs", type=_parse_grid, default=None,
                        help="LO:HI:STEP grid (default: 20 log-spaced in [0.01, 0.1])")
    p_scan.add_argument("--window", type=_parse_window, default=None)
    p_scan.add_argument("--out", default=None)
    p_scan.add_argument("--gnuplot", default=None,
                        help="also write a companion gnuplot script here")
    p_scan.set_defaults(handler=_cmd_scan)

    p_fit = sub.add_parser("fit", help="log-log fit of an existing scan CSV")
    p_fit.add_argument("--csv", required=True)
    p_fit.add_argument("--window", type=_parse_window, default=None)
    p_fit.set_defaults(handler=_cmd_fit)

    p_gates = sub.add_parser("gates", help="repetitions and gates to reach an accuracy")
    p_gates.add_argument("--formula", required=True)
    p_gates.add_argument("--eps", type=float, required=True)
    p_gates.add_argument("--xs", type=_parse_grid, required=True)
    p_gates.add_argument("--out", default=None)
    p_gates.set_defaults(handler=_cmd_gates)

    p_solve = sub.add_parser("solve", help="run a coefficient solver")
    group = p_solve.add_mutually_exclusive_group(required=True)
    group.add_argument("--sqrt4", type=int, default=None,
                       help="4-copy boundary solve at this odd order")
    group.add_argument("--pr", type=float, default=None,
                       help="exact 6-gate coefficients at this weight R")
    p_solve.add_argument("--out", default=None)
    p_solve.set_defaults(handler=_cmd_solve)

    p_cd = sub.add_parser("cd", help="counterdiabatic driving comparison run")
    p_cd.add_argument("--J", type=float, required=True)
    p_cd.add_argument("--hz", type=float, required=True)
    p_cd.add_argument("--tau", type=float, required=True)
    p_cd.add_argument("--N", type=int, required=True)
    p_cd.add_argument("--exact-pr", action="store_true", dest="exact_pr",
                      help="solve per-step coefficients instead of the closed form")
    p_cd.add_argument("--out", default=None)
    p_cd.set_defaults(handler=_cmd_cd)

    p_chain = sub.add_parser("chain", help="hopping-chain simulation errors")
    p_chain.add_argument("--L", type=int, required=True)
    p_chain.add_argument("--t1", type=float, required=True)
    p_chain.add_argument("--t2", type=float, required=True)
    p_chain.add_argument("--T", type=float, required=True)
    p_chain.add_argument("--n", type=int, default=None)
    p_chain.add_argument("--ns", type=_parse_counts, default=None,
                         help="comma-separated step counts")
    p_chain.add_argument("--out", default=None)
    p_chain.set_defaults(handler=_cmd_chain)

    p_km = sub.add_parser("km", help="flux-lattice simulation errors")
    p_km.add_argument("--Lx", type=int, required=True)
    p_km.add_argument("--Ly", type=int, required=True)
    p_km.add_argument("--J", type=float, required=True)
    p_km.add_argument("--phi", type=float, required=True)
    p_km.add_argument("--T", type=float, required=True)
    p_km.add_argument("--n", type=int, default=None)
    p_km.add_argument("--ns", type=_parse_counts, default=None)
    p_km.add_argument("--boundary", choices=BOUNDARIES, default="auto")
    p_km.add_argument("--out", default=None)
    p_km.set_defaults(handler=_cmd_km)

    p_traj = sub.add_parser("trajectory", help="partial coefficient sums of one generator")
    p_traj.add_argument("--formula", required=True)
    p_traj.add_argument("--gen", choices=("A", "B", "C"), required=True)
    p_traj.add_argument("--out", default=None)
    p_traj.set_defaults(handler=_cmd_trajectory)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (InvalidInputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, DegenerateScanError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
