"""Command-line front end.

Subcommands mirror the library: validate / solve / constant for the fixed
point itself, check-gaussian / check-quadrature / check-inf / bd for the
independent verification layers, young and split for the closed-form test
bed and critical-subspace splitting.

Exit codes: 0 success, 1 a check was violated (or a solve was inconclusive),
2 bad input. Reports written via --out are deterministic for a fixed
command line: seeds default to fixed constants and every report embeds the
datum digest, the options used, the seed, and the library version.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .datum import BLDatum, DatumError, datum_digest, load_datum, validate
from .functional_verify import GridFunction, direct_integral_check, gaussian_function, reverse_integral_check
from .gaussian_solver import bl_constant, direct_extremizers, reverse_extremizers, solve
from .gaussian_verify import DEFAULT_SAMPLES, DEFAULT_SEED, sweep_direct, sweep_dual, sweep_reverse
from .quadform import check_inf
from .stochastic import BrownianConfig, builtin_suite
from .structure import Subspace, coordinate_subspaces, is_critical, multiplicativity_check
from .young import YoungExponents, beckner_constant, closed_form_A, constant_from_cs, datum_from_exponents

# Quadrature slack: grid error, not roundoff, so looser than the Gaussian sweeps.
QUAD_DIRECT_SLACK = 1e-3
QUAD_REVERSE_SLACK = 5e-3
SPLIT_GAP_TOL = 1e-8


def _json_options(args: argparse.Namespace) -> dict:
    # output destinations are not part of the computation
    skip = {"func", "command", "out", "csv", "trace"}
    return {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in skip and isinstance(v, (bool, int, float, str, type(None)))
    }


def _write_report(args, payload: dict, datum: BLDatum | None = None) -> None:
    out = getattr(args, "out", None)
    if not out:
        return
    doc = {
        "command": args.command,
        "version": __version__,
        "options": _json_options(args),
    }
    if datum is not None:
        doc["datum_digest"] = datum_digest(datum)
    doc.update(payload)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_ratio_csv(path: str, named_ratios: list[tuple[str, np.ndarray]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("check,sample,ratio\n")
        for name, ratios in named_ratios:
            for i, r in enumerate(ratios):
                fh.write(f"{name},{i},{float(r)!r}\n")


def _solve_args(args) -> dict:
    return {"tol": args.tol, "max_iter": args.max_iter, "damping": args.damping}


# -- subcommands -----------------------------------------------------------------

def cmd_validate(args) -> int:
    datum = load_datum(args.datum)
    diag = validate(datum)
    print(f"n={datum.n} m={datum.m} dims={list(datum.dims)}")
    print(f"homogeneity defect: {diag.homogeneity_defect:+.3e}")
    print(f"degenerate: {diag.degenerate}")
    print(f"frame: {diag.frame}")
    print(f"zero maps: {diag.zero_map_indices or 'none'}")
    _write_report(args, {"diagnostics": diag.to_dict()}, datum)
    return 0


def cmd_solve(args) -> int:
    datum = load_datum(args.datum)
    res = solve(datum, **_solve_args(args))
    print(f"converged: {res.converged}  iterations: {res.iterations}  residual: {res.residual:.3e}")
    print(f"constant: {res.constant!r}")
    print("A (det-normalized):")
    for row in res.A:
        print("  " + "  ".join(f"{v:+.12e}" for v in row))
    if args.trace:
        res.write_trace_csv(args.trace)
    _write_report(args, {"result": res.to_dict()}, datum)
    if res.converged or res.constant == float("inf"):
        return 0
    print("solve was inconclusive within the iteration budget", file=sys.stderr)
    return 1


def cmd_constant(args) -> int:
    datum = load_datum(args.datum)
    res = solve(datum, **_solve_args(args))
    print(f"{res.constant!r}")
    _write_report(args, {"constant": res.constant, "converged": res.converged}, datum)
    if res.converged or res.constant == float("inf"):
        return 0
    return 1


def cmd_check_gaussian(args) -> int:
    datum = load_datum(args.datum)
    if args.constant is not None:
        constant = args.constant
        ext_direct = ext_reverse = ext_dual = None
    else:
        res = solve(datum, **_solve_args(args))
        if not res.converged:
            print("solver did not converge; no constant to check", file=sys.stderr)
            return 1
        constant = res.constant
        ext_direct = direct_extremizers(datum, res.A)
        ext_reverse, ext_dual = reverse_extremizers(datum, res.A)

    sweeps = [
        ("direct", sweep_direct(datum, constant, args.samples, args.seed, args.threads, ext_direct)),
        ("reverse", sweep_reverse(datum, constant, args.samples, args.seed, args.threads, ext_reverse)),
        ("dual", sweep_dual(datum, constant, args.samples, args.seed, args.threads, ext_dual)),
    ]
    payload = {"constant": constant, "checks": {}}
    failed = False
    for name, (report, _) in sweeps:
        gap = f"  extremizer gap {report.equality_gap:.2e}" if report.equality_gap is not None else ""
        print(
            f"{name:8s} samples={report.samples} violations={report.violations} "
            f"worst_ratio={report.worst_ratio:.12f}{gap}"
        )
        payload["checks"][name] = report.to_dict()
        failed |= not report.ok
    if args.csv:
        _write_ratio_csv(args.csv, [(name, ratios) for name, (_, ratios) in sweeps])
    _write_report(args, payload, datum)
    return 1 if failed else 0


def cmd_check_quadrature(args) -> int:
    datum = load_datum(args.datum)
    if datum.n > 2:
        raise DatumError("quadrature checks support ambient dimension 1 and 2 only")
    res = solve(datum, **_solve_args(args))
    if not res.converged:
        print("solver did not converge; no constant to check", file=sys.stderr)
        return 1

    payload = {"constant": res.constant, "checks": {}}
    failed = False

    fs = [
        GridFunction.from_callable(gaussian_function(P), -args.box, args.box, args.resolution)
        for P in direct_extremizers(datum, res.A)
    ]
    direct = direct_integral_check(datum, fs, res.constant, args.resolution, args.box)
    ok = direct <= 1.0 + QUAD_DIRECT_SLACK
    print(f"direct   ratio={direct:.8f}  (equality expected: gap {abs(direct - 1.0):.2e})")
    payload["checks"]["direct"] = {"ratio": direct, "ok": ok}
    failed |= not ok

    kernel_dim = sum(datum.factors[i].target_dim for i in datum.active_indices()) - datum.n
    if kernel_dim <= 2:
        tuple_r, _ = reverse_extremizers(datum, res.A)
        fs_r = [
            GridFunction.from_callable(gaussian_function(P), -args.box, args.box, args.resolution)
            for P in tuple_r
        ]
        reverse = reverse_integral_check(datum, fs_r, res.constant, args.resolution, args.box)
        ok = reverse <= 1.0 + QUAD_REVERSE_SLACK
        print(f"reverse  ratio={reverse:.8f}  (equality expected: gap {abs(reverse - 1.0):.2e})")
        payload["checks"]["reverse"] = {"ratio": reverse, "ok": ok}
        failed |= not ok
    else:
        print(f"reverse  skipped (decomposition kernel has dimension {kernel_dim} > 2)")

    _write_report(args, payload, datum)
    return 1 if failed else 0


def cmd_check_inf(args) -> int:
    datum = load_datum(args.datum)
    rng = np.random.default_rng(args.seed)
    from .gaussian_verify import sample_tuple

    failed = False
    reports = []
    for k in range(args.instances):
        tup = sample_tuple(datum, rng)
        x = rng.standard_normal(datum.n)
        report = check_inf(datum, tup, x, samples=args.samples, seed=args.seed + k)
        reports.append(report.to_dict())
        failed |= not report.ok
    worst = max(r["worst_ratio"] for r in reports)
    violations = sum(r["violations"] for r in reports)
    print(
        f"instances={args.instances} samples={args.samples} per instance  "
        f"violations={violations}  worst_ratio={worst:.12f}"
    )
    _write_report(args, {"instances": reports}, datum)
    return 1 if failed else 0


def cmd_bd(args) -> int:
    if args.datum:
        datum = load_datum(args.datum)
        res = solve(datum)
        if not res.converged:
            print("solver did not converge; no covariance to simulate", file=sys.stderr)
            return 1
        A = res.A
    else:
        datum = None
        A = np.eye(args.dim)
    config = BrownianConfig(A=A, horizon=args.horizon, steps=args.steps, paths=args.paths, seed=args.seed)
    rows = builtin_suite(config)
    print("label,estimate,stderr,closed_form,z")
    failed = False
    for r in rows:
        closed = "" if r.closed_form is None else repr(r.closed_form)
        print(f"{r.label},{r.estimate!r},{r.stderr!r},{closed},{r.z!r}")
        failed |= not r.ok
    _write_report(
        args,
        {
            "rows": [
                {
                    "label": r.label,
                    "estimate": r.estimate,
                    "stderr": r.stderr,
                    "closed_form": r.closed_form,
                    "z": r.z,
                    "kind": r.kind,
                    "ok": r.ok,
                }
                for r in rows
            ]
        },
        datum,
    )
    return 1 if failed else 0


def cmd_young(args) -> int:
    if args.r is None:
        e = YoungExponents.from_pq(args.p, args.q)
    else:
        e = YoungExponents(args.p, args.q, args.r)
    datum = datum_from_exponents(e)
    A = closed_form_A(e)
    res = solve(datum, **_solve_args(args))
    c1, c2, c3 = e.weights
    print(f"p={e.p} q={e.q} r={e.r}  weights=({c1:.6f}, {c2:.6f}, {c3:.6f})")
    print("closed-form A (det-normalized):")
    for row in A:
        print("  " + "  ".join(f"{v:+.12e}" for v in row))
    print(f"constant (exponent form): {beckner_constant(e)!r}")
    print(f"constant (weight form):   {constant_from_cs(c1, c2, c3)!r}")
    print(f"constant (solver):        {res.constant!r}")
    print(f"solver max|A - closed|:   {np.abs(res.A - A).max():.3e}")
    _write_report(
        args,
        {
            "exponents": {"p": e.p, "q": e.q, "r": e.r},
            "constant": beckner_constant(e),
            "solver_constant": res.constant,
            "A": A.tolist(),
        },
        datum,
    )
    return 0


def cmd_split(args) -> int:
    datum = load_datum(args.datum)
    if args.subspace:
        with open(args.subspace, "r", encoding="utf-8") as fh:
            rows = json.load(fh)
        candidates = [Subspace.from_rows(np.asarray(rows, dtype=float))]
    else:
        candidates = [E for E in coordinate_subspaces(datum.n) if is_critical(datum, E)]
        if not candidates:
            print("no critical coordinate subspace found")
            _write_report(args, {"splits": []}, datum)
            return 0

    failed = False
    splits = []
    for E in candidates:
        if not is_critical(datum, E):
            raise DatumError("the supplied subspace is not critical for this datum")
        result = multiplicativity_check(datum, E, **_solve_args(args))
        ok = result.gap <= SPLIT_GAP_TOL
        axes = [int(a) for a in np.flatnonzero(np.abs(E.basis).max(axis=1) > 1e-12)]
        print(
            f"E(dim {E.dim}, axes~{axes}): C={result.full.constant:.12f} "
            f"C_E={result.restricted.constant:.12f} C_perp={result.quotient.constant:.12f} "
            f"gap={result.gap:.2e} {'ok' if ok else 'VIOLATION'}"
        )
        splits.append({**result.to_dict(), "dim": E.dim, "ok": ok})
        failed |= not ok
    _write_report(args, {"splits": splits}, datum)
    return 1 if failed else 0


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blgauss",
        description="Brascamp-Lieb constants via Gaussian fixed points, with built-in verification.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, datum=True, solver=False, sampling=False):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        if datum:
            p.add_argument("--datum", required=True, help="path to a datum JSON file ({n, factors:[{c, rows}]})")
        p.add_argument("--out", default=None, help="write a JSON report here")
        if solver:
            p.add_argument("--tol", type=float, default=1e-10, help="solver convergence tolerance")
            p.add_argument("--max-iter", type=int, default=10_000, dest="max_iter")
            p.add_argument("--damping", type=float, default=0.5)
        if sampling:
            p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        return p

    add("validate", cmd_validate, "diagnose a datum (homogeneity, degeneracy, frame, zero maps)")

    p = add("solve", cmd_solve, "run the fixed-point solver", solver=True)
    p.add_argument("--trace", default=None, help="write the iteration trace CSV here")

    add("constant", cmd_constant, "print the Brascamp-Lieb constant", solver=True)

    p = add("check-gaussian", cmd_check_gaussian, "random-tuple determinant inequality sweeps",
            solver=True, sampling=True)
    p.add_argument("--constant", type=float, default=None,
                   help="check this constant instead of the solver's")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads; reports do not depend on this")
    p.add_argument("--csv", default=None, help="write per-sample ratios CSV here")

    p = add("check-quadrature", cmd_check_quadrature, "grid quadrature of the integral inequalities",
            solver=True)
    p.add_argument("--resolution", type=int, default=801, help="grid points per axis")
    p.add_argument("--box", type=float, default=8.0, help="half-width of every box")

    p = add("check-inf", cmd_check_inf, "brute-force the harmonic-combination infimum", sampling=True)
    p.add_argument("--instances", type=int, default=10, help="random (tuple, point) instances")

    p = sub.add_parser("bd", help="Monte Carlo of the variational log-MGF formula")
    p.set_defaults(func=cmd_bd)
    p.add_argument("--datum", default=None, help="use the solved covariance of this datum")
    p.add_argument("--dim", type=int, default=1, help="dimension when no datum is given")
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=128)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None, help="write a JSON report here")

    p = sub.add_parser("young", help="closed-form convolution datum on the line")
    p.set_defaults(func=cmd_young)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--r", type=float, default=None, help="inferred from p, q when omitted")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10_000, dest="max_iter")
    p.add_argument("--damping", type=float, default=0.5)
    p.add_argument("--out", default=None, help="write a JSON report here")

    p = add("split", cmd_split, "critical-subspace multiplicativity check", solver=True)
    p.add_argument("--subspace", default=None,
                   help="JSON file with basis row vectors; coordinate subspaces are enumerated when omitted")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DatumError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


run = main


if __name__ == "__main__":
    raise SystemExit(main())
