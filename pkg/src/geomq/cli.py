"""``geomq`` command line.

Exit codes: 0 success, 1 property failure, 2 input/parse error,
3 integration failure, 4 GKLS precondition violated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import checks, coadjoint, gns, lindblad
from .density import DensityMatrix
from .flows import FIGURES, IntegrationError, IntegratorConfig, figure_preset, integrate, named_field
from .io import (
    ParseError,
    bloch_header,
    jsonable,
    load_density,
    load_json,
    matrix_header,
    parse_gkls,
    parse_vector,
    phase_space_header,
    resolve_operator,
    write_csv,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INTEGRATION, EXIT_SPEC = 0, 1, 2, 3, 4
FLOW_KINDS = ("hamiltonian", "gradient", "projective-hamiltonian", "projective-gradient")


def default_seed() -> int:
    raw = os.environ.get("GEOMQ_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"GEOMQ_SEED must be an integer, got {raw!r}") from None


def _emit_json(obj, out) -> None:
    text = json.dumps(jsonable(obj), indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _side_path(out: str, label: str) -> str:
    p = Path(out)
    return str(p.with_name(f"{p.stem}_{label}{p.suffix or '.csv'}"))


# -- flow --------------------------------------------------------------------------


def cmd_flow(args) -> int:
    if args.figure:
        preset = figure_preset(args.figure, h=args.h)
        trajs = preset.run()
        for i, (label, tr) in enumerate(trajs.items()):
            n = tr.points.shape[1] // 2
            if i == 0:
                write_csv(args.out, phase_space_header(n), tr.times, tr.points)
            elif args.out not in (None, "-"):
                write_csv(_side_path(args.out, label), phase_space_header(n), tr.times, tr.points)
            final = ", ".join("%.6f" % v for v in tr.final)
            print(f"{preset.name} {label}: t={tr.times[-1]:.4f} final=({final}) converged={tr.converged}", file=sys.stderr)
        return EXIT_OK
    if args.op is None or args.seed is None:
        raise ParseError("flow needs --op and --seed (or --figure)")
    A = resolve_operator(args.op, args.op_name)
    psi0 = parse_vector(args.seed)
    if psi0.size != 2 * A.shape[0]:
        raise ParseError(f"seed has {psi0.size} components, operator needs {2 * A.shape[0]}")
    f = named_field(args.kind, A)
    cfg = IntegratorConfig(args.h, args.tmax, args.eps, args.renormalize)
    tr = integrate(f, psi0, cfg)
    write_csv(args.out, phase_space_header(A.shape[0]), tr.times, tr.points)
    print(f"t={tr.times[-1]:.6g} steps={len(tr) - 1} converged={tr.converged} field_norm={tr.meta['field_norm']:.3e}", file=sys.stderr)
    return EXIT_OK


# -- lindblad ------------------------------------------------------------------------


def _generator(doc):
    parts = parse_gkls(doc)
    if "V" in parts:
        return lindblad.DiagonalGKLS(parts["H"], tuple(parts["V"]))
    n = parts["H"].shape[0]
    F = parts.get("F") or lindblad.traceless_basis(n)
    return lindblad.diagonalize(lindblad.GKLSSpec(parts["H"], parts["c"], tuple(F)))


def cmd_lindblad(args) -> int:
    try:
        d = _generator(load_json(args.spec))
    except lindblad.InvalidSpecError as exc:
        print(f"invalid GKLS spec: {exc}", file=sys.stderr)
        return EXIT_SPEC
    rho0 = load_density(args.rho0)
    if rho0.shape != d.H.shape:
        raise ParseError("rho0 and H differ in dimension")
    try:
        rho0 = DensityMatrix(rho0)
    except ValueError as exc:
        raise ParseError(f"rho0: {exc}") from exc
    tr = lindblad.evolve(d, rho0, args.tmax, args.h, renormalize=args.renormalize)
    n = d.dim
    if args.bloch:
        rows = np.array([coadjoint.bloch_coords(0.5 * (s + s.conj().T)) for s in tr.states])
        header = bloch_header(n)
    else:
        flat = tr.states.reshape(len(tr.times), n * n)
        rows = np.empty((flat.shape[0], 2 * n * n))
        rows[:, 0::2], rows[:, 1::2] = flat.real, flat.imag
        header = matrix_header(n)
    write_csv(args.out, header, tr.times, rows)
    print(f"final trace defect {tr.trace_defects()[-1]:.3e}", file=sys.stderr)
    print(f"final min eigenvalue {tr.min_eigenvalues()[-1]:.6e}", file=sys.stderr)
    return EXIT_OK


# -- check ------------------------------------------------------------------------------


def cmd_check(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    report = checks.run_suite(args.suite, n=args.n, samples=args.samples, seed=seed, perturb=args.perturb)
    _emit_json(report, args.out)
    for c in report["checks"]:
        if not c["passed"]:
            print(f"FAIL {c['suite']}: {c['check']} residual={c['residual']:.3e} tol={c['tol']:.1e}", file=sys.stderr)
    return EXIT_OK if report["failures"] == 0 else EXIT_FAIL


# -- gns ----------------------------------------------------------------------------------


def gns_report(rho, seed: int = 0, samples: int = 100) -> dict:
    try:
        state = gns.AlgebraState(DensityMatrix(rho))
    except ValueError as exc:
        raise ParseError(f"state: {exc}") from exc
    rep = gns.build_gns(state)
    blocks = gns.decompose(rep)
    rng = np.random.default_rng(seed)
    n = state.n
    elements = [checks.random_complex(rng, (n, n)) for _ in range(samples)]
    recovery = max(abs(rep.recover(a) - state(a)) for a in elements)
    return {
        "dim_H": rep.dim_H,
        "ideal_dim": len(gns.gelfand_ideal(state)),
        "blocks": [{"p_alpha": b.p, "dim": b.dim} for b in blocks],
        "recovery_residual": recovery,
        "decomposition_residual": gns.functional_residual(rep, blocks, elements),
        "commutant_dim": gns.commutant_dimension(rep),
    }


def cmd_gns(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    _emit_json(gns_report(load_density(args.state), seed), args.out)
    return EXIT_OK


# -- bloch -----------------------------------------------------------------------------------


def cmd_bloch(args) -> int:
    rho = load_density(args.state)
    try:
        rho = DensityMatrix(rho).matrix
    except ValueError as exc:
        raise ParseError(f"state: {exc}") from exc
    y = coadjoint.bloch_coords(rho)
    report = {"y": y}
    if rho.shape[0] == 2:
        report["in_ball"] = coadjoint.in_bloch_ball(y)
        report["radius_squared"] = float(y[1:] @ y[1:])
    _emit_json(report, args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geomq", description="Geometric quantum mechanics toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("flow", help="integrate a vector field and write a CSV trajectory")
    f.add_argument("--figure", choices=FIGURES, help="reproduce a figure experiment")
    f.add_argument("--op", help="built-in name (sigma0..sigma3, gellmann<n>_<k>) or operator JSON")
    f.add_argument("--op-name", help="operator to pick from a JSON mapping")
    f.add_argument("--kind", choices=FLOW_KINDS, default="hamiltonian")
    f.add_argument("--seed", help="initial point q1,p1,q2,p2,...")
    f.add_argument("--h", type=float, default=1e-3, help="step size (default 1e-3)")
    f.add_argument("--tmax", type=float, default=10.0, help="horizon (default 10)")
    f.add_argument("--eps", type=float, default=0.0, help="stop when |field| < eps (default off)")
    f.add_argument("--renormalize", action="store_true", help="project to the unit sphere each step")
    f.add_argument("--out", default="-", help="CSV path (default stdout)")
    f.set_defaults(func=cmd_flow)

    lb = sub.add_parser("lindblad", help="evolve a GKLS semigroup")
    lb.add_argument("--spec", required=True, help="JSON {H, c, F?} or {H, V}")
    lb.add_argument("--rho0", required=True, help="state JSON {rho: ...} or {psi: ...}")
    lb.add_argument("--h", type=float, default=1e-3)
    lb.add_argument("--tmax", type=float, default=5.0)
    lb.add_argument("--bloch", action="store_true", help="write Bloch coordinates instead of entries")
    lb.add_argument("--renormalize", action="store_true", help="rescale to unit trace each step")
    lb.add_argument("--out", default="-")
    lb.set_defaults(func=cmd_lindblad)

    c = sub.add_parser("check", help="run an invariant suite and print a JSON report")
    c.add_argument("--suite", choices=checks.SUITES + ("all",), default="all")
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--seed", type=int, default=None, help="RNG seed (default $GEOMQ_SEED or 0)")
    c.add_argument("--perturb", type=float, default=0.0, help="inject a fault of this size")
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("gns", help="GNS report for a state")
    g.add_argument("--state", required=True)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_gns)

    b = sub.add_parser("bloch", help="Bloch coordinates of a state")
    b.add_argument("--state", required=True)
    b.add_argument("--out", default="-")
    b.set_defaults(func=cmd_bloch)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValueError, KeyError) as exc:
        if isinstance(exc, lindblad.InvalidSpecError):
            print(f"invalid GKLS spec: {exc}", file=sys.stderr)
            return EXIT_SPEC
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IntegrationError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION


if __name__ == "__main__":
    sys.exit(main())
