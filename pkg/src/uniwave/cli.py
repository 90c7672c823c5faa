"""Command-line interface: classify, solve, sweep, phase, evolve,
dispersion, branch.

Exit codes: 0 success, 2 usage/parameter error, 3 numerical failure.
All data files use shortest round-trip decimal floats so identical
invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import evolution, phaseportrait, solver, spectral
from .equilibria import (
    Branch,
    WaveParameters,
    equilibria_catalog,
    equilibrium_report,
    thresholds,
)
from .solver import SolverError
from .spectral import Field, make_grid

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_csv(path: Path, header: str, columns) -> None:
    rows = zip(*columns)
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _branch(name: str) -> Branch:
    try:
        return Branch(name)
    except ValueError:
        raise ValueError(f"branch must be 'plus' or 'minus', got {name!r}")


def _report(command: str, parameters: dict, outputs: list, diagnostics: dict) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "outputs": [str(p) for p in outputs],
        "diagnostics": diagnostics,
    }


def cmd_classify(args) -> dict:
    if args.cs <= 0:
        raise ValueError("cs must be positive")
    th = thresholds(args.cs)
    reports = {}
    if args.g <= th.g1:
        for branch in (Branch.PLUS, Branch.MINUS):
            reports[branch.value] = equilibrium_report(args.cs, args.g, branch)
    catalog = equilibria_catalog(args.cs, args.g)
    summary = {
        "case": catalog.case,
        "point_equilibria": [[float(v) for v in p] for p in catalog.point_equilibria],
        "family_level": catalog.family.level,
    }
    payload = {
        "command": "classify",
        "cs": args.cs,
        "g": args.g,
        "thresholds": th.as_dict(),
        "branches": reports,
        "catalog": summary,
    }
    outputs = []
    if args.out:
        path = Path(args.out)
        _write_json(path, payload)
        outputs.append(path)
    else:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        print()
    return _report("classify", {"cs": args.cs, "g": args.g}, outputs, summary)


def _profile_columns(res: solver.ProfileResult):
    grid = res.u.grid
    u = res.u
    return [
        grid.nodes,
        u.values,
        spectral.derivative(u, 1).values,
        spectral.derivative(u, 2).values,
        spectral.derivative(u, 3).values,
        res.h.values,
        spectral.apply_J(res.u_tilde).values,
    ]


def _solve(args) -> solver.ProfileResult:
    params = WaveParameters(cs=args.cs, g=args.g, branch=_branch(args.branch))
    config = solver.SolverConfig(
        grid=make_grid(args.N, args.l),
        tol_increment=args.tol,
        max_iter=args.max_iter,
        acceleration=args.accel,
    )
    return solver.solve_profile(params, config)


def cmd_solve(args) -> dict:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    params = {"cs": args.cs, "g": args.g, "branch": args.branch,
              "N": args.N, "l": args.l, "tol": args.tol,
              "max_iter": args.max_iter, "accel": args.accel}
    try:
        res = _solve(args)
    except (SolverError, RuntimeError) as exc:
        _write_json(out / "profile.json", {"error": str(exc), "parameters": params})
        raise
    csv_path = out / "profile.csv"
    _write_csv(csv_path, "# x,u,ux,uxx,uxxx,h,htilde", _profile_columns(res))
    meta = {
        "parameters": params,
        "iterations": res.iterations,
        "residual_fixedpoint": res.residual_fixedpoint,
        "residual_nonlocal": res.residual_nonlocal,
        "m_history": [float(m) for m in res.m_history],
    }
    json_path = out / "profile.json"
    _write_json(json_path, meta)
    diag = {"iterations": res.iterations,
            "residual_nonlocal": res.residual_nonlocal}
    return _report("solve", params, [csv_path, json_path], diag)


def cmd_sweep(args) -> dict:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    gs = np.linspace(args.g_start, args.g_stop, args.num)
    branch = _branch(args.branch)
    params_list = []
    for g in gs:
        try:
            params_list.append(WaveParameters(cs=args.cs, g=float(g), branch=branch))
        except ValueError:
            params_list.append(None)
    config = solver.SolverConfig(
        grid=make_grid(args.N, args.l),
        tol_increment=args.tol,
        max_iter=args.max_iter,
        acceleration=args.accel,
    )
    valid = [p for p in params_list if p is not None]
    results = solver.continuation_sweep(valid, config)
    entries, outputs = [], []
    it = iter(results)
    for g, p in zip(gs, params_list):
        if p is None:
            entries.append({"g": float(g), "error": "invalid parameters"})
            continue
        _, res, err = next(it)
        if res is None:
            entries.append({"g": float(g), "error": err})
            continue
        csv_path = out / f"profile_{len(entries):04d}.csv"
        _write_csv(csv_path, "# x,u,ux,uxx,uxxx,h,htilde", _profile_columns(res))
        outputs.append(csv_path)
        entries.append({
            "g": float(g),
            "iterations": res.iterations,
            "residual_nonlocal": res.residual_nonlocal,
            "amplitude": float(np.max(np.abs(res.u_tilde.values))),
            "file": csv_path.name,
        })
    summary_path = out / "sweep.json"
    _write_json(summary_path, {"cs": args.cs, "branch": args.branch,
                               "points": entries})
    outputs.append(summary_path)
    n_failed = sum("error" in e for e in entries)
    return _report("sweep", {"cs": args.cs, "branch": args.branch},
                   outputs, {"points": len(entries), "failed": n_failed})


def cmd_phase(args) -> dict:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    params = WaveParameters(cs=args.cs, g=args.g, branch=_branch(args.branch))
    traj = phaseportrait.shoot_unstable(params, eps=args.eps, z_max=args.zmax)
    csv_path = out / "trajectory.csv"
    _write_csv(csv_path, "# z,y1,y2,y3,y4,alpha",
               [traj.z] + [traj.states[:, i] for i in range(4)] + [traj.alpha])
    meta = {
        "parameters": {"cs": args.cs, "g": args.g, "branch": args.branch,
                       "eps": args.eps, "zmax": args.zmax},
        "termination": traj.termination.value,
        "outcome": traj.outcome,
        "alpha_crossings": traj.alpha_crossings,
    }
    json_path = out / "trajectory.json"
    _write_json(json_path, meta)
    return _report("phase", meta["parameters"], [csv_path, json_path],
                   {"termination": traj.termination.value, "outcome": traj.outcome})


def cmd_evolve(args) -> dict:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    res = _solve(args)
    h0 = res.h
    config = evolution.EvolutionConfig(grid=h0.grid, T=args.T, dt=args.dt,
                                       form=args.form)
    hT = evolution.evolve(h0, config)
    shifted = spectral.translate(h0, args.cs * args.T)
    err = float(np.max(np.abs(hT.values - shifted.values)))
    rel = err / float(np.max(np.abs(h0.values)))
    drift = float(abs(np.mean(hT.values) - np.mean(h0.values)))
    csv_path = out / "snapshots.csv"
    _write_csv(csv_path, "# x,h0,hT",
               [h0.grid.nodes, h0.values, hT.values])
    meta = {
        "parameters": {"cs": args.cs, "g": args.g, "branch": args.branch,
                       "T": args.T, "dt": args.dt, "form": args.form},
        "translation_error_rel": rel,
        "mass_drift": drift,
    }
    json_path = out / "evolve.json"
    _write_json(json_path, meta)
    return _report("evolve", meta["parameters"], [csv_path, json_path],
                   {"translation_error_rel": rel, "mass_drift": drift})


def cmd_dispersion(args) -> dict:
    if args.kmax < 1:
        raise ValueError("kmax must be >= 1")
    table = {str(k): evolution.dispersion_speed(k) for k in range(1, args.kmax + 1)}
    payload = {"command": "dispersion", "speeds": table}
    outputs = []
    if args.out:
        path = Path(args.out)
        _write_json(path, payload)
        outputs.append(path)
    else:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        print()
    return _report("dispersion", {"kmax": args.kmax}, outputs, table)


def cmd_branch(args) -> dict:
    c, phi = evolution.small_amplitude_branch(args.m, args.k, args.amp)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "branch_profile.csv"
    _write_csv(csv_path, "# x,phi", [phi.grid.nodes, phi.values])
    meta = {
        "parameters": {"m": args.m, "k": args.k, "amp": args.amp},
        "speed": c,
        "linear_speed": evolution.dispersion_speed(args.m * args.k),
    }
    json_path = out / "branch.json"
    _write_json(json_path, meta)
    return _report("branch", meta["parameters"], [csv_path, json_path],
                   {"speed": c})


def _load_config(path: str) -> dict:
    values = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, raw = line.partition("=")
        key = key.strip().replace("-", "_")
        raw = raw.strip()
        for cast in (int, float):
            try:
                values[key] = cast(raw)
                break
            except ValueError:
                continue
        else:
            values[key] = raw
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uniwave",
        description="Traveling waves of the nonlocal unidirectional "
                    "plasma wave equation",
    )
    parser.add_argument("--config", help="flat key=value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_wave_flags(p, branch=True):
        p.add_argument("--cs", type=float, required=True, help="wave speed")
        p.add_argument("--g", type=float, default=0.0,
                       help="integration constant")
        if branch:
            p.add_argument("--branch", choices=["plus", "minus"],
                           default="minus")

    def add_solver_flags(p):
        p.add_argument("--N", type=int, default=1024)
        p.add_argument("--l", type=float, default=100.0)
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--max-iter", type=int, default=1000)
        p.add_argument("--accel", choices=["none", "mpe", "rre"],
                       default="mpe")

    p = sub.add_parser("classify", help="equilibrium and wave-type report")
    add_wave_flags(p, branch=False)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="compute a traveling-wave profile")
    add_wave_flags(p)
    add_solver_flags(p)
    p.add_argument("--out", default="uniwave_out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="continuation sweep in g")
    add_wave_flags(p)
    add_solver_flags(p)
    p.add_argument("--g-start", type=float, required=True)
    p.add_argument("--g-stop", type=float, required=True)
    p.add_argument("--num", type=int, default=10)
    p.add_argument("--out", default="uniwave_sweep")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("phase", help="unstable-manifold shooting")
    add_wave_flags(p)
    p.add_argument("--eps", type=float, default=1e-5)
    p.add_argument("--zmax", type=float, default=50.0)
    p.add_argument("--out", default="uniwave_phase")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("evolve", help="profile translation verification")
    add_wave_flags(p)
    add_solver_flags(p)
    p.add_argument("--T", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--form", choices=["nonconservative", "conservative"],
                   default="conservative")
    p.add_argument("--out", default="uniwave_evolve")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("dispersion", help="linear phase-speed table")
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("branch", help="small-amplitude periodic branch")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--amp", type=float, default=1e-3)
    p.add_argument("--out", default="uniwave_branch")
    p.set_defaults(func=cmd_branch)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if "--config" in argv:
        idx = argv.index("--config")
        defaults = _load_config(argv[idx + 1])
        for action in parser._subparsers._group_actions[0].choices.values():
            known = {a.dest for a in action._actions}
            action.set_defaults(**{k: v for k, v in defaults.items()
                                   if k in known})
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        report = args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.command != "classify" and args.command != "dispersion":
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        print()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
