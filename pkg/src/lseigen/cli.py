"""Command-line front end.

Subcommands::

    lseigen scan      energy scan and eigenvalue detection
    lseigen engineer  choose a potential parameter so a target is an eigenvalue
    lseigen dk        singular potentials through a regularizing coordinate map
    lseigen oracle    finite-difference reference spectrum
    lseigen psi       dump one LS solution

Any flag can also come from ``--config FILE`` (``key=value`` per line, ``#``
comments); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import logging
import os
import shlex
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .duru_kleinert import PseudoEnergyProblem, cutoff_sensitivity, solve_pseudo
from .engineering import find_parameters
from .kernel import BRANCHES
from .oracle import build_fd_hamiltonian, eigenvalues_in, lowest_eigenvalues
from .potentials import SingularPointError
from .presets import PRESETS, default_grid, expression_potential, make_potential
from .records import (
    PARAM_HEADER,
    PSEUDO_HEADER,
    PSI_HEADER,
    SCAN_HEADER,
    eigenvalue_record,
    record,
    scan_rows,
    write_csv,
)
from .scanner import Tolerances, full_spectrum
from .solver import SolveFailure, make_incoming, select_incoming, solve_ls

log = logging.getLogger("lseigen")


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return lo, hi


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file with defaults for any flag")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads for sampling")
    p.add_argument("--records", help="also write result records to this file")
    p.add_argument("-v", "--verbose", action="store_true")


def _add_potential(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--potential", default=None, help="built-in potential name")
    g.add_argument("--expr", help="potential U(x) as an expression in x")
    p.add_argument("--finite-depth", action="store_true", help="treat --expr as a finite-depth well")
    p.add_argument("--a", type=float, help="coefficient (power law, engineered well)")
    p.add_argument("--n", type=int, help="power-law exponent")
    p.add_argument("--skew", type=float, help="cubic term of the double well")
    p.add_argument("--U0", type=float, dest="depth", help="depth of the cosh well")
    p.add_argument("--alpha", type=float, help="inverse-power order")
    p.add_argument("--beta", type=float, help="inverse-power strength")
    p.add_argument("--gamma", type=float, help="exponent of the engineered well")


def _add_grid(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-points", type=int, help="grid points (default depends on the potential)")
    p.add_argument("--box", type=float, help="half-width of the box")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lseigen", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="energy scan and eigenvalue detection")
    _add_potential(p)
    _add_grid(p)
    p.add_argument("--parity", choices=("even", "odd", "both"), default="both")
    p.add_argument("--emin", type=float)
    p.add_argument("--emax", type=float)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--tol-match", type=float)
    p.add_argument("--tol-stat", type=float)
    p.add_argument("--tol-eig", type=float, help="bound on ||(H - eps) psi|| / ||psi|| at an accepted level")
    p.add_argument("--delta-e", type=float, help="spacing of the centered E-derivative")
    p.add_argument("--kernel-branch", choices=BRANCHES, default="decaying")
    p.add_argument("--incoming", choices=("auto", "laplace", "decaying"), default="auto")
    p.add_argument("--csv", help="scan curve CSV; with both parities _even/_odd is appended")
    p.add_argument("--compare-oracle", action="store_true", help="report finite-difference levels alongside")
    _add_common(p)

    p = sub.add_parser("engineer", help="parameter search for a target eigenvalue")
    p.add_argument("--target", type=float, default=-3.0)
    p.add_argument("--param", choices=("a", "gamma"), required=True)
    p.add_argument("--fixed-a", type=float, default=1.5)
    p.add_argument("--fixed-gamma", type=float, default=2.0)
    p.add_argument("--range", type=_range, required=True, help="LO:HI of the scanned parameter")
    p.add_argument("--steps", type=int, default=150)
    p.add_argument("--verify-tol", type=float, default=2e-2)
    _add_grid(p)
    p.add_argument("--csv", help="beta,epsilon curve")
    _add_common(p)

    p = sub.add_parser("dk", help="singular potentials via a regularizing map")
    p.add_argument("--map", choices=("coulomb", "exp"), default="coulomb")
    p.add_argument("--variant", choices=("corrected", "printed"), default="corrected")
    p.add_argument("--alpha", type=float, default=3.0)
    p.add_argument("--beta", type=float, default=5.0)
    p.add_argument("--omega", type=_range, default=(0.01, 0.5), help="LO:HI of omega = -E")
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--L-y", type=float, default=8.0, dest="L_y", help="half-width of the y box")
    p.add_argument("--hy", type=float, default=0.02, help="y spacing")
    p.add_argument("--parity", choices=("even", "odd", "both"), default="both")
    p.add_argument("--sensitivity", type=_float_list, help="comma-separated L_y values for a cutoff table")
    p.add_argument("--csv", help="omega,epsilon curve; with both parities _even/_odd is appended")
    _add_common(p)

    p = sub.add_parser("oracle", help="finite-difference reference spectrum")
    _add_potential(p)
    _add_grid(p)
    p.add_argument("--k", type=int, default=6, help="number of lowest levels")
    p.add_argument("--emin", type=float, help="with --emax: all levels in the window instead")
    p.add_argument("--emax", type=float)
    _add_common(p)

    p = sub.add_parser("psi", help="write one LS solution as x,psi")
    _add_potential(p)
    _add_grid(p)
    p.add_argument("--energy", type=float, required=True)
    p.add_argument("--parity", choices=("even", "odd"), default="even")
    p.add_argument("--kernel-branch", choices=BRANCHES, default="decaying")
    p.add_argument("--incoming", choices=("auto", "laplace", "decaying"), default="auto")
    p.add_argument("--csv", required=True)
    _add_common(p)
    return parser


def _config_argv(path: str, subparser: argparse.ArgumentParser) -> list[str]:
    """Turn ``key=value`` lines into flags understood by ``subparser``."""
    flags = {}
    for action in subparser._actions:
        for opt in action.option_strings:
            flags[opt] = action
    out = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        opt = "--" + key.replace("_", "-")
        if opt not in flags and "--" + key in flags:
            opt = "--" + key
        if not sep or opt not in flags or opt == "--config":
            raise ValueError(f"{path}:{lineno}: unknown config entry {raw.strip()!r}")
        action = flags[opt]
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                out.append(opt)
            elif value.lower() not in ("0", "false", "no", "off"):
                raise ValueError(f"{path}:{lineno}: {key} expects true/false")
        else:
            out.extend([opt, value])
    return out


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        try:
            extra = _config_argv(args.config, sub)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        i = argv.index(args.command)
        args = parser.parse_args(argv[: i + 1] + extra + argv[i + 1 :])
    return args


def _potential_from(args):
    if args.expr:
        return expression_potential(args.expr, args.finite_depth)
    name = args.potential or "harmonic"
    params = {k: getattr(args, k) for k in ("a", "n", "skew", "depth", "alpha", "beta", "gamma")}
    used = {"harmonic": ("a",), "quartic": ("a",), "power": ("n", "a"), "doublewell": ("skew",), "skew": ("skew",),
            "cosh": ("depth",), "coulomb": (), "hydrogen": (), "inverse-power": ("alpha", "beta"),
            "engineered": ("a", "gamma")}.get(name, ())
    stray = [k for k, v in params.items() if v is not None and k not in used]
    if stray:
        raise ValueError(f"potential {name!r} does not take {', '.join('--' + ('U0' if k == 'depth' else k) for k in stray)}")
    return make_potential(name, **{k: params[k] for k in used})


def _grid_for(args, potential):
    return default_grid(potential, args.n_points, args.box)


def _meta(args, argv, **extra) -> dict:
    meta = {"program": f"lseigen {__version__}", "argv": shlex.join(argv)}
    for key, value in sorted(vars(args).items()):
        if key not in ("verbose",) and value is not None:
            meta[f"arg.{key}"] = value
    meta.update(extra)
    return meta


def _parity_path(path: str, parity: str, both: bool) -> str:
    if not both:
        return path
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{parity}{p.suffix or '.csv'}"))


class _Out:
    """Collects result lines for stdout and the optional records file."""

    def __init__(self, meta: dict):
        self.meta = meta
        self.lines: list[str] = []

    def __call__(self, line: str) -> None:
        self.lines.append(line)
        print(line)

    def save(self, path: str | None) -> None:
        if path:
            head = [f"# {k}={v}" for k, v in self.meta.items()]
            Path(path).write_text("\n".join(head + self.lines) + "\n")


def cmd_scan(args, argv) -> int:
    pot = _potential_from(args)
    grid = _grid_for(args, pot)
    preset = PRESETS.get(args.potential or "") if not args.expr else None
    emin = args.emin if args.emin is not None else (preset.window[0] if preset else None)
    emax = args.emax if args.emax is not None else (preset.window[1] if preset else None)
    if emin is None or emax is None:
        raise ValueError("--emin and --emax are required for this potential")
    parities = ("even", "odd") if args.parity == "both" else (args.parity,)
    meta = _meta(args, argv, grid=grid.describe(), potential=pot.describe())
    out = _Out(meta)
    scans: list = []
    diagnostics: list = []
    evs = full_spectrum(
        grid, pot, (emin, emax), args.steps, Tolerances(args.tol_match, args.tol_stat, eig=args.tol_eig),
        parities=parities, incoming_mode=args.incoming, branch=args.kernel_branch,
        threads=args.threads, delta_e=args.delta_e, diagnostics=diagnostics, scans=scans,
    )
    if args.csv:
        for scan in scans:
            write_csv(_parity_path(args.csv, scan.parity, len(scans) > 1), SCAN_HEADER, scan_rows(scan),
                      {**meta, "parity": scan.parity, "incoming": scan.incoming.value, "step": scan.step,
                       "delta_e": scan.delta_e if scan.delta_e is not None else "max(1e-4,1e-4|E|)"})
    for ev in evs:
        out(eigenvalue_record(ev))
    bare = [d for d in diagnostics if d.reason == "crossing-without-stationarity"]
    out(f"# {len(evs)} eigenvalue(s); {len(bare)} line crossing(s) rejected for lack of stationarity")
    for d in diagnostics:
        log.info("rejected %s", record(energy=d.energy, parity=d.parity, reason=d.reason, residual=d.residual))
    if args.compare_oracle:
        fd = eigenvalues_in(build_fd_hamiltonian(grid, pot), emin, emax)
        out(f"# finite-difference levels in [{emin}, {emax}]: {len(fd)}")
        for lvl in fd:
            near = [ev for ev in evs if abs(ev.energy - lvl) <= 0.05]
            diff = min((ev.energy - lvl for ev in near), key=abs) if near else float("nan")
            out(record(oracle=lvl, ls_minus_oracle=diff, matched=bool(near)))
    out.save(args.records)
    return 0


def cmd_engineer(args, argv) -> int:
    lo, hi = args.range
    meta = _meta(args, argv)
    out = _Out(meta)
    if lo == hi:
        out(f"# empty parameter range {lo}:{hi}: no crossings")
        out.save(args.records)
        return 0
    fixed = args.fixed_gamma if args.param == "a" else args.fixed_a
    pot = make_potential("engineered", a=1.5, gamma=2.0)
    grid = _grid_for(args, pot)
    meta["grid"] = grid.describe()
    res = find_parameters(args.target, args.param, fixed, (lo, hi), args.steps, grid,
                          verify_tol=args.verify_tol, threads=args.threads)
    if args.csv:
        rows = zip(res.curve.betas.tolist(), res.curve.epsilons.tolist())
        write_csv(args.csv, PARAM_HEADER, rows, {**meta, "param": args.param, "fixed": fixed})
    for hit in res.hits:
        out(record(param=hit.param, value=hit.value, crossing_from_above=hit.crossing_from_above,
                   cross_check_passed=hit.cross_check_passed, achieved_energy=hit.achieved_energy,
                   slope=hit.slope, stationarity=hit.stationarity))
    for hit in res.rejected_cross_check:
        out("# failed cross-check: " + record(param=hit.param, value=hit.value, achieved_energy=hit.achieved_energy))
    if not res.hits:
        out("# no crossings from above pass the forward check")
    out(f"# {len(res.hits)} hit(s); {res.upward_count} upward crossing(s) rejected")
    out.save(args.records)
    return 0


def cmd_dk(args, argv) -> int:
    problem = PseudoEnergyProblem(args.map, args.variant, args.alpha, args.beta)
    grid = problem.default_grid(args.L_y, args.hy)
    parities = ("even", "odd") if args.parity == "both" else (args.parity,)
    meta = _meta(args, argv, problem=problem.describe(), grid=grid.describe())
    out = _Out(meta)
    curves: list = []
    hits = solve_pseudo(problem, grid, args.omega, args.steps, parities=parities, threads=args.threads, curves=curves)
    if args.csv:
        for c in curves:
            rows = zip(c.omegas.tolist(), c.epsilons.tolist(), c.ok.tolist())
            write_csv(_parity_path(args.csv, c.parity, len(curves) > 1), PSEUDO_HEADER, rows, {**meta, "parity": c.parity})
    for hit in hits:
        out(record(omega=hit.omega, energy=hit.energy, parity=hit.parity, residual=hit.residual,
                   stationarity=hit.stationarity, cross_check_passed=hit.cross_check_passed))
    if not hits:
        out("# no crossings in the omega window")
    out(f"# L_y={args.L_y} hy={args.hy}")
    if args.sensitivity:
        for L, energies in cutoff_sensitivity(problem, args.omega, args.sensitivity, h=args.hy,
                                              steps=args.steps, parities=parities, threads=args.threads):
            out(record(L_y=L, energies=",".join("%.17g" % e for e in energies) or "none"))
    out.save(args.records)
    return 0


def cmd_oracle(args, argv) -> int:
    pot = _potential_from(args)
    grid = _grid_for(args, pot)
    H = build_fd_hamiltonian(grid, pot)
    out = _Out(_meta(args, argv, grid=grid.describe(), potential=pot.describe()))
    if args.emin is not None and args.emax is not None:
        levels = eigenvalues_in(H, args.emin, args.emax)
    else:
        levels = lowest_eigenvalues(H, args.k)
    for lvl in levels:
        out(record(energy=lvl, parity="n/a", residual=0.0, stationarity=0.0))
    out.save(args.records)
    return 0


def cmd_psi(args, argv) -> int:
    pot = _potential_from(args)
    grid = _grid_for(args, pot)
    inc = make_incoming(select_incoming(pot, args.parity, args.incoming), grid)
    wf = solve_ls(grid, pot, args.energy, inc, branch=args.kernel_branch)
    meta = _meta(args, argv, grid=grid.describe(), potential=pot.describe(), rcond=wf.rcond, residual=wf.residual)
    write_csv(args.csv, PSI_HEADER, zip(grid.points.tolist(), wf.psi.tolist()), meta)
    print(record(energy=wf.energy, parity=wf.parity, rcond=wf.rcond, residual=wf.residual,
                 norm=float(np.linalg.norm(wf.psi))))
    return 0


COMMANDS = {"scan": cmd_scan, "engineer": cmd_engineer, "dk": cmd_dk, "oracle": cmd_oracle, "psi": cmd_psi}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "threads", 1) < 1:
        print("lseigen: error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args, argv)
    except (ValueError, SingularPointError, SolveFailure, OSError) as exc:
        print(f"lseigen: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
