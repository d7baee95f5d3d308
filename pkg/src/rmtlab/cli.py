"""Command line front end.

Subcommands: eqm (equilibrium solve + classification), kernel (universal
kernel tables), oppoly (recurrence tables and finite-n kernels), converge
(rescaled-kernel vs universal-kernel error tables over n), rh (parametrix
diagnostics), sample (Monte Carlo batches, histograms, spacings).

Conventions: grids are lo:hi:count, potentials are comma-separated
ascending coefficients.  Exit codes: 0 success, 2 validation error,
3 numerical non-convergence.  Every output file starts with a header
block carrying the resolved configuration; the timestamp sits on its own
line so that repeated runs differ in exactly that line.  The environment
variable RMTLAB_CACHE names a directory for recurrence-table caching.
"""

from __future__ import annotations

import argparse
import json

import os
import sys
import time

import numpy as np

from . import __version__
from . import equilibrium as eqm
from . import kernels as kr
from . import mc
from . import orthopoly as op
from . import rh
from .equilibrium import MultiCutError, NonConvergenceError, Potential

__all__ = ["main", "run"]


class ValidationError(ValueError):
    pass


def _parse_grid(text):
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError as exc:
        raise ValidationError(f"bad grid {text!r}, expected lo:hi:count") from exc
    if count < 2 or not hi > lo:
        raise ValidationError(f"bad grid {text!r}: need hi > lo and count >= 2")
    return np.linspace(lo, hi, count)


def _parse_potential(args):
    try:
        coeffs = tuple(float(v) for v in args.potential.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad potential {args.potential!r}") from exc
    try:
        return Potential(coeffs, hard_edge=getattr(args, "hard_edge", False),
                         singularity_alpha=getattr(args, "alpha", 0.0) or 0.0)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def _parse_ns(text):
    try:
        return [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise ValidationError(f"bad n list {text!r}") from exc


def _header_lines(config):
    lines = [f"# rmtlab {__version__}",
             f"# timestamp = {time.strftime('%Y-%m-%dT%H:%M:%S')}"]
    for key in sorted(config):
        lines.append(f"# {key} = {config[key]}")
    return lines


def _write_csv(path, config, columns, rows):
    text = "\n".join(_header_lines(config)) + "\n"
    text += ",".join(columns) + "\n"
    for row in rows:
        text += ",".join(repr(float(v)) if isinstance(v, float) else str(v)
                         for v in row) + "\n"
    with open(path, "w") as fh:
        fh.write(text)


def _write_json(path, config, results, diagnostics):
    diagnostics = dict(diagnostics)
    diagnostics["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    obj = {"config": config, "results": results, "diagnostics": diagnostics}
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _config_dict(args, keys):
    out = {"command": args.command, "version": __version__}
    for k in keys:
        out[k] = getattr(args, k)
    return out


# ---------------------------------------------------------------------------
# subcommands

def _cmd_eqm(args):
    pot = _parse_potential(args)
    config = _config_dict(args, ["potential", "hard_edge", "alpha", "out", "format"])
    mu = eqm.solve_equilibrium(pot)
    cls = eqm.classify(mu, pot)
    results = {
        "support": [mu.support[0], mu.support[1]],
        "h": [float(v) for v in mu.h],
        "moments": [float(v) for v in mu.moments],
        "ell": mu.ell,
        "classification": [
            {"location": loc, "kind": kind, "k": int(k)} for loc, kind, k in cls],
        "record": mu.to_text(),
    }
    diag = {"iterations": mu.iterations, "residual": mu.residual}
    if args.format == "json":
        _write_json(args.out, config, results, diag)
    else:
        rows = [("a", mu.support[0]), ("b", mu.support[1]), ("ell", mu.ell)]
        rows += [(f"h{k}", float(v)) for k, v in enumerate(mu.h)]
        rows += [(f"m{k}", float(v)) for k, v in enumerate(mu.moments)]
        _write_csv(args.out, config, ["quantity", "value"], rows)
    return 0


def _kernel_handle(args):
    try:
        return kr.KernelHandle(args.family, alpha=args.alpha, s=args.s)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def _cmd_kernel(args):
    handle = _kernel_handle(args)
    grid = _parse_grid(args.grid)
    config = _config_dict(args, ["family", "alpha", "s", "grid", "out"])
    rows = []
    if handle.arity == "scalar":
        cols = ["x", "y", "value"]
        for x in grid:
            for y in grid:
                rows.append((float(x), float(y), float(handle.evaluate(x, y))))
    else:
        cols = ["x", "y", "k11", "k12", "k21", "k22"]
        for x in grid:
            for y in grid:
                k = handle.evaluate(x, y)
                rows.append((float(x), float(y), float(k[0, 0]), float(k[0, 1]),
                             float(k[1, 0]), float(k[1, 1])))
    _write_csv(args.out, config, cols, rows)
    return 0


def _cmd_oppoly(args):
    pot = _parse_potential(args)
    w = op.WeightSpec(pot, N=args.N, truncation=args.truncation)
    table = op.recurrence_table(w, args.nmax)
    config = _config_dict(args, ["potential", "hard_edge", "alpha", "N",
                                 "nmax", "out"])
    rows = [(k, float(table.a[k - 1]) if k >= 1 else 0.0, float(table.b[k]),
             float(table.gamma_sq[k])) for k in range(args.nmax + 1)]
    _write_csv(args.out, config, ["k", "a", "b", "gamma_sq"], rows)
    if args.kernel_out:
        if not args.kernel_n or not args.kernel_grid:
            raise ValidationError("--kernel-out needs --kernel-n and --kernel-grid")
        grid = _parse_grid(args.kernel_grid)
        kmat = op.cd_kernel_grid(table, w, args.kernel_n, grid, grid)
        rows = [(float(x), float(y), float(kmat[i, j]))
                for i, x in enumerate(grid) for j, y in enumerate(grid)]
        _write_csv(args.kernel_out, config, ["x", "y", "value"], rows)
    return 0


_CONVERGE_DEFAULTS = {
    "bulk": "-2:2:41",
    "edge": "-4:4:33",
    "hard": "0.4:8:20",
    "origin": "0.15:3:20",
}


def _converge_one(pot, mode, n, grid, alpha, want_grid=False):
    start = time.perf_counter()
    w = op.WeightSpec(pot, N=n)
    table = op.recurrence_table(w, n)
    mu = eqm.solve_equilibrium(pot)
    if mode == "bulk":
        win = op.bulk_window(mu, 0.0, grid)
        ref = np.array([[kr.sine_kernel(u, v) for v in grid] for u in grid])
    elif mode == "edge":
        win = op.soft_edge_window(mu, grid)
        ref = np.array([[kr.airy_kernel(u, v) for v in grid] for u in grid])
    elif mode == "hard":
        win = op.hard_edge_window(mu, grid)
        ref = np.array([[kr.bessel_hard_kernel(alpha, u, v) for v in grid]
                        for u in grid])
    else:
        win = op.origin_window(mu, grid)
        ref = np.array([[kr.bessel_origin_kernel(alpha, u, v) for v in grid]
                        for u in grid])
    got = op.rescaled_kernel(table, w, n, win)
    diff = np.abs(got - ref)
    span = grid[-1] - grid[0]
    sup = float(diff.max())
    l1 = float(diff.mean() * span * span)
    row = (n, mode, sup, l1, time.perf_counter() - start)
    return (row, got, ref) if want_grid else row


def _converge_one_star(a):
    return _converge_one(*a)


def _cmd_converge(args):
    pot = _parse_potential(args)
    ns = _parse_ns(args.n)
    if args.mode in ("hard", "origin") and not pot.hard_edge and args.mode == "hard":
        raise ValidationError("hard mode needs --hard-edge")
    grid = _parse_grid(args.grid or _CONVERGE_DEFAULTS[args.mode])
    alpha = args.alpha or 0.0
    config = _config_dict(args, ["potential", "hard_edge", "alpha", "mode",
                                 "n", "grid", "workers", "out", "grid_out"])
    tasks = [(pot, args.mode, n, grid, alpha) for n in ns]
    if args.workers > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_converge_one_star, tasks))
    else:
        rows = [_converge_one(*t) for t in tasks]
    rows.sort(key=lambda r: r[0])
    _write_csv(args.out, config,
               ["n", "mode", "sup_error", "l1_error", "runtime_seconds"], rows)
    if args.grid_out:
        # rescaled-kernel grid of the largest n, next to the universal target
        _, got, ref = _converge_one(pot, args.mode, max(ns), grid, alpha,
                                    want_grid=True)
        grows = [(float(u), float(v), float(got[i, j]), float(ref[i, j]))
                 for i, u in enumerate(grid) for j, v in enumerate(grid)]
        _write_csv(args.grid_out, config,
                   ["u", "v", "value", "universal_value"], grows)
    return 0


def _cmd_rh(args):
    pot = _parse_potential(args)
    ns = _parse_ns(args.n)
    mu = eqm.solve_equilibrium(pot)
    config = _config_dict(args, ["potential", "n", "delta", "out"])
    rows = []
    ctx0 = rh.DescentContext(mu, n=ns[0], delta=args.delta)
    rng = np.random.default_rng(0)
    for _ in range(6):
        z = complex(rng.uniform(-4, 4), rng.uniform(0.2, 3.0))
        rows.append(("det_M_minus_1", repr(z),
                     abs(np.linalg.det(rh.outer_parametrix(ctx0, z)) - 1.0)))
    for _ in range(6):
        z = complex(rng.uniform(-4, 4), rng.uniform(0.2, 4.0))
        try:
            rows.append(("det_A_minus_1", repr(z),
                         abs(np.linalg.det(rh.airy_model(z)) - 1.0)))
        except ValueError:
            continue
    w3 = np.exp(2j * np.pi / 3.0)
    for _ in range(6):
        z = complex(rng.uniform(-6, 6), rng.uniform(-6, 6))
        from .specfun import airy

        y0 = airy(z).value
        y1 = w3 * airy(w3 * z).value
        y2 = w3 * w3 * airy(w3 * w3 * z).value
        m = max(abs(y0), abs(y1), abs(y2))
        rows.append(("connection_identity", repr(z), abs(y0 + y1 + y2) / m))
    for name, theta, sgn in [("0", 0.0, 1.0), ("2pi/3", 2 * np.pi / 3, -1.0),
                             ("-2pi/3", -2 * np.pi / 3, -1.0)]:
        for r in (0.9, 2.1):
            eps = 1e-9
            ap = rh.airy_model(r * np.exp(1j * (theta + sgn * eps)))
            am = rh.airy_model(r * np.exp(1j * (theta - sgn * eps)))
            resid = np.abs(ap - am @ rh.AIRY_JUMPS[name]).max()
            rows.append((f"A_jump_{name}", repr(r), resid / max(1.0, np.abs(ap).max())))
    for r in (0.9, 2.1):
        eps = 1e-9
        ap = rh.airy_model(r * np.exp(1j * (np.pi - eps)))
        am = rh.airy_model(r * np.exp(-1j * (np.pi - eps)))
        resid = np.abs(ap - am @ rh.AIRY_JUMPS["pi"]).max()
        rows.append(("A_jump_pi", repr(r), resid / max(1.0, np.abs(ap).max())))
    b = mu.support[1]
    for n in ns:
        ctx = rh.DescentContext(mu, n=n, delta=args.delta)
        sup = 0.0
        for t in np.linspace(0, 2 * np.pi, 32, endpoint=False):
            z = b + args.delta * np.exp(1j * t)
            p = rh.local_parametrix(ctx, z)
            m = rh.outer_parametrix(ctx, z)
            sup = max(sup, float(np.abs(p @ np.linalg.inv(m) - np.eye(2)).max()))
        rows.append(("matching_sup", n, sup))
    a_inf, b_inf = rh.asymptotic_recurrence(ctx0)
    rows.append(("a_inf", "", a_inf))
    rows.append(("b_inf", "", b_inf))
    _write_csv(args.out, config, ["check", "param", "value"], rows)
    return 0


def _cmd_sample(args):
    config = _config_dict(args, ["beta", "n", "N", "count", "seed", "steps",
                                 "metropolis", "potential", "bins", "range",
                                 "window", "workers", "out"])
    if args.metropolis:
        if not args.potential:
            raise ValidationError("--metropolis needs --potential")
        pot = _parse_potential(args)
        batch = mc.sample_invariant(pot, args.beta, args.n, args.N or args.n,
                                    args.count, args.steps, args.seed,
                                    workers=args.workers)
    else:
        batch = mc.sample_gaussian(args.beta, args.n, args.count, args.seed,
                                   workers=args.workers)
    with open(args.out, "wb") as fh:
        fh.write(batch.to_bytes())
    base = args.out.rsplit(".", 1)[0]
    if args.csv:
        with open(base + ".csv", "w") as fh:
            fh.write("\n".join(_header_lines(config)) + "\n" + batch.to_csv())
    lo, hi, _ = (float(v) for v in args.range.split(":"))
    hist = mc.empirical_density(batch, args.bins, (lo, hi))
    with open(base + "_hist.csv", "w") as fh:
        fh.write("\n".join(_header_lines(config)) + "\n" + hist.to_csv())
    if args.window:
        x0, half, dens = (float(v) for v in args.window.split(":"))
        spac = mc.local_statistics(batch, (x0, half, dens))
        rows = [(float(s),) for s in spac]
        _write_csv(base + "_spacing.csv", config, ["unfolded_spacing"], rows)
    return 0


# ---------------------------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(
        prog="rmtlab",
        description="random-matrix universality laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--out", required=True, help="output file")
        sp.add_argument("--workers", type=int,
                        default=min(4, os.cpu_count() or 1),
                        help="parallelism cap (results are worker-independent)")

    sp = sub.add_parser("eqm", help="solve an equilibrium measure")
    sp.add_argument("--potential", required=True,
                    help="ascending comma-separated coefficients, e.g. 0,0,0.5")
    sp.add_argument("--hard-edge", dest="hard_edge", action="store_true")
    sp.add_argument("--alpha", type=float, default=0.0,
                    help="hard-edge / singularity exponent")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    add_common(sp)

    sp = sub.add_parser("kernel", help="tabulate a universal kernel")
    sp.add_argument("--family", required=True,
                    choices=["sine", "airy", "bessel_hard", "bessel_origin",
                             "pearcey", "sine_beta1", "sine_beta4",
                             "airy_beta1", "airy_beta4"])
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--s", type=float, default=None)
    sp.add_argument("--grid", required=True, help="lo:hi:count")
    add_common(sp)

    sp = sub.add_parser("oppoly", help="recurrence table and finite-n kernel")
    sp.add_argument("--potential", required=True)
    sp.add_argument("--hard-edge", dest="hard_edge", action="store_true")
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--truncation", type=float, default=None)
    sp.add_argument("--kernel-n", dest="kernel_n", type=int, default=None)
    sp.add_argument("--kernel-grid", dest="kernel_grid", default=None)
    sp.add_argument("--kernel-out", dest="kernel_out", default=None)
    add_common(sp)

    sp = sub.add_parser("converge",
                        help="rescaled-kernel vs universal-kernel errors")
    sp.add_argument("--potential", required=True)
    sp.add_argument("--hard-edge", dest="hard_edge", action="store_true")
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--mode", required=True,
                    choices=["bulk", "edge", "hard", "origin"])
    sp.add_argument("--n", required=True, help="comma list, e.g. 32,64,128")
    sp.add_argument("--grid", default=None, help="lo:hi:count")
    sp.add_argument("--grid-out", dest="grid_out", default=None,
                    help="also write the rescaled grid (u, v, value) at the largest n")
    add_common(sp)

    sp = sub.add_parser("rh", help="parametrix diagnostics")
    sp.add_argument("--potential", required=True)
    sp.add_argument("--n", required=True, help="comma list")
    sp.add_argument("--delta", type=float, default=0.1)
    add_common(sp)

    sp = sub.add_parser("sample", help="Monte Carlo eigenvalue batches")
    sp.add_argument("--beta", type=int, required=True, choices=[1, 2, 4])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--metropolis", action="store_true")
    sp.add_argument("--potential", default=None)
    sp.add_argument("--steps", type=int, default=400)
    sp.add_argument("--bins", type=int, default=25)
    sp.add_argument("--range", default="-2.125:2.125:0")
    sp.add_argument("--window", default=None, help="x0:half_width:density")
    sp.add_argument("--csv", action="store_true", help="also export raw CSV")
    add_common(sp)
    return p


_DISPATCH = {
    "eqm": _cmd_eqm,
    "kernel": _cmd_kernel,
    "oppoly": _cmd_oppoly,
    "converge": _cmd_converge,
    "rh": _cmd_rh,
    "sample": _cmd_sample,
}


def run(argv) -> int:
    """Parse argv and execute; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors
        return int(exc.code or 0)
    try:
        return _DISPATCH[args.command](args)
    except ValidationError as exc:
        print(f"rmtlab: {exc}", file=sys.stderr)
        return 2
    except (MultiCutError, NonConvergenceError, mc.AcceptanceRateError,
            ArithmeticError) as exc:
        print(f"rmtlab: numerical failure: {exc}", file=sys.stderr)
        return 3


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
