"""Command-line front end.

Subcommands:
  simulate    integrate the particle SDE ensemble and emit a density CSV
  fekete      solve for the log-gas equilibrium configuration (JSON)
  verify      run the built-in verification suites (JSON, exit 1 on failure)
  intertwine  coefficient table of the intertwined image of a monomial

Every output is accompanied by a JSON manifest sufficient to re-run the
command bit-identically.  Exit codes: 0 success, 1 verification failure,
2 usage error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from . import __version__, equilibrium, intertwine, orthopoly, sde, symfunc
from .rootsys import TYPE_A, TYPE_B, RootSystemConfig, gamma

DEFAULT_SEED = 20140313


def _make_config(args) -> RootSystemConfig:
    kind = TYPE_A if args.type == "A" else TYPE_B
    nu = getattr(args, "nu", None) if kind == TYPE_B else None
    beta = getattr(args, "beta", None)
    if beta is None:
        beta = 2.0
    return RootSystemConfig(kind=kind, n=args.n, beta=beta, nu=nu)


def _write_manifest(path, command, params, seed, duration):
    manifest = {
        "command": command,
        "parameters": params,
        "seed": seed,
        "artifact_version": __version__,
        "wall_clock_seconds": duration,
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_bins(spec):
    try:
        lo, hi, width = (float(p) for p in spec.split(":"))
    except ValueError:
        raise SystemExit(2)
    if width <= 0 or lo >= hi:
        print("error: --bins needs lo < hi and width > 0", file=sys.stderr)
        raise SystemExit(2)
    return lo, hi, width


def cmd_simulate(args) -> int:
    t0 = time.time()
    cfg = _make_config(args)
    if args.init:
        init = tuple(float(p) for p in args.init.split(","))
    elif cfg.kind == TYPE_A:
        init = tuple(1e-2 * (i - (cfg.n - 1) / 2.0) for i in range(cfg.n))
    else:
        init = tuple(1e-2 * i for i in range(1, cfg.n + 1))
    plan = sde.SimPlan(cfg=cfg, dt=args.dt, t_final=args.t,
                       n_paths=args.paths, seed=args.seed, initial=init)
    if args.scale == "beta_t":
        scale = math.sqrt(cfg.beta * args.t)
    elif args.scale == "beta_nu_t":
        if cfg.nu is None:
            print("error: --scale beta_nu_t requires --type B", file=sys.stderr)
            return 2
        scale = math.sqrt(cfg.beta * cfg.nu * args.t)
    else:
        scale = 1.0
    lo, hi, width = _parse_bins(args.bins)
    finals = sde.simulate_paths(plan)
    hist = sde.scaled_histogram(finals, scale, lo, hi, width)
    dens = hist.density(plan.n_paths)
    edges = hist.edges()
    exact_col = None
    if args.exact and cfg.beta == 2.0:
        mids = 0.5 * (edges[:-1] + edges[1:]) * scale
        if cfg.kind == TYPE_A:
            exact_col = orthopoly.density_a_exact(cfg.n, args.t, mids) * scale
        else:
            safe = np.maximum(np.abs(mids), 1e-300)
            exact_col = np.where(
                mids > 0, orthopoly.density_b_exact(cfg.n, cfg.nu, args.t, safe) * scale, 0.0
            )
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_left", "bin_right", "density", "exact"])
        for k in range(hist.n_bins):
            row = [f"{edges[k]:.10g}", f"{edges[k + 1]:.10g}", f"{dens[k]:.10g}"]
            row.append(f"{exact_col[k]:.10g}" if exact_col is not None else "")
            writer.writerow(row)
    _write_manifest(args.out + ".manifest.json", "simulate", {
        "type": args.type, "n": args.n, "beta": cfg.beta, "nu": cfg.nu,
        "t": args.t, "dt": args.dt, "paths": args.paths, "init": list(init),
        "scale": args.scale, "bins": args.bins, "exact": bool(args.exact),
        "out": args.out,
    }, args.seed, time.time() - t0)
    return 0


def cmd_fekete(args) -> int:
    t0 = time.time()
    cfg = _make_config(args)
    try:
        report = equilibrium.peak_set(cfg)
    except (RuntimeError, ArithmeticError) as exc:
        print(f"error: equilibrium solver failed: {exc}", file=sys.stderr)
        return 3
    if cfg.kind == TYPE_A:
        oracle = orthopoly.hermite_zeros(cfg.n).zeros
        delta = float(np.max(np.abs(report.minimizer - oracle)))
    else:
        oracle = np.sqrt(orthopoly.laguerre_zeros(cfg.n, cfg.nu - 0.5).zeros)
        delta = float(np.max(np.abs(report.minimizer - oracle)))
    payload = {
        "minimizer": report.minimizer.tolist(),
        "potential_at_min": report.potential_at_min,
        "freezing_constant": report.freezing_constant,
        "identity_residuals": report.identity_residuals,
        "newton_iterations": report.newton_iterations,
        "polynomial_zero_oracle": oracle.tolist(),
        "oracle_max_delta": delta,
        "gamma": gamma(cfg),
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _write_manifest(args.out + ".manifest.json", "fekete", {
            "type": args.type, "n": args.n, "nu": cfg.nu, "out": args.out,
        }, None, time.time() - t0)
    else:
        sys.stdout.write(text)
    return 0


def _suite_freezing(seed):
    checks = []
    for kind, nus in ((TYPE_A, [None]), (TYPE_B, [0.5, 1.0])):
        for nu in nus:
            for n in range(1, 9):
                cfg = RootSystemConfig(kind=kind, n=n, beta=2.0, nu=nu)
                rep = equilibrium.peak_set(cfg)
                res = max(rep.identity_residuals["potential_minus_constant"],
                          rep.identity_residuals["sq_norm_minus_gamma"])
                checks.append({
                    "name": f"freezing_{kind}_n{n}" + (f"_nu{nu}" if nu else ""),
                    "residual": res, "passed": res <= 1e-9,
                })
    return checks


def _suite_fke(seed):
    rng = np.random.default_rng(seed)
    checks = []
    for kind, nu in ((TYPE_A, None), (TYPE_B, 0.5)):
        cfg = RootSystemConfig(kind=kind, n=3, beta=2.0, nu=nu)
        fn = lambda v, c=cfg: equilibrium.steady_state_logdensity(c, v)  # noqa: E731
        done = 0
        while done < 10:
            v = np.sort(rng.uniform(0.3 if kind == TYPE_B else -2.0, 2.0, size=3))
            if np.min(np.diff(v)) < 0.05:
                continue
            r = equilibrium.fke_residual(cfg, fn, v)
            rel = float(abs(r.value)) / float(r.term_scale)
            checks.append({"name": f"fke_{kind}_{done}", "residual": rel,
                           "passed": bool(rel <= 1e-4)})
            done += 1
    return checks


def _suite_kernel(seed, paths):
    checks = []
    for n in (1, 2):
        cfg = RootSystemConfig(kind=TYPE_A, n=n, beta=2.0)
        y = np.linspace(0.2, 0.5, n)
        z = np.linspace(-0.4, 0.1, n)
        lhs, rhs, se = intertwine.kernel_reproducing_check(
            cfg, y, z, n_samples=paths, max_degree=24, seed=seed + n)
        zscore = abs(lhs - rhs) / se
        checks.append({"name": f"kernel_reproducing_A_n{n}", "z": zscore,
                       "passed": zscore <= 3.0})
    return checks


def _suite_jack(seed):
    rng = np.random.default_rng(seed)
    checks = []
    for lam in [(2,), (2, 1), (3, 1), (2, 2)]:
        x = rng.uniform(0.5, 1.5, size=4)
        pj = symfunc.jack_eval(lam, 1.0, x)
        ps = symfunc.schur_eval(lam, x)
        rel = abs(pj - ps) / max(1.0, abs(ps))
        checks.append({"name": f"jack_schur_{lam}", "residual": rel,
                       "passed": rel <= 1e-9})
    return checks


def _suite_limits(seed):
    checks = []
    for lam in [(1,), (2,), (1, 1)]:
        fin = symfunc.jack_to_monomial(intertwine.v_a_on_monomial(lam, 3, 1e6))
        lim = intertwine.v_a_limit(lam, 3)
        keys = set(fin.coeffs) | set(lim.coeffs)
        dist = max(abs(fin.coeffs.get(k, 0.0) - lim.coeffs.get(k, 0.0))
                   / max(abs(lim.coeffs.get(k, 0.0)), 1e-30) for k in keys)
        checks.append({"name": f"limit_A_{lam}", "residual": dist,
                       "passed": dist <= 1e-5})
    return checks


def cmd_verify(args) -> int:
    t0 = time.time()
    suites = {
        "freezing": lambda: _suite_freezing(args.seed),
        "fke": lambda: _suite_fke(args.seed),
        "kernel": lambda: _suite_kernel(args.seed, int(args.paths)),
        "jack": lambda: _suite_jack(args.seed),
        "limits": lambda: _suite_limits(args.seed),
    }
    selected = args.suite or list(suites)
    for name in selected:
        if name not in suites:
            print(f"error: unknown suite {name!r}", file=sys.stderr)
            return 2
    report = {}
    all_pass = True
    for name in selected:
        try:
            checks = suites[name]()
        except Exception as exc:  # numeric failure, not a verification failure
            print(f"error: suite {name} aborted: {exc}", file=sys.stderr)
            return 3
        report[name] = checks
        all_pass &= all(c["passed"] for c in checks)
    payload = {"suites": report, "all_passed": all_pass,
               "wall_clock_seconds": time.time() - t0}
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _write_manifest(args.out + ".manifest.json", "verify", {
            "suite": selected, "paths": args.paths,
        }, args.seed, time.time() - t0)
    else:
        sys.stdout.write(text)
    return 0 if all_pass else 1


def cmd_intertwine(args) -> int:
    lam = tuple(int(p) for p in args.lam.split(",")) if args.lam else ()
    cfg_kind = TYPE_A if args.type == "A" else TYPE_B
    try:
        if args.limit == "beta":
            poly = (intertwine.v_a_limit(lam, args.n) if cfg_kind == TYPE_A
                    else intertwine.v_b_limit_beta(lam, args.n, args.nu))
        elif args.limit == "nu":
            if cfg_kind == TYPE_A:
                print("error: the nu limit applies to type B only", file=sys.stderr)
                return 2
            poly = intertwine.v_b_limit_nu(lam, args.n, args.beta)
        elif cfg_kind == TYPE_A:
            poly = intertwine.v_a_on_monomial(lam, args.n, args.beta)
        else:
            poly = intertwine.v_b_on_monomial(lam, args.n, args.beta, args.nu)
        if args.basis == "monomial":
            poly = symfunc.jack_to_monomial(poly)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    payload = {
        "type": args.type, "lambda": list(lam), "n": args.n,
        "beta": args.beta, "nu": args.nu if cfg_kind == TYPE_B else None,
        "limit": args.limit, "basis": poly.basis,
        "jack_alpha": poly.alpha,
        "squared_variables": cfg_kind == TYPE_B,
        "coefficients": {",".join(map(str, k)) or "": v
                         for k, v in sorted(poly.coeffs.items(), reverse=True)},
    }
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dunkl-lab",
        description="numerical laboratory for radial Dunkl particle systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate the SDE ensemble")
    p.add_argument("--type", choices=["A", "B"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--nu", type=float, default=0.5)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--dt", type=float, default=2e-4)
    p.add_argument("--paths", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--init", type=str, default="")
    p.add_argument("--scale", choices=["beta_t", "beta_nu_t", "none"], default="beta_t")
    p.add_argument("--bins", type=str, default="-4:4:0.01",
                   help="lo:hi:width in the scaled variable")
    p.add_argument("--exact", action="store_true",
                   help="add the exact beta=2 density column")
    p.add_argument("--out", type=str, required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fekete", help="log-gas equilibrium configuration")
    p.add_argument("--type", choices=["A", "B"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nu", type=float, default=0.5)
    p.add_argument("--out", type=str, default="")
    p.set_defaults(func=cmd_fekete)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", action="append",
                   choices=["freezing", "fke", "kernel", "jack", "limits"])
    p.add_argument("--paths", type=float, default=2e5)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", type=str, default="")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("intertwine", help="intertwined image of a monomial")
    p.add_argument("--type", choices=["A", "B"], required=True)
    p.add_argument("--lambda", dest="lam", type=str, default="")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--nu", type=float, default=0.5)
    p.add_argument("--basis", choices=["jack", "monomial"], default="monomial")
    p.add_argument("--limit", choices=["none", "beta", "nu"], default="none")
    p.set_defaults(func=cmd_intertwine)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except SystemExit:
        raise
    except (ValueError, ZeroDivisionError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 3
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
