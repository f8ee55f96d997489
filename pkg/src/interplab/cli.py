"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 when any check fails,
2 on usage errors (unknown flags, unreadable inputs, malformed config).
Reports are JSON (with the run configuration, library version, and input
hashes embedded); grid dumps are CSV; --plot renders PNG figures next to
the delimited output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .acceptance import run_acceptance, summary_rows
from .bernstein import Rect, global_bernstein_report, local_bernstein_report, \
    unit_rescaled_poly
from .complexint import harmonic_side_mass, poisson_dominance_check, \
    weighted_residue_check
from .lagrange import lebesgue_integral, lebesgue_sup, lebesgue_values, scaled_weights
from .nodes import NodeSet, NodeSetError, chebyshev_nodes, equispaced_nodes, \
    perturbed_nodes, random_nodes, read_nodeset, write_nodeset
from .optimize import lower_bound_certificate, optimize_nodes
from .potential import amplitude_profile, arcsine_density, default_smoothing, \
    density_profile, potential_level
from .reporting import ConfigError, RunConfig, load_config, report_envelope, \
    resolve_workers, sha256_of, write_csv, write_json
from .trig import l1_norm, recip_deriv_sum, trial_battery, trig_lebesgue_quantities

USAGE_ERROR = 2
CHECK_FAILED = 1


def _emit(payload: dict, out: str | None) -> None:
    if out:
        write_json(out, payload)
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))


def _load_nodes(path: str) -> NodeSet:
    try:
        return read_nodeset(path)
    except (OSError, json.JSONDecodeError, NodeSetError) as exc:
        raise SystemExit(_usage(f"cannot load node set {path}: {exc}"))


def _usage(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return USAGE_ERROR


def _config_for(args, command: str) -> RunConfig:
    cfg = RunConfig(command=command, seed=getattr(args, "seed", 0) or 0,
                    output_path=getattr(args, "out", "") or "",
                    workers=getattr(args, "workers", 0) or 0)
    if getattr(args, "config", None):
        file_cfg = load_config(args.config)
        cfg.tolerances = file_cfg.tolerances
        cfg.grids = file_cfg.grids
        if not cfg.seed:
            cfg.seed = file_cfg.seed
        if not cfg.output_path:
            cfg.output_path = file_cfg.output_path
        if not cfg.workers:
            cfg.workers = file_cfg.workers
    return cfg


# -- subcommands -------------------------------------------------------------

def cmd_nodes(args) -> int:
    kind = args.kind
    if kind == "chebyshev":
        ns = chebyshev_nodes(args.n)
    elif kind == "equispaced":
        ns = equispaced_nodes(args.n)
    elif kind == "random":
        ns = random_nodes(args.n, args.seed)
    elif kind == "perturbed":
        if not args.base:
            return _usage("--kind perturbed needs --base NODES.json")
        base = _load_nodes(args.base)
        ns = perturbed_nodes(base, args.magnitude, args.seed)
    else:  # pragma: no cover - argparse restricts choices
        return _usage(f"unknown kind {kind}")
    if args.out:
        write_nodeset(ns, args.out)
    else:
        print(json.dumps(ns.to_json_dict(), indent=2))
    return 0


def cmd_lebesgue(args) -> int:
    ns = _load_nodes(args.nodes)
    cfg = _config_for(args, "lebesgue")
    interval = tuple(args.interval)
    results: dict = {"n": ns.n, "label": ns.label, "interval": list(interval)}
    if args.mode in ("sup", "both"):
        rep = lebesgue_sup(ns, interval, args.grid_per_gap)
        results["sup_value"] = rep.sup_value
        results["argmax"] = rep.argmax
        results["grid_points_per_gap"] = rep.grid_points_per_gap
    if args.mode in ("integral", "both"):
        rep = lebesgue_integral(ns, interval, args.quad_order)
        results["integral_value"] = rep.integral_value
        results["quadrature_order"] = rep.quadrature_order
    if args.csv or args.plot:
        xs = np.linspace(interval[0], interval[1], args.dump_points)
        lam = lebesgue_values(ns, xs, weights=scaled_weights(ns))
        if args.csv:
            write_csv(args.csv, ["x", "lambda"], [xs, lam])
            results["csv"] = args.csv
        if args.plot:
            from .plots import render_lebesgue
            png = str(Path(args.csv or args.out or "lebesgue.csv").with_suffix(".png"))
            bound = (2.0 / math.pi) * math.log(max(ns.n, 2)) + 0.521251
            results["figure"] = render_lebesgue(xs, lam, png, nodes=ns.xs,
                                                bound=bound)
    _emit(report_envelope(cfg, results, {"nodes": sha256_of(args.nodes)}), args.out)
    return 0


def cmd_potential(args) -> int:
    ns = _load_nodes(args.nodes)
    cfg = _config_for(args, "potential")
    interval = tuple(args.interval)
    eta = args.eta if args.eta > 0 else default_smoothing(ns.n)
    results: dict = {"n": ns.n, "label": ns.label, "interval": list(interval),
                     "level": potential_level(ns), "eta": eta}
    prefix = Path(args.csv_prefix) if args.csv_prefix else None
    if args.what in ("density", "both"):
        prof = density_profile(ns, interval, args.points, eta)
        results["density"] = prof.to_dict()
        if prefix:
            p = prefix.with_name(prefix.name + "-density.csv")
            write_csv(p, ["x", "value"], [prof.xs, prof.rho])
            results["density"]["csv"] = str(p)
        if args.plot and prefix:
            from .plots import render_profile
            inner = np.clip(prof.xs, -1 + 1e-9, 1 - 1e-9)
            results["density"]["figure"] = render_profile(
                prof.xs, prof.rho, prefix.with_name(prefix.name + "-density.png"),
                "node density", reference=(prof.xs, arcsine_density(inner),
                                           "arcsine"))
    if args.what in ("amplitude", "both"):
        step = args.grid_step if args.grid_step > 0 else ns.n ** (-args.beta) / 8
        prof = amplitude_profile(ns, interval, step, args.beta)
        results["amplitude"] = prof.to_dict()
        if prefix:
            p = prefix.with_name(prefix.name + "-amplitude.csv")
            write_csv(p, ["x", "value"], [prof.xs, prof.log_amp])
            results["amplitude"]["csv"] = str(p)
        if args.plot and prefix:
            from .plots import render_profile
            results["amplitude"]["figure"] = render_profile(
                prof.xs, prof.log_amp,
                prefix.with_name(prefix.name + "-amplitude.png"), "log amplitude")
    _emit(report_envelope(cfg, results, {"nodes": sha256_of(args.nodes)}), args.out)
    return 0


def _trig_record(trial) -> dict:
    sup_q, int_q = trig_lebesgue_quantities(trial.poly)
    lead = trial.poly.leading_magnitude()
    l1 = l1_norm(trial.poly)
    rc = recip_deriv_sum(trial.poly)
    ok = (sup_q >= 2.0 - 1e-6 and int_q >= 8.0 - 1e-6
          and l1 >= 4.0 * lead - 1e-6 and rc >= 2.0 / lead - 1e-6)
    return {"seed": trial.index, "degree": trial.degree, "sup": sup_q,
            "integral": int_q, "l1_ratio": l1 / (4.0 * lead),
            "recip_ratio": rc * lead / 2.0, "pass": bool(ok)}


def cmd_trig_verify(args) -> int:
    cfg = _config_for(args, "trig-verify")
    trials = trial_battery(args.trials, args.max_degree, args.seed)
    workers = resolve_workers(cfg.workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_trig_record, trials))
    else:
        records = [_trig_record(t) for t in trials]
    ok = all(r["pass"] for r in records)
    results = {"trials": records, "all_pass": ok}
    if args.plot:
        from .plots import render_trig_trials
        png = str(Path(args.out or "trig-verify.json").with_suffix(".png"))
        results["figure"] = render_trig_trials(records, png)
    _emit(report_envelope(cfg, results), args.out)
    return 0 if ok else CHECK_FAILED


def cmd_bernstein(args) -> int:
    cfg = _config_for(args, "bernstein")
    rows = []
    if args.trials > 0:
        for t in trial_battery(args.trials, args.max_degree, args.seed):
            rep = global_bernstein_report(t.poly)
            for row in rep.rows():
                rows.append({"name": f"global[{t.index}].{row['name']}", **row})
    for n in args.rescaled_n:
        ns = chebyshev_nodes(n)
        q = unit_rescaled_poly(ns, 0.0, arcsine_density(0.0))
        rep = local_bernstein_report(q, Rect(-args.half_width, args.half_width,
                                             args.height), 0.0,
                                     c1=args.c1, c2=args.c2)
        for row in rep.rows():
            rows.append({"name": f"rescaled[{n}].{row['name']}", **row})
    ok = all(r["pass"] for r in rows)
    _emit(report_envelope(cfg, {"checks": rows, "all_pass": ok}), args.out)
    return 0 if ok else CHECK_FAILED


def cmd_residue_check(args) -> int:
    cfg = _config_for(args, "residue-check")
    from .acceptance import AcceptanceLab
    lo, hi = -1.0 - 1.0j, 1.0 + 1.0j
    rows = []
    ok = True
    for name, f, w in AcceptanceLab._residue_battery():
        res = weighted_residue_check(f, w, lo, hi,
                                     points_per_edge=args.points_per_edge,
                                     area_grid=args.area_grid)
        good = res.residual <= args.tolerance
        ok &= good
        rows.append({"name": name, "pass": bool(good), **res.to_dict()})
    _emit(report_envelope(cfg, {"checks": rows, "tolerance": args.tolerance,
                                "all_pass": ok}), args.out)
    return 0 if ok else CHECK_FAILED


def cmd_harmonic(args) -> int:
    cfg = _config_for(args, "harmonic")
    rep = harmonic_side_mass((-args.half_width, args.half_width), args.y0,
                             args.x0, args.eta, series_order=args.order,
                             dominance_grid=args.grid)
    _, dom_rows = poisson_dominance_check((-args.half_width, args.half_width),
                                          args.y0, args.x0, args.eta, args.grid)
    results = {"report": rep.to_dict(), "poisson_dominance": dom_rows}
    if args.plot:
        from .plots import render_harmonic
        png = str(Path(args.out or "harmonic.json").with_suffix(".png"))
        results["figure"] = render_harmonic(rep.to_dict(), png)
    _emit(report_envelope(cfg, results), args.out)
    return 0 if rep.all_pass else CHECK_FAILED


def cmd_optimize(args) -> int:
    cfg = _config_for(args, "optimize")
    if args.start == "chebyshev":
        start = chebyshev_nodes(args.n)
    elif args.start == "equispaced":
        start = equispaced_nodes(args.n)
    else:
        start = _load_nodes(args.start)
    res = optimize_nodes(start, tuple(args.interval), args.objective,
                         iterations=args.iterations, seed=args.seed)
    floor = 1.0 if args.objective == "sup" else args.interval[1] - args.interval[0]
    sane = res.best_value >= floor and res.best_value <= res.initial_value
    results = res.to_dict()
    results["sanity_pass"] = bool(sane)
    if args.plot:
        from .plots import render_trace
        png = str(Path(args.out or "optimize.json").with_suffix(".png"))
        results["figure"] = render_trace(res.trace, png)
    _emit(report_envelope(cfg, results), args.out)
    return 0 if sane else CHECK_FAILED


def cmd_verify_all(args) -> int:
    cfg = _config_for(args, "verify-all")
    results = run_acceptance(cfg.tolerances or None, only=args.only)
    rows = summary_rows(results)
    ok = all(c.passed for c in results)
    for c in results:
        print(c.summary_line())
    payload = report_envelope(cfg, {"summary": rows, "all_pass": ok})
    if args.out:
        write_json(args.out, payload)
    return 0 if ok else CHECK_FAILED


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="interplab",
        description="Lebesgue constants, log-potential diagnostics, and "
                    "Bernstein-type inequality checks")
    p.add_argument("--version", action="version", version=f"interplab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--out", default="", help="write the JSON report here")
        sp.add_argument("--config", default="", help="RunConfig JSON file")
        sp.add_argument("--workers", type=int, default=0)
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("nodes", help="generate or transform node systems")
    sp.add_argument("--kind", required=True,
                    choices=("chebyshev", "equispaced", "random", "perturbed"))
    sp.add_argument("--n", type=int, default=16)
    sp.add_argument("--magnitude", type=float, default=0.0)
    sp.add_argument("--base", default="", help="base node set for --kind perturbed")
    common(sp)
    sp.set_defaults(fn=cmd_nodes)

    sp = sub.add_parser("lebesgue", help="sup/integral of the Lebesgue function")
    sp.add_argument("--nodes", required=True)
    sp.add_argument("--interval", type=float, nargs=2, default=(-1.0, 1.0))
    sp.add_argument("--mode", choices=("sup", "integral", "both"), default="both")
    sp.add_argument("--grid-per-gap", type=int, default=32)
    sp.add_argument("--quad-order", type=int, default=16)
    sp.add_argument("--csv", default="", help="dump an x,lambda grid here")
    sp.add_argument("--dump-points", type=int, default=2001)
    sp.add_argument("--plot", action="store_true")
    common(sp, seed=False)
    sp.set_defaults(fn=cmd_lebesgue)

    sp = sub.add_parser("potential", help="density and amplitude diagnostics")
    sp.add_argument("--nodes", required=True)
    sp.add_argument("--interval", type=float, nargs=2, default=(-0.9, 0.9))
    sp.add_argument("--what", choices=("density", "amplitude", "both"),
                    default="both")
    sp.add_argument("--points", type=int, default=257)
    sp.add_argument("--eta", type=float, default=0.0,
                    help="smoothing ordinate (default 5 log(n)/n)")
    sp.add_argument("--grid-step", type=float, default=0.0)
    sp.add_argument("--beta", type=float, default=0.1)
    sp.add_argument("--csv-prefix", default="")
    sp.add_argument("--plot", action="store_true")
    common(sp, seed=False)
    sp.set_defaults(fn=cmd_potential)

    sp = sub.add_parser("trig-verify", help="sup/integral/factor bound battery")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--max-degree", type=int, default=10)
    sp.add_argument("--plot", action="store_true")
    common(sp)
    sp.set_defaults(fn=cmd_trig_verify)

    sp = sub.add_parser("bernstein", help="global and local inequality checks")
    sp.add_argument("--trials", type=int, default=25)
    sp.add_argument("--max-degree", type=int, default=10)
    sp.add_argument("--rescaled-n", type=int, nargs="*", default=(500,))
    sp.add_argument("--half-width", type=float, default=20.0)
    sp.add_argument("--height", type=float, default=2.0)
    sp.add_argument("--c1", type=float, default=10.0)
    sp.add_argument("--c2", type=float, default=10.0)
    common(sp)
    sp.set_defaults(fn=cmd_bernstein)

    sp = sub.add_parser("residue-check", help="weighted residue identity battery")
    sp.add_argument("--points-per-edge", type=int, default=64)
    sp.add_argument("--area-grid", type=int, default=512)
    sp.add_argument("--tolerance", type=float, default=1e-6)
    common(sp, seed=False)
    sp.set_defaults(fn=cmd_residue_check)

    sp = sub.add_parser("harmonic", help="harmonic-measure masses on a rectangle")
    sp.add_argument("--half-width", type=float, default=5.0)
    sp.add_argument("--y0", type=float, default=1.0)
    sp.add_argument("--x0", type=float, default=0.0)
    sp.add_argument("--eta", type=float, default=0.5)
    sp.add_argument("--order", type=int, default=64)
    sp.add_argument("--grid", type=int, default=8)
    sp.add_argument("--plot", action="store_true")
    common(sp, seed=False)
    sp.set_defaults(fn=cmd_harmonic)

    sp = sub.add_parser("optimize", help="coordinate-descent node placement")
    sp.add_argument("--n", type=int, default=12)
    sp.add_argument("--start", default="chebyshev",
                    help="chebyshev, equispaced, or a node-set JSON path")
    sp.add_argument("--objective", choices=("sup", "integral"), default="sup")
    sp.add_argument("--interval", type=float, nargs=2, default=(-1.0, 1.0))
    sp.add_argument("--iterations", type=int, default=40)
    sp.add_argument("--plot", action="store_true")
    common(sp)
    sp.set_defaults(fn=cmd_optimize)

    sp = sub.add_parser("verify-all", help="run the acceptance criteria")
    sp.add_argument("--only", default="", help="substring filter on criterion titles")
    common(sp, seed=False)
    sp.set_defaults(fn=cmd_verify_all)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigError as exc:
        return _usage(str(exc))
    except (OSError, json.JSONDecodeError) as exc:
        return _usage(str(exc))


if __name__ == "__main__":
    sys.exit(main())
