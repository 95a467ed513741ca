"""Command line experiment runner.

Subcommands: `codes list|certify|search`, `circuit dump`, `dem dump`,
`sweep`, `tune`, `fit`, and `run` (JSON-config pipeline). Sweep results go
to a CSV with one self-describing row per (code, p) point; `fit` consumes
the same CSV.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import circuit as circuit_mod
from . import codes as codes_mod
from . import dem as dem_mod
from . import noise as noise_mod
from . import protocols, registry
from .accel import set_jobs
from .decoder import DecoderConfig

DEFAULT_SEED = 20240808
DEFAULT_P = 5e-4
DEFAULT_TAU_M = 30.0
DEFAULT_GAMMA = 0.9

log = logging.getLogger("ionqec")


def _family_of(name: str) -> str:
    return registry.get_entry(name).family


def _build_code(name: str):
    try:
        return registry.build(name)
    except KeyError as exc:
        raise SystemExit(f"error: {exc}\navailable codes:\n  " + "\n  ".join(registry.names()))


def _add_common(sub):
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--jobs", type=int, default=int(os.environ.get("IONQEC_JOBS", "1")),
                     help="worker cap (IONQEC_JOBS)")


def cmd_codes(args) -> int:
    if args.action == "list":
        for e in registry.entries():
            print(f"{e.name:16s} [[{e.n},{e.k},{e.d}]]  family={e.family}  tuned n_a={e.n_a}")
        return 0
    if args.action == "certify":
        code = _build_code(args.name)
        code = codes_mod.certify_distance(code, w_max=args.w_max)
        print(f"[[{code.n},{code.k},{code.d}]]")
        return 0
    res = codes_mod.search_codes(args.family, args.n, args.k, args.d_floor,
                                 stop_after=args.stop_after,
                                 max_candidates=args.max_candidates)
    status = "complete" if res.complete else "INCOMPLETE (limit hit)"
    print(f"# examined {res.candidates} candidates; {status}")
    for spec, n, k, d in res.hits:
        print(f"[[{n},{k},{d}]] {spec}")
    return 0


def cmd_circuit_dump(args) -> int:
    code = _build_code(args.name)
    rounds = code.d if args.rounds == "d" else int(args.rounds)
    circ = circuit_mod.build_memory_experiment(
        code, args.basis, rounds, args.na, batch_prep=args.batch_prep,
        z_first=args.z_first)
    sys.stdout.write(circuit_mod.to_text(circ))
    return 0


def cmd_dem_dump(args) -> int:
    code = _build_code(args.name)
    rounds = code.d if args.rounds == "d" else int(args.rounds)
    circ = circuit_mod.build_memory_experiment(code, args.basis, rounds, args.na)
    locs = noise_mod.annotate(circ, noise_mod.NoiseParams(args.p, args.tau_m))
    if args.locations:
        sys.stdout.write(noise_mod.location_dump(locs))
        return 0
    sys.stdout.write(dem_mod.compile_dem(circ, locs).to_text())
    return 0


def _run_points(code_name: str, p_values, tau_m, n_a_setting, rounds_setting,
                gamma, target_rel_err, shot_cap, seed, decoder_config) -> list:
    code = _build_code(code_name)
    family = _family_of(code_name)
    rows = []
    if n_a_setting == "tune":
        n_a = protocols.tune_ancillas(
            code, p_values[0], tau_m, gamma, seed=seed,
            target_rel_err=target_rel_err, shot_cap=shot_cap,
            decoder_config=decoder_config)
        log.info("tuned n_a=%d for %s", n_a, code_name)
    elif n_a_setting == "registry":
        n_a = registry.tuned_ancillas(code_name)
    else:
        n_a = int(n_a_setting)
    rounds = code.d if rounds_setting == "d" else int(rounds_setting)
    for p in p_values:
        est = protocols.estimate_ler(
            code, p, tau_m, n_a, rounds=rounds, target_rel_err=target_rel_err,
            shot_cap=shot_cap, seed=seed, decoder_config=decoder_config)
        rows.append(protocols.sweep_row(code_name, family, code, p, tau_m,
                                        n_a, rounds, est, seed))
        log.info("%s p=%g -> p_l=%.3e (+-%.0f%%)", code_name, p, est.p_l,
                 100 * est.stderr_rel if est.p_l else 0.0)
    return rows


def _write_rows(rows, out_path: str, append: bool) -> None:
    if append and os.path.exists(out_path):
        with open(out_path, "a") as f:
            f.write(protocols.rows_to_csv(rows, header=False))
    else:
        with open(out_path, "w") as f:
            f.write(protocols.rows_to_csv(rows, header=True))


def cmd_sweep(args) -> int:
    set_jobs(args.jobs)
    rows = _run_points(
        args.code, [float(x) for x in args.p.split(",")], args.tau_m, args.na,
        args.rounds, args.gamma, args.target_rel_err, args.shot_cap, args.seed,
        _decoder_config_from(args))
    _write_rows(rows, args.out, args.append)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_tune(args) -> int:
    set_jobs(args.jobs)
    code = _build_code(args.code)
    history: list = []
    n_a = protocols.tune_ancillas(
        code, args.p, args.tau_m, args.gamma, seed=args.seed,
        target_rel_err=args.target_rel_err, shot_cap=args.shot_cap,
        history=history, decoder_config=_decoder_config_from(args))
    for na_i, est in history:
        print(f"n_a={na_i}: p_l={est.p_l:.4e} rel_err={est.stderr_rel:.3f} "
              f"shots/basis={est.shots_x}")
    print(f"chosen n_a={n_a}")
    return 0


def cmd_fit(args) -> int:
    rows = protocols.read_csv(args.csv)
    if args.codes:
        names = args.codes.split(",")
        rows = [r for r in rows if r.code in names]
    if args.model == "surface_threshold":
        pts = [(r.p, r.p_l, r.d) for r in rows]
        fit = protocols.fit_curve(pts, "surface_threshold")
        c, p_th = fit.constants
        print(f"model=surface_threshold c={c:.6g} p_th={p_th:.6g} "
              f"residual={fit.residual:.3e} points={len(pts)}")
        return 0
    by_code: dict[str, list] = {}
    for r in rows:
        by_code.setdefault(r.code, []).append(r)
    for name, rs in sorted(by_code.items()):
        pts = [(r.p, r.p_l, r.d) for r in rs]
        fit = protocols.fit_curve(pts, "poly_exp")
        c0, c1, c2 = fit.constants
        print(f"model=poly_exp code={name} c0={c0:.6g} c1={c1:.6g} c2={c2:.6g} "
              f"residual={fit.residual:.3e} points={len(pts)}")
    return 0


def _decoder_config_from(args) -> DecoderConfig:
    return DecoderConfig(
        max_bp_iters=args.max_bp_iters, ms_scaling=args.ms_scaling,
        osd_order=args.osd_order, osd_method=args.osd_method,
        schedule=args.schedule)


def _add_decoder_args(sub):
    d = DecoderConfig()
    sub.add_argument("--max-bp-iters", type=int, default=d.max_bp_iters)
    sub.add_argument("--ms-scaling", type=float, default=d.ms_scaling)
    sub.add_argument("--osd-order", type=int, default=d.osd_order)
    sub.add_argument("--osd-method", default=d.osd_method,
                     choices=["osd_cs", "osd_0", "none"])
    sub.add_argument("--schedule", default=d.schedule,
                     choices=["serial", "parallel"])


def cmd_run(args) -> int:
    try:
        with open(args.config) as f:
            cfg = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        code_name = cfg["code"]
        p_values = [float(x) for x in cfg["p"]]
        if not p_values or any(not 0 <= x <= 1 for x in p_values):
            raise ValueError("p values must lie in [0, 1]")
        tau_m = float(cfg.get("tau_m", DEFAULT_TAU_M))
        n_a = cfg.get("n_a", "registry")
        rounds = cfg.get("rounds", "d")
        gamma = float(cfg.get("gamma", DEFAULT_GAMMA))
        target = float(cfg.get("target_rel_err", protocols.DEFAULT_TARGET_REL_ERR))
        shot_cap = int(cfg.get("shot_cap", protocols.DEFAULT_SHOT_CAP))
        seed = int(cfg.get("seed", DEFAULT_SEED))
        out = cfg.get("output", "results.csv")
        dc_raw = cfg.get("decoder", {})
        decoder_config = DecoderConfig(**dc_raw)
        registry.get_entry(code_name)
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return 2
    set_jobs(args.jobs)
    rows = _run_points(code_name, p_values, tau_m, n_a, rounds, gamma, target,
                       shot_cap, seed, decoder_config)
    _write_rows(rows, out, bool(cfg.get("append", False)))
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ionqec",
                                 description="ion chain QEC simulation toolkit")
    ap.add_argument("-v", "--verbose", action="store_true")
    sp = ap.add_subparsers(dest="cmd", required=True)

    codes_p = sp.add_parser("codes", help="registry operations")
    codes_sp = codes_p.add_subparsers(dest="action", required=True)
    codes_sp.add_parser("list")
    cert = codes_sp.add_parser("certify")
    cert.add_argument("name")
    cert.add_argument("--w-max", type=int, default=None)
    search = codes_sp.add_parser("search")
    search.add_argument("family", choices=["bb5", "bb6"])
    search.add_argument("--n", type=int, required=True)
    search.add_argument("--k", type=int, required=True)
    search.add_argument("--d-floor", type=int, required=True)
    search.add_argument("--stop-after", type=int, default=None)
    search.add_argument("--max-candidates", type=int, default=None)
    codes_p.set_defaults(func=cmd_codes)

    circ_p = sp.add_parser("circuit", help="circuit tools")
    circ_sp = circ_p.add_subparsers(dest="action", required=True)
    cdump = circ_sp.add_parser("dump")
    cdump.add_argument("name")
    cdump.add_argument("--basis", choices=["X", "Z"], required=True)
    cdump.add_argument("--rounds", default="d")
    cdump.add_argument("--na", type=int, required=True)
    cdump.add_argument("--batch-prep", action="store_true")
    cdump.add_argument("--z-first", action="store_true")
    circ_p.set_defaults(func=cmd_circuit_dump)

    dem_p = sp.add_parser("dem", help="detector error model tools")
    dem_sp = dem_p.add_subparsers(dest="action", required=True)
    ddump = dem_sp.add_parser("dump")
    ddump.add_argument("name")
    ddump.add_argument("--basis", choices=["X", "Z"], required=True)
    ddump.add_argument("--rounds", default="d")
    ddump.add_argument("--na", type=int, required=True)
    ddump.add_argument("--p", type=float, default=DEFAULT_P)
    ddump.add_argument("--tau-m", type=float, default=DEFAULT_TAU_M)
    ddump.add_argument("--locations", action="store_true",
                       help="dump fault locations instead of the compiled DEM")
    dem_p.set_defaults(func=cmd_dem_dump)

    sweep = sp.add_parser("sweep", help="estimate p_l over a list of p values")
    sweep.add_argument("--code", required=True)
    sweep.add_argument("--p", required=True, help="comma-separated p values")
    sweep.add_argument("--tau-m", type=float, default=DEFAULT_TAU_M)
    sweep.add_argument("--na", default="registry",
                       help="ancilla count, 'registry', or 'tune'")
    sweep.add_argument("--rounds", default="d")
    sweep.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    sweep.add_argument("--target-rel-err", type=float,
                       default=protocols.DEFAULT_TARGET_REL_ERR)
    sweep.add_argument("--shot-cap", type=int, default=protocols.DEFAULT_SHOT_CAP)
    sweep.add_argument("--out", default="results.csv")
    sweep.add_argument("--append", action="store_true")
    _add_common(sweep)
    _add_decoder_args(sweep)
    sweep.set_defaults(func=cmd_sweep)

    tune = sp.add_parser("tune", help="run the ancilla tuning protocol")
    tune.add_argument("--code", required=True)
    tune.add_argument("--p", type=float, default=DEFAULT_P)
    tune.add_argument("--tau-m", type=float, default=DEFAULT_TAU_M)
    tune.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    tune.add_argument("--target-rel-err", type=float,
                      default=protocols.DEFAULT_TARGET_REL_ERR)
    tune.add_argument("--shot-cap", type=int, default=protocols.DEFAULT_SHOT_CAP)
    _add_common(tune)
    _add_decoder_args(tune)
    tune.set_defaults(func=cmd_tune)

    fit = sp.add_parser("fit", help="fit logical-error-rate curves from a CSV")
    fit.add_argument("csv")
    fit.add_argument("--model", required=True,
                     choices=["surface_threshold", "poly_exp"])
    fit.add_argument("--codes", default=None, help="restrict to these codes")
    fit.set_defaults(func=cmd_fit)

    run = sp.add_parser("run", help="run a JSON experiment config")
    run.add_argument("config")
    _add_common(run)
    run.set_defaults(func=cmd_run)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
