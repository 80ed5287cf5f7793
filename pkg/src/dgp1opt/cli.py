"""Command-line front end.

Reports go to stdout (JSON by default, CSV with ``--format csv``),
diagnostics to stderr.  ``solve`` exits 0 when feasible, 1 when infeasible
and 2 on any error.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time
from dataclasses import asdict

from . import bp, instance, mvm, optics
from .errors import DGPError

SCHEMA = "dgp1-report/1"
METHODS = ("bp", "mvm", "optics")

EXIT_FEASIBLE, EXIT_INFEASIBLE, EXIT_ERROR = 0, 1, 2


def _instance_dict(inst):
    return {
        "n": inst.n,
        "consecutive": list(inst.consecutive),
        "closing": inst.closing,
        "label": inst.label,
    }


def _solution_dict(real):
    return {"row": real.row, "signs": list(real.signs), "positions": list(real.positions)}


def _resolve_eps(value, y):
    if value == "auto":
        return bp.default_eps(y)
    eps = float(value)
    if eps < 0:
        raise ValueError("--eps must be nonnegative")
    return eps


def optical_config(args) -> optics.OpticalConfig:
    gray = None if args.gray_levels == 0 else args.gray_levels
    return optics.OpticalConfig(
        width=args.width,
        height=args.height,
        gray_levels=gray,
        noise_sigma=args.noise_sigma,
        detect_eps=args.detect_eps,
    )


def run(inst, method="mvm", eps=0.0, cfg=None, seed=0, threads=1) -> dict:
    """Solve ``inst`` with one method and build a report dict."""
    aug = instance.augment(inst)
    extras = {}
    t0 = time.perf_counter_ns()
    if method == "bp":
        sols = bp.solve_bp(aug, eps, n_jobs=threads)
        feasible = bool(sols)
    elif method == "mvm":
        rows = mvm.feasible_rows(aug.y, eps, n_jobs=threads)
        sols = [mvm.reconstruct_solution(i, aug) for i in rows]
        feasible = bool(sols)
        extras["rows_scanned"] = 1 << aug.n
    elif method == "optics":
        cfg = cfg or optics.OpticalConfig()
        res = optics.solve_optical(inst, cfg, seed)
        candidates = [mvm.reconstruct_solution(i, aug) for i in res.candidate_rows]
        # a candidate is confirmed when its exact closure error is within eps
        sols = [r for r in candidates if abs(r.positions[-1]) <= eps]
        feasible = res.feasible
        extras.update(
            candidate_rows=res.candidate_rows,
            false_positive_rows=[r.row for r in candidates if abs(r.positions[-1]) > eps],
            frames_used=res.frames_used,
            frame_min_intensity=res.frame_min_intensity,
            detect_eps=res.detect_eps,
            row_error_bound=res.row_error_bound,
            scale=res.scale,
            throughput_mac_s=optics.throughput(cfg),
            config=optics.config_dict(cfg),
        )
    else:
        raise ValueError(f"unknown method {method!r}")
    wall = time.perf_counter_ns() - t0
    return {
        "schema": SCHEMA,
        "instance": _instance_dict(inst),
        "method": method,
        "feasible": feasible,
        "eps": eps,
        "solutions": [_solution_dict(r) for r in sols],
        "timing": {"wall_ns": wall},
        "extras": extras,
    }


def _emit_solutions_csv(report, out):
    w = csv.writer(out)
    w.writerow(["method", "row", "signs", "positions"])
    for s in report["solutions"]:
        w.writerow([
            report["method"],
            s["row"],
            " ".join(str(v) for v in s["signs"]),
            " ".join(repr(v) for v in s["positions"]),
        ])


def cmd_solve(args) -> int:
    inst = instance.load(args.path)
    eps = _resolve_eps(args.eps, instance.augment(inst).y)
    report = run(inst, args.method, eps, optical_config(args), args.seed, args.threads)
    if args.format == "csv":
        _emit_solutions_csv(report, sys.stdout)
    else:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_FEASIBLE if report["feasible"] else EXIT_INFEASIBLE


def cmd_generate(args) -> int:
    gen = instance.generate_feasible if args.feasible else instance.generate_random
    inst = gen(args.n, args.seed, args.dmax)
    text = instance.serialize(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_validate(args) -> int:
    inst = instance.load(args.path)
    json.dump({"valid": True, "n": inst.n, "label": inst.label}, sys.stdout)
    sys.stdout.write("\n")
    return 0


def cmd_simulate(args) -> int:
    """Optics run with the full simulation report and an optional frame dump."""
    inst = instance.load(args.path)
    cfg = optical_config(args)
    res = optics.solve_optical(inst, cfg, args.seed, keep_frames=bool(args.dump_frames))
    if args.dump_frames:
        optics.write_frames_csv(res.frames, args.dump_frames)
    est = optics.estimate(inst.n, cfg)
    doc = {
        "config": optics.config_dict(cfg),
        "n": inst.n,
        "feasible": res.feasible,
        "candidate_rows": res.candidate_rows,
        "frames_used": res.frames_used,
        "frame_min_intensity": res.frame_min_intensity,
        "detect_eps": res.detect_eps,
        "row_error_bound": res.row_error_bound,
        "throughput": asdict(est),
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_FEASIBLE if res.feasible else EXIT_INFEASIBLE


def cmd_sweep(args) -> int:
    """False-positive / false-negative counts over gray levels and noise levels."""
    inst = instance.load(args.path)
    y = instance.augment(inst).y
    exact = set(mvm.feasible_rows(y, _resolve_eps(args.eps, y)))
    rows = []
    for gray in args.gray_list:
        for sigma in args.sigma_list:
            cfg = optics.OpticalConfig(
                width=args.width, height=args.height,
                gray_levels=None if gray == 0 else gray, noise_sigma=sigma,
            )
            res = optics.solve_optical(inst, cfg, args.seed)
            cand = set(res.candidate_rows)
            rows.append({
                "gray_levels": gray, "noise_sigma": sigma, "detect_eps": res.detect_eps,
                "candidates": len(cand), "false_positives": len(cand - exact),
                "false_negatives": len(exact - cand),
            })
    if args.format == "csv":
        w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    else:
        json.dump(rows, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def _parse_range(text):
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(v) for v in text.split(",")]


BENCH_FIELDS = ["n", "method", "repeat", "wall_s", "mean_s", "min_s", "macs", "modeled_optical_s"]


def bench(ns, methods, repeats=3, seed=0, cfg=None, threads=1) -> list[dict]:
    """Time each method on one random instance per ``n``.

    ``macs`` is the ``2**n * n`` multiply-accumulate count of the full sign
    matrix product; ``modeled_optical_s`` divides it by the modeled peak rate.
    """
    cfg = cfg or optics.OpticalConfig()
    rate = optics.throughput(cfg)
    out = []
    for n in ns:
        mvm.check_size(n)
        inst = instance.generate_random(n, seed + n, 1.0)
        for method in methods:
            times = []
            for _ in range(repeats):
                t0 = time.perf_counter()
                run(inst, method, 0.0, cfg, seed, threads)
                times.append(time.perf_counter() - t0)
            macs = (1 << n) * n
            for k, t in enumerate(times):
                out.append({
                    "n": n, "method": method, "repeat": k, "wall_s": t,
                    "mean_s": statistics.fmean(times), "min_s": min(times),
                    "macs": macs, "modeled_optical_s": macs / rate,
                })
    return out


def cmd_bench(args) -> int:
    rows = bench(_parse_range(args.n), args.methods.split(","), args.repeats, args.seed,
                 optical_config(args), args.threads)
    if args.format == "json":
        json.dump(rows, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=BENCH_FIELDS)
        w.writeheader()
        w.writerows(rows)
    return 0


def _add_optics_flags(p):
    p.add_argument("--gray-levels", type=int, default=256, help="0 selects analytic phases")
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--detect-eps", type=float, default=None)
    p.add_argument("--height", type=int, default=1080)
    p.add_argument("--width", type=int, default=1920)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dgp1", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("path")
    p.add_argument("--method", choices=METHODS, default="mvm")
    p.add_argument("--eps", default="0", help="closure tolerance, or 'auto' for 1e-9*max(y)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _add_optics_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="write a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dmax", type=float, default=10.0)
    p.add_argument("--feasible", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="optics simulation report")
    p.add_argument("path")
    p.add_argument("--dump-frames", metavar="CSV")
    _add_optics_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="optics error counts over gray levels and noise")
    p.add_argument("path")
    p.add_argument("--gray-list", type=lambda s: [int(v) for v in s.split(",")], default=[4, 16, 64, 256, 0])
    p.add_argument("--sigma-list", type=lambda s: [float(v) for v in s.split(",")], default=[0.0])
    p.add_argument("--eps", default="0")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _add_optics_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="timing table")
    p.add_argument("--n", default="4..16", help="range a..b or list a,b,c")
    p.add_argument("--methods", default="mvm")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    _add_optics_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DGPError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
