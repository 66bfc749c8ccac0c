"""Command line front end.

``universal-series run CONFIG [-o REPORT]`` builds the series and writes a JSON
report; ``universal-series verify REPORT CONFIG`` re-checks every job on a
denser, shifted grid. Exit status: 0 success, 1 job or verification failure,
2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

from . import __version__, mp
from .config import RunConfig, load_config
from .constructor import InvariantViolation, build, verify_job
from .errors import ConfigError, JobFailed, UniversalSeriesError
from .report import build_report, coefficients_from_json, read_report, write_report

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2
VERIFY_FACTOR = 1.5
VERIFY_FLOOR = 1e-14
DEFAULT_CERT_DENSITY = 64


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _dump_rows(job_index, grid, err, rows):
    for p, v in zip(grid.points, err):
        rows.append([job_index] + [f"{x:.17g}" for z in p for x in (z.real, z.imag)] + [f"{v:.17g}"])


def _write_dump(path, cfg: RunConfig, rows):
    header = ["job"]
    for name, n in (("w", cfg.parameters), ("z", cfg.dimension)):
        for i in range(n):
            header += [f"{name}{i}_re", f"{name}{i}_im"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header + ["abs_error"])
        w.writerows(rows)


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.max_points is not None:
        cfg.max_points = args.max_points
    out = Path(args.output) if args.output else Path(args.config).with_suffix(".report.json")
    t0 = time.perf_counter()
    with mp.working_precision(cfg.precision_bits):
        try:
            result = build(cfg.jobs, cfg.enumeration, cfg.transform, cfg.mu, r=cfg.parameters,
                           options=cfg.construct_options(check_invariants=args.seed_check))
        except InvariantViolation as exc:
            _say(f"invariant violated: {exc}")
            return EXIT_FAILED
        except JobFailed as exc:
            _say(f"job {exc.job_index} failed: {exc}")
            return EXIT_FAILED
        lams = result.lambdas
        if args.seed_check and any(x >= y for x, y in zip(lams, lams[1:])):
            _say(f"invariant violated: lambda sequence {lams} is not strictly increasing")
            return EXIT_FAILED
        timings = {"total_seconds": time.perf_counter() - t0,
                   "per_job_seconds": [r.seconds for r in result.records]}
        write_report(build_report(result, cfg.raw, timings, cfg.precision_bits), out)

        if args.dump_grid:
            rows = []
            for job, rec in zip(cfg.jobs, result.records):
                if rec.ok:
                    verify_job(result.coefficients, job, cfg.enumeration, cfg.transform,
                               rec.lambda_, cfg.dump_density, offset=0.25,
                               max_points=cfg.max_points,
                               dump=lambda g, err, i=rec.job_index: _dump_rows(i, g, err, rows))
            _write_dump(args.dump_grid, cfg, rows)

    for rec in result.records:
        if rec.ok:
            print(f"job {rec.job_index}: certified {rec.certified_error:.3e} at lambda={rec.lambda_} "
                  f"(degrees {tuple(rec.degrees)}, {rec.seconds:.2f}s)")
        else:
            print(f"job {rec.job_index}: {rec.status}: {rec.message}")
    if args.seed_check:
        print("seed-check: immutability, padding nullity and lambda membership hold")
    print(f"report written to {out}")
    return EXIT_OK if result.all_certified else EXIT_FAILED


def cmd_verify(args) -> int:
    report = read_report(args.report)
    cfg = load_config(args.config)
    bits = int(report.get("precision_bits", cfg.precision_bits))
    recs = {}
    for j in report["jobs"]:
        recs.setdefault(int(j.get("index", -1)), []).append(j)
    bad = []
    with mp.working_precision(bits):
        a = coefficients_from_json(report.get("coefficients", []), cfg.parameters, bits)
        for i, job in enumerate(cfg.jobs):
            entries = recs.get(i, [])
            if len(entries) != 1:
                _say(f"job {i}: appears {len(entries)} times in the report")
                bad.append(i)
                continue
            rec = entries[0]
            if rec.get("status", "certified") != "certified" or rec.get("lambda") is None:
                _say(f"job {i}: not certified in the report")
                bad.append(i)
                continue
            density = rec.get("cert_density") or [DEFAULT_CERT_DENSITY] * (cfg.parameters + cfg.dimension)
            density = [cfg.verify_multiplier * int(c) for c in density]
            recorded = float(rec.get("certified_error", 0.0))
            got = verify_job(a, job, cfg.enumeration, cfg.transform, int(rec["lambda"]), density,
                             offset=0.25, max_points=args.max_points or cfg.max_points)
            ok = got <= VERIFY_FACTOR * recorded + VERIFY_FLOOR
            print(f"job {i}: recorded {recorded:.3e}, recomputed {got:.3e}: {'ok' if ok else 'MISMATCH'}")
            if not ok:
                bad.append(i)
    extra = sorted(set(recs) - set(range(len(cfg.jobs))))
    if extra:
        _say(f"report lists unknown job indices {extra}")
        bad.extend(extra)
    if bad:
        _say(f"verification failed for jobs {sorted(set(bad))}")
        return EXIT_FAILED
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="universal-series",
                                description="Construct universal power series with certified partial sums.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="build a series from a JSON config")
    run.add_argument("config")
    run.add_argument("-o", "--output", help="report path (default: CONFIG with .report.json)")
    run.add_argument("--dump-grid", metavar="PATH", help="write |S_lambda - h| per grid point as CSV")
    run.add_argument("--seed-check", action="store_true", help="assert construction invariants at runtime")
    run.add_argument("--max-points", type=int, help="cap on sample grid size")
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="re-check a report against its config")
    ver.add_argument("report")
    ver.add_argument("config")
    ver.add_argument("--max-points", type=int, help="cap on sample grid size")
    ver.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _say(f"config error: {exc}")
        return EXIT_CONFIG
    except OSError as exc:
        _say(f"error: {exc}")
        return EXIT_CONFIG
    except UniversalSeriesError as exc:
        _say(f"error: {exc}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
