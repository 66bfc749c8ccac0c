"""Run reports: JSON serialization of a construction and its job records.

Coefficients are written as decimal strings long enough to round-trip the
stored binary values exactly, so a report can be re-verified bit for bit.
The ``coefficients`` block depends only on the configuration; timings and
the version stamp live elsewhere in the document.
"""
from __future__ import annotations

import json
from pathlib import Path

from . import __version__, mp
from .constructor import ConstructionResult, JobRecord
from .enumeration import Enumeration
from .errors import ConfigError
from .series import CoefficientSequence, ParamPolynomial

FORMAT = "universal-series-report/1"


def coefficients_to_json(a: CoefficientSequence, e: Enumeration) -> list:
    out = []
    for k, p in a.items():
        out.append({
            "k": k,
            "N_k": list(e.enumerate(k)),
            "terms": [{"w_exponents": list(ew), "re": re, "im": im}
                      for ew, c in sorted(p.terms.items())
                      for re, im in [mp.mpc_to_pair(c)]],
        })
    return out


def coefficients_from_json(block, r: int, bits: int | None = None) -> CoefficientSequence:
    items = {}
    try:
        for entry in block:
            terms = {tuple(t["w_exponents"]): mp.pair_to_mpc((t["re"], t["im"]), bits)
                     for t in entry["terms"]}
            items[int(entry["k"])] = ParamPolynomial(r, terms)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed coefficient entry: {exc}", "coefficients") from None
    return CoefficientSequence(r, items)


def record_to_json(rec: JobRecord) -> dict:
    return {
        "index": rec.job_index,
        "status": rec.status,
        "lambda": rec.lambda_,
        "certified_error": rec.certified_error,
        "i0": rec.i0,
        "l_plus_1": rec.l_plus_1,
        "M": rec.M,
        "degrees": list(rec.degrees),
        "inner_tol": rec.inner_tol,
        "approx_error": rec.approx_error,
        "cert_density": list(rec.cert_per_factor),
        "written": len(rec.written),
        "padded": len(rec.padded),
        "message": rec.message,
    }


def build_report(result: ConstructionResult, raw_config: dict, timings: dict,
                 precision_bits: int) -> dict:
    return {
        "format": FORMAT,
        "version": __version__,
        "config": raw_config,
        "precision_bits": precision_bits,
        "frontier": result.frontier,
        "all_certified": result.all_certified,
        "jobs": [record_to_json(r) for r in result.records],
        "coefficients": coefficients_to_json(result.coefficients, result.enumeration),
        "timings": timings,
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True, allow_nan=False) + "\n"


def write_report(report: dict, path) -> None:
    Path(path).write_text(dumps(report))


def read_report(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(data, dict) or not isinstance(data.get("jobs"), list):
        raise ConfigError("report needs a 'jobs' list", "jobs")
    return data
