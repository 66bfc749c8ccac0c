"""JSON run configuration: parsing and validation with field-level diagnostics.

Example::

    {
      "dimension": 1,
      "parameters": 0,
      "enumeration": {"scheme": "graded-lex"},
      "mu": {"scheme": "arith", "a": 0, "b": 2},
      "transform": {"kind": "identity"},
      "jobs": [
        {"F": [], "T": [{"disc": {"center": [2, 0], "radius": 1}}],
         "target": {"kind": "reciprocal", "index": 0}, "tol": 1e-4}
      ]
    }

Optional keys: ``grid`` (``cert_multiplier``, ``verify_multiplier``,
``dump_density``), ``budget`` (``max_basis``, ``max_points``),
``precision_bits`` and ``on_failure`` (``"abort"`` or ``"continue"``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import mp
from .approx import ApproxOptions
from .compacta import ProductCompact, compact_from_config, excludes_zero
from .constructor import ApproximationJob, ConstructOptions
from .enumeration import Enumeration, MuSet
from .errors import ConfigError, JobRejected
from .targets import target_from_config
from .transforms import SequenceTransform

TOP_KEYS = {"dimension", "parameters", "enumeration", "mu", "transform", "jobs", "grid",
            "budget", "precision_bits", "on_failure"}


@dataclass
class RunConfig:
    dimension: int
    parameters: int
    enumeration: Enumeration
    mu: MuSet
    transform: SequenceTransform
    jobs: list
    cert_multiplier: int = 3
    verify_multiplier: int = 2
    dump_density: int = 256
    max_basis: int = 10_000
    max_points: int = 10**6
    precision_bits: int = mp.DEFAULT_PRECISION
    on_failure: str = "abort"
    raw: dict = field(default_factory=dict, repr=False)

    def construct_options(self, check_invariants: bool = False) -> ConstructOptions:
        approx = ApproxOptions(max_basis=self.max_basis, max_points=self.max_points,
                               cert_multiplier=self.cert_multiplier)
        return ConstructOptions(approx=approx, check_invariants=check_invariants,
                                on_failure=self.on_failure)


def _int(obj, key, default, where, lo=None):
    v = obj.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError("expected an integer", f"{where}{key}")
    if lo is not None and v < lo:
        raise ConfigError(f"must be >= {lo}", f"{where}{key}")
    return v


def _product(spec, where) -> ProductCompact:
    if not isinstance(spec, list):
        raise ConfigError("expected a list of factors", where)
    return ProductCompact(tuple(compact_from_config(f, f"{where}[{i}]") for i, f in enumerate(spec)))


def _job(spec, n, r, d) -> ApproximationJob:
    where = f"jobs[{n}]"
    if not isinstance(spec, dict):
        raise ConfigError("job must be an object", where)
    for key in ("T", "target", "tol"):
        if key not in spec:
            raise ConfigError(f"missing key {key!r}", where)
    F = _product(spec.get("F", []), f"{where}.F")
    T = _product(spec["T"], f"{where}.T")
    if len(F) != r:
        raise ConfigError(f"F has {len(F)} factors, expected parameters={r}", f"{where}.F")
    if len(T) != d:
        raise ConfigError(f"T has {len(T)} factors, expected dimension={d}", f"{where}.T")
    if excludes_zero(T) is None:
        raise ConfigError("no factor of T excludes 0; at least one factor of T must not "
                          "contain the origin", f"{where}.T")
    try:
        tol = float(spec["tol"])
    except (TypeError, ValueError):
        raise ConfigError("tol must be a number", f"{where}.tol") from None
    if not tol > 0:
        raise ConfigError("tol must be positive", f"{where}.tol")
    target = target_from_config(spec["target"], r, d, f"{where}.target")
    if not target.holomorphic_on(F, T):
        raise ConfigError(f"target {target.label} is not holomorphic near F x T",
                          f"{where}.target")
    try:
        return ApproximationJob(F, T, target, tol)
    except JobRejected as exc:
        raise ConfigError(str(exc), where) from None


def parse_config(raw: dict) -> RunConfig:
    """Validate a decoded JSON object and build a :class:`RunConfig`."""
    if not isinstance(raw, dict):
        raise ConfigError("top level must be an object")
    unknown = sorted(set(raw) - TOP_KEYS)
    if unknown:
        raise ConfigError(f"unknown keys {unknown}")
    if "dimension" not in raw:
        raise ConfigError("missing key 'dimension'")
    d = _int(raw, "dimension", None, "", lo=1)
    r = _int(raw, "parameters", 0, "", lo=0)

    en = raw.get("enumeration", {"scheme": "graded-lex"})
    if isinstance(en, str):
        en = {"scheme": en}
    try:
        e = Enumeration(d, en.get("scheme", "graded-lex"),
                        tuple(tuple(m) for m in en.get("prefix", ())))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), "enumeration.prefix") from None

    mu_raw = raw.get("mu", {"scheme": "all"})
    if isinstance(mu_raw, str):
        mu_raw = {"scheme": mu_raw}
    mu = MuSet(mu_raw.get("scheme", "all"), _int(mu_raw, "a", 0, "mu.", lo=0),
               _int(mu_raw, "b", 1, "mu.", lo=1), tuple(mu_raw.get("list", ())))

    tr = raw.get("transform", {"kind": "identity"})
    if isinstance(tr, str):
        tr = {"kind": tr}
    try:
        rows = {int(k): [mp.pair_to_mpc(c) if isinstance(c, list) else float(c) for c in row]
                for k, row in tr.get("rows", {}).items()}
    except (TypeError, ValueError, AttributeError):
        raise ConfigError("rows map k to k+1 numbers or [re, im] pairs", "transform.rows") from None
    b = SequenceTransform(tr.get("kind", "identity"), rows)

    jobs_raw = raw.get("jobs")
    if not isinstance(jobs_raw, list) or not jobs_raw:
        raise ConfigError("need a non-empty list of jobs", "jobs")
    jobs = [_job(j, n, r, d) for n, j in enumerate(jobs_raw)]

    grid = raw.get("grid", {})
    budget = raw.get("budget", {})
    on_failure = raw.get("on_failure", "abort")
    if on_failure not in ("abort", "continue"):
        raise ConfigError("must be 'abort' or 'continue'", "on_failure")
    bits = _int(raw, "precision_bits", mp.DEFAULT_PRECISION, "", lo=53)
    if bits > mp.MAX_PRECISION:
        raise ConfigError(f"must be <= {mp.MAX_PRECISION}", "precision_bits")
    return RunConfig(
        d, r, e, mu, b, jobs,
        cert_multiplier=_int(grid, "cert_multiplier", 3, "grid.", lo=1),
        verify_multiplier=_int(grid, "verify_multiplier", 2, "grid.", lo=1),
        dump_density=_int(grid, "dump_density", 256, "grid.", lo=1),
        max_basis=_int(budget, "max_basis", 10_000, "budget.", lo=1),
        max_points=_int(budget, "max_points", 10**6, "budget.", lo=1),
        precision_bits=bits, on_failure=on_failure, raw=raw)


def load_config(path) -> RunConfig:
    """Read and validate a JSON config file; syntax errors report line and column."""
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    return parse_config(raw)
