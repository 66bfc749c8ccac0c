"""Build one coefficient sequence whose partial sums satisfy a list of jobs.

Each job (F, T, h, tol) is met by the density step:

1. pick a factor i0 of T that avoids 0;
2. l = max_{k <= n0} N_k[i0] over the frozen prefix, l0 = (l + 1) e_{i0};
3. M = sup_T |z^l0|;
4. approximate g = (h - S_n0) / z_{i0}^(l+1) on F x T to within tol / (2 M);
5. write every monomial alpha of the approximant at index k(alpha + l0),
   which is past the frozen prefix, solving the transform row for it;
6. zero-pad (in transform space) up to the next admissible index lambda in mu.

Then |S_lambda - h| <= M |q - g| < tol / 2 on F x T.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .approx import ApproxOptions, approximate_on_product
from .compacta import ProductCompact, excludes_zero, monomial_sup, product_boundary_grid
from .enumeration import Enumeration, MuSet
from .errors import ApproximationFailure, JobFailed, JobRejected, UniversalSeriesError
from .kernels import evaluate_monomials
from .series import (CoefficientSequence, ParamPolynomial, TargetFunction,
                     flatten_partial_sum)
from .transforms import SequenceTransform

PADDING_TOL = 1e-12


@dataclass(frozen=True)
class ApproximationJob:
    """Demand: sup over F x T of |S_lambda - target| < tol."""

    F: ProductCompact
    T: ProductCompact
    target: TargetFunction
    tol: float

    def __post_init__(self):
        if not self.tol > 0:
            raise JobRejected("tolerance must be positive")
        if len(self.T) < 1:
            raise JobRejected("T needs at least one factor")
        if excludes_zero(self.T) is None:
            raise JobRejected("every factor of T contains 0; at least one factor must "
                              "exclude the origin")


@dataclass
class JobRecord:
    job_index: int
    lambda_: int | None = None
    certified_error: float | None = None
    i0: int | None = None
    l_plus_1: int | None = None
    M: float | None = None
    degrees: tuple = ()
    inner_tol: float | None = None
    approx_error: float | None = None
    written: list = field(default_factory=list)
    padded: list = field(default_factory=list)
    cert_per_factor: tuple = ()
    status: str = "pending"
    message: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == "certified"


@dataclass
class ConstructionState:
    a: CoefficientSequence
    frontier: int = -1
    history: list = field(default_factory=list)

    @classmethod
    def empty(cls, r: int) -> "ConstructionState":
        return cls(CoefficientSequence(r))


@dataclass(frozen=True)
class ConstructOptions:
    approx: ApproxOptions = ApproxOptions()
    safety: float = 2.0
    check_invariants: bool = False
    on_failure: str = "abort"  # or "continue"


@dataclass
class ConstructionResult:
    coefficients: CoefficientSequence
    records: list
    enumeration: Enumeration
    transform: SequenceTransform
    mu: MuSet
    frontier: int

    @property
    def lambdas(self) -> list:
        return [r.lambda_ for r in self.records if r.ok]

    @property
    def all_certified(self) -> bool:
        return all(r.ok for r in self.records)


class InvariantViolation(UniversalSeriesError):
    """A runtime invariant check failed."""


def _partial_sum_terms(a, b, e, n):
    return flatten_partial_sum(b.apply_all(a, n), e, a.r) if n >= 0 else ([], None)


def sup_error(a: CoefficientSequence, b: SequenceTransform, e: Enumeration, n: int,
              F: ProductCompact, T: ProductCompact, target, per_factor, offset: float,
              accuracy: float, max_points: int = 10**6, dump=None) -> float:
    """sup |S_n(a) - target| over a product boundary grid of F x T."""
    grid = product_boundary_grid(F * T, per_factor, offset=offset, max_points=max_points,
                                 n_params=len(F))
    coeffs, exps = _partial_sum_terms(a, b, e, n)
    s = evaluate_monomials(coeffs, exps, grid.points, accuracy) if coeffs else 0.0
    err = np.abs(np.asarray(target(grid.w, grid.z), dtype=np.complex128) - s)
    if dump is not None:
        dump(grid, err)
    return float(np.max(err))


def _residual_target(job, a, b, e, frontier, i0, lp1, inner_tol):
    coeffs, exps = _partial_sum_terms(a, b, e, frontier)
    h = job.target

    def evaluator(W, Z):
        zi = Z[:, i0]
        vals = np.asarray(h(W, Z), dtype=np.complex128)
        if coeffs:
            floor = float(np.min(np.abs(zi))) ** lp1
            pts = np.concatenate([W, Z], axis=1)
            vals = vals - evaluate_monomials(coeffs, exps, pts, inner_tol * 1e-3 * floor)
        with np.errstate(over="ignore", invalid="ignore"):
            return vals / zi**lp1 if lp1 else vals

    return TargetFunction(evaluator, h.guard, f"residual[{h.label}]")


def extend_for_job(state: ConstructionState, job: ApproximationJob, e: Enumeration,
                   b: SequenceTransform, mu: MuSet, options: ConstructOptions = ConstructOptions(),
                   job_index: int = 0):
    """One density step; returns ``(new_state, record)``. ``state`` is not modified."""
    t0 = time.perf_counter()
    rec = JobRecord(job_index)
    a, n0 = state.a, state.frontier
    if len(job.T) != e.dimension:
        raise JobRejected(f"T has {len(job.T)} factors, enumeration dimension is {e.dimension}")
    if len(job.F) != a.r:
        raise JobRejected(f"F has {len(job.F)} factors, series has {a.r} parameters")

    i0 = excludes_zero(job.T)
    if i0 is None:
        raise JobRejected("every factor of T contains 0")
    l = max((e.enumerate(k)[i0] for k in range(n0 + 1)), default=-1)
    l0 = tuple(l + 1 if i == i0 else 0 for i in range(e.dimension))
    M = monomial_sup(job.T, l0)
    inner_tol = job.tol / (options.safety * M)
    rec.i0, rec.l_plus_1, rec.M, rec.inner_tol = i0, l + 1, M, inner_tol
    if not inner_tol > 0 or not math.isfinite(M):
        raise JobFailed(f"inner tolerance underflows (M = {M:.3g})", job_index)

    g = _residual_target(job, a, b, e, n0, i0, l + 1, inner_tol)
    try:
        approx = approximate_on_product(job.F, job.T, g, inner_tol, options.approx)
    except ApproximationFailure as exc:
        raise JobFailed(f"approximation failed: {exc}", job_index, exc) from exc
    rec.degrees, rec.approx_error = approx.degree_used, approx.certified_error

    targets = {}
    for alpha, p in approx.polynomial.terms.items():
        k = e.index_of(tuple(x + y for x, y in zip(alpha, l0)))
        if k <= n0:  # cannot happen: alpha + l0 has entry > l at i0
            raise InvariantViolation(f"monomial {alpha} maps to frozen index {k} <= {n0}")
        targets[k] = p
    n_prime = max(targets, default=n0 + 1)
    lam = mu.next(max(n_prime, n0 + 1))
    zero = ParamPolynomial.zero(a.r)
    run = [targets.get(k, zero) for k in range(n0 + 1, lam + 1)]
    solved = b.solve_run(a, n0 + 1, run)
    new_a = a.updated(solved)
    rec.lambda_ = lam
    rec.written = sorted(targets)
    rec.padded = [k for k in range(n0 + 1, lam + 1) if k not in targets]

    if options.check_invariants:
        _check_invariants(a, new_a, n0, rec, b, mu)

    per = tuple(options.approx.cert_multiplier * c for c in approx.per_factor)
    rec.cert_per_factor = per
    rec.certified_error = sup_error(new_a, b, e, lam, job.F, job.T, job.target, per,
                                    offset=0.5, accuracy=job.tol * 1e-3,
                                    max_points=options.approx.max_points)
    rec.seconds = time.perf_counter() - t0
    if not rec.certified_error < job.tol:
        rec.status = "failed"
        rec.message = f"certified error {rec.certified_error:.3g} >= tol {job.tol:.3g}"
        raise JobFailed(rec.message, job_index)
    rec.status = "certified"
    new_state = ConstructionState(new_a, lam, state.history + [rec])
    return new_state, rec


def _check_invariants(old_a, new_a, n0, rec, b, mu):
    for k in range(n0 + 1):
        if old_a[k].terms != new_a[k].terms:
            raise InvariantViolation(f"frozen coefficient {k} changed")
    for k in rec.padded:
        val = b.apply(new_a, k)
        if val.max_abs() >= PADDING_TOL:
            raise InvariantViolation(f"padded index {k} has transform value {val.max_abs():.3g}")
    if rec.lambda_ not in mu:
        raise InvariantViolation(f"lambda {rec.lambda_} not in mu")
    if rec.lambda_ <= n0:
        raise InvariantViolation("lambda did not advance past the frontier")


def build(jobs, e: Enumeration, b: SequenceTransform, mu: MuSet, r: int | None = None,
          options: ConstructOptions = ConstructOptions(), state: ConstructionState | None = None):
    """Fold :func:`extend_for_job` over ``jobs`` in order."""
    jobs = list(jobs)
    if not jobs:
        raise ValueError("need at least one job")
    if state is None:
        state = ConstructionState.empty(len(jobs[0].F) if r is None else r)
    records = []
    for i, job in enumerate(jobs):
        try:
            state, rec = extend_for_job(state, job, e, b, mu, options, job_index=i)
        except (JobFailed, JobRejected, UniversalSeriesError) as exc:
            if options.on_failure != "continue" or isinstance(exc, InvariantViolation):
                if isinstance(exc, JobFailed) and exc.job_index is None:
                    exc.job_index = i
                if not isinstance(exc, JobFailed):
                    raise JobFailed(f"job {i}: {exc}", i, exc) from exc
                raise
            rec = JobRecord(i, status="rejected" if isinstance(exc, JobRejected) else "failed",
                            message=str(exc))
        records.append(rec)
    return ConstructionResult(state.a, records, e, b, mu, state.frontier)


def verify_job(a: CoefficientSequence, job: ApproximationJob, e: Enumeration,
               b: SequenceTransform, lambda_: int, density, offset: float = 0.25,
               max_points: int = 10**6, dump=None) -> float:
    """Recompute sup |S_lambda(a) - target| on a fresh grid (read-only audit)."""
    return sup_error(a, b, e, lambda_, job.F, job.T, job.target, density, offset,
                     accuracy=job.tol * 1e-3, max_points=max_points, dump=dump)
